"""Deterministic regression corpus of Manin and non-Manin matrices.

On disk a corpus is a directory with ``manifest.json`` and one ``.mat``
file per matrix (rows of ``;``-separated expressions, see
:mod:`manincheck.grammar`).
"""

import itertools
import json
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from .grammar import format_matrix, parse_matrix
from .lax import GaudinSpec, YangianSpec, build_gaudin, build_yangian, gaudin_operator, yangian_operator
from .manin import OpMatrix, column_det, is_manin
from .nc_core import presentation_build

DEFAULT_SEED = 42
DEFAULT_COUNTS = {2: (6, 3), 3: (6, 3)}

POSITIVE_FAMILIES = {
    2: ["cartier_foata", "gaudin_minus", "gaudin_plus_t", "mtv", "commutative", "yangian_shift"],
    3: ["cartier_foata", "gaudin_minus", "gaudin_plus_t", "mtv", "commutative", "cartier_foata"],
}


@dataclass
class CorpusEntry:
    name: str
    n: int
    family: str
    manin: bool
    presentation: dict
    zkind: str
    text: str
    order_sensitive: bool = False

    def matrix(self):
        p = self.presentation
        pres = presentation_build(p["kind"], central=tuple(p.get("central", ())), **p["params"])
        return parse_matrix(self.text, pres, self.zkind)


def _pres_dict(pres):
    return {"kind": pres.kind, "central": list(pres.central), "params": dict(pres.params)}


def _small(rng, lo=-2, hi=3):
    v = 0
    while v == 0:
        v = rng.randint(lo, hi)
    return v


def _linear(rng, pres, gens, const=True):
    x = pres.scalar(rng.randint(-2, 2)) if const else pres.zero()
    for g in gens:
        if rng.random() < 0.7:
            x = x + pres.gen(g) * _small(rng)
    if x.is_zero():
        x = pres.gen(rng.choice(gens))
    return x


def _cartier_foata(rng, n):
    pres = presentation_build("weyl", n=n, k=1)
    rows = []
    for i in range(1, n + 1):
        gens = [f"q[{i},1]", f"p[{i},1]"]
        row = []
        for _ in range(n):
            x = _linear(rng, pres, gens)
            if n == 2 and rng.random() < 0.3:
                x = x + pres.gen(gens[0]) * pres.gen(gens[1])
            row.append(x)
        rows.append(row)
    return OpMatrix(rows)


def _gaudin(rng, n, transpose):
    variant = rng.choice(["gl_basic", "standard", "simplest"])
    if variant == "gl_basic":
        spec = GaudinSpec(n, "gl_basic")
    elif variant == "standard":
        spec = GaudinSpec(n, "standard", sites=1, points=[rng.choice([0, 1, Fraction(-1, 2)])])
    else:
        K = [[Fraction(rng.randint(-1, 2)) if i == j else 0 for j in range(n)] for i in range(n)]
        spec = GaudinSpec(n, "simplest", sites=1, points=[rng.choice([0, 1])], K=K)
    L = build_gaudin(spec)
    return gaudin_operator(L, sign=1 if transpose else -1, transpose=transpose)


def _mtv(rng, n):
    if n == 2:
        pres = presentation_build("weyl", n=2, k=1)
        x, y = pres.gen("q[1,1]"), pres.gen("q[2,1]")
        dx, dy = pres.gen("p[1,1]"), pres.gen("p[2,1]")
        r = [_small(rng) for _ in range(2)]
        c = [_small(rng) for _ in range(2)]
        base = [[x, dy], [y, dx]]
        return OpMatrix([[base[i][j] * (r[i] * c[j]) for j in range(2)] for i in range(2)])
    # (k+m)x(k+m) form with k=1, m=n-1: [[z - a, P^t], [Q, dz]]
    m = n - 1
    pres = presentation_build("weyl", n=m, k=1)
    a = rng.choice([0, 1, -1])
    rows = [[(pres.z() - a).as_zkind("diff")] + [pres.gen(f"p[{j},1]").as_zkind("diff") for j in range(1, m + 1)]]
    for i in range(1, m + 1):
        row = [pres.gen(f"q[{i},1]").as_zkind("diff")]
        for j in range(1, m + 1):
            row.append(pres.dz() if i == j else pres.zero("diff"))
        rows.append(row)
    return OpMatrix(rows)


def _commutative(rng, n):
    pres = presentation_build("commutative", base="weyl", n=n, k=1)
    gens = [g.text for g in pres.generators]
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            x = _linear(rng, pres, rng.sample(gens, 2))
            if rng.random() < 0.3:
                x = x * pres.gen(rng.choice(gens))
            row.append(x)
        rows.append(row)
    return OpMatrix(rows)


def _yangian_shift(rng, n):
    T = build_yangian(YangianSpec(n, "xxx_simplest", sites=1, points=[rng.choice([0, 1])]))
    return yangian_operator(T, "T_Sinv")


def _positive(rng, n, family):
    if family == "cartier_foata":
        return _cartier_foata(rng, n)
    if family == "gaudin_minus":
        return _gaudin(rng, n, False)
    if family == "gaudin_plus_t":
        return _gaudin(rng, n, True)
    if family == "mtv":
        return _mtv(rng, n)
    if family == "commutative":
        return _commutative(rng, n)
    if family == "yangian_shift":
        return _yangian_shift(rng, n)
    raise ValueError(family)


def column_order_sensitive(M):
    base = column_det(M)
    for order in itertools.permutations(range(M.rows)):
        if not (column_det(M, order) - base).is_zero():
            return True
    return False


def _negative(rng, n):
    """Random matrix over a single Weyl pair; must be non-Manin and order sensitive."""
    pres = presentation_build("weyl", n=n, k=1)
    gens = ["q[1,1]", "p[1,1]"]
    for _ in range(200):
        M = OpMatrix([[_linear(rng, pres, gens) for _ in range(n)] for _ in range(n)])
        if not is_manin(M).is_manin and column_order_sensitive(M):
            return M
    raise RuntimeError("could not draw a non-Manin matrix")


def generate(seed=DEFAULT_SEED, counts=None):
    """Corpus entries, deterministic in ``seed``; ``counts`` maps n -> (positives, negatives)."""
    counts = DEFAULT_COUNTS if counts is None else counts
    rng = random.Random(seed)
    entries = []
    for n in sorted(counts):
        npos, nneg = counts[n]
        fams = POSITIVE_FAMILIES.get(n, ["cartier_foata", "commutative"])
        for i in range(npos):
            fam = fams[i % len(fams)]
            M = _positive(rng, n, fam)
            rep = is_manin(M)
            if not rep.is_manin:
                raise AssertionError(f"generated {fam} matrix is not Manin: {rep}")
            entries.append(CorpusEntry(f"n{n}_pos{i:02d}_{fam}", n, fam, True,
                                       _pres_dict(M.presentation), M.like().zkind, format_matrix(M)))
        for i in range(nneg):
            M = _negative(rng, n)
            entries.append(CorpusEntry(f"n{n}_neg{i:02d}_random", n, "random", False,
                                       _pres_dict(M.presentation), M.like().zkind, format_matrix(M),
                                       order_sensitive=True))
    return entries


def write(entries, out_dir, seed=None):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"seed": seed, "entries": []}
    for e in entries:
        fname = f"{e.name}.mat"
        (out / fname).write_text(e.text + "\n")
        d = asdict(e)
        del d["text"]
        d["file"] = fname
        manifest["entries"].append(d)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return out / "manifest.json"


def load(path):
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.json"
    try:
        manifest = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read corpus manifest {path}: {exc}") from None
    entries = []
    for d in manifest.get("entries", []):
        d = dict(d)
        text = (path.parent / d.pop("file")).read_text()
        entries.append(CorpusEntry(text=text.strip(), **d))
    return entries


_DEFAULT = None


def default_corpus():
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = generate()
    return _DEFAULT
