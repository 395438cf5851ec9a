"""Registry of named verification suites.

Each suite is a function ``ctx -> CheckReport``.  The context carries the
optional model, truncation order, evaluation points and the corpus.
"""

from __future__ import annotations

import fnmatch
import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import corpus as corpus_mod
from . import identities as idt
from .lax import (
    GaudinSpec,
    YangianSpec,
    build_gaudin,
    build_yangian,
    check_gaudin_relations,
    check_yangian_relations,
    gaudin_operator,
    yangian_operator,
)
from .manin import (
    OpMatrix,
    column_det,
    is_manin,
    permanent_row,
    powers,
    char_poly,
)
from .nc_core import commutator, poles, presentation_build
from .report import CheckReport

DEFAULT_POINTS = (2, 3, 5, 7)


class PoleCollision(ValueError):
    pass


@dataclass
class RunContext:
    model: object = None          # lax.Model or None
    trunc: int = 5
    points: list = None           # explicit user points, or None for defaults
    seed: int = corpus_mod.DEFAULT_SEED
    corpus: list = None

    def __post_init__(self):
        if self.trunc < 1:
            raise ValueError("trunc must be >= 1")
        if self.points is not None:
            self.points = [Fraction(p) for p in self.points]
            if len(self.points) < 2:
                raise ValueError("need at least two evaluation points")

    def entries(self):
        if self.corpus is None:
            if self.seed == corpus_mod.DEFAULT_SEED:
                self.corpus = corpus_mod.default_corpus()
            else:
                self.corpus = corpus_mod.generate(self.seed)
        return self.corpus

    def positives(self):
        return [(e.name, e.matrix()) for e in self.entries() if e.manin]

    def negatives(self):
        return [(e.name, e.matrix()) for e in self.entries() if not e.manin]

    def eval_points(self, family, minimum=3):
        """Points avoiding every pole of the family; explicit points must not collide."""
        bad = set()
        for x in family:
            bad |= poles(x)
        if self.points is not None:
            hit = sorted(p for p in self.points if p in bad)
            if hit:
                raise PoleCollision(f"evaluation point(s) {', '.join(map(str, hit))} hit a pole")
            return list(self.points)
        pts = [Fraction(p) for p in DEFAULT_POINTS if Fraction(p) not in bad]
        cand = Fraction(11)
        while len(pts) < minimum:
            if cand not in bad:
                pts.append(cand)
            cand += 1
        return pts

    def pairs(self, family, count=3):
        """Point pairs for commutator checks; ``count=None`` keeps all of them."""
        out = list(itertools.combinations(self.eval_points(family), 2))
        return out if count is None else out[:count]

    def gaudin_spec(self):
        m = self.model
        return m.spec if m is not None and isinstance(m.spec, GaudinSpec) else None

    def yangian_spec(self):
        m = self.model
        return m.spec if m is not None and isinstance(m.spec, YangianSpec) else None


@dataclass
class Suite:
    name: str
    description: str
    anchor: str
    run: object
    recorded: bool = False
    models: tuple = field(default_factory=tuple)


REGISTRY = {}


def suite(name, description, anchor, recorded=False, models=()):
    def deco(fn):
        REGISTRY[name] = Suite(name, description, anchor, fn, recorded, models)
        return fn
    return deco


def _manin_or_fail(rep, label, M):
    mr = is_manin(M)
    rep.check_true(label, mr.is_manin, f"relation {mr.failed_relation}: {mr.residual}")
    return mr.is_manin


def _model_operator(ctx):
    """Manin operator for the chosen model: dz - L or T(z) S^-1."""
    g, y = ctx.gaudin_spec(), ctx.yangian_spec()
    if g is not None:
        return f"dz - L [{ctx.model.label}]", gaudin_operator(build_gaudin(g))
    if y is not None:
        return f"T S^-1 [{ctx.model.label}]", yangian_operator(build_yangian(y), "T_Sinv")
    return None


# --- Manin foundations ----------------------------------------------------------

def _two_site_cf(n, rng):
    """Two Cartier-Foata matrices over disjoint Weyl sites; their entries commute."""
    W = presentation_build("weyl", n=n, k=2)
    mats = []
    for a in (1, 2):
        rows = []
        for i in range(1, n + 1):
            q, p = W.gen(f"q[{i},{a}]"), W.gen(f"p[{i},{a}]")
            rows.append([q * rng.randint(-2, 2) + p * rng.randint(1, 3) + rng.randint(-1, 1)
                         for _ in range(n)])
        mats.append(OpMatrix(rows))
    return mats


def _const_matrix(n, rng, like):
    while True:
        C = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        M = OpMatrix([[like.one_like() * c for c in row] for row in C])
        d = column_det(M)
        if not d.is_zero():
            return M, d


@suite("manin.elementary", "order independence of det/perm and the elementary properties",
       "determinants and permanents of Manin matrices")
def run_elementary(ctx):
    rep = CheckReport("manin.elementary")
    rng = random.Random(ctx.seed)
    for name, M in ctx.positives():
        n = M.rows
        _manin_or_fail(rep, f"{name} is Manin", M)
        d0, p0 = column_det(M), permanent_row(M)
        for order in itertools.permutations(range(n)):
            rep.check(f"{name} det order {order}", column_det(M, order) - d0)
            rep.check(f"{name} perm row order {order}", permanent_row(M, order) - p0)
            permuted = OpMatrix([[row[j] for j in order] for row in M.entries])
            rep.check(f"{name} perm of column-permuted {order}", permanent_row(permuted) - p0)
        # column swap negates, repeated row/column kills the determinant
        E = [list(row) for row in M.entries]
        sw = OpMatrix([[row[1], row[0]] + row[2:] for row in E])
        rep.check(f"{name} column swap", column_det(sw) + d0)
        rr = OpMatrix([E[0], E[0]] + E[2:])
        rep.check(f"{name} equal rows", column_det(rr))
        cc = OpMatrix([[row[0], row[0]] + row[2:] for row in E])
        rep.check(f"{name} equal columns", column_det(cc))
        for rows in itertools.combinations(range(n), 2):
            for cols in itertools.combinations(range(n), 2):
                _manin_or_fail(rep, f"{name} submatrix {rows}x{cols}", M.submatrix(rows, cols))
        C, dC = _const_matrix(n, rng, M.like())
        MC = M @ C
        _manin_or_fail(rep, f"{name} times constant", MC)
        rep.check(f"{name} det(MC) - det M det C", column_det(MC) - d0 * dC)
        # property 8, tested on samples only
        if is_manin(M.transpose()).is_manin:
            ok = all(commutator(a, b).is_zero()
                     for a in itertools.chain(*M.entries) for b in itertools.chain(*M.entries))
            rep.check_true(f"{name} M and M^t Manin => commuting entries", ok)
        # block-triangular invariance with arbitrary entries
        X = rng.choice(list(itertools.chain(*E))) + rng.randint(-2, 2)
        U = [list(row) for row in OpMatrix.identity(n, M.like()).entries]
        U[0][n - 1] = X
        U = OpMatrix(U)
        rep.check(f"{name} det(M [[1,X],[0,1]]) - det M", column_det(M @ U) - d0)
    varied_det = varied_perm = False
    for name, M in ctx.negatives():
        rep.check_true(f"{name} is not Manin", not is_manin(M).is_manin)
        d0, p0 = column_det(M), permanent_row(M)
        for order in itertools.permutations(range(M.rows)):
            varied_det |= not (column_det(M, order) - d0).is_zero()
            varied_perm |= not (permanent_row(M, order) - p0).is_zero()
    if ctx.negatives():
        rep.check_true("column_det varies with column order on some negative", varied_det)
        rep.check_true("row permanent varies with row order on some negative", varied_perm)
    for n in (2, 3):
        M, N = _two_site_cf(n, rng)
        _manin_or_fail(rep, f"n={n} two-site sum", M + N)
        _manin_or_fail(rep, f"n={n} two-site product", M @ N)
        rep.check(f"n={n} det(MN) - det M det N", column_det(M @ N) - column_det(M) * column_det(N))
    return rep


@suite("cramer", "adjugate(M) M = det(M) Id on all positives and the 2x2 worked example",
       "inverse of a Manin matrix via the adjugate")
def run_cramer(ctx):
    rep = CheckReport("cramer")
    for name, M in ctx.positives():
        idt.cramer_check(M, rep=rep)
    W = presentation_build("weyl", n=2, k=1)
    a, b = W.gen("q[1,1]"), W.gen("p[2,1]")
    c, d = W.gen("q[2,1]"), W.gen("p[1,1]")
    M = OpMatrix([[a, b], [c, d]])
    from .manin import adjugate
    A = adjugate(M)
    want = OpMatrix([[d, -b], [-c, a]])
    idt._check_matrix(rep, "adj [[a,b],[c,d]] - [[d,-b],[-c,a]]", A - want)
    idt.cramer_check(M, rep=rep)
    got = _model_operator(ctx)
    if got is not None:
        idt.cramer_check(got[1], rep=rep)
    return rep


def _gaudin_gl2():
    return gaudin_operator(build_gaudin(GaudinSpec(2, "gl_basic")))


@suite("inverse", "(1 - tN)^-1 is Manin mod t^(trunc+1); det is multiplicative",
       "inverse of a Manin matrix is Manin", models=("gaudin", "yangian"))
def run_inverse(ctx):
    rep = CheckReport("inverse")
    items = [("dz - L gl2", _gaudin_gl2())]
    items += [(n, M) for n, M in ctx.positives() if M.rows == 2][:3]
    got = _model_operator(ctx)
    if got is not None:
        items.append(got)
    for name, N in items:
        sub = idt.inverse_check(N, ctx.trunc)
        rep.merge(sub, f"{name}: ")
    return rep


@suite("schur", "Schur complement determinant formula on 4x4 with 2x2 blocks",
       "block determinant and Schur complements")
def run_schur(ctx):
    rep = CheckReport("schur")
    N = gaudin_operator(build_gaudin(GaudinSpec(4, "gl_basic")))
    idt.schur_check(N, 2, ctx.trunc, rep=rep)
    return rep


@suite("ch", "Cayley-Hamilton with left coefficients on positives and dz - L",
       "Cayley-Hamilton for Manin matrices", models=("gaudin", "yangian"))
def run_ch(ctx):
    rep = CheckReport("ch")
    items = ctx.positives() + [("dz - L gl2", _gaudin_gl2())]
    got = _model_operator(ctx)
    if got is not None:
        items.append(got)
    for name, M in items:
        rep.merge(idt.ch_check(M), f"{name}: ")
    # row variant on M = dz + L, whose transpose is Manin
    rep.merge(idt.ch_check(gaudin_operator(build_gaudin(GaudinSpec(2, "gl_basic")), 1), "row"),
              "dz + L gl2 (row): ")
    # negative control: a non-Manin matrix does not satisfy the identity
    for name, M in ctx.negatives()[:1]:
        h = char_poly(M, check=False)
        rep.expect_nonzero(f"{name}: non-Manin CH",
                           idt._zero_matrix_residual(h.left_substitute(powers(M, M.rows))))
    return rep


@suite("newton", "Newton identities k h_k = sum h_(k+i) Tr M^i, with order-swapped control",
       "Newton identities for Manin matrices", models=("gaudin", "yangian"))
def run_newton(ctx):
    rep = CheckReport("newton")
    items = ctx.positives() + [("dz - L gl2", _gaudin_gl2())]
    got = _model_operator(ctx)
    if got is not None:
        items.append(got)
    for name, M in items:
        rep.merge(idt.newton_check(M), f"{name}: ")
    swapped_fail = None
    for name, M in items:
        if M.presentation.kind != "weyl":
            continue
        for k, r in idt.newton_identities(M, swapped=True).items():
            if not r.is_zero():
                swapped_fail = r
                break
        if swapped_fail is not None:
            break
    rep.expect_nonzero("order-swapped Newton on a Weyl instance",
                       swapped_fail if swapped_fail is not None else items[0][1].like().zero_like())
    return rep


@suite("macmahon", "1/det(1 - tM) = sum_m t^m Tr S^m M up to t^trunc",
       "MacMahon-Wronski relations")
def run_macmahon(ctx):
    rep = CheckReport("macmahon")
    for name, M in ctx.positives():
        rep.merge(idt.macmahon_check(M, ctx.trunc), f"{name}: ")
    return rep


# --- Gaudin ----------------------------------------------------------------------------

def _gaudin_models(ctx):
    g = ctx.gaudin_spec()
    if g is not None:
        return [(ctx.model.label, g)]
    return [("simplest n=2", GaudinSpec(2, "simplest")),
            ("standard n=2 sites=2", GaudinSpec(2, "standard", sites=2)),
            ("gl_basic n=3", GaudinSpec(3, "gl_basic")),
            ("gl_poly n=2 N=2", GaudinSpec(2, "gl_poly", N=2))]


@suite("gaudin.relations", "linear r-matrix relations and the Manin property of dz - L",
       "Gaudin-type Lax matrices", models=("gaudin",))
def run_gaudin_relations(ctx):
    rep = CheckReport("gaudin.relations")
    for label, spec in _gaudin_models(ctx):
        L = build_gaudin(spec)
        for u, v in ctx.pairs(list(itertools.chain(*L.entries))):
            rep.merge(check_gaudin_relations(L, u, v), f"{label}: ")
        _manin_or_fail(rep, f"{label}: dz - L Manin", gaudin_operator(L))
        _manin_or_fail(rep, f"{label}: (dz + L)^t Manin", gaudin_operator(L, 1, True))
        rep.check_true(f"{label}: dz + L itself not Manin (control)",
                       not is_manin(gaudin_operator(L, 1)).is_manin)
    # sum of two element-wise commuting Gaudin matrices (different sites)
    spec = GaudinSpec(2, "standard", sites=2)
    L = build_gaudin(spec)
    pres = L.presentation
    from .exact_arith import RatFun
    parts = [OpMatrix([[pres.gen(f"e[{i},{j};{a}]").scale(RatFun.pole(spec.points[a - 1]))
                        for j in (1, 2)] for i in (1, 2)]) for a in (1, 2)]
    rep.merge(check_gaudin_relations(parts[0] + parts[1], 2, 3), "site sum: ")
    return rep


@suite("gaudin.qh", "commutativity of the quantum characteristic polynomial coefficients QH_i",
       "commutativity of det(dz - L) coefficients", models=("gaudin",))
def run_gaudin_qh(ctx):
    rep = CheckReport("gaudin.qh")
    g = ctx.gaudin_spec()
    models = [(ctx.model.label, g)] if g is not None else [
        ("standard n=2 sites=2", GaudinSpec(2, "standard", sites=2)),
        ("simplest n=2 k=1", GaudinSpec(2, "simplest")),
        ("standard n=3 sites=1", GaudinSpec(3, "standard"))]
    for label, spec in models:
        L = build_gaudin(spec)
        fam = idt.talalaev_qh(L).coefficients
        labels = [f"QH{i}" for i in range(len(fam))]
        idt.commutativity_suite(fam, ctx.pairs(fam, None), labels, rep=rep)
        idt.commutativity_certificate(fam, labels, avoid=spec.poles, rep=rep)
    # raw traces of L^4 and L^2 are not in involution in general
    ctrl = build_gaudin(GaudinSpec(2, "simplest", sites=2))
    idt.raw_power_control(ctrl, [(2, 3), (3, 5)], rep=rep)
    return rep


@suite("gaudin.qpowers", "binomial form of (dz - L)^i and commuting traces of quantum powers",
       "quantum powers of Gaudin matrices", models=("gaudin",))
def run_gaudin_qpowers(ctx):
    rep = CheckReport("gaudin.qpowers")
    g = ctx.gaudin_spec() or GaudinSpec(2, "gl_basic")
    L = build_gaudin(g)
    idt.binomial_check(L, 3, rep=rep)
    fam = list(itertools.chain(*L.entries))
    idt.gaudin_power_commutativity(L, 3, ctx.pairs(fam), rep=rep)
    return rep


@suite("nazarov", "Nazarov elements S_k commute with each other and with QH_p",
       "symmetric-power traces of dz - L", models=("gaudin",))
def run_nazarov(ctx):
    rep = CheckReport("nazarov")
    g = ctx.gaudin_spec() or GaudinSpec(2, "gl_basic")
    L = build_gaudin(g)
    S = idt.nazarov_elements(L, 3)
    rep.check("S_1 - Tr L", S[0] - L.trace())
    qh = idt.talalaev_qh(L).coefficients
    fam = S + qh
    labels = [f"S{k}" for k in range(1, 4)] + [f"QH{i}" for i in range(len(qh))]
    idt.commutativity_suite(fam, ctx.pairs(fam), labels, rep=rep)
    return rep


# --- Yangian -------------------------------------------------------------------------------

def _yangian_models(ctx):
    y = ctx.yangian_spec()
    if y is not None:
        return [(ctx.model.label, y)]
    return [("xxx_simplest n=2", YangianSpec(2, "xxx_simplest")),
            ("xxx_standard n=2", YangianSpec(2, "xxx_standard")),
            ("xxx_simplest n=2 sites=2", YangianSpec(2, "xxx_simplest", sites=2)),
            ("toda n=2", YangianSpec(2, "toda")),
            ("toda n=3", YangianSpec(3, "toda"))]


@suite("yangian.relations", "quadratic relations, T S^-1 and (S T)^t Manin, Toda trace",
       "Yangian-type Lax matrices", models=("yangian",))
def run_yangian_relations(ctx):
    rep = CheckReport("yangian.relations")
    for label, spec in _yangian_models(ctx):
        T = build_yangian(spec)
        fam = list(itertools.chain(*T.entries))
        for u, v in ctx.pairs(fam):
            rep.merge(check_yangian_relations(T, u, v), f"{label}: ")
        for form in ("T_Sinv", "St_transpose", "Sinv_T"):
            _manin_or_fail(rep, f"{label}: {form} Manin", yangian_operator(T, form))
        for c in (1, -2):
            _manin_or_fail(rep, f"{label}: T(z+{c}) S^-1 Manin", yangian_operator(T, "T_Sinv", c))
        rep.check_true(f"{label}: S T not Manin (control)",
                       not is_manin(T.map(lambda x: T.presentation.shift(1) * x)).is_manin)
    if ctx.yangian_spec() is None:
        for n in (2, 3):
            idt.toda_trace_check(n, rep=rep)
    return rep


@suite("yangian.qdet", "qdet shift convention z-k+1 against det_col(T S^-1)",
       "quantum determinant and shifts", models=("yangian",))
def run_yangian_qdet(ctx):
    rep = CheckReport("yangian.qdet")
    y = ctx.yangian_spec()
    models = [(ctx.model.label, y)] if y is not None else [
        ("xxx_simplest n=2", YangianSpec(2, "xxx_simplest")),
        ("xxx_standard n=2", YangianSpec(2, "xxx_standard")),
        ("toda n=2", YangianSpec(2, "toda"))]
    for label, spec in models:
        rep.merge(idt.yangian_qdet_check(build_yangian(spec)), f"{label}: ")
    return rep


@suite("yangian.ch", "Yangian Cayley-Hamilton and the two definitions of T^[p]",
       "Cayley-Hamilton for Yangian matrices", models=("yangian",))
def run_yangian_ch(ctx):
    rep = CheckReport("yangian.ch")
    y = ctx.yangian_spec() or YangianSpec(2, "xxx_simplest")
    T = build_yangian(y)
    rep.merge(idt.yangian_ch_check(T))
    rep.merge(idt.yangian_qpower_check(T, 3))
    return rep


@suite("yangian.newton", "Yangian Newton identities and commuting QH / Tr T^[i]",
       "Newton identities for Yangian matrices", models=("yangian",))
def run_yangian_newton(ctx):
    rep = CheckReport("yangian.newton")
    y = ctx.yangian_spec() or YangianSpec(2, "xxx_simplest")
    T = build_yangian(y)
    n = T.rows
    fam = idt.quantum_powers_yangian(T, n)
    fam = [q.trace() for q in fam[1:]] + idt.talalaev_qh(T, "yangian").coefficients
    idt.yangian_newton_check(T, point_pairs=ctx.pairs(fam), rep=rep)
    return rep


# --- Capelli, conjectures, M-matrix, ER-BT ---------------------------------------------------

@suite("capelli", "Wick(det(lam - Lcl)) = det(dz - Lq) and the block-determinant route",
       "Capelli identity via Manin matrices")
def run_capelli(ctx):
    rep = CheckReport("capelli")
    cases = [((1, 1), None, None), ((2, 1), None, None),
             ((1, 1), [Fraction(1, 2)], [Fraction(-1)]),
             ((2, 1), [1, 2], [3])]
    for (n, k), K1, K2 in cases:
        rep.merge(idt.capelli_check(n, k, K1, K2), f"(n,k)=({n},{k}) K1={K1} K2={K2}: ")
    return rep


@suite("conj.c1", "formal conjugation swaps column and row determinants",
       "conjugation of quantum characteristic polynomials", models=("gaudin", "yangian"))
def run_c1(ctx):
    rep = CheckReport("conj.c1")
    g, y = ctx.gaudin_spec(), ctx.yangian_spec()
    if g is not None:
        idt.conjecture_c1_check(build_gaudin(g), "gaudin", rep=rep)
    elif y is not None:
        idt.conjecture_c1_check(build_yangian(y), "yangian", rep=rep)
    else:
        for spec in (GaudinSpec(2, "gl_basic"), GaudinSpec(2, "standard", sites=2)):
            idt.conjecture_c1_check(build_gaudin(spec), "gaudin", rep=rep)
        for spec in (YangianSpec(2, "xxx_simplest"), YangianSpec(2, "xxx_standard")):
            idt.conjecture_c1_check(build_yangian(spec), "yangian", rep=rep)
    return rep


@suite("conj.c2", "principal-minor formula for det(dz - L) (conjecture, recorded)",
       "explicit form of det(dz - L)", recorded=True, models=("gaudin",))
def run_c2(ctx):
    rep = CheckReport("conj.c2", recorded=True)
    g = ctx.gaudin_spec()
    specs = [g] if g is not None else [GaudinSpec(2, "standard"), GaudinSpec(3, "standard")]
    for spec in specs:
        idt.conjecture_c2_check(build_gaudin(spec), spec.points, rep=rep)
    return rep


@suite("conj.c3", "Wick images of classical traces and integrals (conjecture, recorded)",
       "quantization of classical integrals", recorded=True)
def run_c3(ctx):
    rep = CheckReport("conj.c3", recorded=True)
    for n, k in ((1, 1), (2, 1)):
        rep.merge(idt.conjecture_c3_check(n, k, max_power=2), f"(n,k)=({n},{k}): ")
    return rep


@suite("sv.mmatrix", "separation-of-variables M-matrix is Manin for n=2,3 (recorded)",
       "separation of variables", recorded=True, models=("yangian",))
def run_sv(ctx):
    rep = CheckReport("sv.mmatrix", recorded=True)
    y = ctx.yangian_spec()
    specs = [y] if y is not None else [YangianSpec(2, "xxx_simplest"), YangianSpec(3, "xxx_standard")]
    for spec in specs:
        _, sub = idt.sv_mmatrix(build_yangian(spec))
        rep.merge(sub, f"n={spec.n} {spec.variant}: ")
    return rep


@suite("erbt", "commuting Hamiltonians from a Cartier-Foata bordered matrix",
       "commutativity via Manin inversion")
def run_erbt(ctx):
    rep = CheckReport("erbt")
    trunc = min(ctx.trunc, 4)
    for g in (1, 2):
        rep.merge(idt.erbt_demo(g, trunc=trunc), f"g={g}: ")
    rep.merge(idt.erbt_demo(2, trunc=trunc, mix_rows=True), "g=2 mixed rows: ")
    return rep


# --- running ---------------------------------------------------------------------------------

def list_suites(pattern=None):
    """Registry entries in stable order, optionally filtered by a glob."""
    out = list(REGISTRY.values())
    if pattern:
        out = [s for s in out if fnmatch.fnmatchcase(s.name, pattern)]
    return out


def resolve(names):
    """Expand ``all``, globs and comma lists into registry names; unknown names raise."""
    if isinstance(names, str):
        names = [x.strip() for x in names.split(",") if x.strip()]
    out = []
    for name in names:
        if name == "all":
            hits = list(REGISTRY)
        elif any(ch in name for ch in "*?["):
            hits = [s for s in REGISTRY if fnmatch.fnmatchcase(s, name)]
        else:
            hits = [name] if name in REGISTRY else []
        if not hits:
            raise KeyError(f"unknown suite {name!r}")
        out.extend(h for h in hits if h not in out)
    return out


@dataclass
class SuiteResult:
    suite: str
    status: str
    checks_run: int
    first_failure: str = None
    wall_time: float = 0.0
    outcome: str = "pass"
    notes: list = field(default_factory=list)

    def as_dict(self):
        return {"suite": self.suite, "status": self.status, "checks_run": self.checks_run,
                "first_failure": self.first_failure, "wall_time": round(self.wall_time, 3),
                "outcome": self.outcome}


def run_suite(name, ctx):
    s = REGISTRY[name]
    t0 = time.perf_counter()
    rep = s.run(ctx)
    dt = time.perf_counter() - t0
    rep.timing = dt
    status = "recorded" if s.recorded else rep.status
    return SuiteResult(name, status, rep.checks_run, rep.first_failure(), dt, rep.status,
                       list(rep.notes)), rep
