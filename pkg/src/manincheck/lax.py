"""Gaudin- and Yangian-type Lax matrices and their defining relations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact_arith import RatFun
from .manin import OpMatrix
from .nc_core import commutator, evaluate_z, presentation_build
from .report import CheckReport

GAUDIN_VARIANTS = ("simplest", "standard", "gl_basic", "gl_poly")
YANGIAN_VARIANTS = ("toda", "xxx_simplest", "xxx_standard")


def _default_points(m):
    return [Fraction(i) for i in range(m)]


def _as_matrix(K, n):
    K = [[Fraction(x) for x in row] for row in K]
    if len(K) != n or any(len(r) != n for r in K):
        raise ValueError(f"K must be {n}x{n}")
    return K


@dataclass
class GaudinSpec:
    n: int
    variant: str = "standard"
    sites: int = 1
    points: list = None
    K: list = None
    N: int = 2  # truncation for gl_poly

    def __post_init__(self):
        if self.variant not in GAUDIN_VARIANTS:
            raise ValueError(f"unknown Gaudin variant {self.variant!r}")
        if self.n < 1 or self.sites < 1 or self.N < 1:
            raise ValueError("sizes must be positive")
        if self.variant == "gl_basic":
            self.sites = 1
            self.points = [Fraction(0)]
        if self.points is None:
            self.points = _default_points(self.sites)
        self.points = [Fraction(p) for p in self.points]
        if len(self.points) != self.sites:
            raise ValueError(f"need {self.sites} points, got {len(self.points)}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("marked points must be distinct")
        if self.variant == "simplest":
            if self.K is None:
                self.K = [[Fraction(i + 1) if i == j else Fraction(0) for j in range(self.n)]
                          for i in range(self.n)]
            self.K = _as_matrix(self.K, self.n)

    @property
    def poles(self):
        return set(self.points)


@dataclass
class YangianSpec:
    n: int
    variant: str = "xxx_simplest"
    sites: int = 1
    points: list = None

    def __post_init__(self):
        if self.variant not in YANGIAN_VARIANTS:
            raise ValueError(f"unknown Yangian variant {self.variant!r}")
        if self.n < 1 or self.sites < 1:
            raise ValueError("sizes must be positive")
        if self.variant == "toda":
            self.points = []
            return
        if self.points is None:
            self.points = _default_points(self.sites)
        self.points = [Fraction(p) for p in self.points]
        if len(self.points) != self.sites:
            raise ValueError(f"need {self.sites} points, got {len(self.points)}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("marked points must be distinct")

    @property
    def size(self):
        return 2 if self.variant == "toda" else self.n

    @property
    def poles(self):
        return set(self.points)


def gaudin_presentation(spec):
    if spec.variant == "simplest":
        return presentation_build("weyl", n=spec.n, k=spec.sites)
    if spec.variant in ("standard", "gl_basic"):
        return presentation_build("gl_sum", n=spec.n, m=spec.sites)
    return presentation_build("gl_poly", n=spec.n, N=spec.N)


def build_gaudin(spec):
    pres = gaudin_presentation(spec)
    n = spec.n
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            x = pres.zero()
            if spec.variant == "simplest":
                if spec.K[i - 1][j - 1]:
                    x = x + pres.scalar(spec.K[i - 1][j - 1])
                for a, za in enumerate(spec.points, 1):
                    qp = pres.gen(f"q[{i},{a}]") * pres.gen(f"p[{j},{a}]")
                    x = x + qp.scale(RatFun.pole(za))
            elif spec.variant in ("standard", "gl_basic"):
                for a, za in enumerate(spec.points, 1):
                    x = x + pres.gen(f"e[{i},{j};{a}]").scale(RatFun.pole(za))
            else:
                for a in range(1, spec.N + 1):
                    x = x + pres.gen(f"e[{i},{j};{a - 1}]").scale(RatFun.pole(0, a))
            row.append(x)
        rows.append(row)
    return OpMatrix(rows)


def yangian_presentation(spec):
    if spec.variant == "toda":
        return presentation_build("toda", n=spec.n)
    if spec.variant == "xxx_simplest":
        return presentation_build("weyl", n=spec.n, k=spec.sites)
    return presentation_build("gl_sum", n=spec.n, m=spec.sites)


def build_yangian(spec):
    """Product of site factors, ascending site index left to right."""
    pres = yangian_presentation(spec)
    one, zero = pres.one(), pres.zero()
    factors = []
    if spec.variant == "toda":
        for i in range(1, spec.n + 1):
            E = pres.gen(f"E[{i}]")
            factors.append(OpMatrix([[pres.z() - pres.gen(f"p[{i}]"), E.inverse()],
                                     [-E, zero]]))
    else:
        n = spec.n
        for a, za in enumerate(spec.points, 1):
            rows = []
            for i in range(1, n + 1):
                row = []
                for j in range(1, n + 1):
                    if spec.variant == "xxx_simplest":
                        g = pres.gen(f"q[{i},{a}]") * pres.gen(f"p[{j},{a}]")
                    else:
                        g = pres.gen(f"e[{i},{j};{a}]")
                    x = g.scale(RatFun.pole(za))
                    row.append(x + one if i == j else x)
                rows.append(row)
            factors.append(OpMatrix(rows))
    T = factors[0]
    for F in factors[1:]:
        T = T @ F
    return T


def build_model(spec):
    if isinstance(spec, GaudinSpec):
        return build_gaudin(spec)
    return build_yangian(spec)


# --- relation checks ------------------------------------------------------

def _eval(M, u):
    return M.map(lambda x: evaluate_z(x, u))


def _shifted(M, c):
    return M.map(lambda x: x.shift_z(c))


def check_gaudin_relations(L, u, v, name="gaudin.relations"):
    """Linear r-matrix relations at (u, v) plus the coincident-point limit at u."""
    u, v = Fraction(u), Fraction(v)
    if u == v:
        raise ValueError("relation check needs u != v")
    rep = CheckReport(name)
    n = L.rows
    Lu, Lv = _eval(L, u), _eval(L, v)
    dLu = _eval(L.map(lambda x: x.derive_z()), u)
    c = 1 / (u - v)
    zero = Lu[0, 0].zero_like()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    rhs = zero
                    if j == k:
                        rhs = rhs + (Lv[i, l] - Lu[i, l])
                    if l == i:
                        rhs = rhs - (Lv[k, j] - Lu[k, j])
                    rep.check(f"[L{i+1}{j+1}(u),L{k+1}{l+1}(v)] u={u} v={v}",
                              commutator(Lu[i, j], Lv[k, l]) - rhs * c)
                    lim = commutator(Lu[i, j], Lu[k, l])
                    if j == k:
                        lim = lim + dLu[i, l]
                    if l == i:
                        lim = lim - dLu[k, j]
                    rep.check(f"[L{i+1}{j+1}(u),L{k+1}{l+1}(u)] u={u}", lim)
    return rep


def check_yangian_relations(T, u, v, name="yangian.relations"):
    """Quadratic relations ``[T_ij(u), T_kl(v)] = (T_kj(u)T_il(v) - T_kj(v)T_il(u))/(u-v)``."""
    u, v = Fraction(u), Fraction(v)
    if u == v:
        raise ValueError("relation check needs u != v")
    rep = CheckReport(name)
    n = T.rows
    Tu, Tv = _eval(T, u), _eval(T, v)
    c = 1 / (u - v)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    rhs = (Tu[k, j] * Tv[i, l] - Tv[k, j] * Tu[i, l]) * c
                    rep.check(f"[T{i+1}{j+1}(u),T{k+1}{l+1}(v)] u={u} v={v}",
                              commutator(Tu[i, j], Tv[k, l]) - rhs)
    return rep


# --- operator forms -------------------------------------------------------

def gaudin_operator(L, sign=-1, transpose=False):
    """``dz*Id + sign*L``, optionally transposed; ``(-1, False)`` is ``dz - L``."""
    pres = L.presentation
    dz = pres.dz()
    n = L.rows
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            x = L[i, j].as_zkind("diff")
            x = x if sign > 0 else -x
            row.append(x + dz if i == j else x)
        rows.append(row)
    M = OpMatrix(rows)
    return M.transpose() if transpose else M


def yangian_operator(T, form="T_Sinv", c=0):
    """``T(z+c) S^-1`` (``T_Sinv``) or ``(S T(z+c))^t`` (``St_transpose``)."""
    pres = T.presentation
    if c:
        T = _shifted(T, c)
    if form == "T_Sinv":
        Sinv = pres.shift(-1)
        return T.map(lambda x: x * Sinv)
    if form == "St_transpose":
        S = pres.shift(1)
        return T.map(lambda x: S * x).transpose()
    if form == "Sinv_T":
        Sinv = pres.shift(-1)
        return T.map(lambda x: Sinv * x)
    raise ValueError(f"unknown Yangian operator form {form!r}")


def shift_T(T, c):
    return _shifted(T, c)


def evaluation_points(poles, wanted=(2, 3, 5, 7), span=0):
    """Drop points colliding with poles (or poles + integers up to ``span``)."""
    bad = set()
    for p in poles:
        for s in range(-span, span + 1):
            bad.add(Fraction(p) + s)
    pts = [Fraction(x) for x in wanted if Fraction(x) not in bad]
    if not pts:
        raise ValueError("no evaluation points left after pole exclusion")
    return pts


@dataclass
class Model:
    """A parsed ``--model`` choice."""
    spec: object
    label: str = ""
    extra: dict = field(default_factory=dict)


def parse_model(text):
    """``standard:n=2,sites=2,points=0|1`` / ``xxx_simplest:n=2`` / ``toda:n=3`` / ``none``."""
    text = text.strip()
    if text in ("", "none"):
        return None
    kind, _, rest = text.partition(":")
    params = {}
    for item in filter(None, (x.strip() for x in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"malformed model parameter {item!r}")
        params[key.strip()] = val.strip()
    n = int(params.pop("n", 2))
    sites = int(params.pop("sites", params.pop("k", params.pop("m", 1))))
    points = params.pop("points", params.pop("z", None))
    if points is not None:
        points = [Fraction(x) for x in points.split("|")]
    if kind in GAUDIN_VARIANTS:
        kw = {}
        if "N" in params:
            kw["N"] = int(params.pop("N"))
        if "K" in params:
            vals = [Fraction(x) for x in params.pop("K").split("|")]
            kw["K"] = [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]
        spec = GaudinSpec(n=n, variant=kind, sites=sites, points=points, **kw)
    elif kind in YANGIAN_VARIANTS:
        spec = YangianSpec(n=n, variant=kind, sites=sites, points=points)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    if params:
        raise ValueError(f"unknown model parameters: {', '.join(sorted(params))}")
    return Model(spec, text)
