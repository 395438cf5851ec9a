"""Presented noncommutative algebras and their operator calculus.

An :class:`AlgebraPresentation` fixes a finite, totally ordered generator
set and a commutation table ``[g_a, g_b] = scalar + linear`` for every pair
with ``a`` after ``b``.  Elements (:class:`OperatorElement`) are kept in
PBW normal form: a rational function of ``z`` on the left, an ordered word
in the middle, and a power of ``dz`` (differential kind) or of the shift
``S = exp(dz)`` (shift kind) on the right.

Rewriting rules:

* ``g_b g_a -> g_a g_b + [g_b, g_a]`` for out-of-order adjacent letters,
* ``dz f -> f dz + f'``,
* ``S^k f -> f(z+k) S^k``.

Laurent generators (``E[i] = exp(q_i)`` in the Toda presentation, ``lam``
in commutative mirrors) may carry negative exponents; their relations must
be of scaling type ``[h, g] = c g``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .exact_arith import (
    PoleError,
    Poly,
    RatFun,
    as_ratfun,
    ratfun_derive,
    ratfun_eval,
    ratfun_normalize,
    ratfun_shift,
)

ZKINDS = ("none", "diff", "shift")


class PresentationMismatch(ValueError):
    pass


class ZKindMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Generator:
    kind: str  # heisenberg_q | heisenberg_p | gl_basis | exp_q | central_var
    label: str
    indices: tuple = ()

    @property
    def text(self):
        if not self.indices:
            return self.label
        if self.kind == "gl_basis":
            i, j, a = self.indices
            return f"{self.label}[{i},{j};{a}]"
        return f"{self.label}[{','.join(str(x) for x in self.indices)}]"

    def __str__(self):
        return self.text


_BUILT = {}


def _params_key(params):
    return tuple(sorted(params.items()))


def presentation_build(kind, central=(), **params):
    """Build (or fetch the cached) presentation of the given kind.

    Kinds: ``commutative`` (``base=`` another kind plus its parameters),
    ``weyl`` (``n``, ``k``), ``gl_sum`` (``n``, ``m``), ``gl_poly``
    (``n``, ``N``), ``toda`` (``n``).  ``central`` lists extra central
    variables among ``t`` and ``lam``.
    """
    central = tuple(sorted(set(central)))
    for c in central:
        if c not in ("t", "lam"):
            raise ValueError(f"unknown central variable {c!r}")
    key = (kind, central, _params_key(params))
    pres = _BUILT.get(key)
    if pres is None:
        pres = _build(kind, central, params)
        _BUILT[key] = pres
    return pres


def _positive(params, *names):
    vals = []
    for name in names:
        if name not in params:
            raise ValueError(f"missing parameter {name!r}")
        v = int(params[name])
        if v <= 0:
            raise ValueError(f"parameter {name} must be positive, got {v}")
        vals.append(v)
    return vals


def _base_generators(kind, params):
    """Generators and commutation table of a non-commutative kind."""
    gens, rel = [], {}
    if kind == "weyl":
        n, k = _positive(params, "n", "k")
        qs = [Generator("heisenberg_q", "q", (i, a)) for a in range(1, k + 1) for i in range(1, n + 1)]
        ps = [Generator("heisenberg_p", "p", (i, a)) for a in range(1, k + 1) for i in range(1, n + 1)]
        gens = qs + ps
        for p in ps:
            rel[(p, Generator("heisenberg_q", "q", p.indices))] = (Fraction(1), ())
    elif kind in ("gl_sum", "gl_poly"):
        if kind == "gl_sum":
            n, m = _positive(params, "n", "m")
            sites = range(1, m + 1)
        else:
            n, N = _positive(params, "n", "N")
            sites = range(0, N)
        gens = [Generator("gl_basis", "e", (i, j, a)) for a in sites
                for i in range(1, n + 1) for j in range(1, n + 1)]
        for x in gens:
            for y in gens:
                i, j, a = x.indices
                k, l, b = y.indices
                if kind == "gl_sum":
                    if a != b:
                        continue
                    c = a
                else:
                    c = a + b
                    if c >= N:
                        continue
                lin = {}
                if j == k:
                    g = Generator("gl_basis", "e", (i, l, c))
                    lin[g] = lin.get(g, 0) + 1
                if l == i:
                    g = Generator("gl_basis", "e", (k, j, c))
                    lin[g] = lin.get(g, 0) - 1
                lin = {g: v for g, v in lin.items() if v}
                if lin:
                    rel[(x, y)] = (Fraction(0), tuple(sorted((g, Fraction(v)) for g, v in lin.items())))
    elif kind == "toda":
        (n,) = _positive(params, "n")
        es = [Generator("exp_q", "E", (i,)) for i in range(1, n + 1)]
        ps = [Generator("heisenberg_p", "p", (i,)) for i in range(1, n + 1)]
        gens = es + ps
        # E = exp(q), [p, q] = 1  =>  [p, E] = E
        for p, e in zip(ps, es):
            rel[(p, e)] = (Fraction(0), ((e, Fraction(1)),))
    else:
        raise ValueError(f"unsupported presentation kind {kind!r}")
    return gens, rel


def _build(kind, central, params):
    if kind == "commutative":
        params = dict(params)
        base = params.pop("base", None)
        if base is None:
            raise ValueError("commutative presentation needs base=<kind>")
        if base == "commutative":
            raise ValueError("commutative base must be a noncommutative kind")
        gens, _ = _base_generators(base, params)
        rel = {}
        params["base"] = base
    else:
        gens, rel = _base_generators(kind, params)
    cgens = [Generator("central_var", c, ()) for c in central]
    return AlgebraPresentation(kind, central, params, gens + cgens, rel)


def _canon_rel(gens_index, rel):
    """Antisymmetrize relations and key them as (later, earlier) index pairs."""
    table = {}
    for (x, y), (s, lin) in rel.items():
        a, b = gens_index[x], gens_index[y]
        if a == b:
            if s or lin:
                raise ValueError(f"nonzero self-commutator for {x}")
            continue
        lin_i = tuple(sorted((gens_index[g], Fraction(c)) for g, c in lin))
        if a < b:
            a, b = b, a
            s = -s
            lin_i = tuple((g, -c) for g, c in lin_i)
        prev = table.get((a, b))
        entry = (Fraction(s), lin_i)
        if prev is not None and prev != entry:
            raise ValueError(f"inconsistent commutator table entry for {x}, {y}")
        table[(a, b)] = entry
    return table


class AlgebraPresentation:
    """Finitely presented algebra with a PBW normal form."""

    def __init__(self, kind, central, params, generators, rel):
        self.kind = kind
        self.central = tuple(central)
        self.params = dict(params)
        self.generators = tuple(generators)
        self.index = {g: i for i, g in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise ValueError("duplicate generators")
        self.by_text = {g.text: i for i, g in enumerate(self.generators)}
        self.table = _canon_rel(self.index, rel)
        self.laurent = frozenset(i for i, g in enumerate(self.generators)
                                 if g.kind == "exp_q" or g.label == "lam")
        self.weights = tuple(0 if (g.kind == "exp_q" or g.label == "t") else 1
                             for g in self.generators)
        self._check_table()
        self._cache = {}

    @property
    def key(self):
        return (self.kind, self.central, _params_key(self.params))

    def __reduce__(self):
        return (_rebuild, (self.kind, self.central, _params_key(self.params)))

    def __eq__(self, other):
        return isinstance(other, AlgebraPresentation) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        ps = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        c = f";central={','.join(self.central)}" if self.central else ""
        return f"AlgebraPresentation({self.kind}({ps}){c})"

    def _check_table(self):
        for (a, b), (s, lin) in self.table.items():
            wa, wb = self.weights[a], self.weights[b]
            for g, _ in lin:
                if (a in self.laurent or b in self.laurent):
                    if not (len(lin) == 1 and not s and g in (a, b) and g in self.laurent):
                        raise ValueError("Laurent generators need scaling relations [h,g] = c g")
                elif self.weights[g] > wa + wb - 1:
                    raise ValueError("relation does not lower the filtration degree")
            for g in (a, b):
                if self.generators[g].kind == "central_var":
                    raise ValueError("central variables must commute with everything")

    def commutator_of(self, x, y):
        """``[x, y]`` of two generators as ``(scalar, {generator: coeff})``."""
        a, b = self.index[x], self.index[y]
        if a == b:
            return Fraction(0), {}
        if a > b:
            s, lin = self.table.get((a, b), (Fraction(0), ()))
            return s, {self.generators[g]: c for g, c in lin}
        s, lin = self.table.get((b, a), (Fraction(0), ()))
        return -s, {self.generators[g]: -c for g, c in lin}

    def abelian(self):
        """Commutative mirror (same generators, empty table) with central ``lam``."""
        central = tuple(sorted(set(self.central) | {"lam"}))
        if self.kind == "commutative":
            params = dict(self.params)
            return presentation_build("commutative", central=central, **params)
        return presentation_build("commutative", central=central, base=self.kind, **self.params)

    # --- element constructors -------------------------------------------

    def element(self, terms, zkind="none"):
        return OperatorElement._make(self, zkind, terms)

    def zero(self, zkind="none"):
        return OperatorElement._make(self, zkind, {})

    def one(self, zkind="none"):
        return self.scalar(1, zkind)

    def scalar(self, c, zkind="none"):
        c = as_ratfun(c)
        return OperatorElement._make(self, zkind, {((), 0): c} if c else {})

    def coef(self, f, zkind="none"):
        return self.scalar(f, zkind)

    def z(self, zkind="none"):
        return self.scalar(RatFun.z(), zkind)

    def gen(self, g, exp=1):
        """Element for a generator given as Generator, index or text."""
        if isinstance(g, Generator):
            i = self.index[g]
        elif isinstance(g, int):
            i = g
        else:
            try:
                i = self.by_text[g]
            except KeyError:
                raise KeyError(f"{g!r} is not a generator of {self!r}") from None
        if exp == 0:
            return self.one()
        if exp < 0 and i not in self.laurent:
            raise ValueError(f"{self.generators[i]} is not invertible")
        return OperatorElement._make(self, "none", {(((i, exp),), 0): RatFun.const(1)})

    def dz(self, k=1):
        if k < 0:
            raise ValueError("negative power of dz")
        return OperatorElement._make(self, "diff", {((), k): RatFun.const(1)})

    def shift(self, k=1):
        return OperatorElement._make(self, "shift", {((), k): RatFun.const(1)})

    # --- PBW word multiplication -----------------------------------------

    def mul_words(self, u, v):
        """Normal form of the product of two normal words: {word: coeff}."""
        if not v:
            return {u: 1}
        if not u:
            return {v: 1}
        if u[-1][0] < v[0][0]:
            return {u + v: 1}
        key = (u, v)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        (g, e), rest = v[0], v[1:]
        first = self._mul_factor(u, g, e)
        if not rest:
            out = first
        else:
            out = {}
            for w, c in first.items():
                for w2, c2 in self.mul_words(w, rest).items():
                    out[w2] = out.get(w2, 0) + c * c2
            out = {w: c for w, c in out.items() if c}
        self._cache[key] = out
        return out

    def _mul_factor(self, u, g, e):
        h, f = u[-1]
        if h < g:
            return {u + ((g, e),): 1}
        if h == g:
            ne = f + e
            return {u[:-1] + (((g, ne),) if ne else ()): 1}
        prefix = u[:-1]
        pair = self._swap(h, f, g, e)
        if not prefix:
            return pair
        out = {}
        for w, c in pair.items():
            for w2, c2 in self.mul_words(prefix, w).items():
                out[w2] = out.get(w2, 0) + c * c2
        return {w: c for w, c in out.items() if c}

    def _swap(self, h, f, g, e):
        """Normal form of ``h^f g^e`` for generator indices ``h > g``."""
        key = ("swap", h, f, g, e)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        entry = self.table.get((h, g))
        if entry is None:
            out = {((g, e), (h, f)): 1}
        elif g in self.laurent or h in self.laurent:
            s, lin = entry
            if h in self.laurent or lin[0][0] != g:
                raise NotImplementedError("only [h, g] = c g with Laurent g is supported")
            c = lin[0][1]
            # h g^e = g^e (h + e c)
            out = {}
            for j in range(f + 1):
                coeff = comb(f, j) * (e * c) ** (f - j)
                if coeff:
                    w = ((g, e), (h, j)) if j else ((g, e),)
                    out[w] = out.get(w, 0) + coeff
        elif f == 1 and e == 1:
            s, lin = entry
            out = {((g, 1), (h, 1)): 1}
            if s:
                out[()] = s
            for x, c in lin:
                w = ((x, 1),)
                out[w] = out.get(w, 0) + c
            out = {w: c for w, c in out.items() if c}
        elif f > 1:
            out = {}
            for w, c in self._swap(h, 1, g, e).items():
                for w2, c2 in self.mul_words(((h, f - 1),), w).items():
                    out[w2] = out.get(w2, 0) + c * c2
            out = {w: c for w, c in out.items() if c}
        else:
            out = {}
            for w, c in self._swap(h, 1, g, 1).items():
                for w2, c2 in self.mul_words(w, ((g, e - 1),)).items():
                    out[w2] = out.get(w2, 0) + c * c2
            out = {w: c for w, c in out.items() if c}
        self._cache[key] = out
        return out

    def word_degree(self, w):
        return sum(self.weights[g] * abs(e) for g, e in w)


def _rebuild(kind, central, params):
    return presentation_build(kind, central=central, **dict(params))


@lru_cache(maxsize=65536)
def _nth_derivative(f, j):
    for _ in range(j):
        f = ratfun_derive(f)
        if f.is_zero():
            break
    return f


def _rsum(vals):
    """Sum of RatFuns, grouping equal denominators before normalizing."""
    if len(vals) == 1:
        return vals[0]
    groups = {}
    for v in vals:
        d = v.den.c
        if d in groups:
            groups[d][1].append(v.num)
        else:
            groups[d] = (v.den, [v.num])
    total = None
    for den, nums in groups.values():
        acc = nums[0]
        for x in nums[1:]:
            acc = acc + x
        r = ratfun_normalize(acc, den) if len(den.c) > 1 else RatFun._raw(acc, den)
        total = r if total is None else total + r
    return total


def _combine_kind(a, b):
    if a == b or b == "none":
        return a
    if a == "none":
        return b
    raise ZKindMismatch(f"cannot combine z-operator kinds {a!r} and {b!r}")


class OperatorElement:
    """Normal-ordered element: sum of ``f(z) * word * Z^k``.

    ``Z`` is ``dz`` (``zkind='diff'``, k >= 0) or the shift ``S`` (``zkind='shift'``,
    k any integer).  ``zkind='none'`` elements have no z-operator part and
    combine with either kind.
    """

    __slots__ = ("pres", "zkind", "terms", "_hash")

    def __init__(self, pres, terms=None, zkind="none"):
        if zkind not in ZKINDS:
            raise ValueError(f"bad zkind {zkind!r}")
        terms = {k: as_ratfun(v) for k, v in (terms or {}).items()}
        self.pres = pres
        self.zkind = zkind
        self.terms = {k: v for k, v in terms.items() if v}
        self._hash = None
        self._validate()

    def _validate(self):
        for (w, k) in self.terms:
            if k and self.zkind == "none":
                raise ValueError("z-operator power in a zkind='none' element")
            if k < 0 and self.zkind == "diff":
                raise ValueError("negative dz power")

    @classmethod
    def _make(cls, pres, zkind, terms):
        e = object.__new__(cls)
        e.pres = pres
        e.zkind = zkind
        e.terms = terms
        e._hash = None
        return e

    # --- basic protocol ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def zero_like(self):
        return OperatorElement._make(self.pres, self.zkind, {})

    def one_like(self):
        return OperatorElement._make(self.pres, self.zkind, {((), 0): RatFun.const(1)})

    def _check(self, other):
        if other.pres is not self.pres and other.pres != self.pres:
            raise PresentationMismatch(f"{self.pres!r} vs {other.pres!r}")
        return _combine_kind(self.zkind, other.zkind)

    def _lift(self, other):
        if isinstance(other, OperatorElement):
            return other
        if isinstance(other, (int, Fraction, RatFun)):
            return self.pres.scalar(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RatFun)):
            other = self.pres.scalar(other)
        if not isinstance(other, OperatorElement):
            return NotImplemented
        return self.pres == other.pres and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        zk = self._check(other)
        if not other.terms:
            return OperatorElement._make(self.pres, zk, self.terms)
        out = dict(self.terms)
        for k, v in other.terms.items():
            if k in out:
                s = out[k] + v
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return OperatorElement._make(self.pres, zk, out)

    __radd__ = __add__

    def __neg__(self):
        return OperatorElement._make(self.pres, self.zkind, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_ratfun(c)
        if not c:
            return self.zero_like()
        return OperatorElement._make(self.pres, self.zkind, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.zero_like()
            return OperatorElement._make(self.pres, self.zkind,
                                         {k: v * other for k, v in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RatFun)):
            # coefficients sit on the left, so left scalar multiplication is direct
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.one_like()
        for _ in range(k):
            out = out * self
        return out

    def inverse(self):
        """Inverse of a single invertible monomial (coefficient, Laurent word, shift)."""
        if len(self.terms) != 1:
            raise ValueError(f"{self} is not an invertible monomial")
        ((w, k), f), = self.terms.items()
        if k and self.zkind == "diff":
            raise ValueError("dz is not invertible")
        for g, _ in w:
            if g not in self.pres.laurent:
                raise ValueError(f"{self} is not invertible")
        out = self.pres.scalar(f.inverse())
        inv_w = OperatorElement._make(self.pres, "none", {(tuple((g, -e) for g, e in w), 0): RatFun.const(1)})
        out = inv_w * out
        if k:
            out = self.pres.shift(-k) * out
        return out

    # --- structure --------------------------------------------------------

    def degree(self):
        """Filtration degree: generator weights plus the z-operator order."""
        if not self.terms:
            return -1
        return max(self.pres.word_degree(w) + abs(k) for (w, k) in self.terms)

    def top_part(self, d=None):
        if d is None:
            d = self.degree()
        return OperatorElement._make(self.pres, self.zkind, {
            (w, k): f for (w, k), f in self.terms.items()
            if self.pres.word_degree(w) + abs(k) == d})

    def zpowers(self):
        return sorted({k for (_, k) in self.terms})

    def zcoeff(self, k):
        """Coefficient of ``Z^k`` (as a zkind='none' element); Z-powers sit on the right."""
        return OperatorElement._make(self.pres, "none",
                                     {(w, 0): f for (w, kk), f in self.terms.items() if kk == k})

    def has_zoperator(self):
        return any(k for (_, k) in self.terms)

    def map_coeffs(self, fn):
        out = {}
        for key, f in self.terms.items():
            g = fn(f)
            if g:
                out[key] = g
        return OperatorElement._make(self.pres, self.zkind, out)

    def derive_z(self):
        """Coefficient-wise derivative in z (the ``'`` of quantum powers)."""
        return self.map_coeffs(ratfun_derive)

    def shift_z(self, c):
        """Substitute ``z -> z + c`` in all coefficients."""
        return self.map_coeffs(lambda f: ratfun_shift(f, c))

    def as_zkind(self, zkind):
        if zkind == self.zkind:
            return self
        if self.has_zoperator():
            raise ZKindMismatch("element carries z-operators of another kind")
        return OperatorElement._make(self.pres, zkind, self.terms)

    def is_scalar(self):
        return all(w == () and k == 0 for (w, k) in self.terms)

    def scalar_value(self):
        if not self.terms:
            return RatFun.const(0)
        if not self.is_scalar():
            raise ValueError(f"{self} is not a scalar")
        return self.terms[((), 0)]

    def __str__(self):
        from .grammar import to_text
        return to_text(self)

    def __repr__(self):
        return f"OperatorElement({str(self)!r})"


def multiply(a, b):
    """Normal form of the product ``a * b``."""
    zk = a._check(b)
    pres = a.pres
    if not a.terms or not b.terms:
        return OperatorElement._make(pres, zk, {})
    acc = {}
    mw = pres.mul_words
    for (w1, k1), f in a.terms.items():
        for (w2, k2), g in b.terms.items():
            if k1 == 0:
                parts = ((k2, f * g, 1),)
            elif zk == "diff":
                parts = []
                for j in range(k1 + 1):
                    gj = _nth_derivative(g, j)
                    if not gj:
                        break
                    parts.append((k1 - j + k2, f * gj, comb(k1, j)))
            else:
                parts = ((k1 + k2, f * ratfun_shift(g, k1), 1),)
            for w, c in mw(w1, w2).items():
                for kk, coef, m in parts:
                    key = (w, kk)
                    val = coef * (c * m) if c * m != 1 else coef
                    lst = acc.get(key)
                    if lst is None:
                        acc[key] = [val]
                    else:
                        lst.append(val)
    out = {}
    for key, vals in acc.items():
        s = _rsum(vals)
        if s:
            out[key] = s
    return OperatorElement._make(pres, zk, out)


def commutator(a, b):
    return multiply(a, b) - multiply(b, a)


def normal_form(raw, pres, zkind=None):
    """Normal form of an unordered term list.

    ``raw`` is an iterable of ``(coefficient, factors)`` where each factor is
    a Generator (or ``(Generator, exp)``), ``('dz', k)``, ``('S', k)``, or a
    RatFun/number standing at that position in the product.
    """
    total = None
    for coeff, factors in raw:
        prod = pres.scalar(coeff)
        for fac in factors:
            prod = prod * _atom(pres, fac)
        if zkind is not None:
            prod = prod.as_zkind(_combine_kind(prod.zkind, zkind)) if prod.zkind == "none" else prod
        total = prod if total is None else total + prod
    if total is None:
        return pres.zero(zkind or "none")
    return total


def _atom(pres, fac):
    if isinstance(fac, Generator):
        return pres.gen(fac)
    if isinstance(fac, (RatFun, int, Fraction)):
        return pres.scalar(fac)
    if isinstance(fac, OperatorElement):
        return fac
    head, arg = fac
    if head == "dz":
        return pres.dz(arg)
    if head == "S":
        return pres.shift(arg)
    if isinstance(head, (Generator, str, int)):
        return pres.gen(head, arg)
    raise ValueError(f"unknown factor {fac!r}")


def formal_conjugate(D):
    """``(sum f_i w_i Z^i)^* = sum Z^{-i}-type conjugate applied to f_i w_i``.

    Differential kind: ``dz^i -> (-dz)^i`` moved to the left of the coefficient.
    Shift kind: ``S^k -> S^{-k}`` moved to the left.  Words are not reversed.
    """
    pres = D.pres
    out = D.zero_like()
    for (w, k), f in D.terms.items():
        body = OperatorElement._make(pres, "none", {(w, 0): f})
        if k == 0:
            out = out + body.as_zkind(D.zkind)
        elif D.zkind == "diff":
            out = out + (pres.dz(k) * body) * ((-1) ** k)
        else:
            out = out + pres.shift(-k) * body
    return out


def abelianize(a):
    """Image in the commutative mirror; ``dz`` and ``S`` both map to ``lam``."""
    target = a.pres.abelian()
    lam = target.by_text["lam"]
    remap = [target.index[g] for g in a.pres.generators]
    acc = {}
    for (w, k), f in a.terms.items():
        letters = {}
        for g, e in w:
            gi = remap[g]
            letters[gi] = letters.get(gi, 0) + e
        if k:
            letters[lam] = letters.get(lam, 0) + k
        nw = tuple(sorted((g, e) for g, e in letters.items() if e))
        acc.setdefault((nw, 0), []).append(f)
    out = {}
    for key, vals in acc.items():
        s = _rsum(vals)
        if s:
            out[key] = s
    return OperatorElement._make(target, "none", out)


def wick(classical, target):
    """Wick ordering from a commutative mirror into ``target`` with ``dz``.

    Each monomial ``f(z) lam^a prod q^c prod p^b`` maps to
    ``f(z) prod q^c prod p^b dz^a`` with every q placed left of every p.
    """
    src = classical.pres
    if src.kind != "commutative":
        raise ValueError("wick expects an element of a commutative presentation")
    lam = src.by_text.get("lam")
    out = {}
    for (w, k), f in classical.terms.items():
        if k:
            raise ValueError("classical element carries z-operators")
        a = 0
        letters = []
        for g, e in w:
            if g == lam:
                if e < 0:
                    raise ValueError("negative power of lam has no Wick image")
                a = e
                continue
            gen = src.generators[g]
            if gen not in target.index:
                raise KeyError(f"generator {gen} is not mirrored in {target!r}")
            letters.append((target.index[gen], e))
        # q before p is the target's canonical order, so the sorted word is the Wick image
        qs = sorted(x for x in letters if target.generators[x[0]].kind != "heisenberg_p")
        ps = sorted(x for x in letters if target.generators[x[0]].kind == "heisenberg_p")
        word = tuple(qs + ps)
        if word != tuple(sorted(word)):
            raise ValueError("target order does not place q before p")
        key = (word, a)
        out[key] = out[key] + f if key in out else f
    return OperatorElement._make(target, "diff", {k: v for k, v in out.items() if v})


def anti_wick(classical, target):
    """Like :func:`wick` but with every p placed left of every q (then normal ordered)."""
    src = classical.pres
    lam = src.by_text.get("lam")
    total = target.zero("diff")
    for (w, k), f in classical.terms.items():
        a = 0
        qs, ps = target.one(), target.one()
        for g, e in w:
            if g == lam:
                a = e
                continue
            gen = target.gen(src.generators[g], e)
            if src.generators[g].kind == "heisenberg_p":
                ps = ps * gen
            else:
                qs = qs * gen
        total = total + (ps * qs * target.dz(a)).scale(f)
    return total


def evaluate_z(a, u):
    """Replace every coefficient f(z) by f(u)."""
    if a.has_zoperator():
        raise ValueError("evaluate_z needs an element without z-operators")
    u = Fraction(u)
    bad = []
    out = {}
    for key, f in a.terms.items():
        try:
            v = ratfun_eval(f, u)
        except PoleError:
            bad.append(key)
            continue
        if v:
            out[key] = RatFun.const(v)
    if bad:
        raise PoleError(u, f"{len(bad)} term(s) have a pole")
    return OperatorElement._make(a.pres, a.zkind, out)


def poles(a):
    """Rational roots of all coefficient denominators."""
    roots = set()
    for f in a.terms.values():
        roots |= _rational_roots(f.den)
    return roots


def _rational_roots(p):
    if p.degree < 1:
        return set()
    from math import gcd
    # clear denominators
    lcm = 1
    for c in p.c:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in p.c]
    roots = set()
    if ints[0] == 0:
        roots.add(Fraction(0))
        k = 0
        while ints[k] == 0:
            k += 1
        ints = ints[k:]
        if len(ints) == 1:
            return roots
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n):
        return [d for d in range(1, n + 1) if n % d == 0]

    for num in divisors(a0):
        for den in divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if Poly(ints)(r) == 0:
                    roots.add(r)
    return roots


def random_element(pres, rng, max_terms=3, max_deg=2, zkind="none", coeffs=(-2, -1, 1, 2, 3)):
    """Small random normal-ordered element, for property tests."""
    gens = [i for i in range(len(pres.generators)) if pres.generators[i].kind != "central_var"]
    out = pres.zero(zkind)
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_deg)
        term = pres.scalar(Fraction(rng.choice(coeffs)))
        for _ in range(deg):
            g = rng.choice(gens)
            e = rng.choice((-1, 1)) if g in pres.laurent else 1
            term = term * pres.gen(g, e)
        if zkind == "diff" and rng.random() < 0.5:
            term = term * pres.dz(rng.randint(1, 2))
        elif zkind == "shift" and rng.random() < 0.5:
            term = term * pres.shift(rng.choice((-1, 1)))
        out = out + term
    return out


def random_ratfun(rng, max_deg=2, points=(0, 1, -1, 2)):
    num = Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, max_deg + 1))])
    if num.is_zero():
        num = Poly([1])
    den = Poly([1])
    for _ in range(rng.randint(0, 2)):
        den = den * Poly([-rng.choice(points), 1])
    return RatFun(num, den)


def all_generator_elements(pres):
    return [pres.gen(i) for i, g in enumerate(pres.generators) if g.kind != "central_var"]


def iter_pairs(xs):
    return itertools.combinations(xs, 2)
