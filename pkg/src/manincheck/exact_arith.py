"""Exact rationals, univariate polynomials and rational functions in ``z``,
and truncated power series in a central parameter ``t``.

Rationals are :class:`fractions.Fraction`.  Polynomials are dense tuples of
coefficients (ascending powers); rational functions are kept in a canonical
reduced form with monic denominator, so structural equality is equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PoleError(ArithmeticError):
    """Evaluation hit a pole of a rational function."""

    def __init__(self, point, detail=""):
        self.point = point
        msg = f"pole at z = {point}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


def _strip(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


class Poly:
    """Dense univariate polynomial over the rationals."""

    __slots__ = ("c", "_hash")

    def __init__(self, coeffs=()):
        self.c = _strip([Fraction(x) for x in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, c):
        p = object.__new__(cls)
        p.c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, a):
        return cls._raw((Fraction(a),) if a else ())

    @classmethod
    def z(cls):
        return cls._raw((_ZERO, _ONE))

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def is_const(self):
        return len(self.c) <= 1

    def lead(self):
        return self.c[-1] if self.c else _ZERO

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.c)
        return self._hash

    def __add__(self, other):
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return Poly._raw(_strip(out))

    def __neg__(self):
        return Poly._raw(tuple(-x for x in self.c))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            a, b = self.c, other.c
            if not a or not b:
                return Poly._raw(())
            if len(a) == 1:
                return other.scale(a[0])
            if len(b) == 1:
                return self.scale(b[0])
            out = [_ZERO] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly._raw(_strip(out))
        return self.scale(Fraction(other))

    __rmul__ = __mul__

    def scale(self, s):
        if not s:
            return Poly._raw(())
        if s == 1:
            return self
        return Poly._raw(tuple(x * s for x in self.c))

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        db = other.degree
        lb = other.c[-1]
        if len(rem) - 1 < db:
            return Poly._raw(()), self
        q = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            f = rem[k + db] / lb
            q[k] = f
            if f:
                for j, y in enumerate(other.c):
                    rem[k + j] -= f * y
        return Poly._raw(_strip(q)), Poly._raw(_strip(rem[:db]))

    def monic(self):
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(1 / self.c[-1])

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def derive(self):
        return Poly._raw(tuple(i * x for i, x in enumerate(self.c) if i))

    def shift(self, c):
        """Return p(z + c) by Taylor shift."""
        c = Fraction(c)
        if not c or len(self.c) <= 1:
            return self
        n = len(self.c)
        out = [_ZERO] * n
        for i, a in enumerate(self.c):
            if a:
                for j in range(i + 1):
                    out[j] += a * comb(i, j) * c ** (i - j)
        return Poly._raw(_strip(out))

    def __call__(self, u):
        acc = _ZERO
        for x in reversed(self.c):
            acc = acc * u + x
        return acc

    def __str__(self):
        return _poly_str(self.c)

    def __repr__(self):
        return f"Poly({str(self)!r})"


def _coef_str(x):
    return str(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _poly_str(c):
    if not c:
        return "0"
    parts = []
    for i in range(len(c) - 1, -1, -1):
        a = c[i]
        if not a:
            continue
        sign = "-" if a < 0 else "+"
        m = -a if a < 0 else a
        if i == 0:
            body = _coef_str(m)
        else:
            zp = "z" if i == 1 else f"z^{i}"
            body = zp if m == 1 else f"{_coef_str(m)}*{zp}"
        parts.append((sign, body))
    s0, b0 = parts[0]
    out = ("-" if s0 == "-" else "") + b0
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


_POLY_ONE = Poly._raw((_ONE,))


def ratfun_normalize(num, den):
    """Canonical reduced form of ``num/den`` with monic denominator."""
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return RatFun._raw(Poly._raw(()), _POLY_ONE)
    if len(den.c) == 1:
        return RatFun._raw(num.scale(1 / den.c[0]), _POLY_ONE)
    g = num.gcd(den)
    if g.degree > 0:
        num = num.divmod(g)[0]
        den = den.divmod(g)[0]
    lc = den.c[-1]
    if lc != 1:
        num = num.scale(1 / lc)
        den = den.scale(1 / lc)
    return RatFun._raw(num, den)


class RatFun:
    """Exact rational function of ``z``; immutable and canonical."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly.const(num) if not isinstance(num, (list, tuple)) else Poly(num)
        if den is None:
            den = _POLY_ONE
        elif not isinstance(den, Poly):
            den = Poly.const(den) if not isinstance(den, (list, tuple)) else Poly(den)
        r = ratfun_normalize(num, den)
        self.num, self.den, self._hash = r.num, r.den, None

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def const(cls, a):
        return cls._raw(Poly.const(a), _POLY_ONE)

    @classmethod
    def z(cls):
        return cls._raw(Poly.z(), _POLY_ONE)

    @classmethod
    def pole(cls, a, order=1):
        """``1/(z-a)^order``."""
        d = Poly._raw((-Fraction(a), _ONE))
        den = _POLY_ONE
        for _ in range(order):
            den = den * d
        return cls._raw(Poly._raw((_ONE,)), den)

    def is_zero(self):
        return not self.num.c

    def is_poly(self):
        return len(self.den.c) == 1

    def is_const(self):
        return len(self.den.c) == 1 and len(self.num.c) <= 1

    def const_value(self):
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.num.c[0] if self.num.c else _ZERO

    def __eq__(self, other):
        if isinstance(other, RatFun):
            return self.num.c == other.num.c and self.den.c == other.den.c
        if isinstance(other, (int, Fraction)):
            return self.is_const() and self.const_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num.c, self.den.c))
        return self._hash

    def __bool__(self):
        return bool(self.num.c)

    def __add__(self, other):
        if not isinstance(other, RatFun):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = RatFun.const(other)
        if not self.num.c:
            return other
        if not other.num.c:
            return self
        if len(self.den.c) == 1 and len(other.den.c) == 1:
            return RatFun._raw(self.num + other.num, _POLY_ONE)
        if self.den.c == other.den.c:
            return ratfun_normalize(self.num + other.num, self.den)
        return ratfun_normalize(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun._raw(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RatFun):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = RatFun.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatFun):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            s = Fraction(other)
            if not s:
                return RatFun._raw(Poly._raw(()), _POLY_ONE)
            return RatFun._raw(self.num.scale(s), self.den)
        if not self.num.c or not other.num.c:
            return RatFun._raw(Poly._raw(()), _POLY_ONE)
        if len(self.den.c) == 1 and len(other.den.c) == 1:
            return RatFun._raw(self.num * other.num, _POLY_ONE)
        if len(other.num.c) == 1 and len(other.den.c) == 1:
            return RatFun._raw(self.num.scale(other.num.c[0]), self.den)
        if len(self.num.c) == 1 and len(self.den.c) == 1:
            return RatFun._raw(other.num.scale(self.num.c[0]), other.den)
        return ratfun_normalize(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.c:
            raise ZeroDivisionError("inverse of zero rational function")
        return ratfun_normalize(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, RatFun):
            other = RatFun.const(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFun.const(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFun.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, u):
        return ratfun_eval(self, u)

    def derive(self):
        return ratfun_derive(self)

    def shift(self, c):
        return ratfun_shift(self, c)

    def __str__(self):
        if len(self.den.c) == 1:
            return str(self.num)
        n, d = str(self.num), str(self.den)
        if len([x for x in self.num.c if x]) > 1 or n.startswith("-"):
            n = f"({n})"
        if len([x for x in self.den.c if x]) > 1 or "*" in d:
            d = f"({d})"
        return f"{n} / {d}"

    def __repr__(self):
        return f"RatFun({str(self)!r})"


def ratfun_eval(f, u):
    u = Fraction(u)
    d = f.den(u)
    if not d:
        raise PoleError(u, str(f))
    return f.num(u) / d


@lru_cache(maxsize=65536)
def ratfun_derive(f):
    if len(f.den.c) == 1:
        return RatFun._raw(f.num.derive(), _POLY_ONE)
    return ratfun_normalize(f.num.derive() * f.den - f.num * f.den.derive(),
                            f.den * f.den)


@lru_cache(maxsize=65536)
def _shift_cached(f, c):
    if len(f.den.c) == 1:
        return RatFun._raw(f.num.shift(c), _POLY_ONE)
    # shifting preserves coprimality and monicity
    return RatFun._raw(f.num.shift(c), f.den.shift(c))


def ratfun_shift(f, c):
    """g(z) = f(z + c)."""
    c = Fraction(c)
    if not c or f.is_const():
        return f
    return _shift_cached(f, c)


def as_ratfun(x):
    if isinstance(x, RatFun):
        return x
    return RatFun.const(Fraction(x))


class TruncSeries:
    """Series ``sum c_k t^k`` kept modulo ``t^(order+1)``.

    Coefficients may come from any ring with ``+``, ``-`` and ``*``
    (Fraction, RatFun, OperatorElement); products keep factor order, so
    noncommutative coefficients are fine.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        if not coeffs:
            raise ValueError("need at least one coefficient to fix the ring")
        zero = coeffs[0] - coeffs[0]
        coeffs = coeffs[: order + 1]
        coeffs += [zero] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    def __len__(self):
        return self.order + 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def _zero(self):
        return self.coeffs[0] - self.coeffs[0]

    def zero_like(self):
        z = self._zero()
        return TruncSeries([z] * (self.order + 1), self.order)

    def one_like(self):
        z = self._zero()
        return TruncSeries([_unit_of(self.coeffs[0])] + [z] * self.order, self.order)

    def is_zero(self):
        return all(_is_zero(c) for c in self.coeffs)

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            if other.order != self.order:
                n = min(self.order, other.order)
                return TruncSeries(other.coeffs[: n + 1], n), n
            return other, self.order
        z = self._zero()
        return TruncSeries([z + other] + [z] * self.order, self.order), self.order

    def __add__(self, other):
        other, n = self._coerce(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        other, n = self._coerce(other)
        return TruncSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], n)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            if isinstance(other, (int, Fraction)):
                return TruncSeries([a * other for a in self.coeffs], self.order)
            return TruncSeries([a * other for a in self.coeffs], self.order)
        n = min(self.order, other.order)
        a = [(i, x) for i, x in enumerate(self.coeffs[: n + 1]) if not _is_zero(x)]
        b = [(j, y) for j, y in enumerate(other.coeffs[: n + 1]) if not _is_zero(y)]
        out = [None] * (n + 1)
        for i, x in a:
            for j, y in b:
                if i + j > n:
                    break
                p = x * y
                out[i + j] = p if out[i + j] is None else out[i + j] + p
        z = self._zero()
        return TruncSeries([z if c is None else c for c in out], n)

    def __rmul__(self, other):
        return TruncSeries([other * a for a in self.coeffs], self.order)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def truncate(self, order):
        return TruncSeries(self.coeffs[: order + 1], order)

    def __repr__(self):
        terms = [f"({c})*t^{k}" for k, c in enumerate(self.coeffs) if not _is_zero(c)]
        return f"TruncSeries[{self.order}](" + (" + ".join(terms) or "0") + ")"


def _is_zero(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def _unit_of(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(1)
    if isinstance(c, RatFun):
        return RatFun.const(1)
    return c.one_like()


def _invert_unit(c):
    if isinstance(c, (int, Fraction)):
        if c == 0:
            raise ZeroDivisionError("series constant term is not invertible")
        return 1 / Fraction(c)
    if isinstance(c, RatFun):
        if c.is_zero():
            raise ZeroDivisionError("series constant term is not invertible")
        return c.inverse()
    return c.inverse()


def series_invert(s, N=None):
    """Two-sided inverse of ``s`` modulo ``t^(N+1)``."""
    if N is None:
        N = s.order
    if N > s.order:
        raise ValueError(f"cannot invert to order {N} a series known to order {s.order}")
    try:
        r0 = _invert_unit(s[0])
    except (ZeroDivisionError, ValueError) as exc:
        raise ZeroDivisionError(f"series constant term is not invertible: {exc}") from None
    r = [r0]
    for k in range(1, N + 1):
        acc = None
        for j in range(1, k + 1):
            if _is_zero(s[j]):
                continue
            p = s[j] * r[k - j]
            acc = p if acc is None else acc + p
        if acc is None:
            r.append(s[0] - s[0])
        else:
            r.append(-(r0 * acc))
    return TruncSeries(r, N)
