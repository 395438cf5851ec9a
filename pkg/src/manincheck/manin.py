"""Matrices with noncommuting entries: Manin predicate, determinants, inverses.

Entries may be OperatorElements or TruncSeries over OperatorElements (the
``1 - tN`` device); everything here only uses ``+``, ``-``, ``*``,
``zero_like``, ``one_like`` and ``is_zero``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exact_arith import TruncSeries


class NotManinError(ValueError):
    def __init__(self, report, what="matrix"):
        self.report = report
        super().__init__(f"{what} is not Manin: relation {report.failed_relation} "
                         f"has residual {report.residual}")


@dataclass
class ManinReport:
    is_manin: bool
    failed_relation: tuple = None
    residual: object = None

    def __bool__(self):
        return self.is_manin


def _is_zero(x):
    return x.is_zero()


def _comm(a, b):
    return a * b - b * a


class OpMatrix:
    """Immutable rectangular matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(r) for r in entries)
        if not entries or not entries[0]:
            raise ValueError("empty matrix")
        if len({len(r) for r in entries}) != 1:
            raise ValueError("ragged matrix")
        self.entries = entries
        self.rows = len(entries)
        self.cols = len(entries[0])

    @classmethod
    def identity(cls, n, like):
        one, zero = like.one_like(), like.zero_like()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols, like):
        zero = like.zero_like()
        return cls([[zero] * cols for _ in range(rows)])

    @property
    def presentation(self):
        x = self.entries[0][0]
        if isinstance(x, TruncSeries):
            x = x.coeffs[0]
        return x.pres

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __iter__(self):
        return iter(self.entries)

    def is_square(self):
        return self.rows == self.cols

    def like(self):
        return self.entries[0][0]

    def map(self, fn):
        return OpMatrix([[fn(x) for x in r] for r in self.entries])

    def __add__(self, other):
        self._same_shape(other)
        return OpMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._same_shape(other)
        return OpMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    p = a * b
                    acc = p if acc is None else acc + p
                row.append(acc if acc is not None else self.like().zero_like() * other.like().zero_like())
            out.append(row)
        return OpMatrix(out)

    def scale_left(self, c):
        return self.map(lambda x: c * x)

    def scale_right(self, c):
        return self.map(lambda x: x * c)

    def transpose(self):
        return OpMatrix(list(zip(*self.entries)))

    def submatrix(self, rows, cols):
        return OpMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def minor(self, i, j):
        return self.submatrix([r for r in range(self.rows) if r != i],
                              [c for c in range(self.cols) if c != j])

    def is_zero(self):
        return all(x.is_zero() for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, OpMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and (self - other).is_zero()

    __hash__ = None

    def trace(self):
        acc = self.entries[0][0]
        for i in range(1, min(self.rows, self.cols)):
            acc = acc + self.entries[i][i]
        return acc

    def power(self, k):
        if not self.is_square():
            raise ValueError("power of non-square matrix")
        out = OpMatrix.identity(self.rows, self.like())
        for _ in range(k):
            out = out @ self
        return out

    def __str__(self):
        from .grammar import to_text

        def txt(x):
            if isinstance(x, TruncSeries):
                return repr(x)
            return to_text(x)
        return "\n".join("[" + "; ".join(txt(x) for x in r) + "]" for r in self.entries)

    def __repr__(self):
        return f"OpMatrix({self.rows}x{self.cols})"


def _require_square(M):
    if not M.is_square():
        raise ValueError(f"matrix must be square, got {M.rows}x{M.cols}")


def manin_relation(M, p, q, k, l):
    """``[M_pq, M_kl] - [M_kq, M_pl]`` (0-based indices)."""
    return _comm(M[p, q], M[k, l]) - _comm(M[k, q], M[p, l])


def is_manin(M):
    """Check the unified relation for all p<k, q<=l; first failure is the witness (1-based)."""
    for p, k in itertools.combinations(range(M.rows), 2):
        for q in range(M.cols):
            for l in range(q, M.cols):
                r = manin_relation(M, p, q, k, l)
                if not r.is_zero():
                    return ManinReport(False, (p + 1, q + 1, k + 1, l + 1), r)
    return ManinReport(True)


def is_cartier_foata(M):
    """Entries from different rows commute."""
    for i, k in itertools.combinations(range(M.rows), 2):
        for j in range(M.cols):
            for l in range(M.cols):
                r = _comm(M[i, j], M[k, l])
                if not r.is_zero():
                    return ManinReport(False, (i + 1, j + 1, k + 1, l + 1), r)
    return ManinReport(True)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _ordered_expansion(M, order, signed, by_column):
    """Sum over bijections with factors taken along ``order``.

    ``by_column``: order lists columns and each factor is M[sigma(c), c];
    otherwise order lists rows and factors are M[r, sigma(r)].
    Prefix products are shared across the depth-first enumeration and
    zero entries prune whole branches.
    """
    n = M.rows
    total = [None]

    def visit(depth, used, prefix, assign):
        if depth == n:
            if signed:
                s = _perm_sign(assign)
                term = prefix if s > 0 else -prefix
            else:
                term = prefix
            total[0] = term if total[0] is None else total[0] + term
            return
        fixed = order[depth]
        for free in range(n):
            if used & (1 << free):
                continue
            x = M[free, fixed] if by_column else M[fixed, free]
            if x.is_zero():
                continue
            nxt = x if prefix is None else prefix * x
            if nxt.is_zero():
                continue
            a = list(assign)
            if by_column:
                a[fixed] = free
            else:
                a[fixed] = free
            visit(depth + 1, used | (1 << free), nxt, a)

    visit(0, 0, None, [0] * n)
    if total[0] is None:
        return M.like().zero_like()
    return total[0]


def _check_order(order, n):
    if order is None:
        return list(range(n))
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"{order} is not a permutation of 0..{n - 1}")
    return order


def column_det(M, column_order=None):
    """``sum_sigma sgn(sigma) M[sigma(c1),c1] M[sigma(c2),c2] ...`` over the column order."""
    _require_square(M)
    return _ordered_expansion(M, _check_order(column_order, M.rows), True, True)


def row_det(M, row_order=None):
    """``sum_sigma sgn(sigma) M[r1,sigma(r1)] M[r2,sigma(r2)] ...`` over the row order."""
    _require_square(M)
    return _ordered_expansion(M, _check_order(row_order, M.rows), True, False)


def permanent_row(M, row_order=None):
    _require_square(M)
    return _ordered_expansion(M, _check_order(row_order, M.rows), False, False)


def permanent_column(M, column_order=None):
    _require_square(M)
    return _ordered_expansion(M, _check_order(column_order, M.rows), False, True)


def _require_manin(M, what):
    rep = is_manin(M)
    if not rep.is_manin:
        raise NotManinError(rep, what)


def adjugate(M, check=True):
    """``adj[k][l] = (-1)^(k+l) column_det(M without row l and column k)``."""
    _require_square(M)
    if check:
        _require_manin(M, "adjugate input")
    n = M.rows
    if n == 1:
        return OpMatrix([[M.like().one_like()]])
    out = []
    for k in range(n):
        row = []
        for l in range(n):
            d = column_det(M.minor(l, k))
            row.append(d if (k + l) % 2 == 0 else -d)
        out.append(row)
    return OpMatrix(out)


class TPoly:
    """Polynomial ``sum h_i t^i`` in a central variable with element coefficients."""

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    def __getitem__(self, i):
        if i < 0 or i >= len(self.coeffs):
            return self.coeffs[0].zero_like()
        return self.coeffs[i]

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def left_substitute(self, powers):
        """``sum h_i * P_i`` for a list of matrices ``P_i`` (coefficients on the left)."""
        acc = None
        for h, P in zip(self.coeffs, powers):
            term = P.scale_left(h)
            acc = term if acc is None else acc + term
        return acc

    def __repr__(self):
        return "TPoly(" + ", ".join(str(c) for c in self.coeffs) + ")"


def t_minus(M, order=None):
    """``t*Id - M`` with TruncSeries entries (order n suffices for the determinant)."""
    n = M.rows
    order = n if order is None else order
    one = M.like().one_like()

    def entry(i, j):
        x = -M[i, j]
        return TruncSeries([x, one] if i == j else [x], order)
    return OpMatrix([[entry(i, j) for j in range(M.cols)] for i in range(M.rows)])


def char_poly(M, check=True):
    """Coefficients of ``column_det(t - M)``, ``t`` central."""
    _require_square(M)
    if check:
        _require_manin(M, "char_poly input")
    d = column_det(t_minus(M))
    return TPoly(list(d.coeffs[: M.rows + 1]))


def one_minus_tN(N, trunc):
    one = N.like().one_like()
    zero = N.like().zero_like()

    def entry(i, j):
        return TruncSeries([one if i == j else zero, -N[i, j]], trunc)
    return OpMatrix([[entry(i, j) for j in range(N.cols)] for i in range(N.rows)])


def series_entries(M, trunc):
    """Lift an element matrix to constant TruncSeries entries."""
    return M.map(lambda x: TruncSeries([x], trunc))


def powers(N, k):
    out = [OpMatrix.identity(N.rows, N.like())]
    for _ in range(k):
        out.append(out[-1] @ N)
    return out


def series_matrix_inverse(N, trunc):
    """``(1 - tN)^{-1} = sum_{k<=trunc} t^k N^k`` as a TruncSeries matrix."""
    _require_square(N)
    P = powers(N, trunc)
    n = N.rows
    return OpMatrix([[TruncSeries([P[k][i, j] for k in range(trunc + 1)], trunc)
                      for j in range(n)] for i in range(n)])


def series_block_inverse(A):
    """Inverse of a TruncSeries matrix whose t^0 part is the identity."""
    n = A.rows
    like = A.like()
    order = like.order
    Id = OpMatrix.identity(n, like)
    X = Id - A
    for i in range(n):
        for j in range(n):
            c0 = X[i, j].coeffs[0]
            if not c0.is_zero():
                raise ValueError("block does not have unit constant term in t")
    acc, P = Id, Id
    for _ in range(order):
        P = P @ X
        if P.is_zero():
            break
        acc = acc + P
    return acc


def split_blocks(M, k):
    n = M.rows
    if not (1 <= k <= n - 1):
        raise ValueError(f"invalid block size {k} for {n}x{n} matrix")
    a, b = list(range(k)), list(range(k, n))
    return (M.submatrix(a, a), M.submatrix(a, b), M.submatrix(b, a), M.submatrix(b, b))


def schur_complement(M, k, side="lower"):
    """``D - C A^{-1} B`` (lower) or ``A - B D^{-1} C`` (upper) for TruncSeries M."""
    _require_square(M)
    A, B, C, D = split_blocks(M, k)
    if side == "lower":
        return D - C @ series_block_inverse(A) @ B
    if side == "upper":
        return A - B @ series_block_inverse(D) @ C
    raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")


def trace_sym_power(M, n, check=True):
    """``(1/n!) sum_{l in [1..N]^n} perm_row(M_{l_a, l_b})``.

    Grouping index tuples by their multiset, the sum becomes
    ``sum_{multisets} (n!/prod m_i!) / n! * perm_row(M_L)`` where the
    repeated-index submatrix's row permanent itself is evaluated by a
    memoized recursion over remaining column multiplicities.
    """
    _require_square(M)
    if check:
        _require_manin(M, "trace_sym_power input")
    N = M.rows
    like = M.like()
    if n == 0:
        return like.one_like()
    total = like.zero_like()
    for combo in itertools.combinations_with_replacement(range(N), n):
        mult = {}
        for x in combo:
            mult[x] = mult.get(x, 0) + 1
        weight = Fraction(1)
        for m in mult.values():
            weight /= factorial(m)
        p = _multiset_row_permanent(M, combo)
        if not p.is_zero():
            total = total + p * weight
    return total


def _multiset_row_permanent(M, rows):
    """Row permanent of the submatrix with row and column index list ``rows``."""
    cols = sorted(set(rows))
    start = tuple(rows.count(c) for c in cols)
    memo = {}

    def rec(depth, remaining):
        if depth == len(rows):
            return None  # empty product
        key = (depth, remaining)
        if key in memo:
            return memo[key]
        r = rows[depth]
        acc = None
        for idx, c in enumerate(cols):
            m = remaining[idx]
            if not m:
                continue
            x = M[r, c]
            if x.is_zero():
                continue
            rest = rec(depth + 1, remaining[:idx] + (m - 1,) + remaining[idx + 1:])
            if rest is not None and rest.is_zero():
                continue
            term = x if rest is None else x * rest
            # each of the m equal columns gives the same factor
            term = term * m
            acc = term if acc is None else acc + term
        if acc is None:
            acc = M.like().zero_like()
        memo[key] = acc
        return acc

    out = rec(0, start)
    return M.like().one_like() if out is None else out


def laplace_det(M):
    """Cofactor expansion along the first row; commutative entries only."""
    n = M.rows
    if n == 1:
        return M[0, 0]
    acc = None
    for j in range(n):
        x = M[0, j]
        if x.is_zero():
            continue
        term = x * laplace_det(M.minor(0, j))
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else M.like().zero_like()


def truncate_matrix(M, order):
    return M.map(lambda s: s.truncate(order))


def series_coeff_matrix(M, k):
    return M.map(lambda s: s.coeffs[k])


def series_is_manin(M):
    """Manin check for TruncSeries-entried matrices (exact mod t^{order+1})."""
    return is_manin(M)
