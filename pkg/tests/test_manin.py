import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from manincheck import corpus
from manincheck.exact_arith import RatFun, TruncSeries
from manincheck.grammar import ParseError, format_matrix, parse_matrix
from manincheck.lax import GaudinSpec, build_gaudin, gaudin_operator
from manincheck.manin import (
    NotManinError,
    OpMatrix,
    adjugate,
    char_poly,
    column_det,
    is_cartier_foata,
    is_manin,
    laplace_det,
    one_minus_tN,
    permanent_row,
    row_det,
    schur_complement,
    series_matrix_inverse,
    split_blocks,
    trace_sym_power,
)
from manincheck.nc_core import commutator, presentation_build

W = presentation_build("weyl", n=1, k=1)
q, p = W.gen("q[1,1]"), W.gen("p[1,1]")
C4 = presentation_build("commutative", base="gl_sum", n=2, m=1)
a, b, c, d = (C4.gen(t) for t in ("e[1,1;1]", "e[1,2;1]", "e[2,1;1]", "e[2,2;1]"))
# a free-ish 2x2 over U(gl2): entries do not commute, no Manin property assumed
G = presentation_build("gl_sum", n=2, m=1)
A_, B_, C_, D_ = (G.gen(t) for t in ("e[1,1;1]", "e[1,2;1]", "e[2,1;1]", "e[2,2;1]"))


def mtv2():
    W2 = presentation_build("weyl", n=2, k=1)
    x, y = W2.gen("q[1,1]"), W2.gen("q[2,1]")
    dx, dy = W2.gen("p[1,1]"), W2.gen("p[2,1]")
    return OpMatrix([[x, dy], [y, dx]])


POSITIVES = [e.matrix() for e in corpus.default_corpus() if e.manin]
NEGATIVES = [e.matrix() for e in corpus.default_corpus() if not e.manin]


# --- predicate ----------------------------------------------------------------

def test_gaudin_operator_is_manin():
    L = build_gaudin(GaudinSpec(2, "standard"))
    assert is_manin(gaudin_operator(L)).is_manin


def test_commuting_entries_are_manin():
    assert is_manin(OpMatrix([[a, b], [c, d]])).is_manin


def test_witness_for_qp_matrix():
    rep = is_manin(OpMatrix([[q, p], [p, q]]))
    assert not rep.is_manin
    assert rep.failed_relation == (1, 1, 2, 1)
    assert rep.residual == W.scalar(-2)


def test_cartier_foata():
    assert is_cartier_foata(OpMatrix([[a, b], [c, d]])).is_manin
    assert not is_cartier_foata(OpMatrix([[q, q], [p, p]])).is_manin


# --- determinants and permanents ------------------------------------------------

def test_column_det_2x2():
    assert column_det(OpMatrix([[A_, B_], [C_, D_]])) == A_ * D_ - C_ * B_


def test_row_det_2x2():
    assert row_det(OpMatrix([[A_, B_], [C_, D_]])) == A_ * D_ - B_ * C_


def test_identity_det():
    assert column_det(OpMatrix.identity(3, W.one())) == W.one()


def test_commutative_det_matches_cofactor():
    rng = random.Random(3)
    C = presentation_build("commutative", base="weyl", n=3, k=1)
    gens = [C.gen(g.text) for g in C.generators]
    M = OpMatrix([[rng.choice(gens) + rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
    assert column_det(M) == laplace_det(M)
    assert row_det(M) == laplace_det(M)


def test_row_det_of_transpose():
    M = mtv2()
    assert is_manin(M).is_manin
    N = M.transpose()
    assert is_manin(N.transpose()).is_manin
    assert row_det(N) == column_det(M)


def test_permanent_examples():
    M = OpMatrix([[A_, B_], [C_, D_]])
    assert permanent_row(M) == A_ * D_ + B_ * C_
    assert permanent_row(OpMatrix.identity(3, W.one())) == W.one()
    ones = OpMatrix([[C4.one()] * 3 for _ in range(3)])
    assert permanent_row(ones) == C4.scalar(6)


def test_non_square_rejected():
    with pytest.raises(ValueError):
        column_det(OpMatrix([[q, p]]))


def test_adjugate_examples():
    M = mtv2()
    x, dy = M[0, 0], M[0, 1]
    y, dx = M[1, 0], M[1, 1]
    assert adjugate(M) == OpMatrix([[dx, -dy], [-y, x]])
    Id = OpMatrix.identity(2, W.one())
    assert adjugate(Id) == Id
    C3 = presentation_build("commutative", base="weyl", n=3, k=1)
    xs = [C3.gen(f"q[{i},1]") for i in (1, 2, 3)]
    z0 = C3.zero()
    D = OpMatrix([[xs[i] if i == j else z0 for j in range(3)] for i in range(3)])
    want = OpMatrix([[[xs[1] * xs[2], xs[0] * xs[2], xs[0] * xs[1]][i] if i == j else z0
                      for j in range(3)] for i in range(3)])
    assert adjugate(D) == want


def test_adjugate_rejects_non_manin():
    with pytest.raises(NotManinError) as info:
        adjugate(OpMatrix([[q, p], [p, q]]))
    assert info.value.report.failed_relation == (1, 1, 2, 1)


def test_char_poly_examples():
    Z = OpMatrix([[W.zero()] * 2 for _ in range(2)])
    assert [x.is_zero() for x in char_poly(Z).coeffs] == [True, True, False]
    M = mtv2()
    h = char_poly(M).coeffs
    assert h[2] == M.like().one_like()
    assert h[1] == -(M[0, 0] + M[1, 1])
    assert h[0] == M[0, 0] * M[1, 1] - M[1, 0] * M[0, 1]
    with pytest.raises(NotManinError):
        char_poly(OpMatrix([[q, p], [p, q]]))


def test_series_inverse_examples():
    Z = OpMatrix([[W.zero()] * 2 for _ in range(2)])
    inv = series_matrix_inverse(Z, 3)
    assert all(inv[i, j] == TruncSeries([W.scalar(int(i == j))], 3) for i in range(2) for j in range(2))
    N = OpMatrix([[C4.zero(), C4.one()], [C4.zero(), C4.zero()]])
    inv = series_matrix_inverse(N, 3)
    assert inv[0, 1] == TruncSeries([C4.zero(), C4.one()], 3)
    M = mtv2()
    inv = series_matrix_inverse(M, 4)
    A = one_minus_tN(M, 4)
    Id = OpMatrix.identity(2, A.like())
    assert A @ inv == Id and inv @ A == Id


def test_schur_examples():
    M = OpMatrix([[a, C4.zero()], [C4.zero(), d]])
    assert split_blocks(one_minus_tN(M, 3), 1)[3] == one_minus_tN(OpMatrix([[d]]), 3)
    low = schur_complement(one_minus_tN(M, 3), 1, "lower")
    assert low == one_minus_tN(OpMatrix([[d]]), 3)
    with pytest.raises(ValueError):
        split_blocks(one_minus_tN(M, 3), 0)


def test_trace_sym_power_small():
    M = OpMatrix([[a, b], [c, d]])
    assert trace_sym_power(M, 0) == C4.one()
    assert trace_sym_power(M, 1) == a + d
    tr = a + d
    tr2 = (M @ M).trace()
    assert trace_sym_power(M, 2) == (tr * tr + tr2) * Fraction(1, 2)


# --- corpus-driven invariants ------------------------------------------------------

@pytest.mark.parametrize("M", POSITIVES, ids=lambda M: f"{M.rows}x{M.rows}")
def test_column_order_independence(M):
    d0 = column_det(M)
    p0 = permanent_row(M)
    for order in itertools.permutations(range(M.rows)):
        assert column_det(M, order) == d0
        assert permanent_row(M, order) == p0
        permuted = OpMatrix([[row[j] for j in order] for row in M.entries])
        assert permanent_row(permuted) == p0


def test_some_negative_depends_on_order():
    assert any(corpus.column_order_sensitive(M) for M in NEGATIVES)


@pytest.mark.parametrize("M", POSITIVES, ids=lambda M: f"{M.rows}x{M.rows}")
def test_cramer_on_corpus(M):
    Id = OpMatrix.identity(M.rows, M.like())
    assert adjugate(M) @ M == Id.scale_left(column_det(M))


@pytest.mark.parametrize("M", POSITIVES[:6], ids=lambda M: f"{M.rows}x{M.rows}")
def test_submatrices_and_swaps(M):
    E = [list(r) for r in M.entries]
    for rows in itertools.combinations(range(M.rows), 2):
        for cols in itertools.combinations(range(M.rows), 2):
            assert is_manin(M.submatrix(rows, cols)).is_manin
    sw = OpMatrix([[r[1], r[0]] + r[2:] for r in E])
    assert column_det(sw) == -column_det(M)
    assert column_det(OpMatrix([E[0], E[0]] + E[2:])).is_zero()


def test_block_triangular_invariance_arbitrary_entry():
    M = mtv2()
    X = M[0, 0] * M[1, 1] + 3
    U = OpMatrix([[M.like().one_like(), X], [M.like().zero_like(), M.like().one_like()]])
    assert column_det(M @ U) == column_det(M)


def test_property_8_on_samples():
    for M in POSITIVES:
        if is_manin(M.transpose()).is_manin:
            ents = list(itertools.chain(*M.entries))
            assert all(commutator(x, y).is_zero() for x in ents for y in ents)


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_random_cartier_foata_is_manin(seed):
    rng = random.Random(seed)
    n = rng.choice((2, 3))
    W2 = presentation_build("weyl", n=n, k=1)
    rows = []
    for i in range(1, n + 1):
        g = [W2.gen(f"q[{i},1]"), W2.gen(f"p[{i},1]")]
        rows.append([g[0] * rng.randint(-2, 2) + g[1] * rng.randint(-2, 2) + rng.randint(-1, 1)
                     for _ in range(n)])
    M = OpMatrix(rows)
    assert is_cartier_foata(M).is_manin and is_manin(M).is_manin
    d0 = column_det(M)
    for order in itertools.permutations(range(n)):
        assert column_det(M, order) == d0


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_constant_multiplication(seed):
    rng = random.Random(seed)
    M = rng.choice(POSITIVES)
    n = M.rows
    one = M.like().one_like()
    K = OpMatrix([[one * rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
    assert is_manin(M @ K).is_manin
    assert column_det(M @ K) == column_det(M) * column_det(K)


# --- matrix literals ----------------------------------------------------------------

def test_matrix_literal_roundtrip():
    for e in corpus.default_corpus():
        M = e.matrix()
        assert parse_matrix(format_matrix(M), M.presentation, e.zkind) == M


def test_matrix_literal_errors():
    with pytest.raises(ParseError):
        parse_matrix("q[1,1]; p[1,1]\nq[1,1]", W)
    with pytest.raises(ParseError):
        parse_matrix("q[9,9]", W)
    M = parse_matrix("# comment\n(1/(z-1))*q[1,1]; p[1,1]\n1; 0", W)
    assert M[0, 0] == q.scale(RatFun.pole(1))
