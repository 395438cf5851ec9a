import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from manincheck.exact_arith import PoleError, RatFun
from manincheck.grammar import parse_element, to_text
from manincheck.nc_core import (
    PresentationMismatch,
    ZKindMismatch,
    abelianize,
    all_generator_elements,
    anti_wick,
    commutator,
    evaluate_z,
    formal_conjugate,
    normal_form,
    presentation_build,
    random_element,
    random_ratfun,
    wick,
)

z = RatFun.z()

KINDS = {
    "weyl": dict(n=2, k=1),
    "gl_sum": dict(n=2, m=2),
    "gl_poly": dict(n=2, N=2),
    "toda": dict(n=2),
    "commutative": dict(base="weyl", n=2, k=1),
}


def W(n=1, k=1):
    return presentation_build("weyl", n=n, k=k)


# --- presentations ------------------------------------------------------------

def test_weyl_single_relation():
    pres = W()
    assert len(pres.table) == 1
    p, q = pres.gen("p[1,1]"), pres.gen("q[1,1]")
    assert commutator(p, q) == pres.one()


def test_commutative_empty_table():
    pres = presentation_build("commutative", base="weyl", n=2, k=1)
    assert len(pres.generators) == 4
    assert not pres.table


def test_gl2_bracket():
    pres = presentation_build("gl_sum", n=2, m=1)
    assert len(pres.table) == 5  # every pair except (e11, e22)
    e = {t: pres.gen(t) for t in ("e[1,1;1]", "e[1,2;1]", "e[2,1;1]", "e[2,2;1]")}
    assert commutator(e["e[1,2;1]"], e["e[2,1;1]"]) == e["e[1,1;1]"] - e["e[2,2;1]"]


def test_unknown_kind():
    with pytest.raises(ValueError):
        presentation_build("octonion", n=2)


def test_sites_commute():
    pres = presentation_build("gl_sum", n=2, m=2)
    assert commutator(pres.gen("e[1,2;1]"), pres.gen("e[2,1;2]")).is_zero()


def test_toda_exponential():
    pres = presentation_build("toda", n=2)
    E, p = pres.gen("E[1]"), pres.gen("p[1]")
    assert commutator(p, E) == E
    assert E * E.inverse() == pres.one()
    assert commutator(pres.gen("p[2]"), E).is_zero()


# --- normal form ---------------------------------------------------------------

def test_normal_form_examples():
    pres = W()
    q, p = pres.generators[0], pres.generators[1]
    assert normal_form([(1, [p, q])], pres) == pres.gen(q) * pres.gen(p) + 1
    got = normal_form([(1, [("dz", 1), 1 / z])], pres, "diff")
    assert got == pres.coef(1 / z, "diff") * pres.dz() - pres.coef(1 / (z * z), "diff")
    got = normal_form([(1, [("S", 1), 1 / z])], pres, "shift")
    assert got == pres.coef(1 / (z + 1), "shift") * pres.shift(1)


def test_multiply_examples():
    pres = W()
    q, p = pres.gen("q[1,1]"), pres.gen("p[1,1]")
    assert pres.one() * p == p
    assert str(q * p) == "q[1,1]*p[1,1]"
    assert p * q == q * p + 1


def test_commutator_examples():
    pres = W()
    x = pres.gen("q[1,1]") + pres.gen("p[1,1]")
    assert commutator(x, x).is_zero()
    assert commutator(pres.dz(), pres.coef(1 / z, "diff")) == -pres.coef(1 / (z * z), "diff")


def test_mixing_errors():
    a = W().gen("q[1,1]")
    b = presentation_build("gl_sum", n=2, m=1).gen("e[1,1;1]")
    with pytest.raises(PresentationMismatch):
        a * b
    pres = W()
    with pytest.raises(ZKindMismatch):
        pres.dz() * pres.shift(1)


def test_formal_conjugate_examples():
    pres = W()
    f = pres.coef(1 / z, "diff")
    assert formal_conjugate(f) == f
    assert formal_conjugate(pres.dz()) == -pres.dz()
    assert formal_conjugate(f * pres.dz()) == -f * pres.dz() + pres.coef(1 / (z * z), "diff")


def test_wick_examples():
    W1 = W()
    C = W1.abelian()
    lam = C.gen("lam")
    q, p = C.gen("q[1,1]"), C.gen("p[1,1]")
    assert wick(lam, W1) == W1.dz()
    assert wick(p * q, W1) == W1.gen("q[1,1]") * W1.gen("p[1,1]")
    f = C.coef(1 / (z - 2))
    assert wick(f * lam * lam, W1) == W1.coef(1 / (z - 2), "diff") * W1.dz(2)
    assert anti_wick(p * q, W1) == W1.gen("p[1,1]") * W1.gen("q[1,1]")


def test_abelianize_examples():
    pres = W()
    q, p = pres.gen("q[1,1]"), pres.gen("p[1,1]")
    C = pres.abelian()
    assert abelianize(q * p + 1) == C.gen("p[1,1]") * C.gen("q[1,1]") + 1
    assert abelianize(commutator(p, q)) == C.one()
    f = pres.coef(1 / z, "diff")
    assert abelianize(f * pres.dz()) == C.coef(1 / z) * C.gen("lam")


def test_evaluate_z():
    pres = presentation_build("gl_sum", n=2, m=1)
    e = pres.gen("e[1,1;1]")
    assert evaluate_z(e.scale(RatFun.pole(1)), 2) == e
    assert evaluate_z(e + 3, 5) == e + 3
    with pytest.raises(PoleError):
        evaluate_z(e.scale(RatFun.pole(1)), 1)


def test_text_roundtrip():
    pres = W(2, 1)
    x = parse_element("(1/(z-1))*q[1,1]*p[2,1]*dz^2 - 3/2*dz + q[2,1]^2", pres, "diff")
    assert parse_element(to_text(x), pres, "diff") == x


# --- properties ----------------------------------------------------------------

seeds = st.integers(0, 2 ** 32 - 1)


def _rand(pres, rng, zkind):
    x = random_element(pres, rng, zkind=zkind)
    if pres.kind != "commutative" and rng.random() < 0.5:
        x = pres.coef(random_ratfun(rng), zkind) * x
    return x


@pytest.mark.parametrize("kind", sorted(KINDS))
@pytest.mark.parametrize("zkind", ["none", "diff", "shift"])
@given(seed=seeds)
@settings(max_examples=100, deadline=None)
def test_associativity(kind, zkind, seed):
    pres = presentation_build(kind, **KINDS[kind])
    rng = random.Random(seed)
    a, b, c = (_rand(pres, rng, zkind) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("kind", sorted(KINDS))
@given(seed=seeds)
@settings(max_examples=40, deadline=None)
def test_jacobi_on_generators(kind, seed):
    pres = presentation_build(kind, **KINDS[kind])
    rng = random.Random(seed)
    gens = all_generator_elements(pres)
    x, y, w = (rng.choice(gens) for _ in range(3))
    assert commutator(x, y) == -commutator(y, x)
    jac = commutator(x, commutator(y, w)) + commutator(y, commutator(w, x)) + commutator(w, commutator(x, y))
    assert jac.is_zero()


@given(seed=seeds)
@settings(max_examples=60, deadline=None)
def test_normal_form_idempotent(seed):
    pres = W(2, 1)
    x = _rand(pres, random.Random(seed), "diff")
    assert normal_form([(1, [x])], pres, "diff") == x


@given(seed=seeds)
@settings(max_examples=60, deadline=None)
def test_leibniz_and_shift(seed):
    pres = W()
    f = random_ratfun(random.Random(seed))
    F = pres.coef(f, "diff")
    assert pres.dz() * F - (F * pres.dz() + pres.coef(f.derive(), "diff")) == pres.zero("diff")
    G = pres.coef(f, "shift")
    assert pres.shift(1) * G == pres.coef(f.shift(1), "shift") * pres.shift(1)


@given(seed=seeds)
@settings(max_examples=60, deadline=None)
def test_abelianize_top_degree(seed):
    pres = W(2, 1)
    rng = random.Random(seed)
    a, b = random_element(pres, rng), random_element(pres, rng)
    lhs, rhs = abelianize(a * b), abelianize(a) * abelianize(b)
    d = rhs.degree()
    assert lhs.top_part(d) == rhs.top_part(d)


@given(seed=seeds)
@settings(max_examples=60, deadline=None)
def test_formal_conjugate_involution_and_antihom(seed):
    pres = W()
    rng = random.Random(seed)

    def op():
        x = pres.zero("diff")
        for k in range(rng.randint(1, 3)):
            x = x + pres.coef(random_ratfun(rng), "diff") * pres.dz(k)
        return x
    A, B = op(), op()
    assert formal_conjugate(formal_conjugate(A)) == A
    assert formal_conjugate(A * B) == formal_conjugate(B) * formal_conjugate(A)


@given(seed=seeds)
@settings(max_examples=40, deadline=None)
def test_shift_conjugate_involution(seed):
    pres = W()
    rng = random.Random(seed)
    A = pres.zero("shift")
    for k in (-1, 0, 2):
        A = A + pres.coef(random_ratfun(rng), "shift") * pres.shift(k)
    assert formal_conjugate(formal_conjugate(A)) == A


@given(seed=seeds)
@settings(max_examples=40, deadline=None)
def test_text_roundtrip_random(seed):
    pres = presentation_build("gl_sum", n=2, m=2)
    x = _rand(pres, random.Random(seed), "shift")
    assert parse_element(to_text(x), pres, "shift") == x


def test_evaluate_rational_point():
    pres = W()
    x = pres.gen("q[1,1]").scale(1 / (z - Fraction(1, 2)))
    assert evaluate_z(x, Fraction(3, 2)) == pres.gen("q[1,1]")
