"""Theorem checks on top of the Manin and Lax layers.

Every check is an exact zero-residual statement.  Functions return a
:class:`CheckReport`; negative controls are recorded with
``expect_nonzero`` so that a report passes only if the control fails.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .exact_arith import Poly, RatFun, TruncSeries, series_invert
from .lax import (
    GaudinSpec,
    build_gaudin,
    evaluation_points,
    gaudin_operator,
    gaudin_presentation,
    yangian_operator,
)
from .manin import (
    NotManinError,
    OpMatrix,
    adjugate,
    char_poly,
    column_det,
    is_cartier_foata,
    is_manin,
    laplace_det,
    one_minus_tN,
    powers,
    row_det,
    series_matrix_inverse,
    trace_sym_power,
)
from .nc_core import (
    abelianize,
    anti_wick,
    commutator,
    evaluate_z,
    formal_conjugate,
    presentation_build,
    wick,
)
from .report import CheckReport


def _zero_matrix_residual(M):
    """Sum of all entries would hide cancellations; return the first nonzero entry."""
    for row in M.entries:
        for x in row:
            if not x.is_zero():
                return x
    return M.like().zero_like()


def _check_matrix(rep, label, M):
    rep.checks_run += 1
    for i, row in enumerate(M.entries):
        for j, x in enumerate(row):
            if not x.is_zero():
                rep.residuals.append((f"{label} entry ({i + 1},{j + 1})", x))
                return False
    return True


# --- quantum characteristic polynomials ------------------------------------

@dataclass
class QHFamily:
    kind: str
    coefficients: list
    n: int

    def __getitem__(self, i):
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return self.coefficients[0].zero_like()


def talalaev_qh(M, kind="gaudin"):
    """QH_i of a Gaudin ``L`` (from det(dz - L)) or a Yangian ``T`` (from det(t - T S^-1))."""
    if kind == "gaudin":
        op = gaudin_operator(M)
        D = column_det(op)
        n = M.rows
        qh = [D.zcoeff(i) for i in range(n + 1)]
        pres = M.presentation
        recon = pres.zero("diff")
        for i, h in enumerate(qh):
            recon = recon + h * pres.dz(i)
        if not (recon - D).is_zero():
            raise ArithmeticError("QH reconstruction failed")
        if D.zpowers() and max(D.zpowers()) > n:
            raise ArithmeticError("unexpected dz power in det(dz - L)")
        return QHFamily("gaudin", qh, n)
    if kind == "yangian":
        n = M.rows
        pres = M.presentation
        hs = char_poly(yangian_operator(M, "T_Sinv"), check=False).coeffs
        qh = []
        for k, h in enumerate(hs):
            stripped = h * pres.shift(n - k)
            if stripped.has_zoperator():
                raise ArithmeticError(f"QH_{k} still carries shift operators")
            qh.append(stripped.as_zkind("none"))
        for k, (h, q) in enumerate(zip(hs, qh)):
            if not (q.as_zkind("shift") * pres.shift(k - n) - h).is_zero():
                raise ArithmeticError("Yangian QH reconstruction failed")
        return QHFamily("yangian", qh, n)
    raise ValueError(f"unknown kind {kind!r}")


def _eval_cache(elements, points):
    return {(i, u): evaluate_z(x, u) for i, x in enumerate(elements) for u in points}


def commutativity_suite(family, point_pairs, labels=None, name="commutativity", rep=None):
    """All ``[F_i(u), F_j(v)]`` for the given point pairs (both orders of i, j)."""
    rep = rep or CheckReport(name)
    labels = labels or [f"F{i}" for i in range(len(family))]
    pts = sorted({Fraction(p) for pair in point_pairs for p in pair})
    ev = _eval_cache(family, pts)
    for u, v in point_pairs:
        u, v = Fraction(u), Fraction(v)
        for i in range(len(family)):
            for j in range(len(family)):
                if u == v and j <= i:
                    continue
                rep.check(f"[{labels[i]}({u}),{labels[j]}({v})]",
                          commutator(ev[(i, u)], ev[(j, v)]))
    return rep


def _numerator_degree_bound(x):
    """Degree in z of the numerator after clearing all coefficient denominators of x."""
    dens = [f.den for f in x.terms.values()]
    lcm = Poly([1])
    for d in dens:
        g = lcm.gcd(d)
        lcm = lcm * d.divmod(g)[0]
    best = 0
    for f in x.terms.values():
        best = max(best, f.num.degree + lcm.degree - f.den.degree)
    return best, lcm


def commutativity_certificate(family, labels=None, avoid=(), name="commutativity.all_uv", rep=None):
    """Prove ``[F_i(u), F_j(v)] = 0`` for all u, v.

    The second argument is kept symbolic in z.  After clearing the
    denominators of F_i the residual is polynomial in u of degree at most
    the bound computed here, so vanishing at bound+1 points suffices.
    """
    rep = rep or CheckReport(name)
    labels = labels or [f"F{i}" for i in range(len(family))]
    avoid = {Fraction(a) for a in avoid}
    for i, x in enumerate(family):
        bound, den = _numerator_degree_bound(x)
        pts, cand = [], Fraction(2)
        while len(pts) < bound + 1:
            if cand not in avoid and den(cand) != 0:
                pts.append(cand)
            cand += 1
        rep.note(f"{labels[i]}: degree bound {bound}, {len(pts)} points")
        for u in pts:
            xu = evaluate_z(x, u)
            for j, y in enumerate(family):
                rep.check(f"[{labels[i]}({u}),{labels[j]}(z)]", commutator(xu, y))
    return rep


def default_pairs(points):
    return list(itertools.combinations(points, 2))


# --- spectral identities ----------------------------------------------------

def ch_check(M, variant="column", name="ch", rep=None):
    """Cayley-Hamilton with coefficients on the left (column) or the row variant."""
    rep = rep or CheckReport(name)
    n = M.rows
    if variant == "column":
        h = char_poly(M)
        P = powers(M, n)
        _check_matrix(rep, "sum h_i M^i", h.left_substitute(P))
    else:
        rep_t = is_manin(M.transpose())
        if not rep_t.is_manin:
            raise NotManinError(rep_t, "transpose")
        from .manin import t_minus
        d = row_det(t_minus(M))
        P = powers(M, n)
        acc = None
        for i in range(n + 1):
            term = P[i].scale_right(d.coeffs[i])
            acc = term if acc is None else acc + term
        _check_matrix(rep, "sum M^i h_i (row)", acc)
    return rep


def newton_identities(M, k_min=-2, swapped=False):
    """Residuals ``k h_k - sum_i h_{k+i} Tr M^i`` for k in [k_min, n]."""
    n = M.rows
    h = char_poly(M).coeffs
    like = M.like()
    zero = like.zero_like()

    def hk(k):
        return h[k] if 0 <= k <= n else zero

    top = n - k_min
    tr = [like.one_like() * n] + [P.trace() for P in powers(M, top)[1:]]
    out = {}
    for k in range(k_min, n + 1):
        lhs = hk(k) * k
        rhs = zero
        for i in range(max(0, -k), n - k + 1):
            rhs = rhs + (tr[i] * hk(k + i) if swapped else hk(k + i) * tr[i])
        out[k] = lhs - rhs
    return out


def newton_check(M, k_min=-2, name="newton", rep=None):
    rep = rep or CheckReport(name)
    for k, r in newton_identities(M, k_min).items():
        rep.check(f"Newton k={k}", r)
    return rep


def macmahon_check(M, trunc=5, name="macmahon", rep=None):
    rep = rep or CheckReport(name)
    if not is_manin(M).is_manin:
        raise NotManinError(is_manin(M), "macmahon input")
    det1 = column_det(one_minus_tN(M, trunc))
    inv = series_invert(det1, trunc)
    for m in range(trunc + 1):
        rep.check(f"t^{m}: 1/det(1-tM) - Tr S^{m} M", inv[m] - trace_sym_power(M, m, check=False))
    return rep


def cramer_check(M, name="cramer", rep=None):
    rep = rep or CheckReport(name)
    A = adjugate(M)
    d = column_det(M)
    Id = OpMatrix.identity(M.rows, M.like())
    _check_matrix(rep, "adj(M) M - det(M) Id", A @ M - Id.scale_left(d))
    return rep


def inverse_check(N, trunc=5, name="inverse", rep=None):
    """(1-tN)^{-1} is Manin mod t^{trunc+1}, two-sided, and det is multiplicative."""
    rep = rep or CheckReport(name)
    inv = series_matrix_inverse(N, trunc)
    A = one_minus_tN(N, trunc)
    Id = OpMatrix.identity(N.rows, A.like())
    _check_matrix(rep, "(1-tN) inv - 1", A @ inv - Id)
    _check_matrix(rep, "inv (1-tN) - 1", inv @ A - Id)
    mr = is_manin(inv)
    rep.check_true("inverse is Manin", mr.is_manin, f"relation {mr.failed_relation}: {mr.residual}")
    prod = column_det(inv) * column_det(A)
    rep.check("det(inv) det(1-tN) - 1", prod - prod.one_like())
    return rep


def schur_check(N, k, trunc=5, name="schur", rep=None):
    from .manin import schur_complement, split_blocks
    rep = rep or CheckReport(name)
    M = one_minus_tN(N, trunc)
    A, B, C, D = split_blocks(M, k)
    dM = column_det(M)
    low = schur_complement(M, k, "lower")
    up = schur_complement(M, k, "upper")
    rep.check("det M - det A det(D - C A^-1 B)", dM - column_det(A) * column_det(low))
    rep.check("det M - det D det(A - B D^-1 C)", dM - column_det(D) * column_det(up))
    for lab, S in (("lower", low), ("upper", up)):
        mr = is_manin(S)
        rep.check_true(f"{lab} complement Manin", mr.is_manin,
                       f"relation {mr.failed_relation}: {mr.residual}")
    return rep


# --- Gaudin quantum powers and Nazarov elements ------------------------------

def quantum_powers_gaudin(L, k_max):
    out = [OpMatrix.identity(L.rows, L.like())]
    for _ in range(k_max):
        prev = out[-1]
        out.append(prev @ L + prev.map(lambda x: x.derive_z()))
    return out


def binomial_check(L, k_max, name="gaudin.binomial", rep=None):
    """``(dz - L)^i = sum_p (-1)^p C(i,p) dz^(i-p) L^[p]``."""
    rep = rep or CheckReport(name)
    pres = L.presentation
    Q = quantum_powers_gaudin(L, k_max)
    op = gaudin_operator(L)
    P = powers(op, k_max)
    for i in range(k_max + 1):
        acc = None
        for p in range(i + 1):
            c = (-1) ** p * comb(i, p)
            dzk = pres.dz(i - p)
            term = Q[p].map(lambda x: (dzk * x.as_zkind("diff")) * c)
            acc = term if acc is None else acc + term
        _check_matrix(rep, f"(dz-L)^{i} binomial", P[i] - acc)
    return rep


def gaudin_power_commutativity(L, k_max, point_pairs, name="gaudin.qpowers", rep=None):
    rep = rep or CheckReport(name)
    Q = quantum_powers_gaudin(L, k_max)
    traces = [Q[k].trace() for k in range(1, k_max + 1)]
    qh = talalaev_qh(L).coefficients
    fam = traces + qh
    labels = [f"TrL[{k}]" for k in range(1, k_max + 1)] + [f"QH{i}" for i in range(len(qh))]
    # trace/trace and QH/trace pairs; QH/QH pairs live in the QH suite
    pts = sorted({Fraction(p) for pair in point_pairs for p in pair})
    ev = _eval_cache(fam, pts)
    nt = len(traces)
    for u, v in point_pairs:
        u, v = Fraction(u), Fraction(v)
        for a in range(len(fam)):
            for b in range(nt):
                rep.check(f"[{labels[a]}({u}),{labels[b]}({v})]", commutator(ev[(a, u)], ev[(b, v)]))
    return rep


def raw_power_control(L, point_pairs, powers_=(4, 2), name="raw powers", rep=None):
    """Negative control: traces of plain powers need not commute."""
    rep = rep or CheckReport(name)
    a, b = powers_
    Ta, Tb = L.power(a).trace(), L.power(b).trace()
    found = None
    for u, v in point_pairs:
        r = commutator(evaluate_z(Ta, u), evaluate_z(Tb, v))
        if not r.is_zero():
            found = r
            break
    if found is None:
        found = Ta.zero_like()
    rep.expect_nonzero(f"[Tr L^{a}, Tr L^{b}]", found)
    return rep


def nazarov_elements(L, k_max):
    op = gaudin_operator(L)
    out = []
    for m in range(1, k_max + 1):
        c0 = trace_sym_power(op, m).zcoeff(0)
        out.append(c0 if m % 2 == 0 else -c0)
    return out


# --- Yangian ------------------------------------------------------------------

def quantum_powers_yangian(T, p_max):
    """``T^[p] = T(z+p) ... T(z+1)``, checked against ``S^p (T S^-1)^p``."""
    out = [OpMatrix.identity(T.rows, T.like())]
    for p in range(1, p_max + 1):
        out.append(T.map(lambda x, p=p: x.shift_z(p)) @ out[-1])
    return out


def yangian_qpower_check(T, p_max=3, name="yangian.qpowers", rep=None):
    rep = rep or CheckReport(name)
    pres = T.presentation
    Q = quantum_powers_yangian(T, p_max)
    P = powers(yangian_operator(T, "T_Sinv"), p_max)
    for p in range(p_max + 1):
        Sp = pres.shift(p)
        alt = P[p].map(lambda x: Sp * x.as_zkind("shift"))
        _check_matrix(rep, f"T^[{p}] two definitions", alt - Q[p].map(lambda x: x.as_zkind("shift")))
    return rep


def qdet(T, sign=1):
    """``sum_sigma sgn(sigma) prod_k T_{sigma(k),k}(z - sign*(k-1))``, k ascending."""
    n = T.rows
    cols = [[T[i, k].shift_z(-sign * k) for i in range(n)] for k in range(n)]
    total = T.like().zero_like()
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = cols[0][perm[0]]
        for k in range(1, n):
            term = term * cols[k][perm[k]]
        total = total + (term if inv % 2 == 0 else -term)
    return total


def yangian_qdet_check(T, name="yangian.qdet", rep=None):
    rep = rep or CheckReport(name)
    pres = T.presentation
    n = T.rows
    q = qdet(T).as_zkind("shift")
    lhs = column_det(yangian_operator(T, "T_Sinv"))
    rep.check("det_col(T S^-1) - qdet S^-n", lhs - q * pres.shift(-n))
    S = pres.shift(1)
    rowd = row_det(T.map(lambda x: S * x))
    rep.check("det_row(S T) - S^n qdet", rowd - pres.shift(n) * q)
    wrong = qdet(T, sign=-1).as_zkind("shift")
    rep.expect_nonzero("qdet with z-k-1 shifts", lhs - wrong * pres.shift(-n))
    fam = talalaev_qh(T, "yangian")
    rep.check("QH_0 - (-1)^n qdet", fam[0] - (qdet(T) if n % 2 == 0 else -qdet(T)))
    return rep


def yangian_ch_check(T, name="yangian.ch", rep=None):
    rep = rep or CheckReport(name)
    n = T.rows
    qh = talalaev_qh(T, "yangian").coefficients
    Q = quantum_powers_yangian(T, n)
    acc = None
    bad = None
    for k in range(n + 1):
        term = Q[k].scale_left(qh[k].shift_z(n))
        acc = term if acc is None else acc + term
        wterm = Q[k].scale_left(qh[k])
        bad = wterm if bad is None else bad + wterm
    _check_matrix(rep, "sum QH_k(z+n) T^[k](z)", acc)
    rep.expect_nonzero("shift z+n dropped", _zero_matrix_residual(bad))
    return rep


def yangian_newton_check(T, k_min=-2, point_pairs=(), name="yangian.newton", rep=None):
    rep = rep or CheckReport(name)
    n = T.rows
    qh = talalaev_qh(T, "yangian").coefficients
    zero = T.like().zero_like()
    top = n - k_min
    Q = quantum_powers_yangian(T, top)
    tr = [q.trace() for q in Q]

    def QH(k, c):
        return qh[k].shift_z(c) if 0 <= k <= n else zero

    for k in range(k_min, n + 1):
        c = n - k
        lhs = QH(k, c) * k
        rhs = zero
        for i in range(max(0, -k), n - k + 1):
            rhs = rhs + QH(k + i, c) * tr[i]
        rep.check(f"Yangian Newton k={k}", lhs - rhs)
    if point_pairs:
        fam = tr[1:n + 1] + qh
        labels = [f"TrT[{i}]" for i in range(1, n + 1)] + [f"QH{i}" for i in range(n + 1)]
        commutativity_suite(fam, point_pairs, labels, rep=rep)
    return rep


def z_coefficient(x, m):
    """Coefficient of z^m in an element whose coefficients are polynomials in z."""
    terms = {}
    for key, f in x.terms.items():
        if f.den.degree > 0:
            raise ValueError("z_coefficient needs polynomial coefficients")
        c = f.num.c[m] / f.den.c[0] if m < len(f.num.c) else 0
        if c:
            terms[key] = RatFun.const(c)
    return x.pres.element(terms, x.zkind)


def toda_trace_check(n, name="toda.trace", rep=None):
    """Top coefficients of Tr T for the closed Toda chain: -sum p_i, then sum p_k p_l - sum E_i^-1 E_i+1."""
    from .lax import YangianSpec, build_yangian
    rep = rep or CheckReport(name)
    T = build_yangian(YangianSpec(n, "toda"))
    pres = T.presentation
    tr = T.trace()
    p = [pres.gen(f"p[{i}]") for i in range(1, n + 1)]
    E = [pres.gen(f"E[{i}]") for i in range(1, n + 1)]
    rep.check(f"z^{n} coefficient of Tr T - 1", z_coefficient(tr, n) - pres.one())
    s1 = pres.zero()
    for x in p:
        s1 = s1 + x
    rep.check(f"z^{n - 1} coefficient of Tr T + sum p_i", z_coefficient(tr, n - 1) + s1)
    if n >= 2:
        s2 = pres.zero()
        for a, b in itertools.combinations(range(n), 2):
            s2 = s2 + p[a] * p[b]
        for i in range(n):
            s2 = s2 - E[i].inverse() * E[(i + 1) % n]
        rep.check(f"z^{n - 2} coefficient of Tr T", z_coefficient(tr, n - 2) - s2)
    return rep


# --- Capelli --------------------------------------------------------------------

def capelli_models(n, k, K1, K2):
    """Quantum Lax matrix over Weyl(n,k) and its classical mirror with lam."""
    K1 = [Fraction(x) for x in K1]
    K2 = [Fraction(x) for x in K2]
    if len(K1) != n or len(K2) != k:
        raise ValueError("dimension mismatch for K1/K2")
    W = presentation_build("weyl", n=n, k=k)
    C = W.abelian()

    def lax(pres):
        rows = []
        for i in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                x = pres.scalar(K1[i - 1]) if i == j else pres.zero()
                for a in range(1, k + 1):
                    qp = pres.gen(f"q[{i},{a}]") * pres.gen(f"p[{j},{a}]")
                    x = x + qp.scale(RatFun.pole(K2[a - 1]))
                row.append(x)
            rows.append(row)
        return OpMatrix(rows)
    return W, C, lax(W), lax(C), K1, K2


def capelli_check(n, k, K1=None, K2=None, name="capelli", rep=None):
    rep = rep or CheckReport(name)
    K1 = K1 if K1 is not None else [0] * n
    K2 = K2 if K2 is not None else list(range(k))
    W, C, Lq, Lc, K1, K2 = capelli_models(n, k, K1, K2)
    lam = C.gen("lam")
    lam_minus = OpMatrix([[(lam if i == j else C.zero()) - Lc[i, j] for j in range(n)] for i in range(n)])
    classical = column_det(lam_minus)
    quantum = column_det(gaudin_operator(Lq))
    rep.check("Wick(det(lam - Lcl)) - det(dz - Lq)", wick(classical, W) - quantum)
    rep.expect_nonzero("anti-Wick ordering", anti_wick(classical, W) - quantum)
    # block route
    dz = W.dz()
    size = k + n
    rows = []
    for r in range(size):
        row = []
        for c in range(size):
            if r < k and c < k:
                x = (W.z() - K2[r]).as_zkind("diff") if r == c else W.zero("diff")
            elif r < k:
                x = W.gen(f"p[{c - k + 1},{r + 1}]").as_zkind("diff")
            elif c < k:
                x = W.gen(f"q[{r - k + 1},{c + 1}]").as_zkind("diff")
            else:
                x = (dz - K1[r - k]) if r == c else W.zero("diff")
            row.append(x)
        rows.append(row)
    MTV = OpMatrix(rows)
    mr = is_manin(MTV)
    rep.check_true("MTV is Manin", mr.is_manin, f"relation {mr.failed_relation}: {mr.residual}")
    detA = W.one("diff")
    for a in K2:
        detA = detA * (W.z() - a).as_zkind("diff")
    rep.check("det_col(MTV) - det(z-K2) det_col(dz - Lq)", column_det(MTV) - detA * quantum)
    # Schur complement D - C A^-1 B reproduces dz - Lq
    Ainv = [RatFun.pole(a) for a in K2]
    schur = []
    for i in range(n):
        row = []
        for j in range(n):
            x = MTV[k + i, k + j]
            for a in range(k):
                x = x - MTV[k + i, a].scale(Ainv[a]) * MTV[a, k + j]
            row.append(x)
        schur.append(row)
    _check_matrix(rep, "Schur complement - (dz - Lq)", OpMatrix(schur) - gaudin_operator(Lq))
    return rep


# --- conjectures --------------------------------------------------------------------

def conjecture_c1_check(M, kind="gaudin", name="conj.c1", rep=None):
    rep = rep or CheckReport(name)
    n = M.rows
    if kind == "gaudin":
        lhs = formal_conjugate(column_det(gaudin_operator(M)))
        rhs = row_det(gaudin_operator(M, sign=1))
        rep.check("conj det_col(dz-L) - (-1)^n det_row(dz+L)", lhs - (rhs if n % 2 == 0 else -rhs))
    else:
        pres = M.presentation
        one = pres.one("shift")
        Sinv, S = pres.shift(-1), pres.shift(1)
        A = OpMatrix([[(one if i == j else pres.zero("shift")) - M[i, j] * Sinv for j in range(n)]
                      for i in range(n)])
        B = OpMatrix([[(one if i == j else pres.zero("shift")) - S * M[i, j] for j in range(n)]
                      for i in range(n)])
        rep.check("conj det_col(1 - T S^-1) - det_row(1 - S T)",
                  formal_conjugate(column_det(A)) - row_det(B))
    return rep


def conjecture_c2_check(L, points, name="conj.c2", rep=None):
    """Explicit principal-minor formula for det_col(dz - L) (first form)."""
    rep = rep or CheckReport(name, recorded=True)
    n = L.rows
    pres = L.presentation
    D = column_det(gaudin_operator(L))
    s = RatFun.const(0)
    for zv in points:
        s = s + RatFun.pole(zv)
    total = pres.zero("diff")
    for i in range(n + 1):
        acc = pres.one() if i == 0 else pres.zero()
        for idx in itertools.combinations(range(n), i) if i else ():
            sub = []
            for r, a in enumerate(idx):
                row = []
                for c, b in enumerate(idx):
                    x = L[a, b]
                    if r == c:
                        x = x + pres.scalar(s * (i - 1 - r))
                    row.append(x)
                sub.append(row)
            acc = acc + column_det(OpMatrix(sub))
        term = acc.as_zkind("diff") * pres.dz(n - i)
        total = total + (term if i % 2 == 0 else -term)
    rep.check("det_col(dz-L) - principal-minor formula", D - total)
    return rep


def conjecture_c3_check(n, k, max_power=3, K1=None, K2=None, point_pairs=((2, 3),),
                        name="conj.c3", rep=None):
    rep = rep or CheckReport(name, recorded=True)
    K1 = K1 if K1 is not None else [0] * n
    K2 = K2 if K2 is not None else list(range(k))
    W, C, Lq, Lc, K1, K2 = capelli_models(n, k, K1, K2)
    lam = C.gen("lam")
    Acl = OpMatrix([[(lam if i == j else C.zero()) - Lc[i, j] for j in range(n)] for i in range(n)])
    Aq = gaudin_operator(Lq)
    Pc, Pq = powers(Acl, max_power), powers(Aq, max_power)
    for m in range(1, max_power + 1):
        rep.check(f"Wick(Tr(lam-Lcl)^{m}) - Tr(dz-Lq)^{m}", wick(Pc[m].trace(), W) - Pq[m].trace())
        rep.check(f"Wick(Tr S^{m}(lam-Lcl)) - Tr S^{m}(dz-Lq)",
                  wick(trace_sym_power(Acl, m, check=False), W) - trace_sym_power(Aq, m))
    # classical integrals: lam-coefficients of det(lam - Lcl) at points, and their pairwise products
    det_cl = column_det(Acl)
    lam_i = C.by_text["lam"]
    coeffs = []
    for a in range(n + 1):
        terms = {}
        for (w, kk), f in det_cl.terms.items():
            e = dict(w).get(lam_i, 0)
            if e == a:
                nw = tuple((g, x) for g, x in w if g != lam_i)
                terms[(nw, kk)] = f
        coeffs.append(C.element(terms))
    for u, v in point_pairs:
        Hu = [evaluate_z(h, u) for h in coeffs[:n]]
        Hv = [evaluate_z(h, v) for h in coeffs[:n]]
        basics = Hu + Hv
        prods = [x * y for x, y in itertools.combinations_with_replacement(basics, 2)]
        fam = [wick(x, W).as_zkind("none") for x in basics + prods]
        for i, j in itertools.combinations(range(len(fam)), 2):
            rep.check(f"[Wick(H_{i}), Wick(H_{j})] u={u} v={v}", commutator(fam[i], fam[j]))
    return rep


# --- separation of variables M-matrix ------------------------------------------------

def sv_mmatrix(T, name="sv.mmatrix", rep=None):
    """M-matrix from the last adjugate column of ``1 - S^-1 T`` and its Manin check."""
    rep = rep or CheckReport(name, recorded=True)
    n = T.rows
    pres = T.presentation
    one = pres.one("shift")
    Sinv = pres.shift(-1)
    A = OpMatrix([[(one if i == j else pres.zero("shift")) - Sinv * T[i, j] for j in range(n)]
                  for i in range(n)])
    adj = adjugate(A)
    Mrows = []
    for i in range(n):
        x = adj[i, n - 1]
        coeffs = {kk: pres.zero() for kk in range(n)}
        for (w, e), f in x.terms.items():
            kk = -e
            if kk < 0 or kk >= n:
                raise ArithmeticError(f"adjugate entry has shift power {e} outside 0..-(n-1)")
            # f w S^{-kk} = S^{-kk} f(z+kk) w
            coeffs[kk] = coeffs[kk] + pres.element({(w, 0): f.shift(kk)})
        recon = pres.zero("shift")
        for kk, c in coeffs.items():
            recon = recon + pres.shift(-kk) * c.as_zkind("shift")
        if not (recon - x).is_zero():
            raise ArithmeticError("left-power expansion does not reconstruct the adjugate entry")
        Mrows.append([coeffs[kk] for kk in range(n)])
    M = OpMatrix(Mrows).transpose()
    mr = is_manin(M)
    rep.check_true("M-matrix is Manin", mr.is_manin,
                   f"relation {mr.failed_relation}: {mr.residual}")
    return M, rep


# --- ER-BT ---------------------------------------------------------------------------------

def erbt_matrix(g, B, mix_rows=False):
    """Bordered (g+1)x(g+1) matrix with rows B_a(alpha_i, beta_i).

    ``B`` is a list of g+1 callables ``(alpha, beta) -> element``; B[0] fills
    the first column.  ``mix_rows`` feeds row i the pair (alpha_i, beta_{i+1})
    which breaks the Cartier-Foata property.
    """
    W = presentation_build("weyl", n=1, k=g)
    alpha = [W.gen(f"p[1,{i}]") for i in range(1, g + 1)]
    beta = [W.gen(f"q[1,{i}]") for i in range(1, g + 1)]
    rows = [[W.one()] + [W.zero()] * g]
    for i in range(g):
        b = beta[(i + 1) % g] if mix_rows else beta[i]
        rows.append([B[a](alpha[i], b) for a in range(g + 1)])
    return OpMatrix(rows)


def erbt_hamiltonians(At, trunc):
    """First-column entries of ``(1 - t(1 - At))^{-1}`` below the border."""
    g1 = At.rows
    N = OpMatrix.identity(g1, At.like()) - At
    inv = series_matrix_inverse(N, trunc)
    return [inv[i, 0] for i in range(1, g1)]


def erbt_demo(g, B=None, trunc=4, mix_rows=False, name="erbt", rep=None):
    rep = rep or CheckReport(name)
    if B is None:
        B = default_erbt_B(g)
    At = erbt_matrix(g, B, mix_rows)
    cf = is_cartier_foata(At)
    if not mix_rows and not cf.is_manin:
        raise ValueError("ER-BT matrix is not Cartier-Foata")
    H = erbt_hamiltonians(At, trunc)
    for i, j in itertools.combinations_with_replacement(range(g), 2):
        r = H[i] * H[j] - H[j] * H[i]
        lab = f"[H_{i + 1}, H_{j + 1}] mod t^{trunc + 1}"
        if mix_rows:
            if i != j:
                rep.expect_nonzero(lab + " (rows mixed)", r)
        else:
            rep.check(lab, r)
    return rep


def default_erbt_B(g):
    """B_0 = a b + 1, B_j = a^(j-1) + b^j: polynomial, mixed order in a, b."""
    def make(j):
        if j == 0:
            return lambda a, b: a * b + 1
        return lambda a, b: a ** (j - 1) + b ** j
    return [make(j) for j in range(g + 1)]


# --- oracle coherence ----------------------------------------------------------------

def _entry_bound(M):
    best = 0
    for perm in itertools.permutations(range(M.rows)):
        best = max(best, sum(max(M[perm[c], c].degree(), 0) for c in range(M.rows)))
    return best


def det_oracle_check(M, name="oracle.det", rep=None):
    """abelianize(det_col M) agrees with a cofactor expansion of abelianize(M) at top degree."""
    rep = rep or CheckReport(name)
    lhs = abelianize(column_det(M))
    rhs = laplace_det(M.map(abelianize))
    diff = lhs - rhs
    bound = _entry_bound(M)
    if M.presentation.kind == "commutative":
        rep.check("det vs cofactor expansion (exact)", diff)
    else:
        rep.check_true("det top degree vs cofactor expansion", diff.degree() < bound,
                       f"degree {diff.degree()} >= bound {bound}: {diff.top_part()}")
    return rep


def literal_trace_sym_power(M, m):
    """The defining sum over all index tuples and permutations, no shortcuts."""
    N = M.rows
    like = M.like()
    if m == 0:
        return like.one_like()
    total = like.zero_like()
    for ls in itertools.product(range(N), repeat=m):
        for sigma in itertools.permutations(range(m)):
            term = like.one_like()
            for r in range(m):
                term = term * M[ls[r], ls[sigma[r]]]
            total = total + term
    return total * Fraction(1, factorial(m))


def classical_char_poly(M):
    """Coefficients of det(t - M) by cofactor expansion, for commutative M."""
    n = M.rows
    one = M.like().one_like()
    A = OpMatrix([[TruncSeries([-M[i, j], one] if i == j else [-M[i, j]], n)
                   for j in range(n)] for i in range(n)])
    return list(laplace_det(A).coeffs)


def classical_oracle_check(M, trunc=3, name="oracle.classical", rep=None):
    """For commutative M: det, CH, Newton and MacMahon against direct expansions."""
    rep = rep or CheckReport(name)
    n = M.rows
    rep.check("column_det - cofactor det", column_det(M) - laplace_det(M))
    h_ref = classical_char_poly(M)
    h = char_poly(M).coeffs
    for i in range(n + 1):
        rep.check(f"h_{i} vs cofactor char poly", h[i] - h_ref[i])
    for m in range(trunc + 1):
        rep.check(f"Tr S^{m} vs literal definition",
                  trace_sym_power(M, m) - literal_trace_sym_power(M, m))
    # classical Newton: p_k power sums vs elementary symmetric functions
    P = powers(M, n)

    def ej(j):
        return h_ref[n - j] * ((-1) ** j)

    # k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i with e_j = (-1)^j h_{n-j}
    for k in range(1, n + 1):
        lhs = ej(k) * k
        rhs = M.like().zero_like()
        for i in range(1, k + 1):
            rhs = rhs + ej(k - i) * P[i].trace() * ((-1) ** (i - 1))
        rep.check(f"classical Newton k={k}", lhs - rhs)
    return rep
