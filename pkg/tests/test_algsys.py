from gmpy2 import mpq
from hypothesis import given, strategies as st

import pytest

from psreduce.algsys import (AlgSystem, ansatz_monomials, collect_system, groebner, linear_family,
                             make_unknowns, rational_roots, reduce_poly, solve_linear, solve_poly,
                             spoly)
from psreduce.errors import EmptySolution, LimitExceeded
from psreduce.limits import Limits
from psreduce.poly import Ring

U = Ring(("a", "b", "c"), order="lex")
a, b, c = U.var(0), U.var(1), U.var(2)


def test_ansatz_shapes():
    assert len(ansatz_monomials(1)) == 4
    assert len(ansatz_monomials(2)) == 10
    assert len(ansatz_monomials(1, "box")) == 8
    assert len(ansatz_monomials(2, nvars=2)) == 6
    assert all(e[2] == 0 for e in ansatz_monomials(3, nvars=2))
    with pytest.raises(ValueError):
        ansatz_monomials(1, "diamond")


def test_collect_system_from_ansatz():
    # find p = a0 + a1 x + ... of degree 1 with x * p' - p = 0 -> p = a x
    ring, (p,) = make_unknowns(("a", 1, ansatz_monomials(1)))
    P = p.poly(ring)
    from psreduce.poly import X, XYZ
    residual = XYZ.var(X) * P.diff(X) - P
    sys_ = collect_system(residual, ring)
    assert sys_.is_linear()
    sol = solve_linear(sys_, reject=lambda v: not p.instantiate(v))
    (br,) = sol.branches
    assert p.instantiate(br.values) == XYZ.var(X)


def test_solve_linear_unique():
    s = AlgSystem(U, [a + b - 3, a - b - 1, c - 2 * a])
    (br,) = solve_linear(s).branches
    assert (br.values[0], br.values[1], br.values[2]) == (2, 1, 4)
    assert s.satisfied_by(br.values)


def test_solve_linear_inconsistent():
    s = AlgSystem(U, [a + b - 1, a + b - 2])
    with pytest.raises(EmptySolution):
        solve_linear(s)


def test_linear_family():
    s = AlgSystem(U, [a + b + c - 1])
    sol, free = linear_family(s)
    assert free == (1, 2)
    assert sol[0] == {-1: -1, 1: 1, 2: 1} or sol[0] == {1: -1, 2: -1, -1: 1}


def test_groebner_textbook():
    # x^2 + y^2 - 1, x - y in lex x > y: basis {x - y, y^2 - 1/2}
    # (later ring variables are the more significant ones)
    R = Ring(("y", "x"), order="lex")
    y, x = R.var(0), R.var(1)
    G = groebner([x * x + y * y - 1, x - y])
    assert set(G) == {x - y, y * y - mpq(1, 2)}
    for g in (x * x + y * y - 1, x - y):
        assert not reduce_poly(g, G)


def test_groebner_caps():
    R = Ring(("x", "y", "z"), order="lex")
    x, y, z = R.var(0), R.var(1), R.var(2)
    with pytest.raises(LimitExceeded) as err:
        groebner([x ** 3 - y * z, y ** 3 - x * z, z ** 3 - x * y - 1], Limits(gb_max_size=3))
    assert err.value.kind in ("size", "degree")


def test_spoly_cancels_leading_terms():
    f, g = a * a * b - 1, a * b * b - 2
    s = spoly(f, g)
    assert s.lm() < (a * a * b * b).lm()


def test_rational_roots():
    from psreduce.frontend import parse_poly
    assert rational_roots(parse_poly("6*x^3 - 5*x^2 - 2*x + 1"), 0) == [mpq(-1, 2), mpq(1, 3), mpq(1)]
    assert rational_roots(parse_poly("x^2 + 1"), 0) == []
    assert rational_roots(parse_poly("x^3 - 2*x^2"), 0) == [0, 2]


def test_solve_poly_bilinear():
    # a*b = 0, a + b = 1 -> (0, 1) and (1, 0)
    s = AlgSystem(U, [a * b, a + b - 1])
    sols = solve_poly(s)
    got = sorted((br.values[0], br.values[1]) for br in sols)
    assert got == [(0, 1), (1, 0)]
    for br in sols:
        assert s.satisfied_by(br.values)


def test_solve_poly_quadratic_rational_roots():
    s = AlgSystem(U, [a * a - 4, b - a * c, c - 1])
    got = sorted(br.values[0] for br in solve_poly(s))
    assert got == [-2, 2]


def test_solve_poly_irrational_branch_dropped():
    s = AlgSystem(U, [a * a - 2, b - 1])
    assert all(s.satisfied_by(br.values) for br in solve_poly(s))
    assert len(solve_poly(s)) == 0


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3))
def test_linear_solutions_satisfy_planted_system(x0, rows):
    # every returned branch satisfies a system built around a planted solution
    eqs = []
    for r in rows:
        lhs = r[0] * a + r[1] * b + r[2] * c
        rhs = sum(ri * xi for ri, xi in zip(r, x0))
        eqs.append(lhs - rhs)
    s = AlgSystem(U, [e for e in eqs if e])
    sol = solve_linear(s) if s.equations else None
    if sol is not None:
        assert len(sol) == 1
        assert s.satisfied_by(sol.branches[0].values)


def test_irrational_branch_is_flagged():
    sol = solve_poly(AlgSystem(U, [a * a + 1]))
    assert len(sol) == 0
    assert "IrrationalBranch" in sol.warnings


def test_sign_pair_branches():
    sol = solve_poly(AlgSystem(U, [a * a - 1, b - a]))
    assert sorted((br.values[0], br.values[1]) for br in sol) == [(-1, -1), (1, 1)]


def test_empty_system_leaves_everything_free():
    (br,) = solve_linear(AlgSystem(U, [])).branches
    assert br.free == (0, 1, 2)


def test_collect_zero_residual():
    from psreduce.poly import XYZ, Poly
    assert collect_system(Poly(XYZ, {}), U).equations == []


def test_collect_coefficients():
    from psreduce.poly import X, XYZ, Y, Poly
    # (a - 1) x + b y
    r = Poly(XYZ, {XYZ.gens[X]: a - 1, XYZ.gens[Y]: b})
    assert set(collect_system(r, U).equations) == {a - 1, b}


def test_exponent_example_has_balanced_branch():
    from psreduce.darboux import solve_exponents
    from psreduce.frontend import parse_poly
    sols = solve_exponents([parse_poly("1"), parse_poly("1")], parse_poly("-2"))
    assert [mpq(-1), mpq(-1)] in sols


def test_linear_and_poly_solvers_agree():
    s = AlgSystem(U, [a + 2 * b - 3, b - c, c - 1])
    lin = solve_linear(s).branches[0].values
    (br,) = solve_poly(s).branches
    assert all(lin[i] == br.values[i] for i in range(3))


def test_groebner_s_polynomials_reduce_to_zero():
    R = Ring(("z", "y", "x"), order="lex")
    z, y, x = R.var(0), R.var(1), R.var(2)
    G = groebner([x * x + y * z - 2, x * y * z - 1, x + y * y - 3])
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            assert not reduce_poly(spoly(G[i], G[j]), G)
