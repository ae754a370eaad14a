from fractions import Fraction

import pytest
import sympy

from siegelmodp.genforms import (
    GeneratorCache, bernoulli, cohen_h, eisenstein1, gen_bernoulli, kronecker, siegel_eisenstein,
    theta_e8,
)
from siegelmodp.halfint import enumerate_keys, rank
from siegelmodp.qexp import phi, reduce_mod


def test_bernoulli():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(12) == Fraction(-691, 2730)


def _gen_bernoulli_sympy(n, D):
    f = abs(D)
    x = sympy.Symbol("x")
    Bn = sympy.bernoulli(n, x)
    s = sum(kronecker(D, a) * Bn.subs(x, sympy.Rational(a, f)) for a in range(1, f + 1))
    return Fraction(str(sympy.nsimplify(f ** (n - 1) * s)))


@pytest.mark.parametrize("n,D", [(3, -3), (3, -4), (1, -7), (5, -8), (2, 5), (4, 12), (7, -11)])
def test_gen_bernoulli_matches_polynomial_definition(n, D):
    assert gen_bernoulli(n, D) == _gen_bernoulli_sympy(n, D)


def test_gen_bernoulli_values():
    assert gen_bernoulli(3, -3) == Fraction(2, 3)
    assert gen_bernoulli(3, -4) == Fraction(3, 2)
    assert gen_bernoulli(6, 1) == bernoulli(6)
    with pytest.raises(ValueError):
        gen_bernoulli(2, 8 * 9)


# Hurwitz class numbers: H(1, N)
@pytest.mark.parametrize("N,h", [(0, Fraction(-1, 12)), (3, Fraction(1, 3)), (4, Fraction(1, 2)),
                                 (7, 1), (8, 1), (11, 1), (12, Fraction(4, 3)), (15, 2), (16, Fraction(3, 2))])
def test_cohen_h_class_numbers(N, h):
    assert cohen_h(1, N) == h


def test_cohen_h_values():
    assert cohen_h(3, 1) == 0
    assert cohen_h(3, 3) == Fraction(-2, 9)
    assert cohen_h(3, 4) == Fraction(-1, 2)


def test_eisenstein1():
    assert eisenstein1(4, 3).coeffs[:3] == [1, 240, 2160]
    assert eisenstein1(6, 1).coeffs[1] == -504
    with pytest.raises(ValueError):
        eisenstein1(5, 3)


def test_e4_values_and_theta_oracle():
    E4 = siegel_eisenstein(4, 4)
    assert E4[0, 0, 0] == 1 and E4[1, 0, 1] == 30240 and E4[1, 1, 1] == 13440
    T = theta_e8(4)
    assert T[1, 0, 0] == 240
    assert E4 == T


def test_generator_gates(gc):
    for k in (4, 6, 10, 12):
        assert phi(gc[f"E{k}"]) == eisenstein1(k, gc.bound)
    for n in ("X10", "X12", "X35"):
        F = gc[n]
        assert all(F[T] == 0 for T in enumerate_keys(gc.bound) if rank(T) < 2)
        assert F.parity_ok()
    assert gc["X10"][1, 1, 1] == 1 and gc["X12"][1, 1, 1] == 1
    assert gc["X10"][1, 0, 1] == -2 and gc["X12"][1, 0, 1] == 10
    assert gc["E6"][1, 1, 1] == 44352 and gc["E6"][1, 0, 1] == 166320


def test_x35(gc):
    X = gc["X35"]
    first = next(iter(X.items()))
    assert tuple(first[0]) == (2, -1, 3) and first[1] == 1
    assert X[2, 1, 3] == -1 and X[2, -1, 4] == -69 and X[2, 1, 4] == 69
    assert all(X[a, 0, c] == 0 for a in range(5) for c in range(5))


@pytest.mark.parametrize("p", [5, 7, 11, 13, 53, 79])
def test_generators_p_integral(gc, p):
    for n in ("E4", "E6", "E10", "E12", "X10", "X12", "X35"):
        reduce_mod(gc[n], p)


def test_constants_mod_p(gc):
    assert reduce_mod(gc["E4"], 5).coeffs == {(0, 0, 0): 1}
    assert reduce_mod(gc["E6"], 7).coeffs == {(0, 0, 0): 1}
    assert reduce_mod(gc["X10"], 7)[1, 1, 1] == 1


def test_cache_roundtrip_is_byte_identical(gc, tmp_path):
    small = GeneratorCache(4, tmp_path)
    X = small["X10"]
    text = small.path("X10").read_text()
    again = GeneratorCache(4, tmp_path)
    assert again["X10"] == X
    fresh = GeneratorCache(4, tmp_path / "other")
    fresh["X10"]
    assert fresh.path("X10").read_text() == text
    assert X == gc["X10"].truncate(4)
