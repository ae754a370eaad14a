from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siegelmodp.qexp import (
    INF, QExp1, QExp2, congruent_mod_p, derivatives, linear_combine, mul, mul_naive, nu_p, parse,
    phi, reduce_mod, serialize, sturm_bound,
)
from siegelmodp.halfint import enumerate_keys


@pytest.mark.parametrize("k,b", [(12, 1), (102, 10), (35, 3), (4, 0), (109, 10)])
def test_sturm_bound(k, b):
    assert sturm_bound(k) == b


def random_qexp(draw_ints, B, weight=0, char=0):
    keys = enumerate_keys(B)
    vals = draw_ints(len(keys))
    coeffs = {}
    for T, v in zip(keys, vals):
        if T.b < 0:
            continue
        coeffs[tuple(T)] = v
        coeffs[(T.a, -T.b, T.c)] = v if weight % 2 == 0 else -v
    return QExp2.from_dict(weight, char, B, coeffs)


def _rand(seed, B, weight=0, char=0, lo=-5, hi=5):
    rng = np.random.default_rng(seed)
    F = random_qexp(lambda n: [int(x) for x in rng.integers(lo, hi + 1, n)], B, weight, char)
    F.data[0, 0, 2 * B] = int(rng.integers(lo, hi + 1)) % char if char else int(rng.integers(lo, hi + 1))
    return F


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_mul_matches_naive(seed, B):
    F, G = _rand(seed, B, 4), _rand(seed + 1, B, 6)
    assert mul(F, G) == mul_naive(F, G)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ring_laws(seed):
    F, G, H = _rand(seed, 3), _rand(seed + 1, 3), _rand(seed + 2, 3)
    assert mul(F, G) == mul(G, F)
    assert mul(mul(F, G), H) == mul(F, mul(G, H))
    assert mul(F, G + H) == mul(F, G) + mul(F, H)
    one = QExp2.constant(1, 0, 3)
    assert mul(one, F) == F
    assert phi(mul(F, G)) == phi(F) * phi(G)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([5, 7, 11]))
def test_reduce_mod_commutes(seed, p):
    F, G = _rand(seed, 4, lo=-40, hi=40), _rand(seed + 3, 4, lo=-40, hi=40)
    assert reduce_mod(mul(F, G), p) == mul(reduce_mod(F, p), reduce_mod(G, p))
    assert reduce_mod(F + G, p) == reduce_mod(F, p) + reduce_mod(G, p)
    S = linear_combine([(3, F), (-2, G)])
    assert reduce_mod(S, p) == linear_combine([(3, reduce_mod(F, p)), (-2, reduce_mod(G, p))])


def test_single_term_product():
    F = QExp2.from_dict(0, 0, 4, {(1, 1, 1): 1})
    G = QExp2.from_dict(0, 0, 4, {(2, -1, 1): 1})
    assert mul(F, G).coeffs == {(3, 0, 2): 1}


def test_linear_combine():
    F = _rand(1, 4)
    G = _rand(2, 3)
    assert linear_combine([(1, F), (0, G)]) == F.truncate(3)
    assert linear_combine([(1, F), (-1, F)]).is_zero()
    with pytest.raises(ValueError):
        linear_combine([(1, F), (1, _rand(3, 4, weight=2))])


def test_nu_p():
    Z = QExp2(4, 0, 2)
    assert nu_p(Z, 5) == INF
    F = _rand(7, 3)
    assert nu_p(linear_combine([(5, F)]), 5) == 1 + nu_p(F, 5)
    G = QExp2.from_dict(0, 0, 1, {(0, 0, 0): Fraction(3, 25)})
    assert nu_p(G, 5) == -2
    with pytest.raises(ValueError):
        reduce_mod(G, 5)


def test_congruence_needs_window():
    F = QExp2.constant(1, 0, 0, weight=24)
    with pytest.raises(ValueError):
        congruent_mod_p(F, F, 5)
    F = QExp2.constant(1, 0, 3, weight=24)
    assert congruent_mod_p(F, F, 5)


def test_derivatives():
    F = _rand(11, 3, weight=4)
    Dt, Dz, Dtp = derivatives(F)
    assert Dt[1, 0, 1] == F[1, 0, 1]
    assert Dz[1, 1, 1] == -Dz[1, -1, 1]
    assert all(D.is_zero() for D in derivatives(QExp2.constant(1, 0, 3)))


def test_serialize_roundtrip():
    F = _rand(5, 3, weight=12)
    F.data[1, 1, 6] = Fraction(-691, 2730)
    assert parse(serialize(F)) == F
    Z = QExp2(10, 7, 2)
    assert serialize(Z).strip() == "qexp2 weight=10 char=7 bound=2"
    assert parse(serialize(Z)) == Z
    E = QExp1(4, 0, 3, [1, 240, 2160, 6720])
    assert parse(serialize(E)) == E


@pytest.mark.parametrize("text", [
    "qexp2 weight=4 char=0 bound=1\n2,0,2 1\n",
    "qexp2 weight=4 char=0\n",
    "qexp3 weight=4 char=0 bound=1\n",
    "qexp2 weight=4 char=0 bound=1\n0,0,0 1/0\n",
])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse(text)
