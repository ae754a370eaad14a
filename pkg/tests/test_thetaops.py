import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siegelmodp import ringmodp as R
from siegelmodp.halfint import content, discriminant, enumerate_keys
from siegelmodp.qexp import QExp2, reduce_mod, sturm_bound
from siegelmodp.thetaops import (
    a_op, classify_kernel_type, is_mod_p_singular, p_rank, theta, theta1, theta_iter,
    verify_aop_identity,
)


def random_series(seed, B=4, char=0, weight=4):
    rng = np.random.default_rng(seed)
    coeffs = {}
    for T in enumerate_keys(B):
        if rng.random() < 0.5:
            v = int(rng.integers(-30, 31))
            coeffs[tuple(T)] = v % char if char else v
    return QExp2.from_dict(weight, char, B, coeffs)


def test_theta_examples(gc):
    one = QExp2.constant(1, 0, 3)
    assert theta(one).is_zero() and theta1(one).is_zero()
    E4 = gc["E4"].truncate(5)
    assert reduce_mod(theta(E4), 7).is_zero()
    assert not theta1(E4).reduce(7).is_zero()
    T2 = theta_iter(E4, 2)
    assert T2[1, 1, 1] == E4[1, 1, 1] * 9 / 16  # (D/4)^2 with D = 3
    assert theta_iter(E4, 0) == E4 and theta_iter(E4, 1) == theta(E4)


def test_theta_weights(gc):
    F = reduce_mod(gc["E6"], 11).truncate(3)
    assert theta(F).weight == 6 + 12
    assert a_op(F, 2, 11).weight == 6 + 120
    assert a_op(F, 1, 11).weight == 6


def test_theta1_parts(gc):
    E4 = gc["E4"].truncate(4)
    t = theta1(E4)
    assert t.B[1, 1, 1] == -t.B[1, -1, 1]
    assert t.A[0, 0, 0] == t.B[0, 0, 0] == t.C[0, 0, 0] == 0
    text = t.serialize()
    assert text.count("qexp2") == 3


def test_theta_iter_fermat():
    p = 7
    F = random_series(1, char=p)
    G = theta_iter(F, p - 1)
    for T in enumerate_keys(4):
        expected = F[T] if discriminant(T) % p else 0
        assert G[T] == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([1, 2]), st.sampled_from([2, 3, 5, 7]))
def test_projector_identities(seed, j, M):
    F = random_series(seed)
    A = a_op(F, j, M)
    assert a_op(A, j, M) == A
    K = F - A
    assert a_op(K, j, M).is_zero()
    assert K + A == F
    assert a_op(F, j, 1) == F


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([5, 7, 11]))
def test_theta_op_implications(seed, p):
    F = random_series(seed)
    if seed % 3 == 0:
        F = a_op(F, 1, p)  # forces theta1 = 0 mod p
    t1_zero = theta1(F).reduce(p).is_zero()
    t2_zero = reduce_mod(theta(F), p).is_zero()
    if t1_zero:
        assert t2_zero
    witness = any(v % p and content(T) % p for T, v in F.items())
    assert (not t1_zero) == witness


def test_aop_content_matches_entrywise():
    F = random_series(5, B=6)
    A = a_op(F, 1, 3)
    for T in enumerate_keys(6):
        keep = T.a % 3 == 0 and T.b % 3 == 0 and T.c % 3 == 0
        assert A[T] == (F[T] if keep else 0)


def test_aop_reference_images(gc):
    x4, x6, x10, x12 = R.gens(5)
    for f in (x6 * x12, x4 ** 2 * x10):
        assert a_op(R.psi(f, 6, gc), 2, 5).is_zero()


@pytest.mark.parametrize("p", [5, 7])
def test_aop_identity_monomials(gc, p):
    for k in range(0, 21, 2):
        for e, flag in R.monomials(k):
            F = R.psi(R.IsobaricPoly(p, k, {e: 1}, flag), 5, gc)
            assert verify_aop_identity(F, p, gens_cache=gc)


def test_aop_identity_on_kernel_element(gc):
    E4 = reduce_mod(gc["E4"], 7).truncate(4)
    assert theta(E4).is_zero()
    assert a_op(E4, 2, 7).data.tolist() == E4.data.tolist()
    assert verify_aop_identity(reduce_mod(gc["E4"], 5).truncate(3), 5, gens_cache=gc)


def test_singularity(gc):
    assert is_mod_p_singular(QExp2.constant(1, 5, 2), 5) and p_rank(QExp2.constant(1, 5, 2), 5) == 0
    E4 = gc.mod("E4", 5)
    assert is_mod_p_singular(E4, 5) and p_rank(E4, 5) == 0
    X10 = gc.mod("X10", 7)
    assert not is_mod_p_singular(X10, 7) and p_rank(X10, 7) == 2
    with pytest.raises(ValueError):
        p_rank(QExp2.constant(1, 5, 0, weight=24), 5)


def test_classification(gc):
    assert classify_kernel_type(gc.mod("E4", 7, 8), 7) == "c"
    x4, x6, x10, x12 = R.gens(5)
    f = x4 ** 3 * x6 ** 2 + 2 * x6 ** 4 + 3 * x4 ** 2 * x6 * x10 + 3 * x4 * x10 ** 2 + 2 * x6 ** 2 * x12 + 3 * x12 ** 2
    assert classify_kernel_type(R.psi(f, 10, gc), 5) == "c"
    G = a_op(gc.mod("E6", 5, 12), 1, 5)
    assert classify_kernel_type(G, 5) in ("a", "b")
    with pytest.raises(ValueError):
        classify_kernel_type(gc.mod("X10", 7, 4), 7)
