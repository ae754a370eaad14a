"""Theta operators and the projectors A^(j)(M) on truncated expansions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .qexp import QExp2, mul, reduce_mod, sturm_bound

__all__ = [
    "Theta1Series", "theta", "theta1", "theta_iter", "a_op", "verify_aop_identity",
    "is_mod_p_singular", "p_rank", "classify_kernel_type",
]


def _abcD(B: int):
    a, c, j = np.meshgrid(np.arange(B + 1), np.arange(B + 1), np.arange(4 * B + 1), indexing="ij")
    b = j - 2 * B
    return a, b, c, 4 * a * c - b * b


def _scaled(F: QExp2, factor: np.ndarray, weight: int, den: int = 1) -> QExp2:
    """Multiply each coefficient by an integer array (divided by den in char 0)."""
    if F.char:
        inv = pow(den, -1, F.char)
        data = (F.data.astype(np.int64) * (factor % F.char) % F.char) * inv % F.char
    else:
        data = np.empty(F.data.shape, dtype=object)
        flat, fac = F.data.ravel(), factor.ravel()
        out = data.ravel()
        for i in range(flat.size):
            v = flat[i] * int(fac[i])
            if v and den != 1:
                v = Fraction(v, den)
                v = v.numerator if v.denominator == 1 else v
            out[i] = v
    return QExp2(weight, F.char, F.bound, data)


def theta(F: QExp2) -> QExp2:
    """a(T) -> det(T) a(T), det T = D/4.  Weight k+p+1 in characteristic p."""
    D = _abcD(F.bound)[3]
    w = F.weight + F.char + 1 if F.char else F.weight
    return _scaled(F, D, w, 4)


@dataclass
class Theta1Series:
    """Theta^[1](F): the 2x2-matrix valued series T * a_F(T), stored by entry.

    ``A`` holds a*a_F(T), ``B`` holds (b/2)*a_F(T), ``C`` holds c*a_F(T).
    """

    A: QExp2
    B: QExp2
    C: QExp2

    @property
    def char(self) -> int:
        return self.A.char

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero() and self.C.is_zero()

    def reduce(self, p: int) -> "Theta1Series":
        return Theta1Series(reduce_mod(self.A, p), reduce_mod(self.B, p), reduce_mod(self.C, p))

    def serialize(self) -> str:
        from .qexp import serialize

        return "".join(f"# part {n}\n{serialize(S)}" for n, S in zip("ABC", (self.A, self.B, self.C)))


def theta1(F: QExp2) -> Theta1Series:
    a, b, c, _ = _abcD(F.bound)
    w = F.weight + (F.char + 1 if F.char else 0)
    return Theta1Series(_scaled(F, a, w), _scaled(F, b, w, 2), _scaled(F, c, w))


def theta_iter(F: QExp2, m: int) -> QExp2:
    for _ in range(m):
        F = theta(F)
    return F


def a_op(F: QExp2, j: int, M: int) -> QExp2:
    """Keep a(T) when M | content(T) (j=1) or M | D(T) (j=2); zero elsewhere.

    In characteristic p with j=2 and M=p the weight label moves to k+p^2-1,
    the weight at which the result is again a mod-p modular form.
    """
    if j not in (1, 2):
        raise ValueError("degree 2 supports j in {1, 2}")
    if M < 1:
        raise ValueError("M must be a positive integer")
    a, b, c, D = _abcD(F.bound)
    if j == 1:
        keep = (a % M == 0) & (b % M == 0) & (c % M == 0)
    else:
        keep = D % M == 0
    data = F.data.copy()
    data[~keep] = 0
    w = F.weight
    if F.char and j == 2 and M == F.char:
        w = F.weight + F.char ** 2 - 1
    return QExp2(w, F.char, F.bound, data)


def verify_aop_identity(F: QExp2, p: int, H: QExp2 | None = None, gens_cache=None) -> bool:
    """F|A(p) == F * H^(p+1) - Theta^(p-1)(F) mod p, where H = psi(h) (which is 1)."""
    if F.char != p:
        F = reduce_mod(F, p)
    if H is None:
        from .ringmodp import h_poly, psi

        H = psi(h_poly(p, gens_cache), F.bound, gens_cache)
    H = H.truncate(F.bound)
    P = F
    for _ in range(p + 1):
        P = mul(P, H)
    lhs = a_op(F, 2, p)
    rhs = P - theta_iter(F, p - 1)
    return lhs.weight == rhs.weight and np.array_equal(lhs.data, rhs.data)


def _window(F: QExp2) -> QExp2:
    b = sturm_bound(F.weight)
    if F.bound < b:
        raise ValueError(f"bound {F.bound} below Sturm bound {b}")
    return F


def p_rank(F: QExp2, p: int) -> int:
    """Largest rank of a key whose coefficient is nonzero mod p (-1 for zero)."""
    F = _window(F if F.char == p else reduce_mod(F, p))
    a, b, c, D = _abcD(F.bound)
    nz = F.data != 0
    if not nz.any():
        return -1
    if (nz & (D > 0)).any():
        return 2
    return 1 if (nz & ((a > 0) | (c > 0))).any() else 0


def is_mod_p_singular(F: QExp2, p: int) -> bool:
    """All coefficients at rank-2 keys vanish mod p (over every stored key)."""
    return p_rank(F, p) < 2


def classify_kernel_type(F: QExp2, p: int) -> str:
    """Type of a nonzero mod-p form killed by Theta.

    'a': mod-p singular; 'b': every nonzero rank-2 coefficient sits at a key
    with p | content; 'c': otherwise.
    """
    Fp = F if F.char == p else reduce_mod(F, p)
    if Fp.is_zero():
        raise ValueError("form is zero mod p")
    if not theta(Fp).is_zero():
        raise ValueError("form is not in the kernel of Theta mod p")
    if is_mod_p_singular(Fp, p):
        return "a"
    a, b, c, D = _abcD(Fp.bound)
    bad = (Fp.data != 0) & (D > 0) & ~((a % p == 0) & (b % p == 0) & (c % p == 0))
    return "c" if bad.any() else "b"
