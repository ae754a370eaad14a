"""Half-integral symmetric 2x2 matrices.

A matrix ``[[a, b/2], [b/2, c]]`` is stored as the integer triple ``(a, b, c)``
with the off-diagonal entry doubled, so every quantity below is integer exact.
"""
from __future__ import annotations

from math import gcd, isqrt
from typing import NamedTuple


class HalfIntMat(NamedTuple):
    a: int
    b: int
    c: int

    @classmethod
    def checked(cls, a: int, b: int, c: int) -> "HalfIntMat":
        """Build a matrix, rejecting anything that is not positive semidefinite."""
        if a < 0 or c < 0 or b * b > 4 * a * c:
            raise ValueError(f"({a},{b},{c}) is not positive semidefinite")
        return cls(a, b, c)

    @property
    def key(self) -> str:
        return f"{self.a},{self.b},{self.c}"

    @classmethod
    def from_key(cls, text: str) -> "HalfIntMat":
        a, b, c = (int(t) for t in text.split(","))
        return cls.checked(a, b, c)


def discriminant(T) -> int:
    """Return ``4ac - b^2``, i.e. four times the determinant."""
    a, b, c = T
    return 4 * a * c - b * b


def content(T) -> int:
    """gcd(a, b, c); 0 for the zero matrix (read as: divisible by everything)."""
    a, b, c = T
    return gcd(gcd(a, b), c)


def rank(T) -> int:
    if T[0] == T[1] == T[2] == 0:
        return 0
    return 2 if discriminant(T) > 0 else 1


def is_psd(T) -> bool:
    a, b, c = T
    return a >= 0 and c >= 0 and b * b <= 4 * a * c


def is_reduced(T) -> bool:
    a, b, c = T
    if discriminant(T) > 0:
        return 0 <= b <= a <= c
    return a == 0 and b == 0 and c >= 0


def reduce(T) -> tuple[HalfIntMat, int]:
    """GL_2(Z)-reduce a semidefinite form.

    Returns the representative with ``0 <= b <= a <= c`` (rank 2) or
    ``(0, 0, content)`` (rank <= 1), together with the determinant of a
    unimodular transform taking ``T`` to it.
    """
    a, b, c = T
    if not is_psd(T):
        raise ValueError(f"{tuple(T)} is not positive semidefinite")
    sign = 1
    while True:
        if abs(b) > a:
            # proper translation x -> x + t*y bringing b into (-a, a]
            t = -(b // (2 * a))
            if b + 2 * t * a > a:
                t -= 1
            b, c = b + 2 * t * a, a * t * t + b * t + c
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if b < 0:
        b = -b
        sign = -sign
    if a == 0:
        # rank <= 1 ends as (0, 0, m); b is forced to 0
        return HalfIntMat(0, 0, c), sign
    return HalfIntMat(a, b, c), sign


def enumerate_keys(bound: int, mode: str = "full") -> list[HalfIntMat]:
    """All semidefinite keys with diagonal entries at most ``bound``.

    ``mode="full"`` gives every (a, b, c) with ``0 <= a, c <= bound``;
    ``mode="reduced"`` gives reduced representatives with ``c <= bound``.
    Both lists are sorted by (a, c, b).
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    out = []
    for a in range(bound + 1):
        for c in range(bound + 1):
            r = isqrt(4 * a * c)
            if mode == "full":
                out.extend(HalfIntMat(a, b, c) for b in range(-r, r + 1))
            elif mode == "reduced":
                if a == 0:
                    out.append(HalfIntMat(0, 0, c))
                elif a <= c:
                    out.extend(HalfIntMat(a, b, c) for b in range(0, min(a, r) + 1))
            else:
                raise ValueError(f"unknown mode {mode!r}")
    return out
