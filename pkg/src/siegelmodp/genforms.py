"""Generators of the ring of degree-2 modular forms as truncated expansions.

Eisenstein series come from the Cohen function ``H(r, N)``; ``X10`` and ``X12``
are cusp projections of Eisenstein products; ``X35`` is the Wronskian of
``E4, E6, X10, X12``.  ``theta_e8`` is an independent lattice count used to pin
the Eisenstein constants.
"""
from __future__ import annotations

import itertools
import logging
import os
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, isqrt
from pathlib import Path

import numpy as np
import sympy

from . import qexp
from .halfint import content
from .qexp import QExp1, QExp2, linear_combine, mul, reduce_mod

log = logging.getLogger(__name__)

GENERATOR_NAMES = ("E4", "E6", "E10", "E12", "X10", "X12", "X35")
WEIGHTS = {"E4": 4, "E6": 6, "E10": 10, "E12": 12, "X10": 10, "X12": 12, "X35": 35}


# -- elementary arithmetic -------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    # sum_{j<=n} C(n+1, j) B_j = 0
    return -sum(comb(n + 1, j) * bernoulli(j) for j in range(n)) / (n + 1)


def zeta_neg(k: int) -> Fraction:
    """zeta(1 - k) = -B_k / k for k >= 2."""
    return -bernoulli(k) / k


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in _factor(n).items():
        divs = [d * q**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def _mobius(n: int) -> int:
    f = _factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def sigma(n: int, k: int) -> int:
    return sum(d**k for d in _divisors(n))


def is_fundamental(D: int) -> bool:
    if D == 1:
        return True
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in _factor(abs(n)).values())


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D / n) for n >= 0."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    if n == 1:
        return 1
    if gcd(D, n) != 1:
        return 0
    result = 1
    while n % 2 == 0:
        n //= 2
        result *= 1 if D % 8 in (1, 7) else -1
    # remaining odd part: Jacobi symbol
    a, m = D % n, n
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def gen_bernoulli(n: int, D: int) -> Fraction:
    """Generalized Bernoulli number B_{n, chi_D} for a fundamental discriminant D."""
    if n < 1:
        raise ValueError("n must be positive")
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    return _gen_bernoulli(n, D)


@lru_cache(maxsize=None)
def _gen_bernoulli(n: int, D: int) -> Fraction:
    f = abs(D)
    chi = [kronecker(D, a) for a in range(f + 1)]
    # B_n(x) = sum_j C(n,j) B_j x^(n-j) turns the defining sum into power sums
    power = [sum(chi[a] * a**m for a in range(1, f + 1)) for m in range(n + 1)]
    return sum(comb(n, j) * bernoulli(j) * Fraction(f) ** (j - 1) * power[n - j] for j in range(n + 1))


def _disc_split(M: int) -> tuple[int, int]:
    """Write a discriminant M as D f^2 with D fundamental."""
    sq = 1
    core = 1 if M > 0 else -1
    for q, e in _factor(abs(M)).items():
        sq *= q ** (e // 2)
        if e % 2:
            core *= q
    if core % 4 == 1:
        return core, sq
    return 4 * core, sq // 2


@lru_cache(maxsize=None)
def cohen_h(r: int, N: int) -> Fraction:
    """Cohen's function H(r, N)."""
    if r < 1 or N < 0:
        raise ValueError("need r >= 1 and N >= 0")
    if N == 0:
        return zeta_neg(2 * r)
    M = (-1) ** r * N
    if M % 4 not in (0, 1):
        return Fraction(0)
    D, f = _disc_split(M)
    L = -gen_bernoulli(r, D) / r
    tail = sum(
        _mobius(d) * kronecker(D, d) * d ** (r - 1) * sigma(f // d, 2 * r - 1) for d in _divisors(f)
    )
    return L * tail


# -- Eisenstein series -----------------------------------------------------

def eisenstein1(k: int, bound: int) -> QExp1:
    if k < 4 or k % 2:
        raise ValueError("weight must be even and at least 4")
    c = Fraction(-2 * k) / bernoulli(k)
    return QExp1(k, 0, bound, [1] + [c * sigma(n, k - 1) for n in range(1, bound + 1)])


def siegel_eisenstein(k: int, bound: int) -> QExp2:
    """Degree-2 Siegel Eisenstein series of even weight k >= 4, constant term 1."""
    if k < 4 or k % 2:
        raise ValueError("weight must be even and at least 4")
    c1 = 2 / zeta_neg(k)
    c2 = 2 / (zeta_neg(k) * zeta_neg(2 * k - 2))
    memo: dict[tuple[int, int], object] = {}
    F = QExp2(k, 0, bound)
    a, c, b, psd = qexp.grid(bound)
    for idx in zip(*np.nonzero(psd)):
        T = (int(a[idx]), int(b[idx]), int(c[idx]))
        D, e = 4 * T[0] * T[2] - T[1] ** 2, content(T)
        if (D, e) not in memo:
            if e == 0:
                v = Fraction(1)
            elif D == 0:
                v = c1 * sigma(e, k - 1)
            else:
                v = c2 * sum(d ** (k - 1) * cohen_h(k - 1, D // (d * d)) for d in _divisors(e))
            memo[D, e] = qexp._norm(v)
        F.data[idx] = memo[D, e]
    return F


def _e8_vectors(max_norm: int) -> np.ndarray:
    """E8 lattice vectors (doubled coordinates) with x.x <= max_norm."""
    m = isqrt(max_norm)
    even = np.arange(-m, m + 1) * 2
    top = 2 * m + 1
    odd = np.array([v for v in range(-top, top + 1) if v % 2])
    found = []
    for entries in (even, odd):
        # build coordinates incrementally, pruning on the partial norm
        vecs = np.zeros((1, 0), dtype=np.int64)
        for _ in range(8):
            vecs = np.concatenate(
                [np.hstack([vecs, np.full((len(vecs), 1), v)]) for v in entries]
            )
            vecs = vecs[(vecs**2).sum(axis=1) <= 4 * max_norm]
        vecs = vecs[vecs.sum(axis=1) % 4 == 0]
        found.append(vecs)
    return np.concatenate(found)


def theta_e8(bound: int, cap: int = 4) -> QExp2:
    """Genus-2 theta series of E8 by brute-force counting of vector pairs."""
    if bound > cap:
        raise ValueError(f"bound {bound} exceeds enumeration cap {cap}")
    vecs = _e8_vectors(2 * bound)
    norms = (vecs**2).sum(axis=1) // 4  # = x.x
    F = QExp2(4, 0, bound)
    for a in range(bound + 1):
        X = vecs[norms == 2 * a]
        # Permutations and even sign changes preserve E8, so the histogram of
        # x.y over a norm shell depends on x only through its orbit.
        canon = np.hstack([np.sort(np.abs(X), axis=1), _neg_parity(X)[:, None]])
        _, first, mult = np.unique(canon, axis=0, return_index=True, return_counts=True)
        reps = X[first].astype(np.float64)
        for c in range(bound + 1):
            Y = vecs[norms == 2 * c].astype(np.float64)
            dots = np.rint(reps @ Y.T).astype(np.int64) // 4 + 2 * bound
            counts = np.zeros(4 * bound + 1, dtype=np.int64)
            for row, m in zip(dots, mult):
                counts += m * np.bincount(row, minlength=4 * bound + 1)
            F.data[a, c, :] = counts
    return F


def _neg_parity(X: np.ndarray) -> np.ndarray:
    """Parity of negative entries; irrelevant (0) once some entry vanishes."""
    par = (X < 0).sum(axis=1) % 2
    return np.where((X == 0).any(axis=1), 0, par)


# -- cusp forms -------------------------------------------------------------

def _normalize_at(F: QExp2, T) -> QExp2:
    v = F[T]
    if v == 0:
        raise ArithmeticError(f"coefficient at {T} vanishes; cannot normalize")
    return qexp.scale(F, Fraction(1) / v)


def igusa_x10(bound: int, E4=None, E6=None, E10=None) -> QExp2:
    E4 = E4 or siegel_eisenstein(4, bound)
    E6 = E6 or siegel_eisenstein(6, bound)
    E10 = E10 or siegel_eisenstein(10, bound)
    return _normalize_at(mul(E4, E6) - E10, (1, 1, 1))


def cusp_combination(forms: list[QExp2]) -> list[Fraction]:
    """The unique (up to scale) combination of ``forms`` whose Phi-image vanishes."""
    rows = [[qexp._frac(F.data[0, m, 2 * F.bound]) for F in forms] for m in range(forms[0].bound + 1)]
    kernel = sympy.Matrix(rows).nullspace()
    if len(kernel) != 1:
        raise ArithmeticError(f"cusp kernel has dimension {len(kernel)}, expected 1")
    return [Fraction(int(x.p), int(x.q)) for x in kernel[0]]


def igusa_x12(bound: int, E4=None, E6=None, E12=None) -> QExp2:
    E4 = E4 or siegel_eisenstein(4, bound)
    E6 = E6 or siegel_eisenstein(6, bound)
    E12 = E12 or siegel_eisenstein(12, bound)
    forms = [mul(mul(E4, E4), E4), mul(E6, E6), E12]
    coeffs = cusp_combination(forms)
    return _normalize_at(linear_combine(list(zip(coeffs, forms))), (1, 1, 1))


def wronskian(gens: list[QExp2]) -> QExp2:
    """det of rows (k_i F_i), d_tau F_i, d_z F_i, d_tau' F_i; weight sum(k_i) + 3."""
    rows = [[qexp.scale(F, F.weight) for F in gens]]
    parts = [qexp.derivatives(F) for F in gens]
    rows += [[parts[i][r] for i in range(4)] for r in range(3)]

    def minor(r0, r1, i, j):
        return mul(rows[r0][i], rows[r1][j]) - mul(rows[r0][j], rows[r1][i])

    terms = []
    for S in itertools.combinations(range(4), 2):
        rest = tuple(i for i in range(4) if i not in S)
        # Laplace expansion along the first two rows
        sign = (-1) ** (sum(S) + 1)  # rows 0,1 -> (0+1) + columns
        terms.append((sign, mul(minor(0, 1, *S), minor(2, 3, *rest))))
    return linear_combine(terms)


def igusa_x35(bound: int, E4=None, E6=None, X10=None, X12=None) -> QExp2:
    E4 = E4 or siegel_eisenstein(4, bound)
    E6 = E6 or siegel_eisenstein(6, bound)
    X10 = X10 or igusa_x10(bound, E4, E6)
    X12 = X12 or igusa_x12(bound, E4, E6)
    W = wronskian([E4, E6, X10, X12])
    lead = next((T for T, _ in W.items()), None)
    if lead is None:
        raise ArithmeticError(f"Wronskian vanishes at bound {bound}; raise the bound")
    return _normalize_at(W, lead)


# -- cache ----------------------------------------------------------------------

def default_cache_dir() -> Path:
    return Path(os.environ.get("SIEGELMODP_CACHE", Path.home() / ".cache" / "siegelmodp"))


class GeneratorCache:
    """Characteristic-0 generators at a fixed bound, persisted as qexp files.

    Reductions mod p are memoized per prime.  Build once, then share read-only.
    """

    def __init__(self, bound: int = 16, cache_dir: str | Path | None = None, persist: bool = True):
        self.bound = bound
        self.cache_dir = Path(cache_dir) if cache_dir else default_cache_dir()
        self.persist = persist
        self._forms: dict[str, QExp2] = {}
        self._mod: dict[tuple[str, int], QExp2] = {}

    def path(self, name: str) -> Path:
        return self.cache_dir / f"{name}-B{self.bound}.qexp"

    def _build(self, name: str) -> QExp2:
        B = self.bound
        if name in ("E4", "E6", "E10", "E12"):
            return siegel_eisenstein(WEIGHTS[name], B)
        if name == "X10":
            return igusa_x10(B, self["E4"], self["E6"], self["E10"])
        if name == "X12":
            return igusa_x12(B, self["E4"], self["E6"], self["E12"])
        if name == "X35":
            return igusa_x35(B, self["E4"], self["E6"], self["X10"], self["X12"])
        raise KeyError(name)

    def __getitem__(self, name: str) -> QExp2:
        if name not in self._forms:
            path = self.path(name)
            if self.persist and path.exists():
                self._forms[name] = qexp.parse(path.read_text())
            else:
                log.info("building %s at bound %d", name, self.bound)
                F = self._build(name)
                if self.persist:
                    self.cache_dir.mkdir(parents=True, exist_ok=True)
                    tmp = path.with_suffix(f".tmp{os.getpid()}")
                    tmp.write_text(qexp.serialize(F))
                    os.replace(tmp, path)
                self._forms[name] = F
        return self._forms[name]

    def mod(self, name: str, p: int, bound: int | None = None) -> QExp2:
        if (name, p) not in self._mod:
            self._mod[name, p] = reduce_mod(self[name], p)
        F = self._mod[name, p]
        return F if bound is None else F.truncate(bound)

    def set_form(self, name: str, F: QExp2) -> None:
        """Replace a generator (used to test invariance under rescaling)."""
        self._forms[name] = F
        self._mod = {k: v for k, v in self._mod.items() if k[0] != name}


_DEFAULT: dict[tuple, GeneratorCache] = {}


def default_cache(bound: int = 16, cache_dir=None) -> GeneratorCache:
    key = (bound, str(cache_dir))
    if key not in _DEFAULT:
        _DEFAULT[key] = GeneratorCache(bound, cache_dir)
    return _DEFAULT[key]
