"""Truncated Fourier expansions of degree 2 (and 1).

A degree-2 expansion of bound ``B`` knows ``a_F(T)`` for every semidefinite
``T = (a, b, c)`` with ``a, c <= B``.  Coefficients live in a dense array
indexed ``[a, c, b + 2B]``; entries outside the semidefinite cone are zero.

Characteristic 0 arrays hold Python ints / ``Fraction`` objects, characteristic
``p`` arrays hold ``int64`` residues in ``[0, p)``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import gmpy2
import numpy as np
from scipy import fft as sfft

from .halfint import HalfIntMat, enumerate_keys

INF = math.inf


def sturm_bound(k: int) -> int:
    """Diagonal cutoff ``b_k``: [k/10] for even k, [(k-5)/10] for odd k."""
    if k < 0:
        raise ValueError("weight must be non-negative")
    if k % 2 == 0:
        return k // 10
    return max(k - 5, 0) // 10


def _grid(bound: int):
    """Index arrays (a, c, b) matching the storage layout, plus the psd mask."""
    a, c, j = np.meshgrid(
        np.arange(bound + 1), np.arange(bound + 1), np.arange(4 * bound + 1), indexing="ij"
    )
    b = j - 2 * bound
    return a, c, b, b * b <= 4 * a * c


_GRIDS: dict[int, tuple] = {}


def grid(bound: int):
    if bound not in _GRIDS:
        _GRIDS[bound] = _grid(bound)
    return _GRIDS[bound]


def _empty(bound: int, char: int) -> np.ndarray:
    shape = (bound + 1, bound + 1, 4 * bound + 1)
    if char == 0:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    return np.zeros(shape, dtype=np.int64)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class QExp2:
    """Truncated degree-2 Fourier expansion with weight and characteristic labels."""

    __slots__ = ("weight", "char", "bound", "data")

    def __init__(self, weight: int, char: int, bound: int, data: np.ndarray | None = None):
        if char != 0 and (char < 3 or any(char % d == 0 for d in range(2, math.isqrt(char) + 1))):
            raise ValueError(f"characteristic must be 0 or an odd prime, got {char}")
        self.weight = weight
        self.char = char
        self.bound = bound
        if data is None:
            data = _empty(bound, char)
        elif data.shape != (bound + 1, bound + 1, 4 * bound + 1):
            raise ValueError("data shape does not match bound")
        self.data = data

    # -- construction ---------------------------------------------------
    @classmethod
    def from_dict(cls, weight: int, char: int, bound: int, coeffs: dict) -> "QExp2":
        F = cls(weight, char, bound)
        for T, v in coeffs.items():
            a, b, c = T
            if a > bound or c > bound or b * b > 4 * a * c or a < 0 or c < 0:
                raise KeyError(f"key {tuple(T)} outside bound {bound}")
            F.data[a, c, b + 2 * bound] = v % char if char else v
        return F

    @classmethod
    def constant(cls, value, char: int, bound: int, weight: int = 0) -> "QExp2":
        F = cls(weight, char, bound)
        F.data[0, 0, 2 * bound] = value % char if char else value
        return F

    def copy(self, weight: int | None = None) -> "QExp2":
        return QExp2(self.weight if weight is None else weight, self.char, self.bound, self.data.copy())

    # -- access ---------------------------------------------------------
    def __getitem__(self, T):
        a, b, c = T
        if a > self.bound or c > self.bound:
            raise KeyError(f"key {tuple(T)} beyond bound {self.bound}")
        if b * b > 4 * a * c:
            return 0
        return self.data[a, c, b + 2 * self.bound]

    def items(self) -> Iterable[tuple[HalfIntMat, object]]:
        """Nonzero coefficients in (a, c, b) order."""
        B = self.bound
        for a, c, j in zip(*np.nonzero(self.data != 0)):
            yield HalfIntMat(int(a), int(j) - 2 * B, int(c)), self.data[a, c, j]

    @property
    def coeffs(self) -> dict:
        return dict(self.items())

    def is_zero(self) -> bool:
        return not np.any(self.data != 0)

    def truncate(self, bound: int) -> "QExp2":
        if bound > self.bound:
            raise ValueError(f"cannot extend bound {self.bound} to {bound}")
        if bound == self.bound:
            return self
        off = 2 * (self.bound - bound)
        data = self.data[: bound + 1, : bound + 1, off : off + 4 * bound + 1].copy()
        return QExp2(self.weight, self.char, bound, data)

    def reduced_values(self, bound: int | None = None) -> list:
        """Coefficients at reduced keys with ``c <= bound``, in key order."""
        bound = self.bound if bound is None else bound
        return [self[T] for T in enumerate_keys(bound, "reduced")]

    def parity_ok(self) -> bool:
        """a(a,-b,c) = (-1)^k a(a,b,c)."""
        flipped = self.data[:, :, ::-1]
        if self.weight % 2 == 0:
            return bool(np.all(flipped == self.data))
        if self.char:
            return bool(np.all((flipped + self.data) % self.char == 0))
        return bool(np.all(flipped + self.data == 0))

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "QExp2", same_weight: bool = True) -> None:
        if self.char != other.char:
            raise ValueError(f"characteristic mismatch: {self.char} vs {other.char}")
        if same_weight and self.weight != other.weight:
            raise ValueError(f"weight mismatch: {self.weight} vs {other.weight}")

    def __add__(self, other: "QExp2") -> "QExp2":
        return linear_combine([(1, self), (1, other)])

    def __sub__(self, other: "QExp2") -> "QExp2":
        return linear_combine([(1, self), (-1, other)])

    def __neg__(self) -> "QExp2":
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, QExp2):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExp2):
            return NotImplemented
        return (
            self.weight == other.weight
            and self.char == other.char
            and self.bound == other.bound
            and bool(np.all(self.data == other.data))
        )

    __hash__ = None

    def __repr__(self) -> str:
        nz = int(np.count_nonzero(self.data != 0))
        return f"QExp2(weight={self.weight}, char={self.char}, bound={self.bound}, nonzero={nz})"


class QExp1:
    """Truncated degree-1 q-expansion ``sum c_n q^n``, ``n <= bound``."""

    __slots__ = ("weight", "char", "bound", "coeffs")

    def __init__(self, weight: int, char: int, bound: int, coeffs: Iterable):
        self.weight = weight
        self.char = char
        self.bound = bound
        cs = list(coeffs)[: bound + 1]
        cs += [0] * (bound + 1 - len(cs))
        self.coeffs = [c % char for c in cs] if char else [_norm(c) for c in cs]

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExp1):
            return NotImplemented
        return (self.char, self.bound, self.coeffs) == (other.char, other.bound, other.coeffs)

    __hash__ = None

    def __mul__(self, other: "QExp1") -> "QExp1":
        if self.char != other.char:
            raise ValueError("characteristic mismatch")
        B = min(self.bound, other.bound)
        out = [sum(self.coeffs[i] * other.coeffs[n - i] for i in range(n + 1)) for n in range(B + 1)]
        return QExp1(self.weight + other.weight, self.char, B, out)

    def __repr__(self) -> str:
        return f"QExp1(weight={self.weight}, char={self.char}, {self.coeffs})"


def _norm(x):
    """Collapse integral Fractions to int so object arrays stay cheap."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def scale(F: QExp2, s) -> QExp2:
    if F.char:
        s = Fraction(s)
        s = s.numerator * pow(s.denominator, -1, F.char)
        return QExp2(F.weight, F.char, F.bound, (F.data * (s % F.char)) % F.char)
    if isinstance(s, Fraction) and s.denominator != 1:
        return QExp2(F.weight, 0, F.bound, _normalize_obj(F.data * s))
    return QExp2(F.weight, 0, F.bound, F.data * int(s))


def _normalize_obj(arr: np.ndarray) -> np.ndarray:
    return np.frompyfunc(_norm, 1, 1)(arr).astype(object)


def linear_combine(terms: list) -> QExp2:
    """Coefficient-wise ``sum s_i F_i`` at the minimal bound of the inputs."""
    if not terms:
        raise ValueError("empty combination")
    first = terms[0][1]
    for _, F in terms[1:]:
        first._check(F)
    B = min(F.bound for _, F in terms)
    char = first.char
    acc = _empty(B, char)
    for s, F in terms:
        acc = acc + scale(F.truncate(B), s).data
    if char:
        acc %= char
    elif any(isinstance(s, Fraction) for s, _ in terms):
        acc = _normalize_obj(acc)
    return QExp2(first.weight, char, B, acc)


# -- multiplication -----------------------------------------------------

def mul(F: QExp2, G: QExp2) -> QExp2:
    """Product of expansions at bound ``min(B_F, B_G)``; weights add."""
    F._check(G, same_weight=False)
    B = min(F.bound, G.bound)
    f, g = F.truncate(B).data, G.truncate(B).data
    data = conv_modp(f, g, F.char, B) if F.char else conv_exact(f, g, B)
    return QExp2(F.weight + G.weight, F.char, B, data)


_FFT_SHAPES: dict[int, tuple] = {}


def _fft_shape(B: int) -> tuple:
    # Cyclic lengths that leave the kept window (a, c <= B, |b| <= 2B) alias free.
    if B not in _FFT_SHAPES:
        n = sfft.next_fast_len(2 * B + 1, real=True)
        _FFT_SHAPES[B] = (n, n, sfft.next_fast_len(6 * B + 1, real=True))
    return _FFT_SHAPES[B]


def centered(x: np.ndarray, p: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64) % p
    return np.where(x > p // 2, x - p, x)


def fft_of(x: np.ndarray, p: int, B: int) -> np.ndarray:
    """Spectrum of a mod-p coefficient array, reusable across products."""
    return sfft.rfftn(centered(x, p).astype(np.float64), _fft_shape(B))


def conv_from_fft(xf: np.ndarray, yf: np.ndarray, p: int, B: int) -> np.ndarray:
    shape = _fft_shape(B)
    z = sfft.irfftn(xf * yf, shape)[: B + 1, : B + 1, 2 * B : 6 * B + 1]
    r = np.rint(z)
    if z.size and float(np.max(np.abs(z - r))) > 0.2:
        raise ArithmeticError("floating point convolution lost exactness")
    return r.astype(np.int64) % p


def conv_modp(f: np.ndarray, g: np.ndarray, p: int, B: int) -> np.ndarray:
    return conv_from_fft(fft_of(f, p, B), fft_of(g, p, B), p, B)


def _common_den(arr: np.ndarray) -> int:
    den = 1
    for x in arr.flat:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = math.lcm(den, x.denominator)
    return den


def _pack(ints: np.ndarray, width: int) -> int:
    """Kronecker substitution: sum v_i 2^(width*i) for a flat signed int array."""
    nbytes = width // 8
    pos = b"".join(int(v).to_bytes(nbytes, "little") if v > 0 else bytes(nbytes) for v in ints)
    neg = b"".join((-int(v)).to_bytes(nbytes, "little") if v < 0 else bytes(nbytes) for v in ints)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def conv_exact(f: np.ndarray, g: np.ndarray, B: int) -> np.ndarray:
    """Exact rational convolution via one big-integer product (GMP)."""
    df, dg = _common_den(f), _common_den(g)
    fi = np.frompyfunc(lambda x: int(x * df), 1, 1)(f)
    gi = np.frompyfunc(lambda x: int(x * dg), 1, 1)(g)
    mf = max((abs(int(x)) for x in fi.flat), default=0)
    mg = max((abs(int(x)) for x in gi.flat), default=0)
    out = _empty(B, 0)
    if mf == 0 or mg == 0:
        return out
    nb = 4 * B + 1
    # layout of the untruncated product: a, c in [0, 2B], b-index in [0, 8B]
    Lb, Lc = 8 * B + 1, 2 * B + 1
    bits = mf.bit_length() + mg.bit_length() + (f.size).bit_length() + 2
    width = 8 * ((bits + 7) // 8)

    def layout(x):
        flat = np.zeros(Lc * Lc * Lb, dtype=object)
        view = flat.reshape(Lc, Lc, Lb)
        view[: B + 1, : B + 1, :nb] = x
        return flat

    prod = gmpy2.mpz(_pack(layout(fi), width)) * gmpy2.mpz(_pack(layout(gi), width))
    n_slots = Lc * Lc * Lb
    half = 1 << (width - 1)
    # bias every digit by 2^(width-1) so the signed digits read off without borrows
    bias = int.from_bytes(half.to_bytes(width // 8, "little") * n_slots, "little")
    raw = int(prod + bias).to_bytes(n_slots * width // 8 + 1, "little")
    nbytes = width // 8
    den = df * dg
    for a in range(B + 1):
        for c in range(B + 1):
            base = (a * Lc + c) * Lb
            for j in range(2 * B, 6 * B + 1):
                s = base + j
                v = int.from_bytes(raw[s * nbytes : (s + 1) * nbytes], "little") - half
                if v:
                    out[a, c, j - 2 * B] = _norm(Fraction(v, den)) if den != 1 else v
    return out


def mul_naive(F: QExp2, G: QExp2) -> QExp2:
    """Key-by-key convolution; slow, kept as an independent check of ``mul``."""
    B = min(F.bound, G.bound)
    keys = enumerate_keys(B, "full")
    out = {}
    for T1 in keys:
        x = F[T1]
        if x == 0:
            continue
        for T2 in keys:
            a, b, c = T1[0] + T2[0], T1[1] + T2[1], T1[2] + T2[2]
            if a > B or c > B:
                continue
            out[(a, b, c)] = out.get((a, b, c), 0) + x * G[T2]
    return QExp2.from_dict(F.weight + G.weight, F.char, B, out)


# -- other operations ------------------------------------------------------

def phi(F: QExp2) -> QExp1:
    """Siegel Phi: m -> a_F(0, 0, m)."""
    B = F.bound
    return QExp1(F.weight, F.char, B, [F.data[0, m, 2 * B] for m in range(B + 1)])


def _val(x, p: int) -> float:
    x = _frac(x)
    if x == 0:
        return INF
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def nu_p(F: QExp2, p: int) -> float:
    """Minimal p-adic valuation of the stored coefficients (inf for zero)."""
    if F.char:
        raise ValueError("nu_p needs a characteristic-0 expansion")
    return min((_val(x, p) for x in F.data.flat if x != 0), default=INF)


def reduce_mod(F: QExp2, p: int) -> QExp2:
    if F.char == p:
        return F
    if F.char:
        raise ValueError(f"cannot reduce a characteristic-{F.char} expansion mod {p}")
    out = np.zeros(F.data.shape, dtype=np.int64)
    for idx in zip(*np.nonzero(F.data != 0)):
        x = _frac(F.data[idx])
        if x.denominator % p == 0:
            raise ValueError(f"coefficient {x} is not {p}-integral")
        out[idx] = x.numerator * pow(x.denominator, -1, p) % p
    return QExp2(F.weight, p, F.bound, out)


def congruent_mod_p(F: QExp2, G: QExp2, p: int) -> bool:
    """F == G mod p, tested on reduced keys up to the Sturm bound of the weight."""
    if F.weight != G.weight:
        raise ValueError("weights differ")
    b = sturm_bound(F.weight)
    if min(F.bound, G.bound) < b:
        raise ValueError(f"bound {min(F.bound, G.bound)} below Sturm bound {b}")
    Fp, Gp = reduce_mod(F, p), reduce_mod(G, p)
    return all((x - y) % p == 0 for x, y in zip(Fp.reduced_values(b), Gp.reduced_values(b)))


def derivatives(F: QExp2) -> tuple[QExp2, QExp2, QExp2]:
    """Coefficients scaled by a, b, c (the three partials without 2 pi i)."""
    a, c, b, _ = grid(F.bound)
    parts = []
    for m in (a, b, c):
        d = F.data * m
        if F.char:
            d %= F.char
        parts.append(QExp2(F.weight + 1, F.char, F.bound, d))
    return tuple(parts)


# -- text format ---------------------------------------------------------

def _fmt(x, char: int) -> str:
    if char:
        return str(int(x) % char)
    x = _frac(x)
    return f"{x.numerator}/{x.denominator}"


def serialize(F) -> str:
    if isinstance(F, QExp1):
        lines = [f"qexp1 weight={F.weight} char={F.char} bound={F.bound}"]
        lines += [f"{n} {_fmt(x, F.char)}" for n, x in enumerate(F.coeffs) if x != 0]
        return "\n".join(lines) + "\n"
    lines = [f"qexp2 weight={F.weight} char={F.char} bound={F.bound}"]
    lines += [f"{T.key} {_fmt(x, F.char)}" for T, x in F.items()]
    return "\n".join(lines) + "\n"


def _header(line: str) -> tuple[str, dict]:
    kind, *fields = line.split()
    meta = {}
    for fld in fields:
        k, _, v = fld.partition("=")
        meta[k] = int(v)
    if set(meta) != {"weight", "char", "bound"}:
        raise ValueError(f"malformed header: {line!r}")
    return kind, meta


def _value(text: str, char: int):
    if char:
        v = int(text)
        if not 0 <= v < char:
            raise ValueError(f"residue {v} out of range for char {char}")
        return v
    num, sep, den = text.partition("/")
    if not sep or int(den) <= 0:
        raise ValueError(f"malformed rational {text!r}")
    x = Fraction(int(num), int(den))
    if x.denominator != int(den):
        raise ValueError(f"rational {text!r} not in lowest terms")
    return _norm(x)


def parse(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty input")
    kind, meta = _header(lines[0])
    if kind == "qexp1":
        cs = [0] * (meta["bound"] + 1)
        for ln in lines[1:]:
            n, v = ln.split()
            if not 0 <= int(n) <= meta["bound"]:
                raise ValueError(f"index {n} beyond bound")
            cs[int(n)] = _value(v, meta["char"])
        return QExp1(meta["weight"], meta["char"], meta["bound"], cs)
    if kind != "qexp2":
        raise ValueError(f"unknown expansion kind {kind!r}")
    coeffs = {}
    for ln in lines[1:]:
        key, v = ln.split()
        coeffs[HalfIntMat.from_key(key)] = _value(v, meta["char"])
    return QExp2.from_dict(meta["weight"], meta["char"], meta["bound"], coeffs)
