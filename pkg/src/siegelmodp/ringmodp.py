"""The mod-p ring F_p[x4, x6, x10, x12] (with x35 for odd weights).

``psi`` sends an isobaric polynomial to its expansion in the reduced
generators; ``psi_inv`` inverts it by linear algebra on reduced keys up to the
Sturm bound.  Filtrations come from the h-adic order, where ``psi(h) = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import linalg
from .genforms import GeneratorCache, default_cache
from .halfint import discriminant, enumerate_keys
from .qexp import QExp2, fft_of, conv_from_fft, sturm_bound

__all__ = [
    "IsobaricPoly", "gens", "monomials", "dim", "sturm_bound", "MonomialCache",
    "psi", "psi_inv", "h_poly", "reduction_expansion", "ord_h", "omega1",
    "kernel_theta", "echelon_basis", "EchelonResult",
]

VAR_WEIGHTS = (4, 6, 10, 12)
VAR_NAMES = ("x4", "x6", "x10", "x12")
GEN_NAMES = ("E4", "E6", "X10", "X12")


# -- monomial orders ---------------------------------------------------------

def _grevlex(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex(e):
    return tuple(e)


ORDERS = {"grevlex": _grevlex, "lex": _lex}


def order_key(order: str):
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


# -- polynomials ------------------------------------------------------------------

class IsobaricPoly:
    """Weighted-homogeneous polynomial over F_p, optionally times x35."""

    __slots__ = ("p", "weight", "x35", "terms")

    def __init__(self, p: int, weight: int, terms: dict | None = None, x35: int = 0):
        self.p = p
        self.weight = weight
        self.x35 = x35
        self.terms = {}
        for e, c in (terms or {}).items():
            c %= p
            if c:
                if _exp_weight(e) + 35 * x35 != weight:
                    raise ValueError(f"monomial {e} does not have weight {weight}")
                self.terms[tuple(e)] = c

    @classmethod
    def zero(cls, p: int, weight: int, x35: int = 0) -> "IsobaricPoly":
        return cls(p, weight, {}, x35)

    @classmethod
    def monomial(cls, p: int, e, coeff: int = 1, x35: int = 0) -> "IsobaricPoly":
        return cls(p, _exp_weight(e) + 35 * x35, {tuple(e): coeff}, x35)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _compat(self, other: "IsobaricPoly") -> None:
        if self.p != other.p or self.weight != other.weight or self.x35 != other.x35:
            raise ValueError("polynomials live in different spaces")

    def __add__(self, other):
        if isinstance(other, int):
            other = IsobaricPoly(self.p, 0, {(0, 0, 0, 0): other})
        self._compat(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = (out.get(e, 0) + c) % self.p
        return IsobaricPoly(self.p, self.weight, out, self.x35)

    def __neg__(self):
        return IsobaricPoly(self.p, self.weight, {e: -c for e, c in self.terms.items()}, self.x35)

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IsobaricPoly(self.p, self.weight, {e: c * other for e, c in self.terms.items()}, self.x35)
        if self.p != other.p:
            raise ValueError("different primes")
        if self.x35 and other.x35:
            raise ValueError("x35^2 is not represented; rewrite it in the even ring")
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % self.p
        return IsobaricPoly(self.p, self.weight + other.weight, out, self.x35 | other.x35)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = IsobaricPoly(self.p, 0, {(0, 0, 0, 0): 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.terms == ({(0, 0, 0, 0): other % self.p} if other % self.p else {})
        if not isinstance(other, IsobaricPoly):
            return NotImplemented
        return (self.p, self.weight, self.x35, self.terms) == (other.p, other.weight, other.x35, other.terms)

    def __hash__(self):
        return hash((self.p, self.weight, self.x35, frozenset(self.terms.items())))

    def sorted_terms(self, order: str = "grevlex"):
        key = order_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading(self, order: str = "grevlex"):
        """(exponent, coefficient) of the leading term; None for zero."""
        if not self.terms:
            return None
        key = order_key(order)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, order: str = "grevlex") -> tuple["IsobaricPoly", int]:
        """Rescale so the leading coefficient is 1; also return the scale used."""
        lt = self.leading(order)
        if lt is None:
            return self, 1
        s = pow(lt[1], -1, self.p)
        return self * s, s

    def cofactor(self) -> "IsobaricPoly":
        """The even-weight polynomial G with self = x35 * G."""
        return IsobaricPoly(self.p, self.weight - 35 * self.x35, self.terms, 0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = " ".join(
                f"{n}^{k}" if k > 1 else n for n, k in zip(VAR_NAMES, e) if k
            )
            if self.x35:
                mono = f"{mono} x35".strip()
            parts.append(f"{c} * {mono}" if mono else str(c))
        return " + ".join(parts)

    __repr__ = __str__


def _exp_weight(e) -> int:
    return sum(w * x for w, x in zip(VAR_WEIGHTS, e))


def gens(p: int) -> tuple[IsobaricPoly, ...]:
    """x4, x6, x10, x12 over F_p."""
    return tuple(IsobaricPoly.monomial(p, tuple(int(i == j) for j in range(4))) for i in range(4))


def x35(p: int) -> IsobaricPoly:
    return IsobaricPoly.monomial(p, (0, 0, 0, 0), x35=1)


@lru_cache(maxsize=None)
def _even_exponents(k: int) -> tuple:
    if k < 0 or k % 2:
        return ()
    out = []
    for d in range(k // 12 + 1):
        for c in range((k - 12 * d) // 10 + 1):
            rest = k - 12 * d - 10 * c
            for b in range(rest // 6 + 1):
                r = rest - 6 * b
                if r % 4 == 0:
                    out.append((r // 4, b, c, d))
    return tuple(out)


def monomials(k: int, p: int | None = None, order: str = "grevlex") -> list[tuple]:
    """Basis monomials of weight k as (exponents, x35 flag), in decreasing order."""
    key = order_key(order)
    if k % 2 == 0:
        return [(e, 0) for e in sorted(_even_exponents(k), key=key, reverse=True)]
    return [(e, 1) for e in sorted(_even_exponents(k - 35), key=key, reverse=True)]


def dim(k: int) -> int:
    return len(monomials(k))


def poly_from_vector(vec, monos, p: int, k: int) -> IsobaricPoly:
    x = monos[0][1] if monos else k % 2
    return IsobaricPoly(p, k, {e: int(c) for (e, _), c in zip(monos, vec) if int(c) % p}, x)


def poly_to_vector(f: IsobaricPoly, monos) -> np.ndarray:
    return np.array([f.terms.get(e, 0) for e, _ in monos], dtype=np.int64)


# -- monomial expansions ------------------------------------------------------

def reduced_index(bound_store: int, b: int):
    """Flat indices of the reduced keys with c <= b inside a bound_store array."""
    keys = enumerate_keys(b, "reduced")
    L = 4 * bound_store + 1
    return np.array([(T[0] * (bound_store + 1) + T[2]) * L + T[1] + 2 * bound_store for T in keys]), keys


class MonomialCache:
    """Mod-p expansions of generator monomials at a fixed bound.

    Each monomial is built from a parent by one FFT product with a generator.
    Entries are stored as uint8 (p < 256).
    """

    def __init__(self, p: int, bound: int, gens_cache: GeneratorCache | None = None):
        if p < 5:
            raise ValueError("p must be at least 5")
        self.p = p
        self.bound = bound
        self.gc = gens_cache or default_cache()
        if bound > self.gc.bound:
            raise ValueError(f"bound {bound} exceeds generator bound {self.gc.bound}")
        self._gen = [self.gc.mod(n, p, bound) for n in GEN_NAMES]
        self._gen_fft = [fft_of(G.data, p, bound) for G in self._gen]
        self._x35 = None
        self._exp: dict = {}
        self._red: dict = {}
        self._h = None

    def _x35_fft(self):
        if self._x35 is None:
            self._x35 = fft_of(self.gc.mod("X35", self.p, self.bound).data, self.p, self.bound)
        return self._x35

    def expansion(self, e, flag: int = 0) -> np.ndarray:
        e = tuple(e)
        key = (e, flag)
        if key in self._exp:
            return self._exp[key]
        B, p = self.bound, self.p
        if flag:
            parent = self.expansion(e, 0)
            arr = conv_from_fft(fft_of(parent, p, B), self._x35_fft(), p, B)
        elif sum(e) == 0:
            arr = np.zeros((B + 1, B + 1, 4 * B + 1), dtype=np.int64)
            arr[0, 0, 2 * B] = 1
        else:
            i = max(j for j in range(4) if e[j])
            if sum(e) == 1:
                arr = self._gen[i].data
            else:
                pe = list(e)
                pe[i] -= 1
                parent = self.expansion(tuple(pe), 0)
                arr = conv_from_fft(fft_of(parent, p, B), self._gen_fft[i], p, B)
        arr = arr.astype(np.uint8)
        self._exp[key] = arr
        return arr

    def qexp(self, e, flag: int = 0) -> QExp2:
        return QExp2(_exp_weight(e) + 35 * flag, self.p, self.bound, self.expansion(e, flag).astype(np.int64))

    def matrix(self, k: int, b: int, order: str = "grevlex") -> tuple[np.ndarray, list, list]:
        """Rows: reduced keys with c <= b; columns: weight-k monomials."""
        if b > self.bound:
            raise ValueError(f"need bound {b}, cache has {self.bound}")
        if b not in self._red:
            self._red[b] = reduced_index(self.bound, b)
        idx, keys = self._red[b]
        monos = monomials(k, self.p, order)
        if not monos:
            return np.zeros((len(keys), 0), dtype=np.int64), monos, keys
        A = np.stack([self.expansion(e, f).ravel()[idx] for e, f in monos], axis=1).astype(np.int64)
        return A, monos, keys


_MONO: dict = {}


def monomial_cache(p: int, bound: int, gens_cache: GeneratorCache | None = None) -> MonomialCache:
    gc = gens_cache or default_cache()
    key = (p, id(gc))
    mc = _MONO.get(key)
    if mc is None or mc.bound < bound:
        mc = _MONO[key] = MonomialCache(p, bound, gc)
        # keep a single prime alive at a time: the caches are large
        for other in [k for k in _MONO if k != key]:
            del _MONO[other]
    return mc


# -- psi and its inverse ---------------------------------------------------------

def psi(f: IsobaricPoly, bound: int, gens_cache: GeneratorCache | None = None) -> QExp2:
    """Evaluate ``f`` on the reduced generators."""
    mc = monomial_cache(f.p, bound, gens_cache)
    acc = np.zeros((mc.bound + 1,) * 2 + (4 * mc.bound + 1,), dtype=np.int64)
    for e, c in f.terms.items():
        acc += c * mc.expansion(e, f.x35).astype(np.int64)
    return QExp2(f.weight, f.p, mc.bound, acc % f.p).truncate(bound)


def psi_inv_values(values, k: int, p: int, gens_cache: GeneratorCache | None = None,
                   order: str = "grevlex") -> list[IsobaricPoly]:
    """Solve for the polynomials whose images have the given reduced-key values.

    ``values`` is a matrix whose columns hold coefficients at the reduced keys
    with c <= b_k (in ``enumerate_keys`` order), one column per form.
    """
    b = sturm_bound(k)
    mc = monomial_cache(p, b, gens_cache)
    A, monos, keys = mc.matrix(k, b, order)
    Y = np.asarray(values, dtype=np.int64).reshape(len(keys), -1)
    if not monos:
        if np.any(Y % p):
            raise linalg.Inconsistent(f"nonzero form in the zero space of weight {k}")
        return [IsobaricPoly.zero(p, k, k % 2) for _ in range(Y.shape[1])]
    try:
        X = linalg.solve(A, Y, p)
    except linalg.RankDeficiency as exc:
        raise linalg.RankDeficiency(f"weight {k}, p={p}: Sturm bound {b} insufficient ({exc})") from None
    return [poly_from_vector(X[:, i], monos, p, k) for i in range(X.shape[1])]


def psi_inv(F: QExp2, k: int | None = None, gens_cache: GeneratorCache | None = None) -> IsobaricPoly:
    """The unique f with psi(f) = F (F in characteristic p, weight k)."""
    if F.char == 0:
        raise ValueError("psi_inv expects a characteristic-p expansion")
    k = F.weight if k is None else k
    b = sturm_bound(k)
    if F.bound < b:
        raise ValueError(f"expansion bound {F.bound} below Sturm bound {b}")
    vals = np.array(F.reduced_values(b), dtype=np.int64)
    return psi_inv_values(vals[:, None], k, F.char, gens_cache)[0]


def h_poly(p: int, gens_cache: GeneratorCache | None = None) -> IsobaricPoly:
    """The weight p-1 polynomial mapping to the constant 1 (unique)."""
    mc = monomial_cache(p, sturm_bound(p - 1), gens_cache)
    if mc._h is None:
        b = sturm_bound(p - 1)
        one = np.zeros(len(enumerate_keys(b, "reduced")), dtype=np.int64)
        one[0] = 1  # key (0,0,0) comes first
        mc._h = psi_inv_values(one[:, None], p - 1, p, gens_cache)[0]
    return mc._h


# -- h-adic expansion -------------------------------------------------------------

def divmod_h(f: IsobaricPoly, h: IsobaricPoly, order: str = "grevlex"):
    """f = q*h + r with no term of r divisible by the leading term of h."""
    p = f.p
    lt_e, lt_c = h.leading(order)
    inv = pow(lt_c, -1, p)
    key = order_key(order)
    g = dict(f.terms)
    q: dict = {}
    r: dict = {}
    while g:
        e = max(g, key=key)
        c = g.pop(e)
        if all(x >= y for x, y in zip(e, lt_e)):
            d = tuple(x - y for x, y in zip(e, lt_e))
            t = c * inv % p
            q[d] = (q.get(d, 0) + t) % p
            for he, hc in h.terms.items():
                if he == lt_e:
                    continue
                m = tuple(x + y for x, y in zip(d, he))
                v = (g.get(m, 0) - t * hc) % p
                if v:
                    g[m] = v
                else:
                    g.pop(m, None)
        else:
            r[e] = c
    qw = f.weight - h.weight
    return IsobaricPoly(p, qw, q, f.x35), IsobaricPoly(p, f.weight, r, f.x35)


def reduction_expansion(f: IsobaricPoly, h: IsobaricPoly, order: str = "grevlex") -> list[IsobaricPoly]:
    """[g_0, g_1, ...] with f = sum g_i h^i and every g_i free of LT(h) multiples."""
    if h.is_zero():
        raise ValueError("h must be nonzero")
    out = []
    cur = f
    while True:
        q, r = divmod_h(cur, h, order)
        out.append(r)
        if q.is_zero():
            break
        cur = q
    return out


def ord_h(f: IsobaricPoly, h: IsobaricPoly, order: str = "grevlex") -> float:
    """Largest e with h^e | f (inf for f = 0); odd-weight forms use the x35 cofactor."""
    if f.is_zero():
        return math.inf
    for i, g in enumerate(reduction_expansion(f, h, order)):
        if not g.is_zero():
            return i
    raise AssertionError("nonzero polynomial with vanishing expansion")


def ord_h_division(f: IsobaricPoly, h: IsobaricPoly, order: str = "grevlex") -> float:
    """Same as ``ord_h`` but by repeated exact division."""
    if f.is_zero():
        return math.inf
    e = 0
    while True:
        q, r = divmod_h(f, h, order)
        if not r.is_zero():
            return e
        f, e = q, e + 1


def omega1(F, k: int | None = None, gens_cache: GeneratorCache | None = None) -> int:
    """Filtration k - (p-1) ord_h; 0 for constants and for the zero form."""
    f = F if isinstance(F, IsobaricPoly) else psi_inv(F, k, gens_cache)
    h = h_poly(f.p, gens_cache)
    o = ord_h(f, h)
    if o == math.inf:
        return 0
    return f.weight - (f.p - 1) * o


# -- echelon bases ---------------------------------------------------------------

@dataclass
class EchelonResult:
    forms: list            # transformed basis (IsobaricPoly of the source weight)
    images: list           # their images
    ords: list             # ord_h of each image
    transform: np.ndarray = field(repr=False)  # rows: coefficients on the input forms


def echelon_basis(forms: list, images: list, h: IsobaricPoly, order: str = "grevlex") -> EchelonResult:
    """Change of basis making the stacked h-expansion coordinates echelon.

    After the change, ord_h of any combination equals the minimum over the
    forms involved.  Each nonzero image is scaled to leading coefficient 1.
    """
    m = len(forms)
    if m == 0:
        return EchelonResult([], [], [], np.zeros((0, 0), dtype=np.int64))
    p = h.p
    key = order_key(order)
    exps = [reduction_expansion(f, h, order) for f in images]
    depth = max(len(g) for g in exps)
    # Psi: coordinates on the monomials that occur, per level of the h-expansion
    monos = sorted({e for g in exps for gi in g for e in gi.terms}, key=key, reverse=True)
    pos = {e: i for i, e in enumerate(monos)}
    nu = len(monos)
    V = np.zeros((m, nu * depth + m), dtype=np.int64)
    for i, g in enumerate(exps):
        for j, gj in enumerate(g):
            for e, c in gj.terms.items():
                V[i, j * nu + pos[e]] = c
        V[i, nu * depth + i] = 1
    R, piv = linalg.rref(V, p, pivot_cols=nu * depth)
    T = R[:, nu * depth :]
    out_forms, out_images, ords = [], [], []
    for i in range(m):
        f = _combine(forms, T[i], p)
        img = _combine(images, T[i], p)
        if img.is_zero():
            f, s = f.monic(order)
            ords.append(math.inf)
        else:
            img, s = img.monic(order)
            f = f * s
            ords.append(piv[i] // nu)
            T[i] = T[i] * s % p
        out_forms.append(f)
        out_images.append(img)
    return EchelonResult(out_forms, out_images, ords, T)


def _combine(polys: list, coeffs, p: int) -> IsobaricPoly:
    acc = IsobaricPoly.zero(p, polys[0].weight, polys[0].x35)
    for c, f in zip(coeffs, polys):
        if int(c) % p:
            acc = acc + f * int(c)
    return acc


# -- kernel of theta -------------------------------------------------------------

class KernelBasis(list):
    """Echelon basis of the kernel of Theta in weight k, with filtration data.

    ``appears`` records whether some kernel element has filtration exactly k,
    decided by ``dim K > dim(K n h R_{k-p+1})`` rather than per basis element.
    """

    def __init__(self, p: int, k: int, basis, ords, omegas, appears: bool, dim_h_part: int):
        super().__init__(basis)
        self.p, self.k = p, k
        self.ords, self.omegas = list(ords), list(omegas)
        self.appears, self.dim_h_part = appears, dim_h_part

    @property
    def basis(self) -> list:
        return list(self)


def kernel_theta(k: int, p: int, gens_cache: GeneratorCache | None = None,
                 order: str = "grevlex") -> KernelBasis:
    """Kernel of Theta on weight-k forms mod p, with filtrations of an echelon basis."""
    b = sturm_bound(k + p + 1)
    mc = monomial_cache(p, b, gens_cache)
    A, monos, keys = mc.matrix(k, b, order)
    h = h_poly(p, gens_cache)
    if not monos:
        return KernelBasis(p, k, [], [], [], False, 0)
    inv4 = pow(4, -1, p)
    det = np.array([discriminant(T) * inv4 % p for T in keys], dtype=np.int64)
    N = linalg.nullspace(A * det[:, None] % p, p)
    basis = [poly_from_vector(v, monos, p, k) for v in N]
    ech = echelon_basis(basis, basis, h, order)
    omegas = [0 if o == math.inf else k - (p - 1) * o for o in ech.ords]
    # basis-independent membership: dim K > dim(K n hR)
    dim_h = _dim_h_part(N, monos, h, p, k, order)
    appears = len(basis) > dim_h
    if k == 0:
        appears = True  # constants: filtration 0 by convention
    return KernelBasis(p, k, ech.forms, ech.ords, omegas, appears, dim_h)


def _dim_h_part(N: np.ndarray, monos, h: IsobaricPoly, p: int, k: int, order: str) -> int:
    """dim of (row space of N) intersected with h * R_{k-(p-1)}."""
    if N.shape[0] == 0:
        return 0
    low = monomials(k - (p - 1), p, order)
    if not low:
        return 0
    Hm = np.stack([poly_to_vector(IsobaricPoly(p, k - (p - 1), {e: 1}, f) * h, monos) for e, f in low])
    r_k = linalg.rank(N, p)
    r_h = linalg.rank(Hm, p)
    r_sum = linalg.rank(np.vstack([N, Hm]), p)
    return r_k + r_h - r_sum
