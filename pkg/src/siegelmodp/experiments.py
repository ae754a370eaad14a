"""Drivers for the filtration tables, the conjecture audit and the verification suite."""
from __future__ import annotations

import csv
import io
import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field, asdict
from importlib import resources

import numpy as np

from . import ringmodp as R
from .genforms import GeneratorCache, default_cache, eisenstein1, siegel_eisenstein, theta_e8
from .halfint import discriminant, enumerate_keys, rank as key_rank
from .linalg import nullspace
from .qexp import QExp2, phi, reduce_mod, sturm_bound
from .thetaops import classify_kernel_type, theta, theta1, verify_aop_identity

PRIMES_BELOW_80 = [p for p in range(5, 80) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


def _fmt_ord(o) -> str:
    return "inf" if o == math.inf else str(o)


# -- A(p) tables -----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class AlphaRecord:
    ord: float
    l: int
    l_mod_p: int
    two_l_minus_1_mod_p: int
    multiplicity: int = 1

    @property
    def bold(self) -> bool:
        return self.l_mod_p != 0 and self.two_l_minus_1_mod_p != 0

    @property
    def key(self) -> tuple:
        return (self.ord, self.l, self.l_mod_p, self.two_l_minus_1_mod_p)

    def text(self) -> str:
        s = f"[({_fmt_ord(self.ord)}, {self.l}, {self.l_mod_p}, {self.two_l_minus_1_mod_p}), {self.multiplicity}]"
        return f"*{s}*" if self.bold else s

    def as_dict(self) -> dict:
        return {"ord": "inf" if self.ord == math.inf else self.ord, "l": self.l, "l_mod_p": self.l_mod_p,
                "two_l_minus_1_mod_p": self.two_l_minus_1_mod_p,
                "multiplicity": self.multiplicity, "bold": self.bold}


def alpha(o, w: int, p: int) -> tuple:
    l = 0 if o == math.inf else w - (p - 1) * o
    return (o, l, l % p, (2 * l - 1) % p)


def aggregate(keys) -> list[AlphaRecord]:
    return [AlphaRecord(*k, multiplicity=m) for k, m in sorted(Counter(keys).items())]


def aop_cell(k: int, p: int, gens_cache: GeneratorCache | None = None,
             order: str = "grevlex", mix_seed: int | None = None):
    """Echelon data for the A(p)-images of a basis of weight-k forms mod p.

    ``mix_seed`` replaces the monomial basis by a random invertible recombination
    of it (the output multiset must not change).
    """
    w = k + p * p - 1
    b = sturm_bound(w)
    mc = R.monomial_cache(p, b, gens_cache)
    A, monos, keys = mc.matrix(k, b, order)
    if not monos:
        return [], R.EchelonResult([], [], [], np.zeros((0, 0), dtype=np.int64))
    basis = [R.IsobaricPoly(p, k, {e: 1}, f) for e, f in monos]
    if mix_seed is not None:
        M = _random_invertible(len(monos), p, mix_seed)
        A = A @ M.T % p
        basis = [R._combine(basis, row, p) for row in M]
    keep = np.array([discriminant(T) % p == 0 for T in keys])
    Y = A * keep[:, None]
    images = R.psi_inv_values(Y, w, p, gens_cache, order)
    h = R.h_poly(p, gens_cache)
    return basis, R.echelon_basis(basis, images, h, order)


def _random_invertible(n: int, p: int, seed: int) -> np.ndarray:
    rng = random.Random(seed)
    while True:
        M = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(n)], dtype=np.int64)
        if n == 0 or len(nullspace(M, p)) == 0:
            return M


@dataclass
class AopTable:
    p: int
    rows: list  # (k, [AlphaRecord])

    def row(self, k: int) -> list:
        return dict(self.rows)[k]


def table_aop(p: int, kmax: int = 60, gens_cache: GeneratorCache | None = None,
              order: str = "grevlex", mix_seed: int | None = None, kmin: int = 4) -> AopTable:
    if p not in (5, 7):
        raise ValueError("A(p) tables are defined for p in {5, 7}")
    gc = gens_cache or default_cache()
    need = sturm_bound(kmax + p * p - 1)
    if need > gc.bound:
        raise ValueError(f"generator bound {gc.bound} below required {need}")
    R.monomial_cache(p, need, gc)
    rows = []
    for k in range(kmin + kmin % 2, kmax + 1, 2):
        _, ech = aop_cell(k, p, gc, order, mix_seed)
        w = k + p * p - 1
        rows.append((k, aggregate(alpha(o, w, p) for o in ech.ords)))
    return AopTable(p, rows)


# -- kernel of theta ---------------------------------------------------------------

@dataclass
class KernelCell:
    p: int
    k: int
    dim: int
    appears: bool
    skipped: bool = False
    violation: bool = False
    omegas: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class KernelTable:
    cells: list
    kmax: int
    cap: int

    def row(self, p: int) -> list[int]:
        return [c.k for c in self.cells if c.p == p and c.appears]

    @property
    def primes(self) -> list[int]:
        return sorted({c.p for c in self.cells})

    @property
    def violations(self) -> list[tuple[int, int]]:
        return [(c.p, c.k) for c in self.cells if c.violation]


def is_violation(p: int, w: int) -> bool:
    return w > 0 and w % p != 0 and (2 * w - 1) % p != 0


def kernel_row(p: int, kmax: int = 100, cap: int = 15, gens_cache: GeneratorCache | None = None,
               order: str = "grevlex", kmin: int = 0) -> list[KernelCell]:
    gc = gens_cache or default_cache()
    if cap > gc.bound:
        raise ValueError(f"generator bound {gc.bound} below cap {cap}")
    bounds = [sturm_bound(k + p + 1) for k in range(kmin, kmax + 1)]
    need = max([b for b in bounds if b <= cap] + [sturm_bound(p - 1)])
    R.monomial_cache(p, need, gc)
    cells = []
    for k in range(kmin, kmax + 1):
        if sturm_bound(k + p + 1) > cap:
            cells.append(KernelCell(p, k, 0, False, skipped=True))
            continue
        info = R.kernel_theta(k, p, gc, order)
        cells.append(KernelCell(p, k, len(info.basis), info.appears,
                                violation=info.appears and is_violation(p, k), omegas=info.omegas))
    return cells


def _kernel_row_job(args):
    p, kmax, cap, bound, cache_dir, order = args
    gc = default_cache(bound, cache_dir)
    return kernel_row(p, kmax, cap, gc, order)


def table_theta_kernel(p_max: int = 79, kmax: int = 100, cap: int = 15,
                       gens_cache: GeneratorCache | None = None, primes=None,
                       order: str = "grevlex", threads: int = 1) -> KernelTable:
    gc = gens_cache or default_cache()
    ps = sorted(primes) if primes else [p for p in PRIMES_BELOW_80 + _more_primes(p_max) if p <= p_max]
    if threads > 1 and len(ps) > 1:
        from concurrent.futures import ProcessPoolExecutor

        for n in ("E4", "E6", "X10", "X12", "X35"):
            gc[n]  # populate the on-disk cache before forking
        jobs = [(p, kmax, cap, gc.bound, str(gc.cache_dir), order) for p in ps]
        with ProcessPoolExecutor(threads) as ex:
            rows = list(ex.map(_kernel_row_job, jobs))
    else:
        rows = [kernel_row(p, kmax, cap, gc, order) for p in ps]
    cells = sorted((c for r in rows for c in r), key=lambda c: (c.p, c.k))
    return KernelTable(cells, kmax, cap)


def _more_primes(p_max: int) -> list[int]:
    return [p for p in range(80, p_max + 1) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


# -- conjecture audit ---------------------------------------------------------------

@dataclass
class AuditEntry:
    p: int
    weight: int
    omega: int
    type: str
    status: str  # "hold", "violate" or "n/a"
    note: str = ""


def audit_form(F: QExp2, p: int, omega: int, weight: int | None = None) -> AuditEntry:
    """Check the divisibility predicted for a kernel element of filtration omega."""
    t = classify_kernel_type(F, p)
    w = F.weight if weight is None else weight
    if omega == 0:
        return AuditEntry(p, w, omega, t, "hold", "constant")
    if t == "c":
        ok = (2 * omega - 1) % p == 0
        return AuditEntry(p, w, omega, t, "hold" if ok else "violate", f"2w-1 = {2 * omega - 1}")
    if t == "b":
        ok = omega % p == 0
        return AuditEntry(p, w, omega, t, "hold" if ok else "violate", f"w = {omega}")
    return AuditEntry(p, w, omega, t, "n/a", "mod p singular")


def audit_conjecture(table: KernelTable, gens_cache: GeneratorCache | None = None) -> list[AuditEntry]:
    """Classify one filtration-k kernel element per populated cell and test it."""
    gc = gens_cache or default_cache()
    out = []
    for cell in table.cells:
        if not cell.appears:
            continue
        if cell.k == 0:
            out.append(AuditEntry(cell.p, 0, 0, "a", "hold", "constant"))
            continue
        info = R.kernel_theta(cell.k, cell.p, gc)
        f = next(g for g, o in zip(info.basis, info.ords) if o == 0)
        # classify on every key up to the cap: a small window can hide the type
        F = R.psi(f, max(sturm_bound(cell.k + cell.p + 1), min(table.cap, gc.bound)), gc)
        out.append(audit_form(F, cell.p, cell.k))
    return out


# -- verification suite -------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def _gate_generators(gc: GeneratorCache) -> list[Check]:
    out = []
    E4 = siegel_eisenstein(4, 4)
    out.append(Check("E4 = E8-theta", E4 == theta_e8(4)))
    ok = all(phi(gc[f"E{k}"]) == eisenstein1(k, gc.bound) for k in (4, 6, 10, 12))
    out.append(Check("phi(E_k) = elliptic E_k", ok))
    cusp_ok = True
    for n in ("X10", "X12", "X35"):
        F = gc[n]
        cusp_ok &= all(F[T] == 0 for T in enumerate_keys(gc.bound) if key_rank(T) < 2)
    out.append(Check("cusp generators vanish on rank <= 1", cusp_ok))
    out.append(Check("X10, X12 normalized at (1,1,1)", gc["X10"][1, 1, 1] == 1 and gc["X12"][1, 1, 1] == 1))
    return out


def _gate_modp(gc: GeneratorCache, primes=PRIMES_BELOW_80) -> list[Check]:
    out = []
    for name, p in (("E4", 5), ("E6", 7)):
        F = gc.mod(name, p)
        ok = F[0, 0, 0] == 1 and np.count_nonzero(F.data) == 1
        out.append(Check(f"{name} = 1 mod {p}", bool(ok), f"all keys up to bound {gc.bound}"))
    bad = []
    for p in primes:
        try:
            h = R.h_poly(p, gc)
            if R.psi(h, sturm_bound(p - 1), gc).reduced_values() != [1] + [0] * (
                    len(enumerate_keys(sturm_bound(p - 1), "reduced")) - 1):
                bad.append(p)
        except ArithmeticError:
            bad.append(p)
    out.append(Check("E_{p-1} h-solve unique", not bad, f"failed primes: {bad}" if bad else f"p <= {max(primes)}"))
    return out


def _gate_kernel_example(gc: GeneratorCache) -> list[Check]:
    E4 = gc["E4"].truncate(6)
    ok1 = reduce_mod(theta(E4), 7).is_zero()
    ok2 = not theta1(E4).reduce(7).is_zero()
    return [Check("theta(E4) = 0 mod 7", ok1), Check("theta1(E4) != 0 mod 7", ok2)]


def _prop_roundtrip(gc: GeneratorCache, n: int = 20, seed: int = 0) -> Check:
    rng = random.Random(seed)
    bad = 0
    for p in (5, 7, 11, 13):
        for _ in range(n):
            k = rng.choice([k for k in range(4, 61) if R.dim(k)] + [35, 39, 41, 45, 47])
            monos = R.monomials(k)
            f = R.IsobaricPoly(p, k, {e: rng.randrange(p) for e, _ in monos}, monos[0][1])
            g = R.psi_inv(R.psi(f, sturm_bound(k), gc))
            bad += g != f
    return Check("psi round trip", bad == 0, f"{bad} mismatches")


def _prop_aop_identity(gc: GeneratorCache) -> Check:
    bad = []
    for p in (5, 7):
        H = R.psi(R.h_poly(p, gc), 6, gc)
        for k in range(4, 21, 2):
            for e, f in R.monomials(k):
                F = R.psi(R.IsobaricPoly(p, k, {e: 1}, f), 6, gc)
                if not verify_aop_identity(F, p, H):
                    bad.append((p, e))
    return Check("A(p) = 1 - theta^(p-1) identity", not bad, str(bad[:3]))


def _prop_omega(tables) -> Check:
    bad = []
    for t in tables:
        for k, recs in t.rows:
            w = k + t.p ** 2 - 1
            for r in recs:
                if r.l and ((r.l - w) % (t.p - 1) or r.l > w):
                    bad.append((t.p, k, r.key))
    return Check("omega = k mod p-1", not bad, str(bad[:3]))


def verify(suite: str = "all", gens_cache: GeneratorCache | None = None) -> list[Check]:
    """Run named gates ('gates'), property checks ('properties') or both ('all')."""
    gc = gens_cache or default_cache()
    out: list[Check] = []
    if suite in ("gates", "all"):
        out += _gate_generators(gc) + _gate_modp(gc) + _gate_kernel_example(gc)
    if suite in ("properties", "all"):
        out.append(_prop_roundtrip(gc))
        out.append(_prop_aop_identity(gc))
        tabs = [table_aop(p, 20, gc) for p in (5, 7)]
        out.append(_prop_omega(tabs))
        other = [table_aop(p, 20, gc, order="lex") for p in (5, 7)]
        same = all(a.rows == b.rows for a, b in zip(tabs, other))
        out.append(Check("ord multiset order-invariant", same))
    if suite not in ("gates", "properties", "all"):
        raise ValueError(f"unknown suite {suite!r}")
    return out


# -- golden data -------------------------------------------------------------------

def load_golden(name: str):
    """Shipped reference data: 'aop_p5', 'aop_p7', 'kernel_rows', 'violations'."""
    text = resources.files("siegelmodp").joinpath(f"golden/{name}.json").read_text()
    return json.loads(text)


def golden_aop(p: int, bold: bool = False) -> dict[int, list[tuple]]:
    """Reference rows as (ord, l, l mod p, 2l-1 mod p, multiplicity[, bold])."""
    data = load_golden(f"aop_p{p}")
    n = 6 if bold else 5
    return {int(k): [(math.inf if r[0] == "inf" else r[0], *r[1:n]) for r in recs] for k, recs in data.items()}


def records_as_tuples(recs: list[AlphaRecord], bold: bool = False) -> list[tuple]:
    return [(*r.key, r.multiplicity) + ((r.bold,) if bold else ()) for r in recs]


# -- rendering ---------------------------------------------------------------------

def render_aop(t: AopTable, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"p": t.p, "rows": [{"k": k, "records": [r.as_dict() for r in recs]}
                                              for k, recs in t.rows]}, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "k", "ord", "l", "l_mod_p", "two_l_minus_1_mod_p", "multiplicity", "bold"])
        for k, recs in t.rows:
            for r in recs:
                w.writerow([t.p, k, _fmt_ord(r.ord), r.l, r.l_mod_p, r.two_l_minus_1_mod_p,
                            r.multiplicity, int(r.bold)])
        return buf.getvalue()
    lines = [f"A({t.p}) image filtrations: [(ord, l, l mod p, 2l-1 mod p), count]  (*bold*)"]
    lines += [f"{k:>4} | " + ", ".join(r.text() for r in recs) for k, recs in t.rows]
    return "\n".join(lines) + "\n"


def render_kernel(t: KernelTable, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"kmax": t.kmax, "cap": t.cap,
                           "rows": {str(p): t.row(p) for p in t.primes},
                           "violations": [list(v) for v in t.violations],
                           "cells": [c.as_dict() for c in t.cells]}, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "k", "dim", "appears", "skipped", "violation", "omegas"])
        for c in t.cells:
            w.writerow([c.p, c.k, c.dim, int(c.appears), int(c.skipped), int(c.violation),
                        " ".join(map(str, c.omegas))])
        return buf.getvalue()
    lines = [f"kernel of theta mod p: weights k <= {t.kmax} with filtration k (Sturm cap {t.cap})"]
    lines += [f"{p:>3} | " + ", ".join(map(str, t.row(p))) for p in t.primes]
    lines.append("violations: " + ", ".join(f"({p}, {w})" for p, w in t.violations))
    return "\n".join(lines) + "\n"


def render_records(items: list, fmt: str = "text") -> str:
    """Generic renderer for lists of dataclasses (audit entries, checks)."""
    dicts = [asdict(x) for x in items]
    if fmt == "json":
        return json.dumps(dicts, indent=1) + "\n"
    if not dicts:
        return ""
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.DictWriter(buf, fieldnames=list(dicts[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(dicts)
        return buf.getvalue()
    for d in dicts:
        buf.write("  ".join(f"{k}={v}" for k, v in d.items()) + "\n")
    return buf.getvalue()
