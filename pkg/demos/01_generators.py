"""Build the five generators and look at a few coefficients.

Run from the repo root:  python3 demos/01_generators.py
The first run computes and caches the expansions (a minute or so).
"""
from siegelmodp.genforms import default_cache, eisenstein1
from siegelmodp.halfint import enumerate_keys, rank
from siegelmodp.qexp import congruent_mod_p, phi, QExp2

gc = default_cache()
print("cache:", gc.path("E4").parent, " bound:", gc.bound)

# a handful of keys, in the order the library stores them
keys = list(enumerate_keys(2))[:8]
for name in ("E4", "E6", "X10", "X12", "X35"):
    F = gc[name]
    print(f"{name:4s} k={F.weight:2d} ", "  ".join(f"{tuple(T)}:{F[T]}" for T in keys))

# Siegel Phi lands on the elliptic Eisenstein series
for k in (4, 6):
    print(f"Phi(E{k}) == E{k} elliptic:", phi(gc[f'E{k}']) == eisenstein1(k, gc.bound))

# cusp forms vanish on the boundary
low = [T for T in enumerate_keys(gc.bound) if rank(T) < 2]
print("X10, X12, X35 vanish on rank<2 keys:",
      all(gc[n][T] == 0 for n in ("X10", "X12", "X35") for T in low))

one = QExp2.constant(1, 0, gc.bound)
print("E4 = 1 mod 5:", congruent_mod_p(gc["E4"], one.copy(weight=4), 5))
print("E6 = 1 mod 7:", congruent_mod_p(gc["E6"], one.copy(weight=6), 7))
