"""Weights where the kernel of Theta mod p acquires a new filtration, and the audit.

Defaults to a few small primes so it finishes quickly; pass primes on the
command line for others, e.g.  python3 demos/04_theta_kernel.py 5 7 11 13
"""
import sys
import time

from siegelmodp import experiments as X
from siegelmodp.genforms import default_cache

primes = [int(a) for a in sys.argv[1:]] or [5, 7, 11]
gc = default_cache()

t0 = time.time()
tab = X.table_theta_kernel(max(primes), 100, 15, gc, primes=primes)
for p in tab.primes:
    print(f"p={p:2d}:", " ".join(map(str, tab.row(p))))
print(f"({time.time() - t0:.1f}s)")

print("\nweights where neither w nor 2w-1 is divisible by p:", tab.violations)

print("\naudit:")
for e in X.audit_conjecture(tab, gc):
    if e.omega:
        print(f"  p={e.p:2d} w={e.weight:3d} type={e.type} {e.status:8s} {e.note}")
