"""Filtrations of the A(p) images for p = 5, weights up to 40.

Each record reads (ord_h, l, l mod p, 2l-1 mod p) x multiplicity; a star marks
records where neither residue vanishes.
"""
import sys
import time

from siegelmodp import experiments as X
from siegelmodp.genforms import default_cache

p = int(sys.argv[1]) if len(sys.argv) > 1 else 5
gc = default_cache()
t0 = time.time()
tab = X.table_aop(p, 40, gc)
print(X.render_aop(tab))
print(f"({time.time() - t0:.1f}s)")

gold = X.golden_aop(p, bold=True)
same = all(X.records_as_tuples(r, bold=True) == gold[k] for k, r in tab.rows)
print("agrees with the stored reference rows:", same)

# one cell in detail: the echelon images at k = 18
_, ech = X.aop_cell(18, p, gc)
for img, o in zip(ech.images, ech.ords):
    print(f"  ord={o}:", img)
