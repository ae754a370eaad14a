"""Polynomials in the generators mod p: psi, its inverse, h and the filtration."""
from siegelmodp import ringmodp as R
from siegelmodp.genforms import default_cache
from siegelmodp.qexp import sturm_bound

gc = default_cache()

for p in (5, 7, 11, 13):
    print(f"h for p={p}:", R.h_poly(p, gc))

p = 7
x4, x6, x10, x12 = R.gens(p)
f = x4 ** 3 + 3 * x6 ** 2 + x12
F = R.psi(f, sturm_bound(f.weight), gc)
print("\nf =", f)
print("psi_inv(psi(f)) == f:", R.psi_inv(F) == f)

# multiplying by h keeps the form but raises the weight label by p-1
h = R.h_poly(p, gc)
g = f * h * h
print("weight", g.weight, " ord_h =", R.ord_h(g, h), " omega =", R.omega1(g, gens_cache=gc))

# dimension of the weight-k piece, both parities
print("\ndims:", {k: R.dim(k) for k in range(0, 50, 1) if R.dim(k)})
