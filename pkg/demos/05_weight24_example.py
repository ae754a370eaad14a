"""A weight-24 form mod 5 killed by Theta whose filtration breaks the expected divisibility."""
from siegelmodp import ringmodp as R
from siegelmodp.genforms import default_cache
from siegelmodp.thetaops import classify_kernel_type, theta, theta1

gc = default_cache()
x4, x6, x10, x12 = R.gens(5)
f = x4 ** 3 * x6 ** 2 + 2 * x6 ** 4 + 3 * x4 ** 2 * x6 * x10 + 3 * x4 * x10 ** 2 + 2 * x6 ** 2 * x12 + 3 * x12 ** 2
F = R.psi(f, 12, gc)

print("f =", f)
print("Theta(F) == 0 mod 5:   ", theta(F).is_zero())
print("Theta^[1](F) == 0 mod 5:", theta1(F).is_zero())
w = R.omega1(F, 24, gc)
print("omega =", w, " w mod 5 =", w % 5, " 2w-1 mod 5 =", (2 * w - 1) % 5)
print("type:", classify_kernel_type(F, 5))
