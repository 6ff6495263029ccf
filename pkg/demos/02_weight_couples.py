"""The admissible weight couples (f, g) and their certification.

A couple of positive functions on (0, lambda) is admissible when every pair
of points satisfies the quadratic-form condition checked below.  Four power
families are admissible for suitable parameters; anything else has to be
certified sample by sample, and generic couples fail.
"""

import numpy as np

from specgap import FunctionCouple, check_membership, check_necessary_differentiable
from specgap.couples import certify_on_samples

rng = np.random.default_rng(7)
lam = 10.0
samples = lam * rng.uniform(0.01, 0.99, size=24)

print("certified families on", len(samples), "random samples in (0, 10):")
for family, params in [
    ("const-power", (1.5,)),
    ("linear-power", (0.5,)),
    ("equal-power", (2.0,)),
    ("neg-power", (-1.0, 1.0)),
]:
    couple = FunctionCouple(family, lam, params)
    rep = check_membership(couple, samples)
    screen = check_necessary_differentiable(couple, samples)
    print(f"  {couple.describe():24s} pairwise worst {rep.worst:+.3e}  pass={rep.passed}"
          f"   screen worst margin {screen.worst:+.3e}")

print()
print("equal-power at delta = 2 sits exactly on the boundary: every pair value")
print("is zero up to round-off, which is why the check carries a tolerance.")
print()

# a tabulated couple that is NOT admissible: f decaying linearly, g constant
xs = np.array([2.0, 5.0, 8.0])
bad = FunctionCouple("tabulated", lam, (), (xs, lam - xs, np.ones_like(xs)))
rep = check_membership(bad, xs)
print(f"tabulated f = lambda - x, g = 1:  pass={rep.passed}, worst pair value {rep.worst:.3f},")
print(f"  witness pair {rep.witness}")
print()

# the differentiable screen rejects out-of-range exponents before any
# sampling: compare delta inside and outside (0, 2]
inside = FunctionCouple("equal-power", lam, (2.0,))
print("screen margins, delta = 2.0:", check_necessary_differentiable(inside, [2.0, 5.0]).worst)
print("(delta beyond 2 is rejected at construction; the screen margin")
print(" (2 delta - delta^2)/(lambda - x)^2 would turn negative)")
print()

# membership needs two distinct points; a single sample certifies vacuously
single = certify_on_samples(inside, [4.0])
print("single-sample certificate (vacuous):", single.passed, "pairs checked:", single.n_checked)
