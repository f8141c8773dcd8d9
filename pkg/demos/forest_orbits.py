"""Monoid actions on labelled forests: cascading finite sets down a branch.

Run:  python3 demos/forest_orbits.py
"""

from fractions import Fraction as F

from qendo.actions import LabelledForest, OrbitPoint, act, verify_action
from qendo.endo import PiecewiseEndo, constant_map, identity_map, idempotent_with_image

chain = LabelledForest.parse("root - 0\nmid root 1\ntop mid 2")
print("-- a chain with ranks 0 < 1 < 2")
print("  ", str(chain).replace("\n", "\n   "))
print("   cascade-safe:", chain.is_cascade_safe())
print()

p = OrbitPoint("top", (F(0), F(1)))
shift = PiecewiseEndo.parse("(-inf,+inf) : 1*x + 1")
squash = constant_map(F(5))
print("-- acting on", p)
print(f"   by x+1 (injective):      {act(chain, shift, p)}")
print(f"   by the constant 5:       {act(chain, squash, p)}  (cascades down)")
print()

print("-- the action laws, verified by evaluation")
fs = [identity_map(), shift, squash,
      PiecewiseEndo.parse("(-inf,0) : 1*x\n[0,+inf) : 0*x")]
points = [p, OrbitPoint("mid", (F(2),)), OrbitPoint("root", ())]
report = verify_action(chain, fs, points)
print("  ", report)
print()

print("-- an unsafe rank-skip breaks the composition law")
skippy = LabelledForest.parse("r - 0\nm r 2\nt m 4")
print("   ranks 0 < 2 < 4; cascade-safe:", skippy.is_cascade_safe())
g = idempotent_with_image((F(0), F(1), F(2)))
f = PiecewiseEndo.parse("(-inf,1] : 0*x\n(1,+inf) : 1*x")
pt = OrbitPoint("t", (F(0), F(1), F(2), F(3)))
bad = verify_action(skippy, [f, g], [pt])
print("  ", str(bad).splitlines()[0])
for line in bad.failures[:1]:
    print("   ", line)
