"""Classify weakly monotone maps and factor them through a monotone part.

Run:  python3 demos/classify_and_factor.py
"""

from fractions import Fraction as F

from qendo.endo import (
    PiecewiseEndo,
    cancellability_witness,
    classify,
    compose,
    epi_mono_factorize,
    right_inverse,
)
from qendo.ratcore import nth_rational


def show(title, f):
    rep = classify(f)
    kind = rep.kind
    print(f"-- {title}")
    for line in str(f.canonical()).splitlines():
        print(f"   {line}")
    print(f"   constant={kind.constant} injective={kind.injective} "
          f"surjective={kind.surjective}")
    if rep.missing:
        print("   missing from the image:",
              " u ".join(str(iv) for iv in rep.missing))
    wit = cancellability_witness(f)
    if wit.left is not None:
        c1, c2 = wit.left
        assert compose(f, c1).canonical() == compose(f, c2).canonical()
        print(f"   not left-cancellable: two constants at "
              f"{c1.eval(F(0))} and {c2.eval(F(0))} compose equally")
    if wit.right is not None:
        j1, j2 = wit.right
        assert compose(j1, f).canonical() == compose(j2, f).canonical()
        print("   not right-cancellable: two distinct maps agree after it")
    print()


step = PiecewiseEndo.parse("(-inf,0) : 1*x\n[0,+inf) : 1*x + 1")
plateau = PiecewiseEndo.parse("(-inf,0) : 1*x\n[0,1] : 0*x\n(1,+inf) : 1*x - 1")

show("a jump: shift everything from 0 upward by 1", step)
show("a plateau: collapse [0,1] to a point", plateau)

print("-- right inverse of the plateau map")
h = right_inverse(plateau)
samples = [nth_rational(i) for i in range(8)]
for x in samples:
    assert plateau.eval(h.eval(x)) == x
print("   plateau(h(x)) = x on", ", ".join(str(x) for x in samples))
print()

print("-- epi-mono factorization of the plateau map")
fac = epi_mono_factorize(plateau)
xs = [nth_rational(i) for i in range(200)]
assert all(fac.epi.eval(fac.mono.eval(x)) == plateau.eval(x) for x in xs)
mono_vals = [fac.mono.eval(x) for x in sorted(xs[:30])]
assert all(a < b for a, b in zip(mono_vals, mono_vals[1:]))
print("   spread part strictly monotone, composite exact on 200 points")
r = F(5)
print(f"   preimage through the collapse part: epi({fac.preimage(r)}) = {r}")
