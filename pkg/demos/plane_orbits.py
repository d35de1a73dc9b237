"""Orbit types of 3- and 4-planes, and reversing a phi-plane inside G2."""

from fractions import Fraction

from phiplanes.g2 import R1, R2, R3, X1, X2, X3, is_structure_preserving, g2_data
from phiplanes.grassmann import (NotReversible, classify_plane, coordinate_plane,
                                 four_plane_path, rational_angle_trig, reversal_witness,
                                 three_plane_path)

print("3-planes xi_t = (sin t d/dr1 + cos t d/dx1) ^ d/dx2 ^ d/dx3")
for q in (0, Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)):
    s, c = rational_angle_trig(q)
    cls = classify_plane(three_plane_path(s, c))
    print(f"  t = {q}*pi: s = {cls.s}  ({cls.label})")

print("4-planes (sin t d/dr0 + cos t d/dr1) ^ d/dx123")
for q in (Fraction(1, 6), Fraction(1, 2), Fraction(5, 6)):
    cls = classify_plane(four_plane_path(*rational_angle_trig(q)))
    print(f"  t = {q}*pi: s = {cls.s}  ({cls.label})")

print("span(r1, r2, r3):", classify_plane(coordinate_plane((R1, R2, R3))).label)

P = coordinate_plane((X1, X2, X3))
w = reversal_witness(P)
print("reversal witness for the x-span: diag", [int(w[i, i]) for i in range(7)])
print("  preserves phi:", is_structure_preserving(w, g2_data().phi),
      " reverses the plane:", P.transform(w) == P.reversed())
try:
    reversal_witness(three_plane_path(1, 0))
except NotReversible as exc:
    print("associative plane:", exc)
