"""The Cayley four-form, the nearly parallel S^7 and the cohomogeneity-two orbits."""

from fractions import Fraction

from phiplanes import spin7

S = spin7.spin7_data()
print("Cayley form terms:", len(S.phi0), " conventions:", S.conventions())
print("stabilizer dimension:", spin7.stabilizer_dimension(S))
print("cone residual at e0:", spin7.cone_consistency_check([1, 0, 0, 0, 0, 0, 0, 0]),
      " with flipped orientation:", spin7.cone_consistency_check([1, 0, 0, 0, 0, 0, 0, 0], flip=True))

for point in ((0, 1, 0), (Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)), (0, Fraction(3, 5), Fraction(4, 5))):
    num, closed = spin7.obstruction_value(*point)
    tag = spin7.classify_orbit_point(*point)
    print(f"x0,x1,x6 = {tuple(str(c) for c in point)}: obstruction {float(num):.6f} (closed form {float(closed):.6f}) {tag.kind} {tag.branches}")

sample = spin7.orbit_sample(count=200)
print("orbit through (0,1,0,...,0): max residuals", sample.to_json())
print("d phi - 4 *phi at 10 points:", max(spin7.nearly_parallel_check()))
