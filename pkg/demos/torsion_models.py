"""Torsion of the two torus-type models, computed from Maurer-Cartan equations."""

from fractions import Fraction

from phiplanes.torsion import verify_example2, verify_flat_model

flat = verify_flat_model()
print("flat model: d phi = 0", flat.dphi_zero, " d *phi = 0", flat.dstar_zero)

for scale in (2, Fraction(1, 2)):
    r = verify_example2(scale)
    js = r.to_json()
    print(f"su(2) constants {scale}*eps:")
    print(f"  d phi = {js['fit']['fourForm']} *phi + {js['fit']['starChi3']} *chi3")
    print(f"  d phi = 1/2 *phi + *chi3 holds: {r.identity_holds}  (|residual|^2 = {js['residualNorm2']})")
    print(f"  d *phi = 0: {r.dphi_hat_zero}")
print("identity balances when the constants are", verify_example2().balancing_scale, "* eps")
