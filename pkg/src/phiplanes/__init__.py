"""Exact exterior algebra for G2 geometry in Cayley coordinates.

Submodules:

- ``numeric``, ``linalg``, ``exterior``: rational scalars and surds, exact
  elimination, sparse alternating forms;
- ``g2``: the three-form, its metric, dual and stabilizer algebra;
- ``grassmann``: plane orbits, reversal witnesses, the local model;
- ``cartan``: reduced tableaux, polar spaces and Cartan's test;
- ``torsion``: left-invariant coframe algebras and the torus-type models;
- ``spin7``: the Cayley form, the nearly parallel sphere and the
  cohomogeneity-two orbits;
- ``suites``, ``cli``: verification suites and the command line.
"""

from .exterior import (AlternatingForm, Metric, Multivector, evaluate, hodge_star, inner,
                       interior_product, lie_act, pullback, restrict, wedge)
from .g2 import (G2Data, annihilator_algebra, cayley_phi, g2_data, invariant_dimensions,
                 is_structure_preserving, metric_from_three_form)
from .grassmann import (NotReversible, OrbitClass, Plane, classify_plane, local_model_check,
                        reversal_witness)
from .cartan import Flag, codim_sequence, polar_extension_report, reduced_tableau, standard_flag
from .torsion import dga_build, verify_example2, verify_flat_model
from .spin7 import (build_spin7, classify_orbit_point, cone_consistency_check, obstruction_value,
                    orbit_sample, sphere_three_form)

__version__ = "0.1.0"

__all__ = [
    "AlternatingForm", "Metric", "Multivector", "evaluate", "hodge_star", "inner",
    "interior_product", "lie_act", "pullback", "restrict", "wedge",
    "G2Data", "annihilator_algebra", "cayley_phi", "g2_data", "invariant_dimensions",
    "is_structure_preserving", "metric_from_three_form",
    "NotReversible", "OrbitClass", "Plane", "classify_plane", "local_model_check",
    "reversal_witness",
    "Flag", "codim_sequence", "polar_extension_report", "reduced_tableau", "standard_flag",
    "dga_build", "verify_example2", "verify_flat_model",
    "build_spin7", "classify_orbit_point", "cone_consistency_check", "obstruction_value",
    "orbit_sample", "sphere_three_form",
]
