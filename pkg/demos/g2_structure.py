"""The Cayley three-form, its metric, dual and stabilizer."""

from phiplanes import g2_data, invariant_dimensions
from phiplanes.g2 import CAYLEY_AXES, printed_dual_form
from phiplanes.numeric import format_scalar


def show(form):
    names = lambda axes: "^".join("d" + CAYLEY_AXES[a] for a in axes)
    return " ".join(("+" if c > 0 else "") + f"{format_scalar(c)}*{names(a)}"
                    for a, c in sorted(form.terms().items()))


d = g2_data()
print("phi      =", show(d.phi))
print("*phi     =", show(d.phi_dual))
print("metric is the identity:", d.metric.is_identity, " orientation:", d.metric.orientation)
print("|phi|^2  =", d.phi_norm2())
print("dim g2   =", len(d.algebra))
print("invariant forms by degree:", invariant_dimensions(d.algebra, 7))

# the transcribed dual has -w1^dr12 where the computed one has -w1^dr23
diff = printed_dual_form() - d.phi_dual
print("printed - computed =", show(diff))
