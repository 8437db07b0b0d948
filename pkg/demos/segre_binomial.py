"""Straighten the 2x2 Segre product and watch its secant determinant collapse.

The triangular Cremona sends the 3x3 determinant (the equation of the
secant variety) to a single binomial, up to a monomial unit.
"""

from cremona.maps import apply_to_parametrization
from cremona.varieties import (
    equals_up_to_unit,
    linearize,
    membership_check,
    pull_back_equation,
    secant_parametrization,
    segre,
)

e = segre(2, 2)
pair = linearize(e)
print("forward map")
for v, c in zip(pair.forward.target_vars, pair.forward.coords):
    print(f"  {v.name} = {c.to_text()}")
print("fundamental factor:", pair.with_fundamental_factor().fundamental_factor.to_text())

det = e.related["secant"][0]
img = pull_back_equation(det, pair)
binom = e.ring.poly("y_11*y_22 - y_12*y_21")
print("determinant has", len(det.terms()), "terms")
print("after the Cremona:", img.to_text())
print("equal to the binomial up to a unit:", equals_up_to_unit(img, binom))

sec = apply_to_parametrization(pair.forward, secant_parametrization(e, 1))
print("transformed secant parametrization satisfies it:", membership_check(sec, binom))
