"""Two Cremonas for the tangential variety of P1 x P1 x P1.

The triangular map leaves a quartic with many terms.  The cumulant map,
built from the Möbius function of the partition lattice, leaves a cubic
with two terms.
"""

from cremona.cumulants import l_cumulant_map
from cremona.maps import apply_to_parametrization
from cremona.posets import poset_by_name
from cremona.showcase import sigma3_quartic
from cremona.varieties import linearize, membership_check, segre_multi, tangential_parametrization

e = segre_multi(1, 1, 1)
tan = tangential_parametrization(e)

tri = linearize(e)
quartic = sigma3_quartic(e.ring)
print(f"triangular: quartic with {len(quartic.terms())} terms")
print("  holds on the image:", membership_check(apply_to_parametrization(tri.forward, tan), quartic))

L = poset_by_name("full", 3)
cum = l_cumulant_map(L, e.ring)
cubic = e.ring.poly("y_{1,2,3}^2 + 4*y_{1,2}*y_{1,3}*y_{2,3}")
print("cumulant:", cubic.to_text())
print("  holds on the image:", membership_check(apply_to_parametrization(cum.forward, tan), cubic))
print("mu(0, 1) on Pi(3):", L.mobius(L.zero, L.one))
