"""The Grassmannian G(3,6) under its quadro-cubic and cubo-cubic Cremonas.

Both maps send the affine chart onto the linear space W = 0, w_0 = 0.
The tangential quartic pulls back to a sextic; this prints its size and
grevlex leading terms for each map.
"""

from cremona.maps import apply_to_parametrization
from cremona.varieties import g36, g36_maps, g36_tangential_images

e = g36()
for pair in g36_maps(e.ring):
    img = apply_to_parametrization(pair.forward, e.param)
    zero = [v.name for v, f in zip(pair.forward.target_vars, img.functions) if f.is_zero]
    print(f"verified inverse: {pair.verified}; image zero coordinates: {', '.join(zero)}")

for im in g36_tangential_images(e.ring):
    lead = ", ".join(t.to_text() for t in im.leading)
    print(f"{im.map_name}: degree {im.degree}, {im.n_terms} terms, leading {lead}")
