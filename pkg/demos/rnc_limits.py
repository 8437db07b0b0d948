"""Where the rational normal curve stops cooperating.

For n = 4 the triangular Cremona sends the secant variety of the curve
into the zero locus of the 2x2 catalecticant minors of a shorter Hankel
block.  From n = 5 on those minors no longer vanish on the image.
"""

from cremona.varieties import rnc_secant_chain

for n in range(4, 8):
    print(f"n = {n}: chain holds: {rnc_secant_chain(n)}")
