"""
Drawing the 3-band graph without crossings
==========================================

Element n of a 3-band RIS connects to n-3 .. n+3. The graph has 3N-6
edges, the most a planar graph can have, and a straight-line drawing can
be grown one vertex at a time with every new vertex placed outside the
current triangle.
"""

import os
from pathlib import Path

from bdris import band3_recursive_drawing, count_crossings, export_svg
from bdris.embedding import convex_hull

out = Path(os.environ.get("BDRIS_OUTDIR", "bdris_out"))
out.mkdir(parents=True, exist_ok=True)

d = band3_recursive_drawing(9, check_steps=True)
print("points:", d.points)
print("outer triangle:", convex_hull(d.points))
print("crossings:", count_crossings(d))

###############################################################################
# Coordinates are integers and grow geometrically, so crossing tests are done
# exactly. Even at N = 100 nothing crosses.

big = band3_recursive_drawing(100)
print("N=100 crossings:", count_crossings(big),
      "largest |coordinate| bits:", max(abs(c) for p in big.points for c in p).bit_length())

(out / "band3_N9.svg").write_text(export_svg(d))
print("wrote", out / "band3_N9.svg")
