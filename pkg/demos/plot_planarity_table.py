"""
Which BD-RIS architectures fit on one PCB layer?
=================================================

An interconnection graph can be routed on a double-layer board with one
ground plane exactly when it is planar. We walk through every family,
decide planarity for growing N and compare with the family rule.
"""

from bdris import build_graph, classify_planarity, is_planar, parse_spec
from bdris.architectures import ArchitectureError

families = ["single", "group:2", "group:4", "group:5", "forest:3", "tree",
            "stem:1", "stem:2", "stem:3", "band:2", "band:3", "band:4",
            "maxplanar:2", "maxplanar:3", "fully"]

###############################################################################
# One row per family. A dot marks a planar graph, x a non-planar one, and a
# blank an N the family does not allow (group sizes must divide N).

print(f"{'family':<12}" + "".join(f"{n:>3}" for n in range(3, 13)) + "   rule")
for text in families:
    spec = parse_spec(text)
    row = ""
    for n in range(3, 13):
        try:
            g = build_graph(spec, n)
        except ArchitectureError:
            row += "   "
            continue
        row += "  ." if is_planar(g).planar else "  x"
    print(f"{text:<12}{row}   {classify_planarity(spec)}")

###############################################################################
# A non-planar verdict comes with a witness: the branch vertices of a K5 or
# K3,3 subdivision inside the graph.

v = is_planar(build_graph(parse_spec("stem:3"), 6))
print(v.witness.kind, [sorted(s) for s in v.witness.branch_sets])
