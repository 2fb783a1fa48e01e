"""
From tunable admittances to a scattering matrix
===============================================

Each element has a susceptance to ground, and each edge of the circuit
graph carries one more. Their nodal matrix B fixes the reflection matrix
through the Cayley transform, which is unitary and symmetric for any real
symmetric B.
"""

import numpy as np

from bdris import SusceptancePattern, assemble_susceptance, build_graph, parse_spec
from bdris.circuit import extract_components, pattern_mask, scattering_from_susceptance

###############################################################################
# Two elements joined by one admittance.

pat = SusceptancePattern(build_graph(parse_spec("fully"), 2))
B = assemble_susceptance(pat, [1.0, 1.0, 2.0])
print(pat.labels())
print(B)
print(extract_components(B, pat))

###############################################################################
# The sparsity of B follows the graph. Here is the 8-element tridiagonal
# pattern bordered by two full rows.

print(pattern_mask(build_graph(parse_spec("maxplanar:3"), 8)))

###############################################################################
# Random components, a unitary and symmetric Theta.

rng = np.random.default_rng(0)
pat = SusceptancePattern(build_graph(parse_spec("band:3"), 8))
theta = scattering_from_susceptance(assemble_susceptance(pat, rng.normal(scale=0.02, size=pat.size)))
print("||Theta Theta^H - I|| =", np.linalg.norm(theta @ theta.conj().T - np.eye(8)))
print("||Theta - Theta^T||   =", np.linalg.norm(theta - theta.T))
