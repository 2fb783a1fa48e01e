"""BD-RIS architecture families, their graphs, complexity and planarity class.

Textual forms accepted by :func:`parse_spec` (case-insensitive)::

    single  group:4  fully  forest:4  tree  stem:2  band:3  maxplanar:1|2|3
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .graph_core import CircuitGraph, GraphError, edge_count, is_planar, make_graph

__all__ = [
    "ArchitectureSpec",
    "ArchitectureError",
    "Classification",
    "ComplexityReport",
    "FAMILIES",
    "parse_spec",
    "build_graph",
    "component_count",
    "closed_form_total",
    "classify_planarity",
    "is_maximal_planar",
]

FAMILIES = ("single", "group", "fully", "forest", "tree", "stem", "band", "maxplanar")
_PARAMETRIC = {"group", "forest", "stem", "band", "maxplanar"}


class ArchitectureError(ValueError):
    pass


@dataclass(frozen=True)
class ArchitectureSpec:
    """A BD-RIS family and its parameter.

    ``param`` is the group size for ``group``/``forest``, ``Q`` for
    ``stem``/``band``, and the example index (1, 2 or 3) for ``maxplanar``.
    """

    family: str
    param: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ArchitectureError(f"unknown architecture family {self.family!r}")
        if self.family in _PARAMETRIC:
            if self.param is None or self.param < 1:
                raise ArchitectureError(f"{self.family} needs a positive integer parameter")
            if self.family == "maxplanar" and self.param not in (1, 2, 3):
                raise ArchitectureError("maxplanar example index must be 1, 2 or 3")
        elif self.param is not None:
            raise ArchitectureError(f"{self.family} takes no parameter")

    def __str__(self) -> str:
        return self.family if self.param is None else f"{self.family}:{self.param}"

    def check_size(self, n: int) -> None:
        if n < 1:
            raise ArchitectureError(f"element count must be >= 1, got {n}")
        if self.family in ("group", "forest") and n % self.param:
            raise ArchitectureError(
                f"{self}: N={n} is not divisible by the group size {self.param}"
            )


def parse_spec(text: str) -> ArchitectureSpec:
    """Parse ``family[:param]`` into an :class:`ArchitectureSpec`."""
    family, sep, rest = text.strip().lower().partition(":")
    if not sep:
        return ArchitectureSpec(family)
    try:
        value = int(rest)
    except ValueError:
        raise ArchitectureError(f"bad parameter in architecture {text!r}") from None
    return ArchitectureSpec(family, value)


# ---------------------------------------------------------------------------
# Graph construction
# ---------------------------------------------------------------------------


def _clique(block):
    return itertools.combinations(block, 2)


def _chain(block):
    return zip(block, block[1:])


def _hubs(q, n):
    # hubs 1..q adjacent to every other vertex, including each other
    return [(c, v) for c in range(1, min(q, n) + 1) for v in range(c + 1, n + 1)]


def _band(q, n):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, min(i + q, n) + 1)]


def build_graph(spec: ArchitectureSpec, n: int) -> CircuitGraph:
    """Interconnection graph of ``spec`` with ``n`` elements.

    Tree and forest use a chain inside each block. ``stem``/``band`` with
    ``Q >= n - 1`` simply give the complete graph.
    """
    spec.check_size(n)
    fam, p = spec.family, spec.param
    if fam == "single":
        edges = []
    elif fam == "fully":
        edges = list(_clique(range(1, n + 1)))
    elif fam == "tree":
        edges = list(_chain(range(1, n + 1)))
    elif fam in ("group", "forest"):
        link = _clique if fam == "group" else _chain
        edges = [
            e for start in range(1, n + 1, p) for e in link(range(start, start + p))
        ]
    elif fam == "stem":
        edges = _hubs(p, n)
    elif fam == "band":
        edges = _band(p, n)
    elif p == 1:
        edges = _band(3, n)
    elif p == 2:
        edges = _hubs(1, n) + _band(2, n)
    else:
        edges = _hubs(2, n) + _band(1, n)
    return make_graph(n, edges)


# ---------------------------------------------------------------------------
# Complexity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexityReport:
    """Tunable admittance count: element-to-element plus element-to-ground."""

    interconnection_count: int
    ground_count: int

    @property
    def total(self) -> int:
        return self.interconnection_count + self.ground_count


def component_count(spec: ArchitectureSpec, n: int) -> ComplexityReport:
    return ComplexityReport(edge_count(build_graph(spec, n)), n)


def closed_form_total(spec: ArchitectureSpec, n: int) -> Optional[int]:
    """Closed-form component total, or ``None`` where no formula applies.

    Fully ``N(N+1)/2``, band ``(Q+1)(2N-Q)/2``, maximal-planar ``4N-6``,
    tree ``2N-1``, single ``N``. Also group ``N(N_G+1)/2``, forest
    ``2N - N/N_G`` and stem ``QN - Q(Q+1)/2 + N``, which follow directly
    from the edge definitions.
    """
    spec.check_size(n)
    fam, p = spec.family, spec.param
    if fam in ("band", "stem") and p >= n - 1:
        fam = "fully"
    if fam == "single":
        return n
    if fam == "fully":
        return n * (n + 1) // 2
    if fam == "tree":
        return 2 * n - 1
    if fam == "group":
        return n * (p + 1) // 2
    if fam == "forest":
        return 2 * n - n // p
    if fam == "band":
        return (p + 1) * (2 * n - p) // 2
    if fam == "stem":
        return p * n - p * (p + 1) // 2 + n
    if n >= 3:
        return 4 * n - 6
    return None


# ---------------------------------------------------------------------------
# Planarity classification
# ---------------------------------------------------------------------------

ALWAYS_PLANAR = "AlwaysPlanar"
PLANAR_IFF = "PlanarIff"
NEVER_PLANAR = "NeverPlanar"


@dataclass(frozen=True)
class Classification:
    """Planarity of a family over all ``N``.

    ``kind`` is ``AlwaysPlanar``, ``PlanarIff`` or ``NeverPlanar``. For
    ``PlanarIff`` the family is planar-connected iff ``param <= bound``;
    ``holds`` records whether the architecture's own parameter meets it.
    ``nonplanar_from`` is the smallest ``N`` at which a family that is not
    planar-connected actually produces a non-planar graph.
    """

    kind: str
    condition: Optional[str] = None
    bound: Optional[int] = None
    holds: Optional[bool] = None
    nonplanar_from: Optional[int] = None

    @property
    def planar_connected(self) -> bool:
        return self.kind == ALWAYS_PLANAR or (self.kind == PLANAR_IFF and bool(self.holds))

    def planar_at(self, n: int) -> bool:
        """Planarity of the family's graph with ``n`` elements."""
        if self.planar_connected:
            return True
        return n < self.nonplanar_from

    def __str__(self) -> str:
        if self.kind == PLANAR_IFF:
            return f"PlanarIff({self.condition} <= {self.bound})"
        return self.kind


def classify_planarity(spec: ArchitectureSpec) -> Classification:
    fam, p = spec.family, spec.param
    if fam in ("single", "forest", "tree", "maxplanar"):
        return Classification(ALWAYS_PLANAR)
    if fam == "fully":
        return Classification(NEVER_PLANAR, nonplanar_from=5)
    if fam == "group":
        # a K_{N_G} block exists for every admissible N
        return Classification(PLANAR_IFF, "N_G", 4, p <= 4, nonplanar_from=p)
    if fam == "stem":
        # Q = 3 needs three further vertices for K3,3; Q >= 4 has K5 on 1..5
        return Classification(PLANAR_IFF, "Q", 2, p <= 2, nonplanar_from=6 if p == 3 else 5)
    return Classification(PLANAR_IFF, "Q", 3, p <= 3, nonplanar_from=5)


def is_maximal_planar(g: CircuitGraph) -> bool:
    """Planar with exactly ``3n - 6`` edges."""
    if g.n < 3:
        raise GraphError("maximal planarity is defined here for n >= 3")
    return edge_count(g) == 3 * g.n - 6 and is_planar(g, witness=False).planar
