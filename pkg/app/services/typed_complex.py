# app/services/typed_complex.py
"""
B3 simplicial complexes: pure 2-dimensional complexes whose vertices carry
types 1, 2, 3 and whose triangles have one vertex of each type.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from app.core import config
from app.core.errors import InvalidPatternError, TypingCorruptionError, UnknownVertexError
from app.services.sphere_geom import SimplexShape, b3_constants

VERTEX_TYPES = (1, 2, 3)


class ViolationKind(str, Enum):
    PURITY = "purity"
    SIMPLICIALITY = "simpliciality"
    TYPING = "typing"
    UNKNOWN_VERTEX = "unknown_vertex"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    message: str
    witness: Tuple[str, ...] = ()


class TypedComplex:
    """Vertices with types, triangles, and optional extra edges"""

    def __init__(
        self,
        vertex_types: Mapping[str, int],
        triangles: Iterable[Sequence[str]],
        edges: Iterable[Sequence[str]] = (),
    ):
        self.vertex_types: Dict[str, int] = dict(vertex_types)
        self.raw_triangles: List[Tuple[str, ...]] = [tuple(t) for t in triangles]
        self.raw_edges: List[Tuple[str, ...]] = [tuple(e) for e in edges]
        self.triangles: List[Tuple[str, str, str]] = sorted(
            {tuple(sorted(t)) for t in self.raw_triangles if len(set(t)) == 3}
        )
        self._triangle_set = {frozenset(t) for t in self.triangles}

        graph = nx.Graph()
        for v in sorted(self.vertex_types):
            graph.add_node(v, vtype=self.vertex_types[v])
        for tri in self.triangles:
            for u, w in combinations(tri, 2):
                graph.add_edge(u, w)
        for edge in self.raw_edges:
            if len(set(edge)) == 2:
                graph.add_edge(*edge)
        for v in graph.nodes:
            graph.nodes[v].setdefault("vtype", self.vertex_types.get(v))
        self.skeleton = graph

        self._star: Dict[str, List[Tuple[str, str, str]]] = {v: [] for v in graph.nodes}
        for tri in self.triangles:
            for v in tri:
                self._star[v].append(tri)

        self._typed_neighbors: Dict[str, Dict[int, List[str]]] = {}
        for v in graph.nodes:
            buckets: Dict[int, List[str]] = {t: [] for t in VERTEX_TYPES}
            for w in sorted(graph.neighbors(v)):
                t = self.vertex_types.get(w)
                if t in buckets:
                    buckets[t].append(w)
            self._typed_neighbors[v] = buckets

    def __contains__(self, v: str) -> bool:
        return v in self.vertex_types

    def __len__(self) -> int:
        return len(self.vertex_types)

    def vertex_type(self, v: str) -> int:
        try:
            return self.vertex_types[v]
        except KeyError:
            raise UnknownVertexError(f"Unknown vertex {v!r}")

    def vertices(self, vtype: int = None) -> List[str]:
        return sorted(v for v, t in self.vertex_types.items() if vtype is None or t == vtype)

    def neighbors(self, v: str, vtype: int = None) -> List[str]:
        if v not in self._typed_neighbors:
            raise UnknownVertexError(f"Unknown vertex {v!r}")
        buckets = self._typed_neighbors[v]
        if vtype is not None:
            return buckets.get(vtype, [])
        return sorted(w for t in VERTEX_TYPES for w in buckets[t])

    def has_edge(self, u: str, w: str) -> bool:
        return self.skeleton.has_edge(u, w)

    def has_triangle(self, a: str, b: str, c: str) -> bool:
        return frozenset((a, b, c)) in self._triangle_set

    def triangles_at(self, v: str) -> List[Tuple[str, str, str]]:
        if v not in self._star:
            raise UnknownVertexError(f"Unknown vertex {v!r}")
        return list(self._star[v])

    def edge_type(self, u: str, w: str) -> int:
        tu, tw = self.vertex_type(u), self.vertex_type(w)
        if tu == tw:
            raise InvalidPatternError(f"Edge {u}-{w} joins two vertices of type {tu}")
        return 6 - tu - tw

    def restricted(self, keep: Iterable[str]) -> "TypedComplex":
        """Full subcomplex on `keep`"""
        keep = set(keep)
        return TypedComplex(
            {v: t for v, t in self.vertex_types.items() if v in keep},
            [tri for tri in self.triangles if keep.issuperset(tri)],
        )


def validate(complex_: TypedComplex) -> List[Violation]:
    """All purity, simpliciality and typing violations (empty list means valid)"""
    violations: List[Violation] = []
    known = complex_.vertex_types

    for v, t in sorted(known.items()):
        if t not in VERTEX_TYPES:
            violations.append(Violation(ViolationKind.TYPING, f"vertex {v} has type {t}", (v,)))

    seen = set()
    for raw in complex_.raw_triangles:
        witness = tuple(raw)
        missing = [v for v in raw if v not in known]
        if missing:
            violations.append(
                Violation(ViolationKind.UNKNOWN_VERTEX, f"triangle {witness} uses undeclared {missing}", witness)
            )
            continue
        if len(raw) != 3 or len(set(raw)) != 3:
            violations.append(
                Violation(ViolationKind.SIMPLICIALITY, f"triangle {witness} repeats a vertex", witness)
            )
            continue
        key = frozenset(raw)
        if key in seen:
            violations.append(Violation(ViolationKind.SIMPLICIALITY, f"triangle {witness} is duplicated", witness))
            continue
        seen.add(key)
        types = sorted(known[v] for v in raw)
        if types != [1, 2, 3]:
            violations.append(
                Violation(ViolationKind.TYPING, f"triangle {witness} has types {types}", witness)
            )

    covered_edges = set()
    for tri in complex_.triangles:
        for u, w in combinations(tri, 2):
            covered_edges.add(frozenset((u, w)))
    for raw in complex_.raw_edges:
        witness = tuple(raw)
        if any(v not in known for v in raw):
            violations.append(Violation(ViolationKind.UNKNOWN_VERTEX, f"edge {witness} uses undeclared vertex", witness))
        elif len(set(raw)) != 2:
            violations.append(Violation(ViolationKind.SIMPLICIALITY, f"edge {witness} is a loop", witness))
        elif frozenset(raw) not in covered_edges:
            violations.append(Violation(ViolationKind.PURITY, f"edge {witness} lies in no triangle", witness))

    for v in sorted(known):
        if not complex_.triangles_at(v):
            violations.append(Violation(ViolationKind.PURITY, f"vertex {v} lies in no triangle", (v,)))
    return violations


def link(complex_: TypedComplex, v: str) -> nx.Graph:
    """Neighbours of v, joined when they span a triangle with v"""
    complex_.vertex_type(v)
    graph = nx.Graph()
    for w in complex_.neighbors(v):
        graph.add_node(w, vtype=complex_.vertex_types.get(w))
    for tri in complex_.triangles_at(v):
        u, w = [x for x in tri if x != v]
        graph.add_edge(u, w)
    return graph


def girth(graph: nx.Graph) -> Union[int, float]:
    """Shortest cycle length; math.inf for forests"""
    if graph.number_of_edges() == 0:
        return math.inf
    return nx.girth(graph)


@dataclass
class BipartiteCheck:
    complete: bool
    missing_edges: List[Tuple[str, str]] = field(default_factory=list)
    same_type_edges: List[Tuple[str, str]] = field(default_factory=list)
    side_sizes: Tuple[int, int] = (0, 0)

    @property
    def has_four_cycle(self) -> bool:
        return self.side_sizes[0] >= 2 and self.side_sizes[1] >= 2


def is_complete_bipartite(graph: nx.Graph) -> BipartiteCheck:
    """Check a type-2 link: sides are the type-1 and type-3 vertices"""
    side_one, side_three = [], []
    for v in sorted(graph.nodes):
        vtype = graph.nodes[v].get("vtype")
        if vtype == 1:
            side_one.append(v)
        elif vtype == 3:
            side_three.append(v)
        else:
            raise TypingCorruptionError(f"Vertex {v} of type {vtype} cannot lie in the link of a type-2 vertex")

    missing = [(a, c) for a in side_one for c in side_three if not graph.has_edge(a, c)]
    same = sorted(
        tuple(sorted((u, w)))
        for u, w in graph.edges
        if graph.nodes[u].get("vtype") == graph.nodes[w].get("vtype")
    )
    return BipartiteCheck(
        complete=not missing and not same,
        missing_edges=missing,
        same_type_edges=same,
        side_sizes=(len(side_one), len(side_three)),
    )


@dataclass
class FlagCheck:
    flag: bool
    witness: Optional[Tuple[str, str, str]] = None


def is_flag(complex_or_graph: Union[TypedComplex, nx.Graph], triangles: Iterable[Sequence[str]] = ()) -> FlagCheck:
    """Every 3-clique of the 1-skeleton spans a triangle"""
    if isinstance(complex_or_graph, TypedComplex):
        graph = complex_or_graph.skeleton
        filled = {frozenset(t) for t in complex_or_graph.triangles}
    else:
        graph = complex_or_graph
        filled = {frozenset(t) for t in triangles}

    for u in sorted(graph.nodes):
        higher = sorted(w for w in graph.neighbors(u) if w > u)
        for i, v in enumerate(higher):
            for w in higher[i + 1:]:
                if graph.has_edge(v, w) and frozenset((u, v, w)) not in filled:
                    return FlagCheck(False, (u, v, w))
    return FlagCheck(True)


# =================
# EDGE PATHS AND CYCLES
# =================


@dataclass(frozen=True)
class EdgePath:
    vertices: Tuple[str, ...]
    types: Tuple[int, ...]
    closed: bool = False

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> List[Tuple[str, str]]:
        pairs = list(zip(self.vertices, self.vertices[1:]))
        if self.closed and len(self.vertices) > 1:
            pairs.append((self.vertices[-1], self.vertices[0]))
        return pairs

    @property
    def edge_types(self) -> List[int]:
        pairs = list(zip(self.types, self.types[1:]))
        if self.closed and len(self.types) > 1:
            pairs.append((self.types[-1], self.types[0]))
        return [6 - a - b for a, b in pairs]


def make_path(complex_: TypedComplex, vertices: Sequence[str], closed: bool = False) -> EdgePath:
    """EdgePath after checking that consecutive vertices are adjacent"""
    vertices = tuple(vertices)
    types = tuple(complex_.vertex_type(v) for v in vertices)
    path = EdgePath(vertices, types, closed)
    for u, w in path.edges:
        if not complex_.has_edge(u, w):
            raise InvalidPatternError(f"{u} and {w} are not adjacent")
    return path


def validate_pattern(pattern: Sequence[int]) -> Tuple[int, ...]:
    pattern = tuple(int(t) for t in pattern)
    if len(pattern) < 3:
        raise InvalidPatternError(f"Cycle pattern {pattern} needs at least 3 entries")
    if any(t not in VERTEX_TYPES for t in pattern):
        raise InvalidPatternError(f"Cycle pattern {pattern} has a type outside 1..3")
    for i, t in enumerate(pattern):
        if t == pattern[(i + 1) % len(pattern)]:
            raise InvalidPatternError(f"Cycle pattern {pattern} repeats type {t} at position {i}")
    return pattern


def _dihedral_images(seq: Tuple) -> List[Tuple]:
    n = len(seq)
    rev = tuple(reversed(seq))
    return [seq[i:] + seq[:i] for i in range(n)] + [rev[i:] + rev[:i] for i in range(n)]


def canonical_cycle(vertices: Sequence[str]) -> Tuple[str, ...]:
    return min(_dihedral_images(tuple(vertices)))


def pattern_alignments(path: EdgePath, pattern: Sequence[int]) -> List[Tuple[str, ...]]:
    """Rotations/reflections of a closed path whose types read `pattern`"""
    pattern = tuple(pattern)
    aligned = []
    for seq, types in zip(_dihedral_images(path.vertices), _dihedral_images(path.types)):
        if types == pattern and seq not in aligned:
            aligned.append(seq)
    return aligned


def embedded_cycles(
    complex_: TypedComplex,
    pattern: Sequence[int],
    limit: int = None,
    *,
    allowed: Iterable[str] = None,
    induced: bool = False,
) -> List[EdgePath]:
    """Vertex-injective closed edge paths reading `pattern`, one per dihedral class"""
    pattern = validate_pattern(pattern)
    limit = config.CYCLE_LIMIT if limit is None else limit
    size = len(pattern)
    pool = set(allowed) if allowed is not None else None
    graph = complex_.skeleton

    # start from the rarest type to keep the root loop short
    counts = {t: len(complex_.vertices(t)) for t in set(pattern)}
    offset = min(range(size), key=lambda i: (counts[pattern[i]], i))
    rotated = pattern[offset:] + pattern[:offset]

    found: Dict[Tuple[str, ...], None] = {}

    def extend(path: List[str], on_path: set):
        if len(found) >= limit:
            return
        pos = len(path)
        if pos == size:
            key = canonical_cycle(path)
            found.setdefault(key, None)
            return
        for w in complex_.neighbors(path[-1], rotated[pos]):
            if w in on_path or (pool is not None and w not in pool):
                continue
            if pos == size - 1 and not graph.has_edge(w, path[0]):
                continue
            if induced:
                chord = False
                for j in range(pos - 1):
                    if j == 0 and pos == size - 1:
                        continue
                    if graph.has_edge(w, path[j]):
                        chord = True
                        break
                if chord:
                    continue
            path.append(w)
            on_path.add(w)
            extend(path, on_path)
            path.pop()
            on_path.discard(w)

    for start in complex_.vertices(rotated[0]):
        if pool is not None and start not in pool:
            continue
        extend([start], {start})
        if len(found) >= limit:
            break

    cycles = []
    for key in sorted(found)[:limit]:
        cycles.append(EdgePath(key, tuple(complex_.vertex_types[v] for v in key), closed=True))
    return cycles


def path_metric_length(path: EdgePath, shape: SimplexShape = None) -> float:
    shape = shape or b3_constants()
    return sum(shape.edge_length(t) for t in path.edge_types)


# =================
# STARS AND COUNTS
# =================


@dataclass
class StarIntersection:
    kind: str  # empty | vertex | edge | other
    simplices: List[Tuple[str, ...]] = field(default_factory=list)


def _closed_star(complex_: TypedComplex, v: str) -> set:
    faces = set()
    for tri in complex_.triangles_at(v):
        for k in (1, 2, 3):
            for face in combinations(tri, k):
                faces.add(frozenset(face))
    return faces


def star_intersection(complex_: TypedComplex, v1: str, v2: str) -> StarIntersection:
    common = _closed_star(complex_, v1) & _closed_star(complex_, v2)
    simplices = sorted((tuple(sorted(f)) for f in common), key=lambda s: (len(s), s))
    vertices = [s for s in simplices if len(s) == 1]
    edges = [s for s in simplices if len(s) == 2]
    triangles = [s for s in simplices if len(s) == 3]
    if not simplices:
        kind = "empty"
    elif len(vertices) == 1 and not edges:
        kind = "vertex"
    elif len(edges) == 1 and len(vertices) == 2 and not triangles:
        kind = "edge"
    else:
        kind = "other"
    return StarIntersection(kind, simplices)


def face_counts(complex_: TypedComplex) -> Tuple[int, int, int, int]:
    """(V, E, F, Euler characteristic)"""
    v = len(complex_.vertex_types)
    e = complex_.skeleton.number_of_edges()
    f = len(complex_.triangles)
    return v, e, f, v - e + f
