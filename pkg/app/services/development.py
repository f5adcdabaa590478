# app/services/development.py
"""
Development of galleries of a B3 complex onto C(B3).

A gallery is a chain of triangles, consecutive ones sharing an edge. Each
crossing of an edge whose missing type is j moves the target chamber g to
g*s_j, so the development is combinatorial; coordinates of C(B3) are only
read afterwards, for lengths and angles.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from app.core.config import GEOMETRIC_TOL
from app.core.errors import GalleryError, QuadGalleryError
from app.services.coxeter import CoxeterComplex, CoxeterElement, coxeter_b3
from app.services.sphere_geom import SpherePoint, geodesic_distance, spherical_angle
from app.services.typed_complex import EdgePath, TypedComplex, link


@dataclass(frozen=True)
class Gallery:
    triangles: Tuple[Tuple[str, str, str], ...]
    closed: bool = False

    def __len__(self) -> int:
        return len(self.triangles)

    @property
    def crossings(self) -> List[Tuple[str, str]]:
        """Shared edge of each consecutive pair (and last/first when closed)"""
        pairs = list(zip(self.triangles, self.triangles[1:]))
        if self.closed and len(self.triangles) > 1:
            pairs.append((self.triangles[-1], self.triangles[0]))
        return [tuple(sorted(set(a) & set(b))) for a, b in pairs]


@dataclass
class DevelopedPath:
    """Chambers of C(B3) hit by the gallery, with the type-preserving vertex maps"""

    chambers: List[int]
    vertex_maps: List[Dict[str, str]]
    target: CoxeterComplex
    closes: Optional[bool] = None

    def image_of(self, position: int, vertex: str) -> SpherePoint:
        return self.target.coordinates[self.vertex_maps[position][vertex]]

    def image_points(self, path: Sequence[str]) -> List[SpherePoint]:
        """Images of a path carried by the gallery, walking forward through it"""
        points = []
        position = 0
        for k, v in enumerate(path):
            nxt = path[k + 1] if k + 1 < len(path) else None
            while position < len(self.vertex_maps):
                chart = self.vertex_maps[position]
                if v in chart and (nxt is None or nxt in chart):
                    break
                position += 1
            else:
                raise GalleryError(f"Path step {v}->{nxt} is not carried by the gallery")
            points.append(self.image_of(position, v))
        return points


def make_gallery(complex_: TypedComplex, triangles: Sequence[Sequence[str]], closed: bool = False) -> Gallery:
    tris = tuple(tuple(t) for t in triangles)
    if not tris:
        raise GalleryError("A gallery needs at least one triangle")
    for tri in tris:
        if not complex_.has_triangle(*tri):
            raise GalleryError(f"{tri} is not a triangle of the complex")
    gallery = Gallery(tris, closed)
    pairs = list(zip(tris, tris[1:]))
    if closed and len(tris) > 1:
        pairs.append((tris[-1], tris[0]))
    for a, b in pairs:
        if set(a) == set(b):
            raise GalleryError(f"Consecutive triangles {a} and {b} are equal")
        if len(set(a) & set(b)) != 2:
            raise GalleryError(f"Consecutive triangles {a} and {b} do not share an edge")
    return gallery


def _chart(complex_: TypedComplex, tri: Sequence[str], chamber: Tuple[str, ...]) -> Dict[str, str]:
    types = sorted(complex_.vertex_type(v) for v in tri)
    if types != [1, 2, 3]:
        raise GalleryError(f"Triangle {tuple(tri)} has types {types}; cannot map onto a chamber")
    return {v: chamber[complex_.vertex_type(v) - 1] for v in tri}


def develop_gallery(
    complex_: TypedComplex,
    gallery: Gallery,
    base_chamber: Union[int, CoxeterElement, None] = None,
) -> DevelopedPath:
    target = coxeter_b3()
    W = target.group
    if isinstance(base_chamber, CoxeterElement):
        base_chamber = base_chamber.index
    g = W.identity if base_chamber is None else base_chamber

    chambers = [g]
    maps = [_chart(complex_, gallery.triangles[0], target.chambers[g])]
    for k, shared in enumerate(gallery.crossings):
        missing = 6 - sum(complex_.vertex_type(v) for v in shared)
        g = W.right_mult(g, missing - 1)
        if k + 1 == len(gallery.triangles):
            # closing crossing of a closed gallery
            return DevelopedPath(chambers, maps, target, closes=(g == chambers[0]))
        nxt = gallery.triangles[k + 1]
        chart = _chart(complex_, nxt, target.chambers[g])
        for v in shared:
            if chart[v] != maps[-1][v]:
                raise GalleryError(f"Shared vertex {v} develops to two different points")
        chambers.append(g)
        maps.append(chart)
    return DevelopedPath(chambers, maps, target)


def developed_angle(complex_: TypedComplex, gallery: Gallery, center: str, base_chamber=None) -> float:
    """Sum of the developed angles at `center` over every triangle of the gallery"""
    developed = develop_gallery(complex_, gallery, base_chamber)
    total = 0.0
    for k, tri in enumerate(gallery.triangles):
        if center not in tri:
            raise GalleryError(f"{center} is not a vertex of {tri}")
        p, q = [developed.image_of(k, v) for v in tri if v != center]
        total += spherical_angle(developed.image_of(k, center), p, q)
    return total


def developed_length(complex_: TypedComplex, gallery: Gallery, path: Sequence[str], base_chamber=None) -> float:
    developed = develop_gallery(complex_, gallery, base_chamber)
    points = developed.image_points(list(path))
    return sum(geodesic_distance(p, q) for p, q in zip(points, points[1:]))


def star_gallery(complex_: TypedComplex, v: str) -> Gallery:
    """The four triangles around a type-2 vertex whose link is a 4-cycle, in cyclic order"""
    if complex_.vertex_type(v) != 2:
        raise GalleryError(f"{v} has type {complex_.vertex_type(v)}, expected 2")
    ring = link(complex_, v)
    if ring.number_of_nodes() != 4 or ring.number_of_edges() != 4 or any(d != 2 for _, d in ring.degree()):
        raise GalleryError(f"The link of {v} is not a 4-cycle")
    start = min(n for n in ring.nodes if complex_.vertex_type(n) == 1)
    order = [start]
    while len(order) < 4:
        options = sorted(n for n in ring.neighbors(order[-1]) if n not in order)
        order.append(options[0])
    triangles = [(v, order[i], order[(i + 1) % 4]) for i in range(4)]
    return make_gallery(complex_, triangles, closed=True)


# =================
# QUADRILATERAL GALLERIES
# =================


def _quad_boundary(complex_: TypedComplex, center: str) -> nx.Graph:
    if complex_.vertex_type(center) != 2:
        raise QuadGalleryError(f"{center} is not a type-2 vertex")
    ring = link(complex_, center)
    if ring.number_of_nodes() != 4 or any(d != 2 for _, d in ring.degree()):
        raise QuadGalleryError(f"{center} is not the center of a quadrilateral")
    return ring


def _opposite_faces(ring: nx.Graph, first: set, second: set) -> bool:
    """Two vertices at distance 2 or two disjoint edges of the boundary 4-cycle"""
    for face in (first, second):
        if len(face) > 2 or (len(face) == 2 and not ring.has_edge(*face)):
            return False
    if len(first) != len(second):
        return False
    if len(first) == 1:
        return nx.shortest_path_length(ring, next(iter(first)), next(iter(second))) == 2
    return True


def classify_quad_gallery(complex_: TypedComplex, centers: Sequence[str]) -> str:
    """'left', 'middle' or 'right' for a chain of three quadrilaterals"""
    if len(centers) != 3:
        raise QuadGalleryError(f"Expected three quadrilaterals, got {len(centers)}")
    if len(set(centers)) != 3:
        raise QuadGalleryError("Quadrilateral centers must be distinct")
    rings = [_quad_boundary(complex_, m) for m in centers]
    q1, q2, q3 = [set(ring.nodes) for ring in rings]
    first, second = q1 & q2, q3 & q2
    if not first or not second:
        raise QuadGalleryError("Consecutive quadrilaterals must share a vertex or an edge")
    overlap = first & second
    if not overlap:
        if not _opposite_faces(rings[1], first, second):
            raise QuadGalleryError(f"Faces {sorted(first)} and {sorted(second)} are not opposite in {centers[1]}")
        return "middle"
    if first == second and len(first) > 1:
        raise QuadGalleryError("Outer quadrilaterals are glued to the same face of the middle one")
    types = {complex_.vertex_type(v) for v in overlap}
    if types == {3}:
        return "left"
    if types == {1}:
        return "right"
    raise QuadGalleryError(f"Shared faces {sorted(overlap)} match no quadrilateral gallery shape")


# =================
# ANTIPODES AND LUNES
# =================


def antipode(p: SpherePoint) -> SpherePoint:
    return SpherePoint(-p.x, -p.y, -p.z)


def antipodal_map(target: CoxeterComplex = None) -> Dict[str, Optional[str]]:
    """Vertex of C(B3) at the antipode of each vertex (None if there is none)"""
    target = target or coxeter_b3()
    coords = target.coordinates
    mapping = {}
    for vid, p in sorted(coords.items()):
        q = antipode(p)
        hits = [w for w, r in coords.items() if geodesic_distance(q, r) < 1e-6]
        mapping[vid] = hits[0] if hits else None
    return mapping


def antipode_preserves_types(target: CoxeterComplex = None) -> bool:
    target = target or coxeter_b3()
    mapping = antipodal_map(target)
    return all(
        w is not None and target.vertex_types[w] == target.vertex_types[v]
        for v, w in mapping.items()
    )


@dataclass
class Lune:
    path: EdgePath
    length: float
    endpoints_dot: float = field(default=-1.0)


def lune_boundaries(terminal_type: int, target: CoxeterComplex = None) -> List[Lune]:
    """Edge paths of length pi from each vertex of `terminal_type` to its antipode"""
    if terminal_type not in (1, 2, 3):
        raise GalleryError(f"Terminal type must be 1, 2 or 3, not {terminal_type}")
    target = target or coxeter_b3()
    cx = target.to_typed_complex()
    coords = target.coordinates
    opposite = antipodal_map(target)
    budget = math.pi + GEOMETRIC_TOL

    lunes: List[Lune] = []
    for start in cx.vertices(terminal_type):
        goal = opposite[start]

        def walk(path: List[str], length: float):
            tail = path[-1]
            if tail == goal:
                if abs(length - math.pi) <= GEOMETRIC_TOL:
                    types = tuple(cx.vertex_types[v] for v in path)
                    dot = coords[path[0]].dot(coords[goal])
                    lunes.append(Lune(EdgePath(tuple(path), types), length, dot))
                return
            for w in cx.neighbors(tail):
                if w in path:
                    continue
                step = geodesic_distance(coords[tail], coords[w])
                if length + step <= budget:
                    path.append(w)
                    walk(path, length + step)
                    path.pop()

        walk([start], 0.0)
    lunes.sort(key=lambda lune: lune.path.vertices)
    return lunes
