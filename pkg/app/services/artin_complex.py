# app/services/artin_complex.py
"""
Finite balls of the Artin complexes D(B3) and D(A5).

A chamber is a group element g; its vertices are the cosets g*A(hat s_i).
Balls collect the chambers of Cayley length <= R. Vertex identity is exact:
slots of adjacent chambers are merged first, then the remaining classes are
compared with the parabolic membership test inside buckets that share the
same image in the Coxeter complex.

Order questions that need an unbounded search answer True, False or None
(unknown); None is never read as a refutation.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from app.core import config
from app.core.console import detail, status
from app.core.errors import BallCapExceededError, JoinViolationError
from app.schemas import CheckReport, Outcome
from app.services.cat1_checker import check_cat1_criteria
from app.services.coxeter import ParabolicHandle
from app.services.garside import ArtinGroup, GroupElement, artin_group, parabolic_membership, phi, sigma, word_ball
from app.services.typed_complex import TypedComplex
from app.utils.complex_io import format_complex, format_words


@dataclass(frozen=True)
class CosetVertex:
    """The coset rep * A(hat s_vtype)"""

    rep: GroupElement
    vtype: int

    def contains(self, h: GroupElement) -> bool:
        return parabolic_membership(self.rep.inverse() * h, _parabolic(self.rep.group, self.vtype))

    def __str__(self):
        return f"({self.rep}) * hat{self.vtype}"


def _parabolic(group: ArtinGroup, vtype: int) -> ParabolicHandle:
    return ParabolicHandle.maximal(group.diagram, vtype)


def coset_equal(v1: CosetVertex, v2: CosetVertex) -> bool:
    if v1.vtype != v2.vtype or v1.rep.group.name != v2.rep.group.name:
        return False
    return parabolic_membership(v2.rep.inverse() * v1.rep, _parabolic(v1.rep.group, v1.vtype))


# =================
# COXETER SHADOWS
# =================


def _w_key(vertex: CosetVertex) -> Tuple[int, int]:
    """Image of the vertex in the Coxeter complex: (type, minimal coset representative)"""
    group = vertex.rep.group
    x = group.project(vertex.rep)
    return vertex.vtype, group.coxeter.min_coset_rep(x, _parabolic(group, vertex.vtype))


@lru_cache(maxsize=None)
def _w_cosets(name: str) -> Dict[Tuple[int, int], FrozenSet[int]]:
    group = artin_group(name)
    W = group.coxeter
    buckets: Dict[Tuple[int, int], Set[int]] = {}
    for t in range(1, group.rank + 1):
        handle = _parabolic(group, t)
        for x in range(W.order):
            buckets.setdefault((t, W.min_coset_rep(x, handle)), set()).add(x)
    return {key: frozenset(members) for key, members in buckets.items()}


def shadows_meet(v1: CosetVertex, v2: CosetVertex) -> bool:
    """Necessary condition for v1 and v2 to intersect"""
    table = _w_cosets(v1.rep.group.name)
    return bool(table[_w_key(v1)] & table[_w_key(v2)])


@lru_cache(maxsize=None)
def parabolic_ball(name: str, vtype: int, radius: int) -> Tuple[GroupElement, ...]:
    """Elements of A(hat s_vtype) of word length <= radius, in breadth-first order"""
    group = artin_group(name)
    return tuple(word_ball(group, radius, _parabolic(group, vtype).generators))


# =================
# BALLS
# =================


@dataclass
class BallComplex:
    group: ArtinGroup
    radius: int
    chambers: List[GroupElement]
    lengths: List[int]
    chamber_vertices: List[Tuple[str, ...]]
    vertices: Dict[str, CosetVertex]
    members: Dict[str, List[int]]
    buckets: Dict[Tuple[int, int], List[str]] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.group.name

    def vertex_type(self, vid: str) -> int:
        return self.vertices[vid].vtype

    def depth(self, vid: str) -> int:
        return min(self.lengths[c] for c in self.members[vid])

    def interior(self, margin: int = 1) -> List[str]:
        return sorted(v for v in self.vertices if self.depth(v) <= self.radius - margin)

    def vertex_ids(self, vtype: int = None) -> List[str]:
        return sorted(v for v, cv in self.vertices.items() if vtype is None or cv.vtype == vtype)

    def find_class(self, vertex: CosetVertex) -> Optional[str]:
        for vid in self.buckets.get(_w_key(vertex), []):
            if coset_equal(self.vertices[vid], vertex):
                return vid
        return None

    def shared_chambers(self, vid1: str, vid2: str) -> List[int]:
        return sorted(set(self.members[vid1]) & set(self.members[vid2]))

    def typed_complex(self) -> TypedComplex:
        """Triangles of a B3 ball"""
        types = {vid: cv.vtype for vid, cv in self.vertices.items()}
        return TypedComplex(types, self.chamber_vertices)

    def poset_edges(self) -> List[Tuple[str, str]]:
        """Pairs (u, w) spanned by a chamber with type(u) < type(w)"""
        edges = set()
        for chamber in self.chamber_vertices:
            for i, u in enumerate(chamber):
                for w in chamber[i + 1:]:
                    edges.add((u, w))
        return sorted(edges)

    def words(self) -> Dict[str, Dict]:
        return {
            vid: {"type": cv.vtype, "word": str(cv.rep), "depth": self.depth(vid)}
            for vid, cv in self.vertices.items()
        }


def build_ball(name: str, radius: int, cap: int = None) -> BallComplex:
    """All chambers of Cayley length <= radius with exactly deduplicated vertices"""
    if radius < 0:
        raise BallCapExceededError(f"Radius must be non-negative, got {radius}")
    cap = config.BALL_CHAMBER_CAP if cap is None else cap
    group = artin_group(name)
    rank = group.rank
    status(f"Building the radius-{radius} ball of D({name})", "start")

    steps: List[Tuple[int, GroupElement]] = []
    for s, gen_name in enumerate(group.diagram.generators):
        gen = group.generator(gen_name)
        steps.append((s, gen))
        steps.append((s, gen.inverse()))

    index: Dict[GroupElement, int] = {group.identity(): 0}
    chambers = [group.identity()]
    lengths = [0]
    adjacent: List[Tuple[int, int, int]] = []
    queue = deque([0])
    while queue:
        c = queue.popleft()
        if lengths[c] == radius:
            continue
        for s, gen in steps:
            h = chambers[c] * gen
            target = index.get(h)
            if target is None:
                if len(chambers) >= cap:
                    raise BallCapExceededError(
                        f"Ball of D({name}) with radius {radius} exceeds {cap} chambers"
                    )
                target = len(chambers)
                index[h] = target
                chambers.append(h)
                lengths.append(lengths[c] + 1)
                queue.append(target)
            adjacent.append((c, target, s))

    # slot (c, t) is the type-t vertex of chamber c
    parent: Dict[Tuple[int, int], Tuple[int, int]] = {}

    def find(slot):
        root = slot
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(slot, slot) != root:
            parent[slot], slot = root, parent[slot]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c, target, s in adjacent:
        for t in range(1, rank + 1):
            if t != s + 1:
                union((c, t), (target, t))

    # exact pass over classes that share a Coxeter shadow
    shadow: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for c in range(len(chambers)):
        for t in range(1, rank + 1):
            root = find((c, t))
            if root == (c, t):
                shadow.setdefault(_w_key(CosetVertex(chambers[c], t)), []).append(root)
    merges = 0
    for roots in shadow.values():
        for i, a in enumerate(roots):
            for b in roots[i + 1:]:
                if find(a) == find(b):
                    continue
                if coset_equal(CosetVertex(chambers[a[0]], a[1]), CosetVertex(chambers[b[0]], b[1])):
                    union(a, b)
                    merges += 1

    roots = sorted({find((c, t)) for c in range(len(chambers)) for t in range(1, rank + 1)})
    counters = {t: 0 for t in range(1, rank + 1)}
    ids: Dict[Tuple[int, int], str] = {}
    vertices: Dict[str, CosetVertex] = {}
    for c, t in roots:
        vid = f"v{t}_{counters[t]}"
        counters[t] += 1
        ids[(c, t)] = vid
        vertices[vid] = CosetVertex(chambers[c], t)

    chamber_vertices = []
    members: Dict[str, List[int]] = {vid: [] for vid in vertices}
    for c in range(len(chambers)):
        row = tuple(ids[find((c, t))] for t in range(1, rank + 1))
        chamber_vertices.append(row)
        for vid in row:
            members[vid].append(c)

    buckets: Dict[Tuple[int, int], List[str]] = {}
    for vid, cv in vertices.items():
        buckets.setdefault(_w_key(cv), []).append(vid)

    status(f"D({name}) ball: {len(chambers)} chambers, {len(vertices)} vertices", "stats")
    if merges:
        detail(f"{merges} vertex classes merged by the exact coset test")
    return BallComplex(group, radius, chambers, lengths, chamber_vertices, vertices, members, buckets)


def export_ball(ball: BallComplex) -> Tuple[str, str]:
    """(complex file text, vertex-word sidecar JSON); A5 balls are exported as the poset only"""
    types = {vid: cv.vtype for vid, cv in ball.vertices.items()}
    header = f"D({ball.name}) ball of radius {ball.radius}: {len(ball.chambers)} chambers"
    if ball.group.rank == 3:
        text = format_complex(types, ball.chamber_vertices, (), header)
    else:
        text = format_complex(types, (), ball.poset_edges(), header + " (poset edges only)")
    return text, format_words(ball.words())


# =================
# ORDER
# =================


def find_intersection(v1: CosetVertex, v2: CosetVertex, search_radius: int = None) -> Optional[GroupElement]:
    """An element of both cosets, searching v2.rep * a for a in a bounded parabolic ball"""
    search_radius = config.SEARCH_RADIUS if search_radius is None else search_radius
    if not shadows_meet(v1, v2):
        return None
    if v1.contains(v2.rep):
        return v2.rep
    if v2.contains(v1.rep):
        return v1.rep
    start = v1.rep.inverse() * v2.rep
    handle = _parabolic(v1.rep.group, v1.vtype)
    for a in parabolic_ball(v2.rep.group.name, v2.vtype, search_radius):
        if parabolic_membership(start * a, handle):
            return v2.rep * a
    return None


def poset_leq(
    v1: CosetVertex,
    v2: CosetVertex,
    search_radius: int = None,
    ball: BallComplex = None,
) -> Optional[bool]:
    """v1 <= v2: types ordered and cosets intersecting; None when undecided"""
    if v1.vtype > v2.vtype:
        return False
    if v1.vtype == v2.vtype:
        return coset_equal(v1, v2)
    if not shadows_meet(v1, v2):
        return False
    if ball is not None:
        a, b = ball.find_class(v1), ball.find_class(v2)
        if a is not None and b is not None and ball.shared_chambers(a, b):
            return True
    if find_intersection(v1, v2, search_radius) is not None:
        return True
    return None


def _leq_ids(ball: BallComplex, a: str, b: str, search_radius: int, memo: Dict) -> Optional[bool]:
    key = (a, b)
    if key not in memo:
        va, vb = ball.vertices[a], ball.vertices[b]
        if va.vtype > vb.vtype:
            memo[key] = False
        elif a == b:
            memo[key] = True
        elif va.vtype == vb.vtype:
            memo[key] = False
        elif ball.shared_chambers(a, b):
            memo[key] = True
        else:
            memo[key] = poset_leq(va, vb, search_radius)
    return memo[key]


@dataclass
class JoinResult:
    status: str  # join | inconclusive | violation
    join: Optional[str] = None
    upper_bounds: List[str] = field(default_factory=list)
    minimal: List[str] = field(default_factory=list)
    reason: str = ""


def join_in_ball(
    vertex_ids: Sequence[str],
    ball: BallComplex,
    search_radius: int = None,
    memo: Dict[Tuple[str, str], Optional[bool]] = None,
) -> JoinResult:
    """Least upper bound of ball vertices among the ball's vertices"""
    inputs = sorted(set(vertex_ids))
    memo = {} if memo is None else memo
    top = max(ball.vertex_type(v) for v in inputs)

    upper = []
    for u in ball.vertex_ids():
        if ball.vertex_type(u) < top:
            continue
        if all(_leq_ids(ball, v, u, search_radius, memo) is True for v in inputs):
            upper.append(u)
    if not upper:
        return JoinResult("inconclusive", reason="no upper bound in the ball; retry with a larger radius")

    # the join has type >= floor, so an upper bound of exactly that type is the join
    # and must sit below every other upper bound
    top_inputs = [v for v in inputs if ball.vertex_type(v) == top]
    floor = top + 1 if len(top_inputs) >= 2 else top
    for u in upper:
        if ball.vertex_type(u) != floor:
            continue
        for w in upper:
            if w != u and _leq_ids(ball, u, w, search_radius, memo) is False:
                raise JoinViolationError(
                    f"{inputs} in D({ball.name}) have upper bounds {u} and {w} with {u} forced to be the join but not below {w}"
                )

    minimal = [
        u for u in upper
        if not any(w != u and _leq_ids(ball, w, u, search_radius, memo) is True for w in upper)
    ]
    if len(minimal) == 1:
        m = minimal[0]
        if all(_leq_ids(ball, m, u, search_radius, memo) is True for u in upper):
            return JoinResult("join", m, upper, minimal)
        return JoinResult("inconclusive", None, upper, minimal, "minimal upper bound not comparable to all others")
    return JoinResult("inconclusive", None, upper, minimal, f"{len(minimal)} minimal upper bounds, not certified distinct")


# =================
# PSI AND SIGMA
# =================


def psi_vertex(v: CosetVertex) -> CosetVertex:
    return CosetVertex(phi(v.rep), v.vtype)


def sigma_vertex(v: CosetVertex) -> CosetVertex:
    return CosetVertex(sigma(v.rep), v.rep.group.rank + 1 - v.vtype)


@dataclass
class LemmaCheck:
    outcome: Outcome
    in_image: Optional[bool] = None
    leq: Optional[bool] = None
    witness: Optional[str] = None
    reason: str = ""


def find_preimage(v: CosetVertex, preimage_radius: int = None) -> Optional[CosetVertex]:
    """B3 vertex u of the same type with psi(u) = v, searched among short elements"""
    preimage_radius = config.SEARCH_RADIUS if preimage_radius is None else preimage_radius
    if v.vtype > 3:
        return None
    for candidate, image in _preimage_index(preimage_radius).get(_w_key(v), []):
        if coset_equal(image, v):
            return candidate
    return None


@lru_cache(maxsize=None)
def _preimage_index(radius: int) -> Dict[Tuple[int, int], List[Tuple[CosetVertex, CosetVertex]]]:
    """psi-images of short B3 vertices, bucketed by their Coxeter shadow"""
    index: Dict[Tuple[int, int], List[Tuple[CosetVertex, CosetVertex]]] = {}
    for h in _b3_elements(radius):
        for t in (1, 2, 3):
            candidate = CosetVertex(h, t)
            image = psi_vertex(candidate)
            index.setdefault(_w_key(image), []).append((candidate, image))
    return index


@lru_cache(maxsize=None)
def _b3_elements(radius: int) -> Tuple[GroupElement, ...]:
    group = artin_group("B3")
    steps = []
    for gen_name in group.diagram.generators:
        gen = group.generator(gen_name)
        steps.extend([gen, gen.inverse()])
    seen = {group.identity(): 0}
    queue = deque([group.identity()])
    while queue:
        g = queue.popleft()
        if seen[g] == radius:
            continue
        for x in steps:
            h = g * x
            if h not in seen:
                seen[h] = seen[g] + 1
                queue.append(h)
    return tuple(seen)


def check_image_forward(u: CosetVertex, search_radius: int = None) -> LemmaCheck:
    """psi(u) <= sigma(psi(u)), witnessed by phi(rep) lying in both cosets"""
    image = psi_vertex(u)
    mirror = sigma_vertex(image)
    if image.vtype <= mirror.vtype and sigma(image.rep) == image.rep:
        return LemmaCheck(Outcome.CONSISTENT, True, True, str(image.rep))
    leq = poset_leq(image, mirror, search_radius)
    if leq is True:
        return LemmaCheck(Outcome.CONSISTENT, True, True)
    if leq is False:
        return LemmaCheck(Outcome.VIOLATION, True, False, reason=f"psi({u}) is not below its mirror")
    return LemmaCheck(Outcome.INCONCLUSIVE, True, None, reason="no intersection found within the search radius")


def check_lessiffimage(v: CosetVertex, search_radius: int = None) -> LemmaCheck:
    """v is a psi-image exactly when v <= sigma(v)"""
    mirror = sigma_vertex(v)
    leq = poset_leq(v, mirror, search_radius)
    preimage = find_preimage(v, search_radius)
    in_image: Optional[bool] = True if preimage is not None else (False if v.vtype > 3 else None)

    if in_image is True and leq is False:
        return LemmaCheck(Outcome.VIOLATION, True, False, str(preimage), "image vertex not below its mirror")
    if in_image is False and leq is True:
        return LemmaCheck(Outcome.VIOLATION, False, True, reason="non-image vertex below its mirror")
    if in_image is not None and leq is not None:
        return LemmaCheck(Outcome.CONSISTENT, in_image, leq, str(preimage) if preimage else None)
    return LemmaCheck(
        Outcome.INCONCLUSIVE, in_image, leq,
        reason="preimage search or order search undecided within the radius",
    )


def check_jingyin_instance(
    v1: str, v2: str, v3: str, ball: BallComplex, search_radius: int = None
) -> LemmaCheck:
    """Three type-3 vertices with pairwise lower bounds of type 3 or 2 share a lower bound of type 3, 2 or 1"""
    ids = [v1, v2, v3]
    if any(ball.vertex_type(v) != 3 for v in ids):
        return LemmaCheck(Outcome.INCONCLUSIVE, reason="all three vertices must have type 3")
    memo: Dict[Tuple[str, str], Optional[bool]] = {}

    def below(u: str, targets: Sequence[str]) -> bool:
        return all(_leq_ids(ball, u, t, search_radius, memo) is True for t in targets)

    candidates = [u for t in (3, 2) for u in ball.vertex_ids(t)]
    for a, b in ((v1, v2), (v1, v3), (v2, v3)):
        if not any(below(u, (a, b)) for u in candidates):
            return LemmaCheck(Outcome.INCONCLUSIVE, reason=f"no pairwise lower bound for {a}, {b} in the ball")

    for t in (3, 2, 1):
        for u in ball.vertex_ids(t):
            if below(u, ids):
                return LemmaCheck(Outcome.CONSISTENT, witness=u)
    return LemmaCheck(Outcome.INCONCLUSIVE, reason="no common lower bound in the ball; retry with a larger radius")


# =================
# BALL CONDITIONS
# =================


def _s3_exponent(z: GroupElement) -> int:
    s3 = z.group.generator_index("s3")
    top = sum(1 for s in z.numerator.letters if s == s3)
    bottom = sum(1 for s in z.denominator.letters if s == s3)
    return top - bottom


def complete_cross_edge(ball: BallComplex, m: str, a: str, c: str) -> Optional[GroupElement]:
    """Chamber containing the type-2 vertex m and its link neighbours a (type 1), c (type 3)"""
    shared_a = ball.shared_chambers(a, m)
    shared_c = ball.shared_chambers(c, m)
    if not shared_a or not shared_c:
        return None
    h_a = ball.chambers[shared_a[0]]
    h_c = ball.chambers[shared_c[0]]
    # h_a^-1 h_c lies in A(hat s2) = <s1> x <s3>
    z = h_a.inverse() * h_c
    exponent = _s3_exponent(z)
    h = h_a * ball.group.generator("s3", exponent)
    if all(ball.vertices[v].contains(h) for v in (m, a, c)):
        return h
    return None


def ball_report(
    ball: BallComplex,
    interior_margin: int = 2,
    *,
    induced: bool = False,
    limit: int = None,
) -> CheckReport:
    """Six-condition report on the interior vertices of a D(B3) ball"""
    cx = ball.typed_complex()
    allowed = ball.interior(interior_margin)

    def oracle(m: str, a: str, c: str) -> Optional[bool]:
        return True if complete_cross_edge(ball, m, a, c) is not None else None

    status(f"Checking {len(allowed)} interior vertices of the D({ball.name}) ball", "search")
    return check_cat1_criteria(
        cx,
        induced=induced,
        truncated=True,
        allowed=allowed,
        cross_edge_oracle=oracle,
        limit=limit,
        meta={
            "diagram": ball.name,
            "radius": ball.radius,
            "interior_margin": interior_margin,
            "chambers": len(ball.chambers),
        },
    )
