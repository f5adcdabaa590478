# app/services/cat1_checker.py
"""
Six-condition CAT(1) criterion for B3 simplicial complexes, the short-loop
type tables, and the edge-path rewriting moves used to reduce short loops.
"""

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from app.core import config
from app.core.errors import InvalidComplexError, InvalidPatternError, MissingFillingError
from app.schemas import (
    CheckReport,
    ConditionResult,
    ConditionStatus,
    Diagnostics,
    Witness,
    combine_statuses,
)
from app.services.sphere_geom import SimplexShape, b3_constants
from app.services.typed_complex import (
    EdgePath,
    TypedComplex,
    embedded_cycles,
    face_counts,
    girth,
    is_complete_bipartite,
    is_flag,
    link,
    pattern_alignments,
    star_intersection,
    validate,
)

CONDITION_TITLES = {
    1: "links are nonempty and connected",
    2: "type-1 links have girth at least 8",
    3: "type-2 links are complete bipartite with an embedded 4-cycle",
    4: "type-3 links have girth at least 6",
    5: "short cycles bound the pictured fillings",
    6: "bad 10-cycles are not embedded",
}

SQUARE = (3, 1, 3, 1)
HEXAGON = (3, 1, 3, 1, 3, 1)
OCTAGON = (3, 2, 3, 1, 3, 2, 3, 2)
BAD_DECAGON = (3, 2) * 5

FILL_PATTERNS = {"square": SQUARE, "hexagon": HEXAGON, "octagon": OCTAGON}

MAX_WITNESSES = 25

# answers whether the triangle (m, a, c) exists outside the complex: True, False or None (unknown)
CrossEdgeOracle = Callable[[str, str, str], Optional[bool]]


# =================
# SHORT-LOOP TABLES
# =================


@dataclass(frozen=True, order=True)
class Triple:
    """Counts of s1/s2/s3 edge pairs in a closed edge path"""

    n_alpha: int
    n_beta: int
    n_delta: int

    def weighted_sum(self, shape: SimplexShape = None) -> float:
        shape = shape or b3_constants()
        return self.n_alpha * shape.alpha + self.n_beta * shape.beta + self.n_delta * shape.delta

    def is_short(self, shape: SimplexShape = None) -> bool:
        return self.weighted_sum(shape) < math.pi - config.GEOMETRIC_TOL

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.n_alpha, self.n_beta, self.n_delta)


def enumerate_short_triples() -> List[Triple]:
    shape = b3_constants()
    bound_a = int(math.pi // shape.alpha) + 1
    bound_b = int(math.pi // shape.beta) + 1
    bound_d = int(math.pi // shape.delta) + 1
    triples = []
    for a, b, d in product(range(bound_a + 1), range(bound_b + 1), range(bound_d + 1)):
        if a + b + d < 2:
            continue
        triple = Triple(a, b, d)
        if triple.is_short(shape):
            triples.append(triple)
    return sorted(triples)


def reduce_triples(triples: Iterable[Triple]) -> List[Triple]:
    """Drop mixed s1/s3 loops without s2 edges, and the two digon-like pairs"""
    reduced = []
    for t in triples:
        if t.n_alpha > 0 and t.n_beta == 0 and t.n_delta > 0:
            continue
        if t.as_tuple() in ((2, 0, 0), (0, 0, 2)):
            continue
        reduced.append(t)
    return sorted(reduced)


# =================
# CONDITIONS (1)-(4)
# =================


def shortest_cycle(graph: nx.Graph) -> List[str]:
    """A cycle of minimum length, as a vertex list (empty for forests)"""
    best: List[str] = []
    for u, w in sorted(tuple(sorted(e)) for e in graph.edges):
        graph.remove_edge(u, w)
        try:
            path = nx.shortest_path(graph, u, w)
        except nx.NetworkXNoPath:
            path = None
        graph.add_edge(u, w)
        if path and (not best or len(path) < len(best)):
            best = path
    return best


class _Tally:
    """Collects per-condition outcomes"""

    def __init__(self, condition: int):
        self.condition = condition
        self.statuses: List[ConditionStatus] = []
        self.witnesses: List[Witness] = []
        self.notes: List[str] = []
        self.checked = 0
        self.certified = 0
        self.inconclusive = 0

    def record(self, status: ConditionStatus, witness: Witness = None):
        self.statuses.append(status)
        if status == ConditionStatus.INCONCLUSIVE:
            self.inconclusive += 1
        if witness is not None and status != ConditionStatus.PASS and len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def result(self) -> ConditionResult:
        status = combine_statuses(self.statuses)
        return ConditionResult(
            condition=self.condition,
            title=CONDITION_TITLES[self.condition],
            status=status,
            checked=self.checked,
            certified=self.certified,
            inconclusive=self.inconclusive,
            witnesses=self.witnesses if status != ConditionStatus.PASS else [],
            notes=self.notes,
        )


def check_conditions_1_to_4(
    complex_: TypedComplex,
    *,
    allowed: Iterable[str] = None,
    truncated: bool = False,
    cross_edge_oracle: CrossEdgeOracle = None,
) -> Dict[int, ConditionResult]:
    """Per-vertex link conditions; `truncated` softens boundary artefacts to inconclusive"""
    soft = ConditionStatus.INCONCLUSIVE if truncated else ConditionStatus.FAIL
    tallies = {c: _Tally(c) for c in (1, 2, 3, 4)}
    pool = set(allowed) if allowed is not None else None

    for v in complex_.vertices():
        if pool is not None and v not in pool:
            continue
        vtype = complex_.vertex_types[v]
        graph = link(complex_, v)

        one = tallies[1]
        one.checked += 1
        if graph.number_of_nodes() == 0:
            one.record(soft, Witness(kind="empty_link", vertices=[v]))
        elif not nx.is_connected(graph):
            parts = sorted(sorted(c) for c in nx.connected_components(graph))
            one.record(
                soft,
                Witness(kind="disconnected_link", vertices=[v], detail=f"{len(parts)} components: {parts}"),
            )
        else:
            one.record(ConditionStatus.PASS)

        if vtype in (1, 3):
            tally = tallies[2 if vtype == 1 else 4]
            bound = 8 if vtype == 1 else 6
            tally.checked += 1
            g = girth(graph)
            if g < bound:
                cycle = shortest_cycle(graph)
                tally.record(
                    ConditionStatus.FAIL,
                    Witness(kind="short_link_cycle", vertices=[v] + cycle, detail=f"girth {g} < {bound}"),
                )
            else:
                tally.record(ConditionStatus.PASS)
        elif vtype == 2:
            three = tallies[3]
            three.checked += 1
            check = is_complete_bipartite(graph)
            status = ConditionStatus.PASS
            for u, w in check.same_type_edges:
                status = ConditionStatus.FAIL
                three.record(status, Witness(kind="same_type_link_edge", vertices=[v, u, w]))
            for a, c in check.missing_edges:
                verdict = cross_edge_oracle(v, a, c) if cross_edge_oracle else None
                if verdict is True:
                    three.certified += 1
                    continue
                pair_status = ConditionStatus.FAIL if verdict is False else soft
                three.record(pair_status, Witness(kind="missing_cross_edge", vertices=[v, a, c]))
                status = combine_statuses([status, pair_status])
            if not check.has_four_cycle:
                sizes = check.side_sizes
                three.record(
                    soft,
                    Witness(kind="no_four_cycle", vertices=[v], detail=f"link sides {sizes[0]} and {sizes[1]}"),
                )
                status = combine_statuses([status, soft])
            if status == ConditionStatus.PASS:
                three.record(ConditionStatus.PASS)

    return {c: t.result() for c, t in tallies.items()}


# =================
# EDGE-PATH REWRITING
# =================


def _rebuild(complex_: TypedComplex, vertices: Sequence[str], closed: bool) -> EdgePath:
    return EdgePath(tuple(vertices), tuple(complex_.vertex_type(v) for v in vertices), closed)


def normalize_edge_path(complex_: TypedComplex, path: EdgePath) -> EdgePath:
    """Replace every s1+s3 corner at a type-2 vertex by the s2 edge of its triangle"""
    verts = list(path.vertices)
    types = {v: complex_.vertex_type(v) for v in verts}
    changed = True
    while changed:
        changed = False
        n = len(verts)
        if n < 3:
            break
        positions = range(n) if path.closed else range(1, n - 1)
        for i in positions:
            prev, mid, nxt = verts[i - 1], verts[i], verts[(i + 1) % n]
            if types[mid] != 2 or {types[prev], types[nxt]} != {1, 3}:
                continue
            if not complex_.has_triangle(prev, mid, nxt):
                raise MissingFillingError(
                    f"No triangle {{{prev}, {mid}, {nxt}}}: the link of {mid} is not complete bipartite"
                )
            del verts[i]
            changed = True
            break
    return _rebuild(complex_, verts, path.closed)


def bypass_move(complex_: TypedComplex, path: EdgePath, position: int) -> EdgePath:
    """Swap the middle of an x-2-x segment for the opposite type, or back"""
    verts = list(path.vertices)
    n = len(verts)
    if path.closed:
        if n < 3:
            raise InvalidPatternError("Closed path is too short for a bypass")
        prev, nxt = verts[(position - 1) % n], verts[(position + 1) % n]
        position %= n
    else:
        if not 1 <= position <= n - 2:
            raise InvalidPatternError(f"Position {position} has no neighbours on both sides")
        prev, nxt = verts[position - 1], verts[position + 1]
    mid = verts[position]
    tp, tm, tn = (complex_.vertex_type(x) for x in (prev, mid, nxt))
    if tp != tn or tp not in (1, 3):
        raise InvalidPatternError(f"Segment {prev}-{mid}-{nxt} is not of the form x-y-x with x in (1, 3)")

    opposite = 4 - tp
    if tm == 2:
        candidates = [
            c
            for c in complex_.neighbors(mid, opposite)
            if complex_.has_triangle(mid, prev, c) and complex_.has_triangle(mid, nxt, c)
        ]
    elif tm == opposite:
        candidates = [
            m
            for m in complex_.neighbors(mid, 2)
            if complex_.has_triangle(m, prev, mid) and complex_.has_triangle(m, nxt, mid)
        ]
    else:
        raise InvalidPatternError(f"Segment {prev}-{mid}-{nxt} has middle type {tm}")
    candidates = [c for c in candidates if c not in (prev, nxt)]
    if not candidates:
        raise MissingFillingError(f"No vertex completes the square on {prev}-{mid}-{nxt}")
    verts[position] = candidates[0]
    return _rebuild(complex_, verts, path.closed)


# =================
# CONDITION (5) FILLINGS
# =================


@dataclass
class Filling:
    pattern: str
    cycle: Tuple[str, ...]
    fill: Dict[str, str]


def _common(complex_: TypedComplex, vtype: int, around: Sequence[str]) -> List[str]:
    pools = [set(complex_.neighbors(v, vtype)) for v in around]
    return sorted(set.intersection(*pools)) if pools else []


def _has_all(complex_: TypedComplex, triangles: Iterable[Tuple[str, str, str]]) -> bool:
    return all(complex_.has_triangle(*t) for t in triangles)


def fill_square(complex_: TypedComplex, cycle: Sequence[str], induced: bool = False) -> Optional[Filling]:
    c0, a0, c1, a1 = cycle
    for m in _common(complex_, 2, cycle):
        if _has_all(complex_, [(m, c0, a0), (m, a0, c1), (m, c1, a1), (m, a1, c0)]):
            return Filling("square", tuple(cycle), {"center": m})
    return None


def _split_hexagon(complex_: TypedComplex, cycle: Sequence[str], b: Sequence[str], a: Sequence[str]) -> Optional[Filling]:
    """A chord b[k]-a[k+1] cuts the hexagon into two squares; fill both"""
    for k in range(3):
        far = a[(k + 1) % 3]
        if not complex_.has_edge(b[k], far):
            continue
        first = fill_square(complex_, (b[k], a[k], b[(k + 1) % 3], far))
        second = fill_square(complex_, (b[k], far, b[(k + 2) % 3], a[(k + 2) % 3]))
        if first is not None and second is not None:
            return Filling(
                "hexagon",
                tuple(cycle),
                {"chord": f"{b[k]}-{far}", "center": first.fill["center"], "center2": second.fill["center"]},
            )
    return None


def fill_hexagon(complex_: TypedComplex, cycle: Sequence[str], induced: bool = False) -> Optional[Filling]:
    b = cycle[0::2]
    a = cycle[1::2]
    if not induced:
        split = _split_hexagon(complex_, cycle, b, a)
        if split is not None:
            return split
    # b[k] sits between a[k-1] and a[k]
    for z in _common(complex_, 3, a):
        if induced and z in cycle:
            continue
        options = []
        for k in range(3):
            left, right = a[k - 1], a[k]
            options.append(
                [
                    u
                    for u in _common(complex_, 2, (b[k], z, left, right))
                    if _has_all(complex_, [(u, b[k], left), (u, b[k], right), (u, z, left), (u, z, right)])
                ]
            )
        if not all(options):
            continue
        if not induced:
            return Filling("hexagon", tuple(cycle), {"center": z, "u0": options[0][0], "u1": options[1][0], "u2": options[2][0]})
        for choice in product(*options):
            if len(set(choice)) == 3:
                return Filling("hexagon", tuple(cycle), {"center": z, "u0": choice[0], "u1": choice[1], "u2": choice[2]})
    return None


def fill_octagon(complex_: TypedComplex, cycle: Sequence[str], induced: bool = False) -> Optional[Filling]:
    c = list(cycle)
    fan = [(c[7], c[0]), (c[0], c[1]), (c[1], c[2]), (c[4], c[5]), (c[5], c[6]), (c[6], c[7])]
    for x in _common(complex_, 1, (c[0], c[1], c[2], c[4], c[5], c[6], c[7])):
        if induced and x in cycle:
            continue
        if not _has_all(complex_, [(x, p, q) for p, q in fan]):
            continue
        for y in _common(complex_, 2, (x, c[2], c[3], c[4])):
            if induced and y in cycle:
                continue
            if _has_all(complex_, [(x, c[2], y), (x, y, c[4]), (y, c[2], c[3]), (y, c[3], c[4])]):
                return Filling("octagon", tuple(cycle), {"x": x, "y": y})
    return None


FILLERS = {"square": fill_square, "hexagon": fill_hexagon, "octagon": fill_octagon}


def find_filling(complex_: TypedComplex, path: EdgePath, name: str, induced: bool = False) -> Optional[Filling]:
    filler = FILLERS[name]
    for aligned in pattern_alignments(path, FILL_PATTERNS[name]):
        filling = filler(complex_, aligned, induced)
        if filling is not None:
            return filling
    return None


def check_condition5(
    complex_: TypedComplex,
    *,
    allowed: Iterable[str] = None,
    induced: bool = False,
    truncated: bool = False,
    limit: int = None,
) -> ConditionResult:
    limit = config.CYCLE_LIMIT if limit is None else limit
    missing = ConditionStatus.INCONCLUSIVE if truncated else ConditionStatus.FAIL
    tally = _Tally(5)
    for name, pattern in FILL_PATTERNS.items():
        cycles = embedded_cycles(complex_, pattern, limit, allowed=allowed, induced=induced)
        if len(cycles) >= limit:
            tally.record(ConditionStatus.INCONCLUSIVE)
            tally.notes.append(f"{name}: search stopped at the limit of {limit} cycles")
        filled = 0
        for cycle in cycles:
            tally.checked += 1
            if find_filling(complex_, cycle, name, induced) is not None:
                filled += 1
                tally.record(ConditionStatus.PASS)
            else:
                tally.record(missing, Witness(kind=f"unfilled_{name}", vertices=list(cycle.vertices)))
        tally.notes.append(f"{name}: {filled}/{len(cycles)} filled")
    if truncated and tally.inconclusive:
        tally.notes.append("a filling vertex may lie outside the ball; retry with a larger radius or margin")
    return tally.result()


def check_condition6(
    complex_: TypedComplex,
    *,
    allowed: Iterable[str] = None,
    induced: bool = False,
    limit: int = None,
) -> ConditionResult:
    limit = config.CYCLE_LIMIT if limit is None else limit
    tally = _Tally(6)
    cycles = embedded_cycles(complex_, BAD_DECAGON, limit, allowed=allowed, induced=induced)
    tally.checked = len(cycles)
    for cycle in cycles:
        tally.record(ConditionStatus.FAIL, Witness(kind="embedded_bad_decagon", vertices=list(cycle.vertices)))
    if not cycles:
        tally.record(ConditionStatus.PASS)
    tally.notes.append(f"{len(cycles)} embedded (3,2)x5 cycles")
    return tally.result()


# =================
# AGGREGATE
# =================


def diagnostics(complex_: TypedComplex, allowed: Iterable[str] = None) -> Diagnostics:
    flag = is_flag(complex_)
    pool = set(allowed) if allowed is not None else None
    centers = [v for v in complex_.vertices(2) if pool is None or v in pool]
    counts = {"empty": 0, "vertex": 0, "edge": 0, "other": 0}
    for v1, v2 in combinations(centers, 2):
        counts[star_intersection(complex_, v1, v2).kind] += 1
    return Diagnostics(
        flag=flag.flag,
        flag_witness=list(flag.witness) if flag.witness else None,
        star_intersections=counts,
    )


def check_cat1_criteria(
    complex_: TypedComplex,
    *,
    induced: bool = False,
    truncated: bool = False,
    allowed: Iterable[str] = None,
    cross_edge_oracle: CrossEdgeOracle = None,
    limit: int = None,
    meta: Dict = None,
    with_diagnostics: bool = True,
) -> CheckReport:
    violations = validate(complex_)
    if violations:
        raise InvalidComplexError(
            f"Complex is not a valid B3 complex ({len(violations)} violations): {violations[0].message}",
            violations,
        )
    allowed = sorted(allowed) if allowed is not None else None

    results = check_conditions_1_to_4(
        complex_, allowed=allowed, truncated=truncated, cross_edge_oracle=cross_edge_oracle
    )
    results[5] = check_condition5(complex_, allowed=allowed, induced=induced, truncated=truncated, limit=limit)
    results[6] = check_condition6(complex_, allowed=allowed, induced=induced, limit=limit)

    v, e, f, chi = face_counts(complex_)
    report_meta = {
        "mode": "induced" if induced else "non-induced",
        "truncated": truncated,
        "vertices": v,
        "edges": e,
        "triangles": f,
        "euler_characteristic": chi,
        "checked_vertices": len(allowed) if allowed is not None else v,
    }
    report_meta.update(meta or {})
    return CheckReport(
        verdict=combine_statuses([r.status for r in results.values()]),
        conditions={str(c): results[c] for c in sorted(results)},
        diagnostics=diagnostics(complex_, allowed) if with_diagnostics else None,
        meta=report_meta,
    )


def format_report(report: CheckReport) -> str:
    """Human-readable rendering of a CheckReport"""
    marks = {ConditionStatus.PASS: "✅", ConditionStatus.FAIL: "❌", ConditionStatus.INCONCLUSIVE: "⚠️ "}
    lines = [f"CAT(1) criterion: {report.verdict.value.upper()} ({report.meta.get('mode', '')})"]
    for key, result in report.conditions.items():
        lines.append(f"{marks[result.status]} ({key}) {result.title}: {result.status.value} [{result.checked} checked]")
        for note in result.notes:
            lines.append(f"   {note}")
        for witness in result.witnesses:
            detail = f" {witness.detail}" if witness.detail else ""
            lines.append(f"   - {witness.kind}: {' '.join(witness.vertices)}{detail}")
    if report.diagnostics is not None:
        d = report.diagnostics
        lines.append(f"📊 flag complex: {d.flag}" + (f" (witness {' '.join(d.flag_witness)})" if d.flag_witness else ""))
        lines.append(f"📊 type-2 star intersections: {d.star_intersections}")
    return "\n".join(lines) + "\n"
