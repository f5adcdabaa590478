# app/services/verification.py
"""
The aggregate verification suite: finite data of the B3 simplex and C(B3),
Garside arithmetic against the rewriting oracle, phi and sigma, the image
criterion, joins, and the six conditions on balls of D(B3).

Every check returns a CheckOutcome; hard violations become FAIL outcomes
instead of escaping, so one bad check does not hide the others.
"""

import math
import random
from itertools import combinations
from typing import Callable, Dict, List

import networkx as nx

from app.core.console import detail, status
from app.core.errors import InjectivityViolationError, JoinViolationError
from app.schemas import (
    CheckOutcome,
    ConditionStatus,
    Outcome,
    RunConfig,
    VerificationReport,
    combine_statuses,
)
from app.services import artin_complex as ac
from app.services.cat1_checker import check_cat1_criteria, enumerate_short_triples, reduce_triples
from app.services.coxeter import coxeter_b3
from app.services.development import (
    antipode_preserves_types,
    developed_angle,
    lune_boundaries,
    star_gallery,
)
from app.services.garside import (
    artin_group,
    injectivity_sample,
    membership_discrepancies,
    oracle_discrepancies,
    phi,
    random_tokens,
    sigma,
)
from app.services.sphere_geom import b3_constants, geodesic_distance, shape_from_angles, triangle_area
from app.services.typed_complex import face_counts, link

JOIN_SAMPLES = 50
SIGMA_SAMPLES = 1000
LOWER_BOUND_SAMPLES = 20
PSI_SAMPLES = 50


def _outcome(name: str, failures: List[str], inconclusive: int = 0, counts: Dict[str, int] = None) -> CheckOutcome:
    if failures:
        check_status = ConditionStatus.FAIL
    elif inconclusive:
        check_status = ConditionStatus.INCONCLUSIVE
    else:
        check_status = ConditionStatus.PASS
    counts = dict(counts or {})
    counts["failures"] = len(failures)
    counts["inconclusive"] = inconclusive
    return CheckOutcome(name=name, status=check_status, counts=counts, detail=failures[:25])


# =================
# SIMPLEX AND COXETER COMPLEX
# =================


def check_constants() -> CheckOutcome:
    shape = b3_constants()
    failures = []
    printed = {"alpha": (shape.alpha, 0.615), "beta": (shape.beta, 0.955), "delta": (shape.delta, 0.785)}
    for label, (value, expected) in printed.items():
        if round(value, 3) != expected:
            failures.append(f"{label} = {value:.6f}, expected {expected}")
    if abs(shape.alpha + shape.beta - math.pi / 2) > 1e-12:
        failures.append("alpha + beta != pi/2")
    if abs(shape.delta - math.pi / 4) > 1e-12:
        failures.append("delta != pi/4")
    solved = shape_from_angles(math.pi / 4, math.pi / 2, math.pi / 3)
    for t in (1, 2, 3):
        if abs(solved.edge_length(t) - shape.edge_length(t)) > 1e-12:
            failures.append(f"law of cosines round trip differs on edge type {t}")
    return _outcome("constants", failures)


def check_tables() -> CheckOutcome:
    short = enumerate_short_triples()
    reduced = reduce_triples(short)
    failures = []
    if len(short) != 23:
        failures.append(f"{len(short)} short triples, expected 23")
    if len(reduced) != 15:
        failures.append(f"{len(reduced)} reduced triples, expected 15")
    return _outcome("tables", failures, counts={"short": len(short), "reduced": len(reduced)})


def check_coxeter_b3() -> CheckOutcome:
    target = coxeter_b3()
    cx = target.to_typed_complex()
    shape = b3_constants()
    failures = []

    if target.group.order != 48:
        failures.append(f"|W(B3)| = {target.group.order}")
    by_type = [len(cx.vertices(t)) for t in (1, 2, 3)]
    if by_type != [6, 12, 8]:
        failures.append(f"vertex counts by type {by_type}")
    v, e, f, chi = face_counts(cx)
    if (e, f, chi) != (72, 48, 2):
        failures.append(f"E, F, chi = {e}, {f}, {chi}")

    cycle_length = {1: 8, 2: 4, 3: 6}
    for vid in cx.vertices():
        graph = link(cx, vid)
        expected = cycle_length[cx.vertex_type(vid)]
        is_cycle = nx.is_connected(graph) and all(d == 2 for _, d in graph.degree())
        if not is_cycle or graph.number_of_nodes() != expected:
            failures.append(f"link of {vid} is not a {expected}-cycle")

    coords = target.coordinates
    for a, b in cx.skeleton.edges:
        length = geodesic_distance(coords[a], coords[b])
        if abs(length - shape.edge_length(cx.edge_type(a, b))) > 1e-9:
            failures.append(f"edge {a}-{b} has length {length}")
    area = 48 * triangle_area(shape.angle_s1, shape.angle_s2, shape.angle_s3)
    if abs(area - 4 * math.pi) > 1e-9:
        failures.append(f"48 triangles cover area {area}")

    report = check_cat1_criteria(cx, with_diagnostics=False)
    if report.verdict != ConditionStatus.PASS:
        failures.append(f"C(B3) criterion verdict {report.verdict.value}")
    return _outcome("coxeter_b3", failures, counts={"vertices": v, "edges": e, "triangles": f})


def check_development() -> CheckOutcome:
    target = coxeter_b3()
    cx = target.to_typed_complex()
    shape = b3_constants()
    failures = []

    center = cx.vertices(2)[0]
    angle = developed_angle(cx, star_gallery(cx, center), center)
    if abs(angle - 2 * math.pi) > 1e-9:
        failures.append(f"developed angle around {center} is {angle}")

    lunes = lune_boundaries(1, target)
    lengths = {round(lune.length, 9) for lune in lunes}
    via_three = [lune for lune in lunes if lune.path.types == (1, 3, 2, 3, 1)]
    via_two = [lune for lune in lunes if lune.path.types == (1, 2, 1, 2, 1)]
    if not via_three or abs(via_three[0].length - 2 * (shape.alpha + shape.beta)) > 1e-9:
        failures.append("no lune boundary of type pattern 1-3-2-3-1 with length 2(alpha+beta)")
    if not via_two or abs(via_two[0].length - 4 * shape.delta) > 1e-9:
        failures.append("no lune boundary of type pattern 1-2-1-2-1 with length 4 delta")
    if any(abs(length - math.pi) > 1e-9 for length in lengths):
        failures.append(f"lune lengths {sorted(lengths)} differ from pi")
    if not antipode_preserves_types(target):
        failures.append("the antipodal map does not preserve vertex types")
    return _outcome("development", failures, counts={"lunes_type1": len(lunes)})


# =================
# GARSIDE, PHI AND SIGMA
# =================


def check_normal_forms(max_len: int = 6) -> CheckOutcome:
    b3, a5 = artin_group("B3"), artin_group("A5")
    failures = []
    mismatches = oracle_discrepancies(b3, max_len)
    if mismatches:
        failures.append(f"{mismatches} disagreements with the rewriting closure up to length {max_len}")
    misplaced = membership_discrepancies(b3, 3)
    if misplaced:
        failures.append(f"{misplaced} elements where parabolic membership disagrees with the parabolic ball")
    if b3.coxeter.order != 48 or a5.coxeter.order != 720:
        failures.append(f"simple counts {b3.coxeter.order} and {a5.coxeter.order}")
    return _outcome("normal_forms", failures, counts={"max_len": max_len, "simples_a5": a5.coxeter.order})


def check_phi(max_len: int = 3) -> CheckOutcome:
    b3 = artin_group("B3")
    relations = [("s1 s2 s1", "s2 s1 s2"), ("s2 s3 s2 s3", "s3 s2 s3 s2"), ("s1 s3", "s3 s1")]
    failures = []
    for lhs, rhs in relations:
        if phi(b3.parse(lhs)) != phi(b3.parse(rhs)):
            failures.append(f"phi({lhs}) != phi({rhs})")
    counts = {}
    try:
        sample = injectivity_sample(max_len, b3)
        counts = sample.model_dump()
    except InjectivityViolationError as e:
        failures.append(str(e))
    return _outcome("phi", failures, counts=counts)


def check_sigma(a5_ball: ac.BallComplex, rng: random.Random, search_radius: int) -> CheckOutcome:
    a5 = a5_ball.group
    failures = []
    for _ in range(SIGMA_SAMPLES):
        g = a5.from_tokens(random_tokens(a5, rng.randint(0, 6), rng))
        if sigma(sigma(g)) != g:
            failures.append(f"sigma is not an involution on {g}")
    for vid, v in sorted(a5_ball.vertices.items()):
        if not ac.coset_equal(ac.sigma_vertex(ac.sigma_vertex(v)), v):
            failures.append(f"sigma is not an involution on vertex {vid}")

    pairs = 0
    for u, w in a5_ball.poset_edges():
        h = a5_ball.chambers[a5_ball.shared_chambers(u, w)[0]]
        su = ac.sigma_vertex(a5_ball.vertices[u])
        sw = ac.sigma_vertex(a5_ball.vertices[w])
        pairs += 1
        if not (sw.vtype < su.vtype and su.contains(sigma(h)) and sw.contains(sigma(h))):
            failures.append(f"sigma does not reverse {u} <= {w}")
    return _outcome("sigma", failures, counts={"samples": SIGMA_SAMPLES, "reversed_pairs": pairs})


def check_psi(b3_ball: ac.BallComplex, rng: random.Random) -> CheckOutcome:
    failures = []
    buckets: Dict = {}
    for vid, v in sorted(b3_ball.vertices.items()):
        image = ac.psi_vertex(v)
        buckets.setdefault(ac._w_key(image), []).append((vid, image))
    for entries in buckets.values():
        for (a, ia), (b, ib) in combinations(entries, 2):
            if ac.coset_equal(ia, ib):
                failures.append(f"psi identifies {a} and {b}")

    sampled = rng.sample(sorted(b3_ball.vertices), min(PSI_SAMPLES, len(b3_ball.vertices)))
    for vid in sampled:
        v = b3_ball.vertices[vid]
        image = ac.psi_vertex(v)
        for h in ac.parabolic_ball("B3", v.vtype, 1):
            moved = ac.psi_vertex(ac.CosetVertex(v.rep * h, v.vtype))
            if not ac.coset_equal(moved, image):
                failures.append(f"psi of {vid} depends on the representative")

    for u, w in b3_ball.poset_edges():
        h = phi(b3_ball.chambers[b3_ball.shared_chambers(u, w)[0]])
        if not (ac.psi_vertex(b3_ball.vertices[u]).contains(h) and ac.psi_vertex(b3_ball.vertices[w]).contains(h)):
            failures.append(f"psi does not preserve {u} <= {w}")
    return _outcome("psi", failures, counts={"vertices": len(b3_ball.vertices)})


def check_image_criterion(b3_ball: ac.BallComplex, a5_ball: ac.BallComplex, search_radius: int) -> CheckOutcome:
    failures = []
    inconclusive = 0
    forward = 0
    for vid, v in sorted(b3_ball.vertices.items()):
        result = ac.check_image_forward(v, search_radius)
        forward += 1
        if result.outcome == Outcome.VIOLATION:
            failures.append(f"forward direction fails at psi({vid}): {result.reason}")
        elif result.outcome == Outcome.INCONCLUSIVE:
            failures.append(f"forward direction not witnessed at psi({vid})")

    consistent = 0
    for vid, v in sorted(a5_ball.vertices.items()):
        result = ac.check_lessiffimage(v, search_radius)
        if result.outcome == Outcome.VIOLATION:
            failures.append(f"reverse direction fails at {vid}: {result.reason}")
        elif result.outcome == Outcome.INCONCLUSIVE:
            inconclusive += 1
        else:
            consistent += 1
    return _outcome(
        "image_criterion",
        failures,
        inconclusive,
        counts={"forward_checked": forward, "reverse_consistent": consistent},
    )


def harvest_lower_bound_triples(
    a5_ball: ac.BallComplex, search_radius: int, limit: int = LOWER_BOUND_SAMPLES, per_apex: int = 3
) -> List[tuple]:
    """Type-3 triples, pairwise lower bounded, with no type-2 vertex of the ball sharing a chamber with all three"""
    lower: Dict[str, set] = {}
    for row in a5_ball.chamber_vertices:
        lower.setdefault(row[2], set()).add(row[1])

    def bounded(y: str, z: str) -> bool:
        if lower[y] & lower[z]:
            return True
        vertices = a5_ball.vertices
        return any(
            ac.poset_leq(vertices[w], vertices[other], search_radius, a5_ball) is True
            for w, other in [(w, z) for w in sorted(lower[y])] + [(w, y) for w in sorted(lower[z])]
        )

    triples = []
    for x in sorted(lower):
        near = sorted(y for y in lower if y != x and lower[x] & lower[y])
        found = 0
        for y, z in combinations(near, 2):
            if lower[x] & lower[y] & lower[z] or not bounded(y, z):
                continue
            triples.append((x, y, z))
            found += 1
            if found >= per_apex or len(triples) >= limit:
                break
        if len(triples) >= limit:
            break
    return triples


def check_lower_bounds(a5_ball: ac.BallComplex, search_radius: int) -> CheckOutcome:
    instances = harvest_lower_bound_triples(a5_ball, search_radius)
    if not instances:
        return _outcome("lower_bounds", [], 1, counts={"instances": 0})

    failures = []
    inconclusive = 0
    consistent = 0
    for triple in instances:
        result = ac.check_jingyin_instance(*triple, a5_ball, search_radius)
        if result.outcome == Outcome.VIOLATION:
            failures.append(f"{triple}: {result.reason}")
        elif result.outcome == Outcome.INCONCLUSIVE:
            inconclusive += 1
        else:
            consistent += 1
    return _outcome(
        "lower_bounds", failures, inconclusive, counts={"instances": len(instances), "consistent": consistent}
    )


# =================
# BALLS OF D(B3)
# =================


def harvest_upper_bounded_sets(ball: ac.BallComplex, max_depth: int, cap: int = 400) -> Dict[str, List[tuple]]:
    """Pairs from a type-3 vertex and the vertices below it, triples from below it alone"""
    sets: Dict[str, set] = {"pairs": set(), "triples": set()}
    for c in ball.vertex_ids(3):
        if ball.depth(c) > max_depth:
            continue
        below = sorted({v for k in ball.members[c] for v in ball.chamber_vertices[k]} - {c})
        if len(sets["pairs"]) < cap:
            sets["pairs"].update(combinations(sorted(below + [c]), 2))
        if len(sets["triples"]) < cap:
            sets["triples"].update(combinations(below, 3))
    return {kind: sorted(found) for kind, found in sets.items()}


def check_joins(ball: ac.BallComplex, rng: random.Random, search_radius: int) -> CheckOutcome:
    harvested = harvest_upper_bounded_sets(ball, ball.radius - 1)
    memo: Dict = {}
    failures = []
    inconclusive = 0
    counts: Dict[str, int] = {}
    for kind, found in harvested.items():
        sampled = sorted(rng.sample(found, min(JOIN_SAMPLES, len(found))))
        joined = 0
        for vertex_set in sampled:
            try:
                result = ac.join_in_ball(vertex_set, ball, search_radius, memo)
            except JoinViolationError as e:
                failures.append(str(e))
                continue
            if result.status == "join":
                joined += 1
            else:
                inconclusive += 1
        counts[f"{kind}_sets"] = len(sampled)
        counts[f"{kind}_joins"] = joined
    counts["sets"] = sum(counts[f"{kind}_sets"] for kind in harvested)
    counts["joins"] = sum(counts[f"{kind}_joins"] for kind in harvested)
    return _outcome("joins", failures, inconclusive, counts=counts)


def check_ball_conditions(ball: ac.BallComplex, margin: int = 2) -> CheckOutcome:
    report = ac.ball_report(ball, margin)
    failures = []
    inconclusive = 0
    counts = {"interior_vertices": report.meta.get("checked_vertices", 0)}
    for key, result in report.conditions.items():
        counts[f"condition_{key}_checked"] = result.checked
        if result.status == ConditionStatus.FAIL:
            failures.extend(f"({key}) {w.kind}: {' '.join(w.vertices)}" for w in result.witnesses)
        elif result.status == ConditionStatus.INCONCLUSIVE:
            inconclusive += 1
    counts["cross_edges_completed"] = report.conditions["3"].certified
    return _outcome("ball_conditions", failures, inconclusive, counts=counts)


# =================
# SUITE
# =================


def run_verification(run: RunConfig) -> VerificationReport:
    rng = random.Random(run.seed)
    status(f"Verification suite, seed {run.seed}", "start")

    b3_large = ac.build_ball("B3", run.radius_b3 + 1)
    b3_small = ac.build_ball("B3", min(2, run.radius_b3 + 1))
    a5 = ac.build_ball("A5", run.radius_a5)

    plan: List[Callable[[], CheckOutcome]] = [
        check_constants,
        check_tables,
        check_coxeter_b3,
        check_development,
        check_normal_forms,
        check_phi,
        lambda: check_sigma(a5, rng, run.search_radius),
        lambda: check_psi(b3_small, rng),
        lambda: check_image_criterion(b3_small, a5, run.search_radius),
        lambda: check_lower_bounds(a5, run.search_radius),
        lambda: check_joins(b3_large, rng, run.search_radius),
        lambda: check_ball_conditions(b3_large),
    ]

    checks = []
    for step in plan:
        outcome = step()
        level = {"pass": "ok", "fail": "fail", "inconclusive": "warn"}[outcome.status.value]
        status(f"{outcome.name}: {outcome.status.value}", level)
        for line in outcome.detail[:3]:
            detail(line)
        checks.append(outcome)

    return VerificationReport(
        verdict=combine_statuses([c.status for c in checks]),
        checks=checks,
        config=run.model_dump(mode="json"),
    )


def format_verification(report: VerificationReport) -> str:
    marks = {ConditionStatus.PASS: "✅", ConditionStatus.FAIL: "❌", ConditionStatus.INCONCLUSIVE: "⚠️ "}
    lines = [f"Verification: {report.verdict.value.upper()}"]
    for check in report.checks:
        counts = ", ".join(f"{k}={v}" for k, v in sorted(check.counts.items()))
        lines.append(f"{marks[check.status]} {check.name}: {check.status.value} ({counts})")
        lines.extend(f"   - {line}" for line in check.detail)
    return "\n".join(lines) + "\n"
