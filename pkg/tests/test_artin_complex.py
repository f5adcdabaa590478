import json

import pytest

from app.core.errors import BallCapExceededError, JoinViolationError
from app.schemas import ConditionStatus, Outcome
from app.services import artin_complex
from app.services.artin_complex import (
    CosetVertex,
    ball_report,
    build_ball,
    check_image_forward,
    check_jingyin_instance,
    check_lessiffimage,
    complete_cross_edge,
    coset_equal,
    export_ball,
    find_intersection,
    find_preimage,
    join_in_ball,
    poset_leq,
    psi_vertex,
    shadows_meet,
    sigma_vertex,
)
from app.services.garside import sigma
from app.services.typed_complex import validate


def _v(group, word, vtype):
    return CosetVertex(group.parse(word) if word else group.identity(), vtype)


def test_coset_equality(b3):
    assert coset_equal(_v(b3, "", 1), _v(b3, "s2", 1))
    assert coset_equal(_v(b3, "", 1), _v(b3, "s3^-1 s2", 1))
    assert not coset_equal(_v(b3, "", 1), _v(b3, "s1", 1))
    assert not coset_equal(_v(b3, "", 1), _v(b3, "", 2))
    assert not coset_equal(_v(b3, "s1", 1), _v(b3, "s1^-1", 1))


def test_coset_membership(b3):
    vertex = _v(b3, "s1", 2)
    assert vertex.contains(b3.parse("s1 s3^-1 s1"))
    assert not vertex.contains(b3.parse("s1 s2"))


def test_small_balls(ball_b3_r1, ball_b3_r2):
    zero = build_ball("B3", 0)
    assert len(zero.chambers) == 1
    assert zero.vertex_ids() == ["v1_0", "v2_0", "v3_0"]

    assert len(ball_b3_r1.chambers) == 7
    assert len(ball_b3_r1.vertices) == 9
    assert len(ball_b3_r2.chambers) == 33
    assert validate(ball_b3_r2.typed_complex()) == []


def test_ball_ids_are_stable(ball_b3_r1):
    again = build_ball("B3", 1)
    assert again.chamber_vertices == ball_b3_r1.chamber_vertices
    assert again.vertex_ids() == ball_b3_r1.vertex_ids()


def test_ball_vertices_are_distinct_cosets(ball_b3_r2):
    ids = ball_b3_r2.vertex_ids(1)
    for i, u in enumerate(ids):
        for w in ids[i + 1:]:
            assert not coset_equal(ball_b3_r2.vertices[u], ball_b3_r2.vertices[w])


def test_ball_depth_and_interior(ball_b3_r1):
    assert ball_b3_r1.interior(1) == ["v1_0", "v2_0", "v3_0"]
    assert all(ball_b3_r1.depth(v) <= 1 for v in ball_b3_r1.vertex_ids())


def test_ball_cap_and_radius():
    with pytest.raises(BallCapExceededError):
        build_ball("B3", 2, cap=10)
    with pytest.raises(BallCapExceededError):
        build_ball("B3", -1)


def test_export(ball_a5_r1):
    text, words = export_ball(build_ball("B3", 0))
    assert "t v1_0 v2_0 v3_0" in text.splitlines()
    assert json.loads(words)["v2_0"]["word"] == "e"

    text, words = export_ball(ball_a5_r1)
    lines = text.splitlines()
    assert not any(line.startswith("t ") for line in lines)
    assert sum(line.startswith("v ") for line in lines) == 15
    assert any(line.startswith("e ") for line in lines)
    assert len(json.loads(words)) == 15


def test_poset_order(b3):
    assert poset_leq(_v(b3, "", 1), _v(b3, "", 2)) is True
    assert poset_leq(_v(b3, "", 2), _v(b3, "", 1)) is False
    assert poset_leq(_v(b3, "s2", 1), _v(b3, "", 1)) is True
    assert poset_leq(_v(b3, "s1", 1), _v(b3, "", 1)) is False


def test_disjoint_shadows_refute_order(b3):
    # the antipode of a type-1 vertex of C(B3) is not adjacent to the base type-3 vertex
    far = CosetVertex(b3.make(0, (b3.delta,)), 1)
    base = _v(b3, "", 3)
    assert not shadows_meet(far, base)
    assert poset_leq(far, base) is False
    assert not shadows_meet(_v(b3, "", 1), _v(b3, "s1", 1))


def test_find_intersection(b3):
    v1, v2 = _v(b3, "s1", 1), _v(b3, "s3", 3)
    h = find_intersection(v1, v2)
    assert h is not None
    assert v1.contains(h) and v2.contains(h)
    assert poset_leq(v1, v2) is True


def test_join_of_generator_vertices(ball_b3_r1):
    result = join_in_ball(["v1_0", "v2_0"], ball_b3_r1)
    assert result.status == "join"
    assert result.join == "v2_0"
    result = join_in_ball(["v1_0", "v3_0"], ball_b3_r1)
    assert result.join == "v3_0"


def test_join_of_two_type_one_vertices(b3, ball_b3_r1):
    other = ball_b3_r1.find_class(_v(b3, "s1", 1))
    assert other is not None and other != "v1_0"
    result = join_in_ball(["v1_0", other], ball_b3_r1)
    assert result.status == "join"
    assert result.join == "v2_0"


def test_join_of_two_type_two_vertices(b3, ball_b3_r1):
    other = ball_b3_r1.find_class(_v(b3, "s2", 2))
    assert other is not None and other != "v2_0"
    result = join_in_ball(["v2_0", other], ball_b3_r1)
    assert result.status == "join"
    assert result.join == "v3_0"


class _ToyBall:
    name = "B3"

    def __init__(self, types):
        self.types = types

    def vertex_ids(self):
        return sorted(self.types)

    def vertex_type(self, vid):
        return self.types[vid]


def _toy_order(pairs, unknown=()):
    def leq(ball, a, b, search_radius, memo):
        if a == b:
            return True
        if (a, b) in unknown:
            return None
        return (a, b) in pairs
    return leq


def test_join_violation_when_forced_join_is_not_below_another_bound(monkeypatch):
    ball = _ToyBall({"x1": 1, "x2": 1, "u": 2, "w": 3})
    below = {("x1", "u"), ("x2", "u"), ("x1", "w"), ("x2", "w")}
    monkeypatch.setattr(artin_complex, "_leq_ids", _toy_order(below))
    with pytest.raises(JoinViolationError):
        join_in_ball(["x1", "x2"], ball)


def test_unknown_order_between_bounds_stays_inconclusive(monkeypatch):
    ball = _ToyBall({"x1": 1, "x2": 1, "u": 2, "w": 3})
    below = {("x1", "u"), ("x2", "u"), ("x1", "w"), ("x2", "w")}
    monkeypatch.setattr(artin_complex, "_leq_ids", _toy_order(below, unknown={("u", "w")}))
    result = join_in_ball(["x1", "x2"], ball)
    assert result.status == "inconclusive"
    assert result.minimal == ["u", "w"]

    monkeypatch.setattr(artin_complex, "_leq_ids", _toy_order(below | {("u", "w")}))
    result = join_in_ball(["x1", "x2"], ball)
    assert result.status == "join"
    assert result.join == "u"


def test_psi_and_sigma_vertices(b3, a5):
    image = psi_vertex(_v(b3, "s1", 2))
    assert image.vtype == 2
    assert image.rep == a5.parse("t1 t5")
    mirror = sigma_vertex(_v(a5, "t2", 1))
    assert mirror.vtype == 5
    assert mirror.rep == a5.generator("t4")


def test_sigma_reverses_the_order(ball_a5_r1):
    edges = ball_a5_r1.poset_edges()
    assert edges
    for u, w in edges:
        h = ball_a5_r1.chambers[ball_a5_r1.shared_chambers(u, w)[0]]
        su = sigma_vertex(ball_a5_r1.vertices[u])
        sw = sigma_vertex(ball_a5_r1.vertices[w])
        assert su.vtype == 6 - ball_a5_r1.vertex_type(u)
        assert sw.vtype < su.vtype
        assert su.contains(sigma(h)) and sw.contains(sigma(h))
        assert poset_leq(su, sw) is False
        assert poset_leq(sw, su, 1) is not False



def test_image_forward(b3):
    for word in ("", "s1", "s2 s3^-1", "s3 s1 s2"):
        for t in (1, 2, 3):
            check = check_image_forward(_v(b3, word, t))
            assert check.outcome == Outcome.CONSISTENT
            assert check.leq is True


def test_lessiffimage(a5, b3):
    assert find_preimage(_v(a5, "t1 t5", 2)) is not None
    image = check_lessiffimage(_v(a5, "", 2))
    assert image.outcome == Outcome.CONSISTENT
    assert image.in_image is True and image.leq is True
    outside = check_lessiffimage(_v(a5, "", 5))
    assert outside.outcome == Outcome.CONSISTENT
    assert outside.in_image is False and outside.leq is False


def test_lower_bound_instance(ball_a5_r1):
    tops = ball_a5_r1.vertex_ids(3)
    assert len(tops) == 3
    check = check_jingyin_instance(*tops, ball_a5_r1)
    assert check.outcome == Outcome.CONSISTENT
    assert ball_a5_r1.vertex_type(check.witness) in (1, 2, 3)
    wrong = check_jingyin_instance("v1_0", tops[1], tops[2], ball_a5_r1)
    assert wrong.outcome == Outcome.INCONCLUSIVE


def test_lower_bound_instance_needs_a_search(a5, ball_a5_r2):
    x = "v3_0"
    y = ball_a5_r2.find_class(_v(a5, "t2 t3", 3))
    z = ball_a5_r2.find_class(_v(a5, "t3", 3))
    assert None not in (y, z) and len({x, y, z}) == 3
    # t3 t2 hat-t2 lies below y only through the chamber t2 t3 t2, outside the ball
    w = ball_a5_r2.find_class(_v(a5, "t3 t2", 2))
    assert not ball_a5_r2.shared_chambers(w, y)
    assert poset_leq(ball_a5_r2.vertices[w], ball_a5_r2.vertices[y], 2) is True
    check = check_jingyin_instance(x, y, z, ball_a5_r2, 2)
    assert check.outcome == Outcome.CONSISTENT
    assert ball_a5_r2.vertex_type(check.witness) in (1, 2)


def test_cross_edges_complete_around_base_vertex(ball_b3_r2):
    m = "v2_0"
    chambers = ball_b3_r2.members[m]
    sides = {1: set(), 3: set()}
    for c in chambers:
        for vid in ball_b3_r2.chamber_vertices[c]:
            t = ball_b3_r2.vertex_type(vid)
            if t in sides:
                sides[t].add(vid)
    assert len(sides[1]) == 5 and len(sides[3]) == 5
    for a in sides[1]:
        for c in sides[3]:
            h = complete_cross_edge(ball_b3_r2, m, a, c)
            assert h is not None
            assert all(ball_b3_r2.vertices[v].contains(h) for v in (m, a, c))


def test_ball_report_has_no_failures(ball_b3_r2):
    report = ball_report(ball_b3_r2, 1)
    assert report.verdict != ConditionStatus.FAIL
    assert report.meta["truncated"] is True
    assert report.meta["checked_vertices"] == len(ball_b3_r2.interior(1))
    assert report.conditions["3"].status != ConditionStatus.FAIL
    # girth and decagon checks only see subgraphs of the true links, so they are definite
    for condition in ("2", "4", "6"):
        assert report.conditions[condition].status == ConditionStatus.PASS


def test_ball_report_fills_every_interior_cycle(ball_b3_r4):
    report = ball_report(ball_b3_r4, 2)
    five = report.conditions["5"]
    assert five.status == ConditionStatus.PASS
    assert five.inconclusive == 0
    assert any(note.startswith("hexagon:") and not note.startswith("hexagon: 0/") for note in five.notes)
    assert report.conditions["6"].status == ConditionStatus.PASS
    assert report.verdict != ConditionStatus.FAIL

