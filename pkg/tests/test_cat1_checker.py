import math

import pytest

from app.core.errors import InvalidComplexError, InvalidPatternError, MissingFillingError
from app.schemas import ConditionStatus
from app.services.cat1_checker import (
    SQUARE,
    Triple,
    bypass_move,
    check_cat1_criteria,
    check_conditions_1_to_4,
    check_condition5,
    enumerate_short_triples,
    fill_hexagon,
    find_filling,
    format_report,
    normalize_edge_path,
    reduce_triples,
)
from app.services.typed_complex import EdgePath, TypedComplex, embedded_cycles, link, make_path
from app.utils.complex_io import read_complex


def _failing(report):
    return sorted(key for key, result in report.conditions.items() if result.status == ConditionStatus.FAIL)


def test_short_triples():
    short = enumerate_short_triples()
    assert len(short) == 23
    assert Triple(0, 0, 3) in short
    assert Triple(0, 0, 3).weighted_sum() == pytest.approx(3 * math.pi / 4)
    assert Triple(0, 0, 4) not in short
    reduced = reduce_triples(short)
    assert len(reduced) == 15
    assert Triple(2, 0, 0) not in reduced
    assert Triple(0, 0, 2) not in reduced
    assert all(not (t.n_alpha and t.n_delta and not t.n_beta) for t in reduced)


def test_coxeter_b3_passes(cb3_complex):
    report = check_cat1_criteria(cb3_complex)
    assert report.verdict == ConditionStatus.PASS
    assert set(report.conditions) == {"1", "2", "3", "4", "5", "6"}
    assert report.meta["euler_characteristic"] == 2
    assert report.diagnostics.flag
    assert report.diagnostics.star_intersections["other"] == 0


@pytest.mark.parametrize(
    "name,failing,kind",
    [
        ("one_simplex.cplx", ["3"], "no_four_cycle"),
        ("bad_girth.cplx", ["2"], "short_link_cycle"),
        ("bad_bipartite.cplx", ["3"], "missing_cross_edge"),
        ("bad_filling.cplx", ["5"], "unfilled_square"),
    ],
)
def test_fixtures_fail_one_condition(fixtures_dir, name, failing, kind):
    report = check_cat1_criteria(read_complex(fixtures_dir / name))
    assert report.verdict == ConditionStatus.FAIL
    assert _failing(report) == failing
    witnesses = report.conditions[failing[0]].witnesses
    assert kind in {w.kind for w in witnesses}
    assert "FAIL" in format_report(report)


def test_missing_cross_edge_witness(fixtures_dir):
    report = check_cat1_criteria(read_complex(fixtures_dir / "bad_bipartite.cplx"))
    (witness,) = report.conditions["3"].witnesses
    assert witness.vertices == ["m", "a1", "c2"]


def test_cross_edge_oracle_softens_or_certifies(fixtures_dir):
    cx = read_complex(fixtures_dir / "bad_bipartite.cplx")
    unknown = check_conditions_1_to_4(cx, truncated=True)
    assert unknown[3].status == ConditionStatus.INCONCLUSIVE
    certified = check_conditions_1_to_4(cx, truncated=True, cross_edge_oracle=lambda m, a, c: True)
    assert certified[3].status == ConditionStatus.PASS
    assert certified[3].certified == 1
    refuted = check_conditions_1_to_4(cx, truncated=True, cross_edge_oracle=lambda m, a, c: False)
    assert refuted[3].status == ConditionStatus.FAIL


def test_invalid_complex_is_rejected():
    cx = TypedComplex({"a": 1, "b": 1, "c": 3}, [("a", "b", "c")])
    with pytest.raises(InvalidComplexError) as excinfo:
        check_cat1_criteria(cx)
    assert excinfo.value.violations


def test_allowed_restricts_the_check(cb3_complex):
    allowed = cb3_complex.vertices(2)[:1]
    report = check_cat1_criteria(cb3_complex, allowed=allowed, truncated=True, with_diagnostics=False)
    assert report.conditions["1"].checked == 1
    assert report.conditions["2"].checked == 0
    assert report.diagnostics is None


def _corner(cx):
    m = cx.vertices(2)[0]
    ring = link(cx, m)
    a = min(ring.nodes, key=lambda v: (cx.vertex_type(v), v))
    c = sorted(ring.neighbors(a))[0]
    return m, a, c


def test_normalize_replaces_corner(cb3_complex):
    m, a, c = _corner(cb3_complex)
    path = make_path(cb3_complex, [a, m, c])
    assert normalize_edge_path(cb3_complex, path).vertices == (a, c)


def test_normalize_needs_the_triangle():
    cx = TypedComplex(
        {"a": 1, "m": 2, "c": 3, "c2": 3, "a2": 1},
        [("a", "m", "c2"), ("a2", "m", "c")],
    )
    path = EdgePath(("a", "m", "c"), (1, 2, 3))
    with pytest.raises(MissingFillingError):
        normalize_edge_path(cx, path)


def test_bypass_move_through_square(cb3_complex):
    m = cb3_complex.vertices(2)[0]
    c1, c2 = cb3_complex.neighbors(m, 3)
    moved = bypass_move(cb3_complex, make_path(cb3_complex, [c1, m, c2]), 1)
    assert moved.types == (3, 1, 3)
    assert moved.vertices[1] in link(cb3_complex, m)
    back = bypass_move(cb3_complex, moved, 1)
    assert back.types == (3, 2, 3)
    with pytest.raises(InvalidPatternError):
        bypass_move(cb3_complex, make_path(cb3_complex, [c1, m, c2]), 0)


def test_square_fillings_in_coxeter_b3(cb3_complex):
    for cycle in embedded_cycles(cb3_complex, SQUARE):
        filling = find_filling(cb3_complex, cycle, "square")
        assert filling is not None
        assert cb3_complex.vertex_type(filling.fill["center"]) == 2


def _chorded_hexagon():
    # hexagon b0 a0 b1 a1 b2 a2 with the chord b0-a1, each side filled by a square
    types = {"b0": 3, "b1": 3, "b2": 3, "a0": 1, "a1": 1, "a2": 1, "m1": 2, "m2": 2}
    triangles = [
        ("m1", "b0", "a0"), ("m1", "a0", "b1"), ("m1", "b1", "a1"), ("m1", "a1", "b0"),
        ("m2", "b0", "a1"), ("m2", "a1", "b2"), ("m2", "b2", "a2"), ("m2", "a2", "b0"),
    ]
    return TypedComplex(types, triangles)


def test_chorded_hexagon_splits_into_squares():
    cx = _chorded_hexagon()
    cycle = ["b0", "a0", "b1", "a1", "b2", "a2"]
    filling = fill_hexagon(cx, cycle)
    assert filling is not None
    assert filling.fill == {"chord": "b0-a1", "center": "m1", "center2": "m2"}
    assert fill_hexagon(cx, cycle, induced=True) is None

    result = check_condition5(cx)
    assert result.status == ConditionStatus.PASS
    assert "hexagon: 1/1 filled" in result.notes
    assert "square: 2/2 filled" in result.notes
