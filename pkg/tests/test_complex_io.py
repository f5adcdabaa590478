import pytest

from app.core.errors import ComplexFormatError
from app.services.sphere_geom import SpherePoint
from app.utils.complex_io import dump_complex, format_coordinates, parse_complex, read_complex, sidecar_path

TEXT = """
# a single triangle, records in any order
t c a m   # trailing comment
v m 2
v a 1
v c 3
"""


def test_parse_ignores_comments_and_order():
    cx = parse_complex(TEXT)
    assert cx.vertex_types == {"a": 1, "m": 2, "c": 3}
    assert cx.triangles == [("a", "c", "m")]


def test_dump_is_sorted_and_rereadable():
    text = dump_complex(parse_complex(TEXT), header="one triangle")
    assert text.splitlines() == ["# one triangle", "v a 1", "v c 3", "v m 2", "t a c m"]
    assert dump_complex(parse_complex(text)) == dump_complex(parse_complex(TEXT))


@pytest.mark.parametrize(
    "text,line",
    [("v a 1\nv b\n", 2), ("v a x\n", 1), ("v a 1\nt a b\n", 2), ("\n\ne a\n", 3), ("z a b\n", 1)],
)
def test_format_errors_carry_line_numbers(text, line):
    with pytest.raises(ComplexFormatError) as excinfo:
        parse_complex(text)
    assert excinfo.value.line_number == line
    assert f"line {line}" in str(excinfo.value)


def test_read_missing_file(tmp_path):
    with pytest.raises(ComplexFormatError):
        read_complex(tmp_path / "missing.cplx")


def test_sidecar_and_coordinates(tmp_path):
    assert sidecar_path(tmp_path / "out.cplx", ".coords.json").name == "out.cplx.coords.json"
    text = format_coordinates({"v2_e": SpherePoint(0.0, 0.0, 1.0)})
    assert '"v2_e"' in text
