import json

import pytest

from app.main import main
from app.utils.complex_io import read_complex


def test_tables_json(capsys):
    assert main(["tables", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["short_triples"]) == 23
    assert len(payload["reduced_triples"]) == 15


def test_tables_text(capsys):
    assert main(["tables"]) == 0
    out = capsys.readouterr().out
    assert "Short triples (23):" in out
    assert "Reduced triples (15):" in out


def test_coxeter_writes_complex_and_coordinates(tmp_path):
    target = tmp_path / "cb3.cplx"
    assert main(["coxeter", "B3", "-o", str(target)]) == 0
    lines = target.read_text().splitlines()
    assert sum(line.startswith("v ") for line in lines) == 26
    assert sum(line.startswith("t ") for line in lines) == 48
    coords = json.loads((tmp_path / "cb3.cplx.coords.json").read_text())
    assert len(coords) == 26

    # the written file checks clean
    assert main(["check", str(target)]) == 0


def test_coxeter_rank_two_uses_edges(capsys):
    assert main(["coxeter", "a2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("e ") for line in lines) == 6
    assert not any(line.startswith("t ") for line in lines)


@pytest.mark.parametrize("argv", [["coxeter", "F4"], ["coxeter", "A4"], ["word", "B3", "x9"], ["ball", "B3", "-1"]])
def test_invalid_input_exit_code(argv):
    assert main(argv) == 3


@pytest.mark.parametrize("argv", [[], ["check"], ["lunes", "4"], ["ball", "B3", "two"]])
def test_usage_errors_exit_with_invalid_input(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    assert excinfo.value.code == 3


@pytest.mark.parametrize(
    "name,code",
    [("one_simplex.cplx", 1), ("bad_girth.cplx", 1), ("bad_bipartite.cplx", 1), ("bad_filling.cplx", 1)],
)
def test_check_fixtures(fixtures_dir, name, code):
    assert main(["check", str(fixtures_dir / name)]) == code


def test_check_json_report(fixtures_dir, capsys):
    assert main(["check", "--json", str(fixtures_dir / "bad_girth.cplx")]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "fail"
    assert report["conditions"]["2"]["status"] == "fail"
    assert report["conditions"]["1"]["status"] == "pass"


def test_check_missing_and_malformed_files(tmp_path):
    assert main(["check", str(tmp_path / "absent.cplx")]) == 3
    broken = tmp_path / "broken.cplx"
    broken.write_text("v a 1\nq what\n")
    assert main(["check", str(broken)]) == 3
    mistyped = tmp_path / "mistyped.cplx"
    mistyped.write_text("v a 1\nv b 1\nv c 3\nt a b c\n")
    assert main(["check", str(mistyped)]) == 3


def test_ball_export(tmp_path, capsys):
    assert main(["ball", "B3", "0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line for line in lines if line.startswith("t ")] == ["t v1_0 v2_0 v3_0"]

    target = tmp_path / "a5.cplx"
    assert main(["ball", "A5", "1", "-o", str(target)]) == 0
    assert not any(line.startswith("t ") for line in target.read_text().splitlines())
    words = json.loads((tmp_path / "a5.cplx.words.json").read_text())
    assert len(words) == 15


def test_ball_export_round_trips_through_reader(tmp_path):
    target = tmp_path / "b3.cplx"
    assert main(["ball", "B3", "1", "-o", str(target)]) == 0
    complex_ = read_complex(target)
    assert len(complex_) == 9
    assert len(complex_.triangles) == 7


def test_ball_check(capsys):
    code = main(["ball", "B3", "2", "--check", "--margin", "1", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code != 1
    assert report["verdict"] != "fail"
    assert report["meta"]["mode"] == "non-induced"
    for condition in ("2", "4", "6"):
        assert report["conditions"][condition]["status"] == "pass"


def test_ball_check_induced(capsys):
    code = main(["ball", "B3", "2", "--check", "--margin", "1", "--induced", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code != 1
    assert report["meta"]["mode"] == "induced"
    assert report["conditions"]["6"]["status"] == "pass"


def test_word(capsys):
    assert main(["word", "B3", "s1", "s2", "s3^-1", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["element"]["reduced"] == "s1 s2 s3^-1"
    assert payload["phi"]["group"] == "A5"

    assert main(["word", "A5", "t1", "t1^-1"]) == 0
    assert "element in A(A5): e" in capsys.readouterr().out


def test_lunes(capsys):
    assert main(["lunes", "1", "--json"]) == 0
    lunes = json.loads(capsys.readouterr().out)
    assert lunes
    assert all(lune["types"][0] == lune["types"][-1] == 1 for lune in lunes)


def test_verify_small_radii(capsys):
    code = main(["verify-paper", "--radius-b3", "0", "--radius-a5", "1", "--search-radius", "1", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["verdict"] in ("pass", "inconclusive")
    names = [check["name"] for check in report["checks"]]
    assert names[:4] == ["constants", "tables", "coxeter_b3", "development"]
    assert all(check["status"] != "fail" for check in report["checks"])


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert "cat1" in capsys.readouterr().out


def test_check_report_is_byte_identical_across_runs(fixtures_dir, capsys):
    outputs = []
    for _ in range(2):
        main(["check", "--json", str(fixtures_dir / "bad_filling.cplx")])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
    assert outputs[0].strip()


def test_verify_paper_rerun_with_same_seed_is_byte_identical(tmp_path):
    target = tmp_path / "report.json"
    argv = ["verify-paper", "--seed", "3", "--radius-b3", "0", "--radius-a5", "1", "--search-radius", "1", "--json"]
    assert main(argv + ["-o", str(target)]) == 0
    first = target.read_bytes()
    assert main(argv + ["-o", str(target)]) == 0
    assert target.read_bytes() == first
    assert json.loads(first)["config"]["seed"] == 3


def test_every_input_error_maps_to_exit_three():
    from app.core import errors

    kinds = [
        cls for cls in vars(errors).values()
        if isinstance(cls, type) and issubclass(cls, errors.Cat1Error) and cls is not errors.Cat1Error
    ]
    assert errors.EmptyPathError in kinds and errors.TypingCorruptionError in kinds
    for cls in kinds:
        assert (cls in errors.INPUT_ERRORS) != (cls in errors.THEOREM_VIOLATIONS), cls.__name__
