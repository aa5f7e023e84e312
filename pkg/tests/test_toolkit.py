import json
import shutil
import subprocess
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, settings, strategies as st

from stabpart.cli import main
from stabpart.formulation import RPST, RPST2, make_selection, parse_lp_text
from stabpart.generator import GenerationFailed, generate_polygon
from stabpart.geometry import Collinear, classify_vertices
from stabpart.hunt import FailureRecord, HuntConfig, check_polygon, hunt, replay
from stabpart.partition import ISLAND, KNEE_AT_REFLEX, KNEE_AT_STEINER, validate_partition
from stabpart.rectio import RectSyntaxError, parse_rect, read_rect, write_rect
from stabpart.svg import render_svg

SVG = "{http://www.w3.org/2000/svg}"


# --- .rect files ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("four\n0 0\n", 1),
        ("4\n0 0\n1 0\n1 1\n", 4),
        ("4\n0 0\n1 0 2\n1 1\n0 1\n", 3),
        ("4\n0 0\n1 x\n1 1\n0 1\n", 3),
    ],
)
def test_parse_rect_errors(text, line):
    with pytest.raises(RectSyntaxError) as exc:
        parse_rect(text)
    assert exc.value.line == line


def test_parse_rect_geometry_errors_propagate():
    with pytest.raises(Collinear):
        parse_rect("5\n0 0\n1 0\n2 0\n2 1\n0 1\n")


def test_read_rect_with_comments(data_dir, L6):
    assert len(L6) == 6
    text = write_rect(L6, comment="L shape")
    assert text.startswith("# L shape\n6\n")
    assert parse_rect(text) == L6.canonical()


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([4, 6, 8, 12, 20]), st.integers(0, 10_000))
def test_rect_round_trip(n, seed):
    P = generate_polygon(n, seed)
    text = write_rect(P)
    assert parse_rect(text) == P.canonical()
    assert write_rect(parse_rect(text)) == text


# --- generator -----------------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([4, 6, 8, 10, 14, 20, 24]), st.integers(0, 10_000))
def test_generator_hits_vertex_count(n, seed):
    P = generate_polygon(n, seed)
    assert len(P) == n
    reflex, convex = classify_vertices(P)
    assert len(convex) - len(reflex) == 4


def test_generator_is_deterministic():
    assert generate_polygon(20, 17) == generate_polygon(20, 17)
    assert generate_polygon(20, 17) != generate_polygon(20, 18)


def test_generator_rejects_bad_counts():
    with pytest.raises(ValueError):
        generate_polygon(7, 0)
    with pytest.raises(ValueError):
        generate_polygon(2, 0)


def test_generator_gives_up():
    with pytest.raises(GenerationFailed):
        generate_polygon(12, 0, max_attempts=0)


# --- svg -----------------------------------------------------------------------------


def test_svg_layers(A_L6, L6):
    R = validate_partition(make_selection(A_L6, RPST, range(len(A_L6.internal_edges))), A_L6)
    values = {e: v for e, v in zip(A_L6.internal_edges, ("1/2", "1"))}
    root = ET.fromstring(render_svg(L6, values=values, partition=R))
    assert root.tag == f"{SVG}svg"
    classes = [el.get("class") for el in root.iter()]
    assert classes.count("polygon") == 1
    assert classes.count("face") == 3
    assert classes.count("segment") == 2
    assert classes.count("label") == 2
    assert classes.count("reflex") == 1
    assert classes.count("convex") == 5


def test_svg_plain(S3):
    root = ET.fromstring(render_svg(S3))
    classes = [el.get("class") for el in root.iter()]
    assert classes.count("steiner") == 1 and classes.count("border") == 4
    assert classes.count("grid") == 6 and "face" not in classes


# --- hunt records --------------------------------------------------------------------


def _records(data_dir, name):
    lines = (data_dir / f"{name}.jsonl").read_text().splitlines()
    return [FailureRecord.from_json(ln) for ln in lines if ln.strip()]


@pytest.mark.parametrize(
    "name, kind, allowed",
    [("rpst_island", RPST, {ISLAND, KNEE_AT_STEINER}), ("rpst2_knee", RPST2, {KNEE_AT_REFLEX})],
)
def test_committed_failures_replay(data_dir, name, kind, allowed):
    (rec,) = _records(data_dir, name)
    assert rec.model_kind == kind and rec.kind in allowed
    assert read_rect(data_dir / f"{name}.rect") == rec.polygon
    again = replay(rec)
    assert again == rec


def test_record_json_round_trip(data_dir):
    (rec,) = _records(data_dir, "rpst_island")
    line = rec.to_json()
    assert FailureRecord.from_json(line) == rec
    d = json.loads(line)
    assert d["lp_objective"] == "169/81" and all(k.startswith("x") for k in d["values"])


def test_check_polygon_feasible_case(L6):
    assert check_polygon(L6, RPST) is None


def test_hunt_config_validation():
    with pytest.raises(ValueError):
        HuntConfig(7, 10)
    with pytest.raises(ValueError):
        HuntConfig(20, 0)


def test_small_hunt_is_deterministic(tmp_path):
    cfg = HuntConfig(12, 30, seed=5, output_dir=str(tmp_path))
    first = hunt(cfg)
    assert first == hunt(HuntConfig(12, 30, seed=5))
    lines = (tmp_path / "failures.jsonl").read_text().splitlines()
    assert len(lines) == len(first)
    for r in first:
        assert (tmp_path / f"random-12-{r.seed}.rect").exists()
        assert 5 <= r.seed < 35


def test_parallel_hunt_matches_serial():
    serial = hunt(HuntConfig(12, 16, seed=40))
    assert hunt(HuntConfig(12, 16, seed=40, workers=2)) == serial


# --- command line --------------------------------------------------------------------


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_check_and_relax(capsys, data_dir):
    L6 = str(data_dir / "L6.rect")
    assert _run(capsys, "check", L6, "--select", "h,v")[:2] == (
        0,
        "feasible, stabbing number 2\n",
    )
    code, out, _ = _run(capsys, "check", L6, "--select", "")
    assert code == 0 and out.startswith("infeasible")
    code, out, _ = _run(capsys, "relax", L6)
    assert out.splitlines()[0] == "objective 3/2"


def test_cli_round_strict(capsys, data_dir):
    S3 = str(data_dir / "S3.rect")
    assert _run(capsys, "round", S3)[0] == 0
    code, out, _ = _run(capsys, "round", S3, "--strict")
    assert code == 1 and "knee_at_steiner" in out
    assert _run(capsys, "round", S3, "--model", "conforming", "--strict")[0] == 0


def test_cli_solve(capsys, data_dir):
    S3 = str(data_dir / "S3.rect")
    for extra in ([], ["--brute"]):
        code, out, _ = _run(capsys, "solve", S3, "--model", "rpst2", *extra)
        assert code == 0 and out.startswith("k_opt 2\n")


def test_cli_model_round_trips(capsys, data_dir, tmp_path):
    target = tmp_path / "s3.lp"
    assert _run(capsys, "model", str(data_dir / "S3.rect"), "-o", str(target))[0] == 0
    lp = parse_lp_text(target.read_text())
    assert lp.count("steiner") == 8


def test_cli_misc_commands(capsys, data_dir, tmp_path):
    L6 = str(data_dir / "L6.rect")
    code, out, _ = _run(capsys, "gen", "--vertices", "10", "--seed", "3")
    assert code == 0 and len(parse_rect(out)) == 10
    assert "stab lines 4" in _run(capsys, "grid", L6)[1]
    assert _run(capsys, "stab", L6, "--select", "all")[1].endswith("stabbing number 2\n")
    assert _run(capsys, "normalize", L6, "--select", "x0,x1")[1].endswith("2 -> 2\n")
    svg = tmp_path / "l6.svg"
    assert _run(capsys, "render", L6, "--values", "--select", "0", "-o", str(svg))[0] == 0
    ET.parse(svg)
    code, out, _ = _run(capsys, "hunt", "--vertices", "8", "--count", "5", "--model", "rpst")
    assert code == 0
    assert all(json.loads(ln)["model"] == "RPST" for ln in out.splitlines())


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "missing.rect", "--select", "0"],
        ["check", "{L6}", "--select", "9"],
        ["check", "{L6}", "--select", "bogus"],
        ["stab", "{L6}", "--select", ""],
        ["gen", "--vertices", "7"],
    ],
)
def test_cli_errors_exit_2(capsys, data_dir, argv):
    argv = [a.replace("{L6}", str(data_dir / "L6.rect")) for a in argv]
    code, out, err = _run(capsys, *argv)
    assert code == 2 and err.startswith("stab ")


def test_cli_bad_rect_from_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("3\n0 0\n1 0\n1 1\n"))
    assert _run(capsys, "grid", "-")[0] == 2


@pytest.mark.skipif(shutil.which("stab") is None, reason="console script not installed")
def test_console_script(data_dir):
    res = subprocess.run(
        ["stab", "relax", str(data_dir / "L6.rect")], capture_output=True, text=True
    )
    assert res.returncode == 0 and res.stdout.startswith("objective 3/2")
