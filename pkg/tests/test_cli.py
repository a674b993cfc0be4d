import io
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmwave import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse(text):
    return cli.read_csv(io.StringIO(text))


def test_classify_bump(capsys):
    code, out, _ = run(capsys, "classify", "--beta", "0.4", "--c", "2.5")
    assert code == 0
    assert out.splitlines()[0] == "StrongBump"
    assert "ell=2.0000000000" in out


def test_classify_no_solution(capsys):
    code, out, _ = run(capsys, "classify", "--beta", "3.0", "--c", "2.5")
    assert code == 3 and out.startswith("NoSolution")


def test_classify_below_cj(capsys):
    code, _, err = run(capsys, "classify", "--beta", "0.4", "--c", "1.0")
    assert code == 2 and "CJ" in err


def test_missing_flow_is_usage_error(capsys):
    code, _, err = run(capsys, "classify", "--beta", "0.4")
    assert code == 2 and "--c" in err


def test_bad_flag_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["classify", "--beta", "x"])
    assert info.value.code == 2


def test_invalid_model_reported_by_field(capsys):
    code, _, err = run(capsys, "classify", "--beta", "1", "--c", "2.5", "--alpha", "1.5", "--ti", "-1")
    assert code == 2
    assert "alpha" in err and "ti" in err


def test_profile_monotone(capsys):
    code, out, _ = run(capsys, "profile", "--beta", "0.8", "--c", "2.5", "--n", "200")
    assert code == 0
    comments, header, rows = parse(out)
    assert header == ["xi", "T", "Z", "region"]
    assert dict(comments)["ell"] == pytest.approx(2.0, abs=1e-10)
    xi = np.array([r[0] for r in rows])
    t = np.array([r[1] for r in rows])
    neg = xi < 0
    assert np.all(np.diff(t[neg]) <= 1e-12)


def test_profile_bump_maximum(capsys):
    code, out, _ = run(capsys, "profile", "--beta", "0.4", "--c", "2.5")
    comments, _, rows = parse(out)
    ell = dict(comments)["ell"]
    inner = [r[1] for r in rows if -ell < r[0] < 0]
    t_ell = [r[1] for r in rows if r[0] == -ell][0]
    assert max(inner) > t_ell and max(inner) > 4.0


def test_profile_no_solution(capsys):
    code, _, _ = run(capsys, "profile", "--beta", "3.0", "--c", "2.5")
    assert code == 3


def test_profile_file_format(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert cli.main(["profile", "--beta", "0.4", "--c", "2.5", "--n", "20", "--out", str(out)]) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    assert b"# ell=" in raw
    body = [l for l in raw.decode().splitlines() if not l.startswith("#")][1:]
    for line in body:
        for cell in line.split(",")[:3]:
            assert len(cell.lstrip("-").replace(".", "").split("e")[0].lstrip("0")) <= 15


def test_trace_deterministic_across_jobs(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["trace", "--c-min", "2.0", "--c-max", "4.3", "--c-step", "0.3"]
    assert cli.main(base + ["--out", str(a)]) == 0
    assert cli.main(base + ["--out", str(b), "--jobs", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    _, header, rows = cli.read_csv(io.StringIO(a.read_text()))
    assert header == ["c", "beta0", "beta1", "beta0_residual", "beta1_residual", "status"]
    first = rows[0]
    assert first[0] == 2.0 and abs(first[1] - first[2]) < 1e-6
    for r in rows:
        if r[0] >= 4.25:
            assert r[2] is None and r[-1] == "beyond_c_star"


def test_trace_reference_row(capsys):
    code, out, _ = run(capsys, "trace", "--c-min", "2.5", "--c-max", "2.5")
    _, _, rows = parse(out)
    assert rows[0][1] == pytest.approx(0.582, abs=5e-3)
    assert rows[0][2] == pytest.approx(1.7675, abs=5e-3)


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# reference run\nbeta = 3.0\nc=2.5\nq0 = 2  # trailing\n")
    code, out, _ = run(capsys, "classify", "--config", str(cfg))
    assert code == 3
    code, out, _ = run(capsys, "classify", "--config", str(cfg), "--beta", "0.4")
    assert code == 0 and out.startswith("StrongBump")


def test_config_file_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour=blue\n")
    code, _, err = run(capsys, "classify", "--config", str(cfg))
    assert code == 2 and "colour" in err
    code, _, _ = run(capsys, "classify", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2


def test_arrhenius_default_ta():
    cfg = cli.RunConfig(kinetics="arrhenius")
    assert cfg.model_params().kinetics.ta == 1.0


def test_critical(capsys):
    code, out, _ = run(capsys, "critical", "--c-min", "2.0", "--c-max", "2.4", "--c-step", "0.04")
    assert code == 0
    assert "cj_point beta=0.6144" in out
    assert "local_minima=1" in out
    c_bar = float(out.split("turning_point")[1].split("c=")[1].split()[0])
    assert c_bar > 2.0


def test_critical_boundary_minimum(capsys):
    code, _, err = run(capsys, "critical", "--c-min", "2.3", "--c-max", "2.6", "--c-step", "0.1")
    assert code == 2 and "interior" in err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate")
    assert code == 0
    assert out.count("PASS") == 13 and "FAIL" not in out


def test_validate_needs_reference_kinetics(capsys):
    code, _, _ = run(capsys, "validate", "--kinetics", "arrhenius")
    assert code == 2


cells = st.one_of(
    st.floats(allow_nan=False, allow_infinity=False),
    st.none(),
    st.sampled_from(["ok", "failed", "burnt", "reaction"]),
)


@given(st.lists(st.lists(cells, min_size=3, max_size=3), max_size=8), st.floats(-1e6, 1e6))
def test_csv_round_trip_bytes(rows, ell):
    buf = io.StringIO()
    cli.write_csv(buf, ["a", "b", "c"], rows, [("ell", ell), ("variant", "StrongBump")])
    first = buf.getvalue()
    comments, header, parsed = cli.read_csv(io.StringIO(first))
    again = io.StringIO()
    cli.write_csv(again, header, parsed, comments)
    assert again.getvalue().encode() == first.encode()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rmwave", "classify", "--beta", "0.8", "--c", "2.5"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("StrongMonotonic")
