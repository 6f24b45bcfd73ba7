import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given

from qdisk.cli import main
from qdisk.deformation import DefoSeries
from qdisk.free_series import FreeSeries
from qdisk.io import KindError, SeriesParseError, format_series, parse_series
from qdisk.quantum_series import QContext, QSeries
from qdisk.scalars import GaussianRational

from strategies import defo_series, exact_q, free_series, q_series


def test_parse_examples():
    f = parse_series("freeseries n=2 cap=4\n(1,0) [1,2]\n")
    assert f == FreeSeries({(1, 2): 1}, 2, 4)
    x, ctx = parse_series("qseries n=2 cap=4 q=1/2\n(1,0) (1,1)\n")
    assert x == QSeries({(1, 1): 1}, 2, 4)
    assert ctx.q == Fraction(1, 2)
    a = parse_series("defoseries n=2 cap=3 zwin=5\n\n# comment\n-3/2*i (1,1) p=-1\n")
    assert a == DefoSeries({((1, 1), -1): GaussianRational(0, Fraction(-3, 2))}, 2, 3, 5)


def test_parse_errors_report_lines():
    with pytest.raises(SeriesParseError) as err:
        parse_series("freeseries n=2 cap=4\n1 [1,2]\n\n1 [3]\n")
    assert err.value.line == 4
    with pytest.raises(SeriesParseError) as err:
        parse_series("qseries n=2 cap=4 q=1/2\n1 (1,1,1)\n")
    assert err.value.line == 2
    with pytest.raises(SeriesParseError):
        parse_series("qseries n=2 cap=4\n1 (1,1)\n")
    with pytest.raises(SeriesParseError):
        parse_series("matrix n=2\n")
    with pytest.raises(SeriesParseError):
        parse_series("")
    with pytest.raises(SeriesParseError):
        parse_series("freeseries n=2 cap=4\nfoo [1]\n")
    with pytest.raises(KindError):
        parse_series("freeseries n=2 cap=4\n1 [1]\n", kind="q")


def test_duplicate_terms_accumulate():
    f = parse_series("freeseries n=2 cap=2\n1 [1]\n2 [1]\n")
    assert f.coeff((1,)) == 3


@given(free_series(n=3, max_len=4))
def test_round_trip_free(f):
    text = format_series(f)
    assert parse_series(text) == f
    assert format_series(parse_series(text)) == text


@given(q_series(n=3, max_deg=4), exact_q)
def test_round_trip_q(f, q):
    ctx = QContext(3, q)
    text = format_series(f, ctx)
    g, ctx2 = parse_series(text)
    assert g == f and ctx2.q == ctx.q
    assert format_series(g, ctx2) == text


@given(defo_series(n=2, max_deg=3, exact=False))
def test_round_trip_defo_float(a):
    text = format_series(a)
    assert parse_series(text) == a


def test_format_order_is_graded():
    f = FreeSeries({(2,): 1, (1, 1): 1, (): 1, (1,): 1}, 2, 3)
    lines = format_series(f).splitlines()[1:]
    assert lines == ["1 []", "1 [1]", "1 [2]", "1 [1,1]"]


# --- CLI -----------------------------------------------------------------------


@pytest.fixture
def files(tmp_path):
    paths = {}
    paths["f"] = tmp_path / "f.fs"
    paths["f"].write_text("freeseries n=2 cap=4\n1 [2,1]\n")
    paths["g"] = tmp_path / "g.fs"
    paths["g"].write_text("freeseries n=2 cap=4\n1 [1]\n")
    paths["x"] = tmp_path / "x.qs"
    paths["x"].write_text("qseries n=2 cap=4 q=1/2\n1 (1,1)\n")
    paths["x1"] = tmp_path / "x1.qs"
    paths["x1"].write_text("qseries n=2 cap=4 q=1\n1 (1,0)\n")
    paths["x2"] = tmp_path / "x2.qs"
    paths["x2"].write_text("qseries n=2 cap=4 q=1\n1 (0,1)\n")
    paths["a"] = tmp_path / "a.ds"
    paths["a"].write_text("defoseries n=2 cap=4 zwin=8\n1 (1,1) p=0\n")
    paths["bad"] = tmp_path / "bad.fs"
    paths["bad"].write_text("freeseries n=2 cap=4\n1 [3]\n")
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_mul_and_normal_order(files, capsys):
    code, out, _ = run(capsys, "mul", files["f"], files["g"])
    assert code == 0 and out.splitlines()[1] == "1 [2,1,1]"
    code, out, _ = run(capsys, "normal-order", "--q", "1/2", files["f"])
    assert code == 0 and out.splitlines() == ["qseries n=2 cap=4 q=1/2", "2 (1,1)"]
    code, out, _ = run(capsys, "mul", files["x2"], files["x1"], "--q", "1/2")
    assert out.splitlines()[1] == "2 (1,1)"


def test_cli_norm_quotient_kappa(files, capsys):
    code, out, _ = run(capsys, "norm", "--json", "--family", "ball", files["x"])
    assert code == 0 and json.loads(out)["norm"] == pytest.approx(5 ** -0.5)
    code, out, _ = run(capsys, "quotient", "--json", "--geometry", "ball", "--q", "1/2", "--rho", "0.5",
                       "--target", files["x"])
    rep = json.loads(out)
    assert rep["oracle"] == pytest.approx(0.25 / 5**0.5) and rep["rel_gap"] < 1e-9
    code, out, _ = run(capsys, "kappa", "--k", "1,1", "--q", "1/2", "--geometry", "ball")
    assert out.splitlines()[1:] == ["1/5 [1,2]", "2/5 [2,1]"]
    code, out, _ = run(capsys, "norm", "--family", "taylor", files["x"])
    assert code == 2


def test_cli_fiber_profile(files, capsys):
    code, out, _ = run(capsys, "fiber", "--q", "2", files["a"])
    assert out.splitlines()[1] == "1 (1,1)"
    code, out, _ = run(capsys, "profile", "--rho", "1", "--grid", "0.5:2:4", files["a"])
    rows = out.splitlines()
    assert rows[0] == "q_re,q_im,abs_q,norm"
    assert [float(r.split(",")[-1]) for r in rows[1:]] == pytest.approx([0.5, 1.0, 1.0, 1.0])


def test_cli_star_defect_sprad(files, capsys):
    code, out, _ = run(capsys, "star", "--order", "2", files["x2"], files["x1"])
    assert "-1*i (1,1)" in out and "-1/2 (1,1)" in out
    code, out, _ = run(capsys, "defect", "--json", "--h", "0.01", "--rho", "0.5", files["x1"], files["x2"])
    assert 0 < json.loads(out)["defect"] < 0.01
    code, out, _ = run(capsys, "sprad", "--json", "--family", "universal", "--rho", "0.5", "--tau", "2", "--dmax", "4")
    assert json.loads(out)["profile"] == pytest.approx([1.0] * 4)


def test_cli_errors(files, capsys):
    code, _, err = run(capsys, "mul", files["bad"], files["g"])
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "fiber", files["a"])
    assert code == 2
    code, _, _ = run(capsys, "normal-order", files["x"], "--q", "2")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_cli_verify_deterministic_and_exit_codes(capsys):
    args = ["verify", "combinatorics", "--k-max", "4", "--seed", "3"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["ok"] and rep["seed"] == 3 and "wall_time" not in rep
    code, _, _ = run(capsys, "verify", "combinatorics", "--k-max", "99")
    assert code == 2


def test_console_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "qdisk", "norm", "--family", "taylor", "--rho", "0.5", str(files["f"])],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "norm: 0.25" in res.stdout
