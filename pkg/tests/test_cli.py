import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ctrap.cli import dumps, main, read_csv_samples, CliError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    return code, json.loads(out), err


def write_csv(path, xs, fs, header="x,f", directives=()):
    lines = list(directives) + [header] + [f"{float(x)!r},{float(f)!r}" for x, f in zip(xs, fs)]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_beta_table():
    code, doc, _ = run_json("beta", "1", "2", "4", "inf")
    assert code == 0
    rows = doc["results"]
    assert [r["q"] for r in rows] == [1, 2, 4, "inf"]
    assert rows[0]["beta"] == 2
    assert rows[1]["beta"] == pytest.approx(math.sqrt(3), abs=1e-15)
    assert rows[2]["beta"] == pytest.approx(1.589291662, abs=5e-10)
    assert rows[3]["beta"] == pytest.approx(math.sqrt(2), abs=1e-15)
    assert rows[1]["alpha_unit"] == pytest.approx(1 / (2 * math.sqrt(3)))
    assert list(rows[0]) == ["q", "beta", "alpha_unit", "k_unit", "method", "residual"]
    assert set(doc) == {"command", "inputs", "results", "contract"}


def test_beta_residual_and_range():
    code, doc, _ = run_json("beta", "3")
    assert code == 0 and abs(doc["results"][0]["residual"]) <= 1e-12
    code, doc, _ = run_json("beta", "--range", "1", "2", "0.25")
    assert [r["q"] for r in doc["results"]] == [1, 1.25, 1.5, 1.75, 2]


@pytest.mark.parametrize("args", [("beta", "0.5"), ("beta", "abc"), ("beta",), ("beta", "--range", "1", "2", "0")])
def test_beta_bad_input(args):
    code, out, err = run(*args)
    assert code == 2
    assert out == "" and err


def test_table_and_json_agree():
    _, table, _ = run("beta", "3")
    _, doc, _ = run_json("beta", "3")
    beta = doc["results"][0]["beta"]
    assert f"{beta:.10g}" in table


def test_json_deterministic():
    a = run("bounds", "--p", "2", "--norm", "1", "--json")[1]
    b = run("bounds", "--p", "2", "--norm", "1", "--json")[1]
    assert a == b


def test_dumps_format():
    text = dumps({"b": 0.1, "a": math.inf, "c": [1, True, None]})
    assert text.index('"b"') < text.index('"a"')
    assert '"inf"' in text
    assert "0.10000000000000001" in text
    assert json.loads(text)["c"] == [1, True, None]


def test_integrate_cubic_exact():
    code, doc, _ = run_json("integrate", "--expr", "x^3", "--a", "0", "--b", "1", "--rule", "cubic-exact", "--n", "1")
    assert code == 0
    assert doc["results"][0]["estimate"] == 0.25


def test_integrate_oracle_within_bound():
    code, doc, _ = run_json("integrate", "--expr", "exp(x)", "--a", "0", "--b", "1", "--rule", "optimal-p", "--p", "2", "--n", "8", "--oracle")
    assert code == 0
    row = doc["results"][0]
    assert row["oracle"] == pytest.approx(math.e - 1, abs=1e-12)
    assert abs(row["error"]) <= row["bound"]
    norm = math.sqrt((math.e**2 - 1) / 2)
    assert row["norm"] == pytest.approx(norm, rel=1e-12)
    assert row["bound"] == pytest.approx(norm / (12 * math.sqrt(5) * 64), rel=1e-12)
    assert doc["contract"]["passed"] is True


def test_integrate_bound_norm():
    code, doc, _ = run_json("integrate", "--expr", "x^4", "--a", "0", "--b", "1", "--rule", "optimal-p", "--p", "inf", "--bound-norm", "12")
    assert code == 0
    assert doc["results"][0]["estimate"] == pytest.approx(0.125)
    assert doc["results"][0]["bound"] == pytest.approx(12 / 32)


def test_integrate_auto_norm_alexiewicz_on_kink():
    code, doc, _ = run_json("integrate", "--expr", "abs(x-0.5)", "--a", "0", "--b", "1", "--rule", "alexiewicz", "--n", "3", "--oracle")
    assert code == 0
    row = doc["results"][0]
    assert row["norm"] == pytest.approx(2.0)
    assert abs(row["error"]) <= row["bound"]


def test_integrate_refuses_lp_norm_with_point_mass():
    code, out, err = run("integrate", "--expr", "abs(x-0.5)", "--a", "0", "--b", "1", "--rule", "optimal-p", "--p", "2", "--auto-norm")
    assert code == 2
    assert "jumps" in err


@pytest.mark.parametrize(
    "args",
    [
        ("--expr", "sin(", "--a", "0", "--b", "1", "--rule", "trapezoid"),
        ("--expr", "1/x", "--a", "0", "--b", "1", "--rule", "trapezoid"),
        ("--expr", "x", "--a", "1", "--b", "0", "--rule", "trapezoid"),
        ("--expr", "x", "--rule", "trapezoid"),
        ("--expr", "x", "--a", "0", "--b", "1", "--rule", "simpson"),
        ("--expr", "x", "--a", "0", "--b", "1", "--rule", "optimal-p"),
        ("--rule", "trapezoid"),
    ],
)
def test_integrate_usage_errors(args):
    code, out, err = run("integrate", *args)
    assert code == 2
    assert out == ""


def test_parse_error_reports_offset():
    _, _, err = run("integrate", "--expr", "sin(", "--a", "0", "--b", "1", "--rule", "trapezoid")
    assert "offset 4" in err


def test_integrate_csv_trapezoid(tmp_path):
    xs = np.linspace(0, 2, 11)
    path = write_csv(tmp_path / "d.csv", xs, xs**2)
    code, doc, _ = run_json("integrate", "--csv", path, "--rule", "trapezoid")
    assert code == 0
    h = 0.2
    expected = h * (0.5 * xs[0] ** 2 + np.sum(xs[1:-1] ** 2) + 0.5 * xs[-1] ** 2)
    assert doc["results"][0]["estimate"] == pytest.approx(expected, rel=1e-15)
    assert doc["inputs"]["n"] == 10


def test_integrate_csv_needs_derivatives(tmp_path):
    xs = np.linspace(0, 1, 9)
    path = write_csv(tmp_path / "d.csv", xs, np.exp(xs))
    code, out, err = run("integrate", "--csv", path, "--rule", "optimal-p", "--p", "2")
    assert code == 4
    assert "fprime_a" in err and "--fd" in err
    code, doc, _ = run_json("integrate", "--csv", path, "--rule", "optimal-p", "--p", "2", "--fd")
    assert code == 0
    assert doc["results"][0]["estimate"] == pytest.approx(math.e - 1, abs=1e-4)


def test_integrate_csv_directives(tmp_path):
    xs = np.linspace(0, 1, 9)
    path = write_csv(tmp_path / "d.csv", xs, xs**3, directives=("# fprime_a=0", "# fprime_b=3"))
    code, doc, _ = run_json("integrate", "--csv", path, "--rule", "cubic-exact")
    assert code == 0
    assert doc["results"][0]["estimate"] == pytest.approx(0.25, abs=1e-15)


def test_csv_validation(tmp_path):
    bad = [
        ("y,f\n0,1\n1,2\n", "header"),
        ("x,f\n0,1\n", "two"),
        ("x,f\n0,1\n0.5,2\n0.7,3\n", "uniform"),
        ("x,f\n0,1\n1,oops\n", "non-numeric"),
        ("x,f\n1,1\n0,2\n", "increasing"),
        ("x,f\n0,1,2\n1,2,3\n", "fields"),
    ]
    for text, word in bad:
        with pytest.raises(CliError) as info:
            read_csv_samples(text)
        assert word in str(info.value)


def test_csv_uniform_tolerance():
    s = read_csv_samples("x,f\n0,0\n0.1,1\n0.2000000000000001,2\n")
    assert s.n == 2


def test_csv_crlf():
    s = read_csv_samples("# fprime_a=1.5\r\nx,f\r\n0,0\r\n1,1\r\n")
    assert s.fprime_a == 1.5


def test_integrate_csv_conflicting_flags(tmp_path):
    xs = np.linspace(0, 1, 5)
    path = write_csv(tmp_path / "d.csv", xs, xs)
    assert run("integrate", "--csv", path, "--rule", "trapezoid", "--a", "0")[0] == 2
    assert run("integrate", "--csv", path, "--rule", "trapezoid", "--n", "3")[0] == 2
    assert run("integrate", "--csv", str(tmp_path / "missing.csv"), "--rule", "trapezoid")[0] == 2


def test_bounds_p2():
    code, doc, _ = run_json("bounds", "--p", "2", "--norm", "1", "--a", "0", "--b", "1")
    assert code == 0
    rows = {r["rule"]: r for r in doc["results"]}
    assert rows["trapezoid"]["bound"] == pytest.approx(0.0912871, abs=1e-7)
    assert rows["optimal-p(2)"]["bound"] == pytest.approx(0.0372678, abs=1e-7)
    assert "fallback-b" in rows and "fallback-c" in rows


def test_bounds_inf_and_one():
    _, doc, _ = run_json("bounds", "--p", "inf", "--norm", "1")
    rows = {r["rule"]: r["bound"] for r in doc["results"]}
    assert rows["trapezoid"] == pytest.approx(1 / 12) and rows["optimal-p(inf)"] == pytest.approx(1 / 32)
    _, doc, _ = run_json("bounds", "--p", "1", "--norm", "2", "--a", "0", "--b", "3")
    rows = {r["rule"]: r["bound"] for r in doc["results"]}
    assert rows["optimal-p(1)"] == pytest.approx(9 / 8)


def test_bounds_compare():
    code, doc, _ = run_json("bounds", "--p", "3", "--norm", "1", "--compare")
    assert code == 0 and doc["contract"]["passed"]


@pytest.mark.parametrize("p", ["0.5", "nope"])
def test_bounds_invalid_regime(p):
    assert run("bounds", "--p", p, "--norm", "1")[0] == 2


def test_bounds_alexiewicz():
    code, doc, _ = run_json("bounds", "--p", "alexiewicz", "--norm", "1")
    assert code == 0
    assert [r["bound"] for r in doc["results"]] == [0.25, 0.125]
    assert run("bounds", "--p", "alexiewicz", "--norm", "1", "--compare")[0] == 2


def test_verify_sharpness_inf():
    code, doc, _ = run_json("verify", "sharpness", "--p", "inf")
    assert code == 0
    assert doc["results"][0]["measured"] == pytest.approx(1.0, abs=1e-6)


def test_verify_minimality_p2():
    code, doc, _ = run_json("verify", "minimality", "--p", "2")
    assert code == 0
    assert doc["results"][0]["measured"] == pytest.approx(0.2886751, abs=5e-4)


def test_verify_convergence_p2():
    code, doc, _ = run_json("verify", "convergence", "--p", "2")
    assert code == 0
    orders = [r for r in doc["results"] if "order" in r["case"]]
    assert len(orders) == 3 and all(r["measured"] >= 1.9 for r in orders)


def test_verify_bounds_alexiewicz():
    code, doc, _ = run_json("verify", "bounds", "--p", "alexiewicz")
    assert code == 0 and doc["contract"]["passed"]


def test_verify_failure_exit(monkeypatch):
    from ctrap import cli

    def broken(regimes):
        return [{"case": "fake", "measured": 2.0, "contract": "1", "passed": False}]

    monkeypatch.setitem(cli.SUITES, "sharpness", (broken, ("2",)))
    code, out, err = run("verify", "sharpness")
    assert code == 5
    assert "fake" in err


def test_verify_unknown_suite():
    assert run("verify", "nothing")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ctrap", "beta", "2", "--json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][0]["beta"] == pytest.approx(math.sqrt(3))
