import json
import math
import re

import pytest

from ffluniv.cli import (
    ConfigError,
    cfmt,
    ffmt,
    main,
    parse_config,
    serialize_config,
)


def run_cli(tmp_path, command, config_text, name="run", extra=()):
    cfg = tmp_path / f"{name}.ini"
    cfg.write_text(config_text, encoding="utf-8")
    out = tmp_path / f"{name}_out"
    code = main([command, "--config", str(cfg), "--out", str(out), *extra])
    return code, out


F3_HEADER = "[field]\np = 3\n"


def test_number_formats():
    assert cfmt(1.5 - 2j) == "1.5-2j"
    assert cfmt(0.1 + 0.25j) == "0.1+0.25j"
    assert cfmt(1) == "1+0j"
    assert ffmt(float("nan")) == "nan"
    assert ffmt(0.1) == "0.1"


def test_primes_golden(tmp_path):
    code, out = run_cli(tmp_path, "primes", F3_HEADER + "[params]\ndegree = 2\n")
    assert code == 0
    got = (out / "primes.csv").read_text(encoding="utf-8")
    assert got == (
        "# schema=primes/v1\n"
        "code,text\n"
        "10,1 0 1\n"
        "14,2 1 1\n"
        "17,2 2 1\n"
    )
    report = json.loads((out / "primes.json").read_text())
    assert report["schema"] == "primes-report/v1"
    assert report["count"] == 3 and report["field"] == "3"
    meta = json.loads((out / "run_meta.json").read_text())
    assert meta["command"] == "primes" and meta["elapsed_seconds"] >= 0


def test_phi_report(tmp_path):
    code, out = run_cli(tmp_path, "phi", F3_HEADER + "[modulus]\nQ = 0 0 1\n")
    assert code == 0
    report = json.loads((out / "phi.json").read_text())
    assert report["phi"] == 6
    assert report["factors"] == [["0 1", 2]]


def test_rhsweep_clean_family(tmp_path):
    text = F3_HEADER + "[modulus]\nQ = 0 0 0 1\n[grid]\nn_radii = 4\nn_angles = 5\n"
    code, out = run_cli(tmp_path, "rhsweep", text)
    assert code == 0
    lines = (out / "rhsweep.csv").read_text().splitlines()
    assert lines[0] == "# schema=rhsweep/v1"
    assert lines[1] == ("exponents,observed_degree,root_moduli,"
                       "classification,max_hybrid_residual")
    assert len(lines) == 2 + 17
    assert all(line.split(",")[3] == "ok" for line in lines[2:])
    report = json.loads((out / "rhsweep.json").read_text())
    assert report["violations"] == 0
    assert report["max_hybrid_residual"] < 1e-9


def test_lpoly_report(tmp_path):
    text = F3_HEADER + "[modulus]\nQ = 0 0 0 1\n[character]\nexponents = 1,1\n"
    code, out = run_cli(tmp_path, "lpoly", text)
    assert code == 0
    report = json.loads((out / "lpoly.json").read_text())
    assert report["character"] == "0 0 0 1 : 1,1"
    assert set(report["classifications"]) <= {"critical", "trivial"}
    assert len(report["inverse_roots"]) == report["observed_degree"]
    assert all(re.fullmatch(r"[-0-9.e]+[-+][-0-9.e]+j", c)
               for c in report["coefficients"])


def test_peak_outputs(tmp_path):
    code, out = run_cli(tmp_path, "peak", "[params]\nK = 2\ndelta = 0.25\n")
    assert code == 0
    lines = (out / "peak.csv").read_text().splitlines()
    assert lines[0] == "# schema=peak-coeffs/v1" and lines[1] == "k,c_k"
    assert len(lines) == 2 + 3
    report = json.loads((out / "peak.json").read_text())
    assert abs(report["kappa"] - 1 / 3) < 1e-12
    assert report["off_peak_bound"] == 2 * math.exp(-math.pi * 2 * 0.25)


def test_peak_certification_failure_is_exit_1(tmp_path):
    code, _ = run_cli(tmp_path, "peak", "[params]\nK = 9\ndelta = 0.05\n")
    assert code == 1


def test_mv_commands(tmp_path):
    base = (F3_HEADER + "[modulus]\nQ = 0 0 0 0 1\n"
            "[params]\nK = 2\ndelta = 0.25\n"
            "[phases]\n1 1 = 0.23\n2 1 = 0.71\n")
    code, out = run_cli(tmp_path, "mvg", base, name="g")
    assert code == 0
    g = json.loads((out / "mvg.json").read_text())
    assert g["phi"] == 54 and abs(g["main"] - 6.0) < 1e-12
    code, out = run_cli(tmp_path, "mvh", base, name="h")
    assert code == 0
    h = json.loads((out / "mvh.json").read_text())
    assert h["lhs"] <= g["lhs"] + 1e-12
    tail = base.replace("[phases]", "z = 4\nb_scale = 0.5\n[phases]")
    code, out = run_cli(tmp_path, "mvtail", tail, name="t")
    assert code == 0
    t = json.loads((out / "mvtail.json").read_text())
    assert t["z"] == 4 and t["lhs"] >= 0


def test_counting_schema(tmp_path):
    text = F3_HEADER + "[modulus]\nQ = 0 1\n[params]\nx_max = 8.0\n"
    code, out = run_cli(tmp_path, "counting", text)
    assert code == 0
    lines = (out / "counting.csv").read_text().splitlines()
    assert lines[0] == "# schema=counting/v1"
    assert lines[1] == "x,n_value,growth_ratio,window,short_diff,short_ratio"
    assert len(lines) > 2


def test_fit_phase_file_format(tmp_path):
    text = (F3_HEADER + "[modulus]\nQ = 0 0 0 0 1\n"
            "[params]\nmu = 1\nrho = 2\n"
            "[target]\nkind = exp_polynomial\nparams = 0 0.3+0.1j\n")
    code, out = run_cli(tmp_path, "fit", text)
    assert code == 0
    lines = (out / "phases.txt").read_text().splitlines()
    assert lines[0] == "# schema=phases/v1"
    # three quadratic primes, each "P-text theta" with 15 decimals
    assert len(lines) == 4
    assert all(re.fullmatch(r"[0-2] [0-2] [0-2] 0\.\d{15}", ln)
               for ln in lines[1:])
    report = json.loads((out / "fit.json").read_text())
    assert report["n_primes"] == 3 and report["achieved"] < 1.0


def test_sieve_csv(tmp_path):
    text = (F3_HEADER + "[modulus]\nQ = 0 0 0 0 1\n"
            "[params]\ndelta = 0.51\n"
            "[phases]\n1 1 = 0.23\n2 1 = 0.71\n")
    code, out = run_cli(tmp_path, "sieve", text)
    assert code == 0
    lines = (out / "sieve.csv").read_text().splitlines()
    assert lines[0] == "# schema=sieve/v1" and lines[1] == "exponents,parity"
    assert len(lines) == 2 + 53
    report = json.loads((out / "sieve.json").read_text())
    assert report["size"] == 53 and report["phi"] == 54


def test_search_outputs_and_determinism(tmp_path):
    text = (F3_HEADER + "[modulus]\nQ = 0 0 0 1\n"
            "[params]\nepsilon = 0.5\n"
            "[target]\nkind = constant\nparams = 1\n"
            "[grid]\nn_radii = 4\nn_angles = 5\n")
    code, out1 = run_cli(tmp_path, "search", text, name="s1")
    assert code == 0
    code, out2 = run_cli(tmp_path, "search", text, name="s2")
    assert code == 0
    for fname in ("search.csv", "search.json", "search_hist.csv",
                  "search_proportion.csv"):
        a = (out1 / fname).read_bytes()
        b = (out2 / fname).read_bytes()
        assert a == b
        assert b"\r" not in a
    lines = (out1 / "search.csv").read_text().splitlines()
    assert lines[0] == "# schema=search/v1"
    assert lines[1] == "exponents,distance,sieve_pass,parity"
    assert len(lines) == 2 + 17
    assert all(line.split(",")[3] in ("even", "odd") for line in lines[2:])
    prop = (out1 / "search_proportion.csv").read_text().splitlines()
    assert prop[1] == "deg_q,epsilon,proportion"
    assert prop[2].startswith("3,0.5,")
    report = json.loads((out1 / "search.json").read_text())
    assert report["searched"] == 17 and report["sieve_size"] is None


def test_guided_outputs(tmp_path):
    text = (F3_HEADER + "[modulus]\nQ = 0 0 0 0 0 1\n"
            "[params]\nmu = 1\n"
            "[target]\nkind = constant\nparams = 1\n")
    code, out = run_cli(tmp_path, "guided", text)
    assert code == 0
    report = json.loads((out / "guided.json").read_text())
    assert report["sieve_size"] == report["searched"]
    lines = (out / "guided.csv").read_text().splitlines()
    assert len(lines) == 2 + report["searched"]


def test_splitgb_report(tmp_path):
    text = (F3_HEADER + "[modulus]\nQ = 0 0 0 0 1\n"
            "[params]\npeak_K = 2\npeak_delta = 0.25\nK = 6\n"
            "[phases]\n1 0 1 = 0.1\n2 1 1 = 0.1\n2 2 1 = 0.1\n"
            "[grid]\nplane = s\nn_sigma = 6\nn_t = 6\n")
    code, out = run_cli(tmp_path, "splitgb", text)
    assert code == 0
    report = json.loads((out / "splitgb.json").read_text())
    assert report["good_size"] + report["bad_size"] == 53
    assert report["m2_mass"] >= 0


def test_unknown_key_exits_2(tmp_path):
    text = F3_HEADER + "bogus = 1\n[params]\ndegree = 2\n"
    code, _ = run_cli(tmp_path, "primes", text)
    assert code == 2


def test_no_strict_ignores_unknown_key(tmp_path, capsys):
    text = F3_HEADER + "bogus = 1\n[params]\ndegree = 2\n"
    code, _ = run_cli(tmp_path, "primes", text, extra=("--no-strict",))
    assert code == 0
    assert "ignoring key" in capsys.readouterr().err


def test_parse_error_exits_2(tmp_path):
    code, _ = run_cli(tmp_path, "peak", "[params\nK = 2\n")
    assert code == 2
    code, _ = run_cli(tmp_path, "peak", "[params]\nK = 2\nK = 3\ndelta = 0.2\n")
    assert code == 2


def test_missing_and_malformed_values_exit_2(tmp_path):
    code, _ = run_cli(tmp_path, "primes", F3_HEADER)
    assert code == 2
    code, _ = run_cli(tmp_path, "primes", F3_HEADER + "[params]\ndegree = two\n")
    assert code == 2
    bad_poly = F3_HEADER + "[modulus]\nQ = 0 7 1\n"
    code, _ = run_cli(tmp_path, "phi", bad_poly)
    assert code == 2
    code, _ = run_cli(tmp_path, "search",
                      F3_HEADER + "[modulus]\nQ = 0 0 0 1\n"
                      "[params]\nepsilon = 0.5\n"
                      "[target]\nkind = fancy\nparams = 1\n")
    assert code == 2


def test_missing_config_file_exits_2(tmp_path):
    code = main(["primes", "--config", str(tmp_path / "absent.ini")])
    assert code == 2


def test_grid_plane_key_mismatch_exits_2(tmp_path):
    text = (F3_HEADER + "[modulus]\nQ = 0 0 0 1\n[params]\nK = 2\n"
            "[grid]\nplane = u\nn_sigma = 4\n")
    code, _ = run_cli(tmp_path, "hybrid", text)
    assert code == 2


def test_config_round_trip_identity():
    text = (F3_HEADER + "[modulus]\nQ = 0 0 0 0 1\n"
            "[params]\nK = 2\ndelta = 0.25\n"
            "[phases]\n1 1 = 0.23\n2 1 = 0.71\n")
    c1 = parse_config(text, "mvg")
    c2 = parse_config(serialize_config(c1), "mvg")
    assert c1 == c2
    with pytest.raises(ConfigError):
        parse_config(text, "counting")
    with pytest.raises(ConfigError):
        parse_config("[DEFAULT]\nx = 1\n[params]\n", "peak")


def test_out_dir_from_config(tmp_path):
    dest = tmp_path / "from_config"
    cfg = tmp_path / "c.ini"
    cfg.write_text("[params]\nK = 2\ndelta = 0.25\n"
                   f"[run]\nout = {dest}\n", encoding="utf-8")
    assert main(["peak", "--config", str(cfg)]) == 0
    assert (dest / "peak.json").exists()
