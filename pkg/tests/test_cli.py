import json

import pytest

from tensorideals import cli
from tensorideals.cli import RunConfig, main, parse_bipartition, parse_partition, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out) if out else None


def test_ideal_check_example(capsys):
    code, rep = run_json(capsys, "ideal-check", "--flavor", "O", "--delta", "-1", "--j", "1", "--lambda", "4,4")
    assert code == 0 and rep["in_ideal"] is True and rep["schema"] == 1


def test_params_example(capsys):
    code, rep = run_json(capsys, "params", "--flavor", "O", "--delta", "3", "--j", "1")
    assert code == 0 and (rep["m"], rep["n"], rep["r"]) == (3, 0, 4)


def test_nu_example(capsys):
    code, rep = run_json(capsys, "nu", "--flavor", "P", "--j", "2")
    assert code == 0 and rep["nu"] == [3, 3]


def test_lambda_set_json_matches_interface(capsys):
    _, rep = run_json(capsys, "lambda-set", "--flavor", "O", "--delta", "-1", "--j", "1")
    assert rep["lambda_set"] == [[4], [3, 1], [2, 2]]


def test_lr_and_dual(capsys):
    _, rep = run_json(capsys, "lr", "--lam", "2,1", "--mu", "2,1", "--nu", "3,2,1")
    assert rep["coefficient"] == 2
    _, rep = run_json(capsys, "dual", "--lam", "3,1", "--mu", "3,1", "--a", "2", "--b", "4")
    assert rep["dual"] is True


def test_invalid_parameters_exit_2(capsys):
    code, out, err = run(capsys, "params", "--flavor", "O", "--j", "1")
    assert code == 2 and "delta" in err and out == ""
    code, _, err = run(capsys, "ideal-check", "--flavor", "O", "--delta", "1", "--j", "1", "--lambda", "1,3")
    assert code == 2
    code, _, _ = run(capsys, "ideal-check", "--flavor", "S", "--t", "3", "--j", "1", "--lambda", "1")
    assert code == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["params", "--flavor", "X", "--j", "1"])
    assert exc.value.code == 2


def test_sft_o3_agrees(capsys, tmp_path):
    code, rep = run_json(capsys, "--cache-dir", str(tmp_path), "sft", "--flavor", "O", "--m", "3", "--n", "0",
                         "--r", "1..4")
    assert code == 0 and rep["all_agree"]
    assert [row["kernel_dim"] for row in rep["rows"]] == [0, 0, 0, 14]
    assert rep["provenance"]["critical_rank"] == "paper-threshold"


def test_sft_pe_and_s(capsys):
    code, rep = run_json(capsys, "sft", "--flavor", "P", "--pe-n", "1", "--r", "1..3")
    assert code == 0 and [row["kernel_dim"] for row in rep["rows"]] == [0, 0, 5]
    code, rep = run_json(capsys, "sft", "--flavor", "S", "--t", "4", "--k", "1..3")
    assert code == 0 and [row["kernel_dim"] for row in rep["rows"]] == [0, 0, 16]


def test_sft_disagreement_exits_3(capsys, monkeypatch):
    monkeypatch.setattr(cli, "kernel_dim_at_threshold", lambda *a, **k: 99)
    code, rep = run_json(capsys, "sft", "--flavor", "O", "--m", "0", "--n", "1", "--r", "2")
    assert code == 3 and rep["all_agree"] is False


def test_budget_exit_4(capsys):
    code, rep = run_json(capsys, "oracle-rank", "--flavor", "O", "--m", "3", "--r", "6", "--budget-mb", "1")
    assert code == 4 and rep["error"] == "budget"


def test_oracle_rank_with_invariants(capsys):
    code, rep = run_json(capsys, "oracle-rank", "--flavor", "O", "--m", "3", "--r", "2", "--invariants")
    assert code == 0 and rep["phi_rank"] == 3 and rep["invariant_dim"] == 1


def test_generator_commands(capsys):
    code, rep = run_json(capsys, "generator", "--flavor", "TL", "--delta", "-1", "--l", "3")
    assert code == 0 and rep["alpha"] == "1" and rep["annihilated"] is True and len(rep["f"]) == 2
    code, rep = run_json(capsys, "generator", "--flavor", "O", "--m", "0", "--n", "1")
    assert code == 0 and rep["quasi_idempotent"] is True
    assert rep["truncations"] == [{"r": 3, "truncation_dim": 10, "kernel_dim": 10, "agree": True}]


def test_negligible_commands(capsys):
    code, rep = run_json(capsys, "negligible", "--flavor", "partition", "--t", "4", "--k", "1..3", "--compare-oracle")
    assert code == 0 and [row["radical_dim"] for row in rep["rows"]] == [0, 0, 16]
    code, rep = run_json(capsys, "negligible", "--flavor", "tl", "--delta", "-1", "--k", "3", "--jw-l", "3")
    assert code == 0 and rep["rows"][0]["agree"] is True
    code, _, err = run(capsys, "negligible", "--flavor", "periplectic", "--delta", "0", "--k", "2")
    assert code == 2 and "trace" in err


def test_warm_cache_is_byte_identical(capsys, tmp_path):
    argv = ["--cache-dir", str(tmp_path), "sft", "--flavor", "O", "--m", "0", "--n", "1", "--r", "1..3"]
    first = run(capsys, *argv)
    files = sorted(p.name for p in tmp_path.iterdir())
    second = run(capsys, *argv)
    assert first == second and files and sorted(p.name for p in tmp_path.iterdir()) == files


def test_jobs_do_not_change_output(capsys, tmp_path):
    argv = ["sft", "--flavor", "GL", "--m", "1", "--r", "1..2"]
    serial = run(capsys, *argv)
    parallel = run(capsys, "--jobs", "2", *argv)
    assert serial == parallel


@pytest.mark.parametrize("fmt", ["csv", "pretty"])
def test_other_formats(capsys, fmt):
    code, out, _ = run(capsys, "--format", fmt, "sft", "--flavor", "O", "--m", "2", "--r", "1..3")
    assert code == 0 and "kernel_dim" in out


def test_run_config_round_trip():
    cfg = RunConfig("sft", "GL", {"m": 1}, [(1, 0), 2], "/tmp/c", "csv", 100.0, 2)
    assert RunConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg


def test_parsers():
    assert parse_partition("3,1") == (3, 1) and parse_partition("-") == ()
    assert parse_bipartition("1,1|").white == ()
    assert parse_range("1..3") == [1, 2, 3] and parse_range("2,4") == [2, 4]
