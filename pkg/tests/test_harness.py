import itertools
import json
import math
import random

import pytest
from click.testing import CliRunner

from deamort.algorithms import make_algorithm
from deamort.cli import main as cli_main
from deamort.experiments import VerificationFailure, build_chain, run_experiment
from deamort.model import ModelTree
from deamort.optsearch import (
    OptLimitError,
    enumerate_realizations,
    enumerate_shapes,
    opt_bruteforce,
)
from deamort.reports import CostReport, compare, cost_histogram
from deamort.sequences import SequenceSpec, gen_sequence


def test_sequential_sequence():
    assert gen_sequence(SequenceSpec("sequential", 4, 4)) == [1, 2, 3, 4]
    assert gen_sequence(SequenceSpec("sequential", 3, 5)) == [1, 2, 3, 1, 2]


def test_bit_reversal_four():
    assert gen_sequence(SequenceSpec("bit-reversal", 4, 4)) == [1, 3, 2, 4]


def test_bit_reversal_requires_power_of_two():
    with pytest.raises(ValueError):
        SequenceSpec("bit-reversal", 6, 6)


def test_uniform_deterministic():
    a = gen_sequence(SequenceSpec("uniform", 4, 3, seed=9))
    b = gen_sequence(SequenceSpec("uniform", 4, 3, seed=9))
    assert a == b and len(a) == 3 and all(1 <= k <= 4 for k in a)


def test_zipf_and_working_set_params():
    z = gen_sequence(SequenceSpec("zipf:1.5", 16, 500, seed=1))
    assert z.count(1) > z.count(16)
    w = gen_sequence(SequenceSpec("working-set:4", 64, 400, seed=2))
    assert all(1 <= k <= 64 for k in w)
    # a narrow window keeps reuse high
    reuse = sum(1 for i in range(1, 400) if w[i] in w[max(0, i - 4):i])
    assert reuse > 100


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        SequenceSpec("mystery", 4, 4)


def test_opt_single_node():
    t = ModelTree.new_tree(1)
    assert opt_bruteforce(t, [1, 1, 1]) == 0


def test_opt_two_node_example():
    t = ModelTree.new_tree(2, [0, 1])  # root 1, right child 2
    assert opt_bruteforce(t, [2]) == 1


def test_opt_three_balanced():
    t = ModelTree.new_tree(3, "balanced")
    cost = opt_bruteforce(t, [3, 1])
    assert cost == enumerate_realizations(t, [3, 1], cost)
    assert enumerate_realizations(t, [3, 1], cost - 1) == -1


def test_opt_limits_refused():
    with pytest.raises(OptLimitError):
        opt_bruteforce(ModelTree.new_tree(7, "balanced"), [1])
    with pytest.raises(OptLimitError):
        opt_bruteforce(ModelTree.new_tree(3, "balanced"), [1] * 7)


def test_opt_matches_exhaustive_n3():
    for parents in enumerate_shapes(3):
        t = ModelTree.new_tree(3, parents)
        for s in itertools.product((1, 2, 3), repeat=2):
            cost = opt_bruteforce(t, list(s))
            assert enumerate_realizations(t, list(s), cost) == cost
            if cost:
                assert enumerate_realizations(t, list(s), cost - 1) == -1


def test_algorithms_never_beat_opt():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(2, 4)
        shapes = list(enumerate_shapes(n))
        parents = rng.choice(shapes)
        s = [rng.randint(1, n) for _ in range(3)]
        t0 = ModelTree.new_tree(n, parents)
        best = opt_bruteforce(t0, s)
        for algo in ("splay", "mtr", "static"):
            alg = make_algorithm(algo, ModelTree.new_tree(n, parents))
            cost = sum(alg.access(k).cost for k in s)
            assert cost >= best


def test_run_experiment_reports():
    spec = SequenceSpec("uniform", 32, 200, seed=5)
    rep = run_experiment("splay", "none", spec)
    assert rep.total_ops > 0
    assert rep.ratio_vs_baseline == 1.0
    assert sum(rep.per_access_histogram.values()) == 200
    rep2 = run_experiment("splay", "wrap", spec)
    assert rep2.total_ops > rep.total_ops
    assert rep2.max_depth_observed <= 13 * math.log2(32) + 14
    assert rep2.ratio_vs_baseline > 1.0


def test_run_experiment_online_chain_counters():
    spec = SequenceSpec("uniform", 64, 300, seed=6)
    rep = run_experiment("splay", "wrap+online", spec)
    assert rep.action_histogram and set(rep.action_histogram) <= {"AB", "ABC", "AC", "B", "BC"}
    assert rep.max_queue is not None and rep.max_queue <= 64


def test_report_json_roundtrip_and_determinism():
    spec = SequenceSpec("zipf", 16, 64, seed=7)
    r1 = run_experiment("mtr", "none", spec)
    r2 = run_experiment("mtr", "none", spec)
    assert r1.to_json() == r2.to_json()
    back = CostReport.from_json(r1.to_json())
    assert back == r1


def test_report_csv_columns():
    spec = SequenceSpec("uniform", 8, 16, seed=1)
    rep = run_experiment("static", "none", spec)
    lines = rep.emit("csv").splitlines()
    assert lines[0] == "algo,n,m,total,worst,maxdepth"
    assert lines[1].startswith("static,8,16,")


def test_compare_ratio_column():
    spec = SequenceSpec("uniform", 16, 64, seed=2)
    a = run_experiment("splay", "none", spec)
    b = run_experiment("splay", "wrap", spec)
    table = compare([a, b])
    last = table.strip().splitlines()[-1]
    ratio = float(last.split(",")[-1])
    assert ratio == pytest.approx(b.total_ops / a.total_ops, abs=1e-4)


def test_cost_histogram_buckets():
    h = cost_histogram([0, 1, 2, 3, 4, 9])
    assert h["0"] == 1 and h["1-1"] == 1 and h["2-3"] == 2 and h["4-7"] == 1 and h["8-15"] == 1


def test_report_includes_opt_on_tiny_instances():
    spec = SequenceSpec("uniform", 3, 3, seed=4)
    rep = run_experiment("splay", "none", spec, compute_opt=True)
    assert rep.opt_cost is not None
    assert rep.total_ops >= rep.opt_cost
    if rep.opt_cost:
        assert rep.ratio_vs_opt == pytest.approx(rep.total_ops / rep.opt_cost)


def test_plot_data_series():
    from deamort.reports import plot_data

    reps = [run_experiment("splay", "none", SequenceSpec("uniform", n, 32, seed=1))
            for n in (16, 8)]
    text = plot_data(reps)
    lines = text.strip().splitlines()
    assert lines[0] == "n,worst"
    assert lines[1].startswith("8,") and lines[2].startswith("16,")


def test_empty_sequence_run():
    rep = run_experiment("splay", "wrap", SequenceSpec("uniform", 8, 0, seed=0))
    assert rep.total_ops == 0 and rep.per_access_max == 0


def test_cli_gen_run_opt_verify(tmp_path):
    runner = CliRunner()
    out = runner.invoke(cli_main, ["gen", "--seq", "sequential", "--n", "4", "--m", "4"])
    assert out.exit_code == 0 and out.output == "1 2 3 4\n"

    rep_path = tmp_path / "r.json"
    out = runner.invoke(cli_main, [
        "run", "--algo", "splay", "--chain", "wrap", "--seq", "uniform",
        "--n", "16", "--m", "50", "--seed", "3", "--out", str(rep_path)])
    assert out.exit_code == 0, out.output
    rep = json.loads(rep_path.read_text())
    assert rep["algorithm"] == "splay" and rep["chain"] == "wrap"

    out = runner.invoke(cli_main, ["opt", "--n", "3", "--shape", "balanced", "--keys", "3,1"])
    assert out.exit_code == 0
    assert out.output.strip().isdigit()

    tree_path = tmp_path / "t.txt"
    trace_path = tmp_path / "tr.txt"
    tree_path.write_text(ModelTree.new_tree(3, "balanced").to_text())
    trace_path.write_text("L #\n")
    out = runner.invoke(cli_main, [
        "verify", "--tree", str(tree_path), "--trace", str(trace_path), "--keys", "1"])
    assert out.exit_code == 0 and "valid" in out.output

    trace_path.write_text("R #\n")
    out = runner.invoke(cli_main, [
        "verify", "--tree", str(tree_path), "--trace", str(trace_path), "--keys", "1"])
    assert out.exit_code == 1


def test_cli_compare(tmp_path):
    runner = CliRunner()
    paths = []
    for i, chain in enumerate(("none", "wrap")):
        p = tmp_path / f"r{i}.json"
        runner.invoke(cli_main, [
            "run", "--algo", "splay", "--chain", chain, "--seq", "uniform",
            "--n", "16", "--m", "40", "--out", str(p)])
        paths.append(str(p))
    out = runner.invoke(cli_main, ["compare", *paths])
    assert out.exit_code == 0
    assert out.output.splitlines()[0].endswith("ratio_vs_first")


def test_constants_env_override(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"C_SCAN": 99.0}))
    monkeypatch.setenv("DEAMORT_CONSTANTS", str(cfg))
    import importlib

    import deamort.constants as consts

    importlib.reload(consts)
    assert consts.FROZEN["C_SCAN"] == 99.0
    monkeypatch.delenv("DEAMORT_CONSTANTS")
    importlib.reload(consts)
    assert consts.FROZEN["C_SCAN"] != 99.0
