import json
import math
from pathlib import Path

import pytest

from labelkit.cli import main
from labelkit.jsonio import dumps_canonical, labeling_from_dict, labeling_to_dict, load_instance
from labelkit.synth import generate_instance


@pytest.fixture
def instance_file(tmp_path):
    from labelkit.jsonio import save_instance

    inst = generate_instance(n=8, k=2, seed=3)
    path = tmp_path / "sample.json"
    save_instance(inst, path)
    return path


def run(args):
    return main([str(a) for a in args])


class TestGen:
    def test_defaults_produce_the_reference_setup(self, tmp_path):
        out = tmp_path / "inst"
        assert run(["gen", "--out", out]) == 0
        files = sorted(out.glob("*.json"))
        assert len(files) == 100
        inst = load_instance(files[0])
        assert inst.n == 30
        assert inst.k == 5
        assert inst.screen_width == 300.0
        assert inst.label_width == 60.0

    def test_same_seed_identical_files(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run(["gen", "--count", 3, "--n", 10, "--seed", 5, "--out", a])
        run(["gen", "--count", 3, "--n", 10, "--seed", 5, "--out", b])
        for fa, fb in zip(sorted(a.glob("*.json")), sorted(b.glob("*.json"))):
            assert fa.read_bytes() == fb.read_bytes()

    def test_single_page_edge_case(self, tmp_path):
        out = tmp_path / "edge"
        assert run(["gen", "--count", 1, "--n", 5, "--k", 5, "--out", out]) == 0
        inst = load_instance(next(out.glob("*.json")))
        assert inst.n == inst.k == 5


class TestSolve:
    def test_multipage_states_count(self, instance_file, tmp_path, capsys):
        out = tmp_path / "lab.json"
        code = run([
            "solve", "--method", "multipage", "--input", instance_file,
            "--alpha", "0.5", "--output", out,
        ])
        assert code == 0
        d = json.loads(out.read_text())
        assert len(d["states"]) == math.ceil(8 / 2)
        assert d["optimal"] is True

    def test_budget_exceeded_writes_incumbent(self, tmp_path, capsys):
        from labelkit.jsonio import save_instance

        inst = generate_instance(n=12, k=3, seed=9, label_width=100)
        src = tmp_path / "big.json"
        save_instance(inst, src)
        out = tmp_path / "lab.json"
        code = run([
            "solve", "--method", "sliding", "--mode", "exact",
            "--input", src, "--alpha", "0.5", "--output", out,
        ])
        assert code == 4
        d = json.loads(out.read_text())
        assert d["optimal"] is False
        assert len(d["states"]) == 10

    def test_stacking_output_carries_stacks_and_states(self, instance_file, tmp_path):
        out = tmp_path / "lab.json"
        code = run([
            "solve", "--method", "stacking", "--input", instance_file,
            "--alpha", "0", "--output", out,
        ])
        assert code == 0
        d = json.loads(out.read_text())
        assert "stacks" in d and "states" in d
        assert len(d["stacks"]) == 2

    def test_mode_method_mismatch_is_usage_error(self, instance_file):
        with pytest.raises(SystemExit) as e:
            run([
                "solve", "--method", "multipage", "--mode", "exact",
                "--input", instance_file, "--alpha", "0.5",
            ])
        assert e.value.code == 2

    def test_invalid_alpha_is_usage_error(self, instance_file):
        with pytest.raises(SystemExit) as e:
            run([
                "solve", "--method", "multipage", "--input", instance_file,
                "--alpha", "1.5",
            ])
        assert e.value.code == 2

    def test_missing_input_is_data_error(self, tmp_path):
        code = run([
            "solve", "--method", "multipage", "--input", tmp_path / "nope.json",
            "--alpha", "0.5",
        ])
        assert code == 3

    def test_output_round_trips_bit_identically(self, instance_file, tmp_path):
        out = tmp_path / "lab.json"
        run([
            "solve", "--method", "sliding", "--input", instance_file,
            "--alpha", "0.3", "--iterations", "200", "--seed", "5",
            "--output", out,
        ])
        text = out.read_text()
        inst = load_instance(instance_file)
        again = dumps_canonical(
            labeling_to_dict(labeling_from_dict(json.loads(text)), inst)
        )
        assert text == again

    def test_k_override(self, instance_file, tmp_path):
        out = tmp_path / "lab.json"
        run([
            "solve", "--method", "multipage", "--input", instance_file,
            "--alpha", "0.5", "--k", "4", "--output", out,
        ])
        d = json.loads(out.read_text())
        assert d["k"] == 4
        assert len(d["states"]) == 2


class TestReports:
    def test_sweep_writes_csv_json_figure(self, tmp_path):
        src = tmp_path / "inst"
        run(["gen", "--count", 3, "--n", 6, "--k", 2, "--seed", 1, "--out", src])
        out = tmp_path / "sweep"
        code = run([
            "sweep-alpha", "--input", src, "--method", "multipage",
            "--step", "0.25", "--out", out,
        ])
        assert code == 0
        assert (out / "sweep.csv").exists()
        assert (out / "sweep.json").exists()
        assert (out / "sweep_curves.png").exists()
        rows = (out / "sweep.csv").read_text().strip().splitlines()
        assert len(rows) == 1 + 5  # header + alphas 0,.25,.5,.75,1
        d = json.loads((out / "sweep.json").read_text())
        assert d["rows"][0]["delta_w_mean"] == 0.0

    def test_eval_writes_tables_and_figures(self, tmp_path):
        src = tmp_path / "inst"
        run(["gen", "--count", 2, "--n", 6, "--k", 3, "--seed", 2, "--out", src])
        out = tmp_path / "eval"
        code = run([
            "eval", "--input", src, "--out", out, "--seeds", "2",
            "--iterations", "300", "--unconstrained",
        ])
        assert code == 0
        for name in (
            "eval_sliding.csv",
            "eval_summary.json",
            "eval_delta_h_hist.png",
            "eval_crossings.png",
            "eval_distance_hist.png",
        ):
            assert (out / name).exists(), name
        rows = (out / "eval_sliding.csv").read_text().strip().splitlines()
        assert len(rows) == 1 + 2

    def test_bench_small_grid(self, tmp_path):
        out = tmp_path / "bench"
        code = run([
            "bench", "--cells", "2x6", "--runs", "3", "--iterations", "50",
            "--methods", "multipage,stacking", "--out", out,
        ])
        assert code == 0
        assert (out / "bench.csv").exists()
        assert (out / "bench.json").exists()
        assert (out / "bench.png").exists()
        d = json.loads((out / "bench.json").read_text())
        assert len(d["rows"]) == 2
        assert "machine" in d
