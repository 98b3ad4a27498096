import json
import random
from pathlib import Path

import pytest
from click.testing import CliRunner

from patclass.cli import (ConfigError, RunConfig, load_config, main,
                          run_pairwise_tau, run_pipeline)


def spmf_fixture(seed=0, n=16):
    """Two-class collection: positives carry a labeled triangle, negatives a
    labeled square; shared chain scaffolding plus random decoration."""
    rng = random.Random(seed)
    out = []
    for gid in range(n):
        positive = gid < n // 2
        lines = [f"t # {gid} {1 if positive else 0}"]
        labels = [0, 0, 1, 1, 2]
        for vid, lab in enumerate(labels):
            lines.append(f"v {vid} {lab}")
        edges = {(0, 1, 0), (1, 2, 0), (2, 3, 0)}
        if positive:
            edges.add((0, 2, 1))  # closes a labeled triangle 0-1-2
        else:
            edges.add((3, 4, 1))
        if rng.random() < 0.5:
            edges.add((2, 4, 0))
        for (u, v, el) in sorted(edges):
            lines.append(f"e {u} {v} {el}")
        out.append("\n".join(lines))
    return "\n".join(out) + "\n"


@pytest.fixture
def dataset_file(tmp_path):
    path = tmp_path / "toy.spmf"
    path.write_text(spmf_fixture())
    return path


def base_config(dataset_file, tmp_path, **kw):
    cfg = RunConfig()
    cfg.dataset = (str(dataset_file),)
    cfg.out = str(tmp_path / "out")
    cfg.max_edges = 3
    cfg.threshold_pct = 0.0
    cfg.measures = ("Sup", "AbsSupDif", "GR", "Conf")
    cfg.k_folds = 4
    for key, value in kw.items():
        setattr(cfg, key, value)
    cfg.validate()
    return cfg


class TestConfig:
    def test_file_and_overrides(self, tmp_path):
        cfile = tmp_path / "run.cfg"
        cfile.write_text("# comment\nthreshold_pct = 15\nmeasures = Sup, GR\n"
                         "seed = 7\n")
        cfg = load_config(str(cfile), ["k_folds=3"])
        assert cfg.threshold_pct == 15.0
        assert cfg.measures == ("Sup", "GR")
        assert cfg.seed == 7 and cfg.k_folds == 3

    def test_unknown_key(self, tmp_path):
        cfile = tmp_path / "run.cfg"
        cfile.write_text("bogus = 1\n")
        with pytest.raises(ConfigError):
            load_config(str(cfile), [])

    def test_percent_parsing(self):
        cfg = RunConfig()
        cfg.min_support = "10%"
        assert cfg.resolve_min_support(44) == 5  # ceil(4.4)
        cfg.min_support = "0%"
        assert cfg.resolve_min_support(44) == 1
        cfg.s = "20%"
        assert cfg.resolve_s(10) == 2

    def test_invalid_values(self):
        for key, value in [("s", "0"), ("min_support", "0"),
                           ("rbo_p", 1.5), ("threshold_pct", 120.0)]:
            cfg = RunConfig()
            setattr(cfg, key, value)
            with pytest.raises(ConfigError):
                cfg.validate()


class TestPipeline:
    def test_artifacts_and_summary(self, dataset_file, tmp_path):
        cfg = base_config(dataset_file, tmp_path)
        summary = run_pipeline(cfg)
        out = Path(cfg.out)
        for name in ("patterns.spmf", "pattern_supports.txt", "footprints.csv",
                     "contingency.csv", "clusters.csv", "dendrogram.csv",
                     "scores.csv", "pipeline_f1.csv", "summary.json"):
            assert (out / name).exists(), name
        on_disk = json.loads((out / "summary.json").read_text())
        assert set(on_disk) == {
            "dataset", "n_graphs", "n_pos", "n_neg", "min_support",
            "n_patterns", "truncated", "n_representatives", "threshold_pct",
            "abs_threshold", "s", "measures", "timings"}
        assert summary["n_graphs"] == 16

    def test_threshold0_reps_equal_distinct_footprints(self, dataset_file, tmp_path):
        from patclass import footprints, graphdata, miner
        cfg = base_config(dataset_file, tmp_path, s="100%")
        summary = run_pipeline(cfg)
        ds = graphdata.parse_spmf(dataset_file.read_text())
        mined = miner.mine_frequent(ds, 1, max_edges=3)
        mat = footprints.build_matrix(mined, ds)
        groups = footprints.distinct_footprint_groups(mat)
        assert summary["n_representatives"] == len(groups)

    def test_byte_identical_reruns(self, dataset_file, tmp_path):
        cfg1 = base_config(dataset_file, tmp_path)
        cfg1.out = str(tmp_path / "a")
        run_pipeline(cfg1)
        cfg2 = base_config(dataset_file, tmp_path)
        cfg2.out = str(tmp_path / "b")
        run_pipeline(cfg2)
        for name in ("patterns.spmf", "pattern_supports.txt", "footprints.csv",
                     "contingency.csv", "clusters.csv", "dendrogram.csv",
                     "scores.csv", "pipeline_f1.csv"):
            a = (tmp_path / "a" / name).read_bytes()
            b = (tmp_path / "b" / name).read_bytes()
            assert a == b, name


class TestCliCommands:
    def test_pipeline_command_and_exit_zero(self, dataset_file, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, [
            "pipeline", "--dataset", str(dataset_file),
            "--out", str(tmp_path / "out"),
            "--set", "max_edges=3", "--set", "measures=Sup,GR",
            "--set", "threshold_pct=0", "--set", "k_folds=4"])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "out" / "summary.json").exists()

    def test_s_zero_exits_two(self, dataset_file, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, [
            "pipeline", "--dataset", str(dataset_file),
            "--out", str(tmp_path / "out"), "--set", "s=0"])
        assert result.exit_code == 2

    def test_missing_dataset_exits_two(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, ["pipeline", "--out", str(tmp_path / "o")])
        assert result.exit_code == 2

    def test_unreadable_dataset_exits_one(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, [
            "pipeline", "--dataset", str(tmp_path / "missing.spmf"),
            "--out", str(tmp_path / "out")])
        assert result.exit_code == 1
        assert "stage 'load'" in result.output

    def test_cluster_sweep_monotone(self, dataset_file, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, [
            "cluster-sweep", "--dataset", str(dataset_file),
            "--out", str(tmp_path / "out"),
            "--set", "max_edges=3", "--set", "k_folds=4",
            "--thresholds", "0,25,50,100"])
        assert result.exit_code == 0, result.output
        rows = (tmp_path / "out" / "cluster_sweep.csv").read_text().strip().splitlines()
        counts = [int(r.split(",")[2]) for r in rows[1:]]
        assert counts == sorted(counts, reverse=True)
        assert counts[-1] == 1  # threshold 100% -> one cluster
        # the threshold-0 row drops exactly to the distinct-footprint count
        from patclass import footprints, graphdata, miner
        ds = graphdata.parse_spmf(dataset_file.read_text())
        mat = footprints.build_matrix(miner.mine_frequent(ds, 1, max_edges=3), ds)
        assert counts[0] == len(footprints.distinct_footprint_groups(mat))

    def test_properties_command(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, [
            "properties", "--out", str(tmp_path / "out"),
            "--set", "property_n=5", "--set", "measures=Conf,GR,Dep,ColStr"])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "out" / "properties.csv").exists()
        assert "deviation" in result.output

    def test_stats_command(self, dataset_file, tmp_path):
        runner = CliRunner()
        result = runner.invoke(main, [
            "stats", "--dataset", str(dataset_file), "--out", str(tmp_path / "o")])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["n_graphs"] == 16
        assert payload["avg_vertices"] == 5.0
        assert payload["density_convention"]  # stats flag their convention

    def test_stats_on_tudataset_dir(self, tmp_path):
        d = tmp_path / "TOY"
        d.mkdir()
        (d / "TOY_A.txt").write_text("1, 2\n2, 1\n3, 4\n4, 3\n")
        (d / "TOY_graph_indicator.txt").write_text("1\n1\n2\n2\n")
        (d / "TOY_graph_labels.txt").write_text("0\n1\n")
        runner = CliRunner()
        result = runner.invoke(main, [
            "stats", "--dataset", str(d), "--out", str(tmp_path / "o"),
            "--set", "format=tudataset", "--set", "tu_name=TOY"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["n_graphs"] == 2 and payload["avg_edges"] == 1.0


class TestPairwiseTau:
    def test_blocks_and_matrix(self, tmp_path):
        paths = []
        for seed in (1, 2):
            p = tmp_path / f"d{seed}.spmf"
            p.write_text(spmf_fixture(seed=seed, n=12))
            paths.append(str(p))
        cfg = RunConfig()
        cfg.dataset = tuple(paths)
        cfg.out = str(tmp_path / "out")
        cfg.max_edges = 3
        cfg.threshold_pct = 0.0
        cfg.measures = ("Cover", "Sup", "Spec", "FPR", "Conf", "AbsSupDif")
        cfg.k_folds = 3
        cfg.validate()
        blocks = run_pairwise_tau(cfg)
        sets = [set(b) for b in blocks.blocks]
        assert {"Cover", "Sup"} in sets
        assert {"Spec", "FPR"} in sets
        out = Path(cfg.out)
        assert (out / "min_tau.csv").exists()
        assert (out / "blocks.csv").exists()
        assert (out / "tau_d1.csv").exists() and (out / "tau_d2.csv").exists()
        for (m1, m2), t in blocks.min_tau.items():
            assert blocks.min_tau[(m1, m2)] == t  # stored once per sorted pair


class TestGoldCommand:
    def test_gold_small_exact(self, tmp_path):
        p = tmp_path / "toy.spmf"
        p.write_text(spmf_fixture(seed=3, n=12))
        runner = CliRunner()
        result = runner.invoke(main, [
            "gold", "--dataset", str(p), "--out", str(tmp_path / "out"),
            "--set", "max_edges=2", "--set", "threshold_pct=40",
            "--set", "measures=Sup,GR", "--set", "k_folds=3",
            "--set", "s_grid=50,100", "--set", "exact_limit=12",
            "--set", "n_permutations=30"])
        assert result.exit_code == 0, result.output
        out = tmp_path / "out"
        for name in ("gold.csv", "gold_rbo.csv", "gold_f1.csv", "gold_curve.csv"):
            assert (out / name).exists(), name
        # at s = 100% every measure uses the full set: identical F1
        rows = (out / "gold_f1.csv").read_text().strip().splitlines()[1:]
        full = {r.split(",")[0]: r.split(",")[3] for r in rows
                if r.split(",")[1] == "100.0"}
        assert len(set(full.values())) == 1
        # the gold curve at full s matches that value too
        curve = (out / "gold_curve.csv").read_text().strip().splitlines()[1:]
        gold_full = [r.split(",")[2] for r in curve if r.split(",")[0] == "100.0"]
        assert gold_full[0] in set(full.values())

    def test_gold_vs_itself_rbo_one(self, tmp_path):
        # the gold ranking compared with itself scores 1 at every depth
        from patclass.rankcmp import rbo
        ranking = list(range(17))
        for s in (1, 5, 17):
            assert rbo(ranking, ranking, p=0.9, depth=s) == pytest.approx(1.0)
