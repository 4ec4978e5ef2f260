import json
import math

import numpy as np
import pytest

from cstgl import cli, data
from cstgl.experiment import ConfigError, RunConfig, grid_search, run_experiment
from cstgl.solver import Hyperparams


def write_view(path, rows):
    path.write_text("\n".join(",".join(str(x) for x in r) for r in rows) + "\n")


def test_load_two_views(tmp_path):
    rng = np.random.default_rng(0)
    write_view(tmp_path / "view_1.csv", rng.standard_normal((4, 3)))
    write_view(tmp_path / "view_2.csv", rng.standard_normal((4, 5)))
    (tmp_path / "labels.csv").write_text("0\n0\n1\n1\n")
    ds = data.load_dataset(tmp_path)
    assert (ds.m, ds.n) == (2, 4)
    assert [v.shape for v in ds.views] == [(3, 4), (5, 4)]
    assert ds.n_classes == 2


def test_views_sorted_numerically(tmp_path):
    for i in (1, 2, 10):
        write_view(tmp_path / f"view_{i}.csv", np.full((3, i), float(i)))
    ds = data.load_dataset(tmp_path)
    assert [v.shape[0] for v in ds.views] == [1, 2, 10]
    assert ds.labels is None


def test_inconsistent_rows(tmp_path):
    write_view(tmp_path / "view_1.csv", np.zeros((4, 2)))
    write_view(tmp_path / "view_2.csv", np.zeros((5, 2)))
    with pytest.raises(data.InconsistentSampleCount):
        data.load_dataset(tmp_path)


def test_missing_views(tmp_path):
    with pytest.raises(data.MissingViews):
        data.load_dataset(tmp_path)


def test_parse_error_names_file_and_line(tmp_path):
    (tmp_path / "view_1.csv").write_text("1,2\n3,x\n")
    with pytest.raises(data.ParseError, match=r"view_1.csv:2"):
        data.load_dataset(tmp_path)


def test_save_load_round_trip(tmp_path):
    ds = data.synth_dataset(5, 2, 2, 4, 0.3, seed=1)
    ds.views[0][0, 0] = 0.1 + 0.2
    back = data.load_dataset(data.save_dataset(ds, tmp_path / "ds"))
    for a, b in zip(ds.views, back.views):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(ds.labels, back.labels)


def test_synth_noise_free_and_deterministic():
    ds = data.synth_dataset(4, 3, 2, 5, 0.0, seed=3)
    for v in ds.views:
        assert np.unique(v.T, axis=0).shape[0] == 3
    a, b = data.synth_dataset(4, 3, 2, 5, 0.2, seed=3), data.synth_dataset(4, 3, 2, 5, 0.2, seed=3)
    for x, y in zip(a.views, b.views):
        np.testing.assert_array_equal(x, y)


def test_dataset_validation():
    with pytest.raises(data.InconsistentSampleCount):
        data.MultiViewDataset([np.zeros((2, 3)), np.zeros((2, 4))])
    with pytest.raises(data.DatasetError):
        data.MultiViewDataset([np.zeros((2, 3))], labels=[1, 1, 1])


def small_config(**kw):
    return RunConfig(hyperparams=Hyperparams(k_neighbors=5), trials=2, **kw)


def test_run_experiment_schema(tmp_path):
    ds = data.synth_dataset(10, 2, 2, 6, 0.1, seed=0)
    out = tmp_path / "res.json"
    res = run_experiment(ds, small_config(output_path=str(out), export_affinity=True))
    on_disk = json.loads(out.read_text())
    assert on_disk["schema_version"] == 1
    expected = {
        "schema_version", "dataset", "config", "cluster_count", "converged", "iterations",
        "residual_history", "trials", "mean", "std", "wall_time_s", "affinity_path",
    }
    assert set(on_disk) == expected
    assert len(on_disk["trials"]) == 2
    assert on_disk["mean"]["acc"] == 1.0
    S_af = np.loadtxt(res["affinity_path"], delimiter=",")
    assert S_af.shape == (20, 20)
    np.testing.assert_array_equal(S_af, S_af.T)
    again = run_experiment(ds, small_config())
    assert again["trials"] == res["trials"]


def test_run_experiment_needs_cluster_count():
    ds = data.synth_dataset(5, 2, 1, 3, 0.1)
    ds.labels = None
    with pytest.raises(ConfigError):
        run_experiment(ds, small_config())
    res = run_experiment(ds, small_config(cluster_count=2))
    assert res["mean"] is None and res["trials"][0]["metrics"] is None


def test_run_experiment_infinite_tol():
    ds = data.synth_dataset(5, 2, 1, 3, 0.1)
    cfg = RunConfig(hyperparams=Hyperparams(k_neighbors=3, tol=math.inf), trials=1)
    res = run_experiment(ds, cfg)
    assert res["iterations"] == 1 and res["converged"]


def test_grid_single_cell_matches_run():
    ds = data.synth_dataset(8, 2, 2, 5, 0.1, seed=2)
    cfg = small_config()
    g = grid_search(ds, [10.0], [100.0], [10.0], cfg)
    r = run_experiment(ds, cfg)
    assert len(g["rows"]) == 1
    assert g["best"]["mean"] == r["mean"]


def test_grid_three_cubed(synth):
    cfg = RunConfig(trials=1)
    g = grid_search(synth, [0.1, 1, 10], [1, 10, 100], [1, 10, 100], cfg)
    assert len(g["rows"]) == 27
    assert g["best"]["mean"]["acc"] == max(r["mean"]["acc"] for r in g["rows"])


def test_config_round_trip(tmp_path):
    cfg = RunConfig(hyperparams=Hyperparams(alpha=1.0, tol=math.inf), cluster_count=3)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert RunConfig.from_file(path) == cfg
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"bogus": 1})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"hyperparams": {"alpha": -1}})


def test_cli_synth_run_eval(tmp_path, capsys):
    ds_dir = tmp_path / "ds"
    assert cli.main(["-q", "synth", "--out", str(ds_dir), "--clusters", "2", "--per-cluster", "8",
                     "--views", "2", "--dim", "5", "--sigma", "0.1", "--seed", "1"]) == 0
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"hyperparams": {"k_neighbors": 4}, "trials": 2}))
    out = tmp_path / "res.json"
    assert cli.main(["-q", "run", "--data", str(ds_dir), "--config", str(cfg), "--output", str(out),
                     "--alpha", "5"]) == 0
    res = json.loads(out.read_text())
    assert res["config"]["hyperparams"]["alpha"] == 5.0
    assert res["config"]["hyperparams"]["k_neighbors"] == 4
    assert res["mean"]["acc"] == 1.0
    pred = tmp_path / "pred.csv"
    data.write_labels(pred, res["trials"][0]["labels"])
    capsys.readouterr()
    assert cli.main(["eval", "--pred", str(pred), "--truth", str(ds_dir / "labels.csv")]) == 0
    assert json.loads(capsys.readouterr().out)["acc"] == 1.0


def test_cli_grid_to_stdout(tmp_path, capsys):
    data.save_dataset(data.synth_dataset(6, 2, 2, 4, 0.1), tmp_path)
    assert cli.main(["-q", "grid", "--data", str(tmp_path), "--alpha", "1,10", "--beta", "100",
                     "--gamma", "10", "--trials", "1"]) == 0
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 2


def test_cli_errors(tmp_path, capsys):
    assert cli.main(["-q", "run", "--data", str(tmp_path)]) == 1
    assert "[load]" in capsys.readouterr().err
    ds = data.synth_dataset(5, 2, 1, 3, 0.1)
    ds.labels = None
    data.save_dataset(ds, tmp_path)
    assert cli.main(["-q", "run", "--data", str(tmp_path)]) == 2
    assert "cluster count" in capsys.readouterr().err
    assert cli.main(["-q", "run", "--data", str(tmp_path), "--alpha", "-1"]) == 2


def test_cli_logs_iterations(tmp_path, caplog):
    data.save_dataset(data.synth_dataset(5, 2, 1, 3, 0.1), tmp_path)
    with caplog.at_level("INFO", logger="cstgl.solver"):
        assert cli.main(["run", "--data", str(tmp_path), "--trials", "1", "--max-iter", "3",
                         "--k-neighbors", "3", "--output", str(tmp_path / "r.json")]) == 0
    lines = [r.getMessage() for r in caplog.records if r.name == "cstgl.solver"]
    assert len(lines) == 3 and lines[0].startswith("iter=1 r1=")
