import json
import os
import pathlib

import pytest

import jroc

DATA = pathlib.Path(os.environ.get("JROC_DATA_DIR", pathlib.Path(__file__).parents[2] / "data"))


@pytest.fixture(scope="module")
def iris_parts():
    d = jroc.load_csv(str(DATA / "iris.csv"))
    return jroc.split_dataset(d, [0.5, 0.5], 7)


def test_load_and_split(iris_parts):
    train, test = iris_parts
    assert (train.m, train.c) == (4, 3)
    assert train.n + test.n == 150


def test_lattice_and_searches_agree(iris_parts):
    train, test = iris_parts
    ctx = jroc.uniform_context(train.m, train.c)
    model = jroc.train("nb", train)
    full = jroc.enumerate_full_lattice(model, "nb", test, ctx)
    assert len(full) == 16
    by_cfg = {p.cfg: p for p in full}
    # Uniform test costs: TC is the share of purchased attributes.
    for cfg, p in by_cfg.items():
        assert p.mean_tc == pytest.approx(cfg.count("1") / 4)
    for method in ("bmc", "btc", "bjc", "rnd"):
        trace = jroc.search(model, "nb", test, ctx, method, alpha=0.5, seed=3)
        assert trace.budget == 11
        for p in trace.visited:
            assert p == by_cfg[p.cfg]
    best = jroc.select_best(full, 0.5)
    assert best.jc(0.5) == pytest.approx(min(p.jc(0.5) for p in full))
    hull = jroc.lower_hull(full)
    assert best in hull


def test_validation_errors_map_to_value_error(iris_parts):
    train, _ = iris_parts
    with pytest.raises(ValueError):
        jroc.train("svm", train)
    with pytest.raises(ValueError):
        jroc.CostContext([1.0], [[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(OSError):
        jroc.load_csv(str(DATA / "absent.csv"))


def test_stats_ranks_and_cd():
    assert jroc.average_ranks([[1.0, 2.0, 2.0], [3.0, 1.0, 2.0]]) == [2.0, 1.75, 2.25]
    assert jroc.nemenyi_critical_difference(5, 30) == pytest.approx(1.1137013, abs=1e-6)


def test_experiment_writes_report(tmp_path):
    cfg = {
        "datasets": [str(DATA / "iris.csv")],
        "models": [{"id": "nb", "kind": "naive_bayes"}],
        "repetitions": 1,
        "alpha_grid": [0.5],
    }
    path = tmp_path / "exp.json"
    path.write_text(json.dumps(cfg))
    cells = jroc.run_experiment(str(path), str(tmp_path / "out"))
    assert cells == 5
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report
    assert (tmp_path / "out" / "result_matrix.csv").exists()
