"""Replication harness: spec resolution, aggregation, CSV contracts."""

import numpy as np
import pytest

from randpursuit import Objective, RngStream, RunRecord
from randpursuit.harness import (
    SUMMARY_HEADER,
    SWEEP_ALGORITHMS,
    TRAJECTORY_HEADER,
    ExperimentSpec,
    cell_tag,
    check_algorithm,
    execute_one,
    execute_runs,
    format_l,
    median_trajectory,
    resolve_memory,
    run_experiment,
    summarize,
    sweep_cells,
    trajectory_filename,
    write_trajectory_csv,
)


def _rec(its, seed=0, evals=None, success=True, algorithm="rp"):
    cps = [(0, 100.0, 1.0)]
    if success:
        cps.append((its, 1e-10, 0.5))
    return RunRecord(algorithm=algorithm, seed=seed, checkpoints=cps,
                     its_to_target=its if success else None,
                     evals=evals if evals is not None else (its or 0) + 1,
                     success=success, final_fval=1e-10 if success else 50.0)


# ------------------------------------------------------------ resolution


def test_resolve_memory_table():
    assert resolve_memory("epcma-1", 20) == 1
    assert resolve_memory("epcma-7", 20) == 7
    assert resolve_memory("epcma-n", 20) == 20
    assert resolve_memory("epcma-n", 80) == 80
    for n, m in ((20, 4), (40, 6), (60, 8), (80, 9), (100, 10)):
        assert resolve_memory("epcma-sqrtn", n) == m


def test_resolve_memory_validation():
    with pytest.raises(ValueError):
        resolve_memory("cma11", 20)
    with pytest.raises(ValueError):
        resolve_memory("epcma-0", 20)
    with pytest.raises(ValueError):
        resolve_memory("epcma-x", 20)


def test_check_algorithm():
    for a in SWEEP_ALGORITHMS:
        check_algorithm(a)
    with pytest.raises(ValueError):
        check_algorithm("gradient-descent")
    with pytest.raises(ValueError):
        check_algorithm("epcma-0")


def test_spec_validation():
    obj = Objective("fexp", 4, 10.0)
    with pytest.raises(ValueError):
        ExperimentSpec(objective=obj, algorithms=())
    with pytest.raises(ValueError):
        ExperimentSpec(objective=obj, algorithms=("rp", "rp"))
    with pytest.raises(ValueError):
        ExperimentSpec(objective=obj, algorithms=("rp",), runs=0)
    with pytest.raises(ValueError):
        ExperimentSpec(objective=obj, algorithms=("rp",), workers=0)
    with pytest.raises(ValueError):
        ExperimentSpec(objective=obj, algorithms=("rp",),
                       run_overrides={"nope": 5})
    with pytest.raises(ValueError):
        ExperimentSpec(objective="fexp", algorithms=("rp",))


def test_spec_start_point_protocol():
    quad = ExperimentSpec(objective=Objective("fexp", 4, 10.0), algorithms=("rp",))
    assert np.array_equal(quad.start_point(), np.ones(4))
    rosen = ExperimentSpec(objective=Objective("frosen", 4), algorithms=("rp",))
    assert np.array_equal(rosen.start_point(), np.zeros(4))
    shifted = ExperimentSpec(objective=Objective("fexp", 4, 10.0),
                             algorithms=("rp",), x0_value=2.5)
    assert np.array_equal(shifted.start_point(), np.full(4, 2.5))


def test_spec_curvature_bound_protocol():
    quad = ExperimentSpec(objective=Objective("fexp", 4, 10.0), algorithms=("sarp",))
    assert quad.sarp_bounds() == (1.0, 10.0)
    # spread-spectrum coefficients 4,7,10,13: extremes, not (1, L)
    lin = ExperimentSpec(objective=Objective("flin", 4, 10.0), algorithms=("sarp",))
    assert lin.sarp_bounds() == (4.0, 13.0)
    rosen = ExperimentSpec(objective=Objective("frosen", 20), algorithms=("sarp",))
    mu, lmax = rosen.sarp_bounds()
    assert mu == pytest.approx(0.4987531172057457, rel=1e-12)
    assert lmax == pytest.approx(1792.150126555934, rel=1e-12)
    partial = ExperimentSpec(objective=Objective("fexp", 4, 10.0),
                             algorithms=("sarp",), sarp_mu=0.5)
    assert partial.sarp_bounds() == (0.5, 10.0)
    full = ExperimentSpec(objective=Objective("flin", 4, 10.0),
                          algorithms=("sarp",), sarp_mu=0.5, sarp_lmax=99.0)
    assert full.sarp_bounds() == (0.5, 99.0)


def test_runs_for_override():
    spec = ExperimentSpec(objective=Objective("fexp", 4, 10.0),
                          algorithms=("rp", "sarp"), runs=51,
                          run_overrides={"rp": 11})
    assert spec.runs_for("rp") == 11
    assert spec.runs_for("sarp") == 51


# ------------------------------------------------------------- execution


def test_execute_one_seed_and_label():
    spec = ExperimentSpec(objective=Objective("fexp", 4, 10.0),
                          algorithms=("rp", "epcma-2"), runs=2, budget=50)
    rec = execute_one(spec, "rp", 1)
    assert rec.seed == RngStream.for_run(1000, 1).seed
    rec2 = execute_one(spec, "epcma-2", 0)
    assert rec2.algorithm == "epcma-2"


def test_common_random_numbers_across_algorithms():
    # equal run index means equal stream: both schemes see the same first
    # direction, so their first iterations coincide on the isotropic draw
    spec = ExperimentSpec(objective=Objective("fexp", 4, 10.0),
                          algorithms=("rp", "sarp"), budget=1)
    a = execute_one(spec, "rp", 3)
    b = execute_one(spec, "sarp", 3)
    assert a.seed == b.seed


def test_execute_runs_shape_and_order():
    spec = ExperimentSpec(objective=Objective("fexp", 4, 10.0),
                          algorithms=("sarp", "rp"), runs=3, budget=100,
                          run_overrides={"rp": 2})
    by_algo = execute_runs(spec)
    assert list(by_algo) == ["sarp", "rp"]
    assert len(by_algo["sarp"]) == 3
    assert len(by_algo["rp"]) == 2
    seeds = [r.seed for r in by_algo["sarp"]]
    assert seeds == [RngStream.for_run(1000, i).seed for i in range(3)]


def test_worker_count_does_not_change_records():
    kw = dict(objective=Objective("fexp", 4, 10.0),
              algorithms=("rp", "cma11"), runs=3, budget=400)
    seq = execute_runs(ExperimentSpec(workers=1, **kw))
    par = execute_runs(ExperimentSpec(workers=2, **kw))
    for algo in ("rp", "cma11"):
        for a, b in zip(seq[algo], par[algo]):
            assert a.checkpoints == b.checkpoints
            assert a.evals == b.evals
            assert a.final_fval == b.final_fval
            assert a.its_to_target == b.its_to_target


# ----------------------------------------------------------- aggregation


def test_median_trajectory_single_record():
    r = _rec(10)
    assert median_trajectory([r]) is r


def test_median_trajectory_odd_count():
    rs = [_rec(30, seed=1), _rec(10, seed=2), _rec(20, seed=3)]
    assert median_trajectory(rs).its_to_target == 20


def test_median_trajectory_even_count_takes_lower():
    rs = [_rec(40, seed=1), _rec(10, seed=2), _rec(30, seed=3), _rec(20, seed=4)]
    assert median_trajectory(rs).its_to_target == 20


def test_median_trajectory_tie_breaks_by_seed():
    rs = [_rec(20, seed=9), _rec(20, seed=4), _rec(10, seed=1), _rec(30, seed=2)]
    m = median_trajectory(rs)
    assert m.its_to_target == 20 and m.seed == 4


def test_median_trajectory_ignores_failures():
    rs = [_rec(50, seed=1), _rec(None, seed=2, success=False, evals=100)]
    assert median_trajectory(rs).its_to_target == 50
    assert median_trajectory([_rec(None, seed=2, success=False, evals=100)]) is None


def test_summarize_mixed_outcomes():
    rs = [_rec(10, seed=1, evals=11), _rec(30, seed=2, evals=31),
          _rec(20, seed=3, evals=21),
          _rec(None, seed=4, success=False, evals=100),
          _rec(None, seed=5, success=False, evals=100)]
    s = summarize("rp", rs)
    assert s.algorithm == "rp"
    assert s.runs == 5 and s.success_count == 3
    assert s.its_median == 20
    assert s.its_mean == pytest.approx(20.0)
    assert s.its_std == pytest.approx(10.0)  # sample std over {10,20,30}
    assert s.median_seed == 3
    assert s.evals_mean == pytest.approx((11 + 31 + 21 + 100 + 100) / 5.0)


def test_summarize_median_is_lower_of_even_count():
    rs = [_rec(10, seed=1), _rec(20, seed=2), _rec(30, seed=3), _rec(40, seed=4)]
    assert summarize("rp", rs).its_median == 20


def test_summarize_all_failed():
    rs = [_rec(None, seed=1, success=False, evals=7)]
    s = summarize("rp", rs)
    assert s.success_count == 0
    assert s.its_median is None and s.its_mean is None and s.its_std is None
    assert s.median_seed is None
    assert s.evals_mean == 7.0


def test_summarize_single_success_has_zero_std():
    s = summarize("rp", [_rec(10)])
    assert s.its_std == 0.0


def test_summarize_51_runs_median_index():
    rs = [_rec(100 + i, seed=i) for i in range(51)]
    assert summarize("rp", rs).its_median == 100 + 25  # 26th smallest


# ----------------------------------------------------------- file output


def test_format_l_tokens():
    assert format_l(None) == "na"
    assert format_l(1e4) == "10000"
    assert format_l(2.5) == "2.5"
    assert format_l(1e6) == "1000000"


def test_cell_tag_and_trajectory_filename():
    obj = Objective("fexp", 20, 1e4)
    assert cell_tag(obj) == "fexp_L10000_n20"
    assert trajectory_filename(obj, "sarp", 7) == "fexp_L10000_n20_sarp_run7.csv"
    assert cell_tag(Objective("frosen", 20)) == "frosen_Lna_n20"


def test_trajectory_csv_round_trip(tmp_path):
    rec = _rec(10, seed=3)
    p = tmp_path / "t.csv"
    write_trajectory_csv(p, rec)
    lines = p.read_text().splitlines()
    assert lines[0] == TRAJECTORY_HEADER == "iter,fval,sigma"
    assert lines[1] == "0,100.0,1.0"
    it, fv, sg = lines[2].split(",")
    assert (int(it), float(fv), float(sg)) == (10, 1e-10, 0.5)


def test_run_experiment_inventory_and_summary(tmp_path):
    spec = ExperimentSpec(objective=Objective("fexp", 4, 10.0),
                          algorithms=("rp", "cma11"), runs=3,
                          out_dir=str(tmp_path / "cell"))
    stats, paths = run_experiment(spec)
    assert len(paths) == 3 * 2 + 1
    assert paths[-1].name == "summary_fexp_L10_n4.csv"
    assert all(p.exists() for p in paths)
    lines = paths[-1].read_text().splitlines()
    assert lines[0] == SUMMARY_HEADER
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[:4] == ["fexp", "10", "4", "rp"]
    assert first[4] == "3"
    assert stats[0].algorithm == "rp" and stats[1].algorithm == "cma11"


def test_run_experiment_requires_some_output_dir():
    spec = ExperimentSpec(objective=Objective("fexp", 4, 10.0), algorithms=("rp",))
    with pytest.raises(ValueError):
        run_experiment(spec)


def test_run_experiment_is_byte_deterministic(tmp_path):
    kw = dict(objective=Objective("fexp", 4, 10.0),
              algorithms=("rp", "sarp", "epcma-2"), runs=3)
    _, paths1 = run_experiment(ExperimentSpec(**kw), tmp_path / "a")
    _, paths2 = run_experiment(ExperimentSpec(**kw), tmp_path / "b")
    assert [p.name for p in paths1] == [p.name for p in paths2]
    for p1, p2 in zip(paths1, paths2):
        assert p1.read_bytes() == p2.read_bytes()


def test_summary_recomputable_from_trajectories(tmp_path):
    # the summary row must be a pure function of the per-run files
    spec = ExperimentSpec(objective=Objective("fexp", 6, 100.0),
                          algorithms=("rp", "sarp"), runs=5)
    stats, paths = run_experiment(spec, tmp_path)
    for s in stats:
        its = []
        for i in range(5):
            rows = (tmp_path / trajectory_filename(spec.objective, s.algorithm, i)) \
                .read_text().splitlines()[1:]
            last = rows[-1].split(",")
            if float(last[1]) <= spec.target:
                its.append(int(last[0]))
        assert len(its) == s.success_count == 5
        its.sort()
        assert s.its_median == its[(len(its) - 1) // 2]
        assert s.its_mean == pytest.approx(float(np.mean(its)), rel=1e-12)
        assert s.its_std == pytest.approx(float(np.std(its, ddof=1)), rel=1e-12)


# ----------------------------------------------------------------- sweep


def test_sweep_cells_composition():
    cells = sweep_cells(dims=(20, 40))
    # 3 quadratics x 2 L values x 2 dims + 1 non-parametrized x 2 dims
    assert len(cells) == 3 * 2 * 2 + 2
    tags = [cell_tag(c.objective) for c in cells]
    assert len(set(tags)) == len(tags)
    assert all(c.algorithms == SWEEP_ALGORITHMS for c in cells)


def test_sweep_cells_default_runs_and_reduced_cell():
    cells = sweep_cells(dims=(20,))
    for c in cells:
        assert c.runs == 51
        if c.objective.kind == "flin" and c.objective.L == 1e6:
            assert c.run_overrides == {"rp": 11}
        else:
            assert c.run_overrides == {}


def test_sweep_cells_explicit_runs_wins():
    cells = sweep_cells(dims=(20,), runs=5)
    assert all(c.runs == 5 and c.run_overrides == {} for c in cells)


def test_sweep_cells_validation_and_kwargs():
    with pytest.raises(ValueError):
        sweep_cells(funcs=("fquad",))
    cells = sweep_cells(funcs=("fexp",), dims=(20,), runs=3, workers=2,
                        l_values=(1e4,), budget=1000)
    assert len(cells) == 1
    assert cells[0].workers == 2 and cells[0].budget == 1000
