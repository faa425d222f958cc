import json
import math
from dataclasses import replace

import numpy as np
import pytest

from esn_ituc import experiment
from esn_ituc.errors import ParameterError
from esn_ituc.esp import Regime, SpectralBounds, classify_alpha
from esn_ituc.experiment import (
    STATUS_NON_CONVERGED,
    STATUS_OK,
    SweepPlan,
    SweepRecord,
    aggregate,
    parse_results_csv,
    results_csv_text,
    run_sweep,
    run_trial,
)


@pytest.fixture(scope="module")
def smoke_records():
    return run_sweep(SweepPlan.smoke())


class TestPlan:
    @pytest.mark.parametrize("benchmark", ["mackey_glass", "mso", "lorenz", "rossler", "henon"])
    def test_published_plans_have_3000_trials(self, benchmark):
        plan = SweepPlan.published(benchmark)
        assert plan.total_trials == 3000
        assert len(plan.coordinates()) == 3000
        assert len(set(plan.coordinates())) == 3000

    def test_published_gammas(self):
        assert SweepPlan.published("mackey_glass").gamma == 1e-4
        assert SweepPlan.published("lorenz").gamma == 1e-3
        assert SweepPlan.published("mso").n_train == 10000

    def test_json_round_trip(self, tmp_path):
        plan = SweepPlan.published("lorenz", n_trials=3)
        path = tmp_path / "plan.json"
        path.write_text(plan.to_json())
        assert SweepPlan.load(path) == plan

    def test_unknown_fields_rejected(self):
        with pytest.raises(ParameterError, match="unknown plan field"):
            SweepPlan.from_dict({"benchmark": "mso", "n_trails": 3})

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "plan.json"
        path.write_text("{not json")
        with pytest.raises(ParameterError):
            SweepPlan.load(path)

    @pytest.mark.parametrize("kw", [
        dict(benchmark="sine"), dict(k_alphas=1), dict(eval_mode="both"),
        dict(horizon=5000), dict(sizes=()),
    ])
    def test_validation(self, kw):
        with pytest.raises(ParameterError):
            SweepPlan(**{"benchmark": "mso", **kw})

    def test_cell_seeds_distinct(self):
        plan = SweepPlan.published("mso")
        seeds = {plan.cell_seed(i, t) for i, t in plan.cells()}
        assert len(seeds) == 300


class TestSweep:
    def test_smoke_plan_has_twelve_ordered_records(self, smoke_records):
        plan = SweepPlan.smoke()
        assert len(smoke_records) == 12
        assert [(r.size_index, r.trial_index, r.alpha_index) for r in smoke_records] \
            == plan.coordinates()
        assert all(r.ok for r in smoke_records)

    def test_shared_draw_within_cell(self, smoke_records):
        cells = {}
        for r in smoke_records:
            cells.setdefault((r.size_index, r.trial_index), []).append(r)
        assert len(cells) == 4
        for recs in cells.values():
            assert len({(r.eta, r.rho, r.seed) for r in recs}) == 1
            alphas = [r.alpha for r in recs]
            assert alphas == sorted(alphas)
            b = SpectralBounds(recs[0].eta, recs[0].rho)
            assert alphas[0] == b.u_low and alphas[-1] == b.u_high
            assert all(classify_alpha(b, a) is Regime.ITUC for a in alphas)

    def test_finite_measurements(self, smoke_records):
        for r in smoke_records:
            assert math.isfinite(r.nrmse) and r.nrmse >= 0
            assert math.isfinite(r.mmds) and r.mmds >= 0

    def test_single_trial_matches_sweep_row(self, smoke_records):
        r = run_trial(SweepPlan.smoke(), 2, 3, 1)
        row = SweepPlan.smoke().coordinates().index((2, 1, 3))
        assert r == smoke_records[row]

    def test_deterministic(self, smoke_records):
        again = run_sweep(SweepPlan.smoke())
        assert results_csv_text(again) == results_csv_text(smoke_records)

    def test_teacher_forced_mode_scores_lower(self):
        plan = SweepPlan.smoke(sizes=(30,), n_trials=1)
        fr = run_sweep(plan)
        tf = run_sweep(replace(plan, eval_mode="teacher-forced"))
        assert all(t.nrmse < f.nrmse for t, f in zip(tf, fr))
        assert [t.mmds for t in tf] == [f.mmds for f in fr]

    def test_trial_index_range(self):
        with pytest.raises(ParameterError):
            run_trial(SweepPlan.smoke(), 1, 1, 3)

    def test_progress_callback(self):
        seen = []
        run_sweep(SweepPlan.smoke(sizes=(20,), n_trials=2, k_alphas=2),
                  progress=lambda n, total: seen.append((n, total)))
        assert seen == [(1, 2), (2, 2)]


def make_records(values, status=None):
    status = status or [STATUS_OK] * len(values)
    return [SweepRecord("mso", 20, 1, 1, t + 1, 7, 1.0, 2.0, 0.5, v, 2 * v, s)
            for t, (v, s) in enumerate(zip(values, status))]


class TestAggregate:
    def test_excludes_failed_trials(self):
        values = [1.0] * 29 + [math.nan]
        recs = make_records(values, [STATUS_OK] * 29 + [STATUS_NON_CONVERGED])
        recs.append(SweepRecord("mso", 20, 1, 2, 1, 7, status=STATUS_NON_CONVERGED))
        nrmse, mmds_grid = aggregate(recs)
        assert nrmse.count[0, 0] == 29 and nrmse.cell(20, 1) == 1.0
        assert mmds_grid.cell(20, 1) == 2.0
        assert nrmse.missing()[0, 1] and math.isnan(nrmse.cell(20, 2))

    def test_identical_trials_average_to_themselves(self):
        nrmse, _ = aggregate(make_records([0.125] * 30))
        assert nrmse.cell(20, 1) == 0.125

    def test_mixed_benchmarks_rejected(self):
        recs = make_records([1.0])
        recs.append(replace(recs[0], benchmark="henon"))
        with pytest.raises(ParameterError):
            aggregate(recs)

    def test_full_sized_grid(self):
        plan = SweepPlan.published("mackey_glass")
        recs = [SweepRecord("mackey_glass", plan.sizes[i - 1], i, j, t, 0, 1.0, 1.0, 1.0,
                            float(i + j), 1.0) for i, t, j in plan.coordinates()]
        nrmse, _ = aggregate(recs)
        assert nrmse.mean.shape == (10, 10) and np.all(nrmse.count == 30)
        assert nrmse.cell(1000, 10) == 20.0


class TestFormats:
    def test_results_round_trip(self, smoke_records):
        text = results_csv_text(smoke_records)
        assert parse_results_csv(text) == smoke_records
        assert text.splitlines()[0] == ",".join(experiment.RESULTS_HEADER)

    def test_missing_values_round_trip(self):
        recs = [SweepRecord("mso", 20, 1, 1, 1, 3, status=STATUS_NON_CONVERGED)]
        back = parse_results_csv(results_csv_text(recs))[0]
        assert back.status == STATUS_NON_CONVERGED and math.isnan(back.nrmse)

    @pytest.mark.parametrize("row, message", [
        ("mso,20,1,1,1,3,1,1,1,1", "row 3"),
        ("mso,20,1,1,1,3,1,1,1,x,1,ok", "row 3"),
        ("mso,20,1,1,1,3,1,1,1,1,1,exploded", "unknown status"),
        ("mso,20,1,1,1,3,1,1,1,,1,ok", "missing measurement"),
    ])
    def test_malformed_rows_are_named(self, smoke_records, row, message):
        good = results_csv_text(smoke_records[:1])
        with pytest.raises(ParameterError, match=message):
            parse_results_csv(good + row + "\n")

    def test_bad_header(self):
        with pytest.raises(ParameterError, match="row 1"):
            parse_results_csv("a,b,c\n")

    def test_surface_and_matrix_text(self, smoke_records):
        nrmse, mmds_grid = aggregate(smoke_records)
        lines = experiment.surface_csv_text(nrmse, mmds_grid).splitlines()
        assert len(lines) == 1 + 2 * 3
        matrix = experiment.gnuplot_matrix_text(nrmse).splitlines()
        assert matrix[1] == "3 1 2 3"
        assert [row.split()[0] for row in matrix[2:]] == ["20", "30"]

    def test_missing_cells_print_nan(self):
        recs = make_records([1.0])
        recs.append(SweepRecord("mso", 20, 1, 2, 1, 7, status=STATUS_NON_CONVERGED))
        nrmse, _ = aggregate(recs)
        assert experiment.gnuplot_matrix_text(nrmse).splitlines()[-1] == "20 1.0 NaN"

    def test_plan_json_is_valid(self):
        doc = json.loads(SweepPlan.smoke().to_json())
        assert doc["sizes"] == [20, 30] and doc["k_alphas"] == 3
