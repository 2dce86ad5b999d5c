import math

import pytest

from growthorder import scenarios
from growthorder.competition import CompetitionSystem, Replicator
from growthorder.kinetics import GrowthSpec, doubling_time, effective_principal, principal_at, required_rate
from growthorder.scenarios import parse_cell, read_csv


def _files(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, 1e300, 5e-324, 148.4131591025766, 0.0):
        assert float(scenarios.fmt(x)) == x
    assert scenarios.fmt(math.nan) == ""
    assert scenarios.fmt(math.inf) == "inf"


class TestTable1:
    def test_shape_and_values(self, tmp_path):
        scenarios.run_table1(tmp_path)
        meta, header, rows = read_csv(tmp_path / "table1.csv")
        assert meta == {}
        assert len(header) == 4 and len(rows) == 10
        for row in rows:
            c = float(row[0])
            assert [float(v) for v in row[1:]] == [effective_principal(c, p) for p in (1.1, 1.0, 0.9)]
            assert float(row[2]) == c

    def test_display_rows(self, tmp_path):
        scenarios.run_table1(tmp_path)
        _, _, rows = read_csv(tmp_path / "table1_display.csv")
        assert rows[5] == ["100000000.00", "630957344.48", "100000000.00", "15848931.92"]
        assert rows[7][1] == "100000000000.00"


class TestGrowth:
    def test_files_and_round_trip(self, tmp_path):
        scenarios.run_growth_curves(tmp_path, [1.0, 1e9], [0.95, 1.0, 1.05], 0.05, 100, 21)
        assert {"growth_1.csv", "growth_1e09.csv", "growth_1.svg", "growth_1e09.svg"} <= set(_files(tmp_path))
        meta, header, rows = read_csv(tmp_path / "growth_1e09.csv")
        assert header == ["t", "p=0.95", "p=1", "p=1.05"]
        c0 = float(meta["principal"])
        for row in rows:
            t = float(row[0])
            for cell, p in zip(row[1:], (0.95, 1.0, 1.05)):
                assert parse_cell(cell) == principal_at(GrowthSpec(c0, 0.05, p), t)

    def test_exponential_column_factor(self, tmp_path):
        scenarios.run_growth_curves(tmp_path, [1e3], [1.0], 0.05, 100, 11, plots=False)
        _, _, rows = read_csv(tmp_path / "growth_1000.csv")
        assert float(rows[-1][1]) / float(rows[0][1]) == pytest.approx(148.41315910257660, rel=1e-12)

    def test_truncation_marked(self, tmp_path):
        # t* = 1 / (i c0) = 20 years for p = 2 at c0 = 1, i = 0.05
        scenarios.run_growth_curves(tmp_path, [1.0], [1.0, 2.0], 0.05, 50, 51, plots=False)
        meta, _, rows = read_csv(tmp_path / "growth_1.csv")
        assert float(meta["truncated p=2"].split()[2]) == pytest.approx(19.8)
        cut = [row for row in rows if row[2] == ""]
        assert cut and all(float(row[0]) > 19.8 for row in cut)
        assert all(row[1] != "" for row in rows)

    def test_zero_rate_flat(self, tmp_path):
        scenarios.run_growth_curves(tmp_path, [5.0], [1.0], 0.0, 10, 5, plots=False)
        _, _, rows = read_csv(tmp_path / "growth_5.csv")
        assert {row[1] for row in rows} == {"5"}

    @pytest.mark.parametrize("kwargs", [dict(horizon=0.0), dict(samples=1)])
    def test_validation(self, tmp_path, kwargs):
        with pytest.raises(ValueError):
            scenarios.run_growth_curves(tmp_path, **kwargs)


class TestDoubling:
    def test_values(self, tmp_path):
        scenarios.run_doubling_curves(tmp_path, [1e9], [0.95, 1.0], [0.01, 0.05, 0.1], plots=False)
        _, header, rows = read_csv(tmp_path / "doubling_1e09.csv")
        assert header == ["rate", "p=0.95", "p=1", "ln2_over_rate"]
        assert float(rows[0][2]) == pytest.approx(69.31471805599453, rel=1e-12)
        assert float(rows[0][2]) == float(rows[0][3])
        for row in rows:
            assert float(row[1]) == doubling_time(GrowthSpec(1e9, float(row[0]), 0.95))

    def test_strictly_decreasing_in_rate(self, tmp_path):
        scenarios.run_doubling_curves(tmp_path, [1.0, 1e9], plots=False)
        for name in ("doubling_1.csv", "doubling_1e09.csv"):
            _, header, rows = read_csv(tmp_path / name)
            for col in range(1, len(header)):
                values = [float(r[col]) for r in rows]
                assert all(b < a for a, b in zip(values, values[1:]))

    def test_required_rate_table(self, tmp_path):
        scenarios.run_doubling_curves(tmp_path, [1e9], [0.95], [0.1], plots=False)
        meta, _, rows = read_csv(tmp_path / "required_rates.csv")
        assert float(rows[0][2]) == required_rate(0.95, 1e9, 10.0)
        assert float(rows[0][2]) == pytest.approx(0.1988, abs=5e-4)

    def test_rejects_zero_rate(self, tmp_path):
        with pytest.raises(ValueError):
            scenarios.run_doubling_curves(tmp_path, rates=[0.0, 0.1])


def test_competition_artifacts(tmp_path):
    system = CompetitionSystem([Replicator("A", 1, 1), Replicator("B", 10, 1)], 0.5)
    art = scenarios.run_competition(tmp_path, system, 50)
    assert not art.errors
    meta, header, rows = read_csv(tmp_path / "competition_report.csv")
    assert meta["outcome"] == "coexistence" and meta["converged"] == "true"
    assert [r[3] for r in rows] == ["pass", "pass"]
    _, header, rows = read_csv(tmp_path / "competition.csv")
    assert header == ["t", "A", "B"]
    a, b = float(rows[-1][1]), float(rows[-1][2])
    assert a / b == pytest.approx(0.01, rel=0.01)


def test_competition_non_convergence_is_an_error(tmp_path):
    system = CompetitionSystem([Replicator("A", 1, 1), Replicator("B", 1.5, 1)], 1.0)
    art = scenarios.run_competition(tmp_path, system, 2.0, plots=False)
    assert art.errors and "drift" in art.errors[0]


def test_inequality_artifacts(tmp_path):
    src = tmp_path / "balances.csv"
    src.write_text("balance\n1\n1000\n1000000\n1000000000\n")
    out = tmp_path / "out"
    scenarios.run_inequality(out, src, 0.05, 0.95, [0, 50, 100], [0, 100])
    _, _, rows = read_csv(out / "gini.csv")
    g = [float(r[1]) for r in rows]
    assert all(b < a for a, b in zip(g, g[1:]))
    _, header, rows = read_csv(out / "lorenz_t100.csv")
    assert header == ["population_share", "wealth_share"]
    assert rows[0] == ["0", "0"] and rows[-1] == ["1", "1"]


class TestSweep:
    def test_grid_order_and_values(self, tmp_path):
        scenarios.run_sweep(tmp_path, [1.0, 1e9], [0.9, 1.1], [0.05], 100)
        _, header, rows = read_csv(tmp_path / "sweep.csv")
        assert header == scenarios.SWEEP_HEADER
        assert [(float(r[0]), float(r[2])) for r in rows] == [(1.0, 0.9), (1.0, 1.1), (1e9, 0.9), (1e9, 1.1)]
        assert rows[0][3] == "monomial" and rows[0][6] == ""
        # p = 1.1 at c0 = 1e9 diverges after 12.6 years
        assert rows[3][4] == "inf"

    def test_parallel_matches_serial(self, tmp_path):
        args = ([1.0, 1e6], [0.95, 1.0, 1.05], [0.01, 0.1], 50.0, True)
        scenarios.run_sweep(tmp_path / "serial", *args, workers=1)
        scenarios.run_sweep(tmp_path / "parallel", *args, workers=3)
        assert _files(tmp_path / "serial") == _files(tmp_path / "parallel")


def test_runs_are_byte_identical(tmp_path):
    for name in ("a", "b"):
        out = tmp_path / name
        scenarios.run_table1(out)
        scenarios.run_growth_curves(out, [1.0, 1e6], [0.97, 1.0, 1.03], 0.05, 100, 51)
        scenarios.run_doubling_curves(out, [1e3], [0.98, 1.0])
        system = CompetitionSystem([Replicator("A", 1, 2), Replicator("B", 1, 1)], 2.0)
        scenarios.run_competition(out, system, 30)
    assert _files(tmp_path / "a") == _files(tmp_path / "b")


class TestSvg:
    def test_nearly_flat_series(self):
        from growthorder.svg import line_chart

        doc = line_chart([("g", [0.0, 1.0, 2.0], [0.5, 0.5 + 1e-16, 0.5])], "flat", "t", "g")
        assert doc.startswith("<svg") and doc.count("<text") < 40

    def test_log_axis_skips_non_positive(self):
        from growthorder.svg import line_chart

        doc = line_chart([("c", [0, 1, 2, 3], [1.0, 10.0, math.nan, 1e3])], "t", "x", "y", log_y=True)
        assert doc.count("<polyline") == 2

    def test_no_points(self):
        from growthorder.svg import line_chart

        with pytest.raises(ValueError):
            line_chart([("c", [0.0], [math.nan])], "t", "x", "y")
