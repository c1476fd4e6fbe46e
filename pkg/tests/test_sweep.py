"""Sweep construction, CSV emission and plot-script emission."""

import math

import pytest

from twrelay import oracle, schemes, sweep
from twrelay.channel import capacity, db_to_linear
from twrelay.sweep import (
    Gamma0Rule,
    Gamma2Rule,
    SweepConfigError,
    SweepSpec,
    VerificationError,
    comparison_spec,
    emit_csv,
    emit_plot_script,
    run_sweep,
)


# ---------------------------------------------------------------- rules


def test_gamma2_rule_parsing():
    assert Gamma2Rule.parse("equal") == Gamma2Rule("equal")
    assert Gamma2Rule.parse("quad") == Gamma2Rule("quadratic")
    assert Gamma2Rule.parse("ratio:2.5") == Gamma2Rule("ratio", 2.5)
    fixed = Gamma2Rule.parse("db:10")
    assert fixed.kind == "fixed" and math.isclose(fixed.value, 10.0)
    for bad in ("","triangle", "ratio:x", "db:", "ratio:-1"):
        with pytest.raises(ValueError):
            Gamma2Rule.parse(bad)


def test_gamma2_rule_apply_and_label():
    assert Gamma2Rule("equal").apply(3.0) == 3.0
    assert Gamma2Rule("quadratic").apply(3.0) == 12.0
    assert Gamma2Rule("fixed", 10.0).apply(3.0) == 10.0
    assert Gamma2Rule("ratio", 4.0).apply(3.0) == 12.0
    assert Gamma2Rule("quadratic").label == "g2=g1+g1^2"


def test_gamma0_rule_parsing():
    assert Gamma0Rule.parse("zero") == Gamma0Rule("zero")
    assert Gamma0Rule.parse("frac:0.1") == Gamma0Rule("fraction", 0.1)
    fixed = Gamma0Rule.parse("db:-10")
    assert fixed.kind == "fixed" and math.isclose(fixed.value, 0.1)
    for bad in ("none", "frac:1.5", "frac:-0.1", "db:zz"):
        with pytest.raises(ValueError):
            Gamma0Rule.parse(bad)
    assert Gamma0Rule("zero").apply(7.0) == 0.0
    assert math.isclose(Gamma0Rule("fraction", 0.1).apply(7.0), 0.7, rel_tol=1e-15)
    assert Gamma0Rule("fraction", 0.25).apply(8.0) == 2.0
    assert Gamma0Rule("fraction", 0.1).label == "g0=0.1*g1"


# ------------------------------------------------------------ SweepSpec / run


def test_spec_grid():
    spec = SweepSpec(0.0, 30.0, 1.0)
    grid = spec.grid_db()
    assert len(grid) == 31
    assert grid[0] == 0.0 and grid[-1] == 30.0
    assert SweepSpec(5.0, 5.0, 1.0).grid_db() == [5.0]
    # endpoint inclusion despite floating-point steps
    assert len(SweepSpec(0.0, 1.0, 0.1).grid_db()) == 11


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(0.0, 30.0, 0.0)
    with pytest.raises(ValueError):
        SweepSpec(10.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        SweepSpec(0.0, 1.0, 1.0, schemes=())
    with pytest.raises(ValueError):
        SweepSpec(0.0, 1.0, 1.0, schemes=("DF", "XYZ"))
    with pytest.raises(ValueError):
        SweepSpec(0.0, 1.0, 1.0, schemes=("DF", "df"))
    with pytest.raises(ValueError):
        SweepSpec(0.0, 1.0, 1.0, gamma0_rules=())


def test_run_sweep_single_point_matches_closed_forms():
    spec = SweepSpec(0.0, 0.0, 1.0, gamma0_rules=(Gamma0Rule("zero"), Gamma0Rule("fraction", 0.1)))
    (row,) = run_sweep(spec)
    assert row.gamma1_db == 0.0 and row.gamma2_db == 0.0
    assert row.gamma0_db == (-math.inf, -10.0)
    assert math.isclose(row.rate("DF[g0=0]"), 2.0 / 3.0, rel_tol=1e-12)
    assert math.isclose(row.rate("DF[g0=0.1*g1]"), 0.6986908164233079, rel_tol=1e-12)
    assert math.isclose(row.rate("AF"), 0.32192809488736235, rel_tol=1e-12)
    assert math.isclose(row.rate("JDF"), 0.8842282173954806, rel_tol=1e-12)
    assert row.rate("DNF") == 1.0
    with pytest.raises(KeyError):
        row.rate("DF")


def test_run_sweep_respects_scheme_subset():
    spec = SweepSpec(0.0, 2.0, 1.0, schemes=("AF", "DNF"))
    rows = run_sweep(spec)
    assert [label for label, _ in rows[0].rates] == ["AF", "DNF"]


def test_run_sweep_flags_bad_rule_with_grid_point():
    # a fixed gamma2 below gamma1 breaks the ordering from 11 dB upward
    spec = SweepSpec(0.0, 20.0, 1.0, gamma2_rule=Gamma2Rule.parse("db:10"))
    with pytest.raises(SweepConfigError) as err:
        run_sweep(spec)
    assert "gamma1 = 11 dB" in str(err.value)

    # direct link catches up with gamma1 via a fixed gamma0
    spec = SweepSpec(0.0, 10.0, 1.0, gamma0_rules=(Gamma0Rule.parse("db:5"),))
    with pytest.raises(SweepConfigError) as err:
        run_sweep(spec)
    assert "g0=" in str(err.value)


def test_run_sweep_verification_deviations_are_tiny():
    spec = SweepSpec(
        0.0, 10.0, 5.0,
        gamma0_rules=(Gamma0Rule("zero"), Gamma0Rule("fraction", 0.1)),
        verify=True,
    )
    rows = run_sweep(spec)
    for row in rows:
        assert len(row.oracle_rates) == 3  # two DF columns + JDF
        for _, deviation in row.deviations:
            assert deviation <= 1e-6


def test_run_sweep_verification_catches_wrong_formula(monkeypatch):
    real = schemes.df_max_rate

    def corrupted(config):
        best = real(config)
        return schemes.SchemeRate(best.scheme, best.rate * 1.001, best.parameter, best.breakdown)

    monkeypatch.setattr(sweep.schemes, "df_max_rate", corrupted)
    with pytest.raises(VerificationError):
        run_sweep(SweepSpec(0.0, 0.0, 1.0, verify=True))


# ---------------------------------------------------------------- figure sweeps


def test_equal_rule_sweep_invariants():
    rows = run_sweep(comparison_spec("equal"))
    assert len(rows) == 31
    for row in rows:
        c1 = capacity(db_to_linear(row.gamma1_db))
        assert row.rate("DNF") == c1  # bound is exact, not approximate
        for label, value in row.rates:
            if label != "DNF":
                assert value < c1
        assert row.rate("DF[g0=0.1*g1]") > row.rate("DF[g0=0]")
        assert row.rate("JDF") < row.rate("DNF")


def test_quadratic_rule_sweep_jdf_meets_bound():
    rows = run_sweep(comparison_spec("quad"))
    for row in rows:
        assert math.isclose(row.rate("JDF"), row.rate("DNF"), rel_tol=1e-9)


def test_rate_columns_monotone_in_gamma1():
    for kind in ("equal", "quad"):
        rows = run_sweep(comparison_spec(kind))
        labels = [label for label, _ in rows[0].rates]
        for label in labels:
            series = [row.rate(label) for row in rows]
            assert all(b > a for a, b in zip(series[:-1], series[1:])), (kind, label)


def test_cross_rule_comparisons():
    equal_rows = run_sweep(comparison_spec("equal"))
    quad_rows = run_sweep(comparison_spec("quad"))
    for eq, qu in zip(equal_rows, quad_rows):
        assert eq.rate("DNF") == qu.rate("DNF")  # bound ignores gamma2
        assert qu.rate("AF") > eq.rate("AF")
        assert qu.rate("DF[g0=0]") > eq.rate("DF[g0=0]")
        assert qu.rate("DF[g0=0.1*g1]") > eq.rate("DF[g0=0.1*g1]")


# ---------------------------------------------------------------- CSV / plot


def test_emit_csv_layout_and_determinism(tmp_path):
    spec = SweepSpec(0.0, 2.0, 1.0, gamma0_rules=(Gamma0Rule("zero"), Gamma0Rule("fraction", 0.1)))
    rows = run_sweep(spec)
    text = emit_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == (
        "gamma1_db,gamma2_db,gamma0_db[g0=0],gamma0_db[g0=0.1*g1],"
        "DF[g0=0],DF[g0=0.1*g1],AF,JDF,DNF"
    )
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "0" and first[2] == "-inf" and first[3] == "-10"
    assert first[4] == "0.666666667"  # nine significant digits

    out = tmp_path / "sweep.csv"
    again = emit_csv(rows, out)
    assert again == text
    assert out.read_bytes() == text.encode()

    with pytest.raises(ValueError):
        emit_csv([])


def test_emit_csv_single_gamma0_column():
    rows = run_sweep(SweepSpec(0.0, 1.0, 1.0))
    header = emit_csv(rows).split("\n")[0]
    assert header == "gamma1_db,gamma2_db,gamma0_db,DF,AF,JDF,DNF"


def test_emit_csv_includes_verification_columns():
    rows = run_sweep(SweepSpec(0.0, 0.0, 1.0, verify=True))
    header = emit_csv(rows).split("\n")[0].split(",")
    assert "oracle[DF]" in header and "deviation[JDF]" in header


def test_emit_plot_script(tmp_path):
    spec = comparison_spec("equal")
    rows = run_sweep(spec)
    path = tmp_path / "curves.gp"
    text = emit_plot_script(rows, path, csv_path="curves.csv")
    assert path.read_text() == text
    assert text.count("with lines") == 5  # two DF curves + AF + JDF + DNF
    assert "'curves.csv'" in text
    assert "DNF (upper bound)" in text
    assert "using 1:5" in text  # first rate column right after the SNR columns

    # default csv path derives from the destination
    text = emit_plot_script(rows, tmp_path / "other.gp")
    assert "'other.csv'" in text


def test_emit_plot_script_needs_rows_and_columns():
    with pytest.raises(ValueError):
        emit_plot_script([], "x.gp")
    rows = run_sweep(SweepSpec(0.0, 1.0, 1.0))
    stripped = [
        sweep.SweepRow(
            gamma1_db=r.gamma1_db,
            gamma2_db=r.gamma2_db,
            gamma0_db=r.gamma0_db,
            gamma0_labels=r.gamma0_labels,
            rates=(),
        )
        for r in rows
    ]
    with pytest.raises(ValueError):
        emit_plot_script(stripped, "x.gp")
