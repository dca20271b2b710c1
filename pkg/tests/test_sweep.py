import math

import numpy as np
import pytest

from ftir_gh.config import parse_config
from ftir_gh.presets import preset
from ftir_gh.sweep import (
    emit,
    emit_csv,
    emit_plotscript,
    evaluate_point,
    read_csv,
    run_sweep,
    table_columns,
)

CFG = """\
[run]
name = small
[geometry]
n_prism = 1.605
a = 250 um
[source]
wavelength = 300 um
theta0 = 39.7 deg
[graphene]
sigma = 0.021i S
[sweep]
variable = theta0
start = 37 deg
stop = 42 deg
count = 41
"""


def small(**kw):
    return parse_config(CFG).with_sweep(**kw) if kw else parse_config(CFG)


def test_canonical_columns():
    cfg = small()
    assert table_columns(cfg) == ["sweep_var", "theta0_deg", "T", "R", "A",
                                  "s_m", "s_over_lambda", "flags"]
    beam = parse_config(CFG + "[beam]\nwaist = 0.1 m\n")
    assert table_columns(beam)[-2:] == ["s_beam_m", "flags"]


def test_row_values():
    table = run_sweep(small())
    deg = table.column("sweep_var")
    assert deg[0] == pytest.approx(37.0) and deg[-1] == pytest.approx(42.0)
    assert np.array_equal(deg, table.column("theta0_deg"))
    T, R, A = (table.column(c) for c in "TRA")
    assert np.allclose(T + R + A, 1, atol=1e-12)
    assert np.allclose(A, 0, atol=1e-10)
    assert set(table.column("flags")) == {"ok"}
    assert np.allclose(table.column("s_over_lambda") * 3e-4, table.column("s_m"))


def test_flags_instead_of_exceptions():
    cfg = parse_config(CFG.replace("sigma = 0.021i S", "sigma = 0 S"))
    row = evaluate_point(cfg, 0.0)
    assert row["flags"] == "ok"
    # a metre-wide evanescent gap overflows the transfer matrix
    bad = parse_config(CFG.replace("a = 250 um", "a = 1 m"))
    row = evaluate_point(bad, math.radians(60))
    assert row["flags"].startswith("scatter:")
    assert math.isnan(row["T"]) and math.isnan(row["s_m"])


def test_mu_sweep_display_units():
    cfg = parse_config(CFG.replace("sigma = 0.021i S", "mu = 0.6 eV")
                       .replace("variable = theta0\nstart = 37 deg\nstop = 42 deg",
                                "variable = mu\nstart = 0.3 eV\nstop = 0.8 eV"))
    table = run_sweep(cfg.with_sweep(count=6))
    assert table.column("sweep_var") == pytest.approx([0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
    assert np.all(table.column("theta0_deg") == pytest.approx(39.7))
    assert "sweep_var = mu [eV]" in table.metadata


def test_csv_round_trip():
    table = run_sweep(small())
    data = emit_csv(table)
    cols, rows = read_csv(data)
    assert cols == table.columns
    for got, want in zip(rows, table.rows):
        for g, w in zip(got, want):
            if isinstance(w, str):
                assert g == w
            else:
                assert g == pytest.approx(w, rel=1e-11)
    text = data.decode()
    assert "# resolved config:" in text and "# constants = CODATA" in text
    assert emit(table, "csv") == data
    with pytest.raises(ValueError):
        emit(table, "xlsx")


def test_plotscript_references_columns():
    t1, t2 = run_sweep(small()), run_sweep(small(count=5))
    script = emit_plotscript([t1, t2], ["a.csv", "sub/b.csv"]).decode()
    skip = len(t1.metadata) + 1
    assert f"'a.csv' skip {skip} using 2:3 with lines title 'small'" in script
    assert "'sub/b.csv'" in script
    assert f"using 2:{t1.columns.index('s_over_lambda') + 1}" in script
    assert sum(ln.startswith("plot ") for ln in script.splitlines()) == 2
    assert emit([t1], "plotscript", "a.csv") == emit_plotscript([t1], ["a.csv"])


def test_plotscript_skip_lands_on_first_row(tmp_path):
    table = run_sweep(small())
    lines = emit_csv(table).decode().splitlines()
    skip = len(table.metadata) + 1
    assert lines[skip - 1] == ",".join(table.columns)
    assert not lines[skip].startswith("#")


def test_determinism_and_threads():
    cfg = preset("fig2")[0].with_sweep(count=200)
    a = emit_csv(run_sweep(cfg))
    assert emit_csv(run_sweep(cfg)) == a
    assert emit_csv(run_sweep(cfg, threads=4)) == a


def test_reference_mu_is_reported_not_used():
    table = run_sweep(preset("fig2")[0].with_sweep(count=3))
    meta = "\n".join(table.metadata)
    assert "sigma at reference mu 0.7 eV" in meta
    assert "sheet uses 0.021j S" in meta
