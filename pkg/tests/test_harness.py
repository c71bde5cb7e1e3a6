import csv
import io
import json

import numpy as np
import pytest

from dimersep.chain import build_collective_pair, build_dimer_chain, load_spec
from dimersep.harness import (
    CSV_SCHEMA,
    factorizing_point,
    find_transitions,
    parse_pairs,
    side_limit_probe,
    strong_field_check,
    sweep,
    validate,
)
from dimersep.limits import dimer_side_limits, uniform_limits
from dimersep.pair import FieldRay

from conftest import xy_dimer


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("#") and CSV_SCHEMA in lines[0]
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_parse_pairs():
    assert parse_pairs("1:2,4:2") == [(0, 1), (1, 3)]
    assert parse_pairs(None) == []
    with pytest.raises(ValueError):
        parse_pairs("1:1")


def test_factorizing_point_rays():
    spec = xy_dimer(8, 0.9, 0.25)
    assert factorizing_point(spec, FieldRay())[0] == pytest.approx(0.5 * np.sqrt(0.9) * 1.25)
    assert factorizing_point(spec, FieldRay("ratio", 3))[0] == pytest.approx(0.5 * np.sqrt(2.7) * 1.25)
    t, st = factorizing_point(spec, FieldRay("fixed-even", 0.2))
    assert t * 0.2 == pytest.approx(0.9 * 1.25**2 / 4)


def test_sweep_rows_and_csv():
    spec = xy_dimer(8, 0.9, 0.25)
    grid = np.linspace(0.05, 1.0, 30)
    res = sweep(spec, FieldRay(), grid, pairs=[(0, 1), (1, 3)])
    assert len(res.rows) == 30
    assert res.columns[:6] == ["field_o", "field_e", "parity", "energy", "gap", "degenerate"]
    assert {"C_1_2", "C_2_4", "align_1_2", "M_o", "M_e", "C_o", "C_e", "monogamy_margin"} <= set(res.columns)
    assert np.all(np.diff(res.column("field_o")) > 0)
    assert set(res.column("parity")) <= {1.0, -1.0}
    gaps = res.column("gap")
    assert np.count_nonzero(np.diff(np.sign(gaps))) == 4
    rows = read_csv(res.to_csv())
    assert len(rows) == 30 and float(rows[3]["C_1_2"]) == res.rows[3]["C_1_2"]
    assert res.to_csv() == sweep(spec, FieldRay(), grid, pairs=[(0, 1), (1, 3)]).to_csv()


def test_sweep_rejects_non_increasing_grid():
    with pytest.raises(ValueError):
        sweep(xy_dimer(4), FieldRay(), [0.2, 0.1])


def test_sweep_workers_identical():
    spec = xy_dimer(8, 0.9, 0.25)
    grid = np.linspace(0.05, 1.0, 8)
    assert sweep(spec, FieldRay(), grid, workers=2).to_csv() == sweep(spec, FieldRay(), grid).to_csv()


def test_sweep_at_degenerate_point():
    spec = xy_dimer(8, 0.9, 0.25)
    t_s = factorizing_point(spec, FieldRay())[0]
    res = sweep(spec, FieldRay(), [t_s], pairs=[(0, 1)])
    assert [r["parity"] for r in res.rows] == [1, -1, 0]
    assert all(r["degenerate"] for r in res.rows)
    lim = uniform_limits(8, 0.5, 0.5, 0.9)
    c = {r["parity"]: r["C_1_2"] for r in res.rows}
    assert c[-1] == pytest.approx(lim.minus["oe"], abs=1e-10)
    assert c[1] == pytest.approx(lim.plus["oe"], abs=1e-10)
    assert c[0] == pytest.approx(lim.minus["oe"] * lim.overlap / (1 + lim.overlap), abs=1e-10)


def test_sweep_dense_backend_for_open_chain():
    spec = build_dimer_chain(6, 0.5, 0.5, (1, 0.9, 0), (0.3, 0.27, 0), 0.0, "open")
    res = sweep(spec, FieldRay(), np.linspace(0.1, 1.0, 5))
    assert res.meta["backend"] == "dense"
    assert min(r["monogamy_margin"] for r in res.rows) >= -1e-12


def test_monogamy_on_sweeps():
    for spec, ray in ((xy_dimer(12, 0.7, 0.6), FieldRay()),
                      (xy_dimer(12, 0.9, 0.25), FieldRay("ratio", 3)),
                      (build_collective_pair(12, 0.5, 0.5, (1, 0.9, 0), 0, 0), FieldRay("ratio", 3))):
        res = sweep(spec, ray, np.linspace(0.01, 1.5, 40))
        assert min(r["monogamy_margin"] for r in res.rows) >= -1e-12


@pytest.mark.parametrize("n", [8, 12, 16, 20])
def test_transition_count_stable_under_grid_doubling(n):
    spec = xy_dimer(n, 0.9, 0.25)
    t_s = factorizing_point(spec, FieldRay())[0]
    a = find_transitions(spec, FieldRay(), 0.0, t_s, points=300)
    b = find_transitions(spec, FieldRay(), 0.0, t_s, points=600)
    assert a.count == b.count == n // 2
    assert abs(b.last_error) <= 1e-10


def test_transitions_merge_for_small_alpha():
    spec = xy_dimer(8, 0.9, 1e-3)
    rep = find_transitions(spec, FieldRay(), 1e-4, 0.6, points=400, expected=4)
    assert rep.count == 4
    assert rep.crossings[0] == pytest.approx(0.5 * np.sqrt(0.9), rel=2e-3)
    assert rep.crossings[-1] == pytest.approx(0.5 * np.sqrt(0.9), rel=2e-3)


def test_transitions_ising_collapse():
    spec = build_dimer_chain(8, 0.5, 0.5, (1, 0, 0), (0.3, 0, 0), 0.0)
    rep = find_transitions(spec, FieldRay(), 0.0, 0.5, points=100, expected=4)
    assert rep.factorizing == 0.0
    assert rep.count == 0
    assert "collapse" in rep.warnings[0]


def test_transitions_warn_on_undercount():
    spec = xy_dimer(8, 0.9, 0.25)
    with pytest.warns(UserWarning):
        rep = find_transitions(spec, FieldRay(), 0.0, 0.3, points=20, expected=4, max_refine=1)
    assert rep.grid_points == 40 and rep.warnings


def test_side_limit_probe_classes():
    out = side_limit_probe(xy_dimer(12, 0.9, 0.25), FieldRay("ratio", 3), pairs=[(0, 1), (0, 2), (1, 3), (1, 5)])
    lim = dimer_side_limits(12, 0.9, 3.0)
    for name, ref in (("minus", lim.minus), ("plus", lim.plus)):
        ex = out["exact"][name]
        assert ex["max_deviation"] < 1e-10
        for cls in ("oo", "ee", "oe"):
            assert ex["analytic"][cls] == pytest.approx(ref[cls], abs=1e-12)
    assert out["sides"]["below"]["parity"] == -1 and out["sides"]["above"]["parity"] == 1


def test_side_limits_alpha_independent():
    a = side_limit_probe(xy_dimer(12, 0.9, 0.25), FieldRay(), pairs=[(0, 1), (0, 3)])
    b = side_limit_probe(xy_dimer(12, 0.9, 0.8), FieldRay(), pairs=[(0, 1), (0, 3)])
    for name in ("minus", "plus"):
        for k, v in a["exact"][name]["values"].items():
            assert v == pytest.approx(b["exact"][name]["values"][k], abs=1e-10)


def test_strong_field_thresholds():
    def row(alpha):
        spec = build_dimer_chain(20, 0.5, 0.5, (1, 0.5, 0), (alpha, 0.5 * alpha, 0), 0.0)
        return strong_field_check(spec, [50])[0]

    assert row(0.05)["values"]["C_13"] == 0.0
    assert row(0.9)["values"]["C_13"] > 0.0
    r0 = row(1e-9)
    assert r0["values"]["C_23"] < 1e-9
    assert r0["deviation"]["C_12"] < r0["bound"]


def test_validate_campaign(tmp_path):
    rep = validate(seed=1, n_max=6, draws=6)
    assert rep["passed"], json.dumps(rep, default=str)
    assert set(rep["suites"]) == {"pair", "wootters", "jw", "collective", "factorization", "monogamy", "limits"}


def test_validate_small_n():
    rep = validate(seed=0, n_max=2, draws=4)
    assert set(rep["suites"]) == {"pair", "wootters"} and rep["passed"]


def test_validate_detects_fault(tmp_path):
    rep = validate(seed=0, n_max=6, fault="g-symmetry", draws=4, dump_dir=tmp_path)
    assert not rep["passed"]
    assert "pair_rdm" in rep["suites"]["jw"]["error"]
    assert load_spec(rep["reproducer"]).n >= 4
