import numpy as np
import pytest

from dimersep.chain import ChainError, build_collective_pair
from dimersep.collective import (
    collective_correlators,
    collective_ground_states,
    collective_hamiltonian,
    collective_pair_concurrences,
)
from dimersep.exact import dense_pair_correlators, local_expectations, sector_ground_state
from dimersep.harness import factorizing_point
from dimersep.limits import dimer_side_limits
from dimersep.pair import FieldRay, pair_concurrence, pair_spectrum


def test_n2_matches_pair_closed_forms(rng):
    for _ in range(20):
        vx, vy, vz, bo, be = rng.uniform(-2, 2, size=5)
        cs = collective_ground_states(build_collective_pair(2, 0.5, 0.5, (vx, vy, vz), bo, be))
        sp = pair_spectrum(vx, vy, vz, bo, be)
        for p in (1, -1):
            assert cs[p].energy == pytest.approx(sp.energy(p), abs=1e-12)
            assert collective_pair_concurrences(cs[p])["C_oe"] == pytest.approx(pair_concurrence(sp, p), abs=1e-12)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_against_dense(n, rng):
    for _ in range(3):
        vx = rng.uniform(0.5, 1.5)
        spec = build_collective_pair(n, 0.5, 0.5, (vx, rng.uniform(-0.9, 0.9) * vx, rng.uniform(-0.3, 0.3)),
                                     *rng.uniform(0, 1.5, size=2))
        cs = collective_ground_states(spec)
        for p in (1, -1):
            d = sector_ground_state(spec, p)
            assert cs[p].energy == pytest.approx(d.energy, abs=1e-10)
            if d.gap < 1e-8:
                continue
            corr = collective_correlators(cs[p])
            for cls, (i, j) in {"oe": (0, 1), "oo": (0, 2), "ee": (1, 3)}.items():
                ref = dense_pair_correlators(spec, d.vector, i, j)
                for k in ref:
                    assert corr[cls][k] == pytest.approx(ref[k], abs=1e-10)
            m = local_expectations(spec, d.vector)
            assert corr["mag"]["o"] == pytest.approx(m[0], abs=1e-10)
            assert corr["mag"]["e"] == pytest.approx(m[1], abs=1e-10)


def test_polarized_limit():
    cs = collective_ground_states(build_collective_pair(10, 0.5, 0.5, (1, 0.9, 0), 1e4, 1e4))
    A = cs[1].amplitudes
    assert abs(A[-1, -1]) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("eta", [1.0, 3.0])
def test_crossing_at_factorizing_field(eta):
    spec = build_collective_pair(20, 0.5, 0.5, (1, 0.9, 0), 0, 0)
    ray = FieldRay("ratio", eta) if eta != 1 else FieldRay()
    t_s, _ = factorizing_point(spec, ray)
    assert t_s == pytest.approx(0.5 * np.sqrt(eta * 0.9), abs=1e-14)
    gaps = []
    for t in (t_s - 1e-4, t_s + 1e-4):
        cs = collective_ground_states(spec.with_fields(ray.fields(t)))
        gaps.append(cs[-1].energy - cs[1].energy)
    assert gaps[0] < 0 < gaps[1]
    cs = collective_ground_states(spec.with_fields(ray.fields(t_s)))
    assert cs[-1].energy == pytest.approx(cs[1].energy, abs=1e-12)


@pytest.mark.parametrize("eta", [1.0, 3.0])
def test_side_limits_match_closed_forms(eta):
    spec = build_collective_pair(20, 0.5, 0.5, (1, 0.9, 0), 0, 0)
    ray = FieldRay("ratio", eta) if eta != 1 else FieldRay()
    t_s, _ = factorizing_point(spec, ray)
    lim = dimer_side_limits(20, 0.9, eta)
    cs = collective_ground_states(spec.with_fields(ray.fields(t_s)))
    for p, ref in ((-1, lim.minus), (1, lim.plus)):
        c = collective_pair_concurrences(cs[p])
        for k in ("oo", "ee", "oe", "o", "e"):
            assert c["C_" + k] == pytest.approx(ref[k], abs=1e-10)


def test_even_even_exceeds_odd_even_near_factorizing_field():
    spec = build_collective_pair(20, 0.5, 0.5, (1, 0.9, 0), 0, 0)
    ray = FieldRay("ratio", 3.0)
    t_s, _ = factorizing_point(spec, ray)
    for t in (t_s - 1e-3, t_s + 1e-3):
        cs = collective_ground_states(spec.with_fields(ray.fields(t)))
        p = 1 if cs[1].energy <= cs[-1].energy else -1
        c = collective_pair_concurrences(cs[p])
        assert c["C_ee"] > c["C_oe"]


@pytest.mark.parametrize("eta", [1.0, 3.0])
def test_same_sublattice_maxima_at_factorizing_field(eta):
    spec = build_collective_pair(20, 0.5, 0.5, (1, 0.9, 0), 0, 0)
    ray = FieldRay("ratio", eta) if eta != 1 else FieldRay()
    t_s, _ = factorizing_point(spec, ray)
    grid = np.linspace(0.01, 2 * t_s, 401)
    best = {"oo": [], "ee": []}
    for t in grid:
        cs = collective_ground_states(spec.with_fields(ray.fields(t)))
        p = 1 if cs[1].energy <= cs[-1].energy else -1
        c = collective_pair_concurrences(cs[p])
        best["oo"].append(c["C_oo"])
        best["ee"].append(c["C_ee"])
    step = grid[1] - grid[0]
    for k in best:
        assert abs(grid[int(np.argmax(best[k]))] - t_s) <= step


def test_dimension_cap():
    spec = build_collective_pair(4, 0.5, 0.5, (1, 0.9, 0), 0, 0)
    H, par = collective_hamiltonian(spec)
    assert H.shape == (9, 9) and set(par) == {1, -1}
    with pytest.raises(ChainError):
        collective_hamiltonian(build_collective_pair(4000, 0.5, 0.5, (1, 0.9, 0), 0, 0))
