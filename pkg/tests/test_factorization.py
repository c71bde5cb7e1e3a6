import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dimersep.chain import FieldProfile, build_dimer_chain, dense_hamiltonian
from dimersep.exact import sector_ground_state
from dimersep.factorization import (
    FactorizationError,
    alternating_field_curve,
    alternating_solution,
    anisotropy_ratio,
    border_corrections,
    check_separable,
    product_state,
    rpa_certificate,
    separable_energy,
    uniform_solution,
)
from dimersep.pair import pair_crossing, pair_spectrum

from conftest import xy_dimer


def residual(spec, state):
    sp = spec.with_fields(FieldProfile.per_site(state.fields))
    psi = product_state(spec, state.angles, state.rotated)
    return float(np.linalg.norm(dense_hamiltonian(sp) @ psi - state.energy * psi))


def test_uniform_field_value_reference_chain():
    st_ = uniform_solution(xy_dimer(20, 0.9, 0.25))
    assert st_.fields[0] == pytest.approx(0.5 * np.sqrt(0.9) * 1.25, abs=1e-14)
    assert st_.fields[0] == pytest.approx(0.59293, abs=5e-6)
    assert np.allclose(st_.angles, np.arccos(np.sqrt(0.9)))


def test_ising_limit():
    spec = build_dimer_chain(6, 0.5, 0.5, (1, 0, 0), (0.5, 0, 0), 0.0)
    st_ = uniform_solution(spec)
    assert np.allclose(st_.angles, np.pi / 2)
    assert np.allclose(st_.fields, 0.0)
    assert rpa_certificate(spec, st_).max_bminus < 1e-15


def test_two_qubit_crossing_matches_uniform_field():
    spec = build_dimer_chain(2, 0.5, 0.5, (1, 0.9, 0.2), (0, 0, 0), 0.0, "open")
    st_ = uniform_solution(spec)
    chi = (0.9 - 0.2) / (1 - 0.2)
    assert st_.fields[0] == pytest.approx(0.5 * np.sqrt(chi) * 0.8, abs=1e-14)
    assert pair_crossing(1, 0.9, 0.2) == pytest.approx(st_.fields[0], abs=1e-12)
    sp = pair_spectrum(1, 0.9, 0.2, *st_.fields)
    assert sp.energy(1) == pytest.approx(st_.energy, abs=1e-12)
    assert sp.energy(-1) == pytest.approx(st_.energy, abs=1e-12)


@pytest.mark.parametrize("spins,vo,ve,boundary", [
    ((0.5, 0.5), (1, 0.9, 0), (0.25, 0.225, 0), "cyclic"),
    ((0.5, 0.5), (1, 0.6, 0.2), (-0.7, -0.55, 0.4), "open"),
    ((0.5, 1.0), (1, 0.7, 0.2), (0.5, 0.35, 0.1), "open"),
    ((0.5, 1.0), (1, 0.7, 0.2), (0.5, 0.35, 0.1), "cyclic"),
    ((0.5, 0.5), (-1, -0.5, 0), (-0.4, -0.2, 0), "cyclic"),
])
def test_uniform_solution_is_exact_eigenstate(spins, vo, ve, boundary):
    spec = build_dimer_chain(4, *spins, vo, ve, 0.0, boundary)
    st_ = uniform_solution(spec)
    assert check_separable(spec, st_.angles, st_.fields)["max"] < 1e-12
    assert residual(spec, st_) < 1e-10
    assert rpa_certificate(spec, st_).max_bminus < 1e-12
    psi = product_state(spec, st_.angles, st_.rotated)
    sp = spec.with_fields(FieldProfile.per_site(st_.fields))
    assert separable_energy(spec, st_) == pytest.approx(float(psi @ dense_hamiltonian(sp) @ psi), abs=1e-12)


def test_chi_above_one_is_rotated():
    spec = build_dimer_chain(4, 0.5, 0.5, (0.9, 1.0, 0), (0.45, 0.5, 0), 0.0)
    ratio = anisotropy_ratio(spec)
    assert ratio.rotated and ratio.chi == pytest.approx(0.9)
    st_ = uniform_solution(spec)
    assert residual(spec, st_) < 1e-10


def test_non_constant_chi_rejected():
    spec = build_dimer_chain(4, 0.5, 0.5, (1, 0.9, 0), (0.5, 0.1, 0), 0.0)
    assert not anisotropy_ratio(spec).valid
    with pytest.raises(FactorizationError):
        uniform_solution(spec)


def test_xx_case_all_fields_separable():
    spec = build_dimer_chain(6, 0.5, 0.5, (1, 1, 0.3), (0.4, 0.4, -0.2), (0.7, 0.2))
    st_ = uniform_solution(spec)
    assert st_.kind == "xx"
    assert np.all(st_.angles == 0)
    assert check_separable(spec, np.zeros(6), spec.site_fields)["max"] == 0.0
    assert residual(spec, st_) < 1e-12


def test_random_angles_not_separable(rng):
    spec = xy_dimer(4, fields=0.5)
    assert check_separable(spec, rng.uniform(0.2, 1.2, 4))["max"] > 1e-3


def test_aligned_energy():
    spec = build_dimer_chain(4, 0.5, 1.0, (1, 0.5, 0.3), (0.2, 0.1, -0.4), (0.7, 0.2), "open")
    E = separable_energy(spec, angles=np.zeros(4), fields=spec.site_fields)
    s = spec.spins
    V = spec.coupling_matrices()[2]
    expect = -np.sum(s * spec.site_fields) - 0.5 * s @ V @ s
    assert E == pytest.approx(expect, abs=1e-14)


def test_uniform_state_is_ground_state():
    spec = xy_dimer(8, 0.7, 0.6)
    st_ = uniform_solution(spec)
    sp = spec.with_fields(FieldProfile.per_site(st_.fields))
    assert np.linalg.eigvalsh(dense_hamiltonian(sp))[0] == pytest.approx(st_.energy, abs=1e-10)


def test_border_corrections_alpha_one():
    spec = build_dimer_chain(6, 0.5, 0.5, (1, 0.8, 0), (1, 0.8, 0), 0.0, "open")
    st_ = uniform_solution(spec)
    b = np.sqrt(0.8) * 2 * 0.5
    prof = border_corrections(spec, st_).site_fields(6)
    np.testing.assert_allclose(prof, [b / 2, b, b, b, b, b / 2], atol=1e-14)
    assert check_separable(spec, st_.angles, prof)["max"] < 1e-12


def test_border_corrections_general_alpha():
    spec = build_dimer_chain(6, 0.5, 0.5, (1, 0.8, 0), (0.3, 0.24, 0), 0.0, "open")
    st_ = uniform_solution(spec)
    prof = border_corrections(spec, st_).site_fields(6)
    assert check_separable(spec, st_.angles, prof)["max"] < 1e-12
    assert residual(spec, st_) < 1e-10


def test_border_corrections_reject_cyclic():
    spec = xy_dimer(6)
    with pytest.raises(FactorizationError):
        border_corrections(spec, uniform_solution(spec))


def test_alternating_reduces_to_uniform():
    spec = xy_dimer(6, 0.9, 0.25)
    u = uniform_solution(spec)
    a = alternating_solution(spec, b_odd=u.fields[0])
    np.testing.assert_allclose(a.angles, u.angles, atol=1e-12)
    np.testing.assert_allclose(a.fields, u.fields, atol=1e-12)


def test_alternating_eta3_field():
    spec = xy_dimer(20, 0.9, 0.25)
    K = alternating_field_curve(spec, b_odd=1.0)[1]
    bo = np.sqrt(3 * K)
    assert bo == pytest.approx(0.5 * np.sqrt(2.7) * 1.25, abs=1e-14)
    assert bo == pytest.approx(1.02697, abs=1e-5)


def test_alternating_large_eta_angles():
    spec = xy_dimer(6, 0.6, 0.5)
    st_ = alternating_solution(spec, b_odd=1e6)
    assert np.cos(st_.angles[0]) == pytest.approx(1.0, abs=1e-9)
    assert np.cos(st_.angles[1]) == pytest.approx(0.6, abs=1e-9)


def test_alternating_errors():
    spec = build_dimer_chain(6, 0.5, 0.5, (1, 0.9, 0.1), (0.5, 0.46, 0.05), 0.0)
    with pytest.raises(FactorizationError):
        alternating_solution(spec, b_odd=0.5)
    with pytest.raises(FactorizationError):
        alternating_solution(xy_dimer(6), b_odd=0.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 0.95), st.floats(0.1, 1.0))
def test_alternating_curve_exact_and_off_curve_not(bo, chi, alpha):
    spec = xy_dimer(6, chi, alpha)
    st_ = alternating_solution(spec, b_odd=bo)
    assert residual(spec, st_) < 1e-10
    assert rpa_certificate(spec, st_).max_bminus < 1e-12
    off = spec.with_fields((st_.fields[0], 1.05 * st_.fields[1]))
    psi = product_state(spec, st_.angles)
    H = dense_hamiltonian(off)
    E = psi @ H @ psi
    assert np.linalg.norm(H @ psi - E * psi) > 1e-4


def test_rpa_detects_wrong_field():
    spec = xy_dimer(6, 0.9, 0.25)
    st_ = uniform_solution(spec)
    from dataclasses import replace
    # angles belonging to a 10% larger field violate B^- = 0
    wrong = replace(st_, angles=st_.angles * 1.1)
    assert rpa_certificate(spec, wrong).max_bminus > 1e-4


def test_overlap_formula():
    spec = build_dimer_chain(4, 0.5, 1.0, (1, 0.7, 0.2), (0.5, 0.35, 0.1), 0.0)
    st_ = uniform_solution(spec)
    expect = np.prod(np.cos(st_.angles) ** (2 * spec.spins))
    assert st_.overlap == pytest.approx(expect, abs=1e-15)
    psi = product_state(spec, st_.angles)
    psim = product_state(spec, -st_.angles)
    assert float(psim @ psi) == pytest.approx(expect, abs=1e-14)


def test_separable_state_in_sector_limit():
    spec = xy_dimer(6, 0.9, 0.25)
    st_ = uniform_solution(spec)
    sp = spec.with_fields(FieldProfile.per_site(st_.fields))
    for p in (1, -1):
        assert sector_ground_state(sp, p).energy == pytest.approx(st_.energy, abs=1e-10)
