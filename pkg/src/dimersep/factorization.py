"""
Exactly separable eigenstates of transverse-field spin arrays.

A product state |Theta> = prod_i exp(i theta_i s^y_i)|-s_i> is an eigenstate
iff the pair conditions

    v_y^{ij} = v_x^{ij} cos(theta_i) cos(theta_j) + v_z^{ij} sin(theta_i) sin(theta_j)

hold for every coupled pair and the fields satisfy the site (mean-field)
conditions

    b^i sin(theta_i) = sum_j s_j (v_x^{ij} cos(theta_i) sin(theta_j) - v_z^{ij} sin(theta_i) cos(theta_j)).

This module checks those conditions, builds the uniform and alternating
solutions, the separable energy, and the RPA certificate B^- = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .chain import (
    ChainError,
    ChainSpec,
    DEFAULT_DIMENSION_CAP,
    FieldProfile,
    map_sign_convention,
    spin_matrices,
)

__all__ = [
    "FactorizationError",
    "AnisotropyRatio",
    "FactorizedState",
    "RpaMatrix",
    "anisotropy_ratio",
    "check_separable",
    "uniform_solution",
    "border_corrections",
    "alternating_solution",
    "alternating_field_curve",
    "separable_energy",
    "rpa_certificate",
    "product_state",
    "local_state",
]

CHI_RTOL = 1e-10


class FactorizationError(ChainError):
    """No separable solution of the requested type exists."""


@dataclass(frozen=True)
class AnisotropyRatio:
    """Common value of (v_y - v_z)/(v_x - v_z) over coupled pairs."""

    chi: float
    valid: bool
    rotated: bool = False
    spread: float = 0.0

    @property
    def is_xx(self) -> bool:
        return self.valid and abs(self.chi - 1.0) <= CHI_RTOL


@dataclass(frozen=True)
class FactorizedState:
    """A separable eigenstate and the fields that make it exact.

    When ``rotated`` is set the angles refer to the frame obtained by a global
    pi/2 rotation about z (x and y couplings swapped); the physical state is
    exp(-i pi/2 S^z) applied to the product state.
    """

    angles: np.ndarray
    fields: np.ndarray
    energy: float
    overlap: float
    sign_pattern: np.ndarray
    chi: float
    kind: str = "uniform"
    rotated: bool = False

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "chi": self.chi,
            "rotated": self.rotated,
            "angles": [float(a) for a in self.angles],
            "fields": [float(b) for b in self.fields],
            "energy": float(self.energy),
            "overlap": float(self.overlap),
        }


@dataclass(frozen=True)
class RpaMatrix:
    """RPA blocks A = diag(lambda) + B^+ and B^- around a product state."""

    A: np.ndarray
    Bplus: np.ndarray
    Bminus: np.ndarray
    lam: np.ndarray

    @property
    def max_bminus(self) -> float:
        return float(np.max(np.abs(self.Bminus))) if self.Bminus.size else 0.0

    def matrix(self) -> np.ndarray:
        """Full RPA matrix [[A, B^-], [-B^-, -A]]."""
        return np.block([[self.A, self.Bminus], [-self.Bminus, -self.A]])


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _swap_xy(spec: ChainSpec) -> ChainSpec:
    return replace(spec, couplings=spec.couplings.swapped_xy())


def _frame(spec: ChainSpec, rotated: bool) -> ChainSpec:
    return _swap_xy(spec) if rotated else spec


def _pairs(V: np.ndarray):
    n = V.shape[1]
    for i in range(n):
        for j in range(i + 1, n):
            if np.any(V[:, i, j] != 0):
                yield i, j


def _ratio(spec: ChainSpec) -> AnisotropyRatio:
    V = spec.coupling_matrices()
    ratios = []
    scale = max(float(np.max(np.abs(V))), 1e-300)
    for i, j in _pairs(V):
        vx, vy, vz = V[:, i, j]
        num, den = vy - vz, vx - vz
        if abs(den) <= 1e-14 * scale:
            if abs(num) <= 1e-14 * scale:
                continue  # isotropic pair: any common angle works
            ratios.append(np.inf)
        else:
            ratios.append(num / den)
    if not ratios:
        return AnisotropyRatio(1.0, True)
    r = np.array(ratios)
    if np.any(np.isinf(r)):
        return AnisotropyRatio(float("inf"), bool(np.all(np.isinf(r))))
    chi = float(np.mean(r))
    spread = float(np.max(np.abs(r - chi)))
    return AnisotropyRatio(chi, spread <= CHI_RTOL * max(1.0, abs(chi)), False, spread)


def anisotropy_ratio(spec: ChainSpec) -> AnisotropyRatio:
    """Anisotropy ratio after sign mapping, normalized to chi <= 1 when possible.

    If the ratio exceeds 1 the x and y axes are exchanged (global pi/2 rotation
    about z) and ``rotated`` is set on the result.
    """
    mapped, _ = map_sign_convention(spec)
    r = _ratio(mapped)
    if r.valid and r.chi <= 1.0 + CHI_RTOL:
        return r
    mapped2, _ = map_sign_convention(_swap_xy(spec))
    r2 = _ratio(mapped2)
    if r2.valid and r2.chi <= 1.0 + CHI_RTOL:
        return replace(r2, rotated=True)
    return r


def local_state(s: float, theta: float) -> np.ndarray:
    """exp(i theta s^y)|-s> in the descending-m basis (real vector)."""
    _, sp, sm = spin_matrices(float(s))
    vec = np.zeros(sp.shape[0])
    vec[-1] = 1.0
    # i s^y = (s^+ - s^-)/2
    return expm(theta * (sp - sm) / 2) @ vec


def product_state(spec: ChainSpec, angles, rotated: bool = False,
                  cap: int = DEFAULT_DIMENSION_CAP) -> np.ndarray:
    """Full state vector of the product state, optionally rotated back by exp(-i pi/2 S^z)."""
    if spec.dimension > cap:
        raise ChainError(f"Hilbert dimension {spec.dimension} exceeds the cap {cap}")
    psi = np.ones(1)
    for s, th in zip(spec.spins, angles):
        psi = np.kron(psi, local_state(float(s), float(th)))
    if rotated:
        from .chain import magnetic_quantum_numbers

        mtot = magnetic_quantum_numbers(spec).sum(axis=1)
        psi = psi * np.exp(-0.5j * np.pi * mtot)
    return psi


def _overlap(spec: ChainSpec, angles: np.ndarray) -> float:
    return float(np.prod(np.cos(angles) ** (2 * spec.spins)))


# ---------------------------------------------------------------------------
# conditions, energy, certificate
# ---------------------------------------------------------------------------

def check_separable(spec: ChainSpec, angles, fields=None) -> dict[str, float]:
    """Residuals of the pair and site conditions.

    Returns ``{"pair": max pair residual, "site": max site residual, "max": ...}``.
    ``fields`` defaults to the spec's own field profile.
    """
    th = np.asarray(angles, dtype=float)
    if th.shape != (spec.n,):
        raise ChainError(f"expected {spec.n} angles, got shape {th.shape}")
    b = spec.site_fields if fields is None else np.asarray(fields, dtype=float)
    V = spec.coupling_matrices()
    vx, vy, vz = V
    c, s = np.cos(th), np.sin(th)
    pair = vy - vx * np.outer(c, c) - vz * np.outer(s, s)
    mask = np.any(V != 0, axis=0)
    pair_res = float(np.max(np.abs(pair[mask]))) if mask.any() else 0.0
    sj = spec.spins
    site = b * s - (c * (vx @ (sj * s)) - s * (vz @ (sj * c)))
    site_res = float(np.max(np.abs(site)))
    return {"pair": pair_res, "site": site_res, "max": max(pair_res, site_res)}


def separable_energy(spec: ChainSpec, state: FactorizedState | None = None, *,
                     angles=None, fields=None) -> float:
    """Energy <Theta|H|Theta> of a product state.

    Either pass a :class:`FactorizedState` or explicit ``angles`` (and optionally
    ``fields``, defaulting to the spec's profile).
    """
    if state is not None:
        frame = _frame(spec, state.rotated)
        th, b = state.angles, state.fields
    else:
        frame = spec
        th = np.asarray(angles, dtype=float)
        b = spec.site_fields if fields is None else np.asarray(fields, dtype=float)
    vx, _, vz = frame.coupling_matrices()
    c, s = np.cos(th), np.sin(th)
    sj = frame.spins
    inter = sj * s * (vx @ (sj * s)) + sj * c * (vz @ (sj * c))
    return float(-np.sum(sj * b * c) - 0.5 * np.sum(inter))


def rpa_certificate(spec: ChainSpec, state: FactorizedState) -> RpaMatrix:
    """RPA blocks around the product state; B^- vanishes iff the pair conditions hold."""
    frame = _frame(spec, state.rotated)
    vx, vy, vz = frame.coupling_matrices()
    th = state.angles
    c, s = np.cos(th), np.sin(th)
    sj = frame.spins
    root = np.sqrt(np.outer(sj, sj))
    common = vx * np.outer(c, c) + vz * np.outer(s, s)
    Bp = -0.5 * root * (common + vy)
    Bm = -0.5 * root * (common - vy)
    hx = -(vx @ (sj * s))
    hz = state.fields + vz @ (sj * c)
    lam = np.hypot(hx, hz)
    return RpaMatrix(np.diag(lam) + Bp, Bp, Bm, lam)


# ---------------------------------------------------------------------------
# solutions
# ---------------------------------------------------------------------------

def _site_fields_from_angles(spec: ChainSpec, th: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    vx, _, vz = spec.coupling_matrices()
    c, s = np.cos(th), np.sin(th)
    sj = spec.spins
    rhs = c * (vx @ (sj * s)) - s * (vz @ (sj * c))
    out = fallback.astype(float).copy()
    ok = np.abs(s) > 1e-300
    out[ok] = rhs[ok] / s[ok]
    return out


def uniform_solution(spec: ChainSpec, field_sign: int = 1) -> FactorizedState:
    """Uniform separable eigenstate theta_i = eps_i arccos(sqrt(chi)).

    The fields b^i = sqrt(chi) sum_j (v_x - v_z)^{ij} s_j are returned in the
    state (the spec's own fields are ignored).  For open chains this already
    contains the border corrections.  ``field_sign=-1`` selects the mirror
    solution with all fields reversed.  chi = 1 yields theta = 0 with the spec's
    fields kept as they are (any field works).
    """
    ratio = anisotropy_ratio(spec)
    if not ratio.valid:
        raise FactorizationError(
            f"anisotropy ratio is not constant across coupled pairs (spread {ratio.spread:.3g})")
    if ratio.chi < -CHI_RTOL:
        raise FactorizationError(f"chi = {ratio.chi:.6g} < 0 has no real uniform solution")
    if ratio.chi > 1.0 + CHI_RTOL:
        raise FactorizationError(f"chi = {ratio.chi:.6g} could not be normalized below 1")
    frame = _frame(spec, ratio.rotated)
    mapped, eps = map_sign_convention(frame)
    chi = min(max(ratio.chi, 0.0), 1.0)
    if ratio.is_xx:
        th = np.zeros(spec.n)
        b = spec.site_fields
        kind = "xx"
    else:
        theta = np.arccos(np.sqrt(chi))
        if field_sign < 0:
            theta = np.pi - theta
        th = eps * theta
        vx, _, vz = mapped.coupling_matrices()
        b = np.sign(field_sign) * np.sqrt(chi) * ((vx - vz) @ mapped.spins)
        kind = "uniform"
    state = FactorizedState(th, b, 0.0, _overlap(spec, th), eps, chi, kind, ratio.rotated)
    return replace(state, energy=separable_energy(spec, state))


def border_corrections(spec: ChainSpec, state: FactorizedState) -> FieldProfile:
    """Per-site fields that keep ``state`` exact on an open chain.

    Computed from the site conditions directly, so longer-range couplings are
    covered too.  Sites with sin(theta_i) = 0 keep the bulk value.
    """
    if spec.boundary != "open":
        raise FactorizationError("border corrections only apply to open chains")
    frame = _frame(spec, state.rotated)
    return FieldProfile.per_site(_site_fields_from_angles(frame, state.angles, state.fields))


def _alternating_check(spec: ChainSpec) -> tuple[ChainSpec, np.ndarray, float, float]:
    V = spec.coupling_matrices()
    if np.any(V[2] != 0):
        raise FactorizationError("alternating solution requires v_z = 0")
    for (sigma, l), val in spec.couplings.entries.items():
        if l % 2 == 0 and any(val):
            raise FactorizationError("alternating solution requires couplings only between sublattices")
    mapped, eps = map_sign_convention(spec)
    r = _ratio(mapped)
    if not r.valid or not (-CHI_RTOL <= r.chi < 1.0):
        raise FactorizationError(f"alternating solution requires constant chi in [0, 1), got {r.chi}")
    vx = mapped.coupling_matrices()[0]
    v_oe = float(vx[0, 1::2].sum())
    return mapped, eps, max(r.chi, 0.0), v_oe


def alternating_field_curve(spec: ChainSpec, b_odd: float | None = None,
                            b_even: float | None = None) -> tuple[float, float]:
    """Complete (b^o, b^e) on the separability curve b^o b^e = chi (v^oe)^2 s_o s_e."""
    _, _, chi, v_oe = _alternating_check(spec)
    k = chi * v_oe**2 * spec.s_odd * spec.s_even
    if (b_odd is None) == (b_even is None):
        raise ChainError("give exactly one of b_odd, b_even")
    given = b_odd if b_odd is not None else b_even
    if given == 0:
        if chi != 0:
            raise FactorizationError("a zero field has no partner on the separability curve for chi != 0")
        return (0.0, 0.0)
    other = k / given
    return (given, other) if b_odd is not None else (other, given)


def alternating_solution(spec: ChainSpec, b_odd: float | None = None,
                         b_even: float | None = None) -> FactorizedState:
    """Alternating separable eigenstate on the curve b^o b^e = chi (v^oe)^2 s_o s_e.

    Exactly one of ``b_odd``/``b_even`` is given; the other is fixed by the curve.
    Angles satisfy cos^2 theta_sigma = (chi^2 + bt_sigma^2)/(1 + bt_sigma^2) with
    bt_sigma = b^sigma/(v^oe s_sigma-bar); signs follow the sign pattern.
    """
    mapped, eps, chi, v_oe = _alternating_check(spec)
    bo, be = alternating_field_curve(spec, b_odd, b_even)
    if v_oe == 0:
        raise FactorizationError("sublattices are decoupled")
    bt_o = bo / (v_oe * spec.s_even)
    bt_e = be / (v_oe * spec.s_odd)
    sgn = 1.0 if bo >= 0 else -1.0
    cos_o = sgn * np.sqrt((chi**2 + bt_o**2) / (1 + bt_o**2))
    cos_e = sgn * np.sqrt((chi**2 + bt_e**2) / (1 + bt_e**2))
    base = np.array([np.arccos(cos_o) if i % 2 == 0 else np.arccos(cos_e) for i in range(spec.n)])
    th = eps * base
    b = np.array([bo if i % 2 == 0 else be for i in range(spec.n)])
    if spec.boundary == "open":
        b = _site_fields_from_angles(spec, th, b)
    state = FactorizedState(th, b, 0.0, _overlap(spec, th), eps, chi, "alternating", False)
    return replace(state, energy=separable_energy(spec, state))
