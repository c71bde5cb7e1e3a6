"""
Two-spin reduced states of parity-symmetric spin-1/2 states and their entanglement.

For a state with definite P_z parity the pair density matrix only involves
<s^z_i>, <s^z_j> and the diagonal correlators <s^mu_i s^mu_j>:

    rho_ij = 1/4 + <s^z_i> s^z_i + <s^z_j> s^z_j + 4 sum_mu <s^mu_i s^mu_j> s^mu_i s^mu_j
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .limits import binary_entropy

__all__ = [
    "RdmError",
    "PairState",
    "pair_rdm",
    "wootters",
    "wootters_rmatrix",
    "formation_entropy",
    "single_site",
]

_SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2
_SY = np.array([[0, -1j], [1j, 0]]) / 2
_SZ = np.array([[1, 0], [0, -1]], dtype=complex) / 2
_I2 = np.eye(2)
RDM_NEGATIVITY_TOL = 1e-9


class RdmError(ValueError):
    """Correlators do not define a valid density matrix."""


@dataclass(frozen=True)
class PairState:
    """Two-spin reduced state and its entanglement."""

    rho: np.ndarray
    correlators: dict = field(repr=False)
    concurrence: float
    c_plus: float
    c_minus: float
    alignment: str
    entropy: float


def wootters(corr: dict) -> tuple[float, float, float, str]:
    """Concurrence from parity-block correlators.

    Returns (C, C^+, C^-, alignment) with C = max(C^+, C^-, 0), alignment
    ``parallel`` when C^+ > 0, ``antiparallel`` when C^- > 0, else ``separable``.
    """
    xx, yy, zz = corr["xx"], corr["yy"], corr["zz"]
    mi, mj = corr["sz_i"], corr["sz_j"]
    out = {}
    for sgn, key in ((1, "+"), (-1, "-")):
        rad = (0.25 - sgn * zz) ** 2 - 0.25 * (mi - sgn * mj) ** 2
        out[key] = 2 * (abs(xx - sgn * yy) - np.sqrt(max(rad, 0.0)))
    cp, cm = float(out["+"]), float(out["-"])
    C = max(cp, cm, 0.0)
    if C == 0.0:
        align = "separable"
    else:
        align = "parallel" if cp >= cm else "antiparallel"
    return C, cp, cm, align


def _rho(corr: dict) -> np.ndarray:
    rho = 0.25 * np.eye(4, dtype=complex)
    rho += corr["sz_i"] * np.kron(_SZ, _I2) + corr["sz_j"] * np.kron(_I2, _SZ)
    for mu, S in (("xx", _SX), ("yy", _SY), ("zz", _SZ)):
        rho += 4 * corr[mu] * np.kron(S, S)
    return rho


def pair_rdm(corr: dict, check: bool = True) -> PairState:
    """Build the pair state from correlators ``sz_i, sz_j, xx, yy, zz``.

    Raises :class:`RdmError` when the resulting matrix has an eigenvalue below
    -1e-9, which signals inconsistent correlators.
    """
    rho = _rho(corr)
    if check:
        w = np.linalg.eigvalsh(rho)
        if w[0] < -RDM_NEGATIVITY_TOL:
            raise RdmError(f"pair density matrix has eigenvalue {w[0]:.3e}")
    C, cp, cm, align = wootters(corr)
    return PairState(rho, dict(corr), C, cp, cm, align, formation_entropy(C))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def wootters_rmatrix(rho: np.ndarray) -> float:
    """Wootters concurrence by the spectral route, for any two-qubit rho.

    Uses the singular values of sqrt(rho) Y sqrt(rho*) with Y = sigma^y (x) sigma^y,
    which are the eigenvalues of R.
    """
    Y = np.kron(2 * _SY, 2 * _SY)
    r = _psd_sqrt(rho)
    lam = np.linalg.svd(r @ Y @ r.conj(), compute_uv=False)
    return float(max(0.0, 2 * lam[0] - lam.sum()))


def formation_entropy(C: float) -> float:
    """Entanglement of formation (bits) of a two-qubit state with concurrence C."""
    return binary_entropy(C)


def single_site(sz: float) -> tuple[float, float]:
    """(C_i, S_i) of one spin-1/2 against the rest in a definite-parity state."""
    if abs(sz) > 0.5 + 1e-12:
        raise ValueError(f"|<s^z>| = {abs(sz)} exceeds 1/2")
    C = float(np.sqrt(max(0.0, 1.0 - 4.0 * sz * sz)))
    return C, binary_entropy(C)
