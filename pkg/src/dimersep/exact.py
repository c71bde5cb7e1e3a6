"""
Brute-force diagonalization oracle.

Parity-resolved lowest eigenpairs of the dense/sparse Hamiltonian, reduced
density matrices and local expectation values.  Everything else in the package
is checked against this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .chain import (ChainSpec, DEFAULT_DIMENSION_CAP, parity_diagonal, site_operator, sparse_hamiltonian,
                    spin_matrices)

__all__ = [
    "SectorState",
    "sector_ground_state",
    "sector_spectrum",
    "parity_ground_states",
    "reduced_density_matrix",
    "local_expectations",
    "dense_pair_correlators",
]

DENSE_SECTOR_LIMIT = 1500


@dataclass(frozen=True)
class SectorState:
    """Lowest eigenpair of one parity sector, embedded in the full space."""

    parity: int
    energy: float
    vector: np.ndarray
    gap: float  # distance to the next level of the same sector (nan if unknown)


def _sector(spec: ChainSpec, parity: int, cap: int):
    H = sparse_hamiltonian(spec, cap)
    idx = np.nonzero(parity_diagonal(spec) == parity)[0]
    return H[idx][:, idx], idx


def sector_spectrum(spec: ChainSpec, parity: int, cap: int = DEFAULT_DIMENSION_CAP) -> np.ndarray:
    """All eigenvalues of the given parity sector (dense; small systems only)."""
    Hs, _ = _sector(spec, parity, cap)
    return sla.eigvalsh(Hs.toarray())


def sector_ground_state(spec: ChainSpec, parity: int,
                        cap: int = DEFAULT_DIMENSION_CAP) -> SectorState:
    """Lowest state with P_z = ``parity`` (+1 or -1)."""
    Hs, idx = _sector(spec, parity, cap)
    d = Hs.shape[0]
    if d == 0:
        raise ValueError(f"parity sector {parity:+d} is empty")
    if d <= DENSE_SECTOR_LIMIT:
        w, v = sla.eigh(Hs.toarray(), subset_by_index=[0, min(1, d - 1)])
    else:
        w, v = spla.eigsh(Hs, k=2, which="SA", tol=1e-14, ncv=min(d, 40))
        order = np.argsort(w)
        w, v = w[order], v[:, order]
    psi = np.zeros(spec.dimension)
    psi[idx] = v[:, 0]
    gap = float(w[1] - w[0]) if w.size > 1 else float("nan")
    return SectorState(parity, float(w[0]), psi, gap)


def parity_ground_states(spec: ChainSpec, cap: int = DEFAULT_DIMENSION_CAP) -> dict[int, SectorState]:
    return {p: sector_ground_state(spec, p, cap) for p in (1, -1)}


def reduced_density_matrix(spec: ChainSpec, psi: np.ndarray, sites) -> np.ndarray:
    """Reduced density matrix of ``sites`` (ordered as given) for a pure state."""
    sites = list(sites)
    dims = [int(round(2 * s)) + 1 for s in spec.spins]
    t = np.asarray(psi).reshape(dims)
    rest = [k for k in range(spec.n) if k not in sites]
    t = np.transpose(t, sites + rest)
    da = int(np.prod([dims[k] for k in sites]))
    m = t.reshape(da, -1)
    return m @ m.conj().T


def local_expectations(spec: ChainSpec, psi: np.ndarray) -> np.ndarray:
    """<s^z_i> for all sites."""
    return np.array([np.vdot(psi, site_operator(spec, i, "z") @ psi).real for i in range(spec.n)])


def dense_pair_correlators(spec: ChainSpec, psi: np.ndarray, i: int, j: int) -> dict[str, float]:
    """<s^z_i>, <s^z_j>, <s^mu_i s^mu_j> from the two-site RDM (any spin)."""
    rho = reduced_density_matrix(spec, psi, [i, j])
    out = {}
    ops = {}
    for k, site in (("i", i), ("j", j)):
        sz, sp, sm = spin_matrices(float(spec.spins[site]))
        ops[k] = {"x": (sp + sm) / 2, "y": (sp - sm) / 2j, "z": sz}
    di, dj = ops["i"]["z"].shape[0], ops["j"]["z"].shape[0]
    out["sz_i"] = float(np.trace(rho @ np.kron(ops["i"]["z"], np.eye(dj))).real)
    out["sz_j"] = float(np.trace(rho @ np.kron(np.eye(di), ops["j"]["z"])).real)
    for mu in "xyz":
        out[mu + mu] = float(np.trace(rho @ np.kron(ops["i"][mu], ops["j"][mu])).real)
    return out
