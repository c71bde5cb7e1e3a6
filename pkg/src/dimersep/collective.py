"""
Collective pair model: two sublattices with a constant full-range coupling.

Inside the maximal multiplet S_sigma = m s_sigma (m = n/2 sites per sublattice)
the Hamiltonian is that of two large spins,

    H = b^o S^z_o + b^e S^z_e - (2/n) sum_mu v_mu S^mu_o S^mu_e,

solved per P_z sector in the |M_o, M_e> basis.  Two-site correlators of
spin-1/2 constituents follow from permutation symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .chain import ChainError, ChainSpec, collective_couplings, spin_matrices
from .entanglement import pair_rdm, single_site

__all__ = [
    "CollectiveState",
    "collective_hamiltonian",
    "collective_ground_states",
    "collective_correlators",
    "collective_pair_concurrences",
]

COLLECTIVE_DIMENSION_CAP = 10**6
DENSE_LIMIT = 4000


@dataclass(frozen=True)
class CollectiveState:
    """Lowest state of one parity sector; ``amplitudes[a, b]`` for M_o = S_o - a, M_e = S_e - b."""

    S_o: float
    S_e: float
    m: int
    parity: int
    energy: float
    amplitudes: np.ndarray
    gap: float

    @property
    def degenerate(self) -> bool:
        return self.gap < 1e-10


def _ops(spec: ChainSpec):
    m = spec.n // 2
    S_o, S_e = m * spec.s_odd, m * spec.s_even
    zo, po, mo = spin_matrices(float(S_o))
    ze, pe, me = spin_matrices(float(S_e))
    Io, Ie = np.eye(zo.shape[0]), np.eye(ze.shape[0])
    return m, S_o, S_e, (zo, po, mo, Io), (ze, pe, me, Ie)


def collective_hamiltonian(spec: ChainSpec) -> tuple[np.ndarray, np.ndarray]:
    """Dense H restricted to the maximal multiplet and the diagonal of P_z."""
    if spec.model != "collective":
        raise ChainError("collective solver needs a spec from build_collective_pair")
    m, S_o, S_e, (zo, po, mo, Io), (ze, pe, me, Ie) = _ops(spec)
    dim = Io.shape[0] * Ie.shape[0]
    if dim > COLLECTIVE_DIMENSION_CAP:
        raise ChainError(f"collective dimension {dim} exceeds the cap")
    vx, vy, vz = collective_couplings(spec)
    b = spec.site_fields
    bo, be = float(b[0]), float(b[1])
    scale = 2.0 / spec.n
    H = bo * np.kron(zo, Ie) + be * np.kron(Io, ze)
    # vx SxSx + vy SySy = (vx+vy)/4 (S+S- + S-S+) + (vx-vy)/4 (S+S+ + S-S-)
    H -= scale * (vx + vy) / 4 * (np.kron(po, me) + np.kron(mo, pe))
    H -= scale * (vx - vy) / 4 * (np.kron(po, pe) + np.kron(mo, me))
    H -= scale * vz * np.kron(zo, ze)
    Mo = np.diag(zo)
    Me = np.diag(ze)
    flips = np.rint(np.add.outer(Mo + S_o, Me + S_e)).astype(int).ravel()
    return H, np.where(flips % 2 == 0, 1, -1)


def collective_ground_states(spec: ChainSpec) -> dict[int, CollectiveState]:
    """Lowest eigenpair of each parity sector in the maximal multiplet."""
    H, par = collective_hamiltonian(spec)
    m, S_o, S_e, (zo, *_), (ze, *_) = _ops(spec)
    shape = (zo.shape[0], ze.shape[0])
    out = {}
    for p in (1, -1):
        idx = np.nonzero(par == p)[0]
        Hs = H[np.ix_(idx, idx)]
        if idx.size <= DENSE_LIMIT:
            w, v = sla.eigh(Hs, subset_by_index=[0, min(1, idx.size - 1)])
        else:
            w, v = spla.eigsh(Hs, k=2, which="SA", tol=1e-14)
            o = np.argsort(w)
            w, v = w[o], v[:, o]
        psi = np.zeros(H.shape[0])
        psi[idx] = v[:, 0]
        gap = float(w[1] - w[0]) if w.size > 1 else float("inf")
        out[p] = CollectiveState(S_o, S_e, m, p, float(w[0]), psi.reshape(shape), gap)
    return out


def collective_correlators(state: CollectiveState) -> dict[str, dict[str, float]]:
    """Two-site correlators of spin-1/2 constituents for the classes oo, ee, oe.

    Within a sublattice <s^mu_i s^mu_j> = (<(S^mu)^2> - m/4)/(m(m-1)); across the
    sublattices <s^mu_i s^mu_j> = <S^mu_o S^mu_e>/m^2.
    """
    m = state.m
    if state.S_o != m / 2 or state.S_e != m / 2:
        raise ChainError("pair correlators need spin-1/2 constituents")
    zo, po, mo = spin_matrices(float(state.S_o))
    ze, pe, me = spin_matrices(float(state.S_e))
    A = state.amplitudes
    norm = float(np.sum(A * A))
    if abs(norm - 1.0) > 1e-10:
        raise ChainError("collective state is not normalized")

    def left(op):  # <op (x) 1>
        return float(np.sum(A * (op @ A)))

    def right(op):  # <1 (x) op>
        return float(np.sum(A * (A @ op.T)))

    def both(op_o, op_e):
        return float(np.sum(A * (op_o @ A @ op_e.T)))

    sx = {"o": (po + mo) / 2, "e": (pe + me) / 2}
    sy_i = {"o": (po - mo) / 2, "e": (pe - me) / 2}  # = i S^y, real
    sz = {"o": zo, "e": ze}
    mags = {"o": left(zo) / m, "e": right(ze) / m}
    out = {}
    if m >= 2:
        for key, get in (("oo", left), ("ee", right)):
            s = key[0]
            sq = {
                "xx": get(sx[s] @ sx[s]),
                "yy": -get(sy_i[s] @ sy_i[s]),
                "zz": get(sz[s] @ sz[s]),
            }
            corr = {k: (v - m / 4) / (m * (m - 1)) for k, v in sq.items()}
            corr.update(sz_i=mags[s], sz_j=mags[s])
            out[key] = corr
    oe = {
        "xx": both(sx["o"], sx["e"]) / m**2,
        "yy": -both(sy_i["o"], sy_i["e"]) / m**2,
        "zz": both(zo, ze) / m**2,
        "sz_i": mags["o"],
        "sz_j": mags["e"],
    }
    out["oe"] = oe
    out["mag"] = mags
    return out


def collective_pair_concurrences(state: CollectiveState) -> dict[str, float]:
    """C_oo, C_ee, C_oe, M_o, M_e, C_o, C_e of the spin-1/2 constituents."""
    corr = collective_correlators(state)
    out = {}
    for key in ("oo", "ee", "oe"):
        if key in corr:
            out["C_" + key] = pair_rdm(corr[key]).concurrence
    for s in ("o", "e"):
        M = corr["mag"][s]
        out["M_" + s] = M
        out["C_" + s] = single_site(M)[0]
    return out
