"""
Jordan-Wigner solution of the cyclic spin-1/2 XY dimer chain in an alternating field.

Within a fixed P_z parity p the chain maps exactly onto the quadratic fermion form

    H^p = sum_j b_j (n_j - 1/2) - sum_j eta^p_j (v_+^{s_j} c_j^+ c_{j+1} + v_-^{s_j} c_j^+ c_{j+1}^+ + h.c.)

with v_+- = (v_x +- v_y)/4, eta^-_j = 1 and eta^+_j = 1 - 2 delta_{j,n} (the last
bond is antiperiodic in the even sector).  A two-site unit cell and the parity
dependent momenta k in {1/2, ..., m - 1/2} (p = +) or {0, ..., m - 1} (p = -),
m = n/2, reduce it to 4x4 Bogoliubov-de Gennes blocks

    H^p = 1/2 sum_k Psi_k^+ H_k Psi_k,   Psi_k = (c_ko, c_ke, c_{-ko}^+, c_{-ke}^+).

Lattice momenta are theta_k = 2 pi k / m; -k is stored at index (m - a) mod m for
integer k and m - 1 - a for half-integer k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain import ChainError, ChainSpec, ODD, EVEN

__all__ = [
    "JwError",
    "QuadraticForm",
    "MomentumBlock",
    "ContractionTable",
    "jw_supported",
    "fermionize",
    "momentum_blocks",
    "closed_form_lambdas",
    "sector_ground_state",
    "sector_energy",
    "spin_correlators",
]

LAMBDA_TOL = 1e-10
DEGENERACY_TOL = 1e-12


class JwError(ChainError):
    """The spec is outside the Jordan-Wigner solver's scope."""


# ---------------------------------------------------------------------------
# fermionization
# ---------------------------------------------------------------------------

def jw_supported(spec: ChainSpec) -> str | None:
    """``None`` when the JW solver applies, otherwise the reason it does not."""
    if spec.s_odd != 0.5 or spec.s_even != 0.5:
        return "spins other than 1/2"
    if spec.boundary != "cyclic":
        return "open boundary"
    if spec.n % 2 or spec.n < 2:
        return "odd number of sites"
    if not spec.is_nearest_neighbor():
        return "couplings beyond nearest neighbours"
    if spec.fields.kind == "per-site":
        b = spec.site_fields
        if not (np.allclose(b[0::2], b[0]) and np.allclose(b[1::2], b[1])):
            return "field is not alternating"
    for key in ((ODD, 1), (EVEN, 1), (ODD, -1), (EVEN, -1)):
        if spec.couplings.get(*key)[2] != 0:
            return "v_z != 0"
    if spec.couplings.get(ODD, 1) != spec.couplings.get(EVEN, -1) or \
            spec.couplings.get(EVEN, 1) != spec.couplings.get(ODD, -1):
        return "coupling table is not dimer-symmetric"
    return None


def _require(spec: ChainSpec):
    reason = jw_supported(spec)
    if reason:
        raise JwError(f"Jordan-Wigner solver does not support this spec: {reason}")


def _dimer_params(spec: ChainSpec):
    vo = spec.couplings.get(ODD, 1)
    ve = spec.couplings.get(EVEN, 1)
    b = spec.site_fields
    return (0.25 * (vo[0] + vo[1]), 0.25 * (vo[0] - vo[1]),
            0.25 * (ve[0] + ve[1]), 0.25 * (ve[0] - ve[1]), float(b[0]), float(b[1]))


@dataclass(frozen=True)
class QuadraticForm:
    """Real-space quadratic form sum h_ij c_i^+ c_j + 1/2 sum (D_ij c_i^+ c_j^+ + h.c.) + const.

    ``eta`` lists the bond signs; the form is kept mainly as an oracle for the
    momentum-space solver (its Fock-space matrix and BdG spectrum are cheap for
    small n).
    """

    parity: int
    h: np.ndarray
    D: np.ndarray
    const: float
    eta: np.ndarray

    @property
    def n(self) -> int:
        return self.h.shape[0]

    def bdg(self) -> np.ndarray:
        """2n x 2n BdG matrix in the basis (c, c^+)."""
        return np.block([[self.h, self.D], [-self.D.conj(), -self.h.conj()]])

    def fock_matrix(self) -> np.ndarray:
        """Many-body matrix on the full 2^n Fock space, occupied = spin up.

        The basis ordering matches the dense spin Hamiltonian (site 0 most
        significant, occupied before empty).
        """
        n = self.n
        a = np.array([[0.0, 0.0], [1.0, 0.0]])  # annihilates 'occupied' (index 0)
        zsgn = np.diag([-1.0, 1.0])
        cs = []
        for j in range(n):
            op = np.ones((1, 1))
            for k in range(n):
                op = np.kron(op, zsgn if k < j else (a if k == j else np.eye(2)))
            cs.append(op)
        dim = 2**n
        H = self.const * np.eye(dim)
        for i in range(n):
            for j in range(n):
                if self.h[i, j]:
                    H = H + self.h[i, j] * cs[i].T @ cs[j]
                if self.D[i, j]:
                    term = 0.5 * self.D[i, j] * cs[i].T @ cs[j].T
                    H = H + term + term.conj().T
        return H


def fermionize(spec: ChainSpec, parity: int) -> QuadraticForm:
    """Quadratic fermion form of the chain restricted to P_z = ``parity``."""
    _require(spec)
    n = spec.n
    vpo, vmo, vpe, vme, bo, be = _dimer_params(spec)
    b = spec.site_fields
    h = np.diag(b.astype(float))
    D = np.zeros((n, n))
    eta = np.ones(n)
    if parity > 0:
        eta[-1] = -1.0
    for j in range(n):
        k = (j + 1) % n
        vp, vm = (vpo, vmo) if j % 2 == 0 else (vpe, vme)
        h[j, k] += -eta[j] * vp
        h[k, j] += -eta[j] * vp
        D[j, k] += -eta[j] * vm
        D[k, j] -= -eta[j] * vm
    return QuadraticForm(int(np.sign(parity)), h, D, -0.5 * float(np.sum(b)), eta)


# ---------------------------------------------------------------------------
# momentum blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentumBlock:
    """One 4x4 BdG block.

    ``lam`` holds the two non-negative quasiparticle energies (ascending),
    ``W`` the matching eigenvectors as columns and ``U``/``V`` their particle and
    hole halves (rows o, e; columns nu).
    """

    index: int
    k: float
    theta: float
    H: np.ndarray
    lam: np.ndarray
    lam_closed: np.ndarray
    W: np.ndarray = field(repr=False)

    @property
    def U(self) -> np.ndarray:
        return self.W[:2]

    @property
    def V(self) -> np.ndarray:
        return self.W[2:]


def _block_matrix(bo, be, vp, vm) -> np.ndarray:
    cp, cm = np.conj(vp), np.conj(vm)
    return np.array([
        [bo, -vp, 0, -vm],
        [-cp, be, cm, 0],
        [0, vm, -bo, vp],
        [-cm, 0, cp, -be],
    ], dtype=complex)


def closed_form_lambdas(bo: float, be: float, vp: complex, vm: complex) -> np.ndarray:
    """(lambda_small, lambda_big) from the closed-form dispersion of one block.

    lambda^2 = Delta +- sqrt(Delta^2 - |b^o b^e - (v_+ + v_-)(conj v_+ - conj v_-)|^2);
    the small root is taken as |.|/lambda_big to avoid cancellation.
    """
    delta = 0.5 * (bo * bo + be * be) + abs(vp) ** 2 + abs(vm) ** 2
    d = abs(bo * be - (vp + vm) * (np.conj(vp) - np.conj(vm)))
    big = np.sqrt(delta + np.sqrt(max(delta * delta - d * d, 0.0)))
    small = d / big if big > 0 else 0.0
    return np.array([small, big])


def _momenta(m: int, parity: int) -> np.ndarray:
    return np.arange(m) + (0.5 if parity > 0 else 0.0)


def _minus_index(m: int, parity: int) -> np.ndarray:
    a = np.arange(m)
    return (m - 1 - a) if parity > 0 else (-a) % m


def momentum_blocks(spec: ChainSpec, parity: int) -> list[MomentumBlock]:
    """All BdG blocks of the given parity sector, diagonalized with ``eigh``.

    The numerical energies are cross-checked against :func:`closed_form_lambdas`.
    """
    _require(spec)
    vpo, vmo, vpe, vme, bo, be = _dimer_params(spec)
    m = spec.n // 2
    scale = max(1.0, abs(bo), abs(be), abs(vpo), abs(vmo), abs(vpe), abs(vme))
    out = []
    for a, k in enumerate(_momenta(m, parity)):
        theta = 2 * np.pi * k / m
        z = np.exp(-1j * theta)
        vp = vpo + vpe * z
        vm = vmo - vme * z
        Hk = _block_matrix(bo, be, vp, vm)
        w, W = np.linalg.eigh(Hk)
        lam = w[2:]
        closed = closed_form_lambdas(bo, be, vp, vm)
        if np.max(np.abs(lam - closed)) > LAMBDA_TOL * scale:
            raise JwError(f"block k={k}: eigenvalues {lam} disagree with closed form {closed}")
        out.append(MomentumBlock(a, float(k), float(theta), Hk, lam, closed, W[:, 2:]))
    return out


# ---------------------------------------------------------------------------
# sector ground state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContractionTable:
    """Contractions f_ij = <c_i^+ c_j> - delta_ij/2 and g_ij = <c_i^+ c_j^+>.

    ``degenerate`` marks sector ground states that are not unique (a zero mode or
    a parity repair at a non-self-conjugate momentum); correlators are then only
    those of one member of the multiplet.
    """

    parity: int
    energy: float
    f: np.ndarray
    g: np.ndarray
    degenerate: bool = False
    flipped: tuple | None = None

    @property
    def n(self) -> int:
        return self.f.shape[0]


def _self_conjugate_parity(bo, be, vp, vm) -> int:
    """Parity (+1 even / -1 odd) of the lowest state of a self-conjugate two-mode block."""
    e_even = 0.5 * (bo + be) - np.hypot(0.5 * (bo + be), abs(vm))
    e_odd = 0.5 * (bo + be) - np.hypot(0.5 * (bo - be), abs(vp))
    if abs(e_even - e_odd) <= DEGENERACY_TOL * max(1.0, abs(bo), abs(be)):
        return 0
    return 1 if e_even < e_odd else -1


def sector_energy(spec: ChainSpec, parity: int) -> float:
    """Lowest energy of the sector without assembling contractions."""
    return _sector(spec, parity, contractions=False).energy


def sector_ground_state(spec: ChainSpec, parity: int) -> ContractionTable:
    """Lowest state of the P_z = ``parity`` sector and its contractions.

    All quasiparticle modes are left empty; if the resulting vacuum has the
    wrong fermion parity the cheapest mode is occupied.
    """
    return _sector(spec, parity, contractions=True)


def _sector(spec: ChainSpec, parity: int, contractions: bool) -> ContractionTable:
    blocks = momentum_blocks(spec, parity)
    vpo, vmo, vpe, vme, bo, be = _dimer_params(spec)
    m = spec.n // 2
    minus = _minus_index(m, parity)
    lam = np.array([blk.lam for blk in blocks])  # (m, 2)
    energy = -0.5 * float(lam.sum())
    degenerate = bool(lam.min() <= DEGENERACY_TOL * max(1.0, abs(bo), abs(be)))

    vac_parity = 1
    for blk in blocks:
        if minus[blk.index] == blk.index:
            z = np.exp(-1j * blk.theta)
            par = _self_conjugate_parity(bo, be, vpo + vpe * z, vmo - vme * z)
            if par == 0:
                degenerate = True
                par = 1
            vac_parity *= par

    flipped = None
    if vac_parity != parity:
        a, nu = np.unravel_index(np.argmin(lam), lam.shape)
        energy += float(lam[a, nu])
        flipped = (float(blocks[a].k), int(nu))
        if minus[a] != a:
            degenerate = True
    if not contractions:
        empty = np.zeros((0, 0))
        return ContractionTable(int(np.sign(parity)), energy, empty, empty, degenerate, flipped)

    G = np.zeros((m, 4, 4), dtype=complex)
    for blk in blocks:
        G[blk.index] = blk.W @ blk.W.conj().T
    if flipped is not None:
        w = blocks[a].W[:, nu]
        partner = np.conj(np.concatenate([w[2:], w[:2]]))
        G[a] -= np.outer(w, w.conj())
        G[minus[a]] += np.outer(partner, partner.conj())

    f, g = _real_space(G, m, parity)
    return ContractionTable(int(np.sign(parity)), energy, f, g, degenerate, flipped)


def _real_space(G: np.ndarray, m: int, parity: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2 * np.pi * _momenta(m, parity) / m
    J = np.arange(m)
    ph = np.exp(1j * np.outer(theta, J))  # (k, J)
    cc = np.einsum("kJ,kL,kab->JaLb", ph, ph.conj(), G[:, :2, :2]) / m
    ca = np.einsum("kJ,kL,kab->JaLb", ph, ph.conj(), G[:, :2, 2:]) / m
    n = 2 * m
    cc = cc.reshape(n, n)  # <c_x c_y^+>
    ca = ca.reshape(n, n)  # <c_x c_y>
    F = np.eye(n) - cc.T
    f = F - 0.5 * np.eye(n)
    g = ca.T.conj()
    imag = max(np.max(np.abs(f.imag)), np.max(np.abs(g.imag)))
    if imag < 1e-10:
        f, g = f.real.copy(), g.real.copy()
    return f, g


# ---------------------------------------------------------------------------
# spin correlators
# ---------------------------------------------------------------------------

def spin_correlators(table: ContractionTable, i: int, j: int) -> dict[str, float]:
    """<s^z_i>, <s^z_j>, <s^z_i s^z_j>, <s^x_i s^x_j>, <s^y_i s^y_j> for i != j.

    The xx and yy correlators are string determinants of M = 2(f + g):
    xx = det M[i:j, i+1:j+1]/4 and yy = det M[i+1:j+1, i:j]/4.
    """
    if i == j:
        raise ValueError("need two distinct sites")
    if i > j:
        i, j = j, i
    f, g = table.f, table.g
    zz = f[i, i] * f[j, j] - abs(f[i, j]) ** 2 + abs(g[i, j]) ** 2
    M = 2 * (f + g)
    xx = 0.25 * np.linalg.det(M[i:j, i + 1:j + 1])
    yy = 0.25 * np.linalg.det(M[i + 1:j + 1, i:j])
    return {
        "sz_i": float(np.real(f[i, i])),
        "sz_j": float(np.real(f[j, j])),
        "zz": float(np.real(zz)),
        "xx": float(np.real(xx)),
        "yy": float(np.real(yy)),
    }
