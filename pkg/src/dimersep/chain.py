"""
Chain data model for dimer-type spin arrays in a transverse field.

The Hamiltonian family is

    H = sum_i b^i s^z_i - 1/2 sum_{i != j} sum_mu v_mu^{ij} s^mu_i s^mu_j

with couplings v_mu^{ij} = v_mu^{sigma_i}(j - i) depending only on the sublattice
of site i (odd/even) and the separation.  Couplings are stored sparsely by
(sublattice, separation) and expanded to n x n matrices on demand.

Conventions shared by every module of the package:

* sites are 0-based in the API; site index 0 is the physical site 1 (odd sublattice);
* local basis ordered by descending s^z, site 0 is the most significant tensor factor;
* s^+ = s^x + i s^y with <m+1|s^+|m> = sqrt(s(s+1) - m(m+1));
* P_z = exp[i pi sum_i (s^z_i + s_i)], so the fully-down state has parity +1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Mapping

import numpy as np
import scipy.sparse as sps

ODD, EVEN = "o", "e"
AXES = ("x", "y", "z")
DEFAULT_DIMENSION_CAP = 2**14


class ChainError(ValueError):
    """Invalid chain specification or unsupported operation on it."""


class FrustrationError(ChainError):
    """Sign pattern of the couplings cannot be gauged to a ferromagnetic one."""


def sublattice(i: int) -> str:
    """Sublattice label of 0-based site ``i`` (site 0 is the odd site 1)."""
    return ODD if i % 2 == 0 else EVEN


def _check_spin(s: float) -> float:
    s = float(s)
    two_s = 2 * s
    if s <= 0 or abs(two_s - round(two_s)) > 1e-12:
        raise ChainError(f"spin must be a positive half-integer, got {s}")
    return float(Fraction(round(two_s), 2))


# ---------------------------------------------------------------------------
# couplings and fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingTable:
    """Sparse table (sublattice, separation) -> (v_x, v_y, v_z)."""

    entries: Mapping[tuple[str, int], tuple[float, float, float]] = field(default_factory=dict)

    def get(self, sigma: str, l: int) -> tuple[float, float, float]:
        return self.entries.get((sigma, l), (0.0, 0.0, 0.0))

    def separations(self) -> list[int]:
        return sorted({l for (_, l) in self.entries})

    def has_sublattice(self, sigma: str) -> bool:
        return any(s == sigma and any(v != 0 for v in val) for (s, _), val in self.entries.items())

    def scaled(self, signs: Mapping[tuple[str, int], float]) -> "CouplingTable":
        """Multiply the x and y components of selected entries by a sign."""
        out = {}
        for key, (vx, vy, vz) in self.entries.items():
            f = signs.get(key, 1.0)
            out[key] = (f * vx, f * vy, vz)
        return CouplingTable(out)

    def swapped_xy(self) -> "CouplingTable":
        return CouplingTable({k: (vy, vx, vz) for k, (vx, vy, vz) in self.entries.items()})


@dataclass(frozen=True)
class FieldProfile:
    """Transverse field: ``uniform`` (b), ``alternating`` (b_o, b_e) or ``per-site``."""

    kind: str
    values: tuple[float, ...]

    def __post_init__(self):
        expected = {"uniform": 1, "alternating": 2}
        if self.kind not in ("uniform", "alternating", "per-site"):
            raise ChainError(f"unknown field kind {self.kind!r}")
        if self.kind in expected and len(self.values) != expected[self.kind]:
            raise ChainError(f"{self.kind} field needs {expected[self.kind]} value(s)")

    @classmethod
    def uniform(cls, b: float) -> "FieldProfile":
        return cls("uniform", (float(b),))

    @classmethod
    def alternating(cls, b_odd: float, b_even: float) -> "FieldProfile":
        return cls("alternating", (float(b_odd), float(b_even)))

    @classmethod
    def per_site(cls, values) -> "FieldProfile":
        return cls("per-site", tuple(float(v) for v in values))

    def site_fields(self, n: int) -> np.ndarray:
        if self.kind == "uniform":
            return np.full(n, self.values[0])
        if self.kind == "alternating":
            return np.array([self.values[i % 2] for i in range(n)])
        if len(self.values) != n:
            raise ChainError(f"per-site field has {len(self.values)} values for n={n}")
        return np.array(self.values)


@dataclass(frozen=True)
class ChainSpec:
    """Geometry, spins, couplings, field and boundary of a dimer-type chain.

    ``model`` tags how the spec was built (``dimer``, ``collective`` or
    ``general``) so solvers can be routed without re-deriving the structure.
    """

    n: int
    s_odd: float
    s_even: float
    couplings: CouplingTable
    fields: FieldProfile
    boundary: str = "cyclic"
    model: str = "general"

    def __post_init__(self):
        if self.n < 1:
            raise ChainError("n must be positive")
        if self.boundary not in ("cyclic", "open"):
            raise ChainError(f"boundary must be 'cyclic' or 'open', got {self.boundary!r}")
        object.__setattr__(self, "s_odd", _check_spin(self.s_odd))
        object.__setattr__(self, "s_even", _check_spin(self.s_even))
        self.fields.site_fields(self.n)

    @property
    def spins(self) -> np.ndarray:
        return np.array([self.s_odd if i % 2 == 0 else self.s_even for i in range(self.n)])

    @property
    def site_fields(self) -> np.ndarray:
        return self.fields.site_fields(self.n)

    @property
    def dimension(self) -> int:
        return int(np.prod([int(round(2 * s)) + 1 for s in self.spins]))

    def with_fields(self, fields: FieldProfile | tuple[float, float] | float) -> "ChainSpec":
        """Copy with new fields: a profile, a (b^o, b^e) pair or a uniform value."""
        if np.isscalar(fields):
            fields = FieldProfile.uniform(float(fields))
        elif not isinstance(fields, FieldProfile):
            fields = FieldProfile.alternating(*fields)
        return replace(self, fields=fields)

    def is_nearest_neighbor(self) -> bool:
        return all(abs(l) == 1 for l in self.couplings.separations())

    def coupling_matrices(self) -> np.ndarray:
        """Dense couplings, shape (3, n, n), axis order x, y, z.

        For cyclic chains separations are taken modulo n, so aliased entries
        (e.g. l = +1 and l = -1 when n = 2) add up.
        """
        return _coupling_matrices(self)


def _coupling_matrices(spec: ChainSpec) -> np.ndarray:
    n = spec.n
    V = np.zeros((3, n, n))
    for (sigma, l), vals in spec.couplings.entries.items():
        if l == 0:
            raise ChainError("separation 0 is not a coupling")
        for i in range(n):
            if sublattice(i) != sigma:
                continue
            j = i + l
            if spec.boundary == "cyclic":
                j %= n
            elif not 0 <= j < n:
                continue
            if j == i:
                raise ChainError(f"separation {l} wraps onto the same site for n={n}")
            V[:, i, j] += vals
    if not np.allclose(V, V.transpose(0, 2, 1), atol=1e-13):
        raise ChainError("coupling table is not symmetric: need v^o(l) = v^e(-l) for odd l "
                         "and v^s(l) = v^s(-l) for even l")
    return V


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _xyz(v) -> tuple[float, float, float]:
    if isinstance(v, Mapping):
        return tuple(float(v.get(a, 0.0)) for a in AXES)
    vx, vy, vz = (tuple(v) + (0.0, 0.0, 0.0))[:3]
    return float(vx), float(vy), float(vz)


def build_dimer_chain(n: int, s_odd: float, s_even: float, v_odd, v_even,
                      fields: FieldProfile | float | tuple[float, float],
                      boundary: str = "cyclic") -> ChainSpec:
    """Nearest-neighbour dimer chain with internal (odd) and inter-dimer (even) bonds.

    ``v_odd`` couples sites (2i-1, 2i) and ``v_even`` couples (2i, 2i+1), each given
    as ``(v_x, v_y, v_z)`` or a mapping with keys ``x, y, z``.  ``n = 2`` degenerates
    to a single pair; for a cyclic ring of two sites both bonds join the same pair.
    """
    if n < 2 or n % 2:
        raise ChainError(f"dimer chain needs an even number of sites >= 2, got n={n}")
    vo, ve = _xyz(v_odd), _xyz(v_even)
    entries = {}
    if any(vo):
        entries[(ODD, 1)] = vo
        entries[(EVEN, -1)] = vo
    if any(ve):
        entries[(EVEN, 1)] = ve
        entries[(ODD, -1)] = ve
    if not isinstance(fields, FieldProfile):
        fields = (FieldProfile.uniform(fields) if np.isscalar(fields)
                  else FieldProfile.alternating(*fields))
    return ChainSpec(n, s_odd, s_even, CouplingTable(entries), fields, boundary, model="dimer")


def build_collective_pair(n: int, s_odd: float, s_even: float, v, b_odd: float,
                          b_even: float) -> ChainSpec:
    """Two sublattices coupled by a constant full-range interaction 2 v_mu / n.

    Within the maximal-spin multiplet this is the pair Hamiltonian
    b_o S^z_o + b_e S^z_e - (2/n) sum_mu v_mu S^mu_o S^mu_e.
    """
    if n <= 0 or n % 2:
        raise ChainError(f"collective pair needs a positive even n, got n={n}")
    vals = tuple(2.0 * c / n for c in _xyz(v))
    entries = {}
    for l in range(1, n, 2):
        entries[(ODD, l)] = vals
        entries[(EVEN, l)] = vals
    return ChainSpec(n, s_odd, s_even, CouplingTable(entries),
                     FieldProfile.alternating(b_odd, b_even), "cyclic", model="collective")


def dimer_couplings(spec: ChainSpec) -> dict[str, tuple[float, float, float]]:
    """(v_x, v_y, v_z) of the odd and even bonds of a nearest-neighbour dimer spec."""
    if not spec.is_nearest_neighbor():
        raise ChainError("not a nearest-neighbour dimer chain")
    return {ODD: spec.couplings.get(ODD, 1), EVEN: spec.couplings.get(EVEN, 1)}


def collective_couplings(spec: ChainSpec) -> tuple[float, float, float]:
    """Recover (v_x, v_y, v_z) of a collective-pair spec."""
    if spec.model != "collective":
        raise ChainError("not a collective-pair spec")
    vals = spec.couplings.get(ODD, 1)
    return tuple(spec.n * c / 2.0 for c in vals)


# ---------------------------------------------------------------------------
# sign conventions
# ---------------------------------------------------------------------------

def map_sign_convention(spec: ChainSpec) -> tuple[ChainSpec, np.ndarray]:
    """Gauge away negative v_x couplings by local pi rotations about z.

    Returns the equivalent spec with v_x >= 0 on every bond together with the
    per-site signs eps_i, so that angles of the original system are eps_i * theta.
    Antiferromagnetic dimer chains give the Neel pattern (+,-,+,-,...), the mixed
    case v_x^o > 0 > v_x^e gives (+,+,-,-,...).
    """
    n = spec.n
    V = spec.coupling_matrices()
    vx = V[0]
    eps = np.zeros(n, dtype=int)
    for start in range(n):
        if eps[start]:
            continue
        eps[start] = 1
        stack = [start]
        while stack:
            i = stack.pop()
            for j in np.nonzero(vx[i])[0]:
                want = eps[i] * (1 if vx[i, j] > 0 else -1)
                if eps[j] == 0:
                    eps[j] = want
                    stack.append(j)
                elif eps[j] != want:
                    raise FrustrationError(
                        "coupling signs are frustrated (mixed-sign cyclic dimer chains need n/2 even)")
    signs = {}
    for (sigma, l) in spec.couplings.entries:
        factors = set()
        for i in range(n):
            if sublattice(i) != sigma:
                continue
            j = i + l
            if spec.boundary == "cyclic":
                j %= n
            elif not 0 <= j < n:
                continue
            factors.add(int(eps[i] * eps[j]))
        if len(factors) > 1:
            raise ChainError(f"sign pattern is not expressible on entry {(sigma, l)}")
        signs[(sigma, l)] = float(factors.pop()) if factors else 1.0
    return replace(spec, couplings=spec.couplings.scaled(signs)), eps


# ---------------------------------------------------------------------------
# dense / sparse operators
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def spin_matrices(s: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Real (s^z, s^+, s^-) in the descending-m basis."""
    m = s - np.arange(int(round(2 * s)) + 1)
    sz = np.diag(m)
    sp = np.zeros((m.size, m.size))
    for a in range(1, m.size):
        sp[a - 1, a] = np.sqrt(s * (s + 1) - m[a] * (m[a] + 1))
    for arr in (sz, sp):
        arr.setflags(write=False)
    return sz, sp, sp.T


def _embed(ops: dict[int, np.ndarray], dims: list[int]) -> sps.csr_matrix:
    out = sps.identity(1, format="csr")
    for i, d in enumerate(dims):
        out = sps.kron(out, sps.csr_matrix(ops[i]) if i in ops else sps.identity(d, format="csr"),
                       format="csr")
    return out


def _check_dimension(spec: ChainSpec, cap: int):
    if spec.dimension > cap:
        raise ChainError(f"Hilbert dimension {spec.dimension} exceeds the cap {cap}")


def sparse_hamiltonian(spec: ChainSpec, cap: int = DEFAULT_DIMENSION_CAP) -> sps.csr_matrix:
    """Real symmetric sparse matrix of H in the product s^z basis."""
    _check_dimension(spec, cap)
    n = spec.n
    dims = [int(round(2 * s)) + 1 for s in spec.spins]
    mats = [spin_matrices(float(s)) for s in spec.spins]
    b = spec.site_fields
    V = spec.coupling_matrices()
    dim = spec.dimension
    H = sps.csr_matrix((dim, dim))
    for i in range(n):
        if b[i]:
            H = H + b[i] * _embed({i: mats[i][0]}, dims)
    for i in range(n):
        for j in range(i + 1, n):
            vx, vy, vz = V[:, i, j]
            if not (vx or vy or vz):
                continue
            szi, spi, smi = mats[i]
            szj, spj, smj = mats[j]
            # vx sx sx + vy sy sy = (vx+vy)/4 (s+s- + s-s+) + (vx-vy)/4 (s+s+ + s-s-)
            term = sps.csr_matrix((dim, dim))
            if vx + vy:
                term = term + (vx + vy) / 4 * (_embed({i: spi, j: smj}, dims) + _embed({i: smi, j: spj}, dims))
            if vx - vy:
                term = term + (vx - vy) / 4 * (_embed({i: spi, j: spj}, dims) + _embed({i: smi, j: smj}, dims))
            if vz:
                term = term + vz * _embed({i: szi, j: szj}, dims)
            H = H - term
    return H.tocsr()


def dense_hamiltonian(spec: ChainSpec, cap: int = DEFAULT_DIMENSION_CAP) -> np.ndarray:
    """Dense matrix of H (real symmetric) in the product s^z basis."""
    return sparse_hamiltonian(spec, cap).toarray()


def magnetic_quantum_numbers(spec: ChainSpec) -> np.ndarray:
    """Array (dim, n) of m_i for every product basis state."""
    grids = [s - np.arange(int(round(2 * s)) + 1) for s in spec.spins]
    mesh = np.meshgrid(*grids, indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def parity_diagonal(spec: ChainSpec) -> np.ndarray:
    """Diagonal of P_z = exp[i pi sum_i (s^z_i + s_i)] (entries +-1)."""
    m = magnetic_quantum_numbers(spec)
    flips = np.rint(m + spec.spins).sum(axis=1).astype(int)
    return np.where(flips % 2 == 0, 1, -1)


def parity_operator(spec: ChainSpec) -> np.ndarray:
    return np.diag(parity_diagonal(spec).astype(float))


def site_operator(spec: ChainSpec, i: int, op: str) -> sps.csr_matrix:
    """Sparse embedding of one local operator ``z``, ``+`` or ``-`` at site i."""
    dims = [int(round(2 * s)) + 1 for s in spec.spins]
    sz, sp, sm = spin_matrices(float(spec.spins[i]))
    return _embed({i: {"z": sz, "+": sp, "-": sm}[op]}, dims)


# ---------------------------------------------------------------------------
# JSON spec files
# ---------------------------------------------------------------------------

def spec_from_dict(doc: Mapping) -> ChainSpec:
    """Build a spec from the JSON document schema used by the CLI.

    Keys: n, spins{odd,even}, couplings{odd{x,y,z}, even{x,y,z}},
    field{kind, values}, boundary, and optional model (dimer | collective).
    """
    n = int(doc["n"])
    spins = doc.get("spins", {})
    s_o = float(spins.get("odd", 0.5))
    s_e = float(spins.get("even", s_o))
    cpl = doc["couplings"]
    fdoc = doc.get("field", {"kind": "uniform", "values": [0.0]})
    values = fdoc.get("values", [])
    if np.isscalar(values):
        values = [values]
    fields = FieldProfile(fdoc.get("kind", "uniform"), tuple(float(x) for x in values))
    model = doc.get("model", "dimer")
    boundary = doc.get("boundary", "cyclic")
    if model == "collective":
        v = _xyz(cpl.get("odd", cpl))
        b = fields.site_fields(n)
        spec = build_collective_pair(n, s_o, s_e, v, b[0], b[1] if n > 1 else b[0])
        return replace(spec, fields=fields)
    if model != "dimer":
        raise ChainError(f"unknown model {model!r}")
    return build_dimer_chain(n, s_o, s_e, _xyz(cpl.get("odd", {})), _xyz(cpl.get("even", {})),
                             fields, boundary)


def spec_to_dict(spec: ChainSpec) -> dict:
    if spec.model == "collective":
        v = collective_couplings(spec)
        couplings = {"odd": dict(zip(AXES, v)), "even": dict(zip(AXES, v))}
    else:
        d = dimer_couplings(spec)
        couplings = {"odd": dict(zip(AXES, d[ODD])), "even": dict(zip(AXES, d[EVEN]))}
    return {
        "n": spec.n,
        "spins": {"odd": spec.s_odd, "even": spec.s_even},
        "couplings": couplings,
        "field": {"kind": spec.fields.kind, "values": list(spec.fields.values)},
        "boundary": spec.boundary,
        "model": spec.model,
    }


def load_spec(path: str | Path) -> ChainSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def dump_spec(spec: ChainSpec, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2)
