"""
Backend routing: Jordan-Wigner, collective multiplet or dense diagonalization.

Every backend returns a :class:`SectorSolution` exposing the lowest energy of a
parity sector together with two-site correlators and magnetizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .chain import ChainError, ChainSpec, sublattice
from .collective import collective_correlators, collective_ground_states
from .exact import dense_pair_correlators, local_expectations, sector_ground_state as dense_sector
from .jw import jw_supported, sector_ground_state as jw_sector, spin_correlators

__all__ = ["SectorSolution", "choose_backend", "solve_sector", "solve_both"]

BACKENDS = ("auto", "jw", "collective", "dense")


@dataclass(frozen=True)
class SectorSolution:
    parity: int
    energy: float
    backend: str
    degenerate: bool
    _corr: Callable = field(repr=False)
    _mag: Callable = field(repr=False)
    raw: object = field(default=None, repr=False)

    def correlators(self, i: int, j: int) -> dict:
        return self._corr(i, j)

    def magnetization(self, i: int) -> float:
        return self._mag(i)


def choose_backend(spec: ChainSpec) -> str:
    if spec.model == "collective":
        return "collective"
    if jw_supported(spec) is None:
        return "jw"
    return "dense"


def _jw(spec: ChainSpec, parity: int) -> SectorSolution:
    t = jw_sector(spec, parity)
    return SectorSolution(parity, t.energy, "jw", t.degenerate,
                          lambda i, j: spin_correlators(t, i, j),
                          lambda i: float(t.f[i, i]), t)


def _collective(spec: ChainSpec, parity: int) -> SectorSolution:
    st = collective_ground_states(spec)[parity]
    cache = {}

    def corr(i, j):
        if i == j:
            raise ValueError("need two distinct sites")
        key = "".join(sorted(sublattice(i) + sublattice(j), reverse=True))
        if not cache:
            cache.update(collective_correlators(st))
        return dict(cache[key])

    def mag(i):
        if not cache:
            cache.update(collective_correlators(st))
        return cache["mag"][sublattice(i)]

    return SectorSolution(parity, st.energy, "collective", st.degenerate, corr, mag, st)


def _dense(spec: ChainSpec, parity: int) -> SectorSolution:
    st = dense_sector(spec, parity)
    mags = {}

    def mag(i):
        if not mags:
            mags.update(enumerate(local_expectations(spec, st.vector)))
        return mags[i]

    return SectorSolution(parity, st.energy, "dense", bool(st.gap < 1e-10),
                          lambda i, j: dense_pair_correlators(spec, st.vector, i, j), mag, st)


def solve_sector(spec: ChainSpec, parity: int, backend: str = "auto") -> SectorSolution:
    """Lowest state of the P_z = ``parity`` sector with the chosen backend."""
    if backend not in BACKENDS:
        raise ChainError(f"unknown backend {backend!r}")
    if backend == "auto":
        backend = choose_backend(spec)
    return {"jw": _jw, "collective": _collective, "dense": _dense}[backend](spec, parity)


def solve_both(spec: ChainSpec, backend: str = "auto") -> dict[int, SectorSolution]:
    return {p: solve_sector(spec, p, backend) for p in (1, -1)}
