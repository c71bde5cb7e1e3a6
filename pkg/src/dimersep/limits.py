"""
Closed-form entanglement side limits at a factorizing field.

At separability the exact ground state of a finite chain approaches, from each
side, one of the definite-parity combinations

    |Theta+-> = (|Theta> +- |-Theta>) / sqrt(2 (1 +- <-Theta|Theta>)),

whose pair and one-vs-rest concurrences, mixture values and magnetization step
have closed forms in terms of the local overlaps cos^{2 s_i} theta_i.

Parity labels are +1 / -1 throughout.  Powers close to one are evaluated with
``expm1``/``log`` so that the chi -> 1 limits stay accurate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import spin_matrices
from .factorization import local_state

__all__ = [
    "SideLimits",
    "binary_entropy",
    "pair_limit",
    "one_vs_rest_limit",
    "uniform_limits",
    "alternating_limits",
    "mixture_limits",
    "magnetization_step",
    "dimer_side_limits",
]


@dataclass(frozen=True)
class SideLimits:
    """Concurrence limits in |Theta+> (``plus``) and |Theta-> (``minus``).

    Each side maps ``oo``, ``ee``, ``oe`` (pairs) and ``o``, ``e`` (one spin vs
    the rest) to a concurrence.
    """

    minus: dict
    plus: dict
    overlap: float
    chi_o: float
    chi_e: float
    S_o: float
    S_e: float

    def side(self, parity: int) -> dict:
        return self.plus if parity > 0 else self.minus

    def mixture(self) -> dict:
        return mixture_limits(self, self.overlap)


def binary_entropy(C: float) -> float:
    """Entropy (bits) of the Schmidt weights p = (1 +- sqrt(1 - C^2))/2."""
    C = float(np.clip(C, 0.0, 1.0))
    r = np.sqrt(max(0.0, 1.0 - C * C))
    out = 0.0
    for p in (0.5 * (1 + r), 0.5 * (1 - r)):
        if p > 0:
            out -= p * np.log2(p)
    return float(out)


def _log_cos2(angles) -> np.ndarray:
    c2 = np.cos(np.asarray(angles, dtype=float)) ** 2
    with np.errstate(divide="ignore"):
        return np.log(c2)


def _pow_from_log(logx: float) -> float:
    return float(np.exp(logx)) if np.isfinite(logx) else 0.0


def _one_minus_from_log(logx: float) -> float:
    return float(-np.expm1(logx)) if np.isfinite(logx) else 1.0


def _sum_logs(weights, logs) -> float:
    w = np.asarray(weights, dtype=float)
    L = np.asarray(logs, dtype=float)
    mask = w != 0
    return float(np.sum(w[mask] * L[mask]))


def pair_limit(angles, spins, i: int, j: int, parity: int) -> float:
    """Concurrence of spins i, j in |Theta+> (parity +1) or |Theta-> (parity -1)."""
    if i == j:
        raise ValueError("pair limit needs two distinct sites")
    L = _log_cos2(angles)
    s = np.asarray(spins, dtype=float)
    rest = np.ones(len(s), dtype=bool)
    rest[[i, j]] = False
    comp = _pow_from_log(_sum_logs(s[rest], L[rest]))
    num = np.sqrt(_one_minus_from_log(2 * s[i] * L[i]) * _one_minus_from_log(2 * s[j] * L[j])) * comp
    log_ov = _sum_logs(s, L)
    den = 1.0 + _pow_from_log(log_ov) if parity > 0 else _one_minus_from_log(log_ov)
    if den == 0.0:
        return 0.0
    return float(num / den)


def one_vs_rest_limit(angles, spins, i: int, parity: int) -> tuple[float, float]:
    """(C_i, S_i) for spin i against the rest in |Theta+->.

    The entropy follows from the concurrence because the states have Schmidt
    rank 2 for any bipartition.
    """
    L = _log_cos2(angles)
    s = np.asarray(spins, dtype=float)
    rest = np.ones(len(s), dtype=bool)
    rest[i] = False
    num = np.sqrt(_one_minus_from_log(2 * s[i] * L[i]) * _one_minus_from_log(_sum_logs(2 * s[rest], L[rest])))
    log_ov = _sum_logs(s, L)
    den = 1.0 + _pow_from_log(log_ov) if parity > 0 else _one_minus_from_log(log_ov)
    C = 0.0 if den == 0.0 else float(min(num / den, 1.0))
    return C, binary_entropy(C)


def alternating_limits(n: int, s_o: float, s_e: float, chi_o: float, chi_e: float) -> SideLimits:
    """Side limits for sublattice overlaps chi_sigma = cos^2 theta_sigma."""
    if n % 2:
        raise ValueError("n must be even")
    m = n // 2
    S_o, S_e = m * s_o, m * s_e
    for c in (chi_o, chi_e):
        if not 0.0 <= c <= 1.0:
            raise ValueError(f"chi_sigma must lie in [0, 1], got {c}")
    with np.errstate(divide="ignore"):
        lo, le = np.log(chi_o), np.log(chi_e)
    log_ov = _sum_logs([S_o, S_e], [lo, le])
    ov = _pow_from_log(log_ov)
    one_minus = _one_minus_from_log(log_ov)

    def pair_num(a_o, a_e, local):
        # prod over the other sites, written with exponents a_sigma >= 0
        return local * _pow_from_log(_sum_logs([a_o, a_e], [lo, le]))

    loc_o = _one_minus_from_log(_sum_logs([2 * s_o], [lo]))
    loc_e = _one_minus_from_log(_sum_logs([2 * s_e], [le]))
    # same-sublattice pairs need m >= 2; nan marks the missing class
    nums = {
        "oo": pair_num(S_o - 2 * s_o, S_e, loc_o) if m > 1 else float("nan"),
        "ee": pair_num(S_o, S_e - 2 * s_e, loc_e) if m > 1 else float("nan"),
        "oe": pair_num(S_o - s_o, S_e - s_e, np.sqrt(loc_o * loc_e)),
        "o": np.sqrt(loc_o * _one_minus_from_log(_sum_logs([2 * (S_o - s_o), 2 * S_e], [lo, le]))),
        "e": np.sqrt(loc_e * _one_minus_from_log(_sum_logs([2 * S_o, 2 * (S_e - s_e)], [lo, le]))),
    }
    plus = {k: float(v / (1.0 + ov)) for k, v in nums.items()}
    if one_minus > 0.0:
        minus = {k: float(v / one_minus) for k, v in nums.items()}
    else:
        # chi_o = chi_e = 1: limit along chi = 1 - delta, common to both sublattices
        S = S_o + S_e
        minus = {
            "oo": 2 * s_o / S if m > 1 else float("nan"),
            "ee": 2 * s_e / S if m > 1 else float("nan"),
            "oe": float(2 * np.sqrt(s_o * s_e) / S),
            "o": float(2 * np.sqrt(s_o * (S - s_o)) / S),
            "e": float(2 * np.sqrt(s_e * (S - s_e)) / S),
        }
    return SideLimits(minus, plus, ov, float(chi_o), float(chi_e), S_o, S_e)


def uniform_limits(n: int, s_o: float, s_e: float, chi: float) -> SideLimits:
    """Side limits of a uniform solution; depend only on chi, n and the spins."""
    return alternating_limits(n, s_o, s_e, chi, chi)


def dimer_side_limits(n: int, chi: float, eta: float = 1.0, s_o: float = 0.5,
                      s_e: float = 0.5) -> SideLimits:
    """Side limits on the alternating curve for field ratio eta = b^o/b^e.

    Uses bt_o = sqrt(eta chi) and bt_e = sqrt(chi/eta) (in units where
    b^o b^e = chi (v^oe)^2 s_o s_e), which only holds for s_o = s_e.
    """
    if s_o != s_e:
        raise ValueError("the eta parametrization assumes equal spins")
    bt_o, bt_e = np.sqrt(eta * chi), np.sqrt(chi / eta)
    chi_o = (chi**2 + bt_o**2) / (1 + bt_o**2)
    chi_e = (chi**2 + bt_e**2) / (1 + bt_e**2)
    return alternating_limits(n, s_o, s_e, chi_o, chi_e)


def mixture_limits(limits: SideLimits | dict, overlap: float) -> dict:
    """Attenuated concurrences C^0 = C^- O/(1 + O) in the equal-weight mixture."""
    if not -1.0 < overlap < 1.0:
        raise ValueError("overlap must lie in (-1, 1)")
    minus = limits.minus if isinstance(limits, SideLimits) else limits
    f = overlap / (1.0 + overlap)
    return {k: float(v * f) for k, v in minus.items()}


def magnetization_step(angles, spins, i: int) -> float:
    """Delta M_i = <s^z_i>_- - <s^z_i>_+ between the two definite-parity states.

    General spin: Delta M = 2 (a O - d)/(1 - O^2) with a = -s cos(theta_i),
    d = <-theta_i|s^z|theta_i> times the complementary overlap.  For spin 1/2 this
    is sin^2(theta_i) times the complementary overlap over (1 - O^2).  Returns nan
    when O = +-1 (degenerate denominator).
    """
    th = np.asarray(angles, dtype=float)
    s = np.asarray(spins, dtype=float)
    L = _log_cos2(th)
    rest = np.ones(len(s), dtype=bool)
    rest[i] = False
    sign = np.prod(np.sign(np.cos(th)) ** np.rint(2 * s).astype(int))
    ov = sign * _pow_from_log(_sum_logs(s, L))
    one_minus_sq = _one_minus_from_log(2 * _sum_logs(s, L))
    if one_minus_sq == 0.0:
        return float("nan")
    comp = np.prod(np.cos(th[rest]) ** (2 * s[rest]))
    a = -s[i] * np.cos(th[i])
    sz = spin_matrices(float(s[i]))[0]
    d = float(local_state(s[i], -th[i]) @ sz @ local_state(s[i], th[i])) * comp
    return float(2 * (a * ov - d) / one_minus_sq)
