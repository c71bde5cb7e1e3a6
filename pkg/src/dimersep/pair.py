"""
Closed-form spin-1/2 pair in a (possibly non-uniform) transverse field.

H = b^o s^z_1 + b^e s^z_2 - (v_x s^x_1 s^x_2 + v_y s^y_1 s^y_2 + v_z s^z_1 s^z_2)

splits into the parity sectors {|up,down>, |down,up>} (P_z = -1) and
{|up,up>, |down,down>} (P_z = +1), each a 2x2 problem.  The module also holds
the :class:`FieldRay` abstraction shared with the chain sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "FieldRay",
    "PairSpectrum",
    "pair_spectrum",
    "pair_crossing",
    "pair_concurrence",
    "pair_magnetization",
    "tangent_angles",
]


@dataclass(frozen=True)
class FieldRay:
    """One-parameter family of (b^o, b^e) fields.

    ``uniform``: b^o = b^e = t; ``ratio``: b^o = t, b^e = t/eta;
    ``fixed-even``: b^o = t, b^e = const.
    """

    kind: str = "uniform"
    value: float = 1.0

    def __post_init__(self):
        if self.kind not in ("uniform", "ratio", "fixed-even"):
            raise ValueError(f"unknown field ray {self.kind!r}")
        if self.kind == "ratio" and self.value == 0:
            raise ValueError("ratio ray needs eta != 0")

    @classmethod
    def parse(cls, text: str) -> "FieldRay":
        """Parse ``uniform``, ``ratio:<eta>`` or ``fixed-even:<b_e>``."""
        kind, _, val = text.partition(":")
        kind = kind.strip()
        if kind == "uniform":
            return cls("uniform", 1.0)
        if not val:
            raise ValueError(f"field ray {text!r} needs a value")
        return cls(kind, float(val))

    def __str__(self) -> str:
        return "uniform" if self.kind == "uniform" else f"{self.kind}:{self.value:g}"

    def fields(self, t: float) -> tuple[float, float]:
        if self.kind == "uniform":
            return float(t), float(t)
        if self.kind == "ratio":
            return float(t), float(t) / self.value
        return float(t), float(self.value)


@dataclass(frozen=True)
class PairSpectrum:
    """Levels E[nu][branch] and amplitudes alpha[nu][branch] of the spin-1/2 pair.

    ``nu`` is the P_z parity (+1/-1) and ``branch`` +1 labels the lower level of
    the sector (E^nu_+), -1 the upper one.
    """

    v_plus: float
    v_minus: float
    b_plus: float
    b_minus: float
    v_z: float

    def _sector(self, nu: int) -> tuple[float, float, float]:
        # (field, coupling, diagonal shift) of the 2x2 block
        if nu > 0:
            return self.b_plus, self.v_minus, -self.v_z / 4
        return self.b_minus, self.v_plus, self.v_z / 4

    def radius(self, nu: int) -> float:
        b, v, _ = self._sector(nu)
        return float(np.hypot(b, v))

    def energy(self, nu: int, branch: int = 1) -> float:
        _, _, shift = self._sector(nu)
        return float(shift - branch * self.radius(nu))

    def alpha(self, nu: int, sign: int) -> float:
        """alpha^nu_sign = sqrt((1 + sign b_nu / r_nu)/2), 1/sqrt(2) when r_nu = 0."""
        b, v, _ = self._sector(nu)
        r = self.radius(nu)
        if r == 0:
            return float(np.sqrt(0.5))
        big = np.sqrt(0.5 * (1 + abs(b) / r))
        if sign * b >= 0:
            return float(big)
        return float(abs(v) / (2 * r * big))  # avoids cancellation in sqrt((1 - |b|/r)/2)

    @property
    def energies(self) -> dict[tuple[int, int], float]:
        return {(nu, br): self.energy(nu, br) for nu in (1, -1) for br in (1, -1)}

    @property
    def ground_parity(self) -> int:
        """Parity of the ground state (+1 on exact degeneracy)."""
        return 1 if self.energy(1) <= self.energy(-1) else -1

    @property
    def gap(self) -> float:
        """E^-_+ - E^+_+ (negative when the ground state has odd parity)."""
        return self.energy(-1) - self.energy(1)

    def state(self, nu: int, branch: int = 1) -> np.ndarray:
        """Eigenvector in the basis (uu, ud, du, dd), site 1 first."""
        _, v, _ = self._sector(nu)
        sv = 1.0 if v >= 0 else -1.0
        a_up = sv * self.alpha(nu, -branch)  # weight of the spin-1-up component
        a_dn = branch * self.alpha(nu, branch)
        out = np.zeros(4)
        if nu > 0:
            out[0], out[3] = a_up, a_dn
        else:
            out[1], out[2] = a_up, a_dn
        return out


def pair_spectrum(v_x: float, v_y: float, v_z: float, b_o: float, b_e: float) -> PairSpectrum:
    return PairSpectrum(0.25 * (v_x + v_y), 0.25 * (v_x - v_y), 0.5 * (b_o + b_e),
                        0.5 * (b_o - b_e), float(v_z))


def pair_concurrence(spectrum: PairSpectrum, nu: int) -> float:
    """C^nu_12 = |v_{-nu}| / sqrt(b_nu^2 + v_{-nu}^2), the same for both branches."""
    return float(2 * spectrum.alpha(nu, 1) * spectrum.alpha(nu, -1))


def pair_magnetization(spectrum: PairSpectrum, nu: int) -> tuple[float, float]:
    """(<s^z_1>, <s^z_2>) in the lower state of parity ``nu``."""
    b, _, _ = spectrum._sector(nu)
    r = spectrum.radius(nu)
    m = -0.5 * (b / r) if r > 0 else 0.0
    return float(m), float(m * nu)


def tangent_angles(spectrum: PairSpectrum) -> tuple[float, float]:
    """Angles (theta_1, theta_2) of the product state spanned by the two lower levels.

    tan^2(theta_1/2) = a^+_- a^-_- / (a^+_+ a^-_+), tan^2(theta_2/2) = a^+_- a^-_+ / (a^+_+ a^-_-).
    """
    ap_m, ap_p = spectrum.alpha(1, -1), spectrum.alpha(1, 1)
    am_m, am_p = spectrum.alpha(-1, -1), spectrum.alpha(-1, 1)
    t1 = np.sqrt(ap_m * am_m / (ap_p * am_p))
    t2 = np.sqrt(ap_m * am_p / (ap_p * am_m))
    return float(2 * np.arctan(t1)), float(2 * np.arctan(t2))


def pair_crossing(v_x: float, v_y: float, v_z: float, ray: FieldRay = FieldRay(),
                  t_max: float = 1e8, xtol: float = 1e-14) -> float:
    """Ray parameter where the two lower levels of opposite parity cross.

    Starts at t = 0 and doubles the bracket until the gap changes sign.
    """
    def gap(t):
        return pair_spectrum(v_x, v_y, v_z, *ray.fields(t)).gap

    g0 = gap(0.0)
    if g0 == 0.0:
        return 0.0
    scale = max(abs(v_x), abs(v_y), abs(v_z), 1e-12)
    hi = scale
    lo = 0.0
    while np.sign(gap(hi)) == np.sign(g0):
        lo, hi = hi, 2 * hi
        if hi > t_max:
            raise ValueError("no level crossing along this field ray")
    return float(brentq(gap, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500))
