import numpy as np
import pytest

from dimersep.chain import build_dimer_chain


def xy_dimer(n, chi=0.9, alpha=0.25, fields=0.0, v_x=1.0, boundary="cyclic"):
    """Spin-1/2 XY dimer chain with v^e = alpha v^o and v_y = chi v_x."""
    return build_dimer_chain(n, 0.5, 0.5, (v_x, chi * v_x, 0.0), (alpha * v_x, alpha * chi * v_x, 0.0),
                             fields, boundary)


def random_xy_dimer(rng, n):
    vo = (rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), 0.0)
    ve = (rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), 0.0)
    return build_dimer_chain(n, 0.5, 0.5, vo, ve, tuple(rng.uniform(-1.5, 1.5, size=2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
