import math

import numpy as np
import pytest
from hypothesis import settings

from oscswap.core import CouplingParams, TwoModeState, derive_mixing

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def resonant():
    """Resonant parameter set with unit mean frequency."""
    return CouplingParams(omega1=1.0, omega2=1.0, lam=0.5)


@pytest.fixture
def detuned():
    """Detuning x = 1 (omega difference equals twice the coupling)."""
    return CouplingParams(omega1=1.2, omega2=0.8, lam=0.2)


def params_for_detuning(x, lam=1.0, omega2=1.0):
    return CouplingParams(omega1=omega2 + 2.0 * lam * x, omega2=omega2, lam=lam)


def mixing_for_detuning(x, lam=1.0, omega2=1.0):
    return derive_mixing(params_for_detuning(x, lam=lam, omega2=omega2))


def random_state(rng, n_max):
    """Normalized state with amplitudes in every block up to n_max."""
    blocks = [rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1) for n in range(n_max + 1)]
    total = math.sqrt(sum(float(np.sum(np.abs(b) ** 2)) for b in blocks))
    return TwoModeState(n_max=n_max, blocks=tuple(b / total for b in blocks))


def random_phi(rng, n_top):
    """Normalized mode-1 amplitude vector with support exactly n_top."""
    phi = rng.normal(size=n_top + 1) + 1j * rng.normal(size=n_top + 1)
    phi[n_top] += 1.0
    return phi / np.linalg.norm(phi)
