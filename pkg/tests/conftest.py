from __future__ import annotations

import numpy as np
import pytest

from steerclone import DensityMatrix, SphereQuadrature, VCoefficients
from steerclone.quantum import projector


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases.conj()


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def random_psd(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return g @ g.conj().T


def random_density(d: int, rng: np.random.Generator) -> np.ndarray:
    m = random_psd(d, rng)
    return m / np.trace(m).real


def random_pure_density(d: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    return projector(psi)


def random_zero_discord_state(d_a: int, d_b: int, rng: np.random.Generator) -> DensityMatrix:
    """Classical mixture over a random orthonormal B basis with random A states."""
    basis = random_unitary(d_b, rng)
    p = rng.uniform(0.05, 1.0, d_b)
    p /= p.sum()
    m = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
    for j in range(d_b):
        m += p[j] * np.kron(random_density(d_a, rng), projector(basis[:, j]))
    return DensityMatrix(m, (d_a, d_b))


def random_v(rng: np.random.Generator, complex_amplitudes: bool = False) -> VCoefficients:
    if complex_amplitudes:
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    else:
        z = np.abs(rng.standard_normal(4))
    return VCoefficients.from_iterable(z, normalize=True)


@pytest.fixture(scope="session")
def grid_quad() -> SphereQuadrature:
    """The CLI default product rule."""
    return SphereQuadrature.parse("grid:64x128")


@pytest.fixture(scope="session")
def fine_quad() -> SphereQuadrature:
    """Product rule fine enough for 1e-6 accuracy on kinked integrands."""
    return SphereQuadrature.parse("grid:2048x2048")
