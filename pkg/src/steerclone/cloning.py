"""Pauli (Cerf) cloning of the steered half of a Bell state.

The machine is parameterized by four complex amplitudes (v0, v1, v2, v3)
with unit square-norm attached to the identity and the three sigma_k x
sigma_k terms.  Acting on phi+_AB x phi+_CD it produces a four-qubit state
whose AB and AC marginals are Bell-diagonal; swapping wires B and C maps
the amplitudes through a fixed real involution (the "primed" coefficients).

The four-term operator itself is not unitary for general complex
amplitudes (its Bell-basis eigenvalues need not have unit modulus), so the
direct Bell-pair expansion below is the canonical construction; applying
the operator is kept only as a cross-check on the protocol's one input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qmat import kron_all, partial_trace
from .quantum import PAULIS, DensityMatrix, bell_ket, identity

# Bell kets in amplitude order: v0, v1, v2, v3.
BELL_ORDER = ("phi+", "psi+", "psi-", "phi-")
BELL_KETS = tuple(bell_ket(k) for k in BELL_ORDER)

NORM_ATOL = 1e-12
# Involution sending the amplitudes to their B<->C swapped counterparts,
# acting on (v0, v1, v2, v3).
PRIME_MATRIX = 0.5 * np.array(
    [
        [1, 1, 1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
    ],
    dtype=float,
)


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real >= 0."""
    for i, z in enumerate(v):
        if abs(z) > 1e-15:
            out = v * (abs(z) / z)
            out[i] = abs(z)  # kill the rotation's roundoff residue
            return out
    raise ValueError("amplitudes are all zero")


@dataclass(frozen=True, eq=False)
class VCoefficients:
    """The four cloning amplitudes, unit-normalized with v0 real >= 0.

    Constructors rotate away the global phase (making v0, or the first
    nonzero amplitude when v0 = 0, real and nonnegative) and demand the
    square-norm equal 1 within 1e-12.
    """

    v: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.v, dtype=complex).ravel()
        if arr.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got {arr.shape}")
        norm2 = float(np.sum(np.abs(arr) ** 2))
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise ValueError(f"square-norm {norm2} deviates from 1 beyond 1e-12")
        arr = _canonical_phase(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "v", arr)

    @classmethod
    def from_iterable(cls, vals: Sequence[complex], normalize: bool = False) -> "VCoefficients":
        arr = np.asarray(list(vals), dtype=complex).ravel()
        if normalize:
            n = np.linalg.norm(arr)
            if n == 0:
                raise ValueError("cannot normalize zero amplitudes")
            arr = arr / n
        return cls(arr)

    @property
    def v0(self) -> float:
        return float(self.v[0].real)

    def norm_deviation(self) -> float:
        return abs(float(np.sum(np.abs(self.v) ** 2)) - 1.0)


def primed(v: VCoefficients) -> np.ndarray:
    """Amplitudes after swapping wires B and C: a raw complex 4-tuple.

    The returned array is not phase-canonicalized (the leading entry may be
    complex); the map is a norm-preserving involution.
    """
    return PRIME_MATRIX @ v.v


def bell_pair_ket(coeffs: Sequence[complex]) -> np.ndarray:
    """Four-qubit ket sum_k c_k |bell_k>_AB |bell_k>_CD in A,B,C,D wire order."""
    out = np.zeros(16, dtype=complex)
    for c, b in zip(np.asarray(coeffs, dtype=complex), BELL_KETS):
        out += c * np.kron(b, b)
    return out


@dataclass(frozen=True, eq=False)
class FourQubitState:
    """The four-qubit output ket with its source amplitudes.

    Validates unit norm and that the Bell x Bell expansion puts exactly the
    source amplitudes on the four matched-pair components and zero on the
    twelve mismatched ones.
    """

    ket: np.ndarray
    source: VCoefficients

    def __post_init__(self) -> None:
        psi = np.asarray(self.ket, dtype=complex).ravel()
        if psi.shape != (16,):
            raise ValueError(f"expected a 16-amplitude ket, got {psi.shape}")
        if abs(np.linalg.norm(psi) - 1.0) > NORM_ATOL:
            raise ValueError("four-qubit ket is not normalized")
        for i, bi in enumerate(BELL_KETS):
            for j, bj in enumerate(BELL_KETS):
                coeff = np.vdot(np.kron(bi, bj), psi)
                want = self.source.v[i] if i == j else 0.0
                if abs(coeff - want) > 1e-10:
                    raise ValueError(
                        f"Bell x Bell coefficient ({BELL_ORDER[i]}, {BELL_ORDER[j]}) "
                        f"is {coeff}, expected {want}"
                    )
        psi = psi.copy()
        psi.flags.writeable = False
        object.__setattr__(self, "ket", psi)


def omega_state(v: VCoefficients) -> FourQubitState:
    """Total four-qubit state of the protocol: matched Bell pairs on AB and CD."""
    return FourQubitState(bell_pair_ket(v.v), v)


def swap_bc(ket16: np.ndarray) -> np.ndarray:
    """Exchange wires B and C of a four-qubit ket in A,B,C,D order."""
    psi = np.asarray(ket16, dtype=complex).ravel()
    if psi.shape != (16,):
        raise ValueError(f"expected a 16-amplitude ket, got {psi.shape}")
    return psi.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(16)


def apply_cerf_operator(v: VCoefficients, state: FourQubitState) -> FourQubitState:
    """Apply v0 + sum_k v_k sigma_k^B sigma_k^C to the protocol input.

    Only phi+_AB x phi+_CD is accepted: off that state the four-term
    operator is not unitary for general amplitudes, so the result would not
    describe a physical protocol.  On the protocol input the output equals
    the direct Bell-pair construction, which this function cross-checks.
    """
    reference = bell_pair_ket([1, 0, 0, 0])
    if np.max(np.abs(state.ket - reference)) > 1e-12:
        raise ValueError("the cloning operator is only applied to phi+ x phi+")
    op = v.v[0] * identity(16)
    for vk, sigma in zip(v.v[1:], PAULIS):
        op = op + vk * kron_all(identity(2), sigma, sigma, identity(2))
    return FourQubitState(op @ state.ket, v)


def clone_pair(v: VCoefficients) -> tuple[DensityMatrix, DensityMatrix]:
    """Reduced clone states (rho_AB, rho_AC) of the four-qubit output.

    Both are Bell-diagonal: the AB weights are |v_k|^2 and the AC weights
    are the squared moduli of the primed amplitudes.
    """
    psi = omega_state(v).ket
    full = np.outer(psi, psi.conj())
    dims = [2, 2, 2, 2]
    rho_ab = partial_trace(full, dims, keep=(0, 1))
    rho_ac = partial_trace(full, dims, keep=(0, 2))
    return (
        DensityMatrix(rho_ab, (2, 2)),
        DensityMatrix(rho_ac, (2, 2)),
    )


def bell_weights(rho: DensityMatrix) -> np.ndarray:
    """Diagonal of a two-qubit state in the Bell basis (amplitude order)."""
    if rho.dims != (2, 2):
        raise ValueError(f"Bell weights need a two-qubit state, got dims {rho.dims}")
    return np.array([np.vdot(b, rho.matrix @ b).real for b in BELL_KETS])
