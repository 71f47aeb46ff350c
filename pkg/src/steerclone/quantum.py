"""States, measurements, assemblages, and the perfect-cloning machinery.

The central objects are bipartite density matrices shared between a
measuring party (subsystem A) and a steered party (subsystem B).  Measuring
A with a binary POVM steers B into an assemblage of unnormalized states.
A state can be perfectly "steering-cloned" onto B and an ancilla C exactly
when its reduced operators on B (the reduced state together with the
generator-weighted eta operators) all commute; in that case the state is a
classical mixture over one orthonormal B basis and a controlled-copy
unitary in that basis duplicates every steered ensemble.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .qmat import (
    HERMITIAN_ATOL,
    as_cmatrix,
    comm_norm,
    frob_dist,
    herm_eig,
    is_hermitian,
    kron,
    kron_all,
    partial_trace,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

TRACE_ATOL = 1e-10
PSD_EIG_ATOL = 1e-10
# Upper end of the admissible measurement strength interval (exclusive).
MAX_DELTA = 1.0 / np.sqrt(2.0)


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def ket(amplitudes: Sequence[complex]) -> np.ndarray:
    """Normalized column-free ket as a 1-D complex array."""
    v = np.asarray(amplitudes, dtype=complex).ravel()
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A density matrix together with its subsystem dimensions.

    Validates hermiticity, unit trace, positivity, and that the subsystem
    dimensions multiply to the matrix dimension.  Instances are immutable.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        m = as_cmatrix(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        if int(np.prod(dims)) != m.shape[0]:
            raise ValueError(f"dims {dims} do not match matrix dimension {m.shape[0]}")
        if not is_hermitian(m, HERMITIAN_ATOL):
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"density matrix trace {tr} deviates from 1 beyond 1e-10")
        wmin = float(np.linalg.eigvalsh(m)[0])
        if wmin < -PSD_EIG_ATOL:
            raise ValueError(f"density matrix has negative eigenvalue {wmin:.3e}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, psi: Sequence[complex], dims: Sequence[int]) -> "DensityMatrix":
        return cls(projector(ket(psi)), tuple(dims))

    def reduced(self, keep: int | Sequence[int]) -> "DensityMatrix":
        """Partial trace keeping the named subsystems."""
        keep_t = (keep,) if isinstance(keep, (int, np.integer)) else tuple(keep)
        sub = partial_trace(self.matrix, self.dims, keep_t)
        return DensityMatrix(sub, tuple(self.dims[i] for i in sorted(int(k) for k in keep_t)))


def load_state(path: str | Path) -> DensityMatrix:
    """Read a density matrix from the JSON wire format.

    The format is ``{"dims": [dA, dB], "matrix": [[re, im], ...]}`` with the
    matrix given as a row-major flat list of [re, im] pairs.  All
    DensityMatrix invariants are enforced on load.
    """
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, Mapping) or "dims" not in payload or "matrix" not in payload:
        raise ValueError("state file must be a JSON object with 'dims' and 'matrix' keys")
    dims = tuple(int(d) for d in payload["dims"])
    pairs = payload["matrix"]
    total = int(np.prod(dims))
    if len(pairs) != total * total:
        raise ValueError(f"expected {total * total} matrix entries, got {len(pairs)}")
    flat = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    return DensityMatrix(flat.reshape(total, total), dims)


def save_state(state: DensityMatrix, path: str | Path) -> None:
    """Write a density matrix in the JSON wire format used by the CLI."""
    flat = state.matrix.ravel()
    payload = {
        "dims": list(state.dims),
        "matrix": [[float(z.real), float(z.imag)] for z in flat],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


# ---------------------------------------------------------------------------
# Measurements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MeasurementElement:
    """One binary POVM element together with its label and outcome.

    ``label`` is hashable: ``("dir", x1, x2, x3)`` for a qubit direction or
    ``("gen", k, delta)`` for a generator-based element of strength delta.
    ``outcome`` is +1 or -1.
    """

    operator: np.ndarray
    label: tuple
    outcome: int

    def __post_init__(self) -> None:
        op = as_cmatrix(self.operator)
        if self.outcome not in (+1, -1):
            raise ValueError(f"outcome must be +1 or -1, got {self.outcome}")
        if not is_hermitian(op, 1e-10):
            raise ValueError("POVM element must be Hermitian")
        w = np.linalg.eigvalsh(op)
        if w[0] < -1e-10 or w[-1] > 1 + 1e-10:
            raise ValueError(f"POVM element eigenvalues {w} outside [0, 1]")
        op = op.copy()
        op.flags.writeable = False
        object.__setattr__(self, "operator", op)


def direction_measurements(x: Sequence[float]) -> tuple[MeasurementElement, MeasurementElement]:
    """The +/- pair of qubit projectors (1 + a x.sigma)/2 for a unit direction x."""
    v = np.asarray(x, dtype=float).ravel()
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError(f"direction must be a unit 3-vector, got {v}")
    dotted = v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z
    label = ("dir", float(v[0]), float(v[1]), float(v[2]))
    return (
        MeasurementElement(0.5 * (identity(2) + dotted), label, +1),
        MeasurementElement(0.5 * (identity(2) - dotted), label, -1),
    )


def su_generators(d: int) -> list[np.ndarray]:
    """Orthogonal traceless Hermitian generators of SU(d), tr(g_k g_l) = 2 delta_kl.

    For d = 2 this is exactly (sigma_x, sigma_y, sigma_z); for larger d the
    generalized Gell-Mann construction (symmetric and antisymmetric pair
    matrices followed by the diagonal ladder).
    """
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    gens: list[np.ndarray] = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            gens.append(sym)
            asym = np.zeros((d, d), dtype=complex)
            asym[j, k] = -1j
            asym[k, j] = 1j
            gens.append(asym)
    for l in range(1, d):
        diag = np.zeros((d, d), dtype=complex)
        diag[np.diag_indices(l)] = 1.0
        diag[l, l] = -l
        gens.append(np.sqrt(2.0 / (l * (l + 1))) * diag)
    return gens


def proof_measurements(d: int, delta: float) -> list[tuple[MeasurementElement, MeasurementElement]]:
    """Binary POVM pairs (1 +/- delta * g_k)/2, one per SU(d) generator.

    The strength must lie in (0, 1/sqrt(2)); the generator spectral radius
    sqrt(2(d-1)/d) < sqrt(2) then keeps every element inside [0, 1].
    """
    if not (0.0 < delta < MAX_DELTA):
        raise ValueError(f"strength must lie in (0, {MAX_DELTA:.6f}), got {delta}")
    pairs = []
    for k, g in enumerate(su_generators(d)):
        label = ("gen", k, float(delta))
        plus = MeasurementElement(0.5 * (identity(d) + delta * g), label, +1)
        minus = MeasurementElement(0.5 * (identity(d) - delta * g), label, -1)
        pairs.append((plus, minus))
    return pairs


# ---------------------------------------------------------------------------
# Assemblages
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Assemblage:
    """Unnormalized steered states of B, keyed by (label, outcome).

    ``entries[(label, a)]`` is the pair (rho_Ba^x, P_a^x).  For every label
    whose outcomes are complete the states sum to the reduced state of B.
    """

    entries: dict[tuple, tuple[np.ndarray, float]]
    reduced_state: DensityMatrix

    def normalized(self, label: tuple, outcome: int) -> np.ndarray:
        state, prob = self.entries[(label, outcome)]
        if prob <= 0:
            raise ValueError(f"outcome ({label}, {outcome}) has zero probability")
        return state / prob


def steered_state(rho: DensityMatrix, element: MeasurementElement) -> np.ndarray:
    """Unnormalized post-measurement state of B: tr_A[(Pi x 1) rho]."""
    d_a, d_b = rho.dims
    op = element.operator
    if op.shape[0] != d_a:
        raise ValueError(f"measurement dimension {op.shape[0]} does not match d_A = {d_a}")
    lifted = kron(op, identity(d_b))
    return partial_trace(lifted @ rho.matrix, rho.dims, keep=1)


def assemblage(rho: DensityMatrix, measurements: Sequence[MeasurementElement]) -> Assemblage:
    """Assemble all steered states of B for the given measurement elements.

    Validates P_a^x = tr(rho_Ba^x), positivity of every member, and the
    no-signaling completeness sum for every label present with both outcomes.
    """
    if len(rho.dims) != 2:
        raise ValueError(f"assemblage needs a bipartite state, got dims {rho.dims}")
    rho_b = rho.reduced(1)
    entries: dict[tuple, tuple[np.ndarray, float]] = {}
    for el in measurements:
        state = steered_state(rho, el)
        prob = float(np.trace(state).real)
        if not is_hermitian(state, 1e-10):
            raise ValueError("steered state is not Hermitian")
        if float(np.linalg.eigvalsh(state)[0]) < -1e-10:
            raise ValueError("steered state is not PSD")
        entries[(el.label, el.outcome)] = (state, prob)
    by_label: dict[tuple, list[np.ndarray]] = {}
    for (label, _a), (state, _p) in entries.items():
        by_label.setdefault(label, []).append(state)
    for label, states in by_label.items():
        if len(states) == 2:
            if frob_dist(sum(states), rho_b.matrix) > 1e-10:
                raise ValueError(f"assemblage for label {label} does not sum to rho_B")
    return Assemblage(entries, rho_b)


def bell_ket(kind: str) -> np.ndarray:
    """One of the four Bell kets; kind in {'phi+', 'phi-', 'psi+', 'psi-'}."""
    s = 1.0 / np.sqrt(2.0)
    table = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    key = kind.lower()
    if key not in table:
        raise ValueError(f"unknown Bell state {kind!r}; use phi+/phi-/psi+/psi-")
    return np.array(table[key], dtype=complex)


def bell_state(kind: str) -> DensityMatrix:
    """Projector onto one of the four Bell states, dims [2, 2]."""
    return DensityMatrix.pure(bell_ket(kind), (2, 2))


# ---------------------------------------------------------------------------
# Zero-discord machinery
# ---------------------------------------------------------------------------

def eta_operators(rho: DensityMatrix) -> list[np.ndarray]:
    """The d^2 - 1 Hermitian operators tr_A[(g_k x 1) rho] * d/2 on B.

    Together with the reduced state they reconstruct the input as
    (1/d)(1 x rho_B + sum_k g_k x eta_k).
    """
    if len(rho.dims) != 2:
        raise ValueError(f"eta operators need a bipartite state, got dims {rho.dims}")
    d_a, d_b = rho.dims
    etas = []
    for g in su_generators(d_a):
        lifted = kron(g, identity(d_b))
        etas.append(partial_trace(lifted @ rho.matrix, rho.dims, keep=1) * (d_a / 2.0))
    return etas


def reconstruct_from_etas(rho_b: np.ndarray, etas: Sequence[np.ndarray], d_a: int) -> np.ndarray:
    """Rebuild the bipartite state from its B-side decomposition."""
    d_b = as_cmatrix(rho_b).shape[0]
    out = kron(identity(d_a), rho_b).astype(complex)
    for g, eta in zip(su_generators(d_a), etas):
        out += kron(g, eta)
    return out / d_a


@dataclass(frozen=True, eq=False)
class ZeroDiscordCertificate:
    """Outcome of the commutation test on {rho_B} U {eta_k}.

    If the family commutes, carries the common eigenbasis (columns of
    ``common_basis``) and the weights of the reduced state in that basis;
    otherwise only the witnessing maximal commutator norm.
    """

    is_zero_discord: bool
    max_commutator: float
    eta_operators: list[np.ndarray]
    common_basis: np.ndarray | None = None
    weights: np.ndarray | None = None


def _simultaneous_eigenbasis(
    ops: Sequence[np.ndarray], rng: np.random.Generator, attempts: int = 3
) -> np.ndarray:
    """Common eigenbasis of a commuting Hermitian family.

    Diagonalizes a random real combination and checks every member is
    diagonal in the resulting basis; retries with fresh weights in case an
    unlucky combination is accidentally degenerate.
    """
    d = ops[0].shape[0]
    last_off = np.inf
    for _ in range(attempts):
        coeffs = rng.standard_normal(len(ops))
        mix = sum(c * op for c, op in zip(coeffs, ops))
        _, basis = herm_eig(mix)
        off = 0.0
        for op in ops:
            rotated = basis.conj().T @ op @ basis
            off = max(off, float(np.max(np.abs(rotated - np.diag(np.diag(rotated))))))
        if off <= 1e-8:
            return basis
        last_off = off
    raise RuntimeError(
        f"failed to simultaneously diagonalize a commuting family (residual {last_off:.3e})"
    )


def zero_discord_check(
    rho: DensityMatrix, tol: float = 1e-9, rng: np.random.Generator | None = None
) -> ZeroDiscordCertificate:
    """Decide whether the state is a classical mixture over one B basis.

    Computes all pairwise commutator norms among the reduced state of B and
    the eta operators.  If all of them fall within ``tol`` the family is
    simultaneously diagonalized and the certificate carries the common basis
    and weights; otherwise the largest commutator norm is the witness.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    rho_b = rho.reduced(1)
    etas = eta_operators(rho)
    ops = [rho_b.matrix] + etas
    max_comm = 0.0
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            max_comm = max(max_comm, comm_norm(ops[i], ops[j]))
    if max_comm > tol:
        return ZeroDiscordCertificate(False, max_comm, etas)
    basis = _simultaneous_eigenbasis(ops, rng)
    weights = np.real(np.diag(basis.conj().T @ rho_b.matrix @ basis)).copy()
    # Dephasing B in the common basis must reproduce the state exactly.
    d_a, d_b = rho.dims
    rebuilt = np.zeros_like(rho.matrix)
    for j in range(d_b):
        proj = kron(identity(d_a), projector(basis[:, j]))
        rebuilt = rebuilt + proj @ rho.matrix @ proj
    if frob_dist(rebuilt, rho.matrix) > 1e-9:
        raise RuntimeError("commuting family found but basis reconstruction failed")
    return ZeroDiscordCertificate(True, max_comm, etas, basis, weights)


def perfect_copier(basis: np.ndarray) -> np.ndarray:
    """Controlled-copy unitary for an orthonormal basis {|b_j>} of B.

    Returns U = sum_j |b_j><b_j| x X^j on B x C, where X cyclically shifts
    the basis kets; with C prepared in |b_0> this maps |b_j>|b_0> to
    |b_j>|b_j>.  The completion off that subspace is fixed by the cyclic
    shift so the construction is deterministic.
    """
    b = as_cmatrix(basis)
    d = b.shape[0]
    if frob_dist(b.conj().T @ b, identity(d)) > 1e-10:
        raise ValueError("basis columns are not orthonormal within 1e-10")
    shift = np.zeros((d, d), dtype=complex)
    for m in range(d):
        shift += np.outer(b[:, (m + 1) % d], b[:, m].conj())
    u = np.zeros((d * d, d * d), dtype=complex)
    power = identity(d)
    for j in range(d):
        u += kron(projector(b[:, j]), power)
        power = shift @ power
    if frob_dist(u.conj().T @ u, identity(d * d)) > 1e-10:
        raise RuntimeError("constructed copier is not unitary")
    return u


@dataclass(frozen=True)
class CloneReport:
    """Largest assemblage deviations of the two clone arms."""

    max_deviation_B: float
    max_deviation_C: float
    passed: bool


def _apply_channel(
    rho_in: np.ndarray, channel: np.ndarray | Sequence[np.ndarray], d_a: int
) -> np.ndarray:
    """Apply a channel on B x C (unitary matrix or Kraus list) to rho_ABC."""
    d_bc = rho_in.shape[0] // d_a
    if isinstance(channel, np.ndarray):
        kraus = [channel]
        if frob_dist(channel.conj().T @ channel, identity(channel.shape[0])) > 1e-9:
            raise ValueError("single-matrix channel must be unitary")
    else:
        kraus = [as_cmatrix(k) for k in channel]
        total = sum(k.conj().T @ k for k in kraus)
        if frob_dist(total, identity(kraus[0].shape[0])) > 1e-8:
            raise ValueError("Kraus operators do not satisfy sum K^dag K = 1")
    if kraus[0].shape[0] != d_bc:
        raise ValueError(f"channel dimension {kraus[0].shape[0]} does not match B x C = {d_bc}")
    out = np.zeros_like(rho_in)
    for k in kraus:
        lifted = kron(identity(d_a), k)
        out = out + lifted @ rho_in @ lifted.conj().T
    return out


def verify_clone(
    rho: DensityMatrix,
    channel: np.ndarray | Sequence[np.ndarray],
    measurements: Sequence[MeasurementElement],
    tol: float = 1e-9,
    ancilla: np.ndarray | None = None,
) -> CloneReport:
    """Check whether a B x C channel clones every steered ensemble.

    Prepares rho_AB x |anc><anc| on C (``ancilla`` defaults to the first
    computational ket), applies the channel, reduces to the AB and AC arms,
    and compares both assemblages against the original over all given
    measurement elements.  Reports the largest Frobenius deviation per arm.
    """
    if len(rho.dims) != 2:
        raise ValueError(f"verify_clone needs a bipartite state, got dims {rho.dims}")
    d_a, d_b = rho.dims
    anc = np.zeros(d_b, dtype=complex) if ancilla is None else np.asarray(ancilla, dtype=complex)
    if ancilla is None:
        anc[0] = 1.0
    if anc.shape != (d_b,) or abs(np.linalg.norm(anc) - 1.0) > 1e-10:
        raise ValueError("ancilla must be a normalized ket of the C dimension")
    rho_in = kron(rho.matrix, projector(anc))
    rho_out = _apply_channel(rho_in, channel, d_a)
    dims3 = [d_a, d_b, d_b]
    rho_ab = DensityMatrix(partial_trace(rho_out, dims3, keep=(0, 1)), (d_a, d_b))
    rho_ac = DensityMatrix(partial_trace(rho_out, dims3, keep=(0, 2)), (d_a, d_b))
    dev_b = 0.0
    dev_c = 0.0
    for el in measurements:
        original = steered_state(rho, el)
        dev_b = max(dev_b, frob_dist(steered_state(rho_ab, el), original))
        dev_c = max(dev_c, frob_dist(steered_state(rho_ac, el), original))
    return CloneReport(dev_b, dev_c, dev_b <= tol and dev_c <= tol)
