"""Fidelities, the steering measure, and the two cloning inequalities.

The steering measure of a Bell-diagonal two-qubit state is the average
length of its steered Bloch vectors over uniformly random measurement
directions: S = integral |T x| / (4 pi) with T the correlation diagonal.
The state is steerable exactly when S > 1/2.  No closed form is used for
the integral; a deterministic Gauss-Legendre x uniform-azimuth product rule
and seeded Monte Carlo act as two independent evaluation paths.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .cloning import VCoefficients, clone_pair, primed
from .qmat import frob_dist, psd_sqrt
from .quantum import PAULIS, DensityMatrix, bell_state, identity, kron

STEERABLE_THRESHOLD = 0.5


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """Nodes and weights for averaging over the unit sphere.

    Weights are normalized to sum to 1, so quadrature of a function is its
    spherical mean.  Build with :meth:`monte_carlo`, :meth:`gauss_grid`, or
    :meth:`parse` ("mc:<n>:<seed>" or "grid:<ntheta>x<nphi>").
    """

    nodes: np.ndarray
    weights: np.ndarray
    scheme: str

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 3 or weights.shape != (nodes.shape[0],):
            raise ValueError("nodes must be (n, 3) with matching weights")
        if abs(float(weights.sum()) - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {weights.sum()}, expected 1")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        norms = np.linalg.norm(nodes, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValueError("nodes must lie on the unit sphere")
        nodes = nodes.copy()
        weights = weights.copy()
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def is_monte_carlo(self) -> bool:
        return self.scheme.startswith("mc:")

    @classmethod
    def monte_carlo(cls, n: int, seed: int) -> "SphereQuadrature":
        """Uniform random directions with equal weights."""
        if n < 1:
            raise ValueError("sample count must be positive")
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((n, 3))
        norms = np.linalg.norm(g, axis=1)
        while np.any(norms < 1e-12):  # essentially unreachable
            bad = norms < 1e-12
            g[bad] = rng.standard_normal((int(bad.sum()), 3))
            norms = np.linalg.norm(g, axis=1)
        return cls(g / norms[:, None], np.full(n, 1.0 / n), f"mc:{n}:{seed}")

    @classmethod
    def gauss_grid(cls, n_theta: int, n_phi: int) -> "SphereQuadrature":
        """Gauss-Legendre nodes in cos(theta) crossed with uniform azimuth."""
        if n_theta < 1 or n_phi < 1:
            raise ValueError("node counts must be positive")
        u, wu = np.polynomial.legendre.leggauss(n_theta)
        phi = (np.arange(n_phi) + 0.5) * (2.0 * np.pi / n_phi)
        sin_theta = np.sqrt(np.clip(1.0 - u**2, 0.0, None))
        x = np.outer(sin_theta, np.cos(phi)).ravel()
        y = np.outer(sin_theta, np.sin(phi)).ravel()
        z = np.outer(u, np.ones(n_phi)).ravel()
        nodes = np.column_stack([x, y, z])
        nodes /= np.linalg.norm(nodes, axis=1)[:, None]
        weights = np.outer(wu / 2.0, np.full(n_phi, 1.0 / n_phi)).ravel()
        weights /= weights.sum()
        return cls(nodes, weights, f"grid:{n_theta}x{n_phi}")

    @classmethod
    def parse(cls, scheme: str) -> "SphereQuadrature":
        m = re.fullmatch(r"mc:(\d+):(\d+)", scheme)
        if m:
            return cls.monte_carlo(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"grid:(\d+)x(\d+)", scheme)
        if m:
            return cls.gauss_grid(int(m.group(1)), int(m.group(2)))
        raise ValueError(
            f"unknown quadrature scheme {scheme!r}; use 'mc:<n>:<seed>' or 'grid:<nt>x<np>'"
        )


DEFAULT_QUADRATURE = "grid:64x128"


@dataclass(frozen=True)
class CorrelationDiagonal:
    """Diagonal (T_1, T_2, T_3) of a Bell-diagonal correlation matrix."""

    t: tuple[float, float, float]

    def __post_init__(self) -> None:
        t = tuple(float(x) for x in self.t)
        if len(t) != 3:
            raise ValueError("correlation diagonal needs three entries")
        if max(abs(x) for x in t) > 1.0 + 1e-10:
            raise ValueError(f"correlation entries {t} leave [-1, 1]")
        object.__setattr__(self, "t", t)

    def asarray(self) -> np.ndarray:
        return np.array(self.t, dtype=float)


@dataclass(frozen=True)
class SteeringReport:
    """Evaluation of one amplitude point: fidelities, steering, inequalities."""

    F_B: float
    F_C: float
    S_AB: float
    S_AC: float
    steerable_AB: bool
    steerable_AC: bool
    nocloning_lhs: float
    steering_lhs: float
    t_AB: CorrelationDiagonal
    t_AC: CorrelationDiagonal


def fidelity(rho1: DensityMatrix | np.ndarray, rho2: DensityMatrix | np.ndarray) -> float:
    """Overlap fidelity tr(sqrt(rho1) rho2 sqrt(rho1)).

    This is the linear overlap tr(rho1 rho2), not the squared-Uhlmann
    fidelity; the two conventions coincide when rho1 is pure, which covers
    every original steered state in this protocol.  Rejects non-PSD input.
    """
    m1 = rho1.matrix if isinstance(rho1, DensityMatrix) else np.asarray(rho1, dtype=complex)
    m2 = rho2.matrix if isinstance(rho2, DensityMatrix) else np.asarray(rho2, dtype=complex)
    if m1.shape != m2.shape:
        raise ValueError(f"shape mismatch: {m1.shape} vs {m2.shape}")
    root = psd_sqrt(m1)
    psd_sqrt(m2)  # reject non-PSD second argument as well
    return float(np.trace(root @ m2 @ root).real)


def _batched_direction_povm(nodes: np.ndarray, outcome: int) -> np.ndarray:
    """(n, 2, 2) stack of (1 + a x.sigma)/2 for all directions at once."""
    sig = np.stack(PAULIS)  # (3, 2, 2)
    dotted = np.einsum("nk,kij->nij", nodes, sig)
    return 0.5 * (identity(2)[None, :, :] + outcome * dotted)


def _batched_steered(povm: np.ndarray, rho4: np.ndarray) -> np.ndarray:
    """tr_A[(Pi x 1) rho] for a stack of 2x2 POVM elements on a 2x2-qubit state."""
    r = rho4.reshape(2, 2, 2, 2)  # (a_row, b_row, a_col, b_col)
    return np.einsum("nac,cbad->nbd", povm, r)


def averaged_fidelities(
    v: VCoefficients,
    quad: SphereQuadrature,
    with_stderr: bool = False,
) -> tuple[float, float] | tuple[tuple[float, float], tuple[float, float]]:
    """Direction-averaged clone fidelities computed through the assemblages.

    For every quadrature direction both outcomes are steered out of the
    original Bell state and out of the two clone states, normalized, and
    compared; the per-direction fidelity weighs the outcomes with their
    probabilities in the original state (1/2 each here, but computed, not
    assumed).  With ``with_stderr`` the Monte Carlo standard errors of the
    two averages are returned as a second pair.
    """
    phi = bell_state("phi+").matrix
    rho_ab, rho_ac = clone_pair(v)
    nodes = quad.nodes
    f_b = np.zeros(len(quad))
    f_c = np.zeros(len(quad))
    prob_total = np.zeros(len(quad))
    for outcome in (+1, -1):
        povm = _batched_direction_povm(nodes, outcome)
        orig = _batched_steered(povm, phi)
        probs = np.einsum("nii->n", orig).real
        orig_norm = orig / probs[:, None, None]
        # The pure-state shortcut tr(P rho P) = tr(P rho) needs P pure; check it.
        purity_dev = np.max(np.abs(np.einsum("nij,nji->n", orig_norm, orig_norm).real - 1.0))
        if purity_dev > 1e-10:
            raise RuntimeError(f"original steered states are not pure (deviation {purity_dev:.3e})")
        for rho_clone, acc in ((rho_ab.matrix, f_b), (rho_ac.matrix, f_c)):
            clone = _batched_steered(povm, rho_clone)
            clone_probs = np.einsum("nii->n", clone).real
            clone_norm = clone / clone_probs[:, None, None]
            acc += probs * np.einsum("nij,nji->n", orig_norm, clone_norm).real
        prob_total += probs
    if np.max(np.abs(prob_total - 1.0)) > 1e-10:
        raise RuntimeError("outcome probabilities do not sum to 1")
    fb = float(np.sum(quad.weights * f_b))
    fc = float(np.sum(quad.weights * f_c))
    if not with_stderr:
        return fb, fc
    n = len(quad)
    se_b = float(np.sqrt(np.var(f_b, ddof=1) / n)) if n > 1 else float("inf")
    se_c = float(np.sqrt(np.var(f_c, ddof=1) / n)) if n > 1 else float("inf")
    return (fb, fc), (se_b, se_c)


def closed_form_fidelities(v: VCoefficients) -> tuple[float, float]:
    """Clone fidelities (1 + 2 v0^2)/3 and (1 + 2 |v0'|^2)/3."""
    v0p = primed(v)[0]
    fb = (1.0 + 2.0 * v.v0**2) / 3.0
    fc = float((1.0 + 2.0 * abs(v0p) ** 2) / 3.0)
    return fb, fc


def correlation_diagonal(rho: DensityMatrix) -> CorrelationDiagonal:
    """Diagonal T_k = tr(sigma_k x sigma_k rho) of a Bell-diagonal state.

    Rejects states with off-diagonal spin correlations beyond 1e-8; rotating
    a general state into its diagonal frame is the caller's job.
    """
    if rho.dims != (2, 2):
        raise ValueError(f"correlation diagonal needs a two-qubit state, got dims {rho.dims}")
    corr = np.empty((3, 3))
    for k, sk in enumerate(PAULIS):
        for l, sl in enumerate(PAULIS):
            corr[k, l] = float(np.trace(kron(sk, sl) @ rho.matrix).real)
    for k in range(3):
        for l in range(3):
            if k != l and abs(corr[k, l]) > 1e-8:
                raise ValueError(
                    f"state is not Bell-diagonal: correlation entry ({k + 1}, {l + 1}) "
                    f"= {corr[k, l]:.3e}"
                )
    return CorrelationDiagonal(tuple(corr[k, k] for k in range(3)))


def steering_S(t: CorrelationDiagonal | np.ndarray, quad: SphereQuadrature) -> float:
    """Average steered-Bloch-vector length: mean of |T x| over the sphere."""
    tv = t.asarray() if isinstance(t, CorrelationDiagonal) else np.asarray(t, dtype=float)
    if tv.shape != (3,):
        raise ValueError("correlation diagonal must have three entries")
    lengths = np.sqrt(np.clip(quad.nodes**2 @ tv**2, 0.0, None))
    return float(np.sum(quad.weights * lengths))


def batch_steering_S(ts: np.ndarray, quad: SphereQuadrature, chunk: int = 4096) -> np.ndarray:
    """steering_S for many correlation diagonals at once, chunked for memory."""
    ts = np.asarray(ts, dtype=float)
    if ts.ndim != 2 or ts.shape[1] != 3:
        raise ValueError("expected an (m, 3) array of correlation diagonals")
    x2 = quad.nodes**2
    out = np.empty(ts.shape[0])
    for start in range(0, ts.shape[0], chunk):
        block = ts[start : start + chunk] ** 2
        lengths = np.sqrt(np.clip(block @ x2.T, 0.0, None))
        out[start : start + chunk] = lengths @ quad.weights
    return out


def steering_pair(
    v: VCoefficients, quad: SphereQuadrature
) -> tuple[float, float, bool, bool]:
    """Steering measures of both clone arms and their S > 1/2 flags."""
    rho_ab, rho_ac = clone_pair(v)
    s_ab = steering_S(correlation_diagonal(rho_ab), quad)
    s_ac = steering_S(correlation_diagonal(rho_ac), quad)
    return s_ab, s_ac, s_ab > STEERABLE_THRESHOLD, s_ac > STEERABLE_THRESHOLD


def _check_unit_interval(name: str, value: float) -> float:
    if not -1e-12 <= value <= 1.0 + 1e-12:
        raise ValueError(f"{name} = {value} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def nocloning_lhs(f_b: float, f_c: float) -> float:
    """Left side of the fidelity no-cloning bound, which is >= 1/2 here."""
    f_b = _check_unit_interval("F_B", f_b)
    f_c = _check_unit_interval("F_C", f_c)
    db, dc = 1.0 - f_b, 1.0 - f_c
    return db + dc + float(np.sqrt(db * dc))


def steering_lhs(s_ab: float, s_ac: float) -> float:
    """Left side of the steering cloning bound, which is >= 1 here."""
    s_ab = _check_unit_interval("S_AB", s_ab)
    s_ac = _check_unit_interval("S_AC", s_ac)
    da, dc = 1.0 - s_ab, 1.0 - s_ac
    return da + dc + float(np.sqrt(da * dc))


def evaluate_point(v: VCoefficients, quad: SphereQuadrature) -> SteeringReport:
    """Full per-point record: closed-form fidelities, quadrature steering."""
    f_b, f_c = closed_form_fidelities(v)
    rho_ab, rho_ac = clone_pair(v)
    t_ab = correlation_diagonal(rho_ab)
    t_ac = correlation_diagonal(rho_ac)
    s_ab = steering_S(t_ab, quad)
    s_ac = steering_S(t_ac, quad)
    return SteeringReport(
        F_B=f_b,
        F_C=f_c,
        S_AB=s_ab,
        S_AC=s_ac,
        steerable_AB=s_ab > STEERABLE_THRESHOLD,
        steerable_AC=s_ac > STEERABLE_THRESHOLD,
        nocloning_lhs=nocloning_lhs(f_b, f_c),
        steering_lhs=steering_lhs(s_ab, s_ac),
        t_AB=t_ab,
        t_AC=t_ac,
    )
