"""Command-line driver: cloneability checks, parameter sweeps, CSV emission.

Subcommands:

* ``check``   evaluate one amplitude point and print its report line,
* ``sweep``   trace a named one-parameter amplitude family to CSV,
* ``region``  sample random amplitudes (positive-real or complex) to CSV,
* ``perfect`` decide perfect steering-cloneability of a state file.

CSV columns are fixed (see ``CSV_HEADER``); complex-mode files insert the
four imaginary-part columns after ``v3``.  ``STEERCLONE_THREADS`` caps the
evaluation worker count; results never depend on it.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cloning import VCoefficients
from .metrics import DEFAULT_QUADRATURE, SphereQuadrature, SteeringReport, evaluate_point
from .quantum import direction_measurements, load_state, perfect_copier, proof_measurements, verify_clone, zero_discord_check

CSV_HEADER = [
    "v0", "v1", "v2", "v3",
    "FB", "FC", "SAB", "SAC",
    "nocloning_lhs", "steering_lhs",
    "steerable_AB", "steerable_AC",
]
CSV_IMAG_COLUMNS = ["v0_im", "v1_im", "v2_im", "v3_im"]

# Family name -> fixed ratio of (v1, v2, v3); v0 parameterizes the curve and
# the tail is scaled to restore normalization.
FAMILY_RATIOS: dict[str, tuple[float, float, float]] = {
    "sym": (1.0, 1.0, 1.0),
    "f2": (1.0, 1.0, 0.0),
    "f3": (1.0, 0.0, 0.0),
    "dashed": (4.0, 4.0, 1.0),
    "dotted": (1.0, 1.0, 4.0),
}

NOCLONING_SLACK = 1e-9
STEERING_SLACK = 1e-9
PERFECT_SEED = 1907
PERFECT_MEASUREMENTS = 50


@dataclass(frozen=True)
class FamilySpec:
    """A named one-parameter amplitude family swept over v0 in [0, 1]."""

    name: str
    steps: int

    def __post_init__(self) -> None:
        if self.name not in FAMILY_RATIOS:
            raise ValueError(f"unknown family {self.name!r}; choose from {sorted(FAMILY_RATIOS)}")
        if self.steps < 2:
            raise ValueError("steps must be at least 2")

    def point(self, v0: float) -> VCoefficients:
        """Family member at the given v0; the ratio fixes the remaining tail."""
        if not 0.0 <= v0 <= 1.0:
            raise ValueError(f"v0 must lie in [0, 1], got {v0}")
        ratio = np.array(FAMILY_RATIOS[self.name], dtype=float)
        scale = np.sqrt(max(1.0 - v0 * v0, 0.0) / float(ratio @ ratio))
        return VCoefficients.from_iterable([v0, *(ratio * scale)])

    def grid(self) -> list[VCoefficients]:
        return [self.point(v0) for v0 in np.linspace(0.0, 1.0, self.steps)]


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated amplitude point, ready for CSV emission."""

    v: np.ndarray
    report: SteeringReport

    def validate(self) -> None:
        if self.report.nocloning_lhs < 0.5 - NOCLONING_SLACK:
            raise ValueError(
                f"no-cloning bound violated at v={self.v}: lhs={self.report.nocloning_lhs!r}"
            )
        if self.report.steering_lhs < 1.0 - STEERING_SLACK:
            raise ValueError(
                f"steering bound violated at v={self.v}: lhs={self.report.steering_lhs!r}"
            )

    def row(self, complex_mode: bool) -> list[str]:
        r = self.report
        cells = [_fmt(z.real) for z in self.v]
        if complex_mode:
            cells += [_fmt(z.imag) for z in self.v]
        cells += [
            _fmt(r.F_B), _fmt(r.F_C), _fmt(r.S_AB), _fmt(r.S_AC),
            _fmt(r.nocloning_lhs), _fmt(r.steering_lhs),
            "1" if r.steerable_AB else "0",
            "1" if r.steerable_AC else "0",
        ]
        return cells


def _fmt(x: float) -> str:
    return f"{0.0 if x == 0 else x:.9g}"


def _worker_count() -> int:
    env = os.environ.get("STEERCLONE_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"STEERCLONE_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise ValueError("STEERCLONE_THREADS must be at least 1")
        return n
    return min(8, os.cpu_count() or 1)


def evaluate_records(points: Sequence[VCoefficients], quad: SphereQuadrature) -> list[SweepRecord]:
    """Evaluate amplitude points in index-chunked parallel, preserving order."""
    points = list(points)
    workers = _worker_count()
    chunk = max(1, (len(points) + workers - 1) // workers)
    spans = [(i, min(i + chunk, len(points))) for i in range(0, len(points), chunk)]

    def run(span: tuple[int, int]) -> list[SweepRecord]:
        return [SweepRecord(p.v, evaluate_point(p, quad)) for p in points[span[0] : span[1]]]

    if len(spans) <= 1:
        results = [run(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, spans))
    records = [rec for block in results for rec in block]
    for rec in records:
        rec.validate()
    return records


def write_csv(records: Sequence[SweepRecord], path: str, complex_mode: bool) -> None:
    header = CSV_HEADER[:4] + (CSV_IMAG_COLUMNS if complex_mode else []) + CSV_HEADER[4:]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for rec in records:
            fh.write(",".join(rec.row(complex_mode)) + "\n")


def parse_coefficients(text: str) -> tuple[VCoefficients, bool, float]:
    """Parse '--v' input: four comma-separated reals or re:im pairs.

    Returns the (normalized) amplitudes, whether complex mode was used, and
    the square-norm deviation of the raw input.
    """
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected 4 comma-separated coefficients, got {len(parts)}")
    complex_mode = any(":" in p for p in parts)
    vals: list[complex] = []
    for p in parts:
        p = p.strip()
        try:
            if ":" in p:
                re_s, im_s = p.split(":")
                vals.append(complex(float(re_s), float(im_s)))
            else:
                vals.append(complex(float(p), 0.0))
        except ValueError as exc:
            raise ValueError(f"malformed coefficient {p!r}") from exc
    raw = np.asarray(vals, dtype=complex)
    norm2 = float(np.sum(np.abs(raw) ** 2))
    if norm2 == 0.0:
        raise ValueError("coefficients cannot all be zero")
    return VCoefficients.from_iterable(raw, normalize=True), complex_mode, abs(norm2 - 1.0)


def sample_region(samples: int, mode: str, seed: int) -> list[VCoefficients]:
    """Random amplitudes: uniform positive orthant of the 3-sphere, or
    Haar-uniform on the complex 7-sphere followed by canonicalization."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    out = []
    if mode == "positive-real":
        g = np.abs(rng.standard_normal((samples, 4)))
        g /= np.linalg.norm(g, axis=1)[:, None]
        out = [VCoefficients.from_iterable(row, normalize=True) for row in g]
    elif mode == "complex":
        g = rng.standard_normal((samples, 8))
        z = g[:, :4] + 1j * g[:, 4:]
        z /= np.linalg.norm(z, axis=1)[:, None]
        out = [VCoefficients.from_iterable(row, normalize=True) for row in z]
    else:
        raise ValueError(f"unknown mode {mode!r}; use 'positive-real' or 'complex'")
    return out


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _report_line(report: SteeringReport) -> str:
    return (
        f"FB={report.F_B:.6f}, FC={report.F_C:.6f}, "
        f"SAB={report.S_AB:.6f}, SAC={report.S_AC:.6f}, "
        f"nocloning_lhs={report.nocloning_lhs:.6f}, steering_lhs={report.steering_lhs:.6f}, "
        f"steerable_AB={1 if report.steerable_AB else 0}, "
        f"steerable_AC={1 if report.steerable_AC else 0}"
    )


def cmd_check(args: argparse.Namespace) -> int:
    v, _complex_mode, norm_dev = parse_coefficients(args.v)
    if norm_dev > 1e-6:
        print(f"warning: input norm deviates by {norm_dev:.3e}; normalized", file=sys.stderr)
    quad = SphereQuadrature.parse(args.quadrature)
    print(_report_line(evaluate_point(v, quad)))
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    family = FamilySpec(args.family, args.steps)
    quad = SphereQuadrature.parse(args.quadrature)
    records = evaluate_records(family.grid(), quad)
    write_csv(records, args.out, complex_mode=False)
    return 0


def cmd_region(args: argparse.Namespace) -> int:
    points = sample_region(args.samples, args.mode, args.seed)
    quad = SphereQuadrature.parse(args.quadrature)
    records = evaluate_records(points, quad)
    write_csv(records, args.out, complex_mode=(args.mode == "complex"))
    return 0


def cmd_perfect(args: argparse.Namespace) -> int:
    try:
        state = load_state(args.state)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot load state file: {exc}", file=sys.stderr)
        return 2
    rng = np.random.default_rng(PERFECT_SEED)
    cert = zero_discord_check(state, tol=args.tol, rng=rng)
    if not cert.is_zero_discord:
        print(f"FAIL max_commutator={cert.max_commutator:.12e} (tol={args.tol:g})")
        return 1
    copier = perfect_copier(cert.common_basis)
    d_a = state.dims[0]
    measurements = []
    if d_a == 2:
        for _ in range(PERFECT_MEASUREMENTS):
            x = rng.standard_normal(3)
            measurements.extend(direction_measurements(x / np.linalg.norm(x)))
    else:
        n_gen = d_a * d_a - 1
        for i in range(PERFECT_MEASUREMENTS):
            delta = rng.uniform(0.05, 0.7)
            measurements.extend(proof_measurements(d_a, delta)[i % n_gen])
    report = verify_clone(
        state, copier, measurements, tol=args.tol, ancilla=cert.common_basis[:, 0]
    )
    verdict = "PASS" if report.passed else "FAIL"
    print(
        f"{verdict} max_deviation_B={report.max_deviation_B:.12e} "
        f"max_deviation_C={report.max_deviation_C:.12e} (tol={args.tol:g})"
    )
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steerclone",
        description="Simulate cloning of the steering properties of bipartite states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="evaluate one amplitude point")
    p_check.add_argument("--v", required=True, help="four comma-separated reals or re:im pairs")
    p_check.add_argument("--quadrature", default=DEFAULT_QUADRATURE)
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser("sweep", help="trace an amplitude family to CSV")
    p_sweep.add_argument("--family", required=True, choices=sorted(FAMILY_RATIOS))
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--quadrature", default=DEFAULT_QUADRATURE)
    p_sweep.set_defaults(func=cmd_sweep)

    p_region = sub.add_parser("region", help="sample random amplitudes to CSV")
    p_region.add_argument("--samples", type=int, required=True)
    p_region.add_argument("--mode", required=True, choices=["positive-real", "complex"])
    p_region.add_argument("--seed", type=int, required=True)
    p_region.add_argument("--out", required=True)
    p_region.add_argument("--quadrature", default=DEFAULT_QUADRATURE)
    p_region.set_defaults(func=cmd_region)

    p_perfect = sub.add_parser("perfect", help="decide perfect steering-cloneability")
    p_perfect.add_argument("--state", required=True, help="state file (JSON)")
    p_perfect.add_argument("--tol", type=float, default=1e-9)
    p_perfect.set_defaults(func=cmd_perfect)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
