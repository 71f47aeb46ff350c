"""Render steerclone CSV output into the steering-plane figure.

The figure lives on the (S_AB, S_AC) unit square: family sweeps become
curves, region samples become a scatter, and the sampled points with both
steering measures above 1/2 are colored to shade the double-steerable
region.  Rendering is deterministic: identical input files produce
identical image bytes for a fixed toolchain.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# Exact column contract of the sweep CSV; complex-mode files insert the
# imaginary block after v3.
BASE_HEADER = [
    "v0", "v1", "v2", "v3",
    "FB", "FC", "SAB", "SAC",
    "nocloning_lhs", "steering_lhs",
    "steerable_AB", "steerable_AC",
]
IMAG_BLOCK = ["v0_im", "v1_im", "v2_im", "v3_im"]
COMPLEX_HEADER = BASE_HEADER[:4] + IMAG_BLOCK + BASE_HEADER[4:]

STYLES = ("solid", "dashed", "dotted", "scatter")
SHADE_THRESHOLD = 0.5

plt.rcParams["svg.hashsalt"] = "steerclone-plotter"


class HeaderError(ValueError):
    """A CSV header does not match the sweep-record contract."""


@dataclass(frozen=True)
class CurveData:
    """The (S_AB, S_AC) trace of one input file."""

    path: str
    style: str
    s_ab: np.ndarray
    s_ac: np.ndarray
    double_steerable: np.ndarray


@dataclass(frozen=True)
class PlotJob:
    """Inputs, styles, and output target of one figure render."""

    curves: tuple[tuple[str, str], ...]
    region: str | None
    output: str
    shade_threshold: float = SHADE_THRESHOLD
    dpi: int = 200

    def __post_init__(self) -> None:
        for path, style in self.curves:
            if style not in STYLES:
                raise ValueError(f"unknown style {style!r} for {path}; choose from {STYLES}")


def _validate_header(header: list[str], path: str) -> list[str]:
    for want in (BASE_HEADER, COMPLEX_HEADER):
        if header == want:
            return header
    # Name the first offending column against the closer contract.
    want = COMPLEX_HEADER if len(header) == len(COMPLEX_HEADER) else BASE_HEADER
    for i, name in enumerate(want):
        if i >= len(header) or header[i] != name:
            got = header[i] if i < len(header) else "<missing>"
            raise HeaderError(
                f"{path}: header column {i + 1} is {got!r}, expected {name!r}"
            )
    raise HeaderError(f"{path}: header has {len(header)} columns, expected {len(want)}")


def read_curve(path: str | Path, style: str, threshold: float = SHADE_THRESHOLD) -> CurveData:
    """Read one CSV, validating the header contract; header-only files are empty curves."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise HeaderError(f"{path}: file is empty, expected a header row") from None
        header = _validate_header(header, str(path))
        i_ab = header.index("SAB")
        i_ac = header.index("SAC")
        s_ab, s_ac = [], []
        for row in reader:
            if not row:
                continue
            s_ab.append(float(row[i_ab]))
            s_ac.append(float(row[i_ac]))
    ab = np.asarray(s_ab)
    ac = np.asarray(s_ac)
    return CurveData(str(path), style, ab, ac, (ab > threshold) & (ac > threshold))


def render(job: PlotJob) -> str:
    """Draw the figure described by the job and write it to the output path."""
    curves = [read_curve(path, style, job.shade_threshold) for path, style in job.curves]
    region = read_curve(job.region, "scatter", job.shade_threshold) if job.region else None

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel(r"$S_{AB}$")
    ax.set_ylabel(r"$S_{AC}$")
    ax.set_aspect("equal")
    thr = job.shade_threshold
    ax.axvline(thr, color="0.4", linewidth=0.8, linestyle=(0, (4, 3)))
    ax.axhline(thr, color="0.4", linewidth=0.8, linestyle=(0, (4, 3)))

    if region is not None and len(region.s_ab):
        ax.scatter(region.s_ab, region.s_ac, s=2.0, c="0.78", linewidths=0, rasterized=True)
        hot = region.double_steerable
        if np.any(hot):
            ax.scatter(
                region.s_ab[hot], region.s_ac[hot],
                s=2.0, c="orange", linewidths=0, rasterized=True,
                label="double steerable",
            )
    for curve in curves:
        if not len(curve.s_ab):
            continue
        if curve.style == "scatter":
            ax.scatter(curve.s_ab, curve.s_ac, s=2.0, c="tab:blue", linewidths=0)
        else:
            ax.plot(
                curve.s_ab, curve.s_ac,
                linestyle=curve.style, color="black", linewidth=1.2,
            )

    fig.savefig(job.output, dpi=job.dpi, metadata={"Software": "steerclone-plot"})
    plt.close(fig)
    return job.output
