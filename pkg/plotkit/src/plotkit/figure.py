"""Three-panel response figure rendered from a response_curve.csv.

Stacked panels sharing a logarithmic beta axis: order parameter with a
+/-1 SE band, susceptibility, and the WAIC transform, with a dashed
vertical line on every panel at the beta of the maximum-susceptibility
row. Rendering is a pure function of the CSV: the same input produces
byte-identical SVG output.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["FigureSpec", "ResponseTable", "load_response_csv", "render_response_figure"]

EXPECTED_COLUMNS = (
    "beta", "m", "m_se", "chi", "heat_capacity", "p_waic",
    "waic_transform", "logZ", "free_energy", "ess", "accept_rate",
)

# SVG ids for the geometry the tests assert on.
GID_PEAK_LINE = "chi-peak-line"
GID_CHI_CURVE = "chi-curve"


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    out_path: str
    title: str | None = None


@dataclass(frozen=True)
class ResponseTable:
    beta: np.ndarray
    m: np.ndarray
    m_se: np.ndarray
    chi: np.ndarray
    waic_transform: np.ndarray

    @property
    def peak_index(self) -> int:
        return int(np.argmax(self.chi))

    @property
    def peak_beta(self) -> float:
        return float(self.beta[self.peak_index])


def load_response_csv(path: str) -> ResponseTable:
    """Parse a response_curve.csv, validating the column layout."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such CSV: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if tuple(header) != EXPECTED_COLUMNS:
            raise ValueError(
                f"{path}: unexpected header {header!r}; "
                f"expected {','.join(EXPECTED_COLUMNS)}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(EXPECTED_COLUMNS):
                raise ValueError(f"{path}:{lineno}: expected {len(EXPECTED_COLUMNS)} fields")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    table = np.array(rows)
    cols = {name: table[:, k] for k, name in enumerate(EXPECTED_COLUMNS)}
    if np.any(cols["beta"] <= 0) or np.any(np.diff(cols["beta"]) <= 0):
        raise ValueError(f"{path}: beta column must be positive and strictly increasing")
    return ResponseTable(
        beta=cols["beta"], m=cols["m"], m_se=cols["m_se"],
        chi=cols["chi"], waic_transform=cols["waic_transform"],
    )


def render_response_figure(csv_path: str, out_path: str, title: str | None = None) -> dict:
    """Render the three-panel SVG; returns {"peak_beta", "peak_index", "out_path"}.

    Writes atomically: on any failure no partial output file is left.
    """
    table = load_response_csv(csv_path)
    # Stable SVG ids and no embedded timestamp, so identical CSV input
    # yields identical bytes.
    with plt.rc_context({"svg.hashsalt": "plotkit", "svg.fonttype": "path"}):
        fig, axes = plt.subplots(
            3, 1, sharex=True, figsize=(6.0, 7.5), constrained_layout=True
        )
        ax_m, ax_chi, ax_wt = axes

        ax_m.fill_between(
            table.beta, table.m - table.m_se, table.m + table.m_se,
            alpha=0.3, color="tab:blue", linewidth=0,
        )
        ax_m.plot(table.beta, table.m, color="tab:blue", marker="o", markersize=3)
        ax_m.set_ylabel("order parameter m")

        chi_line, = ax_chi.plot(
            table.beta, table.chi, color="tab:red", marker="o", markersize=3
        )
        chi_line.set_gid(GID_CHI_CURVE)
        ax_chi.set_ylabel(r"susceptibility $\chi$")

        ax_wt.plot(
            table.beta, table.waic_transform, color="tab:green",
            marker="o", markersize=3,
        )
        ax_wt.set_ylabel(r"$\log(1 + p_\mathrm{WAIC}/n)$")
        ax_wt.set_xlabel(r"inverse temperature $\beta$")
        ax_wt.set_xscale("log")

        for k, ax in enumerate(axes):
            line = ax.axvline(
                table.peak_beta, color="black", linestyle="--", linewidth=1
            )
            line.set_gid(f"{GID_PEAK_LINE}-{k}")
        if title:
            fig.suptitle(title)

        tmp = f"{out_path}.tmp"
        try:
            fig.savefig(tmp, format="svg", metadata={"Date": None})
            os.replace(tmp, out_path)
        finally:
            if os.path.exists(tmp):
                os.remove(tmp)
            plt.close(fig)
    return {
        "peak_beta": table.peak_beta,
        "peak_index": table.peak_index,
        "out_path": out_path,
    }
