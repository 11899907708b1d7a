"""Deterministic artifact emission: CSV, JSON, plot data, figures.

Outputs carry no timestamps or environment details, so byte-identical
reruns are the norm; every JSON report embeds the tool version and the
group/subgroup digests it was computed from.  Figures are rendered with the
non-interactive backend next to the delimited files they visualize.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import __version__
from .errors import ConfigError


def write_csv(path: str | Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    path.write_text(buf.getvalue())
    return path


def write_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def stamp(
    payload: dict,
    group: Optional[dict] = None,
    digest: Optional[str] = None,
    claim: Optional[str] = None,
) -> dict:
    """Attach the provenance fields every emitted report carries."""
    out = dict(payload)
    out["tool_version"] = __version__
    if group is not None:
        out["group"] = group
    if digest is not None:
        out["pair_digest"] = digest
    if claim is not None:
        out["claim"] = claim
    return out


# ---------------------------------------------------------------------------
# row builders


def divergence_rows(samples, oracle) -> tuple[list[str], list[list]]:
    header = ["r", "value", "pair_count", "flag", "witness"]
    rows = [
        [s.r, s.value_text, s.pair_count, s.flag, s.witness_text(oracle)]
        for s in samples
    ]
    return header, rows


def distortion_rows(table, oracle) -> tuple[list[str], list[list]]:
    header = ["r", "Dist", "dist", "Dist_witness", "dist_witness", "note"]
    rows = []
    for row in table.rows:
        rows.append(
            [
                row.r,
                row.upper,
                row.lower,
                "" if row.upper_witness is None else oracle.format_element(row.upper_witness),
                "" if row.lower_witness is None else oracle.format_element(row.lower_witness),
                row.note,
            ]
        )
    return header, rows


def growth_rows(profile: list[tuple[int, int]]) -> tuple[list[str], list[list]]:
    return ["r", "ball"], [[r, c] for r, c in profile]


def ends_rows(profile) -> tuple[list[str], list[list]]:
    header = ["r", "estimate", "radius_used", "stabilized"]
    rows = [
        [row.r, row.estimate, row.radius_used, str(row.stabilized).lower()]
        for row in profile.rows
    ]
    return header, rows


def ray_rows(aball, ids: list[int]) -> tuple[list[str], list[list]]:
    header = ["step", "element", "word_length", "dist_to_H"]
    rows = [
        [
            i,
            aball.oracle.format_element(aball.elements[gid]),
            int(aball.word_length[gid]),
            int(aball.dist_to_H[gid]),
        ]
        for i, gid in enumerate(ids)
    ]
    return header, rows


# ---------------------------------------------------------------------------
# plot data (gnuplot-style two-column files)


@dataclass
class PlotDataNote:
    written: int
    dropped_infinite: int
    note: str

    def to_jsonable(self) -> dict:
        return {"written": self.written, "dropped_infinite": self.dropped_infinite, "note": self.note}


def emit_plot_data(
    csv_path: str | Path,
    out_path: str | Path,
    x_column: str = "r",
    y_column: str = "value",
) -> PlotDataNote:
    """Re-emit two CSV columns as whitespace-separated plot data.

    Rows with an infinite y value are dropped and counted in the note;
    the note is also embedded as a comment line in the data file.
    """
    csv_path, out_path = Path(csv_path), Path(out_path)
    rows = []
    dropped = 0
    with csv_path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{csv_path}: empty file, no header") from None
        try:
            xi = header.index(x_column)
            yi = header.index(y_column)
        except ValueError:
            raise ConfigError(
                f"{csv_path}: line 1: need columns {x_column!r} and {y_column!r}, "
                f"have {header}"
            ) from None
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) <= max(xi, yi):
                raise ConfigError(f"{csv_path}: line {lineno}: short row {row}")
            x, y = row[xi], row[yi]
            if y.strip().lower() in ("inf", "infinity", ""):
                dropped += 1
                continue
            try:
                float(x), float(y)
            except ValueError:
                raise ConfigError(
                    f"{csv_path}: line {lineno}: non-numeric data {x!r}, {y!r}"
                ) from None
            rows.append((x, y))
    if dropped:
        note = f"{dropped} infinite row(s) dropped"
    elif not rows:
        note = "empty profile"
    else:
        note = ""
    out_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {x_column} {y_column}"]
    if note:
        lines.append(f"# {note}")
    lines.extend(f"{x} {y}" for x, y in rows)
    out_path.write_text("\n".join(lines) + "\n")
    return PlotDataNote(len(rows), dropped, note)


# ---------------------------------------------------------------------------
# figures


def render_series_figure(
    series: list[tuple[str, list[tuple[float, Optional[float]]]]],
    out_path: str | Path,
    title: str,
    xlabel: str = "r",
    ylabel: str = "value",
    logy: bool = False,
) -> Path:
    """Line plot of one or more (label, [(x, y-or-None)]) series to a file."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=110)
    for label, pairs in series:
        pts = [(x, y) for x, y in pairs if y is not None]
        if not pts:
            continue
        xs, ys = zip(*pts)
        ax.plot(xs, ys, marker="o", label=label)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    if any(pairs for _, pairs in series):
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


# ---------------------------------------------------------------------------
# bundles (used by recipes)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ReportBundle:
    outdir: Path
    checks: list[CheckResult] = field(default_factory=list)
    artifacts: list[Path] = field(default_factory=list)

    def __post_init__(self):
        self.outdir = Path(self.outdir)
        self.outdir.mkdir(parents=True, exist_ok=True)

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(CheckResult(name, bool(ok), detail))
        return bool(ok)

    def add_csv(self, name: str, header, rows) -> Path:
        path = write_csv(self.outdir / name, header, rows)
        self.artifacts.append(path)
        return path

    def add_json(self, name: str, payload: dict) -> Path:
        path = write_json(self.outdir / name, payload)
        self.artifacts.append(path)
        return path

    def add_figure(self, name: str, series, title: str, **kwargs) -> Path:
        path = render_series_figure(series, self.outdir / name, title, **kwargs)
        self.artifacts.append(path)
        return path

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def write_summary(self, title: str, claim: str = "") -> Path:
        lines = [title, "=" * len(title), ""]
        if claim:
            lines.extend([claim, ""])
        for c in self.checks:
            status = "PASS" if c.ok else "FAIL"
            lines.append(f"[{status}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        lines.append("")
        lines.append(f"artifacts: {', '.join(p.name for p in self.artifacts)}")
        lines.append(f"tool version: {__version__}")
        path = self.outdir / "summary.txt"
        path.write_text("\n".join(lines) + "\n")
        self.artifacts.append(path)
        return path
