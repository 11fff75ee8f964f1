"""File emission for scenario runs: delimited data, JSON twins, figures."""

from __future__ import annotations

import csv
import datetime as _dt
import json
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams.update(
    {
        "figure.figsize": (6.0, 4.0),
        "figure.dpi": 110,
        "savefig.dpi": 150,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "lines.markersize": 5,
        # Fixed salt keeps SVG clip-path ids identical between runs.
        "svg.hashsalt": "ratchet",
    }
)


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """RFC 4180 style CSV; all values go through str(), so runs are byte-stable."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_json(path: Path | str, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return path


class OutputWriter:
    """Collects every artifact of one scenario run under a single directory."""

    def __init__(
        self,
        outdir: Path | str,
        json_twin: bool = False,
        figure_format: str = "png",
    ) -> None:
        if figure_format not in ("png", "svg"):
            raise ValueError("figure format must be png or svg")
        self.outdir = Path(outdir)
        self.outdir.mkdir(parents=True, exist_ok=True)
        self.json_twin = json_twin
        self.figure_format = figure_format
        self.outputs: list[Path] = []

    def csv(self, name: str, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
        path = write_csv(self.outdir / f"{name}.csv", header, rows)
        self.outputs.append(path)
        if self.json_twin:
            twin = write_json(
                self.outdir / f"{name}.json",
                [dict(zip(header, row)) for row in rows],
            )
            self.outputs.append(twin)
        return path

    def json(self, name: str, payload) -> Path:
        path = write_json(self.outdir / f"{name}.json", payload)
        self.outputs.append(path)
        return path

    def figure(self, fig, name: str) -> Path:
        path = self.outdir / f"{name}.{self.figure_format}"
        metadata = {"Date": None} if self.figure_format == "svg" else None
        fig.savefig(path, bbox_inches="tight", metadata=metadata)
        plt.close(fig)
        self.outputs.append(path)
        return path

    def metadata(self, payload: dict) -> Path:
        # timestamp lives only here; data files stay byte-identical across runs
        stamped = dict(payload)
        stamped["written_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
        return self.json("metadata", stamped)
