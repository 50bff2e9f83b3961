"""Deterministic artifact emission: CSV, JSON, SVG figures, and a manifest.

All text outputs are reproducible byte-for-byte for a fixed config and
seed: JSON is dumped with sorted keys, floats go through repr (shortest
round-trip), and every file carries a schema version in its header.  SVG
figures are rendered through matplotlib with a fixed hash salt and no
timestamp metadata; figures are a convenience, not an acceptance surface.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .errors import ParameterError  # noqa: E402

SCHEMA_VERSION = "1"

plt.rcParams["svg.hashsalt"] = "biheat"


class OutputSession:
    """Collects files written under one output directory into a manifest."""

    def __init__(self, directory):
        self.directory = Path(directory)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            probe = self.directory / ".write-probe"
            probe.write_text("", encoding="utf-8")
            probe.unlink()
        except OSError as exc:
            raise OSError(f"output directory {self.directory} not writable: {exc}")
        self.files: list[str] = []

    def _register(self, name: str) -> Path:
        if "/" in name or name.startswith("."):
            raise ParameterError(f"artifact name must be a plain filename: {name!r}")
        self.files.append(name)
        return self.directory / name

    def write_json(self, name: str, payload: dict) -> Path:
        path = self._register(name)
        body = dict(payload)
        body["schema"] = SCHEMA_VERSION
        try:
            with path.open("w", encoding="utf-8") as fh:
                json.dump(body, fh, sort_keys=True, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise OSError(f"failed writing {path}: {exc}")
        return path

    def write_csv(self, name: str, header: list[str], rows) -> Path:
        path = self._register(name)
        try:
            with path.open("w", encoding="utf-8") as fh:
                fh.write(f"# schema={SCHEMA_VERSION}\n")
                fh.write(",".join(header) + "\n")
                for row in rows:
                    fh.write(",".join(_cell(v) for v in row) + "\n")
        except OSError as exc:
            raise OSError(f"failed writing {path}: {exc}")
        return path

    def write_line_plot(
        self,
        name: str,
        x,
        series: dict,
        xlabel: str = "",
        ylabel: str = "",
        title: str = "",
        logx: bool = False,
        logy: bool = False,
    ) -> Path:
        path = self._register(name)
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for label, y in series.items():
            ax.plot(x, y, label=label)
        if logx:
            ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        if len(series) > 1:
            ax.legend()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OSError(f"failed writing {path}: {exc}")
        finally:
            plt.close(fig)
        return path

    def finalize(self, command: str, params: dict) -> Path:
        """Write the manifest listing exactly the artifacts of this session."""
        manifest = {
            "schema": SCHEMA_VERSION,
            "command": command,
            "params": {k: params[k] for k in sorted(params)},
            "files": [
                {"name": n, "schema": SCHEMA_VERSION} for n in sorted(self.files)
            ],
        }
        path = self.directory / "manifest.json"
        try:
            with path.open("w", encoding="utf-8") as fh:
                json.dump(manifest, fh, sort_keys=True, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise OSError(f"failed writing {path}: {exc}")
        return path


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)
