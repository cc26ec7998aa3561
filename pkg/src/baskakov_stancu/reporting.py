"""Deterministic file output: CSV tables, JSON reports, plot data, figures.

Every float is written as %.17g (lowercase e-notation) and files use
fixed "\n" line endings, so identical inputs produce byte-identical
files.  CSV and JSON outputs embed the fully resolved configuration so a
report can be reproduced from its own header.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping, Sequence

__all__ = [
    "fmt_float",
    "render_figure",
    "write_csv",
    "write_dat",
    "write_json",
]


def fmt_float(value) -> str:
    """%.17g with lowercase e-notation; nan/inf spelled out."""
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return format(v, ".17g")


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt_float(value)
    return str(value)


def write_csv(
    path: str | Path,
    config: Mapping[str, object],
    columns: Sequence[str],
    rows: Sequence[Sequence[object]],
) -> None:
    """CSV with '#'-prefixed config header lines, then header row, then rows."""
    lines = [f"# {key}={_fmt_cell(val)}" for key, val in config.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt_cell(cell) for cell in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _json_value(value, indent: int) -> str:
    pad = " " * indent
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return "null"
        return fmt_float(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, Mapping):
        if not value:
            return "{}"
        inner = ",\n".join(
            f'{pad}  "{k}": {_json_value(v, indent + 2)}' for k, v in value.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        inner = ",\n".join(f"{pad}  {_json_value(v, indent + 2)}" for v in value)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def write_json(path: str | Path, document: Mapping[str, object]) -> None:
    """JSON with the package's fixed float formatting (nan/inf become null)."""
    Path(path).write_text(
        _json_value(document, 0) + "\n", encoding="utf-8", newline="\n"
    )


def write_dat(path: str | Path, pairs: Sequence[tuple[object, object]]) -> None:
    """Two space-separated columns, one (x, y) pair per line."""
    lines = [f"{_fmt_cell(a)} {_fmt_cell(b)}" for a, b in pairs]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def render_figure(
    path: str | Path,
    xs: Sequence[float],
    ys: Sequence[float],
    *,
    xlabel: str,
    ylabel: str,
    title: str = "",
    logx: bool = False,
) -> None:
    """Render one series to a PNG next to its .dat file.

    Pinned metadata keeps the PNG byte-stable across runs of the same
    matplotlib build.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(xs, ys, marker="o", markersize=3.5, linewidth=1.2)
    if logx:
        ax.set_xscale("log", base=2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.4)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": "baskakov-stancu"})
    plt.close(fig)
