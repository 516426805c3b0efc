"""CSV writing/reading: comma separated, LF endings, '#' comment lines."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


def fmt(value, precision: int = 17) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    v = float(value)
    if math.isnan(v):
        return "nan"
    return f"{v:.{precision}g}"


def write_csv(
    stream,
    header: Sequence[str],
    rows: Iterable[Sequence],
    precision: int = 17,
    comments: Sequence[str] = (),
    footer: Sequence[str] = (),
) -> None:
    for c in comments:
        stream.write(f"# {c}\n")
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v, precision) for v in row) + "\n")
    for c in footer:
        stream.write(f"# {c}\n")


@dataclass
class Table:
    header: list[str]
    rows: list[list]
    comments: list[str] = field(default_factory=list)

    def column(self, name: str) -> list:
        i = self.header.index(name)
        return [r[i] for r in self.rows]


def _parse(cell: str):
    if cell == "":
        return None
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(source) -> Table:
    """Parse text or a file-like object written by :func:`write_csv`."""
    text = source if isinstance(source, str) else source.read()
    header: Optional[list[str]] = None
    rows, comments = [], []
    for line in io.StringIO(text):
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        cells = line.split(",")
        if header is None:
            header = cells
        else:
            if len(cells) != len(header):
                raise ValueError(f"row has {len(cells)} fields, header has {len(header)}")
            rows.append([_parse(c) for c in cells])
    if header is None:
        raise ValueError("missing header row")
    return Table(header, rows, comments)
