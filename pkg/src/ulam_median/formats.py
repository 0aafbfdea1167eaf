"""Plain-text sequence files: one sequence per line, space-separated integers.

An optional ``n=<int>`` header line is checked against the data when present.
Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence


def parse_sequences(text: str) -> list[tuple[int, ...]]:
    declared = None
    rows: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n="):
            if rows or declared is not None:
                raise ValueError(f"line {lineno}: header must come first")
            declared = int(line[2:])
            continue
        try:
            row = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ValueError(f"line {lineno}: expected integers, got {raw!r}") from None
        if any(v < 1 for v in row):
            raise ValueError(f"line {lineno}: symbols must be positive")
        rows.append(row)
    if declared is not None and any(len(r) != declared for r in rows):
        raise ValueError(f"sequence length differs from header n={declared}")
    return rows


def read_sequences(path: str | Path) -> list[tuple[int, ...]]:
    return parse_sequences(Path(path).read_text())


def format_sequences(rows: Iterable[Sequence[int]], header: bool = False) -> str:
    rows = list(rows)
    lines = [f"n={len(rows[0])}"] if header and rows else []
    lines.extend(" ".join(str(v) for v in r) for r in rows)
    return "\n".join(lines) + "\n"
