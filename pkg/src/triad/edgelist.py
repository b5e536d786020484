"""Shared edge-list text format.

One edge per line: two base-10 non-negative vertex ids separated by
whitespace. Lines starting with '#' are comments; blank lines are skipped.
Self-loops and repeated edges (in either orientation) are rejected with the
offending line number.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator, Optional

from .errors import EdgeListError

Edge = tuple[int, int]


def parse_line(line: str, lineno: int) -> Optional[Edge]:
    """Parse one line into a canonical (u, v) with u < v, or None to skip."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    parts = stripped.split()
    if len(parts) != 2:
        raise EdgeListError(f"expected two vertex ids, got {len(parts)} fields", lineno)
    try:
        u, v = int(parts[0]), int(parts[1])
    except ValueError:
        raise EdgeListError(f"non-integer vertex id in {parts!r}", lineno) from None
    if u < 0 or v < 0:
        raise EdgeListError(f"negative vertex id in {parts!r}", lineno)
    if u == v:
        raise EdgeListError(f"self-loop at vertex {u}", lineno)
    return (u, v) if u < v else (v, u)


def iter_edges(lines: Iterable[str]) -> Iterator[tuple[int, Edge]]:
    """Yield (lineno, edge) for every edge line, validating duplicates."""
    seen: set[Edge] = set()
    for lineno, line in enumerate(lines, start=1):
        edge = parse_line(line, lineno)
        if edge is None:
            continue
        if edge in seen:
            raise EdgeListError(f"duplicate edge {edge[0]} {edge[1]}", lineno)
        seen.add(edge)
        yield lineno, edge


def read_edges(path: str | os.PathLike) -> list[Edge]:
    """Load and fully validate an edge-list file."""
    with open(path, "r", encoding="ascii") as fh:
        return [edge for _, edge in iter_edges(fh)]


def scan_offsets(path: str | os.PathLike) -> list[int]:
    """Validate a file and return the byte offset of every edge line.

    Only the offsets stay in memory afterwards; the duplicate-detection set
    used during the scan is transient.
    """
    offsets: list[int] = []
    seen: set[Edge] = set()
    with open(path, "rb") as fh:
        lineno = 0
        while True:
            pos = fh.tell()
            raw = fh.readline()
            if not raw:
                break
            lineno += 1
            edge = parse_line(raw.decode("ascii", errors="replace"), lineno)
            if edge is None:
                continue
            if edge in seen:
                raise EdgeListError(f"duplicate edge {edge[0]} {edge[1]}", lineno)
            seen.add(edge)
            offsets.append(pos)
    return offsets


def validate_edges(edges: Iterable[tuple[int, int]]) -> list[Edge]:
    """Canonicalize an in-memory edge sequence, rejecting loops and repeats."""
    out: list[Edge] = []
    seen: set[Edge] = set()
    for idx, (u, v) in enumerate(edges, start=1):
        if u < 0 or v < 0:
            raise EdgeListError(f"negative vertex id ({u}, {v})", idx)
        if u == v:
            raise EdgeListError(f"self-loop at vertex {u}", idx)
        edge = (u, v) if u < v else (v, u)
        if edge in seen:
            raise EdgeListError(f"duplicate edge {edge[0]} {edge[1]}", idx)
        seen.add(edge)
        out.append(edge)
    return out


def write_edges(path: str | os.PathLike, edges: Iterable[Edge], comment: str | None = None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")
