"""Exhaustive corpora of graphs up to isomorphism, stored as newline-delimited graph6.

Enumeration is by vertex augmentation: every graph on ``n`` vertices arises from
one on ``n - 1`` vertices by adding a vertex of minimum degree, so only
neighbourhoods that keep the new vertex of minimum degree are tried.  Isomorph
rejection uses nauty canonical certificates (via pynauty).
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path
from typing import Iterable, Iterator

from .graph import Graph, emit_graph6, parse_graph6

# OEIS A000088
KNOWN_COUNTS = {0: 1, 1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346,
                9: 274668, 10: 12005168}


def _certificate(n: int, rows: tuple[int, ...]) -> bytes:
    import pynauty

    adjacency = {v: [u for u in range(n) if rows[v] >> u & 1] for v in range(n)}
    return pynauty.certificate(pynauty.Graph(n, adjacency_dict=adjacency))


def _extend(graphs: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    m = n - 1
    seen: dict[bytes, tuple[int, ...]] = {}
    for rows in graphs:
        deg = [r.bit_count() for r in rows]
        for nbrs in range(1 << m):
            k = nbrs.bit_count()
            if any(deg[v] + (nbrs >> v & 1) < k for v in range(m)):
                continue
            new = tuple(r | ((nbrs >> v & 1) << m) for v, r in enumerate(rows)) + (nbrs,)
            cert = _certificate(n, new)
            if cert not in seen:
                seen[cert] = new
    return list(seen.values())


def enumerate_graphs(max_n: int) -> dict[int, list[Graph]]:
    """All graphs on ``0..max_n`` vertices, one per isomorphism class.

    Each class is sorted by canonical graph6 bytes so corpora are reproducible.
    """
    levels: dict[int, list[Graph]] = {0: [Graph(0)]}
    current: list[tuple[int, ...]] = [()]
    for n in range(1, max_n + 1):
        current = _extend(current, n)
        gs = [Graph.from_adjacency(rows) for rows in current]
        gs.sort(key=emit_graph6)
        levels[n] = gs
    return levels


def default_cache_dir() -> Path:
    return Path(os.environ.get("TRIRAMSEY_CACHE", Path.home() / ".cache" / "triramsey"))


def corpus_path(n: int, cache_dir: Path | None = None) -> Path:
    return (cache_dir or default_cache_dir()) / f"graphs{n}.g6"


def write_corpus(path: Path, graphs: Iterable[Graph]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        for g in graphs:
            fh.write(emit_graph6(g) + b"\n")
    tmp.replace(path)


def read_corpus(path: str | Path) -> Iterator[Graph]:
    with open(path, "rb") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield parse_graph6(line)


def read_lines(path: str | Path) -> list[bytes]:
    with open(path, "rb") as fh:
        return [ln.strip() for ln in fh if ln.strip()]


def ensure_corpus(max_n: int, cache_dir: Path | None = None) -> list[Path]:
    """Make sure ``graphs{n}.g6`` exists for ``1 <= n <= max_n``; return the paths in order."""
    paths = [corpus_path(n, cache_dir) for n in range(1, max_n + 1)]
    missing = [n for n, p in zip(range(1, max_n + 1), paths) if not _valid(p, n)]
    if missing:
        levels = enumerate_graphs(max(missing))
        for n in missing:
            write_corpus(paths[n - 1], levels[n])
    return paths


def _valid(path: Path, n: int) -> bool:
    if not path.exists():
        return False
    expected = KNOWN_COUNTS.get(n)
    if expected is None:
        return True
    with open(path, "rb") as fh:
        return sum(1 for _ in fh) == expected


def small_graphs(max_n: int, min_n: int = 1, cache_dir: Path | None = None) -> Iterator[Graph]:
    for path in ensure_corpus(max_n, cache_dir)[min_n - 1:]:
        yield from read_corpus(path)


def digest_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
