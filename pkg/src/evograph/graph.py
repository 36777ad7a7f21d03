"""Undirected simple graphs with 1-based vertex labels.

Vertices are ``1..n``. The graph6 codec works on the 0-based order used by
the format and maps position ``i`` to label ``i + 1``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional


class GraphError(ValueError):
    """Invalid vertex label, size, or graph construction."""


class Graph6Error(ValueError):
    """Malformed graph6 text; ``offset`` is the index of the offending byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)
    _adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"graph needs at least one vertex, got n={self.n}")
        adj: list[set[int]] = [set() for _ in range(self.n + 1)]
        norm = set()
        for e in self.edges:
            i, j = tuple(e) if len(e) == 2 else (None, None)
            if i is None or i == j:
                raise GraphError(f"not a simple edge: {set(e)}")
            for v in (i, j):
                if not 1 <= v <= self.n:
                    raise GraphError(f"edge {set(e)} has a label outside 1..{self.n}")
            adj[i].add(j)
            adj[j].add(i)
            norm.add(frozenset((i, j)))
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(frozenset(e) for e in edges))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def _check(self, i: int) -> None:
        if not (isinstance(i, int) and 1 <= i <= self.n):
            raise GraphError(f"vertex {i!r} is not in 1..{self.n}")

    def neighbors(self, i: int) -> frozenset:
        """Open neighbourhood N_1(i)."""
        self._check(i)
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def degrees(self) -> list[int]:
        return [len(self._adj[i]) for i in self.vertices]

    def has_edge(self, i: int, j: int) -> bool:
        self._check(i)
        self._check(j)
        return j in self._adj[i]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


def distances_from(g: Graph, i: int) -> dict[int, int]:
    """BFS distances from ``i`` to every vertex in its component."""
    g._check(i)
    dist = {i: 0}
    queue = deque([i])
    while queue:
        v = queue.popleft()
        for w in g._adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def neighbors_exact(g: Graph, i: int, k: int) -> frozenset:
    """Vertices at graph distance exactly ``k`` from ``i``."""
    if k < 0:
        raise GraphError(f"radius must be non-negative, got {k}")
    return frozenset(v for v, d in distances_from(g, i).items() if d == k)


def neighbors_within(g: Graph, i: int, k: int) -> frozenset:
    """Vertices at distance at most ``k`` from ``i`` (always contains ``i``)."""
    if k < 0:
        raise GraphError(f"radius must be non-negative, got {k}")
    return frozenset(v for v, d in distances_from(g, i).items() if d <= k)


def closed_neighborhood(g: Graph, i: int) -> frozenset:
    return g.neighbors(i) | {i}


def is_k_regular(g: Graph) -> Optional[int]:
    degs = set(g.degrees())
    return degs.pop() if len(degs) == 1 else None


# -- generators ---------------------------------------------------------------

def make_complete(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"complete graph needs n >= 3, got {n}")
    return Graph.from_edges(n, ((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return Graph.from_edges(n, ((i, i % n + 1) for i in range(1, n + 1)))


def make_wheel(l: int) -> Graph:
    """Hub 1 joined to every vertex of the cycle 2..l."""
    if l < 4:
        raise GraphError(f"wheel needs l >= 4, got {l}")
    rim = list(range(2, l + 1))
    edges = [(1, v) for v in rim]
    edges += [(rim[k], rim[(k + 1) % len(rim)]) for k in range(len(rim))]
    return Graph.from_edges(l, edges)


# -- graph6 -------------------------------------------------------------------

def _encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([63 + n])
    if n <= 258047:
        return bytes([126] + [63 + ((n >> s) & 63) for s in (12, 6, 0)])
    return bytes([126, 126] + [63 + ((n >> s) & 63) for s in (30, 24, 18, 12, 6, 0)])


def encode_graph6(g: Graph) -> str:
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if (j + 1) in g._adj[i + 1] else 0)
    bits += [0] * (-len(bits) % 6)
    body = bytes(
        63 + int("".join(map(str, bits[k:k + 6])), 2) for k in range(0, len(bits), 6)
    )
    return (_encode_n(g.n) + body).decode("ascii")


_WS = re.compile(r"\s+")


def decode_graph6(text: str | bytes) -> Graph:
    """Parse graph6; all ASCII whitespace is stripped first."""
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    data = _WS.sub("", text)
    if not data:
        raise Graph6Error("empty graph6 string", 0)
    for pos, ch in enumerate(data):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"byte {ch!r} outside 63..126", pos)
    vals = [ord(ch) - 63 for ch in data]

    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise Graph6Error("truncated 8-byte size header", len(vals))
        n, pos = 0, 8
        for v in vals[2:8]:
            n = (n << 6) | v
    else:
        if len(vals) < 4:
            raise Graph6Error("truncated 4-byte size header", len(vals))
        n, pos = 0, 4
        for v in vals[1:4]:
            n = (n << 6) | v
    if n < 1:
        raise GraphError("graph6 encodes an empty vertex set, which is unsupported")

    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    have = len(vals) - pos
    if have < need:
        raise Graph6Error(f"truncated adjacency data: need {need} bytes, got {have}", len(vals))
    if have > need:
        raise Graph6Error("trailing bytes after adjacency data", pos + need)

    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (vals[pos + k // 6] >> (5 - k % 6)) & 1:
                edges.append((i + 1, j + 1))
            k += 1
    return Graph.from_edges(n, edges)


_GEN = re.compile(r"^([kcw])(\d+)$")


def parse_graph_source(source: str) -> Graph:
    """Resolve ``kN``, ``cN``, ``wL`` or ``g6:<string>``."""
    if source.startswith("g6:"):
        return decode_graph6(source[3:])
    m = _GEN.match(source.strip().lower())
    if not m:
        raise GraphError(f"unknown graph source {source!r}; expected kN, cN, wL or g6:<string>")
    kind, size = m.group(1), int(m.group(2))
    return {"k": make_complete, "c": make_cycle, "w": make_wheel}[kind](size)
