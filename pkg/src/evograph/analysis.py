"""Exhaustive analysis of the finite dynamics: tables, cycles, attractors, basins.

A periodic (period ``T``) system is analysed on the product space of
``(phase, state)`` pairs; the autonomous case is ``T == 1``. A node of the
product space is the integer ``phase * 2**n + state``.

Any set ``A`` with ``phi(A) == A`` is a union of periodic orbits, so candidate
attractors are unions of cycles. A union is attracting exactly when every
Hamming neighbour of each of its cycles drains into a cycle of the union,
which makes the minimal attractors the terminal strongly connected
components of the "neighbour drains into" relation between cycles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Protocol

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .dynamics import CapacityError, System, UpdateRule, state_str

DEFAULT_MAX_N = 20
DEFAULT_MAX_CYCLES = 16
_CHUNK = 1 << 12


class StepMap(Protocol):
    n: int

    @property
    def period(self) -> int: ...

    def next_state(self, phase: int, state: int) -> int: ...


def hamming(x: int, y: int) -> int:
    return (x ^ y).bit_count()


def dist(x: int, states: Iterable[int]) -> Optional[int]:
    """Hamming distance from ``x`` to a set; ``None`` for the empty set."""
    return min((hamming(x, y) for y in states), default=None)


def ball(states: Iterable[int], n: int) -> set[int]:
    """All states within Hamming distance 1 of ``states``."""
    out = set()
    for s in states:
        out.add(s)
        out.update(s ^ (1 << j) for j in range(n))
    return out


# -- tabulation ---------------------------------------------------------------------

def _tabulate(system: System) -> list[np.ndarray]:
    game = system.game
    n = game.n
    a, b, c, d = game.int_payoffs
    w = np.array(game.weights, dtype=object)
    bound = max(abs(v) for v in (a, b, c, d)) * max(game.degrees) * max(game.weights)
    dtype = np.int64 if bound < 2**60 else object

    adj = np.zeros((n, n), dtype=np.int64)
    for i, nb in enumerate(game.nbr_idx):
        adj[i, list(nb)] = 1
    closed = adj.astype(bool) | np.eye(n, dtype=bool)
    opened = adj.astype(bool)
    deg = adj.sum(axis=1)
    weights = w.astype(dtype)
    pow2 = (1 << np.arange(n, dtype=np.int64))
    masks = [np.array([m >> i & 1 for i in range(n)], dtype=bool) for m in system.order.masks]
    rule = system.rule
    low_sentinel = -(2**62) if dtype is np.int64 else None

    total = 1 << n
    tables = [np.empty(total, dtype=np.int64) for _ in masks]
    for start in range(0, total, _CHUNK):
        s = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        X = ((s[:, None] >> np.arange(n)) & 1).astype(bool)
        coop = X.astype(np.int64) @ adj
        defe = deg[None, :] - coop
        if dtype is object:
            coop, defe = coop.astype(object), defe.astype(object)
        u = np.where(X, a * coop + b * defe, c * coop + d * defe).astype(dtype) * weights[None, :]

        if dtype is object:
            best = np.array([[max(row[closed[i]]) for i in range(n)] for row in u], dtype=object)
        else:
            best = np.where(closed[None, :, :], u[:, None, :], low_sentinel).max(axis=2)
        at_best = closed[None, :, :] & (u[:, None, :] == best[:, :, None])
        has1 = (at_best & X[:, None, :]).any(axis=2)
        has0 = (at_best & ~X[:, None, :]).any(axis=2)
        movable = has1 ^ has0
        if rule is UpdateRule.DEATH_BIRTH:
            movable &= u == u.min(axis=1)[:, None]
        elif rule is UpdateRule.BIRTH_DEATH:
            if dtype is object:
                nbest = np.array([[max(row[opened[i]]) for i in range(n)] for row in u], dtype=object)
            else:
                nbest = np.where(opened[None, :, :], u[:, None, :], low_sentinel).max(axis=2)
            movable &= nbest == u.max(axis=1)[:, None]
        for table, m in zip(tables, masks):
            upd = movable & m[None, :]
            newX = np.where(upd, has1, X)
            table[start:start + len(s)] = newX.astype(np.int64) @ pow2
    return tables


@dataclass
class OrbitStructure:
    cycles: list[list[int]]          # product-space nodes in orbit order
    cycle_of: np.ndarray             # terminal cycle index of every node
    depth: np.ndarray                # steps until the terminal cycle is reached


class StateSpaceMap:
    """Tabulated one-step maps, one table per phase of the update order."""

    def __init__(self, n: int, tables: list[np.ndarray]):
        self.n = n
        self.tables = tuple(tables)
        self.size = 1 << n

    @property
    def period(self) -> int:
        return len(self.tables)

    def next_state(self, phase: int, state: int) -> int:
        return int(self.tables[phase % self.period][state])

    def node(self, phase: int, state: int) -> int:
        return (phase % self.period) * self.size + state

    def split(self, node: int) -> tuple[int, int]:
        return divmod(node, self.size)

    @cached_property
    def successor(self) -> np.ndarray:
        T, N = self.period, self.size
        return np.concatenate([((p + 1) % T) * N + self.tables[p] for p in range(T)])

    @cached_property
    def structure(self) -> OrbitStructure:
        nxt = self.successor.tolist()
        total = len(nxt)
        cycle_of = [-1] * total
        depth = [0] * total
        onpath = {}
        cycles: list[list[int]] = []
        for start in range(total):
            if cycle_of[start] >= 0:
                continue
            path = []
            v = start
            while cycle_of[v] < 0 and v not in onpath:
                onpath[v] = len(path)
                path.append(v)
                v = nxt[v]
            if cycle_of[v] < 0:
                # closed a new cycle inside the current path
                k = onpath[v]
                cyc = path[k:]
                cid = len(cycles)
                cycles.append(cyc)
                for node in cyc:
                    cycle_of[node] = cid
                path = path[:k]
            cid, dep = cycle_of[v], depth[v]
            for node in reversed(path):
                dep += 1
                cycle_of[node] = cid
                depth[node] = dep
            onpath.clear()
        return OrbitStructure(cycles, np.array(cycle_of), np.array(depth))


def build_state_map(system: System, max_n: int = DEFAULT_MAX_N) -> StateSpaceMap:
    if system.n > max_n:
        raise CapacityError(
            f"state table for n={system.n} needs 2^{system.n} entries; cap is n <= {max_n}")
    return StateSpaceMap(system.n, _tabulate(system))


# -- invariant sets -----------------------------------------------------------------

@dataclass(frozen=True)
class InvariantSet:
    """A family of state sets, one per phase (a single set when time-independent)."""

    sections: tuple[frozenset, ...]

    @classmethod
    def constant(cls, states: Iterable[int], period: int = 1) -> "InvariantSet":
        fs = frozenset(states)
        return cls((fs,) * period)

    @classmethod
    def from_nodes(cls, nodes: Iterable[int], smap: StateSpaceMap) -> "InvariantSet":
        secs = [set() for _ in range(smap.period)]
        for node in nodes:
            p, s = smap.split(node)
            secs[p].add(s)
        return cls(tuple(frozenset(x) for x in secs))

    @property
    def period(self) -> int:
        return len(self.sections)

    def at(self, phase: int) -> frozenset:
        return self.sections[phase % self.period]

    @property
    def time_independent(self) -> bool:
        return all(s == self.sections[0] for s in self.sections)

    @property
    def states(self) -> frozenset:
        return frozenset().union(*self.sections)

    def size(self) -> int:
        return sum(len(s) for s in self.sections)

    def nodes(self, smap: StateSpaceMap) -> set[int]:
        return {smap.node(p, s) for p, sec in enumerate(self.sections) for s in sec}

    def lifted(self, period: int) -> "InvariantSet":
        if period == self.period:
            return self
        if self.period != 1:
            raise ValueError(f"cannot lift a period-{self.period} family to period {period}")
        return InvariantSet.constant(self.sections[0], period)


@dataclass
class AttractorReport:
    sections: InvariantSet
    is_invariant: bool
    is_attractor: bool
    hitting_times: dict = field(default_factory=dict)   # (phase, state) -> steps
    failure: Optional[tuple[int, int]] = None            # (phase, state) that never enters
    non_invariant_phase: Optional[int] = None
    trivial: Optional[bool] = None
    minimal: Optional[bool] = None
    basin_size: Optional[int] = None
    cycle_lengths: Optional[list[int]] = None

    @property
    def max_hitting_time(self) -> int:
        return max(self.hitting_times.values(), default=0)


def check_invariance(f: StepMap, A: InvariantSet) -> Optional[int]:
    """First phase ``p`` with ``f_p(A(p)) != A(p+1)``, or ``None`` if invariant."""
    for p in range(A.period):
        image = {f.next_state(p, s) for s in A.at(p)}
        if image != set(A.at(p + 1)):
            return p
    return None


def is_attractor(f: StepMap, A: InvariantSet) -> AttractorReport:
    """Check invariance, then follow every orbit starting within distance 1 of ``A``.

    ``f`` may be a :class:`System` (states computed on demand, no table) or a
    :class:`StateSpaceMap`. ``A`` must have the system's period or be a
    constant family.
    """
    A = A.lifted(f.period)
    if A.period != f.period:
        raise ValueError(f"set has period {A.period}, system has period {f.period}")
    if not any(A.sections):
        raise ValueError("attractor candidate must be nonempty")
    bad = check_invariance(f, A)
    if bad is not None:
        return AttractorReport(A, False, False, non_invariant_phase=bad)

    T, n = f.period, f.n
    times: dict[tuple[int, int], int] = {}
    for t0 in range(T):
        for x in sorted(ball(A.at(t0), n)):
            seen = set()
            t, s = t0, x
            while s not in A.at(t):
                key = (s, t % T)
                if key in seen:
                    return AttractorReport(A, True, False, times, failure=(t0, x))
                seen.add(key)
                s = f.next_state(t % T, s)
                t += 1
            times[(t0, x)] = t - t0
    return AttractorReport(A, True, True, times)


def basin(smap: StateSpaceMap, A: InvariantSet):
    """Everything whose orbit enters ``A``.

    Returns a set of states for autonomous maps and of ``(phase, state)``
    pairs otherwise.
    """
    A = A.lifted(smap.period)
    if check_invariance(smap, A) is not None:
        raise ValueError("basin is only defined here for invariant sets")
    st = smap.structure
    cids = {int(st.cycle_of[v]) for v in A.nodes(smap)}
    hit = np.flatnonzero(np.isin(st.cycle_of, list(cids)))
    if smap.period == 1:
        return set(hit.tolist())
    return {smap.split(int(v)) for v in hit}


# -- enumeration --------------------------------------------------------------------

def fixed_points(smap: StateSpaceMap) -> list[int]:
    """States fixed by every phase map."""
    ok = np.ones(smap.size, dtype=bool)
    idx = np.arange(smap.size)
    for table in smap.tables:
        ok &= table == idx
    return np.flatnonzero(ok).tolist()


def periodic_orbits(smap: StateSpaceMap) -> list[list[tuple[int, int]]]:
    """All cycles of the product-space map as ``(phase, state)`` lists in orbit order."""
    return [[smap.split(v) for v in cyc] for cyc in smap.structure.cycles]


@dataclass
class AttractorSummary:
    minimal: list[AttractorReport]
    maximal: AttractorReport
    all_attractors: Optional[list[AttractorReport]] = None

    @property
    def nontrivial(self) -> list[AttractorReport]:
        return [r for r in self.minimal if not r.trivial]

    @property
    def has_nontrivial(self) -> bool:
        return bool(self.nontrivial)


def _drain_relation(smap: StateSpaceMap) -> list[set[int]]:
    st = smap.structure
    cof = st.cycle_of
    out = []
    for cyc in st.cycles:
        targets = set()
        for v in cyc:
            p, s = smap.split(v)
            base = p * smap.size
            for j in range(smap.n):
                targets.add(int(cof[base + (s ^ (1 << j))]))
        out.append(targets)
    return out


def _report_for(smap: StateSpaceMap, cids: Iterable[int], total_cycles: int,
                minimal: bool) -> AttractorReport:
    st = smap.structure
    cids = sorted(set(cids))
    nodes = [v for c in cids for v in st.cycles[c]]
    A = InvariantSet.from_nodes(nodes, smap)
    rep = is_attractor(smap, A)
    rep.trivial = len(cids) == total_cycles
    rep.minimal = minimal
    rep.basin_size = int(np.isin(st.cycle_of, cids).sum())
    rep.cycle_lengths = [len(st.cycles[c]) for c in cids]
    return rep


def enumerate_attractors(smap: StateSpaceMap, exhaustive: bool = False,
                         max_cycles: int = DEFAULT_MAX_CYCLES) -> AttractorSummary:
    """Minimal attractors and the maximal invariant set (union of all cycles).

    With ``exhaustive=True`` every attracting union of cycles is listed too;
    that needs at most ``max_cycles`` cycles.
    """
    st = smap.structure
    k = len(st.cycles)
    drains = _drain_relation(smap)
    rows, cols = [], []
    for c, targets in enumerate(drains):
        for t in targets:
            rows.append(c)
            cols.append(t)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(k, k))
    _, label = connected_components(graph, directed=True, connection="strong")
    comps: dict[int, list[int]] = {}
    for c, lab in enumerate(label.tolist()):
        comps.setdefault(lab, []).append(c)
    terminal = [members for lab, members in comps.items()
                if all(label[t] == lab for c in members for t in drains[c])]
    terminal.sort(key=lambda m: min(m))
    minimal = [_report_for(smap, m, k, True) for m in terminal]
    maximal = _report_for(smap, range(k), k, len(terminal) == 1 and len(terminal[0]) == k)

    everything = None
    if exhaustive:
        if k > max_cycles:
            raise CapacityError(f"{k} cycles exceed the subset-enumeration cap of {max_cycles}")
        everything = []
        for r in range(1, k + 1):
            for combo in itertools.combinations(range(k), r):
                chosen = set(combo)
                if all(drains[c] <= chosen for c in chosen):
                    is_min = any(set(m) == chosen for m in terminal)
                    everything.append(_report_for(smap, chosen, k, is_min))
    return AttractorSummary(minimal, maximal, everything)


def describe_set(A: InvariantSet, n: int, limit: int = 64) -> list[str]:
    lines = []
    secs = [A.sections[0]] if A.time_independent else A.sections
    for p, sec in enumerate(secs):
        shown = sorted(sec)[:limit]
        more = f" ... (+{len(sec) - limit})" if len(sec) > limit else ""
        tag = "all phases" if A.time_independent else f"phase {p}"
        lines.append(f"  {tag}: " + " ".join(state_str(s, n) for s in shown) + more)
    return lines
