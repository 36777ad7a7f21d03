"""Update rules, update orders and the evolution of configurations.

A configuration is handled in two forms: a tuple of 0/1 (entry ``i - 1`` is
vertex ``i``, 1 = cooperate) for the public API, and an ``int`` bitmask with
bit ``i - 1`` for vertex ``i`` in the inner loops.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .game import Game, GameError, PayoffParams, UtilityKind
from .graph import Graph, neighbors_within


class CapacityError(RuntimeError):
    """A brute-force routine was asked to enumerate too large a state space."""


class UpdateRule(str, enum.Enum):
    IMITATION = "imitation"
    DEATH_BIRTH = "death-birth"
    BIRTH_DEATH = "birth-death"


# -- configurations -------------------------------------------------------------

def to_state(x: Sequence[int]) -> int:
    s = 0
    for i, v in enumerate(x):
        if v not in (0, 1):
            raise ValueError(f"configuration entries must be 0 or 1, got {v!r}")
        s |= v << i
    return s


def from_state(s: int, n: int) -> tuple[int, ...]:
    return tuple(s >> i & 1 for i in range(n))


def state_str(s: int, n: int) -> str:
    return "".join("1" if s >> i & 1 else "0" for i in range(n))


def parse_config(text: str, n: int) -> tuple[int, ...]:
    """``0110…``, ``all-C``, ``all-D``, ``single-C@i`` or ``single-D@i``."""
    t = text.strip()
    low = t.lower()
    if low == "all-c":
        return (1,) * n
    if low == "all-d":
        return (0,) * n
    m = re.fullmatch(r"single-([cd])@(\d+)", low)
    if m:
        i = int(m.group(2))
        if not 1 <= i <= n:
            raise ValueError(f"vertex {i} is not in 1..{n}")
        base, flip = (0, 1) if m.group(1) == "c" else (1, 0)
        return tuple(flip if v == i else base for v in range(1, n + 1))
    if re.fullmatch(r"[01]+", t):
        if len(t) != n:
            raise ValueError(f"configuration {t!r} has length {len(t)}, graph has {n} vertices")
        return tuple(int(ch) for ch in t)
    raise ValueError(f"cannot parse configuration {text!r}")


# -- update orders -----------------------------------------------------------------

@dataclass(frozen=True)
class UpdateOrder:
    """Periodic schedule: at time ``t`` the vertices ``blocks[t % period]`` update."""

    n: int
    blocks: tuple[frozenset, ...]
    name: str = "blocks"

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("update order needs at least one block")
        for blk in self.blocks:
            bad = [v for v in blk if not (isinstance(v, int) and 1 <= v <= self.n)]
            if bad:
                raise ValueError(f"update order labels {bad} are outside 1..{self.n}")

    @classmethod
    def synchronous(cls, n: int) -> "UpdateOrder":
        return cls(n, (frozenset(range(1, n + 1)),), "sync")

    @classmethod
    def sequential(cls, n: int) -> "UpdateOrder":
        # vertex (t mod n) + 1 at time t, so vertex 1 goes first
        return cls(n, tuple(frozenset({i}) for i in range(1, n + 1)), "seq")

    @classmethod
    def periodic(cls, n: int, blocks) -> "UpdateOrder":
        return cls(n, tuple(frozenset(b) for b in blocks), "blocks")

    @classmethod
    def parse(cls, text: str, n: int) -> "UpdateOrder":
        t = text.strip().lower()
        if t in ("sync", "synchronous"):
            return cls.synchronous(n)
        if t in ("seq", "sequential"):
            return cls.sequential(n)
        if t.startswith("blocks:"):
            blocks = []
            for part in t[len("blocks:"):].split(";"):
                part = part.strip()
                labels = [p.strip() for p in part.split(",")] if part else []
                try:
                    blocks.append(frozenset(int(v) for v in labels))
                except ValueError:
                    raise ValueError(f"bad vertex label in block {part!r}") from None
            return cls.periodic(n, blocks)
        raise ValueError(f"unknown update order {text!r}; expected sync, seq or blocks:<set;set;...>")

    @property
    def period(self) -> int:
        return len(self.blocks)

    def at(self, t: int) -> frozenset:
        return self.blocks[t % self.period]

    def mask_at(self, t: int) -> int:
        return sum(1 << (v - 1) for v in self.at(t))

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(self.mask_at(t) for t in range(self.period))

    @property
    def non_omitting(self) -> bool:
        return frozenset().union(*self.blocks) == frozenset(range(1, self.n + 1))

    @property
    def is_synchronous(self) -> bool:
        return all(len(b) == self.n for b in self.blocks)

    def describe(self) -> str:
        if self.name in ("sync", "seq"):
            return self.name
        return "blocks:" + ";".join(",".join(map(str, sorted(b))) for b in self.blocks)


# -- one-step maps ------------------------------------------------------------------

def candidate_set(game: Game, x: Sequence[int], i: int) -> frozenset:
    """States held by the best-earning vertices in the closed neighbourhood of ``i``."""
    u = game.utilities(x)
    hood = game.graph.neighbors(i) | {i}
    best = max(u[j - 1] for j in hood)
    return frozenset(x[j - 1] for j in hood if u[j - 1] == best)


def _step_state(game: Game, rule: UpdateRule, state: int, update_mask: int) -> int:
    u = game.scaled_utilities(state)
    if rule is UpdateRule.DEATH_BIRTH:
        low = min(u)
    elif rule is UpdateRule.BIRTH_DEATH:
        top = max(u)
    new = state
    for i in range(game.n):
        if not update_mask >> i & 1:
            continue
        if rule is UpdateRule.DEATH_BIRTH and u[i] != low:
            continue
        if rule is UpdateRule.BIRTH_DEATH and max(u[j] for j in game.nbr_idx[i]) != top:
            continue
        hood = game.closed_idx[i]
        best = max(u[j] for j in hood)
        seen = {state >> j & 1 for j in hood if u[j] == best}
        if len(seen) == 1:
            if seen.pop():
                new |= 1 << i
            else:
                new &= ~(1 << i)
    return new


def step_autonomous(game: Game, x: Sequence[int], rule: UpdateRule | str = UpdateRule.IMITATION) -> tuple[int, ...]:
    """All vertices update against the same pre-step configuration."""
    if len(x) != game.n:
        raise GameError(f"configuration has length {len(x)}, graph has {game.n} vertices")
    full = (1 << game.n) - 1
    return from_state(_step_state(game, UpdateRule(rule), to_state(x), full), game.n)


def step_nonautonomous(game: Game, x: Sequence[int], order: UpdateOrder, t: int,
                       rule: UpdateRule | str = UpdateRule.IMITATION) -> tuple[int, ...]:
    if len(x) != game.n:
        raise GameError(f"configuration has length {len(x)}, graph has {game.n} vertices")
    if t < 0:
        raise ValueError("time must be non-negative")
    return from_state(_step_state(game, UpdateRule(rule), to_state(x), order.mask_at(t)), game.n)


class System:
    """A game with an update rule and a periodic update order.

    The two-parameter process is ``evolve(t, t0, x)``; with a synchronous
    order it reduces to iterating a single map.
    """

    def __init__(self, game: Game, rule: UpdateRule | str = UpdateRule.IMITATION,
                 order: UpdateOrder | None = None):
        self.game = game
        self.rule = UpdateRule(rule)
        self.order = order if order is not None else UpdateOrder.synchronous(game.n)
        if self.order.n != game.n:
            raise ValueError("update order and graph have different vertex counts")
        self._masks = self.order.masks
        self.n = game.n

    @classmethod
    def build(cls, graph: Graph, params: PayoffParams, kind: UtilityKind | str = "aggregate",
              rule: UpdateRule | str = "imitation", order: UpdateOrder | str | None = None) -> "System":
        if isinstance(order, str):
            order = UpdateOrder.parse(order, graph.n)
        return cls(Game(graph, params, kind), rule, order)

    @property
    def period(self) -> int:
        return len(self._masks)

    def next_state(self, phase: int, state: int) -> int:
        return _step_state(self.game, self.rule, state, self._masks[phase % self.period])

    def step(self, t: int, x: Sequence[int]) -> tuple[int, ...]:
        return from_state(self.next_state(t, to_state(x)), self.n)

    def evolve(self, t: int, t0: int, x: Sequence[int]) -> tuple[int, ...]:
        if t < t0 or t0 < 0:
            raise ValueError(f"need t >= t0 >= 0, got t={t}, t0={t0}")
        s = to_state(x)
        for r in range(t0, t):
            s = self.next_state(r, s)
        return from_state(s, self.n)

    def is_fixed(self, state: int) -> bool:
        """True if no phase map moves ``state``."""
        return all(self.next_state(p, state) == state for p in range(self.period))

    def orbit(self, t0: int, state: int) -> Iterator[tuple[int, int]]:
        """Yields ``(t, state)`` forever, starting at ``(t0, state)``."""
        t = t0
        while True:
            yield t, state
            state = self.next_state(t, state)
            t += 1


@dataclass
class Trajectory:
    start_time: int
    states: list[int]
    n: int
    tag: str  # FIXED, CYCLE or HORIZON
    stop_time: int
    period: int | None = None
    cycle_start: int | None = None

    def lines(self) -> list[str]:
        return [state_str(s, self.n) for s in self.states]


def simulate(system: System, x: Sequence[int], horizon: int, t0: int = 0) -> Trajectory:
    """Iterate from ``x`` at ``t0`` for up to ``horizon`` steps.

    Stops at a configuration that every phase map fixes (FIXED) or when a
    ``(state, phase)`` pair repeats (CYCLE); otherwise runs out (HORIZON).
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    s = to_state(x)
    seen: dict[tuple[int, int], int] = {}
    states = []
    for t in range(t0, t0 + horizon + 1):
        key = (s, t % system.period)
        if key in seen:
            first = seen[key]
            return Trajectory(t0, states, system.n, "CYCLE", t, t - first, first)
        seen[key] = t
        states.append(s)
        if system.is_fixed(s):
            return Trajectory(t0, states, system.n, "FIXED", t)
        if t < t0 + horizon:
            s = system.next_state(t, s)
    return Trajectory(t0, states, system.n, "HORIZON", t0 + horizon)


# -- dependency radius ---------------------------------------------------------------

def dependency_radius_at_most(f: Callable[[tuple[int, ...]], Sequence], g: Graph, r: int,
                              max_n: int = 20) -> bool:
    """Brute-force check that ``f_i`` ignores every ``x_j`` with ``j`` farther than ``r`` from ``i``."""
    n = g.n
    if n > max_n:
        raise CapacityError(f"dependency check enumerates 2^{n} states; cap is n <= {max_n}")
    far = [[j for j in range(n) if (j + 1) not in neighbors_within(g, i + 1, r)] for i in range(n)]
    if not any(far):
        return True
    cache: dict[tuple[int, ...], Sequence] = {}

    def val(x):
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    for x in itertools.product((0, 1), repeat=n):
        fx = val(x)
        for i in range(n):
            for j in far[i]:
                if x[j]:
                    continue  # visit each unordered pair once
                y = x[:j] + (1,) + x[j + 1:]
                if val(y)[i] != fx[i]:
                    return False
    return True
