"""Payoff parameters, scenario classification and utilities.

All arithmetic is exact. Payoffs are :class:`fractions.Fraction`; the hot
paths use an integer rescaling (:class:`Game`) that preserves every
comparison between utilities.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .graph import Graph


class GameError(ValueError):
    pass


class Scenario(str, enum.Enum):
    FC = "FC"  # full cooperation:   a > c > b > d
    HD = "HD"  # hawk and dove:      c > a > b > d
    SH = "SH"  # stag hunt:          a > c > d > b
    PD = "PD"  # prisoner's dilemma: c > a > d > b


class UtilityKind(str, enum.Enum):
    AGGREGATE = "aggregate"
    MEAN = "mean"


_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Exact conversion of ``0.88``, ``-3``, ``22/25``; exponents are rejected."""
    s = text.strip()
    if not _NUMBER.match(s) or ("/" in s and "." in s):
        raise GameError(f"not a decimal or fraction: {text!r}")
    if s.endswith("/0"):
        raise GameError(f"zero denominator in {text!r}")
    return Fraction(s)


@dataclass(frozen=True)
class PayoffParams:
    """Row-player payoffs: a = CC, b = CD, c = DC, d = DD."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if isinstance(v, float):
                v = Fraction(str(v))
            object.__setattr__(self, name, Fraction(v))

    @classmethod
    def parse(cls, text: str) -> "PayoffParams":
        parts = text.split(",")
        if len(parts) != 4:
            raise GameError(f"expected four comma-separated payoffs, got {text!r}")
        return cls(*(parse_rational(p) for p in parts))

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return ",".join(_fmt(v) for v in self.as_tuple())


def _fmt(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    # terminating decimals print as decimals, everything else as p/q
    den = v.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den != 1:
        return f"{v.numerator}/{v.denominator}"
    digits = 0
    while (v * 10**digits).denominator != 1:
        digits += 1
    scaled = abs(v.numerator * 10**digits // v.denominator)
    sign = "-" if v < 0 else ""
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class Classification:
    scenario: Optional[Scenario]
    reason: Optional[str] = None

    @property
    def admissible(self) -> bool:
        return self.scenario is not None


def classify(p: PayoffParams) -> Classification:
    a, b, c, d = p.as_tuple()
    if len({a, b, c, d}) < 4:
        return Classification(None, "A1: payoffs are not pairwise distinct")
    if not a > d:
        return Classification(None, "A2: requires a > d")
    if not c > b:
        return Classification(None, "A3: requires c > b")
    if not (a > b and c > d):
        return Classification(None, "A4: requires a > b and c > d")
    if not (a > 0 and c > 0):
        return Classification(None, "A5: requires a > 0 and c > 0")
    if a > c > b > d:
        return Classification(Scenario.FC)
    if c > a > b > d:
        return Classification(Scenario.HD)
    if a > c > d > b:
        return Classification(Scenario.SH)
    if c > a > d > b:
        return Classification(Scenario.PD)
    raise AssertionError(f"admissible payoffs {p} matched no scenario")


def is_admissible(p: PayoffParams) -> bool:
    return classify(p).admissible


def normalize(p: PayoffParams) -> PayoffParams:
    """Affine map sending a to 1 and d to 0."""
    if p.a == p.d:
        raise GameError("cannot normalize when a == d")
    s = p.a - p.d
    return PayoffParams(*((x - p.d) / s for x in p.as_tuple()))


def denormalize(q: PayoffParams, a, d) -> PayoffParams:
    a, d = Fraction(a), Fraction(d)
    if not a > d:
        raise GameError("denormalization needs a > d")
    return PayoffParams(*(d + (a - d) * x for x in q.as_tuple()))


def interior_threshold(p: PayoffParams, n: int) -> Optional[Fraction]:
    """Cooperator count on K_n at which both strategies earn the same."""
    a, b, c, d = p.as_tuple()
    den = (c - a) + (b - d)
    if den == 0:
        return None
    return (n * (b - d) - (a - d)) / den


def utility_gap_complete(p: PayoffParams, n: int, m: int) -> Fraction:
    """Cooperator minus defector aggregate utility on K_n with m cooperators."""
    a, b, c, d = p.as_tuple()
    return (m - 1) * a + (n - m) * b - m * c - (n - m - 1) * d


def _bits(x: Sequence[int], n: int) -> Sequence[int]:
    if len(x) != n:
        raise GameError(f"configuration has length {len(x)}, graph has {n} vertices")
    return x


def utility(g: Graph, p: PayoffParams, kind: UtilityKind, x: Sequence[int]) -> list[Fraction]:
    """Utilities of all vertices; entry ``i - 1`` belongs to vertex ``i``."""
    x = _bits(x, g.n)
    kind = UtilityKind(kind)
    out = []
    for i in g.vertices:
        nb = g.neighbors(i)
        if not nb and kind is UtilityKind.MEAN:
            raise GameError(f"vertex {i} is isolated; mean utility is undefined")
        coop = sum(x[j - 1] for j in nb)
        defe = len(nb) - coop
        if x[i - 1]:
            u = p.a * coop + p.b * defe
        else:
            u = p.c * coop + p.d * defe
        if kind is UtilityKind.MEAN:
            u = u / len(nb)
        out.append(Fraction(u))
    return out


class Game:
    """A graph plus payoffs and utility kind, rescaled to integers.

    ``scaled_utilities`` returns integers that are a fixed positive multiple
    of the true utilities, so argmax/argmin and ties are unchanged.
    """

    def __init__(self, graph: Graph, params: PayoffParams, kind: UtilityKind | str = UtilityKind.AGGREGATE):
        self.graph = graph
        self.params = params
        self.kind = UtilityKind(kind)
        isolated = [i for i in graph.vertices if not graph.neighbors(i)]
        if isolated:
            raise GameError(f"isolated vertices are not supported: {isolated}")
        n = graph.n
        self.n = n
        scale = math.lcm(*(v.denominator for v in params.as_tuple()))
        self.int_payoffs = tuple(int(v * scale) for v in params.as_tuple())
        degs = graph.degrees()
        if self.kind is UtilityKind.MEAN:
            common = math.lcm(*degs)
            self.weights = tuple(common // k for k in degs)
        else:
            self.weights = (1,) * n
        self.degrees = tuple(degs)
        # bit (i - 1) of a state integer is vertex i
        self.nbr_mask = tuple(sum(1 << (j - 1) for j in graph.neighbors(i)) for i in graph.vertices)
        self.closed_mask = tuple(m | (1 << (i - 1)) for i, m in enumerate(self.nbr_mask, 1))
        self.nbr_idx = tuple(tuple(j - 1 for j in sorted(graph.neighbors(i))) for i in graph.vertices)
        self.closed_idx = tuple(tuple(sorted(ix + (i,))) for i, ix in enumerate(self.nbr_idx))

    def scaled_utilities(self, state: int) -> list[int]:
        a, b, c, d = self.int_payoffs
        out = []
        for i in range(self.n):
            coop = (state & self.nbr_mask[i]).bit_count()
            defe = self.degrees[i] - coop
            if state >> i & 1:
                u = a * coop + b * defe
            else:
                u = c * coop + d * defe
            out.append(u * self.weights[i])
        return out

    def utilities(self, x: Sequence[int]) -> list[Fraction]:
        return utility(self.graph, self.params, self.kind, x)
