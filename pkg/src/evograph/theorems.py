"""Closed-form attractivity conditions and a brute-force cross-validation harness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .analysis import (
    InvariantSet,
    basin,
    build_state_map,
    enumerate_attractors,
    is_attractor,
)
from .dynamics import System, UpdateOrder, state_str
from .game import (
    PayoffParams,
    Scenario,
    UtilityKind,
    classify,
    interior_threshold,
)
from .graph import Graph, is_k_regular, make_complete, make_cycle, make_wheel


class TheoremError(ValueError):
    pass


def _admissible(p: PayoffParams) -> None:
    cls = classify(p)
    if not cls.admissible:
        raise TheoremError(f"payoffs {p} are not admissible ({cls.reason})")


def _min_size(value: int, least: int, what: str) -> None:
    if value < least:
        raise TheoremError(f"{what} must be at least {least}, got {value}")


# -- predicates ---------------------------------------------------------------------

def fullD_Kn(p: PayoffParams, n: int) -> bool:
    _admissible(p)
    _min_size(n, 3, "n")
    a, b, c, d = p.as_tuple()
    return b < d or n < 1 + (c - d) / (b - d)


def fullC_Kn(p: PayoffParams, n: int) -> bool:
    _admissible(p)
    _min_size(n, 3, "n")
    a, b, c, d = p.as_tuple()
    return a > c and n > 1 + (a - b) / (a - c)


def fullD_kreg_sufficient(p: PayoffParams, k: int) -> bool:
    _admissible(p)
    _min_size(k, 2, "k")
    a, b, c, d = p.as_tuple()
    return k * (b - d) < c - d


def fullC_kreg_sufficient(p: PayoffParams, k: int) -> bool:
    _admissible(p)
    _min_size(k, 2, "k")
    a, b, c, d = p.as_tuple()
    return k * (a - c) > a - b


def coexistence_seq_Kn(p: PayoffParams, n: int) -> bool:
    """Interior threshold in ``[2, n - 2]`` with a positive slope denominator."""
    _admissible(p)
    _min_size(n, 3, "n")
    a, b, c, d = p.as_tuple()
    m = interior_threshold(p, n)
    return (c - a) + (b - d) > 0 and m is not None and 2 <= m <= n - 2


def nontrivial_sync_Kn(p: PayoffParams, n: int) -> bool:
    return fullD_Kn(p, n) or fullC_Kn(p, n)


def nontrivial_seq_Kn(p: PayoffParams, n: int) -> bool:
    return fullD_Kn(p, n) or fullC_Kn(p, n) or coexistence_seq_Kn(p, n)


def fullC_wheel(p: PayoffParams, l: int, kind: UtilityKind | str = UtilityKind.AGGREGATE) -> bool:
    _admissible(p)
    _min_size(l, 4, "l")
    a, b, c, d = p.as_tuple()
    if UtilityKind(kind) is UtilityKind.MEAN:
        return c < (2 * a + b) / 3
    return c < (2 * a + b) / (l - 1)


def fullD_wheel(p: PayoffParams, l: int, kind: UtilityKind | str = UtilityKind.AGGREGATE) -> bool:
    # A lone cooperator on the rim must also lose to the hub or its rim
    # neighbours; this only binds for aggregate utility when d < 0.
    _admissible(p)
    _min_size(l, 4, "l")
    a, b, c, d = p.as_tuple()
    if UtilityKind(kind) is UtilityKind.MEAN:
        return b < (2 * d + c) / 3
    rim = max((2 * d + c) / 3, ((l - 2) * d + c) / 3)
    return b < min((2 * d + c) / (l - 1), rim)


PREDICATES: dict[str, Callable] = {
    "fullD_Kn": fullD_Kn,
    "fullC_Kn": fullC_Kn,
    "fullD_kreg_sufficient": fullD_kreg_sufficient,
    "fullC_kreg_sufficient": fullC_kreg_sufficient,
    "coexistence_seq_Kn": coexistence_seq_Kn,
    "nontrivial_sync_Kn": nontrivial_sync_Kn,
    "nontrivial_seq_Kn": nontrivial_seq_Kn,
    "fullC_wheel": fullC_wheel,
    "fullD_wheel": fullD_wheel,
}


def predict(name: str, p: PayoffParams, size: int, kind: UtilityKind | str | None = None) -> bool:
    try:
        fn = PREDICATES[name]
    except KeyError:
        raise TheoremError(f"unknown predicate {name!r}") from None
    if name.endswith("_wheel"):
        return fn(p, size, kind or UtilityKind.AGGREGATE)
    return fn(p, size)


# -- parameter grids ----------------------------------------------------------------

def parse_range(text: str) -> list[int]:
    """``3..8`` or ``5`` or ``3,5,7``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty range {text!r}")
    return out


def grid_axis(lo: Fraction, hi: Fraction, cells: int) -> list[Fraction]:
    """Cell centres of ``cells`` equal slices of ``[lo, hi]``."""
    if cells < 1:
        raise ValueError("grid resolution must be positive")
    step = (Fraction(hi) - Fraction(lo)) / cells
    return [Fraction(lo) + step * (2 * k + 1) / 2 for k in range(cells)]


def normalized_grid(rows: int, cols: int, b_range=(-1, 1), c_range=(0, 2),
                    admissible_only: bool = True) -> list[PayoffParams]:
    """``(1, b, c, 0)`` on a rows x cols grid of cell centres (rows index b)."""
    pts = []
    for b in grid_axis(Fraction(b_range[0]), Fraction(b_range[1]), rows):
        for c in grid_axis(Fraction(c_range[0]), Fraction(c_range[1]), cols):
            p = PayoffParams(1, b, c, 0)
            if not admissible_only or classify(p).admissible:
                pts.append(p)
    return pts


# -- brute-force oracles ------------------------------------------------------------

def all_ones(n: int) -> int:
    return (1 << n) - 1


def homogeneous_attractive(system: System, cooperate: bool):
    target = all_ones(system.n) if cooperate else 0
    return is_attractor(system, InvariantSet.constant([target]))


def count_level_set(n: int, counts: Iterable[int]) -> frozenset:
    counts = set(counts)
    return frozenset(s for s in range(1 << n) if s.bit_count() in counts)


# -- harness ------------------------------------------------------------------------

@dataclass
class Finding:
    check: str
    params: PayoffParams
    size: int
    predicted: Optional[bool]
    observed: Optional[bool]
    witness: str = ""
    context: str = ""

    def line(self) -> str:
        pred = "" if self.predicted is None else f" predicted={self.predicted}"
        obs = "" if self.observed is None else f" observed={self.observed}"
        ctx = f" [{self.context}]" if self.context else ""
        wit = f" witness={self.witness}" if self.witness else ""
        return f"{self.check}: params=({self.params}) size={self.size}{ctx}{pred}{obs}{wit}"


@dataclass
class VerifyReport:
    theorem: str
    checks: dict = field(default_factory=dict)          # check label -> count
    disagreements: list = field(default_factory=list)   # Finding
    converse: list = field(default_factory=list)        # Finding, expected for one-way statements

    @property
    def passed(self) -> bool:
        return not self.disagreements

    def count(self, label: str) -> None:
        self.checks[label] = self.checks.get(label, 0) + 1

    def summary(self) -> str:
        total = sum(self.checks.values())
        status = "PASS" if self.passed else "FAIL"
        extra = f", {len(self.converse)} expected converse violation(s)" if self.converse else ""
        return (f"{status} {self.theorem}: {total} checks, "
                f"{len(self.disagreements)} disagreement(s){extra}")


def _witness_failure(rep, n: int) -> str:
    if rep.failure is None:
        return ""
    phase, s = rep.failure
    return f"start={state_str(s, n)}@phase{phase}"


def _iff(report: VerifyReport, label: str, p, size, predicted, rep, n, context="") -> None:
    report.count(label)
    observed = rep.is_attractor
    if predicted != observed:
        wit = _witness_failure(rep, n) if not observed else "attracting"
        report.disagreements.append(Finding(label, p, size, predicted, observed, wit, context))


def _sufficient(report: VerifyReport, label: str, p, size, predicted, rep, n, context="") -> None:
    report.count(label)
    observed = rep.is_attractor
    if predicted and not observed:
        report.disagreements.append(
            Finding(label, p, size, predicted, observed, _witness_failure(rep, n), context))
    elif observed and not predicted:
        report.converse.append(Finding(label, p, size, predicted, observed, "attracting", context))


@dataclass
class Sweep:
    points: Sequence[PayoffParams]
    sizes: Sequence[int] = ()
    graphs: Sequence[Graph] = ()
    kinds: Sequence[UtilityKind] = (UtilityKind.AGGREGATE, UtilityKind.MEAN)
    orders: Sequence[str] = ()


def _verify_complete(sweep: Sweep, name: str, cooperate: bool) -> VerifyReport:
    rep = VerifyReport(name)
    pred = fullC_Kn if cooperate else fullD_Kn
    label = "all-C attractor" if cooperate else "all-D attractor"
    for n in sweep.sizes or range(3, 9):
        g = make_complete(n)
        for p in sweep.points:
            s = System.build(g, p)
            _iff(rep, label, p, n, pred(p, n), homogeneous_attractive(s, cooperate), n)
    return rep


def _verify_regular(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("4.3")
    graphs = list(sweep.graphs) or [make_cycle(k) for k in range(4, 9)] + [make_complete(k) for k in range(4, 7)]
    for g in graphs:
        k = is_k_regular(g)
        if k is None:
            raise TheoremError(f"{g!r} is not regular")
        ctx = f"{k}-regular n={g.n}"
        for p in sweep.points:
            s = System.build(g, p)
            _sufficient(rep, "all-D attractor", p, k, fullD_kreg_sufficient(p, k),
                        homogeneous_attractive(s, False), g.n, ctx)
            _sufficient(rep, "all-C attractor", p, k, fullC_kreg_sufficient(p, k),
                        homogeneous_attractive(s, True), g.n, ctx)
    return rep


def _verify_orders(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("6.1")
    sizes = sweep.sizes or range(3, 9)
    for n in sizes:
        g = make_complete(n)
        seq = UpdateOrder.sequential(n)
        extra = [UpdateOrder.parse(o, n) for o in sweep.orders]
        if not sweep.orders and n >= 3:
            extra = [two_block_order(n)]
        for p in sweep.points:
            s = System.build(g, p, order=seq)
            for coop, pred in ((False, fullD_Kn), (True, fullC_Kn)):
                label = ("all-C" if coop else "all-D") + " attractor (seq)"
                _iff(rep, label, p, n, pred(p, n), homogeneous_attractive(s, coop), n)
            for order in extra:
                if not order.non_omitting:
                    raise TheoremError(f"order {order.describe()} omits vertices")
                so = System.build(g, p, order=order)
                for coop, pred in ((False, fullD_Kn), (True, fullC_Kn)):
                    label = ("all-C" if coop else "all-D") + " attractor (non-omitting)"
                    _sufficient(rep, label, p, n, pred(p, n), homogeneous_attractive(so, coop), n,
                                order.describe())
    return rep


def two_block_order(n: int) -> UpdateOrder:
    """Vertices 1,2 at even times, 3..n at odd times."""
    return UpdateOrder.periodic(n, [{1, 2}, set(range(3, n + 1))])


def _nontrivial_witness(summary, n: int) -> str:
    for r in summary.nontrivial:
        states = sorted(r.sections.states)
        shown = ",".join(state_str(s, n) for s in states[:6])
        more = ",..." if len(states) > 6 else ""
        return f"minimal attractor {{{shown}{more}}} ({len(states)} states)"
    return f"only the maximal invariant set ({summary.maximal.sections.size()} nodes)"


def _verify_sync_nontrivial(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("7.1")
    for n in sweep.sizes or range(3, 9):
        g = make_complete(n)
        full = all_ones(n)
        for p in sweep.points:
            smap = build_state_map(System.build(g, p))
            summary = enumerate_attractors(smap)
            predicted = nontrivial_sync_Kn(p, n)
            rep.count("nontrivial attractor")
            if predicted != summary.has_nontrivial:
                rep.disagreements.append(Finding(
                    "nontrivial attractor", p, n, predicted, summary.has_nontrivial,
                    _nontrivial_witness(summary, n), f"m*={interior_threshold(p, n)}"))
            if predicted:
                continue
            m = interior_threshold(p, n)
            every = range(1 << n)
            if m is None:
                # equal utilities everywhere: the map is the identity
                expected = {"basin(all-D)": {0}, "basin(all-C)": {full}}
            else:
                expected = {
                    "basin(all-D)": {0} | {s for s in every if m < s.bit_count() < n},
                    "basin(all-C)": {full} | {s for s in every if 0 < s.bit_count() < m},
                }
            sets = {"basin(all-D)": {0}, "basin(all-C)": {full}}
            if m is not None and m.denominator == 1:
                level = set(count_level_set(n, [int(m)]))
                sets["basin(M*)"] = level
                expected["basin(M*)"] = level
            for label, states in sets.items():
                rep.count(label)
                got = basin(smap, InvariantSet.constant(states))
                if got != expected[label]:
                    diff = sorted(got ^ expected[label])[:1]
                    rep.disagreements.append(Finding(
                        label, p, n, None, None, state_str(diff[0], n) if diff else "", f"m*={m}"))
                rep.count(label.replace("basin", "not attractor"))
                if is_attractor(smap, InvariantSet.constant(states)).is_attractor:
                    rep.disagreements.append(Finding(
                        label.replace("basin", "not attractor"), p, n, False, True, "", f"m*={m}"))
    return rep


def coexistence_set(p: PayoffParams, n: int) -> frozenset:
    """Configurations whose cooperator count is the floor or ceiling of m*."""
    m = interior_threshold(p, n)
    return count_level_set(n, {math.floor(m), math.ceil(m)})


def _verify_seq_nontrivial(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("7.2")
    for n in sweep.sizes or range(4, 8):
        g = make_complete(n)
        order = UpdateOrder.sequential(n)
        for p in sweep.points:
            smap = build_state_map(System.build(g, p, order=order))
            summary = enumerate_attractors(smap)
            predicted = nontrivial_seq_Kn(p, n)
            rep.count("nontrivial attractor")
            if predicted != summary.has_nontrivial:
                rep.disagreements.append(Finding(
                    "nontrivial attractor", p, n, predicted, summary.has_nontrivial,
                    _nontrivial_witness(summary, n), f"m*={interior_threshold(p, n)}"))
            if coexistence_seq_Kn(p, n) and not (fullD_Kn(p, n) or fullC_Kn(p, n)):
                rep.count("coexistence set attractor")
                A = InvariantSet.constant(coexistence_set(p, n), n)
                r = is_attractor(smap, A)
                if not r.is_attractor:
                    rep.disagreements.append(Finding(
                        "coexistence set attractor", p, n, True, False,
                        _witness_failure(r, n), f"m*={interior_threshold(p, n)}"))
    return rep


def _verify_wheel(sweep: Sweep, name: str, cooperate: bool) -> VerifyReport:
    rep = VerifyReport(name)
    pred = fullC_wheel if cooperate else fullD_wheel
    base = "all-C attractor" if cooperate else "all-D attractor"
    for kind in sweep.kinds:
        kind = UtilityKind(kind)
        for l in sweep.sizes or range(4, 11):
            g = make_wheel(l)
            for p in sweep.points:
                s = System.build(g, p, kind)
                _iff(rep, f"{base} ({kind.value})", p, l, pred(p, l, kind),
                     homogeneous_attractive(s, cooperate), l)
    return rep


THEOREMS: dict[str, tuple[str, Callable[[Sweep], VerifyReport]]] = {
    "fulld-complete": ("4.1", lambda sw: _verify_complete(sw, "4.1", False)),
    "fullc-complete": ("4.2", lambda sw: _verify_complete(sw, "4.2", True)),
    "regular-sufficient": ("4.3", _verify_regular),
    "update-orders": ("6.1", _verify_orders),
    "sync-nontrivial": ("7.1", _verify_sync_nontrivial),
    "seq-nontrivial": ("7.2", _verify_seq_nontrivial),
    "fullc-wheel": ("8.1", lambda sw: _verify_wheel(sw, "8.1", True)),
    "fulld-wheel": ("8.2", lambda sw: _verify_wheel(sw, "8.2", False)),
}
_ALIASES = {num: key for key, (num, _) in THEOREMS.items()}


def resolve_theorem(name: str) -> str:
    key = _ALIASES.get(name, name)
    if key not in THEOREMS:
        known = ", ".join(f"{k} ({v[0]})" for k, v in THEOREMS.items())
        raise TheoremError(f"unknown theorem {name!r}; known: {known}")
    return key


def verify_theorem(name: str, sweep: Sweep) -> VerifyReport:
    """Compare a closed-form condition with brute force over a sweep.

    Two-way statements must agree everywhere; for one-way statements only
    ``predicate => brute force`` is required and the converse cases are
    collected in ``report.converse``.
    """
    key = resolve_theorem(name)
    return THEOREMS[key][1](sweep)


# -- region codes for sweeps --------------------------------------------------------

CODE_LEGEND = {
    -1: "parameters not admissible",
    0: "neither homogeneous state attractive, no mixed attractor",
    1: "only all-D attractive",
    2: "only all-C attractive",
    3: "both all-D and all-C attractive",
    4: "attractive set of mixed fixed configurations (integer m*)",
    5: "attractive mixed cycles (non-integer m*)",
}


def region_code_predicted(p: PayoffParams, n: int, sequential: bool) -> int:
    if not classify(p).admissible:
        return -1
    D, C = fullD_Kn(p, n), fullC_Kn(p, n)
    if D or C:
        return 3 if D and C else (1 if D else 2)
    if sequential and coexistence_seq_Kn(p, n):
        m = interior_threshold(p, n)
        return 4 if m.denominator == 1 else 5
    return 0


def region_code_exact(p: PayoffParams, n: int, sequential: bool) -> int:
    """Region code from the brute-force attractor structure on K_n.

    A mixed attractor is a minimal attractor that contains neither
    homogeneous configuration.
    """
    if not classify(p).admissible:
        return -1
    g = make_complete(n)
    order = UpdateOrder.sequential(n) if sequential else UpdateOrder.synchronous(n)
    system = System.build(g, p, order=order)
    D = homogeneous_attractive(system, False).is_attractor
    C = homogeneous_attractive(system, True).is_attractor
    if D or C:
        return 3 if D and C else (1 if D else 2)
    smap = build_state_map(system)
    full = all_ones(n)
    for r in enumerate_attractors(smap).minimal:
        states = r.sections.states
        if r.trivial or 0 in states or full in states:
            continue
        if all(system.is_fixed(s) for s in states):
            return 4
        return 5
    return 0
