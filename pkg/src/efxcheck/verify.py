"""Exhaustive claim checkers producing re-verifiable verdict reports.

Every checker scans a finite universe completely (the 6561 allocations,
the 256 bundles, or pairs thereof) and returns a VerdictReport whose
witnesses a caller can re-evaluate standalone.  Allocation scans can be
partitioned over worker processes by counter range; partial results are
merged in range order, so reports are identical for any worker count.

Ordinal verdicts compare integer ranks.  Cardinal verdicts compare exact
values: coverage values are integers, and level values are compared
through their exponents, which is the exact order on powers of the
irrational base.  Floating point never decides anything here.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

from .cardinal import (
    ApproxFactor,
    CoverageProfile,
    LevelValue,
    SubadditiveProfile,
    build_coverage,
    build_subadditive,
    compare_scaled,
    level_power_decimal,
    level_sum_compare,
)
from .core import (
    ALL_BUNDLES,
    FULL_BUNDLE,
    GOODS,
    N_AGENTS,
    N_ALLOCATIONS,
    N_GOODS,
    Allocation,
    Bundle,
    allocation_from_counter,
    members,
    rotate_allocation,
    size_pattern,
)
from .ordinal import OrdinalProfile, builtin_profile

PROFILE_KINDS = ("ordinal", "subadditive", "coverage")

# Pair supports that remain possible for the first agent's two-good bundle
# once that agent is feasible and no other bundle is a singleton.
ALLOWED_FIRST_PAIR_LABELS = ("Ax", "Ay", "BC", "By", "Cy")

# Frozen results of the first exhaustive deficit computation (see
# compute_deficit_profile); the acceptance suite asserts stability.
GOLDEN_D_STAR = 1
GOLDEN_D_STAR_ARGMIN_COUNTER = 50
GOLDEN_D_STAR_ARGMIN_COUNT = 600
# Minimum deficit among allocations with no empty bundle.  An empty bundle
# violates the scaled condition for every positive factor, so this value,
# not d*, is the cutoff below which scaled-EFX allocations exist.
GOLDEN_MIN_DEFICIT_ALL_NONEMPTY = 1


@dataclass(frozen=True)
class Profile:
    """A verification subject: an ordinal profile, optionally realized
    by one of the two cardinal families."""

    kind: str
    ordinal: OrdinalProfile
    subadditive: SubadditiveProfile | None = None
    coverage: CoverageProfile | None = None

    def __post_init__(self) -> None:
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind == "subadditive" and self.subadditive is None:
            raise ValueError("subadditive profile payload missing")
        if self.kind == "coverage" and self.coverage is None:
            raise ValueError("coverage profile payload missing")


def ordinal_wrapper(profile: OrdinalProfile) -> Profile:
    return Profile(kind="ordinal", ordinal=profile)


@lru_cache(maxsize=None)
def builtin(kind: str) -> Profile:
    """Built-in verification subject of the given kind."""
    base = builtin_profile()
    if kind == "ordinal":
        return Profile(kind="ordinal", ordinal=base)
    if kind == "subadditive":
        return Profile(kind="subadditive", ordinal=base, subadditive=build_subadditive(base))
    if kind == "coverage":
        return Profile(kind="coverage", ordinal=base, coverage=build_coverage(base))
    raise ValueError(f"unknown profile kind {kind!r}")


@lru_cache(maxsize=None)
def profile_value_keys(profile: Profile) -> tuple[tuple[int, ...], ...]:
    """Per-agent 256-entry tables of exact order keys for the profile's kind.

    Keys preserve the exact value order: ranks for ordinal profiles,
    negated exponents (empty strictly below) for level values, and the
    integer coverage values themselves.
    """
    if profile.kind == "ordinal":
        return profile.ordinal.rank_tables
    if profile.kind == "coverage":
        return profile.coverage.value_tables  # type: ignore[union-attr]
    bottom = -(profile.ordinal.top_rank + 1)
    return tuple(
        tuple(bottom if e is None else -e for e in table)
        for table in profile.subadditive.exponent_tables  # type: ignore[union-attr]
    )


def display_value(profile: Profile, agent: int, bundle: Bundle) -> int | str:
    """Human-readable exact value used in witness records."""
    if profile.kind == "ordinal":
        return profile.ordinal.rank_tables[agent][bundle]
    if profile.kind == "coverage":
        return profile.coverage.value_tables[agent][bundle]  # type: ignore[union-attr]
    return str(profile.subadditive.value(agent, bundle))  # type: ignore[union-attr]


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class Witness:
    """One re-verifiable violation (or one claimed object, for existence
    claims).  Unused fields stay None."""

    allocation: tuple[tuple[int, ...], ...] | None = None
    agent_i: int | None = None
    agent_j: int | None = None
    good_g: int | None = None
    lhs: int | str | None = None
    rhs: int | str | None = None
    bundle_s: tuple[int, ...] | None = None
    bundle_t: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "allocation": None if self.allocation is None else [list(b) for b in self.allocation],
            "agent_i": self.agent_i,
            "agent_j": self.agent_j,
            "good_g": self.good_g,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "bundle_s": None if self.bundle_s is None else list(self.bundle_s),
            "bundle_t": None if self.bundle_t is None else list(self.bundle_t),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Witness":
        return cls(
            allocation=None
            if data.get("allocation") is None
            else tuple(tuple(b) for b in data["allocation"]),
            agent_i=data.get("agent_i"),
            agent_j=data.get("agent_j"),
            good_g=data.get("good_g"),
            lhs=data.get("lhs"),
            rhs=data.get("rhs"),
            bundle_s=None if data.get("bundle_s") is None else tuple(data["bundle_s"]),
            bundle_t=None if data.get("bundle_t") is None else tuple(data["bundle_t"]),
        )


@dataclass(frozen=True)
class VerdictReport:
    """Outcome of one exhaustive check.

    breakdown is a sorted tuple of (key, count) pairs so reports are
    hashable and serialize canonically.
    """

    claim: str
    universe: int
    checked: int
    verdict: str
    witnesses: tuple[Witness, ...] = ()
    breakdown: tuple[tuple[str, int], ...] = ()
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self, deterministic: bool = False) -> dict:
        return {
            "claim": self.claim,
            "universe": self.universe,
            "checked": self.checked,
            "verdict": self.verdict,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "breakdown": dict(self.breakdown),
            "elapsed_ms": 0 if deterministic else self.elapsed_ms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VerdictReport":
        return cls(
            claim=data["claim"],
            universe=data["universe"],
            checked=data["checked"],
            verdict=data["verdict"],
            witnesses=tuple(Witness.from_dict(w) for w in data["witnesses"]),
            breakdown=tuple(sorted(data["breakdown"].items())),
            elapsed_ms=data["elapsed_ms"],
        )


def _report(
    claim: str,
    universe: int,
    checked: int,
    passed: bool,
    witnesses: Iterable[Witness],
    breakdown: dict[str, int],
    started: float,
) -> VerdictReport:
    return VerdictReport(
        claim=claim,
        universe=universe,
        checked=checked,
        verdict="pass" if passed else "fail",
        witnesses=tuple(witnesses),
        breakdown=tuple(sorted(breakdown.items())),
        elapsed_ms=int((time.perf_counter() - started) * 1000),
    )


def _allocation_goods(allocation: Allocation) -> tuple[tuple[int, ...], ...]:
    return tuple(members(bundle) for bundle in allocation)


def _pattern_key(pattern: tuple[int, int, int]) -> str:
    return f"({pattern[0]},{pattern[1]},{pattern[2]})"


# ---------------------------------------------------------------------------
# Allocation-universe scanning


def _chunk_bounds(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total))
    base, extra = divmod(total, workers)
    bounds = []
    lo = 0
    for index in range(workers):
        hi = lo + base + (1 if index < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def _map_ranges(range_fn: Callable, payload, workers: int) -> list:
    """Apply a range function over the allocation universe.

    With one worker the call happens inline; otherwise counter ranges go
    to a process pool and results come back in range order, which keeps
    every downstream merge deterministic.
    """
    if workers <= 1:
        return [range_fn(payload, 0, N_ALLOCATIONS)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(range_fn, payload, lo, hi)
            for lo, hi in _chunk_bounds(N_ALLOCATIONS, workers)
        ]
        return [future.result() for future in futures]


def _agent_feasible(keys_i: tuple[int, ...], allocation: Allocation, agent: int) -> bool:
    own = keys_i[allocation[agent]]
    for j in range(N_AGENTS):
        if j == agent:
            continue
        bundle = allocation[j]
        m = bundle
        while m:
            low = m & -m
            if keys_i[bundle ^ low] > own:
                return False
            m ^= low
    return True


def _keys_efx(keys: tuple[tuple[int, ...], ...], allocation: Allocation) -> bool:
    return (
        _agent_feasible(keys[0], allocation, 0)
        and _agent_feasible(keys[1], allocation, 1)
        and _agent_feasible(keys[2], allocation, 2)
    )


# --- no-EFX ----------------------------------------------------------------


def _no_efx_range(payload, lo: int, hi: int):
    profile, limit = payload
    keys = profile_value_keys(profile)
    efx_count = 0
    witness_counters: list[int] = []
    feasible0: dict[str, int] = {}
    for counter in range(lo, hi):
        allocation = allocation_from_counter(counter)
        if not _agent_feasible(keys[0], allocation, 0):
            continue
        key = _pattern_key(size_pattern(allocation))
        feasible0[key] = feasible0.get(key, 0) + 1
        if _agent_feasible(keys[1], allocation, 1) and _agent_feasible(keys[2], allocation, 2):
            efx_count += 1
            if len(witness_counters) < limit:
                witness_counters.append(counter)
    return efx_count, witness_counters, feasible0


def verify_no_efx(profile: Profile, workers: int = 1, witness_limit: int = 10) -> VerdictReport:
    """Scan all 6561 allocations; pass means none is EFX.

    A witness is an EFX allocation (a counterexample to the claim).  The
    breakdown counts allocations feasible for agent 0 by size pattern and
    records the total EFX count.
    """
    started = time.perf_counter()
    partials = _map_ranges(_no_efx_range, (profile, witness_limit), workers)
    efx_count = sum(p[0] for p in partials)
    counters: list[int] = []
    for p in partials:
        counters.extend(p[1])
    breakdown: dict[str, int] = {"efx_allocations": efx_count}
    for p in partials:
        for key, count in p[2].items():
            feasible_key = f"feasible0{key}"
            breakdown[feasible_key] = breakdown.get(feasible_key, 0) + count
    witnesses = tuple(
        Witness(allocation=_allocation_goods(allocation_from_counter(c)))
        for c in counters[:witness_limit]
    )
    return _report(
        claim=f"no_efx_{profile.kind}",
        universe=N_ALLOCATIONS,
        checked=N_ALLOCATIONS,
        passed=efx_count == 0,
        witnesses=witnesses,
        breakdown=breakdown,
        started=started,
    )


# --- no scaled-EFX ----------------------------------------------------------


def _gap_verdicts(alpha: ApproxFactor, top_rank: int) -> dict[int, bool]:
    """verdicts[d] answers q**d >= alpha for every reachable exponent gap d."""
    span = top_rank
    return {
        d: compare_scaled(LevelValue.power(span + d), alpha, LevelValue.power(span))
        for d in range(-span, span + 1)
    }


def _alpha_efx_range(payload, lo: int, hi: int):
    profile, alpha, limit = payload
    tables = profile.subadditive.exponent_tables
    verdicts = _gap_verdicts(alpha, profile.ordinal.top_rank)
    holds_count = 0
    witness_counters: list[int] = []
    pattern_counts: dict[str, int] = {}
    for counter in range(lo, hi):
        allocation = allocation_from_counter(counter)
        holds = True
        for i in range(N_AGENTS):
            table = tables[i]
            own = table[allocation[i]]
            for j in range(N_AGENTS):
                if j == i:
                    continue
                bundle = allocation[j]
                m = bundle
                while m:
                    low = m & -m
                    other = table[bundle ^ low]
                    if other is not None and (own is None or not verdicts[own - other]):
                        holds = False
                        break
                    m ^= low
                if not holds:
                    break
            if not holds:
                break
        if holds:
            holds_count += 1
            key = _pattern_key(size_pattern(allocation))
            pattern_counts[key] = pattern_counts.get(key, 0) + 1
            if len(witness_counters) < limit:
                witness_counters.append(counter)
    return holds_count, witness_counters, pattern_counts


def verify_no_alpha_efx(
    profile: Profile, alpha: ApproxFactor, workers: int = 1, witness_limit: int = 10
) -> VerdictReport:
    """Pass when no allocation satisfies the alpha-scaled condition
    value(own) >= alpha * value(other minus any one good), decided exactly.

    An agent holding the empty bundle fails against every nonempty
    deletion; deleting the only good of a singleton leaves the empty
    bundle, which never violates.
    """
    if profile.kind != "subadditive":
        raise ValueError(f"scaled verification needs a subadditive profile, got {profile.kind}")
    started = time.perf_counter()
    partials = _map_ranges(_alpha_efx_range, (profile, alpha, witness_limit), workers)
    holds_count = sum(p[0] for p in partials)
    counters: list[int] = []
    for p in partials:
        counters.extend(p[1])
    breakdown: dict[str, int] = {"alpha_efx_allocations": holds_count}
    for p in partials:
        for key, count in p[2].items():
            scoped = f"alpha_efx{key}"
            breakdown[scoped] = breakdown.get(scoped, 0) + count
    witnesses = tuple(
        Witness(allocation=_allocation_goods(allocation_from_counter(c)))
        for c in counters[:witness_limit]
    )
    return _report(
        claim=f"no_alpha_efx({alpha})",
        universe=N_ALLOCATIONS,
        checked=N_ALLOCATIONS,
        passed=holds_count == 0,
        witnesses=witnesses,
        breakdown=breakdown,
        started=started,
    )


# --- deficit profile ---------------------------------------------------------


@dataclass(frozen=True)
class DeficitProfile:
    """Worst rank deficits per allocation, aggregated.

    deficits[counter] is the largest envy gap max(0, rank_i(other minus
    one good) - rank_i(own)) of the allocation with that counter; it is 0
    exactly when that allocation is EFX.  d_star is the minimum over all
    allocations, and min_deficit_all_nonempty restricts the minimum to
    allocations without empty bundles (an empty bundle violates any
    positive scale factor regardless of its deficit).
    """

    d_star: int
    argmin_counters: tuple[int, ...]
    argmin_count: int
    min_deficit_all_nonempty: int
    histogram: tuple[tuple[int, int], ...]
    deficits: tuple[int, ...]
    elapsed_ms: int = 0

    def deficit_of_counter(self, counter: int) -> int:
        return self.deficits[counter]

    def argmin_allocations(self) -> tuple[Allocation, ...]:
        return tuple(allocation_from_counter(c) for c in self.argmin_counters)

    def alpha_star_exact(self) -> str:
        return f"2^(-{self.d_star}/6)"

    def alpha_star_decimal(self, digits: int = 10) -> str:
        from fractions import Fraction

        return level_power_decimal(Fraction(self.d_star), digits)


def _deficit_range(payload, lo: int, hi: int):
    profile, limit = payload
    ranks = profile.ordinal.rank_tables
    best: int | None = None
    best_counters: list[int] = []
    best_count = 0
    best_nonempty: int | None = None
    deficits: list[int] = []
    for counter in range(lo, hi):
        allocation = allocation_from_counter(counter)
        worst = 0
        for i in range(N_AGENTS):
            table = ranks[i]
            own = table[allocation[i]]
            for j in range(N_AGENTS):
                if j == i:
                    continue
                bundle = allocation[j]
                m = bundle
                while m:
                    low = m & -m
                    gap = table[bundle ^ low] - own
                    if gap > worst:
                        worst = gap
                    m ^= low
        deficits.append(worst)
        if best is None or worst < best:
            best = worst
            best_counters = [counter]
            best_count = 1
        elif worst == best:
            best_count += 1
            if len(best_counters) < limit:
                best_counters.append(counter)
        if 0 not in allocation and (best_nonempty is None or worst < best_nonempty):
            best_nonempty = worst
    return best, best_counters, best_count, best_nonempty, deficits


def compute_deficit_profile(
    profile: Profile, workers: int = 1, argmin_limit: int = 10
) -> DeficitProfile:
    """Exact deficit of every allocation, with the global minimum and its
    attaining allocations in counter order."""
    started = time.perf_counter()
    partials = _map_ranges(_deficit_range, (profile, argmin_limit), workers)
    d_star = min(p[0] for p in partials)
    counters: list[int] = []
    count = 0
    for p in partials:
        if p[0] == d_star:
            counters.extend(p[1])
            count += p[2]
    deficits: list[int] = []
    for p in partials:
        deficits.extend(p[4])
    histogram: dict[int, int] = {}
    for value in deficits:
        histogram[value] = histogram.get(value, 0) + 1
    min_nonempty = min(p[3] for p in partials if p[3] is not None)
    return DeficitProfile(
        d_star=d_star,
        argmin_counters=tuple(counters[:argmin_limit]),
        argmin_count=count,
        min_deficit_all_nonempty=min_nonempty,
        histogram=tuple(sorted(histogram.items())),
        deficits=tuple(deficits),
        elapsed_ms=int((time.perf_counter() - started) * 1000),
    )


# ---------------------------------------------------------------------------
# Bundle-universe property checks


def check_monotone(
    key_table: tuple[int, ...],
    claim: str,
    display_table: tuple | None = None,
    witness_limit: int = 10,
) -> VerdictReport:
    """Adding any good never lowers the value (checked on order keys)."""
    started = time.perf_counter()
    display = display_table if display_table is not None else key_table
    witnesses: list[Witness] = []
    violations = 0
    checked = 0
    for bundle in ALL_BUNDLES:
        base = key_table[bundle]
        for g in GOODS:
            checked += 1
            extended = bundle | (1 << g)
            if key_table[extended] < base:
                violations += 1
                if len(witnesses) < witness_limit:
                    witnesses.append(
                        Witness(
                            bundle_s=members(bundle),
                            good_g=g,
                            lhs=display[extended],
                            rhs=display[bundle],
                        )
                    )
    return _report(claim, checked, checked, violations == 0, witnesses, {}, started)


def _level_str(exponent: int | None) -> str:
    return "0" if exponent is None else f"lambda^{exponent}"


@lru_cache(maxsize=None)
def _pair_sum_sign(e_first: int | None, e_second: int | None, e_union: int | None) -> int:
    values = [
        LevelValue.zero() if e is None else LevelValue.power(e)
        for e in (e_first, e_second)
    ]
    target = LevelValue.zero() if e_union is None else LevelValue.power(e_union)
    return level_sum_compare(values, target)


def check_subadditive(
    exponent_table: tuple[int | None, ...],
    claim: str,
    witness_limit: int = 10,
) -> VerdictReport:
    """value(S) + value(T) >= value(S union T) over all 65536 bundle pairs,
    decided by exact algebraic sums of level values."""
    started = time.perf_counter()
    witnesses: list[Witness] = []
    violations = 0
    checked = 0
    for first in ALL_BUNDLES:
        e_first = exponent_table[first]
        for second in ALL_BUNDLES:
            checked += 1
            sign = _pair_sum_sign(e_first, exponent_table[second], exponent_table[first | second])
            if sign < 0:
                violations += 1
                if len(witnesses) < witness_limit:
                    witnesses.append(
                        Witness(
                            bundle_s=members(first),
                            bundle_t=members(second),
                            lhs=f"{_level_str(e_first)} + {_level_str(exponent_table[second])}",
                            rhs=_level_str(exponent_table[first | second]),
                        )
                    )
    return _report(claim, checked, checked, violations == 0, witnesses, {}, started)


def check_submodular(
    value_table: tuple[int, ...],
    claim: str,
    witness_limit: int = 10,
) -> VerdictReport:
    """Diminishing returns: for every good g and nested S within T avoiding
    g, the marginal of g on S is at least its marginal on T.  Nested pairs
    are enumerated by submask iteration (8 * 3^7 ordered pairs)."""
    started = time.perf_counter()
    witnesses: list[Witness] = []
    violations = 0
    checked = 0
    for g in GOODS:
        bit = 1 << g
        rest = FULL_BUNDLE & ~bit
        t = rest
        while True:
            marginal_t = value_table[t | bit] - value_table[t]
            s = t
            while True:
                checked += 1
                if value_table[s | bit] - value_table[s] < marginal_t:
                    violations += 1
                    if len(witnesses) < witness_limit:
                        witnesses.append(
                            Witness(
                                bundle_s=members(s),
                                bundle_t=members(t),
                                good_g=g,
                                lhs=value_table[s | bit] - value_table[s],
                                rhs=marginal_t,
                            )
                        )
                if s == 0:
                    break
                s = (s - 1) & t
            if t == 0:
                break
            t = (t - 1) & rest
    return _report(claim, checked, checked, violations == 0, witnesses, {}, started)


def check_strict_consistency(
    rank_table: tuple[int, ...],
    key_table: tuple[int, ...],
    claim: str,
    display_table: tuple | None = None,
    witness_limit: int = 10,
) -> VerdictReport:
    """A strictly higher rank forces a strictly higher value, over all
    65536 ordered bundle pairs."""
    started = time.perf_counter()
    display = display_table if display_table is not None else key_table
    witnesses: list[Witness] = []
    violations = 0
    checked = 0
    for first in ALL_BUNDLES:
        rank_first = rank_table[first]
        key_first = key_table[first]
        for second in ALL_BUNDLES:
            checked += 1
            if rank_first > rank_table[second] and key_first <= key_table[second]:
                violations += 1
                if len(witnesses) < witness_limit:
                    witnesses.append(
                        Witness(
                            bundle_s=members(first),
                            bundle_t=members(second),
                            lhs=display[first],
                            rhs=display[second],
                        )
                    )
    return _report(claim, checked, checked, violations == 0, witnesses, {}, started)


def check_support_collapse(
    value_table: tuple,
    support_labels: tuple[str, ...],
    claim: str,
    witness_limit: int = 10,
) -> VerdictReport:
    """The value of a bundle depends only on its type support."""
    started = time.perf_counter()
    witnesses: list[Witness] = []
    violations = 0
    first_seen: dict[str, Bundle] = {}
    for bundle in ALL_BUNDLES:
        label = support_labels[bundle]
        if label not in first_seen:
            first_seen[label] = bundle
        else:
            representative = first_seen[label]
            if value_table[bundle] != value_table[representative]:
                violations += 1
                if len(witnesses) < witness_limit:
                    witnesses.append(
                        Witness(
                            bundle_s=members(representative),
                            bundle_t=members(bundle),
                            lhs=value_table[representative],
                            rhs=value_table[bundle],
                        )
                    )
    breakdown = {"support_classes": len(first_seen)}
    return _report(claim, len(ALL_BUNDLES), len(ALL_BUNDLES), violations == 0, witnesses, breakdown, started)


def check_normalized_levels(
    exponent_table: tuple[int | None, ...],
    claim: str,
    top_rank: int,
) -> VerdictReport:
    """Empty bundle worth zero, nonempty bundles positive and at most one
    (exponents non-negative); records the exponent range."""
    started = time.perf_counter()
    witnesses: list[Witness] = []
    if exponent_table[0] is not None:
        witnesses.append(Witness(bundle_s=(), lhs=_level_str(exponent_table[0]), rhs="0"))
    for bundle in ALL_BUNDLES[1:]:
        e = exponent_table[bundle]
        if e is None or e < 0:
            witnesses.append(Witness(bundle_s=members(bundle), lhs=_level_str(e), rhs="(0, 1]"))
            break
    exponents = [e for e in exponent_table[1:] if e is not None]
    breakdown = {
        "min_exponent": min(exponents, default=0),
        "max_exponent": max(exponents, default=0),
        "top_rank": top_rank,
    }
    return _report(claim, len(ALL_BUNDLES), len(ALL_BUNDLES), not witnesses, witnesses, breakdown, started)


def check_normalized_ints(value_table: tuple[int, ...], claim: str) -> VerdictReport:
    """Empty bundle worth zero and all values non-negative; records the
    nonempty value range."""
    started = time.perf_counter()
    witnesses: list[Witness] = []
    if value_table[0] != 0:
        witnesses.append(Witness(bundle_s=(), lhs=value_table[0], rhs=0))
    for bundle in ALL_BUNDLES[1:]:
        if value_table[bundle] < 0:
            witnesses.append(Witness(bundle_s=members(bundle), lhs=value_table[bundle], rhs=0))
            break
    breakdown = {
        "min_nonempty_value": min(value_table[1:]),
        "max_nonempty_value": max(value_table[1:]),
    }
    return _report(claim, len(ALL_BUNDLES), len(ALL_BUNDLES), not witnesses, witnesses, breakdown, started)


# ---------------------------------------------------------------------------
# Lemma-level allocation checks


def _first_pair_range(payload, lo: int, hi: int):
    profile, limit = payload
    keys = profile_value_keys(profile)
    labels = profile.ordinal.support_labels
    allowed = set(ALLOWED_FIRST_PAIR_LABELS)
    checked = 0
    label_counts: dict[str, int] = {}
    violation_count = 0
    violations: list[int] = []
    for counter in range(lo, hi):
        allocation = allocation_from_counter(counter)
        sizes = size_pattern(allocation)
        if sizes[0] != 2 or sizes[1] < 2 or sizes[2] < 2:
            continue
        checked += 1
        if not _agent_feasible(keys[0], allocation, 0):
            continue
        label = labels[allocation[0]]
        label_counts[label] = label_counts.get(label, 0) + 1
        if label not in allowed:
            violation_count += 1
            if len(violations) < limit:
                violations.append(counter)
    return checked, label_counts, violations, violation_count


def verify_lemma_first_pair(profile: Profile, workers: int = 1, witness_limit: int = 10) -> VerdictReport:
    """When the first bundle is a pair and no other bundle is smaller than
    a pair, agent-0 feasibility confines the pair's type support to
    Ax, Ay, BC, By, Cy."""
    started = time.perf_counter()
    partials = _map_ranges(_first_pair_range, (profile, witness_limit), workers)
    checked = sum(p[0] for p in partials)
    label_counts: dict[str, int] = {}
    for p in partials:
        for label, count in p[1].items():
            label_counts[label] = label_counts.get(label, 0) + count
    violations: list[int] = []
    for p in partials:
        violations.extend(p[2])
    violation_count = sum(p[3] for p in partials)
    witnesses = tuple(
        Witness(allocation=_allocation_goods(allocation_from_counter(c)))
        for c in violations[:witness_limit]
    )
    breakdown = {f"feasible_first_pair[{label}]": n for label, n in label_counts.items()}
    return _report(
        claim="first_pair_restriction",
        universe=checked,
        checked=checked,
        passed=violation_count == 0,
        witnesses=witnesses,
        breakdown=breakdown,
        started=started,
    )


def _size_props_range(payload, lo: int, hi: int):
    profile, limit = payload
    keys = profile_value_keys(profile)
    stats = {
        "small_first": [0, 0, []],
        "(2,2,4)": [0, 0, []],
        "(2,3,3)": [0, 0, []],
    }
    for counter in range(lo, hi):
        allocation = allocation_from_counter(counter)
        sizes = size_pattern(allocation)
        if sizes[0] <= 1:
            bucket = stats["small_first"]
        elif sizes == (2, 2, 4):
            bucket = stats["(2,2,4)"]
        elif sizes == (2, 3, 3):
            bucket = stats["(2,3,3)"]
        else:
            continue
        bucket[0] += 1
        if _keys_efx(keys, allocation):
            bucket[1] += 1
            if len(bucket[2]) < limit:
                bucket[2].append(counter)
    return stats


def _size_multiset_covered(sizes: tuple[int, int, int]) -> bool:
    return min(sizes) <= 1 or tuple(sorted(sizes)) in ((2, 2, 4), (2, 3, 3))


def verify_size_pattern_props(profile: Profile, workers: int = 1, witness_limit: int = 10) -> VerdictReport:
    """Three class checks in one pass: no EFX allocation has a bundle of
    size at most one in first position, none has ordered sizes (2,2,4),
    and none has (2,3,3).

    The class sizes are cross-checked against multinomial counts, and the
    rotation argument's completeness (every size multiset of 8 into 3
    parts is reachable from one of the three classes by rotation) is
    verified by enumerating all ordered size triples.
    """
    started = time.perf_counter()
    partials = _map_ranges(_size_props_range, (profile, witness_limit), workers)
    merged = {name: [0, 0, []] for name in ("small_first", "(2,2,4)", "(2,3,3)")}
    for p in partials:
        for name, (universe, efx, counters) in p.items():
            merged[name][0] += universe
            merged[name][1] += efx
            merged[name][2].extend(counters)

    factorial = math.factorial
    expected_universe = {
        "small_first": 2**N_GOODS + N_GOODS * 2 ** (N_GOODS - 1),
        "(2,2,4)": factorial(8) // (factorial(2) * factorial(2) * factorial(4)),
        "(2,3,3)": factorial(8) // (factorial(2) * factorial(3) * factorial(3)),
    }
    covered = all(
        _size_multiset_covered((a, b, 8 - a - b))
        for a in range(9)
        for b in range(9 - a)
    )

    breakdown: dict[str, int] = {"size_triples_covered": int(covered)}
    witnesses: list[Witness] = []
    passed = covered
    for name, (universe, efx, counters) in merged.items():
        breakdown[f"universe[{name}]"] = universe
        breakdown[f"efx[{name}]"] = efx
        if universe != expected_universe[name] or efx != 0:
            passed = False
        for counter in counters[: max(0, witness_limit - len(witnesses))]:
            witnesses.append(Witness(allocation=_allocation_goods(allocation_from_counter(counter))))
    total_universe = sum(merged[name][0] for name in merged)
    return _report(
        claim="size_pattern_propositions",
        universe=total_universe,
        checked=total_universe,
        passed=passed,
        witnesses=witnesses,
        breakdown=breakdown,
        started=started,
    )


def _cyclic_range(payload, lo: int, hi: int):
    profile, limit = payload
    keys = profile_value_keys(profile)
    perm = profile.ordinal.permutation
    efx_count = 0
    mismatch_count = 0
    mismatches: list[int] = []
    for counter in range(lo, hi):
        allocation = allocation_from_counter(counter)
        before = _keys_efx(keys, allocation)
        after = _keys_efx(keys, rotate_allocation(allocation, perm))
        if before:
            efx_count += 1
        if before != after:
            mismatch_count += 1
            if len(mismatches) < limit:
                mismatches.append(counter)
    return efx_count, mismatches, mismatch_count


def verify_cyclic_symmetry(profile: Profile, workers: int = 1, witness_limit: int = 10) -> VerdictReport:
    """EFX status is invariant under one cyclic relabeling step, for all
    6561 allocations, under the profile's own comparisons."""
    started = time.perf_counter()
    partials = _map_ranges(_cyclic_range, (profile, witness_limit), workers)
    efx_count = sum(p[0] for p in partials)
    mismatch_count = sum(p[2] for p in partials)
    mismatches: list[int] = []
    for p in partials:
        mismatches.extend(p[1])
    witnesses = tuple(
        Witness(
            allocation=_allocation_goods(allocation_from_counter(c)),
            lhs="EFX",
            rhs="not EFX after rotation",
        )
        for c in mismatches[:witness_limit]
    )
    return _report(
        claim=f"cyclic_symmetry({profile.kind})",
        universe=N_ALLOCATIONS,
        checked=N_ALLOCATIONS,
        passed=mismatch_count == 0,
        witnesses=witnesses,
        breakdown={"efx_allocations": efx_count},
        started=started,
    )


def _transfer_range(payload, lo: int, hi: int):
    ordinal_profile, cardinal_profile, limit = payload
    ranks = ordinal_profile.ordinal.rank_tables
    keys = profile_value_keys(cardinal_profile)
    triples_checked = 0
    violation_count = 0
    violations: list[tuple[int, int, int, int]] = []
    for counter in range(lo, hi):
        allocation = allocation_from_counter(counter)
        for i in range(N_AGENTS):
            rank_table = ranks[i]
            key_table = keys[i]
            own_rank = rank_table[allocation[i]]
            own_key = key_table[allocation[i]]
            for j in range(N_AGENTS):
                if j == i:
                    continue
                bundle = allocation[j]
                m = bundle
                while m:
                    low = m & -m
                    reduced = bundle ^ low
                    if rank_table[reduced] > own_rank:
                        triples_checked += 1
                        if key_table[reduced] <= own_key:
                            violation_count += 1
                            if len(violations) < limit:
                                violations.append((counter, i, j, low.bit_length() - 1))
                    m ^= low
    return triples_checked, violations, violation_count


def verify_transfer(
    ordinal_profile: Profile, cardinal_profile: Profile, workers: int = 1, witness_limit: int = 10
) -> VerdictReport:
    """Every ordinal strong-envy triple stays a strict value violation
    under the cardinal realization, over all allocations and triples."""
    if cardinal_profile.ordinal != ordinal_profile.ordinal:
        raise ValueError("cardinal profile must realize the given ordinal profile")
    started = time.perf_counter()
    partials = _map_ranges(_transfer_range, (ordinal_profile, cardinal_profile, witness_limit), workers)
    triples = sum(p[0] for p in partials)
    violation_count = sum(p[2] for p in partials)
    violations: list[tuple[int, int, int, int]] = []
    for p in partials:
        violations.extend(p[1])
    witnesses = tuple(
        Witness(
            allocation=_allocation_goods(allocation_from_counter(counter)),
            agent_i=i,
            agent_j=j,
            good_g=g,
            lhs=display_value(cardinal_profile, i, allocation_from_counter(counter)[i]),
            rhs=display_value(
                cardinal_profile, i, allocation_from_counter(counter)[j] ^ (1 << g)
            ),
        )
        for counter, i, j, g in violations[:witness_limit]
    )
    return _report(
        claim=f"strict_order_transfer({cardinal_profile.kind})",
        universe=N_ALLOCATIONS,
        checked=triples,
        passed=violation_count == 0,
        witnesses=witnesses,
        breakdown={"ordinal_witness_triples": triples},
        started=started,
    )


# ---------------------------------------------------------------------------
# Suites


def property_reports(profile: Profile, witness_limit: int = 10) -> list[VerdictReport]:
    """The applicable property suite for a profile kind."""
    reports: list[VerdictReport] = []
    ordinal = profile.ordinal
    if profile.kind == "ordinal":
        for agent in range(N_AGENTS):
            reports.append(
                check_monotone(
                    ordinal.rank_tables[agent],
                    f"monotone(rank[{agent}])",
                    witness_limit=witness_limit,
                )
            )
        for agent in range(N_AGENTS):
            reports.append(
                check_support_collapse(
                    ordinal.rank_tables[agent],
                    ordinal.support_labels,
                    f"support_collapse(rank[{agent}])",
                    witness_limit=witness_limit,
                )
            )
        return reports

    if profile.kind == "subadditive":
        sub = profile.subadditive
        assert sub is not None
        keys = profile_value_keys(profile)
        for agent in range(N_AGENTS):
            display = tuple(str(sub.value(agent, bundle)) for bundle in ALL_BUNDLES)
            reports.append(
                check_monotone(
                    keys[agent],
                    f"monotone(level_value[{agent}])",
                    display_table=display,
                    witness_limit=witness_limit,
                )
            )
            reports.append(
                check_subadditive(
                    sub.exponent_tables[agent],
                    f"subadditive(level_value[{agent}])",
                    witness_limit=witness_limit,
                )
            )
            reports.append(
                check_strict_consistency(
                    ordinal.rank_tables[agent],
                    keys[agent],
                    f"strict_consistency(rank[{agent}],level_value[{agent}])",
                    display_table=display,
                    witness_limit=witness_limit,
                )
            )
            reports.append(
                check_normalized_levels(
                    sub.exponent_tables[agent],
                    f"normalized(level_value[{agent}])",
                    ordinal.top_rank,
                )
            )
        return reports

    coverage = profile.coverage
    assert coverage is not None
    for agent in range(N_AGENTS):
        table = coverage.value_tables[agent]
        reports.append(
            check_monotone(table, f"monotone(coverage[{agent}])", witness_limit=witness_limit)
        )
        reports.append(
            check_submodular(table, f"submodular(coverage[{agent}])", witness_limit=witness_limit)
        )
        reports.append(
            check_strict_consistency(
                ordinal.rank_tables[agent],
                table,
                f"strict_consistency(rank[{agent}],coverage[{agent}])",
                witness_limit=witness_limit,
            )
        )
        reports.append(check_normalized_ints(table, f"normalized(coverage[{agent}])"))
        reports.append(
            check_support_collapse(
                table,
                ordinal.support_labels,
                f"support_collapse(coverage[{agent}])",
                witness_limit=witness_limit,
            )
        )
    return reports


def lemma_reports(workers: int = 1, witness_limit: int = 10) -> list[VerdictReport]:
    """Every lemma and proposition verifier over the built-in profiles."""
    ordinal = builtin("ordinal")
    reports = [
        verify_cyclic_symmetry(ordinal, workers, witness_limit),
        verify_cyclic_symmetry(builtin("subadditive"), workers, witness_limit),
        verify_cyclic_symmetry(builtin("coverage"), workers, witness_limit),
        verify_lemma_first_pair(ordinal, workers, witness_limit),
        verify_size_pattern_props(ordinal, workers, witness_limit),
        verify_transfer(ordinal, builtin("subadditive"), workers, witness_limit),
        verify_transfer(ordinal, builtin("coverage"), workers, witness_limit),
    ]
    return reports
