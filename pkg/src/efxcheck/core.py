"""Fixed universe of goods, typed bundles, allocations, and enumerators.

Eight goods are indexed 0..7.  The first six form three two-good types
(A = {0, 3}, B = {1, 4}, C = {2, 5}); goods 6 and 7 are the one-good
types x and y.  A bundle is a bitmask over good indices, so membership,
union, and difference are single integer operations and the whole bundle
space is the range 0..255.  An allocation is an ordered triple of
pairwise-disjoint bundles covering all eight goods; the 3^8 = 6561
complete allocations are enumerated in base-3 counter order so every
scan is reproducible run to run.

All values here are immutable and safe to share between workers; a
counter range [lo, hi) identifies a slice of the allocation universe.
"""

from __future__ import annotations

from typing import Iterable, Iterator

Bundle = int
Allocation = tuple[int, int, int]

N_AGENTS = 3
N_GOODS = 8
GOODS: tuple[int, ...] = tuple(range(N_GOODS))
AGENTS: tuple[int, ...] = tuple(range(N_AGENTS))

EMPTY_BUNDLE: Bundle = 0
FULL_BUNDLE: Bundle = (1 << N_GOODS) - 1
ALL_BUNDLES: tuple[Bundle, ...] = tuple(range(1 << N_GOODS))
N_ALLOCATIONS: int = N_AGENTS**N_GOODS

TYPE_NAMES: tuple[str, ...] = ("A", "B", "C", "x", "y")
TYPE_OF_GOOD: tuple[str, ...] = ("A", "B", "C", "A", "B", "C", "x", "y")

# Cyclic relabeling (0 1 2)(3 4 5), fixing goods 6 and 7.  Agents 1 and 2
# evaluate bundles through its first and second powers.
RELABELING: tuple[int, ...] = (1, 2, 0, 4, 5, 3, 6, 7)
IDENTITY_PERMUTATION: tuple[int, ...] = tuple(range(N_GOODS))


def type_of(good: int) -> str:
    """Item type of a good under the built-in partition."""
    return TYPE_OF_GOOD[good]


def bundle_of(goods: Iterable[int]) -> Bundle:
    """Bitmask bundle holding the given good indices."""
    mask = 0
    for g in goods:
        if not 0 <= g < N_GOODS:
            raise ValueError(f"good index out of range: {g}")
        mask |= 1 << g
    return mask


def members(bundle: Bundle) -> tuple[int, ...]:
    """Good indices of a bundle in ascending order."""
    return tuple(g for g in GOODS if bundle >> g & 1)


def bundle_size(bundle: Bundle) -> int:
    return bundle.bit_count()


def support_of(bundle: Bundle) -> frozenset[str]:
    """Set of item types with at least one representative in the bundle."""
    return frozenset(TYPE_OF_GOOD[g] for g in GOODS if bundle >> g & 1)


def support_label(support: Iterable[str]) -> str:
    """Canonical string form of a type support, e.g. "ABx"; "∅" when empty."""
    present = set(support)
    label = "".join(t for t in TYPE_NAMES if t in present)
    return label or "∅"


def apply_permutation(perm: tuple[int, ...], bundle: Bundle) -> Bundle:
    """Elementwise image of a bundle under a permutation of the goods."""
    image = 0
    m = bundle
    while m:
        low = m & -m
        image |= 1 << perm[low.bit_length() - 1]
        m ^= low
    return image


def compose_permutations(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """Permutation mapping g to outer[inner[g]]."""
    return tuple(outer[inner[g]] for g in GOODS)


def permutation_power(perm: tuple[int, ...], exponent: int) -> tuple[int, ...]:
    result = IDENTITY_PERMUTATION
    for _ in range(exponent):
        result = compose_permutations(perm, result)
    return result


def invert_permutation(perm: tuple[int, ...]) -> tuple[int, ...]:
    inverse = [0] * N_GOODS
    for g, image in enumerate(perm):
        inverse[image] = g
    return tuple(inverse)


def is_permutation(perm: tuple[int, ...]) -> bool:
    return len(perm) == N_GOODS and sorted(perm) == list(GOODS)


def is_allocation(parts: tuple[int, ...]) -> bool:
    """True when the triple is pairwise disjoint and covers all goods."""
    if len(parts) != N_AGENTS:
        return False
    x0, x1, x2 = parts
    return (x0 | x1 | x2) == FULL_BUNDLE and (x0 & x1) == 0 and (x0 & x2) == 0 and (x1 & x2) == 0


def rotate_allocation(allocation: Allocation, perm: tuple[int, ...] = RELABELING) -> Allocation:
    """One cyclic step: each bundle moves to the previous agent and is relabeled.

    The image of (X0, X1, X2) is (perm(X1), perm(X2), perm(X0)); bundle
    sizes rotate with the bundles, and three applications give back the
    original allocation whenever perm cubes to the identity.
    """
    x0, x1, x2 = allocation
    return (
        apply_permutation(perm, x1),
        apply_permutation(perm, x2),
        apply_permutation(perm, x0),
    )


def size_pattern(allocation: Allocation) -> tuple[int, int, int]:
    return tuple(part.bit_count() for part in allocation)  # type: ignore[return-value]


def allocation_from_counter(counter: int) -> Allocation:
    """Allocation in which good g goes to the agent named by base-3 digit g."""
    if not 0 <= counter < N_ALLOCATIONS:
        raise ValueError(f"allocation counter out of range: {counter}")
    x0 = x1 = x2 = 0
    c = counter
    for g in GOODS:
        digit = c % 3
        c //= 3
        if digit == 0:
            x0 |= 1 << g
        elif digit == 1:
            x1 |= 1 << g
        else:
            x2 |= 1 << g
    return (x0, x1, x2)


def counter_of_allocation(allocation: Allocation) -> int:
    """Inverse of allocation_from_counter."""
    if not is_allocation(allocation):
        raise ValueError(f"not a complete allocation: {allocation}")
    counter = 0
    for g in reversed(GOODS):
        if allocation[0] >> g & 1:
            digit = 0
        elif allocation[1] >> g & 1:
            digit = 1
        else:
            digit = 2
        counter = counter * 3 + digit
    return counter


def enumerate_allocations() -> Iterator[Allocation]:
    """All 6561 complete allocations, exactly once, in counter order."""
    for counter in range(N_ALLOCATIONS):
        yield allocation_from_counter(counter)
