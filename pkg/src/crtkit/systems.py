"""Congruence systems and the generic (brute-force) CR tuple decision.

A tuple (theta_1..theta_k) of congruences has the CR property when every
system x = a_i mod theta_i whose targets satisfy the pairwise compatibility
condition (a_i, a_j) in theta_i v theta_j has a simultaneous solution.
Whether a tuple is CR depends only on the underlying partitions, so
everything here works on Partition values; Congruence inputs are unwrapped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import config
from .algebra import as_partition
from .errors import BudgetExceededError, InputError
from .partitions import Partition, quotient_partition


def _tuple_of_partitions(thetas) -> tuple[Partition, ...]:
    parts = tuple(as_partition(t) for t in thetas)
    if not parts:
        raise InputError("need at least one congruence")
    n = parts[0].n
    if any(p.n != n for p in parts):
        raise InputError("congruences live on ground sets of different sizes")
    return parts


@dataclass(frozen=True)
class CongruenceSystem:
    """A compatible system: targets a_i with (a_i,a_j) in theta_i v theta_j."""

    thetas: tuple[Partition, ...]
    targets: tuple[int, ...]

    @property
    def k(self):
        return len(self.thetas)


def make_system(thetas, targets) -> CongruenceSystem:
    parts = _tuple_of_partitions(thetas)
    targets = tuple(targets)
    if len(targets) != len(parts):
        raise InputError(
            f"{len(parts)} congruences but {len(targets)} targets"
        )
    n = parts[0].n
    for a in targets:
        if not 0 <= a < n:
            raise InputError(f"target {a} outside the ground set")
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if not parts[i].join(parts[j]).related(targets[i], targets[j]):
                raise InputError(
                    f"incompatible system: targets at coordinates {i + 1} and "
                    f"{j + 1} are not related modulo the join"
                )
    return CongruenceSystem(parts, targets)


def solve_system(system: CongruenceSystem) -> Optional[int]:
    """Least simultaneous solution, or None."""
    mask = -1
    for theta, a in zip(system.thetas, system.targets):
        mask &= theta.block_masks()[theta.labels[a]]
        if mask == 0:
            return None
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class CrVerdict:
    is_cr: bool
    witness: Optional[tuple[int, ...]]  # targets of the least unsolvable system
    checked: int  # candidate systems enumerated

    def __bool__(self):
        return self.is_cr


def brute_force_is_cr_tuple(thetas, budget: Optional[int] = None) -> CrVerdict:
    """Decide CR by enumerating candidate systems.

    Targets range over block minimums only: replacing each target by the
    least element of its block changes neither compatibility nor solvability,
    and it keeps the enumeration lexicographically least, so the witness
    reported for a failing tuple is the lex-least one over representatives.
    Raises BudgetExceededError after `budget` enumeration steps (default
    10^7, CRTKIT_BUDGET override).
    """
    parts = _tuple_of_partitions(thetas)
    limit = budget if budget is not None else config.budget(config.DEFAULT_TUPLE_BUDGET)
    k = len(parts)
    if k == 1:
        return CrVerdict(True, None, 0)
    reps = [p.representatives() for p in parts]
    masks = [p.block_masks() for p in parts]
    labels = [p.labels for p in parts]
    joins = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            joins[i][j] = parts[i].join(parts[j])

    chosen = [0] * k
    counter = 0

    def descend(depth: int, mask: int) -> Optional[tuple[int, ...]]:
        nonlocal counter
        for a in reps[depth]:
            counter += 1
            if counter > limit:
                raise BudgetExceededError(
                    f"candidate system budget {limit} exhausted",
                    checked=counter - 1,
                    budget=limit,
                )
            ok = True
            for j in range(depth):
                if not joins[j][depth].related(chosen[j], a):
                    ok = False
                    break
            if not ok:
                continue
            chosen[depth] = a
            new_mask = mask & masks[depth][labels[depth][a]]
            if depth + 1 == k:
                if new_mask == 0:
                    return tuple(chosen)
            else:
                hit = descend(depth + 1, new_mask)
                if hit is not None:
                    return hit
        return None

    witness = descend(0, -1)
    return CrVerdict(witness is None, witness, counter)


def is_cr_pair(theta1, theta2) -> bool:
    """For two congruences, CR is exactly permutability of the pair."""
    parts = _tuple_of_partitions([theta1, theta2])
    a, b = parts
    return a.compose(b) == b.compose(a)


def quotient_reduce(thetas) -> tuple[Partition, list[Partition]]:
    """Push the tuple down to the quotient by the meet of all members.

    Returns (delta, reduced tuple). The reduced tuple is CR exactly when the
    original is, and its members intersect to the identity. When delta is
    already the identity the original partitions are returned unchanged.
    """
    parts = _tuple_of_partitions(thetas)
    delta = parts[0]
    for p in parts[1:]:
        delta = delta.meet(p)
    if delta.num_blocks == delta.n:
        return delta, list(parts)
    return delta, [quotient_partition(p, delta) for p in parts]


def lift_witness(delta: Partition, witness) -> tuple[int, ...]:
    """Map a witness on the quotient by delta back to ground-set elements
    (least member of each delta class)."""
    reps = delta.representatives()
    return tuple(reps[c] for c in witness)
