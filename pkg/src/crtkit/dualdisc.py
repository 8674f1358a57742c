"""CR tuples over algebras with a dual discriminator term, plus the cross
calculus describing their subpowers.

A cross (i a | j b) inside a product with a given shape is the set of tuples
x with x_i = a or x_j = b. Two crosses sharing exactly one coordinate, with
different constants there, compose: any tuple in both lies in the cross that
keeps their unshared coordinate constraints. The crosses containing a
subdirect subpower with full-or-cross pairwise projections are closed under
this composition and cut the subpower out exactly; a subset generates that
family iff it contains every irreducible member.

The tuple decider works on the congruence side: with Sigma the set of
meet-irreducible congruences above the meet of the tuple, CR holds iff every
two distinct members of Sigma either permute, or admit a third member of
Sigma below their composition, or sit jointly above some tuple member.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import (
    FiniteAlgebra,
    as_partition,
    meet_irreducible_congruences,
)
from .errors import InputError, StructureError
from .partitions import Partition


@dataclass(frozen=True, order=True)
class Cross:
    """Normalized: i < j; members are tuples with x_i = a or x_j = b."""

    i: int
    a: int
    j: int
    b: int


def make_cross(shape: Sequence[int], i: int, a: int, j: int, b: int) -> Cross:
    shape = tuple(shape)
    if i == j:
        raise InputError("a cross needs two distinct coordinates")
    if j < i:
        i, a, j, b = j, b, i, a
    if not (0 <= i < len(shape) and 0 <= j < len(shape)):
        raise InputError("coordinate index outside the shape")
    if not (0 <= a < shape[i] and 0 <= b < shape[j]):
        raise InputError("cross constant outside its domain")
    return Cross(i, a, j, b)


def cross_contains(cross: Cross, tup: Sequence[int]) -> bool:
    return tup[cross.i] == cross.a or tup[cross.j] == cross.b


def all_crosses(shape: Sequence[int]):
    shape = tuple(shape)
    for i in range(len(shape)):
        for j in range(i + 1, len(shape)):
            for a in range(shape[i]):
                for b in range(shape[j]):
                    yield Cross(i, a, j, b)


def crosses_containing(shape: Sequence[int], tuples) -> frozenset[Cross]:
    tuples = list(tuples)
    return frozenset(
        c for c in all_crosses(shape) if all(cross_contains(c, t) for t in tuples)
    )


def intersect_crosses(shape: Sequence[int], crosses) -> set[tuple[int, ...]]:
    crosses = list(crosses)
    return {
        t
        for t in itertools.product(*(range(s) for s in shape))
        if all(cross_contains(c, t) for c in crosses)
    }


def compose_crosses(c1: Cross, c2: Cross) -> Optional[Cross]:
    """The composed cross when the two share exactly one coordinate with
    different constants there; None otherwise."""
    pairs1 = {c1.i: c1.a, c1.j: c1.b}
    pairs2 = {c2.i: c2.a, c2.j: c2.b}
    shared = set(pairs1) & set(pairs2)
    if len(shared) != 1:
        return None
    s = shared.pop()
    if pairs1[s] == pairs2[s]:
        return None
    (i, a) = next((k, v) for k, v in pairs1.items() if k != s)
    (j, b) = next((k, v) for k, v in pairs2.items() if k != s)
    if j < i:
        i, a, j, b = j, b, i, a
    return Cross(i, a, j, b)


def cross_closure(crosses) -> frozenset[Cross]:
    """Least superset closed under composition of compatible members."""
    found = set(crosses)
    frontier = list(found)
    while frontier:
        c1 = frontier.pop()
        for c2 in list(found):
            for x, y in ((c1, c2), (c2, c1)):
                composed = compose_crosses(x, y)
                if composed is not None and composed not in found:
                    found.add(composed)
                    frontier.append(composed)
    return frozenset(found)


def irreducible_crosses(closed) -> frozenset[Cross]:
    """Members not regenerated by the rest; a subset generates the family
    iff it contains all of them."""
    closed = frozenset(closed)
    return frozenset(c for c in closed if c not in cross_closure(closed - {c}))


def generates(basis, closed) -> bool:
    closed = frozenset(closed)
    basis = frozenset(basis)
    return basis <= closed and irreducible_crosses(closed) <= basis


def projections_full_or_cross(shape: Sequence[int], tuples) -> bool:
    """The structure hypothesis: onto each coordinate the projection is full,
    and onto each coordinate pair it is full or the trace of one cross."""
    shape = tuple(shape)
    tuples = list(tuples)
    for i, size in enumerate(shape):
        if {t[i] for t in tuples} != set(range(size)):
            return False
    for i in range(len(shape)):
        for j in range(i + 1, len(shape)):
            proj = {(t[i], t[j]) for t in tuples}
            if len(proj) == shape[i] * shape[j]:
                continue
            traces = [
                {
                    (x, y)
                    for x in range(shape[i])
                    for y in range(shape[j])
                    if x == a or y == b
                }
                for a in range(shape[i])
                for b in range(shape[j])
            ]
            if proj not in traces:
                return False
    return True


# ---------------------------------------------------------------------------
# the congruence-tuple decider


def sigma_above(alg: FiniteAlgebra, delta: Partition) -> list[Partition]:
    """Meet-irreducible congruences lying above delta."""
    return [
        c.partition
        for c in meet_irreducible_congruences(alg)
        if delta.refines(c.partition)
    ]


def _relation_contains_partition(rel, part: Partition) -> bool:
    for bm in part.block_masks():
        mask = bm
        while mask:
            low = mask & -mask
            x = low.bit_length() - 1
            mask ^= low
            if rel.rows[x] & bm != bm:
                return False
    return True


@dataclass(frozen=True)
class DdVerdict:
    is_cr: bool
    failing_pair: Optional[tuple[Partition, Partition]] = None

    def __bool__(self):
        return self.is_cr


def is_cr_tuple_dualdisc(alg: FiniteAlgebra, thetas) -> DdVerdict:
    """Decide CR for congruences of an algebra with a dual discriminator term
    (caller-asserted; the congruence lattice must at least be distributive).

    Tuple members must be intersections of meet-irreducible congruences,
    which certifies them as congruences without touching operation tables.
    """
    parts = [as_partition(t) for t in thetas]
    if not parts:
        raise InputError("need at least one congruence")
    if any(p.n != alg.size for p in parts):
        raise InputError("partition size does not match the algebra")
    mi = [c.partition for c in meet_irreducible_congruences(alg)]
    for pos, part in enumerate(parts):
        above = [m for m in mi if part.refines(m)]
        meet = Partition.total(part.n)
        for m in above:
            meet = meet.meet(m)
        if meet != part:
            raise StructureError(
                f"tuple member {pos + 1} is not a congruence of {alg.name}"
            )
    delta = parts[0]
    for p in parts[1:]:
        delta = delta.meet(p)
    sigma = [m for m in mi if delta.refines(m)]
    for lam, mu in itertools.combinations(range(len(sigma)), 2):
        fwd = sigma[lam].compose(sigma[mu])
        bwd = sigma[mu].compose(sigma[lam])
        if fwd == bwd:
            continue
        if any(
            s != sigma[lam] and s != sigma[mu]
            and _relation_contains_partition(fwd, s)
            for s in sigma
        ):
            continue
        lm = sigma[lam].meet(sigma[mu])
        if any(p.refines(lm) for p in parts):
            continue
        return DdVerdict(False, (sigma[lam], sigma[mu]))
    return DdVerdict(True)
