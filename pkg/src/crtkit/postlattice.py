"""Classification of two-element algebras and routing of congruence tuples.

A ternary operation on {0,1} is stored as an 8-bit table whose bit
4x + 2y + z holds the value at (x, y, z). The ternary part of the term
clone is the closure of the three projections (plus the constant tables
contributed by nullary operations) under composition with the basic
operations; membership of the three special tables

    s(x,y,z) = x + y + z (mod 2)
    n(x,y,z) = (x and y) or z
    m(x,y,z) = majority(x,y,z)

drives the classification. The n case also accepts the 0-1 relabeling
of n, the table (x or y) and z: the two generate isomorphic algebras,
so every decision procedure for one serves the other, and clones such
as the one generated by x and (y or z) contain only the relabeled
form. By Post's description of the clones on a two-element set, an
algebra whose ternary clone misses s, m and both forms of n has only
essentially unary basic operations, or only operations of the join
form c or x_{i_1} or ... or x_{i_r} (dually, only meet forms).
classify() picks the first matching case in a fixed priority order;
route_decide() then hands a congruence tuple to the decision procedure
that the case supports, falling back to brute force with a complexity
warning for the last two cases.

The closure itself runs bitwise over numpy arrays (all composition
results of one basic operation against every tuple of reached tables
are produced in a single vectorized round), while witness terms come
from a separate breadth-first search that records a smallest-depth term
for each table it reaches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import (
    App,
    FiniteAlgebra,
    Operation,
    Term,
    Var,
    as_partition,
    congruence_violation,
    eval_term,
    reduct,
)
from .dualdisc import is_cr_tuple_dualdisc
from .errors import ClassificationError, InputError, PreconditionError, StructureError
from .nearlattice import is_cr_tuple_nearlattice, make_view
from .systems import brute_force_is_cr_tuple
from .vectorspace import congruence_to_subspace, coordinatize, is_cr_tuple_vs, vs_instance

PROJ_X = 0xF0  # bit 4x+2y+z carries x
PROJ_Y = 0xCC
PROJ_Z = 0xAA

S_TABLE = 0x96
N_TABLE = 0xEA
N_DUAL_TABLE = 0xA8  # (x or y) and z, the 0-1 relabeling of n
M_TABLE = 0xE8

HAS_S = "HasS"
HAS_N = "HasN"
HAS_M = "HasM"
ESSENTIALLY_UNARY = "EssentiallyUnary"
SEMILATTICE_FAMILY = "SemilatticeFamily"

_PRIORITY = (
    (HAS_S, S_TABLE),
    (HAS_N, N_TABLE),
    (HAS_N, N_DUAL_TABLE),
    (HAS_M, M_TABLE),
)


def _check_two(alg2: FiniteAlgebra):
    if alg2.size != 2:
        raise InputError(f"{alg2.name} has {alg2.size} elements, need exactly 2")


def table_of_term(alg2: FiniteAlgebra, term: Term) -> int:
    """8-bit table of a term read as a ternary operation on {0,1}."""
    _check_two(alg2)
    out = 0
    for p in range(8):
        out |= eval_term(alg2, term, (p >> 2 & 1, p >> 1 & 1, p & 1)) << p
    return out


def _compose_bits(op: Operation, args: tuple[int, ...]) -> int:
    """Table of op applied to ternary tables, one output bit at a time."""
    out = 0
    for p in range(8):
        idx = 0
        for g in args:
            idx = idx * 2 + (g >> p & 1)
        out |= (op.table[idx] & 1) << p
    return out


def _seed_tables(alg2: FiniteAlgebra) -> list[int]:
    seeds = [PROJ_X, PROJ_Y, PROJ_Z]
    for op in alg2.ops:
        if op.arity == 0:
            seeds.append(0xFF if op.table[0] else 0x00)
    return seeds


# ---------------------------------------------------------------------------
# fast closure (tables only)


def _compose_round(op: Operation, R: np.ndarray) -> np.ndarray:
    """All compositions of one operation against every tuple over R."""
    t = op.table
    if op.arity == 1:
        f0 = 0xFF if t[0] else 0
        f1 = 0xFF if t[1] else 0
        return (f0 & ~R & 0xFF) | (f1 & R)
    if op.arity == 2:
        G, H = R[:, None], R[None, :]
        tarr = np.array(t, dtype=np.int64)
        out = np.zeros((R.size, R.size), dtype=np.int64)
        for p in range(8):
            out |= (tarr[(G >> p & 1) << 1 | (H >> p & 1)] & 1) << p
        return out
    # arity 3: with g, h fixed, r -> op(g, h, r) acts bitwise as
    # a XOR ((a XOR b) AND r), where bit p of a is op(g_p, h_p, 0)
    # and bit p of b is op(g_p, h_p, 1)
    G, H = R[:, None], R[None, :]
    tarr = np.array(t, dtype=np.int64)
    A = np.zeros((R.size, R.size), dtype=np.int64)
    B = np.zeros_like(A)
    for p in range(8):
        idx = (G >> p & 1) << 2 | (H >> p & 1) << 1
        A |= (tarr[idx] & 1) << p
        B |= (tarr[idx | 1] & 1) << p
    A8 = A.astype(np.uint8)
    X8 = (A ^ B).astype(np.uint8)
    return A8[:, :, None] ^ (X8[:, :, None] & R.astype(np.uint8)[None, None, :])


def _scatter_round(op: Operation, R: np.ndarray, reached: np.ndarray, stop) -> None:
    """Mark every composition of one operation over R, stopping early when
    `stop` turns up; ternary rounds scatter in slabs so the stop check can
    fire before the full r^3 block is built."""
    if op.arity != 3 or R.size < 64 or stop is None:
        reached[_compose_round(op, R).ravel()] = True
        return
    t = op.table
    G, H = R[:, None], R[None, :]
    tarr = np.array(t, dtype=np.int64)
    A = np.zeros((R.size, R.size), dtype=np.int64)
    B = np.zeros_like(A)
    for p in range(8):
        idx = (G >> p & 1) << 2 | (H >> p & 1) << 1
        A |= (tarr[idx] & 1) << p
        B |= (tarr[idx | 1] & 1) << p
    A8 = A.astype(np.uint8)
    X8 = (A ^ B).astype(np.uint8)
    R8 = R.astype(np.uint8)[None, None, :]
    for lo in range(0, R.size, 16):
        slab = A8[lo : lo + 16, :, None] ^ (X8[lo : lo + 16, :, None] & R8)
        reached[slab.ravel()] = True
        if reached[stop]:
            return


def _closure_fast(alg2: FiniteAlgebra, stop: Optional[int] = None) -> frozenset[int]:
    """Tables of the ternary clone fragment, as a fixpoint of the rounds.

    With `stop`, the search may return as soon as that table is reached;
    the result is then a subset of the clone containing `stop`. A result
    not containing `stop` is always the complete fragment.
    """
    reached = np.zeros(256, dtype=bool)
    for t in _seed_tables(alg2):
        reached[t] = True
    ops = [op for op in alg2.ops if op.arity >= 1]
    while stop is None or not reached[stop]:
        R = np.flatnonzero(reached).astype(np.int64)
        if R.size == 256:
            break
        for op in ops:
            _scatter_round(op, R, reached, stop)
            if stop is not None and reached[stop]:
                break
        else:
            if int(reached.sum()) == R.size:
                break
            continue
        break
    return frozenset(int(t) for t in np.flatnonzero(reached))


def _closure_tables(alg2: FiniteAlgebra, stop: Optional[int] = None) -> frozenset[int]:
    if all(op.arity <= 3 for op in alg2.ops):
        return _closure_fast(alg2, stop)
    return frozenset(ternary_clone(alg2))


# ---------------------------------------------------------------------------
# witnessed closure


def _witness_bfs(alg2: FiniteAlgebra, target: Optional[int]):
    """Breadth-first closure keyed by table; the round number is the term
    depth, so the first term recorded for a table has smallest depth.

    Rounds recompose every tuple over the tables known at round start (a
    table composable from earlier rounds was already found then, so new
    tables really have the current depth). Operations of arity up to 3 run
    through the vectorized round; a new table's witness is decoded from the
    first flat index at which its value occurs."""
    witness: dict[int, Term] = {}
    order: list[int] = []  # discovery order

    def add(tab: int, term: Term) -> bool:
        if tab in witness:
            return False
        witness[tab] = term
        order.append(tab)
        return True

    add(PROJ_X, Var(0))
    add(PROJ_Y, Var(1))
    add(PROJ_Z, Var(2))
    for op in alg2.ops:
        if op.arity == 0:
            add(0xFF if op.table[0] else 0x00, App(op.name))
    if target is not None and target in witness:
        return witness, witness[target]
    fast_ops = [op for op in alg2.ops if 1 <= op.arity <= 3]
    slow_ops = [op for op in alg2.ops if op.arity > 3]
    changed = True
    while changed and len(witness) < 256:
        changed = False
        R = np.array(order, dtype=np.int64)
        terms = [witness[t] for t in order]
        for op in fast_ops:
            flat = _compose_round(op, R).ravel()
            counts = np.bincount(flat, minlength=256)
            if all(v in witness for v in np.flatnonzero(counts).tolist()):
                continue
            uniq, first = np.unique(flat, return_index=True)
            for val, pos in zip(uniq.tolist(), first.tolist()):
                if val in witness:
                    continue
                digits = []
                for _ in range(op.arity):  # last axis varies fastest
                    digits.append(pos % R.size)
                    pos //= R.size
                args = tuple(terms[i] for i in reversed(digits))
                add(val, App(op.name, args))
                changed = True
                if target is not None and val == target:
                    return witness, witness[val]
        for op in slow_ops:
            for combo in itertools.product(order[: len(terms)], repeat=op.arity):
                tab = _compose_bits(op, combo)
                if add(tab, App(op.name, tuple(witness[g] for g in combo))):
                    changed = True
                    if target is not None and tab == target:
                        return witness, witness[tab]
    return witness, None


def ternary_clone(alg2: FiniteAlgebra) -> dict[int, Term]:
    """The ternary part of the term clone, each table mapped to a
    smallest-depth witness term. At most 256 tables, so this terminates."""
    _check_two(alg2)
    return _witness_bfs(alg2, None)[0]


def _witness_term(alg2: FiniteAlgebra, target: int) -> Term:
    _, term = _witness_bfs(alg2, target)
    if term is None:
        raise StructureError(
            f"table {target:#04x} vanished from the clone of {alg2.name} "
            "during witness reconstruction"
        )
    return term


# ---------------------------------------------------------------------------
# the five-way classification


@dataclass(frozen=True)
class Classification:
    tag: str
    witness: Optional[Term] = None
    table: Optional[int] = None


def _essential_positions(op: Operation) -> int:
    count = 0
    for i in range(op.arity):
        stride = 1 << (op.arity - 1 - i)
        if any(
            op.table[x] != op.table[x | stride]
            for x in range(1 << op.arity)
            if not x & stride
        ):
            count += 1
    return count


def _is_join_form(op: Operation) -> bool:
    """Does the table equal c or x_{i_1} or ... for some c and positions?"""
    m = op.arity
    for c in (0, 1):
        for smask in range(1 << m):
            if all(
                op.table[x]
                == (c | int(any(smask >> i & 1 and x >> (m - 1 - i) & 1 for i in range(m))))
                for x in range(1 << m)
            ):
                return True
    return False


def _is_meet_form(op: Operation) -> bool:
    m = op.arity
    for c in (0, 1):
        for smask in range(1 << m):
            if all(
                op.table[x]
                == (c & int(all(x >> (m - 1 - i) & 1 for i in range(m) if smask >> i & 1)))
                for x in range(1 << m)
            ):
                return True
    return False


def classify(alg2: FiniteAlgebra, with_witness: bool = True) -> Classification:
    """First matching case, in order: s in the clone, n in the clone (either
    form, straight before relabeled), m in the clone, all basic operations
    essentially unary, all basic operations join forms (dually meet forms).

    Tables settle the tag; the witness term is reconstructed only on demand
    (`with_witness=False` skips it). A two-element algebra outside all five
    cases would contradict Post's classification, so that raises
    ClassificationError rather than guessing.
    """
    _check_two(alg2)
    # s heads the priority order, so the closure may stop early on finding
    # it; when s is absent the closure runs to the fixpoint and the later
    # membership tests see the complete fragment
    tables = _closure_tables(alg2, stop=S_TABLE)
    for tag, tab in _PRIORITY:
        if tab in tables:
            term = _witness_term(alg2, tab) if with_witness else None
            return Classification(tag, term, tab)
    if all(_essential_positions(op) <= 1 for op in alg2.ops):
        return Classification(ESSENTIALLY_UNARY)
    if all(_is_join_form(op) for op in alg2.ops) or all(
        _is_meet_form(op) for op in alg2.ops
    ):
        return Classification(SEMILATTICE_FAMILY)
    raise ClassificationError(
        f"{alg2.name} fits no case: the ternary clone misses s, m and both "
        "forms of n, yet some basic operation is neither essentially unary "
        "nor a join or meet form"
    )


# ---------------------------------------------------------------------------
# the affine route


def affine_gf2_instance(alg, s_term: Term, thetas, e: int):
    """Congruence tuple -> subspace tuple via the addition x + y := s(x, y, e).

    Verifies that the derived addition is commutative, associative, has e
    as neutral element and satisfies x + x = e (so the universe becomes a
    GF(2)-vector space with origin e), and that every tuple member is
    compatible with it; then charts the universe and maps each theta to the
    subspace carried by the e-class.
    """
    n = alg.size
    if not thetas:
        raise InputError("need at least one congruence")
    if not 0 <= e < n:
        raise InputError(f"element {e} is out of range for {alg.name}")
    table = tuple(eval_term(alg, s_term, (x, y, e)) for x in range(n) for y in range(n))
    T = np.array(table, dtype=np.int64).reshape(n, n)
    idx = np.arange(n)
    if not np.array_equal(T, T.T):
        raise PreconditionError("derived addition is not commutative")
    if not np.array_equal(T[T, :], T[:, T]):
        raise PreconditionError("derived addition is not associative")
    if not np.array_equal(T[:, e], idx):
        raise PreconditionError(f"element {e} is not neutral for the derived addition")
    if not np.array_equal(T[idx, idx], np.full(n, e)):
        raise PreconditionError("derived addition does not square to the neutral element")
    derived = FiniteAlgebra(n, [Operation("add", 2, table)], name=f"{alg.name}+")
    parts = []
    for pos, theta in enumerate(thetas):
        part = as_partition(theta)
        if congruence_violation(derived, part) is not None:
            raise PreconditionError(
                f"tuple member {pos + 1} is not compatible with the derived addition"
            )
        parts.append(part)
    chart = coordinatize(derived, add="add", zero_elem=e)
    return vs_instance(2, chart.dim, [congruence_to_subspace(chart, p) for p in parts])


# ---------------------------------------------------------------------------
# routing


@dataclass(frozen=True)
class RouteResult:
    route: str  # "vs" | "nearlattice" | "dualdisc" | "brute"
    is_cr: bool
    verdict: object
    warning: Optional[str] = None

    def __bool__(self):
        return self.is_cr


def route_decide(
    alg,
    thetas,
    class_hint: Optional[Classification] = None,
    generator: Optional[FiniteAlgebra] = None,
) -> RouteResult:
    """Decide whether a tuple is CR by the procedure its class supports.

    The caller asserts that alg lies in the variety generated by the
    classified two-element algebra. Each route re-verifies what it can
    (the addition identities, congruence compatibility with the derived
    reduct, the view and meet-irreducible certificates) and raises instead
    of returning a wrong verdict. Classes without a polynomial procedure
    fall back to brute force and carry a complexity warning.
    """
    cls = class_hint
    if cls is None:
        if generator is None:
            raise InputError("need a classification or a two-element generator")
        cls = classify(generator)
    if cls.tag in (HAS_S, HAS_N) and cls.witness is None:
        raise InputError(f"classification {cls.tag} carries no witness term")
    if cls.tag == HAS_S:
        inst = affine_gf2_instance(alg, cls.witness, thetas, 0)
        verdict = is_cr_tuple_vs(inst)
        return RouteResult("vs", verdict.is_cr, verdict)
    if cls.tag == HAS_N:
        nred = reduct(alg, {"n": (3, cls.witness)}, name=f"{alg.name}|n")
        parts = [as_partition(t) for t in thetas]
        for pos, part in enumerate(parts):
            if congruence_violation(nred, part) is not None:
                raise PreconditionError(
                    f"tuple member {pos + 1} is not a congruence of the derived "
                    "ternary reduct"
                )
        verdict = is_cr_tuple_nearlattice(make_view(nred, "n"), parts)
        return RouteResult("nearlattice", verdict.is_cr, verdict)
    if cls.tag == HAS_M:
        verdict = is_cr_tuple_dualdisc(alg, thetas)
        return RouteResult("dualdisc", verdict.is_cr, verdict)
    if cls.tag == ESSENTIALLY_UNARY:
        warning = "brute-force decision; this class is coNP-complete in general"
    elif cls.tag == SEMILATTICE_FAMILY:
        warning = "brute-force decision; the complexity of this class is open"
    else:
        raise InputError(f"unknown classification tag {cls.tag!r}")
    verdict = brute_force_is_cr_tuple([as_partition(t) for t in thetas])
    return RouteResult("brute", verdict.is_cr, verdict, warning)
