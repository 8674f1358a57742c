"""Two-element classification, witness terms, and routing."""

import itertools
import random

import pytest

from crtkit.algebra import (
    App,
    FiniteAlgebra,
    Operation,
    Var,
    all_congruences,
    eval_term,
    term_str,
)
from crtkit.catalog import (
    bare_set,
    chain_lattice,
    two_implication,
    two_join_semilattice,
    two_lattice,
    two_majority,
    two_minority,
)
from crtkit.errors import InputError, PreconditionError
from crtkit.partitions import Partition
from crtkit.postlattice import (
    M_TABLE,
    N_DUAL_TABLE,
    N_TABLE,
    PROJ_X,
    PROJ_Y,
    PROJ_Z,
    S_TABLE,
    affine_gf2_instance,
    classify,
    route_decide,
    table_of_term,
    ternary_clone,
)
from crtkit.systems import brute_force_is_cr_tuple
from crtkit.vectorspace import (
    coordinatize,
    is_cr_tuple_vs,
    subspace_to_partition,
)

from helpers import closed_subpower, random_closed_subpower


def two_elem(name, **tables):
    ops = []
    for opname, (arity, fn) in tables.items():
        table = tuple(
            fn(*args) for args in itertools.product(range(2), repeat=arity)
        )
        ops.append(Operation(opname, arity, table))
    return FiniteAlgebra(2, ops, name=name)


S10 = two_elem("s10", f=(3, lambda x, y, z: x & (y | z)))
S00 = two_elem("s00", f=(3, lambda x, y, z: x | (y & z)))
NEG = two_elem("neg01", neg=(1, lambda x: 1 - x))


def test_constants_are_the_intended_tables():
    assert PROJ_X == 0xF0 and PROJ_Y == 0xCC and PROJ_Z == 0xAA
    for table, fn in (
        (S_TABLE, lambda x, y, z: x ^ y ^ z),
        (N_TABLE, lambda x, y, z: (x & y) | z),
        (N_DUAL_TABLE, lambda x, y, z: (x | y) & z),
        (M_TABLE, lambda x, y, z: 1 if x + y + z >= 2 else 0),
    ):
        expected = sum(
            fn(x, y, z) << (4 * x + 2 * y + z)
            for x in range(2)
            for y in range(2)
            for z in range(2)
        )
        assert table == expected


def test_table_of_term_projections():
    alg = two_lattice()
    assert table_of_term(alg, Var(0)) == PROJ_X
    assert table_of_term(alg, Var(1)) == PROJ_Y
    assert table_of_term(alg, Var(2)) == PROJ_Z


def test_ternary_clone_join_semilattice():
    clone = ternary_clone(two_join_semilattice())
    assert set(clone) == {
        PROJ_X,
        PROJ_Y,
        PROJ_Z,
        PROJ_X | PROJ_Y,
        PROJ_X | PROJ_Z,
        PROJ_Y | PROJ_Z,
        PROJ_X | PROJ_Y | PROJ_Z,
    }


def test_ternary_clone_sizes_and_membership():
    assert len(ternary_clone(bare_set(2))) == 3
    neg_clone = ternary_clone(NEG)
    assert set(neg_clone) == {
        PROJ_X, PROJ_Y, PROJ_Z,
        PROJ_X ^ 0xFF, PROJ_Y ^ 0xFF, PROJ_Z ^ 0xFF,
    }
    s10_clone = ternary_clone(S10)
    assert len(s10_clone) == 10
    assert N_DUAL_TABLE in s10_clone
    for absent in (S_TABLE, N_TABLE, M_TABLE):
        assert absent not in s10_clone
    imp_clone = ternary_clone(two_implication())
    assert len(imp_clone) == 38
    assert N_TABLE in imp_clone
    for absent in (S_TABLE, N_DUAL_TABLE, M_TABLE):
        assert absent not in imp_clone


def test_clone_witness_terms_reproduce_their_tables():
    for alg in (two_lattice(), two_implication(), S10, two_minority()):
        for table, term in ternary_clone(alg).items():
            assert table_of_term(alg, term) == table


def test_classify_fixtures():
    cases = [
        (two_minority(), "HasS", S_TABLE),
        (two_lattice(), "HasN", N_TABLE),
        (S00, "HasN", N_TABLE),
        (two_implication(), "HasN", N_TABLE),
        (S10, "HasN", N_DUAL_TABLE),
        (two_majority(), "HasM", M_TABLE),
    ]
    for alg, tag, table in cases:
        cls = classify(alg)
        assert cls.tag == tag, alg.name
        assert cls.table == table
        assert table_of_term(alg, cls.witness) == table
    assert classify(NEG).tag == "EssentiallyUnary"
    assert classify(two_join_semilattice()).tag == "SemilatticeFamily"
    assert classify(bare_set(2)).tag == "EssentiallyUnary"


def test_classify_witness_strings():
    assert term_str(classify(two_lattice()).witness) == (
        "(meet (join x2 x3) (join x1 x3))"
    )
    assert term_str(classify(two_majority()).witness) == "(m x1 x2 x3)"
    assert term_str(classify(two_minority()).witness) == "(s x1 x2 x3)"
    assert term_str(classify(two_implication()).witness) == (
        "(imp (imp x1 (imp x2 x3)) x3)"
    )
    assert term_str(classify(S10).witness) == "(f x3 x1 x2)"


def test_classify_requires_two_elements():
    with pytest.raises(InputError):
        classify(chain_lattice(3))


def test_classify_priority_s_beats_the_rest():
    # adding the minority table to any algebra forces HasS
    for base in (two_lattice(), two_majority(), NEG):
        ops = list(base.ops) + [
            Operation("sx", 3, tuple(
                x ^ y ^ z
                for x in range(2) for y in range(2) for z in range(2)
            ))
        ]
        cls = classify(FiniteAlgebra(2, ops, name=base.name + "+s"))
        assert cls.tag == "HasS"


def test_classify_without_witness():
    cls = classify(two_lattice(), with_witness=False)
    assert cls.tag == "HasN" and cls.witness is None and cls.table == N_TABLE


def test_affine_instance_from_minority_square():
    alg, coords = closed_subpower(
        two_minority(), 2, [(0, 0), (0, 1), (1, 0), (1, 1)]
    )
    assert alg.size == 4
    s_term = App("s", (Var(0), Var(1), Var(2)))
    # the derived addition x + y := s(x, y, 0) charts the universe
    add_table = tuple(
        alg.apply("s", x, y, 0) for x in range(4) for y in range(4)
    )
    derived = FiniteAlgebra(4, [Operation("add", 2, add_table)], name="d")
    chart = coordinatize(derived, zero_elem=0)
    lattice = [c.partition for c in all_congruences(alg)]
    for k in (2, 3):
        for thetas in itertools.combinations(lattice, k):
            inst = affine_gf2_instance(alg, s_term, list(thetas), 0)
            got = is_cr_tuple_vs(inst)
            want = brute_force_is_cr_tuple(list(thetas))
            assert got.is_cr == want.is_cr
            # each subspace pulls back to the congruence it came from
            for w, theta in zip(inst.subspaces, thetas):
                assert subspace_to_partition(chart, w) == theta


def test_affine_instance_precondition_checks():
    # a non-group "addition" derived from lattice terms is refused
    alg = two_lattice()
    with pytest.raises(PreconditionError):
        affine_gf2_instance(
            alg,
            App("meet", (App("join", (Var(0), Var(1))), Var(2))),
            [c.partition for c in all_congruences(alg)][:1],
            0,
        )


def test_route_vs_matches_brute():
    rng = random.Random(60)
    cls = classify(two_minority())
    checked = 0
    for _ in range(10):
        alg, _ = random_closed_subpower(rng, two_minority(), rng.randint(2, 3), 3)
        lattice = [c.partition for c in all_congruences(alg)]
        for _ in range(15):
            thetas = [rng.choice(lattice) for _ in range(rng.randint(2, 3))]
            res = route_decide(alg, thetas, class_hint=cls)
            assert res.route == "vs"
            assert res.warning is None
            assert res.is_cr == brute_force_is_cr_tuple(thetas).is_cr
            checked += 1
    assert checked > 100


def test_route_nearlattice_matches_brute():
    cls = classify(two_lattice())
    alg = chain_lattice(4)
    lattice = [c.partition for c in all_congruences(alg)]
    for k in (2, 3):
        for thetas in itertools.combinations(lattice, k):
            res = route_decide(alg, list(thetas), class_hint=cls)
            assert res.route == "nearlattice"
            assert res.is_cr == brute_force_is_cr_tuple(list(thetas)).is_cr


def test_route_nearlattice_dual_orientation():
    # the relabeled witness drives the same decision procedure
    rng = random.Random(61)
    cls = classify(S10)
    assert cls.table == N_DUAL_TABLE
    checked = 0
    for _ in range(8):
        alg, _ = random_closed_subpower(rng, S10, rng.randint(2, 3), 3)
        if alg.size < 2:
            continue
        lattice = [c.partition for c in all_congruences(alg)]
        for _ in range(15):
            thetas = [rng.choice(lattice) for _ in range(rng.randint(2, 3))]
            res = route_decide(alg, thetas, class_hint=cls)
            assert res.route == "nearlattice"
            assert res.is_cr == brute_force_is_cr_tuple(thetas).is_cr
            checked += 1
    assert checked > 80


def test_route_dualdisc_matches_brute():
    rng = random.Random(62)
    cls = classify(two_majority())
    checked = 0
    for _ in range(10):
        alg, _ = random_closed_subpower(rng, two_majority(), rng.randint(2, 3), 3)
        if alg.size < 3:
            continue
        lattice = [c.partition for c in all_congruences(alg)]
        for _ in range(15):
            thetas = [rng.choice(lattice) for _ in range(rng.randint(2, 3))]
            res = route_decide(alg, thetas, class_hint=cls)
            assert res.route == "dualdisc"
            assert res.is_cr == brute_force_is_cr_tuple(thetas).is_cr
            checked += 1
    assert checked > 80


def test_route_brute_fallbacks_carry_warnings():
    res = route_decide(
        bare_set(3),
        [Partition([0, 1, 1]), Partition([0, 0, 1])],
        class_hint=classify(NEG),
    )
    assert res.route == "brute"
    assert "coNP" in res.warning
    assert not res.is_cr

    res2 = route_decide(
        two_join_semilattice(),
        [Partition([0, 1])],
        class_hint=classify(two_join_semilattice()),
    )
    assert res2.route == "brute"
    assert "open" in res2.warning


def test_route_requires_hint_or_generator():
    alg = chain_lattice(3)
    thetas = [c.partition for c in all_congruences(alg)]
    with pytest.raises(InputError):
        route_decide(alg, thetas)
    res = route_decide(alg, thetas, generator=two_lattice())
    assert res.route == "nearlattice"


def test_route_rejects_foreign_partitions():
    cls = classify(two_lattice())
    alg = chain_lattice(3)
    with pytest.raises(PreconditionError):
        route_decide(alg, [Partition([0, 1, 0])], class_hint=cls)


def test_classification_stability_under_derived_terms():
    # appending a term operation of the algebra never changes the class
    rng = random.Random(63)
    fixtures = [
        two_lattice(),
        two_majority(),
        two_minority(),
        two_implication(),
        S10,
        NEG,
        two_join_semilattice(),
    ]
    for alg in fixtures:
        base_cls = classify(alg)
        clone = ternary_clone(alg)
        tables = list(clone.items())
        for _ in range(3):
            table, term = rng.choice(tables)
            flat = tuple(
                (table >> (4 * x + 2 * y + z)) & 1
                for x in range(2)
                for y in range(2)
                for z in range(2)
            )
            bigger = FiniteAlgebra(
                2,
                list(alg.ops) + [Operation("extra", 3, flat)],
                name=alg.name + "x",
            )
            assert classify(bigger).tag == base_cls.tag


def test_every_two_element_signature_classifies():
    # one unary, one binary, and one ternary table: 4 * 16 * 256 algebras.
    # Every signature lands in exactly one of the five classes, and the
    # class sizes are stable.
    counts: dict[str, int] = {}
    for f1 in range(4):
        u = ((f1 >> 1) & 1, f1 & 1)
        for f2 in range(16):
            b = tuple((f2 >> (3 - j)) & 1 for j in range(4))
            for f3 in range(256):
                t = tuple((f3 >> (7 - j)) & 1 for j in range(8))
                alg = FiniteAlgebra(
                    2,
                    [
                        Operation("f1", 1, u),
                        Operation("f2", 2, b),
                        Operation("f3", 3, t),
                    ],
                    name="c",
                )
                tag = classify(alg, with_witness=False).tag
                counts[tag] = counts.get(tag, 0) + 1
    assert counts == {
        "EssentiallyUnary": 192,
        "SemilatticeFamily": 150,
        "HasN": 916,
        "HasS": 15124,
        "HasM": 2,
    }
