"""crtkit: decide whether congruence tuples of finite algebras satisfy the
conclusion of the Chinese remainder theorem."""

from .errors import (
    BudgetExceededError,
    ClassificationError,
    CrtkitError,
    InputError,
    PreconditionError,
    StructureError,
)
from .partitions import BinaryRelation, Partition, quotient_partition
from .algebra import (
    App,
    Congruence,
    FiniteAlgebra,
    Operation,
    SubdirectRep,
    Var,
    all_congruences,
    congruence,
    congruence_lattice_is_distributive,
    congruence_lattice_is_permutable,
    eval_term,
    is_arithmetic,
    is_congruence,
    meet_irreducible_congruences,
    naive_meet_irreducibles,
    principal_congruence,
    quotient,
    reduct,
    subalgebra,
    subdirect_embedding,
    term_str,
)
from .systems import (
    CongruenceSystem,
    CrVerdict,
    brute_force_is_cr_tuple,
    is_cr_pair,
    lift_witness,
    make_system,
    quotient_reduce,
    solve_system,
)
from .vectorspace import (
    Coordinatization,
    VSInstance,
    VsVerdict,
    congruence_to_subspace,
    coordinatize,
    coset_partitions,
    is_cr_tuple_vs,
    vs_instance,
)
from .nearlattice import (
    NearlatticeView,
    NlVerdict,
    is_cr_tuple_distlattice,
    is_cr_tuple_nearlattice,
    is_cr_tuple_tarski,
    lattice_view,
    make_view,
    tarski_view,
)
from .dualdisc import DdVerdict, is_cr_tuple_dualdisc
from .satgadget import (
    CnfFormula,
    ReductionInstance,
    as_left_zero_semigroup,
    assignment_to_system,
    parse_dimacs,
    random_3sat_prime,
    reduce_formula,
    semilattice_bounded_lift,
    serialize_dimacs,
    system_to_assignment,
    u_embed,
    validate_3sat_prime,
)
from .postlattice import (
    Classification,
    RouteResult,
    affine_gf2_instance,
    classify,
    route_decide,
    table_of_term,
    ternary_clone,
)
from .formats import (
    parse_algebra,
    parse_congruences,
    serialize_algebra,
    serialize_congruences,
)

__version__ = "0.1.0"

__all__ = [
    "App",
    "BinaryRelation",
    "BudgetExceededError",
    "Classification",
    "ClassificationError",
    "CnfFormula",
    "Congruence",
    "CongruenceSystem",
    "Coordinatization",
    "CrVerdict",
    "CrtkitError",
    "DdVerdict",
    "FiniteAlgebra",
    "InputError",
    "NearlatticeView",
    "NlVerdict",
    "Operation",
    "Partition",
    "PreconditionError",
    "ReductionInstance",
    "RouteResult",
    "StructureError",
    "SubdirectRep",
    "VSInstance",
    "Var",
    "VsVerdict",
    "affine_gf2_instance",
    "all_congruences",
    "as_left_zero_semigroup",
    "assignment_to_system",
    "brute_force_is_cr_tuple",
    "classify",
    "congruence",
    "congruence_lattice_is_distributive",
    "congruence_lattice_is_permutable",
    "congruence_to_subspace",
    "coordinatize",
    "coset_partitions",
    "eval_term",
    "is_arithmetic",
    "is_congruence",
    "is_cr_pair",
    "is_cr_tuple_distlattice",
    "is_cr_tuple_dualdisc",
    "is_cr_tuple_nearlattice",
    "is_cr_tuple_tarski",
    "is_cr_tuple_vs",
    "lattice_view",
    "lift_witness",
    "make_system",
    "make_view",
    "meet_irreducible_congruences",
    "naive_meet_irreducibles",
    "parse_algebra",
    "parse_congruences",
    "parse_dimacs",
    "principal_congruence",
    "quotient",
    "quotient_partition",
    "quotient_reduce",
    "random_3sat_prime",
    "reduce_formula",
    "reduct",
    "route_decide",
    "semilattice_bounded_lift",
    "serialize_algebra",
    "serialize_congruences",
    "serialize_dimacs",
    "solve_system",
    "subalgebra",
    "subdirect_embedding",
    "system_to_assignment",
    "table_of_term",
    "tarski_view",
    "ternary_clone",
    "term_str",
    "u_embed",
    "validate_3sat_prime",
    "vs_instance",
]
