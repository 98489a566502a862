"""Exact-arithmetic toolkit for graded algebra retracts of monomial quotient
rings: Stanley-Reisner dictionaries, monomial ideal decompositions,
constructive base finding and toric face ring classification."""

from .errors import (
    AlgorithmContract,
    ComplementInfeasible,
    DegreeOneGenerator,
    FieldMismatch,
    GuardExceeded,
    InfeasibleBasis,
    InhomogeneousInput,
    MonoretractError,
    NonSquarefree,
    NotARetract,
    ParseError,
    RingMismatch,
    UnitIdeal,
)
from .exactalg import (
    QQ,
    GradedSubstitution,
    PolyRing,
    Polynomial,
    PrimeField,
    apply_substitution,
    compose,
    field_from_name,
    graded_piece,
    ideal_contains,
    ideal_equal,
    span_ops,
)
from .monideal import (
    LinearPrime,
    MonomialIdeal,
    irreducible_decomposition,
    primary_decomposition_squarefree,
)
from .retract import (
    RetractDatum,
    brute_force_base,
    classification_report,
    decomposition_images_check,
    enumerate_retracts,
    find_base_irreducible,
    find_base_power,
    find_base_squarefree,
    lemma59_construct,
    presentation,
    verify_base,
    verify_retract,
)
from .simplicial import (
    SimplicialComplex,
    complex_of_ideal,
    is_isomorphic,
    restriction,
    stanley_reisner_ideal,
)

__version__ = "0.1.0"
