"""Exception hierarchy shared across the library and the CLI exit-code map."""


class MonoretractError(Exception):
    """Base class for all library errors."""


class ParseError(MonoretractError, ValueError):
    """Malformed polynomial text or JSON input."""


class RingMismatch(MonoretractError, ValueError):
    """Operands live in different polynomial rings."""


class FieldMismatch(RingMismatch):
    """Operands have the same variables but different coefficient fields."""


class InhomogeneousInput(MonoretractError, ValueError):
    """A graded operation received a non-homogeneous polynomial."""


class DegreeOneGenerator(MonoretractError, ValueError):
    """The ideal of a retract datum must sit inside the square of the maximal ideal."""


class NonSquarefree(MonoretractError, ValueError):
    """Operation requires a squarefree monomial ideal."""


class UnitIdeal(MonoretractError, ValueError):
    """Decomposition operations reject the unit ideal."""


class GuardExceeded(MonoretractError, RuntimeError):
    """A desk-scale resource guard was hit (CLI exit code 4)."""


class NotARetract(MonoretractError, RuntimeError):
    """Input violates the retract hypotheses (CLI exit code 2)."""


class AlgorithmContract(MonoretractError, RuntimeError):
    """A constructive step the theory promises to be feasible failed (CLI exit code 3)."""


class InfeasibleBasis(AlgorithmContract):
    """The greedy basis completion of the irreducible-ideal algorithm could not
    reach a basis of the degree-one image space."""


class ComplementInfeasible(MonoretractError, ValueError):
    """Candidate vectors cannot extend the given subspace to the full span."""
