"""Graded retracts of monomial quotient rings.

A retract is represented by a single idempotent degree-1 endomorphism psi of
the ambient polynomial ring together with a compatible monomial ideal I whose
generators all have degree >= 2.  The base-finding algorithms below realize
the constructive content of the squarefree, irreducible and power-of-linear
cases, each backed by the brute-force oracle ``brute_force_base``.
"""

from __future__ import annotations

import itertools
import math
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlgorithmContract,
    DegreeOneGenerator,
    GuardExceeded,
    InfeasibleBasis,
    NonSquarefree,
    NotARetract,
    RingMismatch,
)
from .exactalg import (
    GradedSubstitution,
    LinearSpan,
    PolyRing,
    PrimeField,
    degree_piece_span,
    express_in_span,
    ideal_equal,
    monomials_of_degree,
    span_intersection,
)
from .monideal import (
    MonomialIdeal,
    exp_degree,
    exp_support,
    primary_decomposition_squarefree,
)
from .simplicial import complex_of_ideal

BRUTE_FORCE_GUARD = 20
ENUMERATION_GUARD = 2 ** 26


class RetractDatum:
    """Ambient ring, compatible monomial ideal and candidate idempotent psi.

    Construction validates shapes only (ring consistency, generators of
    degree >= 2); idempotency and compatibility are checked by
    ``verify_retract`` so that failing data can still be reported on.
    """

    def __init__(self, ring, ideal, psi):
        if psi.source != ring or psi.target != ring:
            raise RingMismatch("psi must be an endomorphism of the ambient ring")
        if ideal.names != ring.names:
            raise RingMismatch(f"{ideal.names} vs {ring.names}")
        for g in ideal.gens:
            if exp_degree(g) < 2:
                raise DegreeOneGenerator(
                    "ideal must lie in the square of the maximal ideal"
                )
        self.ring = ring
        self.ideal = ideal
        self.psi = psi
        self._gen_images = {}
        self._piece_cache = {}

    @property
    def field(self):
        return self.ring.field

    def support(self):
        return self.ideal.support()

    def image_coeffs(self, i):
        return self.psi.images[i].linear_coeffs()

    def generator_image(self, exps):
        """psi applied to the monomial generator, cached."""
        f = self._gen_images.get(exps)
        if f is None:
            f = self.psi.apply(self.ring.monomial(exps))
            self._gen_images[exps] = f
        return f

    def r1_rank(self):
        span = LinearSpan(self.field, self.ring.nvars)
        for f in self.psi.images:
            span.insert(f.linear_coeffs())
        return span.rank

    def image_piece_span(self, gen_subset, d):
        """Span of the degree-d piece of (psi(g) : g in gen_subset), cached."""
        key = (gen_subset, d)
        span = self._piece_cache.get(key)
        if span is None:
            polys = [self.generator_image(g) for g in gen_subset]
            span, _ = degree_piece_span(self.ring, polys, d)
            self._piece_cache[key] = span
        return span

    def __repr__(self):
        return f"RetractDatum({self.ring!r}, {self.ideal!r})"


@dataclass(frozen=True)
class RetractReport:
    idempotent: bool
    compatible: bool
    failing_generators: tuple

    @property
    def ok(self):
        return self.idempotent and self.compatible


def verify_retract(datum):
    """Exact checks of psi^2 = psi and psi(I) subset of I."""
    idempotent = datum.psi.is_idempotent()
    failing = []
    for g in datum.ideal.gens:
        if not datum.ideal.contains_poly(datum.generator_image(g)):
            failing.append(str(datum.ring.monomial(g)))
    return RetractReport(idempotent, not failing, tuple(failing))


def _require_retract(datum):
    report = verify_retract(datum)
    if not report.ok:
        raise NotARetract(
            f"idempotent={report.idempotent} compatible={report.compatible} "
            f"failing={list(report.failing_generators)}"
        )
    return report


@dataclass(frozen=True)
class Presentation:
    variables: tuple
    basis_indices: tuple
    relations: tuple
    ring: PolyRing


def presentation(datum):
    """Minimal presentation R = k[images basis], J = rewritten generator images."""
    _require_retract(datum)
    span = LinearSpan(datum.field, datum.ring.nvars)
    basis = []
    for i in range(datum.ring.nvars):
        if span.insert(datum.image_coeffs(i)):
            basis.append(i)
    names = tuple(datum.ring.names[i] for i in basis)
    target = PolyRing(names, datum.field)
    rho = _rewriting_map(datum, basis, target)
    relations = []
    for g in datum.ideal.gens:
        f = rho.apply(datum.ring.monomial(g))
        if not f.is_zero() and f not in relations:
            relations.append(f)
    return Presentation(names, tuple(basis), tuple(relations), target)


def _rewriting_map(datum, basis, target):
    """ring -> target sending x_i to the coordinates of psi(x_i) in the basis
    {psi(x_w) : w in basis}; realizes phi in R-coordinates."""
    basis_rows = [datum.image_coeffs(w) for w in basis]
    images = []
    for i in range(datum.ring.nvars):
        coords = express_in_span(basis_rows, datum.image_coeffs(i), datum.field)
        if coords is None:
            raise AlgorithmContract("generator image outside the chosen basis span")
        images.append(target.linear_form(coords))
    return GradedSubstitution(datum.ring, target, images)


@dataclass(frozen=True)
class BaseCertificate:
    indices: tuple
    independent: bool
    rank: int
    memberships: tuple
    wider_than_support: bool

    @property
    def ok(self):
        return self.independent and all(flag for _, flag in self.memberships)


def verify_base(datum, indices):
    """Check the two base conditions for the variable subset ``indices``.

    (i) the psi-images of the chosen variables are linearly independent;
    (ii) every generator image lies in the ideal generated by the images of
    the generators supported inside the subset (the reverse inclusion is
    automatic).  Works with ideals of the ambient ring: for an idempotent
    psi this is equivalent to equality inside the image subalgebra.
    """
    w = tuple(sorted(set(int(i) for i in indices)))
    n = datum.ring.nvars
    if any(i < 0 or i >= n for i in w):
        raise ValueError(f"variable indices out of range: {w}")
    wider = not set(w) <= set(datum.support())
    span = LinearSpan(datum.field, n)
    independent = all(span.insert(datum.image_coeffs(i)) for i in w)
    if not independent:
        return BaseCertificate(w, False, span.rank, (), wider)
    keep = set(w)
    inside = tuple(g for g in datum.ideal.gens if set(exp_support(g)) <= keep)
    memberships = []
    field = datum.field
    for g in datum.ideal.gens:
        if g in inside:
            continue
        f = datum.generator_image(g)
        if f.is_zero():
            memberships.append((str(datum.ring.monomial(g)), True))
            continue
        piece = datum.image_piece_span(inside, exp_degree(g))
        cols_count = piece.ncols
        vec = _piece_vector(datum.ring, f, exp_degree(g), cols_count)
        memberships.append((str(datum.ring.monomial(g)), piece.contains(vec)))
    return BaseCertificate(w, True, span.rank, tuple(memberships), wider)


def _piece_vector(ring, f, d, ncols):
    cols = monomials_of_degree(ring.nvars, d)
    assert len(cols) == ncols
    index = {m: k for k, m in enumerate(cols)}
    vec = [ring.field.zero] * ncols
    for exps, c in f.terms.items():
        vec[index[exps]] = c
    return vec


def decomposition_images_check(datum):
    """Degree-by-degree check that the image of I equals the intersection of
    the images of its minimal primes (squarefree I)."""
    if not datum.ideal.is_squarefree():
        raise NonSquarefree(f"{datum.ideal!r} is not squarefree")
    _require_retract(datum)
    if datum.ideal.is_zero():
        return True
    primes = primary_decomposition_squarefree(datum.ideal)
    lhs_gens = [
        datum.generator_image(g)
        for g in datum.ideal.gens
        if not datum.generator_image(g).is_zero()
    ]
    prime_images = [
        [datum.psi.images[i] for i in p.indices if not datum.psi.images[i].is_zero()]
        for p in primes
    ]
    top = datum.ideal.max_degree()
    for d in range(1, top + 1):
        lhs, _ = degree_piece_span(datum.ring, lhs_gens, d)
        rhs = None
        for polys in prime_images:
            piece, _ = degree_piece_span(datum.ring, polys, d)
            rhs = piece if rhs is None else span_intersection(rhs, piece)
        if lhs.canonical() != rhs.canonical():
            return False
    return True


# ---------------------------------------------------------------------------
# Squarefree case (Stanley-Reisner rings)
# ---------------------------------------------------------------------------

def _image_supported_in(datum, var, allowed):
    vec = datum.image_coeffs(var)
    zero = datum.field.zero
    return all(c == zero or j in allowed for j, c in enumerate(vec))


def find_base_squarefree(datum):
    """Base of a retract of a Stanley-Reisner quotient.

    Reduces to primes fixed by psi by repeatedly dropping a prime whose image
    escapes it (legitimate whenever another prime maps inside the dropped
    one), then assembles the base by the reverse-induction complement
    construction.
    """
    if not datum.ideal.is_squarefree():
        raise NonSquarefree(f"{datum.ideal!r} is not squarefree")
    _require_retract(datum)
    if datum.ideal.is_zero():
        return ()
    primes = [set(p.indices) for p in primary_decomposition_squarefree(datum.ideal)]
    while True:
        failing = [
            f
            for f, p in enumerate(primes)
            if not all(_image_supported_in(datum, a, p) for a in p)
        ]
        if not failing:
            break
        f = failing[0]
        partner = None
        for j, q in enumerate(primes):
            if j == f:
                continue
            if all(_image_supported_in(datum, a, primes[f]) for a in q):
                partner = j
                break
        if partner is None:
            raise NotARetract(
                "no prime maps inside the incompatible one; "
                "input is not a genuine retract datum"
            )
        del primes[f]
    base = lemma59_construct(datum, [tuple(sorted(p)) for p in primes])
    cert = verify_base(datum, base)
    if not cert.ok:
        raise AlgorithmContract(f"constructed set {base} fails the base check")
    return base


def lemma59_construct(datum, primes):
    """Reverse induction over index subsets of the prime list.

    For each T the variables common to the primes of T span a subspace V_T;
    a greedy complement of the span contributed by all (t+1)-supersets is
    chosen among the variables exclusive to T.  Infeasibility of the greedy
    step is a contract violation, not a guess.
    """
    primes = [tuple(sorted(p)) for p in primes]
    s = len(primes)
    if s == 0:
        return ()
    prime_sets = [set(p) for p in primes]
    for p in prime_sets:
        for a in p:
            if not _image_supported_in(datum, a, p):
                raise NotARetract(f"psi does not map prime {sorted(p)} into itself")
    field = datum.field
    n = datum.ring.nvars

    def common_vars(subset):
        vars_ = set(prime_sets[subset[0]])
        for i in subset[1:]:
            vars_ &= prime_sets[i]
        return tuple(sorted(vars_))

    def span_of(vars_):
        span = LinearSpan(field, n)
        for a in vars_:
            span.insert(datum.image_coeffs(a))
        return span

    # t = s seed: greedy basis of V over the variables common to every prime
    chosen = []
    seed_span = LinearSpan(field, n)
    for a in common_vars(tuple(range(s))):
        if seed_span.insert(datum.image_coeffs(a)):
            chosen.append(a)
    for t in range(s - 1, 0, -1):
        for subset in itertools.combinations(range(s), t):
            p_t = common_vars(subset)
            if not p_t:
                continue
            outside = [j for j in range(s) if j not in subset]
            exclusive = [
                a for a in p_t if not any(a in prime_sets[j] for j in outside)
            ]
            target = span_of(p_t)
            super_vars = set()
            for j in outside:
                super_vars.update(common_vars(tuple(sorted(subset + (j,)))))
            working = span_of(tuple(sorted(super_vars)))
            for a in exclusive:
                if working.rank == target.rank:
                    break
                if working.insert(datum.image_coeffs(a)):
                    chosen.append(a)
            if working.rank != target.rank:
                raise AlgorithmContract(
                    f"complement construction stuck on prime subset {subset}"
                )
    return tuple(sorted(set(chosen)))


# ---------------------------------------------------------------------------
# Irreducible case (pure variable powers) and powers of linear ideals
# ---------------------------------------------------------------------------

IrreducibleBase = namedtuple("IrreducibleBase", ["base", "fallback"])


def _is_pure_power_ideal(ideal):
    return all(len(exp_support(g)) == 1 for g in ideal.gens)


def _restricted_datum(datum, indices):
    indices = tuple(indices)
    sub_psi = datum.psi.restricted_endomorphism(indices)
    sub_ideal = datum.ideal.restrict(indices)
    return RetractDatum(sub_psi.source, sub_ideal, sub_psi)


def _power_exponents(ideal):
    """Map var index -> exponent of its pure-power generator."""
    out = {}
    for g in ideal.gens:
        (j,) = exp_support(g)
        out[j] = g[j]
    return out


def _is_power_of(d, p):
    while d % p == 0:
        d //= p
    return d == 1


def find_base_irreducible(datum):
    """Base of a retract of S/I for I generated by pure powers (degrees >= 2).

    Follows the characteristic split: away from char p with top exponent a
    p-th power, top variables either survive (identity diagonal) or are
    eliminated by composing with the substitution suggested by their image;
    in the p-power case the base is completed greedily to a basis of the
    degree-one image.  A greedy failure (or a result failing the base check)
    falls back to the brute-force oracle and tags the result.
    """
    if not _is_pure_power_ideal(datum.ideal):
        raise ValueError("ideal is not generated by pure variable powers")
    _require_retract(datum)
    if datum.ideal.is_zero():
        return IrreducibleBase((), False)
    supp = datum.support()
    allowed = set(supp)
    for i in supp:
        if not _image_supported_in(datum, i, allowed):
            raise NotARetract(
                f"image of {datum.ring.names[i]} leaves the support span"
            )
    sub = _restricted_datum(datum, supp)
    try:
        w_sub = _find_base_irreducible_rec(sub)
        base = tuple(sorted(supp[i] for i in w_sub))
        if verify_base(datum, base).ok:
            return IrreducibleBase(base, False)
    except InfeasibleBasis:
        pass
    fallback = brute_force_base(datum)
    if fallback is None:
        raise InfeasibleBasis("no base exists for this datum (oracle exhausted)")
    return IrreducibleBase(fallback, True)


def _find_base_irreducible_rec(datum):
    """Recursion of the irreducible algorithm; ideal has full support here."""
    n = datum.ring.nvars
    if n == 0 or datum.ideal.is_zero():
        return ()
    exps = _power_exponents(datum.ideal)
    d = max(exps.values())
    top = tuple(sorted(i for i, e in exps.items() if e == d))
    low = tuple(sorted(i for i, e in exps.items() if e < d))
    low_set = set(low)
    for j in low:
        if not _image_supported_in(datum, j, low_set):
            raise NotARetract(
                f"image of low-degree variable {datum.ring.names[j]} "
                "meets a top-degree variable"
            )
    if low:
        sub = _restricted_datum(datum, low)
        u = tuple(low[i] for i in _find_base_irreducible_rec(sub))
    else:
        u = ()
    field = datum.field
    if field.char > 0 and _is_power_of(d, field.char):
        # p-power case: complete U greedily to a basis of the image in degree 1
        span = LinearSpan(field, n)
        for i in u:
            span.insert(datum.image_coeffs(i))
        target = datum.r1_rank()
        extra = []
        for i in top:
            if span.rank == target:
                break
            if span.insert(datum.image_coeffs(i)):
                extra.append(i)
        if span.rank != target:
            raise InfeasibleBasis(
                "inherited base does not extend to a basis of the image"
            )
        return tuple(sorted(u + tuple(extra)))
    matrix = datum.psi.matrix()
    zero, one = field.zero, field.one
    missing = []
    for i in top:
        c = matrix[i][i]
        if c == zero:
            missing.append(i)
            continue
        if c != one:
            raise NotARetract(
                f"diagonal coefficient of {datum.ring.names[i]} is {c}, not 0 or 1"
            )
        for j in top:
            if j != i and matrix[j][i] != zero:
                raise NotARetract(
                    f"image of {datum.ring.names[i]} has a cross term at "
                    f"{datum.ring.names[j]}"
                )
    if not missing:
        return tuple(sorted(u + top))
    i = missing[0]
    keep = tuple(v for v in range(n) if v != i)
    new_rows = []
    for j in keep:
        row = []
        for v in keep:
            c = matrix[j][v]
            c = field.add(c, field.mul(matrix[i][v], matrix[j][i]))
            row.append(c)
        new_rows.append(row)
    sub_ring = datum.ring.subring(keep)
    psi_w = GradedSubstitution.from_matrix(sub_ring, sub_ring, new_rows)
    if not psi_w.is_idempotent():
        raise NotARetract("variable elimination broke idempotency")
    ideal_w = datum.ideal.restrict(keep)
    datum_w = RetractDatum(sub_ring, ideal_w, psi_w)
    for g in ideal_w.gens:
        if not ideal_w.contains_poly(datum_w.generator_image(g)):
            raise NotARetract("variable elimination broke compatibility")
    inner = _find_base_irreducible_rec(datum_w)
    return tuple(sorted(keep[v] for v in inner))


def _detect_linear_power(ideal):
    """Return (variable indices, d) when the ideal is (x_i : i in T)^d, d >= 2."""
    if ideal.is_zero():
        return None
    degrees = {exp_degree(g) for g in ideal.gens}
    if len(degrees) != 1:
        return None
    d = degrees.pop()
    if d < 2:
        return None
    supp = ideal.support()
    expected = math.comb(len(supp) + d - 1, d)
    if len(ideal.gens) != expected:
        return None
    return supp, d


def find_base_power(datum):
    """Base for I a d-th power of an ideal of variables: any greedy variable
    subset whose images form a basis of the reduced degree-one image works."""
    detected = _detect_linear_power(datum.ideal)
    if detected is None:
        raise ValueError("ideal is not a power of an ideal of variables")
    supp, _ = detected
    _require_retract(datum)
    allowed = set(supp)
    for i in supp:
        if not _image_supported_in(datum, i, allowed):
            raise NotARetract(
                f"image of {datum.ring.names[i]} leaves the support span"
            )
    span = LinearSpan(datum.field, datum.ring.nvars)
    base = tuple(i for i in supp if span.insert(datum.image_coeffs(i)))
    cert = verify_base(datum, base)
    if not cert.ok:
        raise NotARetract(f"greedy subset {base} fails the base check")
    return base


# ---------------------------------------------------------------------------
# Brute-force oracle and idempotent enumeration
# ---------------------------------------------------------------------------

def brute_force_base(datum, guard=BRUTE_FORCE_GUARD):
    """First subset of supp(I), by cardinality then lex, passing verify_base."""
    supp = datum.support()
    if len(supp) > guard:
        raise GuardExceeded(f"brute force beyond {guard} support variables")
    for size in range(len(supp) + 1):
        for combo in itertools.combinations(supp, size):
            if verify_base(datum, combo).ok:
                return combo
    return None


_IDEMPOTENT_CACHE = {}


def idempotent_matrices(n, p):
    """All n x n idempotent matrices over F_p, ascending in the base-p value
    of the row-major entry string."""
    key = (n, p)
    cached = _IDEMPOTENT_CACHE.get(key)
    if cached is not None:
        return cached
    if n == 0:
        out = ((),)
        _IDEMPOTENT_CACHE[key] = out
        return out
    total = p ** (n * n)
    found = []
    chunk = 1 << 18
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        digits = np.empty((len(idx), n * n), dtype=np.int64)
        rem = idx
        for pos in range(n * n - 1, -1, -1):
            digits[:, pos] = rem % p
            rem = rem // p
        mats = digits.reshape(-1, n, n)
        squares = np.einsum("mij,mjk->mik", mats, mats) % p
        keep = (squares == mats).all(axis=(1, 2))
        for mat in mats[keep]:
            found.append(tuple(tuple(int(x) for x in row) for row in mat))
    out = tuple(found)
    _IDEMPOTENT_CACHE[key] = out
    return out


def enumerate_retracts(ideal, p, guard=ENUMERATION_GUARD):
    """Every compatible idempotent over F_p for the given ideal, in the
    deterministic matrix order of ``idempotent_matrices``."""
    n = len(ideal.names)
    if p ** (n * n) > guard:
        raise GuardExceeded(f"{p}^{n * n} matrices exceed the enumeration guard")
    ring = PolyRing(ideal.names, PrimeField(p))
    gen_polys = [ring.monomial(g) for g in ideal.gens]
    for matrix in idempotent_matrices(n, p):
        psi = GradedSubstitution.from_matrix(ring, ring, matrix)
        if all(ideal.contains_poly(psi.apply(g)) for g in gen_polys):
            yield RetractDatum(ring, ideal, psi)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationReport:
    base: tuple
    enlarged: tuple
    variables: tuple
    restricted_ideal: MonomialIdeal
    relations: tuple
    matches: bool
    facets: tuple = field(default=None)


def classification_report(datum, indices):
    """Identify the retract with the monomial quotient on a variable subset.

    The base is enlarged (if necessary) by further variables whose images
    complete a basis of the degree-one image; the coordinate map sending
    those images to the subring variables must carry the relation ideal onto
    the restricted monomial ideal.
    """
    base = tuple(sorted(set(int(i) for i in indices)))
    cert = verify_base(datum, base)
    if not cert.ok:
        raise ValueError(f"{base} is not a base of this retract")
    field_ = datum.field
    n = datum.ring.nvars
    span = LinearSpan(field_, n)
    for i in base:
        span.insert(datum.image_coeffs(i))
    target = datum.r1_rank()
    extra = []
    for i in range(n):
        if span.rank == target:
            break
        if i in base:
            continue
        if span.insert(datum.image_coeffs(i)):
            extra.append(i)
    enlarged = tuple(sorted(base + tuple(extra)))
    names = tuple(datum.ring.names[i] for i in enlarged)
    sub_ring = PolyRing(names, field_)
    rho = _rewriting_map(datum, enlarged, sub_ring)
    relations = []
    for g in datum.ideal.gens:
        f = rho.apply(datum.ring.monomial(g))
        if not f.is_zero() and f not in relations:
            relations.append(f)
    restricted = datum.ideal.restrict(enlarged)
    matches = ideal_equal(relations, restricted.generators_as_polys(sub_ring))
    facets = None
    if restricted.is_squarefree() and not restricted.is_unit():
        facets = complex_of_ideal(restricted).facet_names()
    return ClassificationReport(
        base, enlarged, names, restricted, tuple(relations), matches, facets
    )
