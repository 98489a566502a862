"""Exact coefficient fields, multivariate polynomials, degree-1 substitutions
and the graded linear algebra the rest of the library consumes.

Everything here is exact: rationals are arbitrary-precision ``Fraction``
values, prime-field elements are canonical residues in ``[0, p)``.  All
values are immutable after construction and every operation is a pure
function, so concurrent use needs no locking.

Term order is graded-lexicographic throughout (serialization, basis
extraction, tie-breaking) so that repeated runs produce identical bytes.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
import re
from fractions import Fraction

from .errors import (
    ComplementInfeasible,
    FieldMismatch,
    GuardExceeded,
    InhomogeneousInput,
    ParseError,
    RingMismatch,
)

DEFAULT_MONOMIAL_GUARD = 2_000_000
MONOMIAL_GUARD_ENV = "MONORETRACT_MAX_MONOMIALS"


def monomial_guard():
    """Current cap on the size of an ambient monomial basis."""
    raw = os.environ.get(MONOMIAL_GUARD_ENV)
    if raw is None:
        return DEFAULT_MONOMIAL_GUARD
    try:
        return int(raw)
    except ValueError as exc:
        raise ParseError(f"bad {MONOMIAL_GUARD_ENV} value: {raw!r}") from exc


# ---------------------------------------------------------------------------
# Coefficient fields
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(p):
    """Deterministic Miller-Rabin, valid far beyond the 2^31 modulus cap."""
    if p < 2:
        return False
    for q in _SMALL_PRIMES:
        if p % q == 0:
            return p == q
    d = p - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class Rationals:
    """The field Q.  Scalars are ``Fraction`` values in lowest terms."""

    kind = "Rationals"
    char = 0
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    def parse(self, text):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {text!r}") from exc

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def pow(self, a, e):
        return a ** e

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a prime p < 2^31.  Scalars are ints in ``[0, p)``.

    The modulus cap keeps every product of two residues inside a 64-bit
    accumulator before reduction.
    """

    kind = "PrimeField"

    def __init__(self, p):
        if not isinstance(p, int) or not (2 <= p < 2 ** 31):
            raise ValueError(f"prime modulus out of range: {p!r}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1

    def coerce(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            return self.mul(value.numerator % self.p, self.inv(value.denominator % self.p))
        raise TypeError(f"cannot coerce {value!r} into {self.name}")

    def parse(self, text):
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return self.mul(int(num) % self.p, self.inv(int(den) % self.p))
            return int(text) % self.p
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad {self.name} literal {text!r}") from exc

    def add(self, a, b):
        r = a + b
        return r - self.p if r >= self.p else r

    def sub(self, a, b):
        r = a - b
        return r + self.p if r < 0 else r

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return self.p - a if a else 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in {self.name}")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, e):
        return pow(a, e, self.p)

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()

_FIELD_RE = re.compile(r"^F(\d+)$")


def field_from_name(name):
    """Map the CLI spelling ("Q", "F2", "F5", ...) to a field object."""
    name = name.strip()
    if name == "Q":
        return QQ
    m = _FIELD_RE.match(name)
    if m:
        return PrimeField(int(m.group(1)))
    raise ParseError(f"unknown field name {name!r}")


# ---------------------------------------------------------------------------
# Polynomial rings and polynomials
# ---------------------------------------------------------------------------

def grlex_key(exps):
    """Sort key realizing graded-lex: compare total degree, then exponents."""
    return (sum(exps), exps)


class PolyRing:
    """A polynomial ring: an ordered variable-name tuple plus a field."""

    __slots__ = ("names", "field", "_pos")

    def __init__(self, names, field):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        self.names = names
        self.field = field
        self._pos = {n: i for i, n in enumerate(names)}

    @property
    def nvars(self):
        return len(self.names)

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.constant(self.field.one)

    def constant(self, c):
        c = self.field.coerce(c)
        if c == self.field.zero:
            return self.zero()
        return Polynomial(self, {(0,) * self.nvars: c})

    def variable(self, i):
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): self.field.one})

    def monomial(self, exps, coeff=1):
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps} for {self!r}")
        c = self.field.coerce(coeff)
        if c == self.field.zero:
            return self.zero()
        return Polynomial(self, {exps: c})

    def linear_form(self, coeffs):
        """Polynomial sum(coeffs[i] * x_i); accepts raw ints or field scalars."""
        terms = {}
        for i, c in enumerate(coeffs):
            c = self.field.coerce(c)
            if c != self.field.zero:
                exps = [0] * self.nvars
                exps[i] = 1
                terms[tuple(exps)] = c
        return Polynomial(self, terms)

    def subring(self, indices):
        return PolyRing(tuple(self.names[i] for i in indices), self.field)

    def parse(self, text):
        return _parse_polynomial(self, text)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.names == self.names
            and other.field == self.field
        )

    def __hash__(self):
        return hash((self.names, self.field))

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)}; {self.field.name})"


def _check_same_ring(a, b):
    if a.ring.names != b.ring.names:
        raise RingMismatch(f"{a.ring!r} vs {b.ring!r}")
    if a.ring.field != b.ring.field:
        raise FieldMismatch(f"{a.ring.field.name} vs {b.ring.field.name}")


class Polynomial:
    """Immutable multivariate polynomial with exact coefficients.

    ``terms`` maps exponent tuples to nonzero scalars; zero coefficients are
    never stored.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    @staticmethod
    def _make(ring, dirty):
        zero = ring.field.zero
        return Polynomial(ring, {e: c for e, c in dirty.items() if c != zero})

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree; None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self):
        """The common degree of all terms; None if zero or inhomogeneous."""
        degs = {sum(e) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def coeff(self, exps):
        return self.terms.get(tuple(exps), self.ring.field.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def linear_coeffs(self):
        """Coefficient vector of a linear form (zero polynomial allowed)."""
        n = self.ring.nvars
        vec = [self.ring.field.zero] * n
        for exps, c in self.terms.items():
            if sum(exps) != 1:
                raise InhomogeneousInput(f"not a linear form: {self}")
            vec[exps.index(1)] = c
        return vec

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        _check_same_ring(self, other)
        field = self.ring.field
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = field.add(out.get(exps, field.zero), c)
        return Polynomial._make(self.ring, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        field = self.ring.field
        return Polynomial(self.ring, {e: field.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return self.ring.constant(other).__sub__(self)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        _check_same_ring(self, other)
        field = self.ring.field
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                prod = field.mul(ca, cb)
                prev = out.get(exps)
                out[exps] = prod if prev is None else field.add(prev, prod)
        return Polynomial._make(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        field = self.ring.field
        c = field.coerce(c)
        if c == field.zero:
            return self.ring.zero()
        return Polynomial(self.ring, {e: field.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"bad exponent {e!r}")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.ring, tuple(self.sorted_terms())))

    def __str__(self):
        return poly_to_str(self)

    def __repr__(self):
        return f"<{poly_to_str(self)}>"


# ---------------------------------------------------------------------------
# Text format: "3*x^2*y - 1/2*z^3"
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|[*^/+-])")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"bad character at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _parse_polynomial(ring, text):
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial text")
    tokens = _tokenize(text)
    field = ring.field
    terms = {}
    i = 0
    first = True
    while i < len(tokens):
        sign = field.one
        if tokens[i] in "+-":
            if tokens[i] == "-":
                sign = field.neg(field.one)
            i += 1
        elif not first:
            raise ParseError(f"expected '+' or '-' before {tokens[i]!r}")
        first = False
        coeff = sign
        exps = [0] * ring.nvars
        saw_factor = False
        while True:
            if i >= len(tokens):
                break
            tok = tokens[i]
            if tok.isdigit():
                i += 1
                if i < len(tokens) and tokens[i] == "/":
                    if i + 1 >= len(tokens) or not tokens[i + 1].isdigit():
                        raise ParseError("bad fraction")
                    coeff = field.mul(coeff, field.parse(f"{tok}/{tokens[i + 1]}"))
                    i += 2
                else:
                    coeff = field.mul(coeff, field.coerce(int(tok)))
            elif tok in ring._pos:
                var = ring._pos[tok]
                i += 1
                e = 1
                if i < len(tokens) and tokens[i] == "^":
                    if i + 1 >= len(tokens) or not tokens[i + 1].isdigit():
                        raise ParseError(f"bad exponent after {tok}")
                    e = int(tokens[i + 1])
                    i += 2
                exps[var] += e
            else:
                raise ParseError(f"unknown symbol {tok!r} in ring {ring.names}")
            saw_factor = True
            if i < len(tokens) and tokens[i] == "*":
                i += 1
                continue
            break
        if not saw_factor:
            raise ParseError("dangling sign")
        key = tuple(exps)
        prev = terms.get(key, field.zero)
        terms[key] = field.add(prev, coeff)
    return Polynomial._make(ring, terms)


def _monomial_str(ring, exps):
    parts = []
    for name, e in zip(ring.names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def poly_to_str(f):
    """Serialize in descending graded-lex order; round-trips with the parser."""
    if f.is_zero():
        return "0"
    field = f.ring.field
    pieces = []
    for exps, c in f.sorted_terms():
        if field is QQ or isinstance(field, Rationals):
            negative = c < 0
            mag = -c if negative else c
        else:
            negative = False
            mag = c
        mono = _monomial_str(f.ring, exps)
        if not mono:
            body = field.to_str(mag)
        elif mag == field.one:
            body = mono
        else:
            body = f"{field.to_str(mag)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# Degree-1 substitutions
# ---------------------------------------------------------------------------

class GradedSubstitution:
    """A degree-1 variable substitution between polynomial rings.

    Images are linear forms (or zero) of the target ring, one per source
    variable; equivalently the coefficient matrix E with ``E[j][i]`` the
    coefficient of target variable j in the image of source variable i.
    """

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        if source.field != target.field:
            raise FieldMismatch(f"{source.field.name} vs {target.field.name}")
        images = tuple(images)
        if len(images) != source.nvars:
            raise ValueError("one image per source variable required")
        for f in images:
            if f.ring != target:
                raise RingMismatch(f"image {f} not in target ring")
            if not f.is_zero() and f.homogeneous_degree() != 1:
                raise InhomogeneousInput(f"image not linear: {f}")
        self.source = source
        self.target = target
        self.images = images

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring, [ring.variable(i) for i in range(ring.nvars)])

    @classmethod
    def from_matrix(cls, source, target, matrix):
        """matrix[j][i] = coefficient of target variable j in image of source i."""
        field = target.field
        rows = [[field.coerce(c) for c in row] for row in matrix]
        if len(rows) != target.nvars or any(len(r) != source.nvars for r in rows):
            raise ValueError("matrix shape must be (target vars) x (source vars)")
        images = []
        for i in range(source.nvars):
            images.append(target.linear_form([rows[j][i] for j in range(target.nvars)]))
        return cls(source, target, images)

    def matrix(self):
        cols = [f.linear_coeffs() for f in self.images]
        return tuple(
            tuple(cols[i][j] for i in range(self.source.nvars))
            for j in range(self.target.nvars)
        )

    def apply(self, f):
        if f.ring != self.source:
            if f.ring.field != self.source.field:
                raise FieldMismatch(f"{f.ring.field.name} vs {self.source.field.name}")
            raise RingMismatch(f"{f.ring!r} is not the source ring")
        out = self.target.zero()
        for exps, c in f.terms.items():
            term = self.target.constant(c)
            for i, e in enumerate(exps):
                if e and not term.is_zero():
                    term = term * self.images[i] ** e
            out = out + term
        return out

    def compose(self, inner):
        """self after inner (matrix product E_self . E_inner)."""
        if inner.target != self.source:
            raise RingMismatch("inner target must equal outer source")
        return GradedSubstitution(
            inner.source, self.target, [self.apply(f) for f in inner.images]
        )

    def is_idempotent(self):
        if self.source != self.target:
            return False
        return self.compose(self).images == self.images

    def restricted_endomorphism(self, indices):
        """Restriction of an endomorphism to a coordinate subspace.

        Requires every image of a kept variable to be supported on the kept
        variables.
        """
        if self.source != self.target:
            raise RingMismatch("restriction needs an endomorphism")
        indices = tuple(indices)
        keep = set(indices)
        sub = self.source.subring(indices)
        images = []
        for i in indices:
            vec = self.images[i].linear_coeffs()
            for j, c in enumerate(vec):
                if c != self.source.field.zero and j not in keep:
                    raise ValueError(
                        f"image of {self.source.names[i]} leaves the subspace"
                    )
            images.append(sub.linear_form([vec[j] for j in indices]))
        return GradedSubstitution(sub, sub, images)

    def __eq__(self, other):
        return (
            isinstance(other, GradedSubstitution)
            and other.source == self.source
            and other.target == self.target
            and other.images == self.images
        )

    def __repr__(self):
        maps = ", ".join(
            f"{n} -> {poly_to_str(f)}" for n, f in zip(self.source.names, self.images)
        )
        return f"GradedSubstitution({maps})"


def apply_substitution(f, sigma):
    return sigma.apply(f)


def compose(sigma, tau):
    return sigma.compose(tau)


# ---------------------------------------------------------------------------
# Exact row reduction
# ---------------------------------------------------------------------------

class LinearSpan:
    """A subspace of k^ncols kept in reduced row echelon form.

    Rows are sorted by pivot column, pivots are 1 and are the only nonzero
    entry of their column, so ``canonical()`` is a unique representation of
    the row space.
    """

    __slots__ = ("field", "ncols", "rows", "pivots")

    def __init__(self, field, ncols):
        self.field = field
        self.ncols = ncols
        self.rows = []
        self.pivots = []

    @property
    def rank(self):
        return len(self.rows)

    def copy(self):
        dup = LinearSpan(self.field, self.ncols)
        dup.rows = [list(r) for r in self.rows]
        dup.pivots = list(self.pivots)
        return dup

    def reduce(self, vec):
        field = self.field
        v = list(vec)
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c != field.zero:
                for j in range(piv, self.ncols):
                    v[j] = field.sub(v[j], field.mul(c, row[j]))
        return v

    def contains(self, vec):
        zero = self.field.zero
        return all(c == zero for c in self.reduce(vec))

    def insert(self, vec):
        """Add a vector; returns True when the rank grew."""
        field = self.field
        v = self.reduce(vec)
        piv = next((j for j, c in enumerate(v) if c != field.zero), None)
        if piv is None:
            return False
        scale = field.inv(v[piv])
        v = [field.mul(c, scale) for c in v]
        for row in self.rows:
            c = row[piv]
            if c != field.zero:
                for j in range(piv, self.ncols):
                    row[j] = field.sub(row[j], field.mul(c, v[j]))
        at = next((k for k, q in enumerate(self.pivots) if q > piv), len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, piv)
        return True

    def canonical(self):
        return tuple(tuple(row) for row in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, LinearSpan)
            and other.field == self.field
            and other.ncols == self.ncols
            and other.canonical() == self.canonical()
        )

    def __repr__(self):
        return f"LinearSpan(rank={self.rank}, ncols={self.ncols})"


def left_nullspace(rows, field):
    """Coefficient vectors c with sum(c[k] * rows[k]) = 0, via [M | I] reduction."""
    nrows = len(rows)
    if nrows == 0:
        return []
    ncols = len(rows[0])
    span = LinearSpan(field, ncols + nrows)
    for k, row in enumerate(rows):
        aug = list(row) + [field.zero] * nrows
        aug[ncols + k] = field.one
        span.insert(aug)
    kernel = []
    for row, piv in zip(span.rows, span.pivots):
        if piv >= ncols:
            kernel.append(tuple(row[ncols:]))
    return kernel


def span_intersection(a, b):
    """Intersection of two row spaces with identical ambient columns."""
    if a.ncols != b.ncols or a.field != b.field:
        raise RingMismatch("span ambient spaces differ")
    field = a.field
    out = LinearSpan(field, a.ncols)
    if a.rank == 0 or b.rank == 0:
        return out
    stacked = [list(r) for r in a.rows] + [list(r) for r in b.rows]
    for coeffs in left_nullspace(stacked, field):
        vec = [field.zero] * a.ncols
        for c, row in zip(coeffs[: a.rank], a.rows):
            if c != field.zero:
                for j in range(a.ncols):
                    vec[j] = field.add(vec[j], field.mul(c, row[j]))
        out.insert(vec)
    return out


def express_in_span(basis_rows, vec, field):
    """Coordinates of vec in the given independent rows, or None if outside."""
    n = len(basis_rows)
    if n == 0:
        return [] if all(c == field.zero for c in vec) else None
    ncols = len(basis_rows[0])
    span = LinearSpan(field, ncols + n)
    for k, row in enumerate(basis_rows):
        aug = list(row) + [field.zero] * n
        aug[ncols + k] = field.one
        span.insert(aug)
    residual = span.reduce(list(vec) + [field.zero] * n)
    if any(c != field.zero for c in residual[:ncols]):
        return None
    return [field.neg(c) for c in residual[ncols:]]


# ---------------------------------------------------------------------------
# Spans of linear forms (the span_ops bundle)
# ---------------------------------------------------------------------------

class SpanOps:
    """Rank / membership / basis-extraction over a list of linear forms."""

    def __init__(self, vectors):
        vectors = list(vectors)
        if not vectors:
            raise ValueError("span_ops needs at least one vector")
        ring = vectors[0].ring
        for f in vectors:
            if f.ring != ring:
                raise RingMismatch("span vectors live in different rings")
        self.ring = ring
        self.vectors = vectors
        self._coords = [f.linear_coeffs() for f in vectors]
        self._span = LinearSpan(ring.field, ring.nvars)
        self._basis_indices = []
        for idx, vec in enumerate(self._coords):
            if self._span.insert(vec):
                self._basis_indices.append(idx)

    @property
    def rank(self):
        return self._span.rank

    def in_span(self, f):
        if f.ring != self.ring:
            raise RingMismatch("membership test in a different ring")
        return self._span.contains(f.linear_coeffs())

    def extract_basis_indices(self):
        """Lexicographically-least index subset spanning the same space."""
        return tuple(self._basis_indices)

    def complement_basis_from(self, candidates, inside):
        """Greedily pick candidate indices extending span(inside) to this span.

        ``inside`` is an iterable of linear forms (or another SpanOps) whose
        span must be a subspace of this one; candidates must lie in this span.
        Raises ComplementInfeasible when the candidates cannot reach it.
        """
        field = self.ring.field
        working = LinearSpan(field, self.ring.nvars)
        inner = inside.vectors if isinstance(inside, SpanOps) else list(inside)
        for f in inner:
            vec = f.linear_coeffs()
            if not self._span.contains(vec):
                raise ValueError("subspace vector outside the ambient span")
            working.insert(vec)
        coords = []
        for f in candidates:
            vec = f.linear_coeffs()
            if not self._span.contains(vec):
                raise ValueError("candidate vector outside the ambient span")
            coords.append(vec)
        chosen = []
        for idx, vec in enumerate(coords):
            if working.rank == self.rank:
                break
            if working.insert(vec):
                chosen.append(idx)
        if working.rank != self.rank:
            raise ComplementInfeasible(
                f"candidates reach rank {working.rank} of {self.rank}"
            )
        return tuple(chosen)


def span_ops(vectors):
    return SpanOps(vectors)


# ---------------------------------------------------------------------------
# Graded pieces of homogeneous ideals
# ---------------------------------------------------------------------------

def count_monomials(nvars, d):
    return math.comb(nvars + d - 1, d) if nvars else (1 if d == 0 else 0)


@functools.lru_cache(maxsize=4096)
def _monomials_cached(nvars, d):
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), d, nvars)
    return tuple(out)


def monomials_of_degree(nvars, d):
    """All exponent tuples of total degree d, descending graded-lex."""
    if nvars == 0:
        return () if d else ((),)
    if count_monomials(nvars, d) > monomial_guard():
        raise GuardExceeded(
            f"degree-{d} monomial basis in {nvars} variables exceeds the guard"
        )
    return _monomials_cached(nvars, d)


def _nonzero_homogeneous(gens):
    out = []
    for g in gens:
        if g.is_zero():
            continue
        if not g.is_homogeneous():
            raise InhomogeneousInput(f"inhomogeneous generator: {g}")
        out.append(g)
    return out


def degree_piece_span(ring, gens, d):
    """LinearSpan of the degree-d piece, with its monomial column order."""
    cols = monomials_of_degree(ring.nvars, d)
    index = {m: k for k, m in enumerate(cols)}
    field = ring.field
    span = LinearSpan(field, len(cols))
    for g in _nonzero_homogeneous(gens):
        gdeg = g.homogeneous_degree()
        if gdeg > d:
            continue
        for m in monomials_of_degree(ring.nvars, d - gdeg):
            vec = [field.zero] * len(cols)
            for exps, c in g.terms.items():
                shifted = tuple(a + b for a, b in zip(exps, m))
                vec[index[shifted]] = c
            span.insert(vec)
    return span, cols


def graded_piece(gens, d):
    """Reduced basis of the degree-d component of the ideal the gens generate."""
    gens = list(gens)
    if not gens:
        raise ValueError("graded_piece of an empty generator list")
    ring = gens[0].ring
    span, cols = degree_piece_span(ring, gens, d)
    basis = []
    for row in span.rows:
        terms = {m: c for m, c in zip(cols, row) if c != ring.field.zero}
        basis.append(Polynomial(ring, terms))
    return basis


def ideal_contains(f, gens):
    """Membership of a homogeneous f in the ideal generated by homogeneous gens."""
    if f.is_zero():
        return True
    if not f.is_homogeneous():
        raise InhomogeneousInput(f"inhomogeneous membership query: {f}")
    gens = _nonzero_homogeneous(gens)
    if any(g.homogeneous_degree() == 0 for g in gens):
        return True
    if not gens:
        return False
    d = f.homogeneous_degree()
    span, cols = degree_piece_span(f.ring, gens, d)
    index = {m: k for k, m in enumerate(cols)}
    vec = [f.ring.field.zero] * len(cols)
    for exps, c in f.terms.items():
        vec[index[exps]] = c
    return span.contains(vec)


def ideal_equal(gens_a, gens_b):
    """Equality of homogeneous ideals via graded pieces up to max generator degree."""
    gens_a = _nonzero_homogeneous(gens_a)
    gens_b = _nonzero_homogeneous(gens_b)
    unit_a = any(g.homogeneous_degree() == 0 for g in gens_a)
    unit_b = any(g.homogeneous_degree() == 0 for g in gens_b)
    if unit_a or unit_b:
        return unit_a == unit_b
    if not gens_a or not gens_b:
        return not gens_a and not gens_b
    ring = gens_a[0].ring
    if any(g.ring != ring for g in itertools.chain(gens_a, gens_b)):
        raise RingMismatch("ideal_equal across rings")
    top = max(g.homogeneous_degree() for g in itertools.chain(gens_a, gens_b))
    for d in range(1, top + 1):
        span_a, _ = degree_piece_span(ring, gens_a, d)
        span_b, _ = degree_piece_span(ring, gens_b, d)
        if span_a.canonical() != span_b.canonical():
            return False
    return True
