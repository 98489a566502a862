"""Monomial ideals: support, restriction, primary decomposition of squarefree
ideals and irreducible decomposition of arbitrary monomial ideals.

Monomial ideals are field-free: they are determined by the variable names and
the antichain of minimal generators (exponent tuples).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NonSquarefree, RingMismatch, UnitIdeal
from .exactalg import QQ, PolyRing, grlex_key


def exp_support(exps):
    return tuple(j for j, e in enumerate(exps) if e)


def exp_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def exp_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def exp_degree(exps):
    return sum(exps)


def _minimalize(gens):
    """Antichain under divisibility, sorted descending graded-lex."""
    gens = sorted(set(gens), key=grlex_key)
    kept = []
    for g in gens:
        if not any(exp_divides(h, g) for h in kept):
            kept.append(g)
    return tuple(sorted(kept, key=grlex_key, reverse=True))


class MonomialIdeal:
    """A monomial ideal given by its minimal generators over named variables."""

    __slots__ = ("names", "gens")

    def __init__(self, names, generators):
        self.names = tuple(names)
        n = len(self.names)
        exps = []
        for g in generators:
            g = tuple(int(e) for e in g)
            if len(g) != n or any(e < 0 for e in g):
                raise ValueError(f"bad exponent vector {g} over {self.names}")
            exps.append(g)
        self.gens = _minimalize(exps)

    @classmethod
    def zero(cls, names):
        return cls(names, [])

    @classmethod
    def from_strings(cls, names, monomials):
        """Parse generators like "x*y" or "x^5" (coefficient 1 monomials)."""
        ring = PolyRing(names, QQ)
        exps = []
        for text in monomials:
            f = ring.parse(text)
            if len(f.terms) != 1:
                raise ValueError(f"not a monomial: {text!r}")
            ((e, c),) = f.terms.items()
            if c != QQ.one:
                raise ValueError(f"monomial generator must have coefficient 1: {text!r}")
            exps.append(e)
        return cls(names, exps)

    def _check_ring(self, other):
        if self.names != other.names:
            raise RingMismatch(f"{self.names} vs {other.names}")

    def is_zero(self):
        return not self.gens

    def is_unit(self):
        return any(exp_degree(g) == 0 for g in self.gens)

    def is_squarefree(self):
        return all(all(e <= 1 for e in g) for g in self.gens)

    def max_degree(self):
        return max((exp_degree(g) for g in self.gens), default=0)

    def contains(self, exps):
        """Monomial membership: some minimal generator divides the monomial."""
        exps = tuple(exps)
        if len(exps) != len(self.names):
            raise RingMismatch(f"exponent length {len(exps)} over {self.names}")
        return any(exp_divides(g, exps) for g in self.gens)

    def contains_poly(self, f):
        """A polynomial lies in a monomial ideal iff every support monomial does."""
        if f.ring.names != self.names:
            raise RingMismatch(f"{f.ring.names} vs {self.names}")
        return all(self.contains(e) for e in f.terms)

    def intersect(self, other):
        self._check_ring(other)
        if self.is_zero() or other.is_zero():
            return MonomialIdeal.zero(self.names)
        return MonomialIdeal(
            self.names, [exp_lcm(a, b) for a in self.gens for b in other.gens]
        )

    def plus(self, other):
        self._check_ring(other)
        return MonomialIdeal(self.names, list(self.gens) + list(other.gens))

    def radical(self):
        return MonomialIdeal(
            self.names, [tuple(1 if e else 0 for e in g) for g in self.gens]
        )

    def restrict(self, indices):
        """The ideal I_W of k[x_i : i in W], W given as variable indices.

        Its generators are the minimal generators of I supported inside W;
        any monomial of I lying in the subring is divisible by one of them.
        """
        indices = tuple(indices)
        keep = set(indices)
        if not keep <= set(range(len(self.names))):
            raise RingMismatch(f"indices {indices} out of range for {self.names}")
        sub_names = tuple(self.names[i] for i in indices)
        gens = [
            tuple(g[i] for i in indices)
            for g in self.gens
            if set(exp_support(g)) <= keep
        ]
        return MonomialIdeal(sub_names, gens)

    def support(self):
        """Indices of the variables dividing some minimal generator."""
        out = set()
        for g in self.gens:
            out.update(exp_support(g))
        return tuple(sorted(out))

    def generators_as_polys(self, ring):
        if ring.names != self.names:
            raise RingMismatch(f"{ring.names} vs {self.names}")
        return [ring.monomial(g) for g in self.gens]

    def generator_strings(self):
        ring = PolyRing(self.names, QQ)
        return [str(ring.monomial(g)) for g in self.gens]

    def monomials_up_to(self, max_degree):
        """All monomials of the ideal with total degree <= max_degree (oracle use)."""
        n = len(self.names)
        for d in range(max_degree + 1):
            for exps in itertools.combinations_with_replacement(range(n), d):
                vec = [0] * n
                for i in exps:
                    vec[i] += 1
                vec = tuple(vec)
                if self.contains(vec):
                    yield vec

    def __eq__(self, other):
        return (
            isinstance(other, MonomialIdeal)
            and other.names == self.names
            and other.gens == self.gens
        )

    def __hash__(self):
        return hash((self.names, self.gens))

    def __repr__(self):
        if self.is_zero():
            return f"MonomialIdeal(0; {','.join(self.names)})"
        return f"MonomialIdeal({', '.join(self.generator_strings())})"


@dataclass(frozen=True, order=True)
class LinearPrime:
    """A prime generated by variables, stored as a sorted index tuple."""

    indices: tuple

    def as_ideal(self, names):
        gens = []
        for i in self.indices:
            vec = [0] * len(names)
            vec[i] = 1
            gens.append(tuple(vec))
        return MonomialIdeal(names, gens)

    def variable_names(self, names):
        return tuple(names[i] for i in self.indices)


def minimal_hitting_sets(sets):
    """All minimal sets meeting every member of ``sets`` (deterministic order)."""
    partial = [frozenset()]
    for s in sets:
        s = frozenset(s)
        nxt = set()
        for t in partial:
            if t & s:
                nxt.add(t)
            else:
                for v in sorted(s):
                    nxt.add(t | {v})
        pruned = []
        for t in sorted(nxt, key=lambda t: (len(t), sorted(t))):
            if not any(k < t for k in pruned):
                pruned.append(t)
        partial = pruned
    return [tuple(sorted(t)) for t in sorted(partial, key=lambda t: (len(t), sorted(t)))]


def primary_decomposition_squarefree(ideal):
    """The irredundant prime decomposition of a squarefree monomial ideal.

    The components are the complements of the facets of the associated
    complex, i.e. the minimal variable sets hitting every generator support.
    The zero ideal yields the empty (degenerate) decomposition by convention.
    """
    if not ideal.is_squarefree():
        raise NonSquarefree(f"{ideal!r} is not squarefree")
    if ideal.is_unit():
        raise UnitIdeal("primary decomposition of the unit ideal")
    if ideal.is_zero():
        return []
    supports = [exp_support(g) for g in ideal.gens]
    return [LinearPrime(h) for h in minimal_hitting_sets(supports)]


def _pure_power(exps):
    return len(exp_support(exps)) <= 1


def irreducible_decomposition(ideal):
    """Unique irredundant decomposition into ideals of pure variable powers.

    A generator g = a*b with coprime a, b splits the ideal as
    ((a) + rest) intersect ((b) + rest); splitting repeatedly at the first
    support variable of the lexicographically-first mixed generator reaches
    components generated by powers of variables.
    """
    if ideal.is_unit():
        raise UnitIdeal("irreducible decomposition of the unit ideal")
    if ideal.is_zero():
        return [ideal]
    n = len(ideal.names)
    seen = {}

    def split(gens):
        if gens in seen:
            return seen[gens]
        mixed = next(
            (g for g in sorted(gens) if not _pure_power(g)),
            None,
        )
        if mixed is None:
            result = {gens}
        else:
            rest = [g for g in gens if g != mixed]
            j = exp_support(mixed)[0]
            head = tuple(mixed[j] if i == j else 0 for i in range(n))
            tail = tuple(0 if i == j else e for i, e in enumerate(mixed))
            left = MonomialIdeal(ideal.names, rest + [head]).gens
            right = MonomialIdeal(ideal.names, rest + [tail]).gens
            result = split(left) | split(right)
        seen[gens] = result
        return result

    components = [MonomialIdeal(ideal.names, gens) for gens in split(ideal.gens)]
    components = list({c: None for c in components})
    kept = []
    for c in components:
        others = [d for d in components if d is not c]
        contains_other = any(
            all(c.contains(g) for g in d.gens) for d in others
        )
        if not contains_other:
            kept.append(c)
    kept.sort(key=lambda c: (len(c.support()), c.support(), c.gens))
    return kept
