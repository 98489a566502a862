"""Simplicial complexes, the complex <-> squarefree-ideal dictionary,
restrictions, and brute-force complex isomorphism."""

from __future__ import annotations

import itertools

from .errors import GuardExceeded, NonSquarefree, UnitIdeal
from .monideal import MonomialIdeal, exp_support, minimal_hitting_sets

NONFACE_SCAN_GUARD = 20
ISO_GUARD = 9


class SimplicialComplex:
    """Downward-closed face family, stored by its facets (an antichain).

    Vertices that appear in no facet are permitted ("phantom"); the effective
    vertex set used for ring construction is the union of the facets.
    """

    __slots__ = ("vertices", "facets")

    def __init__(self, vertices, facets):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"duplicate vertices: {self.vertices}")
        n = len(self.vertices)
        sets = []
        for f in facets:
            fs = frozenset(int(v) for v in f)
            if not all(0 <= v < n for v in fs):
                raise ValueError(f"facet {sorted(fs)} out of range")
            sets.append(fs)
        maximal = [f for f in sets if not any(f < g for g in sets)]
        uniq = sorted(set(maximal), key=lambda f: (len(f), sorted(f)))
        if not uniq:
            uniq = [frozenset()]
        self.facets = tuple(tuple(sorted(f)) for f in uniq)

    @classmethod
    def from_names(cls, vertices, facet_names):
        vertices = tuple(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        return cls(vertices, [[pos[v] for v in f] for f in facet_names])

    def facet_names(self):
        return tuple(tuple(self.vertices[i] for i in f) for f in self.facets)

    def effective_vertices(self):
        out = set()
        for f in self.facets:
            out.update(f)
        return tuple(sorted(out))

    def phantom_vertices(self):
        eff = set(self.effective_vertices())
        return tuple(i for i in range(len(self.vertices)) if i not in eff)

    def is_face(self, subset):
        s = set(subset)
        return any(s <= set(f) for f in self.facets)

    def faces(self):
        """All faces (exponential; test/oracle use only)."""
        seen = set()
        for f in self.facets:
            for k in range(len(f) + 1):
                for sub in itertools.combinations(f, k):
                    seen.add(sub)
        return sorted(seen, key=lambda f: (len(f), f))

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialComplex)
            and other.vertices == self.vertices
            and other.facets == self.facets
        )

    def __hash__(self):
        return hash((self.vertices, self.facets))

    def __repr__(self):
        facets = ", ".join("{" + ",".join(map(str, f)) + "}" for f in self.facet_names())
        return f"SimplicialComplex({','.join(self.vertices)}; facets {facets})"


def stanley_reisner_ideal(cx):
    """Minimal non-faces of the complex, as a squarefree ideal on the
    effective vertex set.

    Computed by an ascending-cardinality subset scan pruned by the non-faces
    already found.
    """
    eff = cx.effective_vertices()
    if len(eff) > NONFACE_SCAN_GUARD:
        raise GuardExceeded(f"non-face scan beyond {NONFACE_SCAN_GUARD} vertices")
    names = tuple(cx.vertices[i] for i in eff)
    pos = {v: k for k, v in enumerate(eff)}
    facets = [set(f) for f in cx.facets]
    nonfaces = []
    for size in range(2, len(eff) + 1):
        for sub in itertools.combinations(eff, size):
            s = set(sub)
            if any(nf <= s for nf in nonfaces):
                continue
            if not any(s <= f for f in facets):
                nonfaces.append(s)
    gens = []
    for nf in nonfaces:
        vec = [0] * len(eff)
        for v in nf:
            vec[pos[v]] = 1
        gens.append(tuple(vec))
    return MonomialIdeal(names, gens)


def complex_of_ideal(ideal):
    """The complex whose faces are the supports avoiding every generator.

    Facets are the complements of the minimal variable sets hitting all
    generator supports.
    """
    if not ideal.is_squarefree():
        raise NonSquarefree(f"{ideal!r} is not squarefree")
    if ideal.is_unit():
        raise UnitIdeal("no complex for the unit ideal")
    n = len(ideal.names)
    supports = [exp_support(g) for g in ideal.gens]
    covers = minimal_hitting_sets(supports)
    facets = [tuple(i for i in range(n) if i not in set(c)) for c in covers]
    return SimplicialComplex(ideal.names, facets)


def restriction(cx, vertex_names):
    """The subcomplex of faces contained in the given vertex subset."""
    keep = []
    for v in vertex_names:
        if v not in cx.vertices:
            raise ValueError(f"unknown vertex {v!r}")
        keep.append(cx.vertices.index(v))
    keep_set = set(keep)
    new_names = tuple(cx.vertices[i] for i in sorted(keep_set))
    pos = {i: k for k, i in enumerate(sorted(keep_set))}
    cut = [[pos[i] for i in f if i in keep_set] for f in cx.facets]
    return SimplicialComplex(new_names, cut)


def is_isomorphic(a, b, guard=ISO_GUARD):
    """Exhaustive isomorphism test on effective vertices, with a witness map.

    Returns (flag, witness) where witness maps vertex names of ``a`` onto
    vertex names of ``b`` when flag is True.
    """
    eff_a = a.effective_vertices()
    eff_b = b.effective_vertices()
    if len(eff_a) != len(eff_b):
        return False, None
    if len(eff_a) > guard:
        raise GuardExceeded(f"isomorphism search beyond {guard} vertices")
    fa = [frozenset(f) for f in a.facets]
    fb = {frozenset(f) for f in b.facets}
    if len(fa) != len(fb):
        return False, None
    if sorted(len(f) for f in fa) != sorted(len(f) for f in fb):
        return False, None
    for perm in itertools.permutations(eff_b):
        image = {u: v for u, v in zip(eff_a, perm)}
        if {frozenset(image[i] for i in f) for f in fa} == fb:
            witness = {a.vertices[u]: b.vertices[v] for u, v in image.items()}
            return True, witness
    return False, None
