"""Groebner bases over the field of p elements in the graded monomial order.

Only weight-homogeneous ideals are supported: that keeps normal forms
weight-homogeneous, which is what quotient graded algebras need.
"""

from __future__ import annotations

from .arith import validate_prime
from .rings import Element, WeightedRing, mono_div, mono_divides, mono_key, mono_mul


class GroebnerBasis:
    """A reduced Groebner basis of a weight-homogeneous ideal over Z/p."""

    def __init__(self, ring: WeightedRing, p: int, basis: list):
        self.ring = ring
        self.p = p
        self.basis = tuple(basis)
        self._leads = tuple(e.leading()[0] for e in self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def reduce(self, e: Element) -> Element:
        return normal_form(e, self)

    def contains(self, e: Element) -> bool:
        return not normal_form(e, self)

    def is_standard(self, mono) -> bool:
        """Whether a monomial is a normal-form (standard) monomial."""
        return not any(mono_divides(lead, mono) for lead in self._leads)


def _validate_relations(relations, p) -> WeightedRing:
    validate_prime(p)
    ring = None
    for r in relations:
        if ring is None:
            ring = r.ring
        elif r.ring is not ring:
            raise ValueError("relations live in different ambient rings")
        if r.mod != p:
            raise ValueError(f"relations must have mod-{p} coefficients")
        if not r.is_homogeneous():
            raise ValueError(f"inhomogeneous relation supplied: {r}")
    if ring is None:
        raise ValueError("cannot infer the ambient ring from an empty relation list")
    return ring


def _spoly(f: Element, g: Element, p: int) -> Element:
    mf, cf = f.leading()
    mg, cg = g.leading()
    lcm = mono_mul(mf, mono_sub_lcm(mg, mf))
    uf = _term(f.ring, mono_div(lcm, mf), pow(cf, -1, p), p)
    ug = _term(g.ring, mono_div(lcm, mg), pow(cg, -1, p), p)
    return uf * f - ug * g


def mono_sub_lcm(mg, mf):
    """Part of lcm(mf, mg) missing from mf."""
    have = dict(mf)
    out = []
    for g, e in mg:
        extra = e - have.get(g, 0)
        if extra > 0:
            out.append((g, extra))
    return tuple(out)


def _term(ring: WeightedRing, mono, coeff: int, p: int) -> Element:
    return ring.element({tuple(mono): coeff}, mod=p)


def normal_form(e: Element, gb: GroebnerBasis) -> Element:
    """Fully reduce e against the basis; deterministic and, for a Groebner
    basis, independent of reduction order."""
    if e.ring is not gb.ring:
        raise ValueError("element and basis live in different rings")
    if e.mod != gb.p:
        raise ValueError(f"normal form needs mod-{gb.p} coefficients")
    p = gb.p
    remainder = e.ring.zero(p)
    work = e
    while work:
        mono, coeff = work.leading()
        for b, lead in zip(gb.basis, gb._leads):
            if mono_divides(lead, mono):
                factor = _term(e.ring, mono_div(mono, lead),
                               coeff * pow(b.leading()[1], -1, p) % p, p)
                work = work - factor * b
                break
        else:
            move = _term(e.ring, mono, coeff, p)
            remainder = remainder + move
            work = work - move
    # reductions of a flagged input stay flagged; reduction itself drops nothing
    return e.ring.element(remainder.terms, mod=p, truncated=e.truncated)


def groebner_build(relations, p: int) -> GroebnerBasis:
    """Buchberger's algorithm followed by inter-reduction to the reduced basis."""
    relations = [r for r in relations if r]
    if not relations:
        raise ValueError("no nonzero relations supplied")
    ring = _validate_relations(relations, p)

    basis = []
    for r in relations:
        r = _monic(r, p)
        if r not in basis:
            basis.append(r)
    basis.sort(key=lambda e: mono_key(e.leading()[0]))

    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        i, j = pairs.pop(0)
        f, g = basis[i], basis[j]
        mf, mg = f.leading()[0], g.leading()[0]
        if not set(dict(mf)) & set(dict(mg)):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        s = _spoly(f, g, p)
        s = normal_form(s, GroebnerBasis(ring, p, basis))
        if s:
            basis.append(_monic(s, p))
            pairs.extend((len(basis) - 1, k) for k in range(len(basis) - 1))

    # minimalize: drop elements whose lead is divisible by another lead
    basis.sort(key=lambda e: mono_key(e.leading()[0]))
    minimal = []
    for b in basis:
        lead = b.leading()[0]
        if not any(mono_divides(m.leading()[0], lead) for m in minimal):
            minimal.append(b)
    # reduce tails against the rest
    reduced = []
    for i, b in enumerate(minimal):
        others = GroebnerBasis(ring, p, minimal[:i] + minimal[i + 1:]) \
            if len(minimal) > 1 else None
        reduced.append(_monic(normal_form(b, others), p) if others else b)
    reduced = [r for r in reduced if r]
    reduced.sort(key=lambda e: mono_key(e.leading()[0]))
    return GroebnerBasis(ring, p, reduced)


def groebner_normal_form(e: Element, gb: GroebnerBasis) -> Element:
    return normal_form(e, gb)


def _monic(e: Element, p: int) -> Element:
    c = e.leading()[1]
    if c == 1:
        return e
    return e * pow(c, -1, p)
