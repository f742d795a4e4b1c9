"""Distinguished-endomorphism structures and the decomposition calculus.

A pre-psi-p algebra is a weighted ring with a prime p and, for every
generator g of weight 2*sigma, a chosen splitting of psi(g) into layers

    psi(g) = p^sigma g_0 + p^(sigma-1) g_1 + ... + p g_(sigma-1) + g_sigma,

with g_i of weight >= 2*sigma + 2*i*(p-1) and g_sigma = g^p.  The calculus
below extends such splittings to arbitrary elements: products convolve
layers, sums absorb the higher-level summand into layer 0 (with the binomial
correction making the top layer an honest p-th power), and a splitting at
level q can be pushed down to any lower level.  Everything is exact integer
arithmetic; the only approximation in the system is the weight truncation of
the ambient ring, which the sticky ``truncated`` flags record.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .arith import fermat_quotient, validate_prime
from .rings import UNIT, Element, WeightedRing, mono_key
from .verdicts import Verdict


class PrePsiAlgebra:
    """A weighted ring with a prime p and per-generator layer data.

    ``psi_data`` maps generator keys to layer tuples; the endomorphism psi is
    the unique ring-map extension of the layer sums (it fixes integers).  An
    optional Groebner basis over Z/p realizes the graded quotient when the
    algebra presents one (e.g. lifts of presented unstable algebras).
    """

    def __init__(self, ring: WeightedRing, p: int, psi_data: dict,
                 graded_gb=None, name: str = ""):
        self.ring = ring
        self.p = validate_prime(p)
        self.name = name
        self.graded_gb = graded_gb
        data = {}
        for g in ring.generators:
            if g.key not in psi_data:
                raise ValueError(f"missing psi layer data for generator {g}")
            layers = tuple(psi_data[g.key])
            sigma = g.weight // 2
            if len(layers) != sigma + 1:
                raise ValueError(
                    f"generator {g} has weight {g.weight}; expected {sigma + 1} layers, "
                    f"got {len(layers)}")
            for i, layer in enumerate(layers):
                if layer.ring is not ring or layer.mod is not None:
                    raise ValueError(f"layer {i} of {g} is not an integral element of the ring")
                if layer.weight() < g.weight + 2 * i * (p - 1):
                    raise ValueError(
                        f"layer {i} of {g} has weight {layer.weight()}, "
                        f"below the bound {g.weight + 2 * i * (p - 1)}")
            top = ring.var(g) ** p
            if layers[sigma] != top:
                raise ValueError(f"top layer of {g} must equal {g}^{p}")
            data[g.key] = layers
        self.psi_data = data
        self._psi_images = {
            key: sum((layers[i] * p ** (len(layers) - 1 - i) for i in range(len(layers))),
                     ring.zero())
            for key, layers in data.items()
        }

    def apply_psi(self, e: Element) -> Element:
        """The ring endomorphism determined by the generator data."""
        if e.ring is not self.ring:
            raise ValueError("element lives in a different ambient ring")
        if e.mod is not None:
            raise ValueError("psi acts on the integral layer")
        return e.substitute(self._psi_images)

    def psi_of_generator(self, key) -> Element:
        return self._psi_images[key]

    def generator_decomposition(self, g) -> "AtiyahDecomposition":
        layers = self.psi_data[g.key]
        return AtiyahDecomposition(self, self.ring.var(g), g.weight // 2, layers)

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"PrePsiAlgebra(p={self.p}{tag}, {self.ring!r})"


@dataclass(frozen=True)
class AtiyahDecomposition:
    """A splitting psi(source) = sum_i p^(level-i) * layers[i].

    For level 0 the layers are the pair (r', r^p) with
    psi(source) = p*r' + r^p.  For level q >= 1 there are q+1 layers with
    layers[q] = source^p.
    """

    algebra: PrePsiAlgebra
    source: Element
    level: int
    layers: tuple

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        expected = 2 if self.level == 0 else self.level + 1
        if len(self.layers) != expected:
            raise ValueError(
                f"level-{self.level} decomposition needs {expected} layers, "
                f"got {len(self.layers)}")

    @property
    def truncated(self) -> bool:
        return self.source.truncated or any(l.truncated for l in self.layers)

    def weighted_sum(self) -> Element:
        p = self.algebra.p
        if self.level == 0:
            return self.layers[0] * p + self.layers[1]
        return sum((self.layers[i] * p ** (self.level - i) for i in range(self.level + 1)),
                   self.algebra.ring.zero())

    def problems(self) -> list:
        """Violations of the defining contract, as human-readable strings."""
        out = []
        p, q = self.algebra.p, self.level
        if self.weighted_sum() != self.algebra.apply_psi(self.source):
            out.append("weighted layer sum differs from psi(source)")
        if q == 0:
            if self.layers[1] != self.source**p:
                out.append("level-0 top is not source^p")
        else:
            if self.layers[q] != self.source**p:
                out.append("top layer is not source^p")
            for i, layer in enumerate(self.layers):
                if layer.weight() < 2 * q + 2 * i * (p - 1):
                    out.append(
                        f"layer {i} has weight {layer.weight()} < {2 * q + 2 * i * (p - 1)}")
        return out

    def __str__(self):
        body = ", ".join(str(l) for l in self.layers)
        return f"level {self.level}: ({body})"


def zero_decomposition(algebra: PrePsiAlgebra, q: int) -> AtiyahDecomposition:
    z = algebra.ring.zero()
    layers = (z, z) if q == 0 else tuple(z for _ in range(q + 1))
    return AtiyahDecomposition(algebra, z, q, layers)


def scalar_decomposition(algebra: PrePsiAlgebra, c: int) -> AtiyahDecomposition:
    """Level-0 splitting of an integer: psi(c) = c = p*((c - c^p)/p) + c^p."""
    ring, p = algebra.ring, algebra.p
    return AtiyahDecomposition(
        algebra, ring.scalar(c), 0,
        (ring.scalar(fermat_quotient(c, p)), ring.scalar(c**p)))


def _binomial_correction(algebra: PrePsiAlgebra, r: Element, s: Element) -> Element:
    """c with (r+s)^p = r^p + s^p + p*c, namely sum_i binom(p,i)/p r^(p-i) s^i."""
    p = algebra.p
    total = algebra.ring.zero()
    for i in range(1, p):
        total = total + (math.comb(p, i) // p) * (r ** (p - i)) * (s**i)
    return total


def atiyah_sum(da: AtiyahDecomposition, db: AtiyahDecomposition) -> AtiyahDecomposition:
    """Combine splittings of r at level q and s at level v >= q into one for
    r+s at level q.

    The summand of higher level is absorbed: its layers s_j for j <= v-q fold
    into layer 0 with the appropriate p-powers, the remaining ones slide down
    by v-q, and the binomial correction keeps the top an exact p-th power.
    At v = q this is literally the textbook two-summand construction.
    """
    if da.algebra is not db.algebra:
        raise ValueError("decompositions live in different algebras")
    q, v = da.level, db.level
    if q > v:
        raise ValueError(f"first summand must have the lower level: {q} > {v}")
    A = da.algebra
    p = A.p
    r, s = da.source, db.source
    t = r + s
    c = _binomial_correction(A, r, s)
    if q == 0:
        if v == 0:
            absorbed = db.layers[0]
        else:
            absorbed = sum((db.layers[j] * p ** (v - 1 - j) for j in range(v)),
                           A.ring.zero())
        return AtiyahDecomposition(A, t, 0, (da.layers[0] + absorbed - c, t**p))
    layers = [A.ring.zero() for _ in range(q + 1)]
    layers[q] = t**p
    layers[q - 1] = layers[q - 1] - c
    for i in range(q):
        layers[i] = layers[i] + da.layers[i]
    for j in range(v):
        idx = j - (v - q)
        if idx <= 0:
            layers[0] = layers[0] + db.layers[j] * p ** (v - q - j)
        else:
            layers[idx] = layers[idx] + db.layers[j]
    return AtiyahDecomposition(A, t, q, tuple(layers))


def atiyah_product(da: AtiyahDecomposition, db: AtiyahDecomposition) -> AtiyahDecomposition:
    """Splitting of the product: layers convolve, levels add."""
    if da.algebra is not db.algebra:
        raise ValueError("decompositions live in different algebras")
    A = da.algebra
    p = A.p
    m, n = da.level, db.level
    r, s = da.source, db.source
    rs = r * s
    if m == 0 and n == 0:
        rp, rpow = da.layers
        sp, spow = db.layers
        tprime = rp * sp * p + rp * spow + rpow * sp
        return AtiyahDecomposition(A, rs, 0, (tprime, rs**p))
    if m == 0:
        rprime, rpow = da.layers
        layers = []
        for j in range(n):
            c = rpow * db.layers[j] + rprime * db.layers[j + 1]
            if j == 0:
                c = c + rprime * db.layers[0] * p
            layers.append(c)
        layers.append(rs**p)
        return AtiyahDecomposition(A, rs, n, tuple(layers))
    if n == 0:
        return atiyah_product(db, da)
    layers = [A.ring.zero() for _ in range(m + n + 1)]
    for l in range(m + 1):
        for k in range(n + 1):
            layers[l + k] = layers[l + k] + da.layers[l] * db.layers[k]
    return AtiyahDecomposition(A, rs, m + n, tuple(layers))


def atiyah_shift(d: AtiyahDecomposition) -> AtiyahDecomposition:
    """Rewrite a level-q splitting (q >= 1) as a level-(q-1) one: all layers
    pick up a factor p and the two below the top merge."""
    q = d.level
    if q == 0:
        raise ValueError("cannot shift a level-0 decomposition")
    A, p = d.algebra, d.algebra.p
    if q == 1:
        return AtiyahDecomposition(A, d.source, 0, (d.layers[0], d.layers[1]))
    new = [d.layers[i] * p for i in range(q - 2)]
    new.append(d.layers[q - 2] * p + d.layers[q - 1])
    new.append(d.layers[q])
    return AtiyahDecomposition(A, d.source, q - 1, tuple(new))


def atiyah_decompose(algebra: PrePsiAlgebra, e: Element, q: int) -> AtiyahDecomposition:
    """Canonical splitting of an arbitrary element at level q <= weight(e)/2.

    Recursion over the polynomial expression: generators use their stored
    layers, monomials multiply them together, integer coefficients enter
    through the Fermat-quotient rule at level 0, and the term splittings are
    folded together lowest level first, then shifted down to the requested q.
    """
    if e.ring is not algebra.ring:
        raise ValueError("element lives in a different ambient ring")
    if e.mod is not None:
        raise ValueError("decompositions are taken in the integral layer")
    if not e:
        raise ValueError("cannot decompose the zero element")
    if 2 * q > e.weight():
        raise ValueError(f"element has weight {e.weight()}, below the requested 2q={2 * q}")
    if q < 0:
        raise ValueError("level must be non-negative")

    pieces = []
    for m, coeff in sorted(e.terms.items(), key=lambda t: mono_key(t[0])):
        if m == UNIT:
            pieces.append(scalar_decomposition(algebra, coeff))
            continue
        d = None
        for g, exp in m:
            gd = algebra.generator_decomposition(g)
            for _ in range(exp):
                d = gd if d is None else atiyah_product(d, gd)
        if coeff != 1:
            d = atiyah_product(scalar_decomposition(algebra, coeff), d)
        pieces.append(d)
    pieces.sort(key=lambda d: d.level)
    acc = pieces[0]
    for nxt in pieces[1:]:
        acc = atiyah_sum(acc, nxt)
    while acc.level > q:
        acc = atiyah_shift(acc)
    return acc


def explicit_lift_decomposition(algebra: PrePsiAlgebra, r: Element,
                                dr: AtiyahDecomposition, h: Element,
                                f: Element) -> AtiyahDecomposition:
    """The explicit splitting of s = r + p*h + f built from splittings of h
    and f and the element gamma with r^p + p*h^p + f^p = s^p + p*gamma.

    This is the well-definedness construction; it serves as an independent
    oracle against ``atiyah_decompose`` applied to s.  Requires level >= 1,
    weight(h) >= 2q and weight(f) >= 2q+2.
    """
    p, q = algebra.p, dr.level
    if q < 1:
        raise ValueError("the explicit construction needs level >= 1")
    if h.weight() < 2 * q:
        raise ValueError("h must lie in filtration 2q")
    if f.weight() < 2 * q + 2:
        raise ValueError("f must lie in filtration 2q+2")
    s = r + h * p + f
    dh = atiyah_decompose(algebra, h, q) if h else zero_decomposition(algebra, q)
    n = (f.weight() - 2 * q) // 2 if f else 1
    df = atiyah_decompose(algebra, f, q + n) if f else zero_decomposition(algebra, q + n)
    gamma = (r**p + (h**p) * p + f**p - s**p).exact_div(p)

    layers = []
    for i in range(q - 1):
        layers.append(dr.layers[i] + dh.layers[i] * p + df.layers[i] * p**n)
    near_top = dr.layers[q - 1] + dh.layers[q - 1] * p + gamma
    for j in range(q - 1, q + n):
        near_top = near_top + df.layers[j] * p ** (q + n - 1 - j)
    layers.append(near_top)
    layers.append(s**p)
    return AtiyahDecomposition(algebra, s, q, tuple(layers))


# -- well-definedness verification ------------------------------------------------


def graded_classes_agree(algebra: PrePsiAlgebra, a: Element, b: Element,
                         weight: int):
    """Whether a and b have the same mod-p class in the given graded weight.

    Returns True/False, or None when the weight is outside the window and the
    graded piece is not structurally zero (undecidable under truncation).
    """
    if weight > algebra.ring.max_weight:
        bound = algebra.ring.max_monomial_weight()
        if bound is not None and weight > bound:
            return True
        return None
    diff = (a - b).homogeneous_component(weight).reduce_mod(algebra.p)
    if algebra.graded_gb is not None:
        diff = algebra.graded_gb.reduce(diff)
    return not diff


def random_element(algebra: PrePsiAlgebra, rng: random.Random, min_weight: int,
                   max_terms: int = 4, coeff_bound: int | None = None) -> Element:
    """A random integral element supported in weights >= min_weight."""
    ring, p = algebra.ring, algebra.p
    if coeff_bound is None:
        coeff_bound = p * p
    pool = []
    w = min_weight if min_weight % 2 == 0 else min_weight + 1
    while w <= ring.max_weight:
        pool.extend(ring.monomials_of_weight(w))
        w += 2
    if not pool:
        return ring.zero()
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        m = pool[rng.randrange(len(pool))]
        c = rng.randint(-coeff_bound, coeff_bound)
        terms[m] = terms.get(m, 0) + c
    return ring.element(terms)


def verify_welldefined(algebra: PrePsiAlgebra, e: Element, q: int,
                       trials: int = 20, seed: int = 0,
                       explicit_every: int = 5) -> Verdict:
    """Compare layer classes of e against randomized alternative lifts
    s = e + p*h + f, and (on a subsample) against the explicit construction.

    PASS means every compared class agreed in every graded weight that the
    truncation window can decide.
    """
    if e.weight() != 2 * q:
        raise ValueError(f"element must have weight exactly {2 * q}, got {e.weight()}")
    rng = random.Random(seed)
    p = algebra.p
    base = atiyah_decompose(algebra, e, q)
    checked = skipped = 0
    witness = None
    notes = []
    for t in range(trials):
        h = random_element(algebra, rng, min_weight=2 * q)
        f = random_element(algebra, rng, min_weight=2 * q + 2)
        s = e + h * p + f
        if not s:
            continue
        ds = atiyah_decompose(algebra, s, q)
        pairs = [(base.layers[1], ds.layers[1], 0)] if q == 0 else [
            (base.layers[i], ds.layers[i], i) for i in range(q + 1)]
        for la, lb, i in pairs:
            w = 2 * q + 2 * i * (p - 1)
            agree = graded_classes_agree(algebra, la, lb, w)
            if agree is None:
                skipped += 1
            elif agree:
                checked += 1
            elif witness is None:
                witness = {"trial": t, "layer": i, "weight": w,
                           "h": str(h), "f": str(f)}
        if witness is None and q >= 1 and explicit_every and t % explicit_every == 0:
            dx = explicit_lift_decomposition(algebra, e, base, h, f)
            if dx.weighted_sum() != algebra.apply_psi(s):
                witness = {"trial": t, "oracle": "explicit construction is inexact",
                           "h": str(h), "f": str(f)}
                continue
            for i in range(q + 1):
                w = 2 * q + 2 * i * (p - 1)
                agree = graded_classes_agree(algebra, dx.layers[i], ds.layers[i], w)
                if agree is None:
                    skipped += 1
                elif agree:
                    checked += 1
                elif witness is None:
                    witness = {"trial": t, "oracle": "explicit-vs-engine", "layer": i,
                               "weight": w, "h": str(h), "f": str(f)}
    notes.append(f"seed={seed}")
    return Verdict.decide("well-definedness", checked, skipped, witness, tuple(notes))
