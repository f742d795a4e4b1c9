"""Operations on the mod-p associated graded of a pre-psi-p algebra.

A class in graded weight 2q is lifted to an integral element of weight
exactly 2q, the element is split into layers at level q, and P^i returns the
mod-p class of layer i in weight 2q + 2i(p-1); above the level the
operations vanish, and at the top they are the p-th power.  The checkers
verify the unstable-algebra axioms for these derived operations, degree by
degree, exactly within the truncation window.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .arith import adem_coefficient, lucas_binom  # noqa: F401 (re-exported API)
from .atiyah import AtiyahDecomposition, PrePsiAlgebra, atiyah_decompose, verify_welldefined
from .rings import Element, even_filtration
from .verdicts import PASS_UP_TO_TRUNCATION, Verdict


def decidable_degree(algebra: PrePsiAlgebra, degree: int):
    """True when graded statements in this degree are exactly decidable:
    either the degree is inside the truncation window, or the graded piece is
    structurally zero.  None means undecidable under truncation."""
    if degree <= algebra.ring.max_weight:
        return True
    if algebra.ring.max_monomial_weight() is not None:
        return True
    return None


@dataclass(frozen=True, eq=False)
class GradedClass:
    """An element of the mod-p associated graded in one even degree.

    The representative is weight-homogeneous, has coefficients in [0, p-1]
    and is in normal form whenever the algebra carries a graded Groebner
    basis.  Equality is by (ring, degree, representative): operation tables
    and splitting data belong to the algebra, not to its graded classes."""

    algebra: PrePsiAlgebra
    degree: int
    rep: Element

    def __eq__(self, other):
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self.degree == other.degree and self.rep == other.rep

    def __hash__(self):
        return hash((self.degree, self.rep))

    def __post_init__(self):
        if self.degree % 2 or self.degree < 0:
            raise ValueError(f"graded degrees are non-negative even integers, got {self.degree}")
        if self.rep.mod != self.algebra.p:
            raise ValueError("representative must have mod-p coefficients")
        if self.rep and self.rep.weight() != self.degree:
            raise ValueError(
                f"representative has weight {self.rep.weight()}, expected {self.degree}")
        if self.rep and not self.rep.is_homogeneous():
            raise ValueError("representative must be weight-homogeneous")

    def __bool__(self):
        return bool(self.rep)

    def _require_same(self, other):
        if self.algebra is not other.algebra:
            raise ValueError("classes live in different algebras")
        if self.degree != other.degree:
            raise ValueError(f"degrees differ: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._require_same(other)
        return gr_class_of_rep(self.algebra, self.rep + other.rep, self.degree)

    def __sub__(self, other):
        self._require_same(other)
        return gr_class_of_rep(self.algebra, self.rep - other.rep, self.degree)

    def __mul__(self, other):
        if isinstance(other, int):
            return gr_class_of_rep(self.algebra, self.rep * other, self.degree)
        if self.algebra is not other.algebra:
            raise ValueError("classes live in different algebras")
        degree = self.degree + other.degree
        if decidable_degree(self.algebra, degree) is None:
            raise ValueError(f"product degree {degree} is outside the truncation window")
        if degree > self.algebra.ring.max_weight:
            return zero_class(self.algebra, degree)
        return gr_class_of_rep(self.algebra, self.rep * other.rep, degree)

    __rmul__ = __mul__

    def pth_power(self) -> "GradedClass":
        degree = self.degree * self.algebra.p
        if decidable_degree(self.algebra, degree) is None:
            raise ValueError(f"p-th power degree {degree} is outside the truncation window")
        if degree > self.algebra.ring.max_weight:
            return zero_class(self.algebra, degree)
        return gr_class_of_rep(self.algebra, self.rep ** self.algebra.p, degree)

    def lift(self) -> Element:
        """The canonical integral lift of exact weight ``degree``."""
        return self.rep.integer_lift()

    def __str__(self):
        return f"[{self.rep}]@{self.degree}"


def zero_class(algebra: PrePsiAlgebra, degree: int) -> GradedClass:
    return GradedClass(algebra, degree, algebra.ring.zero(algebra.p))


def gr_class_of_rep(algebra: PrePsiAlgebra, rep: Element, degree: int) -> GradedClass:
    if algebra.graded_gb is not None and rep:
        rep = algebra.graded_gb.reduce(rep)
    rep = algebra.ring.element(rep.terms, mod=algebra.p)
    return GradedClass(algebra, degree, rep)


def gr_class(algebra: PrePsiAlgebra, e: Element, degree: int) -> GradedClass:
    """The class of an element in the given graded degree (its weight-degree
    homogeneous component reduced mod p, then normal-formed)."""
    degree = even_filtration(degree)
    if e.weight() < degree:
        raise ValueError(
            f"element has weight {e.weight()}, so it has no class in degree {degree}")
    if degree > algebra.ring.max_weight:
        if decidable_degree(algebra, degree):
            return zero_class(algebra, degree)
        raise ValueError(f"degree {degree} is outside the truncation window")
    comp = e.homogeneous_component(degree)
    if comp.mod is None:
        comp = comp.reduce_mod(algebra.p)
    return gr_class_of_rep(algebra, comp, degree)


# -- the operations ----------------------------------------------------------------


def _layer_class(algebra: PrePsiAlgebra, dr: AtiyahDecomposition, i: int,
                 degree: int) -> GradedClass:
    """Class of layer i of a level-(degree/2) splitting, with the standard
    conventions: p-th power at the top of level 0, zero above the level."""
    p, q = algebra.p, dr.level
    target = degree + 2 * i * (p - 1)
    if i > q:
        return zero_class(algebra, target)
    layer = dr.layers[1] if q == 0 else dr.layers[i]
    if target > algebra.ring.max_weight:
        if decidable_degree(algebra, target):
            return zero_class(algebra, target)
        raise ValueError(f"operation target degree {target} is outside the truncation window")
    return gr_class(algebra, layer, target)


def steenrod_P(algebra: PrePsiAlgebra, i: int, cls: GradedClass) -> GradedClass:
    """P^i on a graded class, derived from an Atiyah splitting of any lift of
    exact weight equal to the class degree."""
    if i < 0:
        raise ValueError("operation index must be non-negative")
    p = algebra.p
    q = cls.degree // 2
    target = cls.degree + 2 * i * (p - 1)
    if i > q or not cls:
        return zero_class(algebra, target)
    dr = atiyah_decompose(algebra, cls.lift(), q)
    return _layer_class(algebra, dr, i, cls.degree)


class DoubleDecomposition:
    """Layers of an element together with layers of each layer.

    ``second(i, j)`` is the j-th layer of the splitting of layer i taken at
    level q + i(p-1); indices beyond the available ranges give zero."""

    def __init__(self, algebra: PrePsiAlgebra, element: Element, level: int):
        self.algebra = algebra
        self.element = element
        self.level = level
        self.base = atiyah_decompose(algebra, element, level)
        self._second: dict = {}

    def layer(self, i: int) -> Element:
        if self.level == 0:
            return self.base.layers[1] if i == 0 else self.algebra.ring.zero()
        if i > self.level:
            return self.algebra.ring.zero()
        return self.base.layers[i]

    def _second_decomposition(self, i: int):
        if i not in self._second:
            layer = self.layer(i)
            level = self.level + i * (self.algebra.p - 1)
            self._second[i] = (
                atiyah_decompose(self.algebra, layer, level) if layer else None)
        return self._second[i]

    def second(self, i: int, j: int) -> Element:
        if i > self.level:
            return self.algebra.ring.zero()
        d = self._second_decomposition(i)
        level = self.level + i * (self.algebra.p - 1)
        if d is None or j > level:
            return self.algebra.ring.zero()
        if level == 0:
            return d.layers[1] if j == 0 else self.algebra.ring.zero()
        return d.layers[j]

    def second_class(self, i: int, j: int) -> GradedClass:
        target = 2 * self.level + 2 * (i + j) * (self.algebra.p - 1)
        return gr_class(self.algebra, self.second(i, j), target)


# -- sampling ------------------------------------------------------------------------


def graded_basis(algebra: PrePsiAlgebra, degree: int) -> list:
    """Monomial basis classes of one graded degree (standard monomials when a
    Groebner basis is attached)."""
    if degree > algebra.ring.max_weight:
        if decidable_degree(algebra, degree):
            return []
        raise ValueError(f"degree {degree} is outside the truncation window")
    gb = algebra.graded_gb
    predicate = gb.is_standard if gb is not None else None
    monos = algebra.ring.monomials_of_weight(degree, predicate=predicate)
    p = algebra.p
    return [GradedClass(algebra, degree, algebra.ring.element({m: 1}, mod=p))
            for m in monos]


def sample_classes(algebra: PrePsiAlgebra, degree: int, rng: random.Random,
                   count: int) -> list:
    """Monomial basis classes plus ``count`` random Z/p-combinations."""
    basis = graded_basis(algebra, degree)
    out = list(basis)
    p = algebra.p
    for _ in range(count):
        if not basis:
            break
        rep = algebra.ring.zero(p)
        for _ in range(rng.randrange(1, min(len(basis), 3) + 1)):
            cls = basis[rng.randrange(len(basis))]
            rep = rep + cls.rep * rng.randrange(1, p)
        cand = gr_class_of_rep(algebra, rep, degree)
        if cand:
            out.append(cand)
    return out


def interesting_degrees(algebra: PrePsiAlgebra, minimum: int = 0) -> list:
    """Even degrees up to the window with a nonzero graded piece."""
    out = []
    for degree in range(minimum, algebra.ring.max_weight + 1, 2):
        if degree == 0 or graded_basis(algebra, degree):
            out.append(degree)
    return out


# -- axiom checkers -------------------------------------------------------------------


def check_additivity(algebra: PrePsiAlgebra, degree: int, trials: int = 20,
                     seed: int = 0) -> Verdict:
    """P^i(a + b) = P^i(a) + P^i(b) on sampled pairs in one degree."""
    rng = random.Random(seed)
    q = degree // 2
    classes = sample_classes(algebra, degree, rng, trials)
    pairs = [(a, b) for a in classes for b in classes][: max(trials, len(classes)) * 4]
    checked = skipped = 0
    witness = None
    for a, b in pairs:
        for i in range(q + 1):
            target = degree + 2 * i * (algebra.p - 1)
            if decidable_degree(algebra, target) is None:
                skipped += 1
                continue
            lhs = steenrod_P(algebra, i, a + b)
            rhs = steenrod_P(algebra, i, a) + steenrod_P(algebra, i, b)
            if lhs == rhs:
                checked += 1
            else:
                witness = {"degree": degree, "i": i, "a": str(a.rep), "b": str(b.rep)}
                return Verdict.decide("additivity", checked, skipped, witness)
    return Verdict.decide("additivity", checked, skipped, witness)


def check_pth_power(algebra: PrePsiAlgebra, degree: int, trials: int = 10,
                    seed: int = 0) -> Verdict:
    """P^q is the p-th power map on degree 2q."""
    rng = random.Random(seed)
    q = degree // 2
    checked = skipped = 0
    witness = None
    for cls in sample_classes(algebra, degree, rng, trials):
        target = degree * algebra.p
        if decidable_degree(algebra, target) is None:
            skipped += 1
            continue
        if steenrod_P(algebra, q, cls) == cls.pth_power():
            checked += 1
        else:
            witness = {"degree": degree, "class": str(cls.rep)}
            break
    return Verdict.decide("pth-power", checked, skipped, witness)


def check_instability(algebra: PrePsiAlgebra, degree: int, trials: int = 10,
                      seed: int = 0) -> Verdict:
    """P^i vanishes above the level: P^i(c) = 0 for 2i > degree."""
    rng = random.Random(seed)
    q = degree // 2
    checked = 0
    witness = None
    for cls in sample_classes(algebra, degree, rng, trials):
        for i in range(q + 1, q + 4):
            if not steenrod_P(algebra, i, cls):
                checked += 1
            else:
                witness = {"degree": degree, "i": i, "class": str(cls.rep)}
                return Verdict.decide("instability", checked, 0, witness)
    return Verdict.decide("instability", checked, 0, witness)


def check_cartan(algebra: PrePsiAlgebra, deg1: int, deg2: int, trials: int = 10,
                 seed: int = 0) -> Verdict:
    """P^i(a*b) = sum over l+k=i of P^l(a) P^k(b) on sampled pairs."""
    rng = random.Random(seed)
    checked = skipped = 0
    witness = None
    product_degree = deg1 + deg2
    if decidable_degree(algebra, product_degree) is None:
        return Verdict(f"cartan@{deg1}x{deg2}", PASS_UP_TO_TRUNCATION, 0, 1)
    q1, q2 = deg1 // 2, deg2 // 2
    left = sample_classes(algebra, deg1, rng, trials)
    right = sample_classes(algebra, deg2, rng, trials)
    pairs = [(a, b) for a in left for b in right][: max(trials, 1) * 6]
    for a, b in pairs:
        ab = a * b
        for i in range(q1 + q2 + 1):
            target = product_degree + 2 * i * (algebra.p - 1)
            if decidable_degree(algebra, target) is None:
                skipped += 1
                continue
            lhs = steenrod_P(algebra, i, ab)
            rhs = zero_class(algebra, target)
            for l in range(i + 1):
                k = i - l
                if l > q1 or k > q2:
                    continue
                rhs = rhs + steenrod_P(algebra, l, a) * steenrod_P(algebra, k, b)
            if lhs == rhs:
                checked += 1
            else:
                witness = {"deg1": deg1, "deg2": deg2, "i": i,
                           "a": str(a.rep), "b": str(b.rep)}
                return Verdict.decide(f"cartan@{deg1}x{deg2}", checked, skipped, witness)
    return Verdict.decide(f"cartan@{deg1}x{deg2}", checked, skipped, witness)


def check_p0_identity(algebra: PrePsiAlgebra, degrees, trials: int = 10,
                      seed: int = 0) -> Verdict:
    """P^0 = Id on every sampled class of the listed degrees."""
    rng = random.Random(seed)
    checked = 0
    witness = None
    for degree in degrees:
        for cls in sample_classes(algebra, degree, rng, trials):
            if steenrod_P(algebra, 0, cls) == cls:
                checked += 1
            else:
                witness = {"degree": degree, "class": str(cls.rep),
                           "P0": str(steenrod_P(algebra, 0, cls).rep)}
                return Verdict.decide("p0-identity", checked, 0, witness)
    return Verdict.decide("p0-identity", checked, 0, witness)


def check_adem(algebra: PrePsiAlgebra, degree: int, trials: int = 6,
               seed: int = 0) -> Verdict:
    """The relations rewriting P^i P^j for i < pj, checked two ways: on the
    double layers r_(j,i) of sampled lifts, and by composing the derived
    operations on classes.  Both routes must agree."""
    rng = random.Random(seed)
    p = algebra.p
    q = degree // 2
    checked = skipped = 0
    witness = None
    if q == 0:
        return Verdict.decide("adem", 0, 0, None, ("degree 0 is trivial",))
    for cls in sample_classes(algebra, degree, rng, trials):
        if not cls:
            continue
        dd = DoubleDecomposition(algebra, cls.lift(), q)
        jmax = q + 2
        for j in range(1, jmax + 1):
            for i in range(1, p * j):
                target = degree + 2 * (i + j) * (p - 1)
                if decidable_degree(algebra, target) is None:
                    skipped += 1
                    continue
                lhs = dd.second_class(j, i)
                rhs = zero_class(algebra, target)
                for t in range(i // p + 1):
                    coeff = adem_coefficient(p, i, j, t)
                    if coeff:
                        rhs = rhs + dd.second_class(t, i + j - t) * coeff
                # composition route on classes, as a cross-check
                comp_lhs = steenrod_P(algebra, i, steenrod_P(algebra, j, cls))
                comp_rhs = zero_class(algebra, target)
                for t in range(i // p + 1):
                    coeff = adem_coefficient(p, i, j, t)
                    if coeff:
                        comp_rhs = comp_rhs + steenrod_P(
                            algebra, i + j - t, steenrod_P(algebra, t, cls)) * coeff
                if lhs != comp_lhs or rhs != comp_rhs:
                    witness = {"degree": degree, "i": i, "j": j, "class": str(cls.rep),
                               "note": "layer route and composition route disagree"}
                    return Verdict.decide("adem", checked, skipped, witness)
                if lhs == rhs:
                    checked += 1
                else:
                    witness = {"degree": degree, "i": i, "j": j, "class": str(cls.rep),
                               "lhs": str(lhs.rep), "rhs": str(rhs.rep)}
                    return Verdict.decide("adem", checked, skipped, witness)
    return Verdict.decide("adem", checked, skipped, witness)


def check_exactness(algebra: PrePsiAlgebra, degree: int, trials: int = 10,
                    seed: int = 0) -> Verdict:
    """Structural contract of produced splittings: exact layer sums, layer
    weight bounds, top layers equal to p-th powers."""
    rng = random.Random(seed)
    q = degree // 2
    checked = 0
    witness = None
    for cls in sample_classes(algebra, degree, rng, trials):
        if not cls:
            continue
        for level in sorted({q, max(q - 1, 0)}):
            d = atiyah_decompose(algebra, cls.lift(), level)
            issues = d.problems()
            if issues:
                witness = {"degree": degree, "level": level, "class": str(cls.rep),
                           "problems": issues}
                return Verdict.decide("atiyah-exactness", checked, 0, witness)
            checked += 1
    return Verdict.decide("atiyah-exactness", checked, 0, witness)


@dataclass
class Classification:
    """classify() output: the verdict aggregate plus the final label."""

    label: str
    verdicts: list

    @property
    def passed_structure(self) -> bool:
        return all(v.passed for v in self.verdicts
                   if v.name in ("atiyah-exactness", "well-definedness"))

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"classification": self.label,
                "verdicts": [v.to_dict() for v in self.verdicts]}


NOT_PRE_PSI = "not-pre-psi-p"
PRE_PSI = "pre-psi-p"
PSI_ALGEBRA = "psi-p-algebra"


def classify(algebra: PrePsiAlgebra, trials: int = 8, seed: int = 0,
             degrees=None) -> Classification:
    """Run the structural checks, then the unstable-algebra axiom suite, and
    aggregate into one of: not-pre-psi-p, pre-psi-p, psi-p-algebra."""
    if degrees is None:
        degrees = [d for d in interesting_degrees(algebra, 2)]
    verdicts = []

    structural = []
    for degree in degrees:
        structural.append(check_exactness(algebra, degree, trials, seed))
    merged = _merge(structural, "atiyah-exactness")
    verdicts.append(merged)

    wd_checked = wd_skipped = 0
    wd_witness = None
    rng = random.Random(seed)
    for degree in degrees:
        basis = graded_basis(algebra, degree)
        for cls in basis[:2]:
            v = verify_welldefined(algebra, cls.lift(), degree // 2,
                                   trials=max(2, trials // 2),
                                   seed=rng.randrange(2**30))
            wd_checked += v.checked
            wd_skipped += v.skipped
            if v.witness and wd_witness is None:
                wd_witness = v.witness
    verdicts.append(Verdict.decide("well-definedness", wd_checked, wd_skipped, wd_witness))

    verdicts.append(check_p0_identity(algebra, degrees, trials, seed))
    verdicts.append(_merge([check_adem(algebra, d, trials, seed) for d in degrees], "adem"))
    verdicts.append(_merge([check_additivity(algebra, d, trials, seed) for d in degrees],
                           "additivity"))
    verdicts.append(_merge([check_pth_power(algebra, d, trials, seed) for d in degrees],
                           "pth-power"))
    verdicts.append(_merge([check_instability(algebra, d, trials, seed) for d in degrees],
                           "instability"))
    cartans = []
    for d1 in degrees[:4]:
        for d2 in degrees[:4]:
            if d1 <= d2:
                cartans.append(check_cartan(algebra, d1, d2, max(2, trials // 2), seed))
    verdicts.append(_merge(cartans, "cartan"))

    by_name = {v.name: v for v in verdicts}
    structure_ok = all(by_name[k].passed for k in
                       ("atiyah-exactness", "well-definedness", "additivity",
                        "pth-power", "instability", "cartan"))
    if not structure_ok:
        label = NOT_PRE_PSI
    elif not (by_name["p0-identity"].passed and by_name["adem"].passed):
        label = PRE_PSI
    else:
        label = PSI_ALGEBRA
    return Classification(label, verdicts)


def _merge(verdicts, name: str) -> Verdict:
    checked = sum(v.checked for v in verdicts)
    skipped = sum(v.skipped for v in verdicts)
    witness = next((v.witness for v in verdicts if v.witness is not None), None)
    notes = tuple(n for v in verdicts for n in v.notes)
    return Verdict.decide(name, checked, skipped, witness, notes)
