"""Built-in varieties with known closed-form counts.

Each entry builds the same equations over any supported field, declares its
dimension and singular-locus bound, and carries exact closed forms for the
point and singular counts where such forms exist.  The entries cover the
regimes the verification suite exercises: smooth and singular quadrics with
vertex a point or a line, smooth surfaces of degree 3 and 4, and a smooth
codimension-2 intersection of two quadrics.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ValidationError
from .gf import FieldElement, FieldSpec, field_of_order, int_element
from .mpoly import MultiPoly, make_poly
from .counting import VarietySpec, make_variety

__all__ = [
    "CATALOG",
    "CatalogEntry",
    "entry",
    "names",
    "sample_smooth_cubics",
    "weierstrass_cubic",
    "weierstrass_discriminant",
]


@dataclass(frozen=True)
class CatalogEntry:
    """A parameterized variety plus its exact ground truths.

    point_count / singular_count return closed-form exact values, or None
    where no closed form exists (the counts still come from enumeration).
    """

    name: str
    summary: str
    ambient_dim: int
    declared_dim: int
    multidegree: tuple[int, ...]
    singular_bound: Optional[int]
    support_note: str
    generators: Callable[[FieldSpec], tuple[MultiPoly, ...]]
    field_supported: Callable[[FieldSpec], bool]
    point_form: Optional[Callable[[int], int]]
    singular_form: Optional[Callable[[int], int]]

    def supports(self, q: int) -> bool:
        return self.field_supported(field_of_order(q))

    def build(self, q: int) -> VarietySpec:
        field = field_of_order(q)
        if not self.field_supported(field):
            raise ValidationError(
                f"catalog entry {self.name} does not support q = {q}: "
                f"{self.support_note}"
            )
        return make_variety(
            field,
            self.ambient_dim,
            self.generators(field),
            self.declared_dim,
            self.singular_bound,
        )

    def point_count(self, q: int) -> Optional[int]:
        return None if self.point_form is None else self.point_form(q)

    def singular_count(self, q: int) -> Optional[int]:
        return None if self.singular_form is None else self.singular_form(q)

    def smooth_count(self, q: int) -> Optional[int]:
        total = self.point_count(q)
        singular = self.singular_count(q)
        if total is None or singular is None:
            return None
        return total - singular


def _quadratic(field: FieldSpec, n_vars: int, terms: dict) -> tuple[MultiPoly, ...]:
    return (make_poly(field, (n_vars,), terms),)


def _conic_p2(field: FieldSpec) -> tuple[MultiPoly, ...]:
    one = field.one()
    return _quadratic(field, 3, {(1, 0, 1): one, (0, 2, 0): -one})


def _cone_p3(field: FieldSpec) -> tuple[MultiPoly, ...]:
    one = field.one()
    return _quadratic(field, 4, {(0, 2, 0, 0): one, (1, 0, 1, 0): -one})


def _smooth_quadric_p3(field: FieldSpec) -> tuple[MultiPoly, ...]:
    one = field.one()
    return _quadratic(field, 4, {(1, 0, 0, 1): one, (0, 1, 1, 0): -one})


def _cone_p4(field: FieldSpec) -> tuple[MultiPoly, ...]:
    one = field.one()
    return _quadratic(field, 5, {(1, 0, 0, 1, 0): one, (0, 1, 1, 0, 0): -one})


def _cone_line_p4(field: FieldSpec) -> tuple[MultiPoly, ...]:
    one = field.one()
    return _quadratic(field, 5, {(0, 2, 0, 0, 0): one, (1, 0, 1, 0, 0): -one})


def _fermat(degree: int):
    def build(field: FieldSpec) -> tuple[MultiPoly, ...]:
        one = field.one()
        terms = {}
        for i in range(4):
            mono = [0, 0, 0, 0]
            mono[i] = degree
            terms[tuple(mono)] = one
        return (make_poly(field, (4,), terms),)

    return build


def _two_quadrics_p4(field: FieldSpec) -> tuple[MultiPoly, ...]:
    one = field.one()
    squares = {tuple(2 if j == i else 0 for j in range(5)): one for i in range(5)}
    scaled = {
        tuple(2 if j == i else 0 for j in range(5)): field.from_index(i)
        for i in range(5)
        if i  # code 0 is the zero coefficient; drop the term
    }
    return (
        make_poly(field, (5,), squares),
        make_poly(field, (5,), scaled),
    )


def _any_field(_field: FieldSpec) -> bool:
    return True


def _char_not(*primes: int) -> Callable[[FieldSpec], bool]:
    def check(field: FieldSpec) -> bool:
        return field.p not in primes

    return check


def _odd_char_q5(field: FieldSpec) -> bool:
    return field.p != 2 and field.q >= 5


CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        name="conic-p2",
        summary="smooth conic X0*X2 - X1^2 in P^2",
        ambient_dim=2,
        declared_dim=1,
        multidegree=(2,),
        singular_bound=None,
        support_note="any field",
        generators=_conic_p2,
        field_supported=_any_field,
        point_form=lambda q: q + 1,
        singular_form=lambda q: 0,
    ),
    CatalogEntry(
        name="quadric-cone-p3",
        summary="rank-3 quadric X1^2 - X0*X2 in P^3, vertex a point",
        ambient_dim=3,
        declared_dim=2,
        multidegree=(2,),
        singular_bound=0,
        support_note="any field",
        generators=_cone_p3,
        field_supported=_any_field,
        point_form=lambda q: q * q + q + 1,
        singular_form=lambda q: 1,
    ),
    CatalogEntry(
        name="smooth-quadric-p3",
        summary="rank-4 quadric X0*X3 - X1*X2 in P^3",
        ambient_dim=3,
        declared_dim=2,
        multidegree=(2,),
        singular_bound=None,
        support_note="any field",
        generators=_smooth_quadric_p3,
        field_supported=_any_field,
        point_form=lambda q: (q + 1) ** 2,
        singular_form=lambda q: 0,
    ),
    CatalogEntry(
        name="quadric-cone-p4",
        summary="rank-4 quadric X0*X3 - X1*X2 in P^4, vertex a point",
        ambient_dim=4,
        declared_dim=3,
        multidegree=(2,),
        singular_bound=0,
        support_note="any field",
        generators=_cone_p4,
        field_supported=_any_field,
        point_form=lambda q: q * (q + 1) ** 2 + 1,
        singular_form=lambda q: 1,
    ),
    CatalogEntry(
        name="quadric-cone-line-p4",
        summary="rank-3 quadric X1^2 - X0*X2 in P^4, vertex a line",
        ambient_dim=4,
        declared_dim=3,
        multidegree=(2,),
        singular_bound=1,
        support_note="any field",
        generators=_cone_line_p4,
        field_supported=_any_field,
        point_form=lambda q: (q + 1) * (q * q + 1),
        singular_form=lambda q: q + 1,
    ),
    CatalogEntry(
        name="fermat-surface-d3",
        summary="Fermat cubic surface X0^3 + X1^3 + X2^3 + X3^3 in P^3",
        ambient_dim=3,
        declared_dim=2,
        multidegree=(3,),
        singular_bound=None,
        support_note="needs characteristic coprime to 3",
        generators=_fermat(3),
        field_supported=_char_not(3),
        point_form=None,
        singular_form=lambda q: 0,
    ),
    CatalogEntry(
        name="fermat-surface-d4",
        summary="Fermat quartic surface X0^4 + X1^4 + X2^4 + X3^4 in P^3",
        ambient_dim=3,
        declared_dim=2,
        multidegree=(4,),
        singular_bound=None,
        support_note="needs odd characteristic",
        generators=_fermat(4),
        field_supported=_char_not(2),
        point_form=None,
        singular_form=lambda q: 0,
    ),
    CatalogEntry(
        name="two-quadrics-p4",
        summary="smooth intersection of sum(X_i^2) and sum(c_i*X_i^2) in P^4",
        ambient_dim=4,
        declared_dim=2,
        multidegree=(2, 2),
        singular_bound=None,
        support_note="needs odd characteristic and q >= 5 distinct coefficients",
        generators=_two_quadrics_p4,
        field_supported=_odd_char_q5,
        point_form=None,
        singular_form=lambda q: 0,
    ),
)


def names() -> tuple[str, ...]:
    return tuple(e.name for e in CATALOG)


def entry(name: str) -> CatalogEntry:
    for e in CATALOG:
        if e.name == name:
            return e
    raise ValidationError(
        f"unknown catalog entry {name!r}; known entries: {', '.join(names())}"
    )


# -- seeded smooth plane cubics -----------------------------------------------------


def weierstrass_discriminant(
    field: FieldSpec,
    a1: FieldElement,
    a2: FieldElement,
    a3: FieldElement,
    a4: FieldElement,
    a6: FieldElement,
) -> FieldElement:
    """Discriminant of the long Weierstrass cubic with these coefficients.

    Nonzero exactly when the projective cubic is smooth, in every
    characteristic including 2 and 3.
    """

    def n(c: int) -> FieldElement:
        return int_element(field, c)

    b2 = a1 * a1 + n(4) * a2
    b4 = n(2) * a4 + a1 * a3
    b6 = a3 * a3 + n(4) * a6
    b8 = a1 * a1 * a6 + n(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -(b2 * b2 * b8) - n(8) * b4 * b4 * b4 - n(27) * b6 * b6 + n(9) * b2 * b4 * b6


def weierstrass_cubic(
    field: FieldSpec,
    a1: FieldElement,
    a2: FieldElement,
    a3: FieldElement,
    a4: FieldElement,
    a6: FieldElement,
) -> MultiPoly:
    """Homogeneous long Weierstrass cubic in (X0, X1, X2) = (x, y, z):
    y^2 z + a1 xyz + a3 y z^2 - x^3 - a2 x^2 z - a4 x z^2 - a6 z^3."""
    terms = {
        (0, 2, 1): field.one(),
        (1, 1, 1): a1,
        (0, 1, 2): a3,
        (3, 0, 0): -field.one(),
        (2, 0, 1): -a2,
        (1, 0, 2): -a4,
        (0, 0, 3): -a6,
    }
    return make_poly(field, (3,), {m: c for m, c in terms.items() if not c.is_zero()})


def sample_smooth_cubics(
    field: FieldSpec, count: int, seed: int
) -> tuple[VarietySpec, ...]:
    """Seeded sample of smooth plane cubic curves, as declared-smooth
    varieties; smoothness is certified by a nonzero discriminant."""
    if count < 1:
        raise ValidationError(f"sample count {count} < 1")
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a1, a2, a3, a4, a6 = (
            field.from_index(rng.randrange(field.q)) for _ in range(5)
        )
        if weierstrass_discriminant(field, a1, a2, a3, a4, a6).is_zero():
            continue
        cubic = weierstrass_cubic(field, a1, a2, a3, a4, a6)
        out.append(make_variety(field, 2, (cubic,), 1, None))
    return tuple(out)
