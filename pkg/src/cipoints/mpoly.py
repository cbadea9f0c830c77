"""Sparse multivariate polynomials over a FieldSpec with variable groups.

A polynomial stores a sorted tuple of (monomial, coefficient) pairs — sparse,
canonical (no zero coefficients, graded-lexicographic term order), hashable.
Variables are globally indexed X0, X1, ...; the group structure is a tuple of
group sizes (n_i + 1 each) partitioning the variables into consecutive blocks,
which is what multihomogeneity is judged against.  m = 1 gives ordinary
homogeneous polynomials.

Derivatives are formal: in characteristic p the term p*c*X^{e-1} drops to
zero.  The degree of the zero polynomial is the sentinel MINUS_INFINITY.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .gf import Embedding, FieldElement, FieldSpec

# Degree sentinel for the zero polynomial; compares below every integer.
MINUS_INFINITY = float("-inf")

Monomial = tuple[int, ...]


def _grlex_key(mono: Monomial) -> tuple:
    return (sum(mono), mono)


@dataclass(frozen=True)
class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps monomials to nonzero coeffs."""

    field: FieldSpec
    group_sizes: tuple[int, ...]
    terms: tuple[tuple[Monomial, FieldElement], ...]

    @property
    def n_vars(self) -> int:
        return sum(self.group_sizes)

    @property
    def n_groups(self) -> int:
        return len(self.group_sizes)

    def is_zero(self) -> bool:
        return not self.terms

    def terms_dict(self) -> dict[Monomial, FieldElement]:
        return dict(self.terms)

    def coefficient(self, mono: Monomial) -> FieldElement:
        for m, c in self.terms:
            if m == mono:
                return c
        return self.field.zero()

    # -- ring operations (only what the toolkit needs: add, mul, scale) ------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_compatible(other)
        acc = dict(self.terms)
        for m, c in other.terms:
            if m in acc:
                s = acc[m] + c
                if s.is_zero():
                    del acc[m]
                else:
                    acc[m] = s
            else:
                acc[m] = c
        return make_poly(self.field, self.group_sizes, acc)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(
            self.field, self.group_sizes, tuple((m, -c) for m, c in self.terms)
        )

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_compatible(other)
        acc: dict[Monomial, FieldElement] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                if m in acc:
                    s = acc[m] + c
                    if s.is_zero():
                        del acc[m]
                    else:
                        acc[m] = s
                elif not c.is_zero():
                    acc[m] = c
        return make_poly(self.field, self.group_sizes, acc)

    def scale(self, c: FieldElement) -> "MultiPoly":
        if c.is_zero():
            return make_poly(self.field, self.group_sizes, {})
        return MultiPoly(
            self.field, self.group_sizes, tuple((m, c * cf) for m, cf in self.terms)
        )

    def _check_compatible(self, other: "MultiPoly") -> None:
        if self.field != other.field or self.group_sizes != other.group_sizes:
            raise ValidationError("polynomials over different fields or group shapes")

    def __repr__(self) -> str:
        return format_poly(self)


def make_poly(
    field: FieldSpec,
    group_sizes: Sequence[int],
    terms: Mapping[Monomial, FieldElement] | Iterable[tuple[Monomial, FieldElement]],
) -> MultiPoly:
    """Canonicalize a term map: drop zeros, sort graded-lex descending."""
    group_sizes = tuple(group_sizes)
    if any(g < 1 for g in group_sizes):
        raise ValidationError(f"group sizes must be positive, got {group_sizes}")
    n = sum(group_sizes)
    items = terms.items() if isinstance(terms, Mapping) else terms
    clean: dict[Monomial, FieldElement] = {}
    for mono, coeff in items:
        mono = tuple(mono)
        if len(mono) != n:
            raise ValidationError(
                f"monomial {mono} has {len(mono)} exponents, expected {n}"
            )
        if any(e < 0 for e in mono):
            raise ValidationError(f"negative exponent in monomial {mono}")
        if coeff.field != field:
            raise ValidationError("coefficient from a different field")
        if not coeff.is_zero():
            if mono in clean:
                raise ValidationError(f"duplicate monomial {mono}")
            clean[mono] = coeff
    ordered = tuple(
        (m, clean[m]) for m in sorted(clean, key=_grlex_key, reverse=True)
    )
    return MultiPoly(field, tuple(group_sizes), ordered)


def _group_slices(group_sizes: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    lo = 0
    for g in group_sizes:
        out.append((lo, lo + g))
        lo += g
    return out


def eval_poly(
    F: MultiPoly,
    point: Sequence[FieldElement] | Sequence[Sequence[FieldElement]],
    embedding: Embedding | None = None,
) -> FieldElement:
    """Evaluate at a point given as a flat tuple or one vector per group.

    With ``embedding`` the coordinates live in the embedding's codomain and
    the coefficients are mapped across before use, so varieties over F_q can
    be evaluated at F_{q^k} points.
    """
    flat: list[FieldElement] = []
    if point and isinstance(point[0], (tuple, list)):
        if len(point) != F.n_groups:
            raise ValidationError(
                f"{len(point)} coordinate vectors for {F.n_groups} groups"
            )
        for vec, size in zip(point, F.group_sizes):
            if len(vec) != size:
                raise ValidationError(
                    f"coordinate vector of length {len(vec)}, group needs {size}"
                )
            flat.extend(vec)
    else:
        flat = list(point)  # type: ignore[arg-type]
        if len(flat) != F.n_vars:
            raise ValidationError(f"{len(flat)} coordinates for {F.n_vars} variables")
    target = embedding.codomain if embedding is not None else F.field
    if any(c.field != target for c in flat):
        raise ValidationError("coordinates outside the evaluation field")
    acc = target.zero()
    for mono, coeff in F.terms:
        val = embedding(coeff) if embedding is not None else coeff
        for x, e in zip(flat, mono):
            if e == 0:
                continue
            if x.is_zero():
                val = target.zero()
                break
            xe = x
            for _ in range(e - 1):
                xe = xe * x
            val = val * xe
        if not val.is_zero():
            acc = acc + val
    return acc


def partial_derivative(F: MultiPoly, var: int) -> MultiPoly:
    """Formal d/dX_var; characteristic-p multiples drop out."""
    if not 0 <= var < F.n_vars:
        raise ValidationError(f"variable index {var} out of range")
    acc: dict[Monomial, FieldElement] = {}
    p_elem = F.field.element
    for mono, coeff in F.terms:
        e = mono[var]
        if e == 0:
            continue
        c = coeff * p_elem(e)
        if c.is_zero():
            continue
        m = mono[:var] + (e - 1,) + mono[var + 1 :]
        acc[m] = acc[m] + c if m in acc else c
    return make_poly(F.field, F.group_sizes, {m: c for m, c in acc.items() if not c.is_zero()})


def gradient(F: MultiPoly) -> tuple[MultiPoly, ...]:
    return tuple(partial_derivative(F, j) for j in range(F.n_vars))


def is_multihomogeneous(F: MultiPoly) -> tuple[int, ...] | None:
    """The multidegree (d_1, ..., d_m) if every term matches it, else None.

    The zero polynomial is not assigned a multidegree (None).
    """
    if F.is_zero():
        return None
    slices = _group_slices(F.group_sizes)
    degs: tuple[int, ...] | None = None
    for mono, _ in F.terms:
        d = tuple(sum(mono[lo:hi]) for lo, hi in slices)
        if degs is None:
            degs = d
        elif d != degs:
            return None
    return degs


def total_degree(F: MultiPoly):
    """Max total degree over terms; MINUS_INFINITY for the zero polynomial."""
    if F.is_zero():
        return MINUS_INFINITY
    return max(sum(m) for m, _ in F.terms)


def group_degree(F: MultiPoly, group: int):
    """Max degree in the given group; MINUS_INFINITY for the zero polynomial."""
    if not 0 <= group < F.n_groups:
        raise ValidationError(f"group index {group} out of range")
    if F.is_zero():
        return MINUS_INFINITY
    lo, hi = _group_slices(F.group_sizes)[group]
    return max(sum(m[lo:hi]) for m, _ in F.terms)


def monomials_of_degree(n_vars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of the given total degree, lexicographic order."""
    if n_vars == 0:
        return [()] if degree == 0 else []
    out = []
    for lead in range(degree, -1, -1):
        for rest in monomials_of_degree(n_vars - 1, degree - lead):
            out.append((lead,) + rest)
    return out


def multidegree_monomials(
    group_sizes: Sequence[int], multidegree: Sequence[int]
) -> list[Monomial]:
    """All monomials with group-degree d_i in group i (Cartesian product)."""
    per_group = [monomials_of_degree(g, d) for g, d in zip(group_sizes, multidegree)]
    return [tuple(x for part in combo for x in part) for combo in product(*per_group)]


def random_multihomogeneous(
    field: FieldSpec,
    group_sizes: Sequence[int],
    multidegree: Sequence[int],
    seed: int,
) -> MultiPoly:
    """Seeded dense draw over all monomials of the requested multidegree.

    Coefficients are uniform over the field; the all-zero draw is resampled so
    the result always carries the requested multidegree.
    """
    if len(multidegree) != len(group_sizes):
        raise ValidationError("multidegree length must match the group count")
    if any(d < 0 for d in multidegree):
        raise ValidationError(f"negative entry in multidegree {tuple(multidegree)}")
    rng = random.Random(seed)
    monos = multidegree_monomials(group_sizes, multidegree)
    while True:
        terms = {}
        for m in monos:
            c = field.from_index(rng.randrange(field.q))
            if not c.is_zero():
                terms[m] = c
        poly = make_poly(field, group_sizes, terms)
        if is_multihomogeneous(poly) == tuple(multidegree):
            return poly


# -- text format ---------------------------------------------------------------
# Terms look like "2*X0^1*X3^2"; '*' and '^' are mandatory, coefficients are
# integers reduced mod p, terms are joined with '+' or '-'.

_TERM_VAR = re.compile(r"^X(\d+)\^(\d+)$")


def parse_poly(
    text: str, field: FieldSpec, group_sizes: Sequence[int]
) -> MultiPoly:
    n = sum(group_sizes)
    stripped = text.replace(" ", "")
    if not stripped:
        raise ValidationError("empty polynomial string")
    # Split into signed terms.
    terms_text: list[tuple[int, str]] = []
    sign, token = 1, ""
    for ch in stripped:
        if ch in "+-" and token:
            terms_text.append((sign, token))
            sign = 1 if ch == "+" else -1
            token = ""
        elif ch in "+-" and not token:
            # Leading sign (possibly stacked); fold into the current sign.
            sign *= 1 if ch == "+" else -1
        else:
            token += ch
    if not token:
        raise ValidationError(f"dangling sign in polynomial {text!r}")
    terms_text.append((sign, token))

    acc: dict[Monomial, FieldElement] = {}
    for sign, term in terms_text:
        parts = term.split("*")
        try:
            coeff_int = int(parts[0])
        except ValueError:
            raise ValidationError(
                f"bad term {term!r}: leading factor {parts[0]!r} is not an integer "
                "(coefficient is mandatory, e.g. 1*X0^2)"
            )
        mono = [0] * n
        for factor in parts[1:]:
            m = _TERM_VAR.match(factor)
            if not m:
                raise ValidationError(
                    f"bad factor {factor!r} in term {term!r}: expected Xi^e"
                )
            idx, exp = int(m.group(1)), int(m.group(2))
            if idx >= n:
                raise ValidationError(
                    f"variable X{idx} out of range: only {n} variables declared"
                )
            mono[idx] += exp
        key = tuple(mono)
        c = field.element(sign * coeff_int)
        if key in acc:
            c = acc[key] + c
        if c.is_zero():
            acc.pop(key, None)
        else:
            acc[key] = c
    return make_poly(field, group_sizes, acc)


def format_poly(F: MultiPoly) -> str:
    if F.is_zero():
        return "0"
    parts = []
    for mono, coeff in F.terms:
        factors = [str(coeff.coeffs[0] if F.field.k == 1 else f"({coeff!r})")]
        for i, e in enumerate(mono):
            if e:
                factors.append(f"X{i}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)
