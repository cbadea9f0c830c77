"""Exact value-set statistics for monic univariate polynomial families.

The family with parameters (d, s) over F_q consists of the polynomials
f = T^d + a_{d-1} T^{d-1} + ... + a_1 T with the top s coefficients
a_{d-1}, ..., a_{d-s} frozen and the remaining d-s-1 free.  The module
computes exact image sizes, the family average by direct sweep, and the
same average a second way through counts of allowable subsets, which the
two-route identity test compares for exact rational equality.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .bounds import (
    SEVERITY_SOFT,
    VERDICT_HOLDS,
    VERDICT_INCONCLUSIVE,
    VERDICT_NOT_APPLICABLE,
    VERDICT_VIOLATED,
    BoundCheck,
    check,
)
from .errors import ValidationError
from .gf import (
    MAX_TABLE_CARDINALITY,
    FieldElement,
    FieldSpec,
    arithmetic_tables,
    enumerate_elements,
    inv,
)
from .parallel import get_workers, map_ordered
from .points import DEFAULT_ENUMERATION_BUDGET, check_budget, chunk_ranges

__all__ = [
    "ChiReport",
    "ChiRow",
    "EINV_LOWER",
    "EINV_UPPER",
    "IntervalCheck",
    "UniPoly",
    "ValueSetFamily",
    "average_direct",
    "average_via_chi",
    "chi",
    "chi_band",
    "chi_bound_check",
    "chi_report",
    "cohen_average",
    "e_bound_check",
    "fixed_tuples",
    "is_allowable",
    "make_family",
    "mu",
    "value_set_size",
]

# Rational bracket around exp(-1); verdicts touching it are three-valued.
EINV_LOWER = Fraction(36787944117144232, 10**17)
EINV_UPPER = Fraction(36787944117144233, 10**17)


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial over a finite field, dense low-to-high."""

    field: FieldSpec
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValidationError("empty coefficient vector")
        for c in self.coeffs:
            if c.field != self.field:
                raise ValidationError("coefficient from a different field")
        if self.coeffs[-1].is_zero() and len(self.coeffs) > 1:
            raise ValidationError("leading coefficient is zero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, x: FieldElement) -> FieldElement:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            parts.append(f"({c})*T^{i}" if i else f"({c})")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ValueSetFamily:
    """Monic degree-d family with zero constant term and s frozen top
    coefficients.

    fixed lists (a_{d-1}, ..., a_{d-s}) in decreasing degree order; the
    family has q^(d-s-1) members indexed by the free coefficients
    a_1, ..., a_{d-s-1}, the lowest degree varying fastest.
    """

    field: FieldSpec
    d: int
    s: int
    fixed: tuple[FieldElement, ...] = ()

    def __post_init__(self):
        if self.d < 2:
            raise ValidationError(f"degree {self.d} < 2")
        if not 0 <= self.s <= self.d - 1:
            raise ValidationError(
                f"s = {self.s} outside 0..{self.d - 1} for degree {self.d}"
            )
        if len(self.fixed) != self.s:
            raise ValidationError(
                f"{len(self.fixed)} fixed coefficients, expected s = {self.s}"
            )
        for a in self.fixed:
            if a.field != self.field:
                raise ValidationError("fixed coefficient from a different field")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def free_count(self) -> int:
        return self.d - self.s - 1

    @property
    def size(self) -> int:
        return self.q**self.free_count

    @property
    def fixed_codes(self) -> tuple[int, ...]:
        return tuple(self.field.index(a) for a in self.fixed)

    def _coeff_shell(self) -> list[FieldElement]:
        zero = self.field.zero()
        coeffs = [zero] * (self.d + 1)
        coeffs[self.d] = self.field.one()
        for offset, a in enumerate(self.fixed):
            coeffs[self.d - 1 - offset] = a
        return coeffs

    def top_poly(self) -> UniPoly:
        """The member-independent part T^d + sum of the fixed terms."""
        return UniPoly(self.field, tuple(self._coeff_shell()))

    def member(self, index: int) -> UniPoly:
        """Member by index; free coefficient of degree i is digit i-1 of
        index in base q."""
        if not 0 <= index < self.size:
            raise ValidationError(f"member index {index} outside 0..{self.size - 1}")
        coeffs = self._coeff_shell()
        rest = index
        for i in range(1, self.d - self.s):
            rest, code = divmod(rest, self.q)
            coeffs[i] = self.field.from_index(code)
        return UniPoly(self.field, tuple(coeffs))

    def members(self) -> Iterator[UniPoly]:
        for index in range(self.size):
            yield self.member(index)


def make_family(
    field: FieldSpec, d: int, s: int, fixed: Sequence[FieldElement] = ()
) -> ValueSetFamily:
    return ValueSetFamily(field=field, d=d, s=s, fixed=tuple(fixed))


def value_set_size(f: UniPoly) -> int:
    """Number of distinct values of f on the whole field."""
    return len({f.evaluate(x) for x in enumerate_elements(f.field)})


def mu(d: int) -> Fraction:
    """Alternating factorial sum: the density of a generic degree-d image."""
    if d < 1:
        raise ValidationError(f"degree {d} < 1")
    total = Fraction(0)
    for r in range(1, d + 1):
        term = Fraction(1, math.factorial(r))
        total += term if r % 2 == 1 else -term
    return total


def cohen_average(d: int, q: int) -> Fraction:
    """Closed form for the s = 0 family average:
    sum_{r=1..d} (-1)^(r-1) C(q, r) q^(1-r)."""
    if d < 1 or q < 2:
        raise ValidationError(f"bad (d, q) = ({d}, {q})")
    total = Fraction(0)
    for r in range(1, d + 1):
        term = Fraction(math.comb(q, r), q ** (r - 1))
        total += term if r % 2 == 1 else -term
    return total


def _average_reference(fam: ValueSetFamily) -> Fraction:
    """Pure-Python member-by-member mean; the oracle for average_direct."""
    total = sum(value_set_size(f) for f in fam.members())
    return Fraction(total, fam.size)


def _average_tables(fam: ValueSetFamily) -> Fraction:
    """Table-driven mean: Horner sweeps over worker-partitioned member
    ranges; the per-range sums are added in range order."""
    field = fam.field
    q = fam.q
    add_t, mul_t, _neg_t, _inv_t = arithmetic_tables(field)
    xrow = np.arange(q)
    one_code = field.index(field.one())
    fixed_codes = {
        fam.d - 1 - offset: field.index(a) for offset, a in enumerate(fam.fixed)
    }

    def range_sum(bounds: tuple[int, int]) -> int:
        lo, hi = bounds
        member_index = np.arange(lo, hi)
        values = np.full((hi - lo, q), one_code, dtype=add_t.dtype)
        for degree in range(fam.d - 1, -1, -1):
            values = mul_t[values, xrow]
            if degree in fixed_codes:
                code = fixed_codes[degree]
                if code:
                    values = add_t[values, code]
            elif 1 <= degree <= fam.d - fam.s - 1:
                column = (member_index // q ** (degree - 1)) % q
                values = add_t[values, column[:, None]]
            # degree 0 contributes nothing: the constant term is zero
        values.sort(axis=1)
        sizes = 1 + (np.diff(values, axis=1) != 0).sum(axis=1)
        return int(sizes.sum())

    pieces = map_ordered(range_sum, chunk_ranges(fam.size, get_workers()))
    return Fraction(sum(pieces), fam.size)


def average_direct(fam: ValueSetFamily, budget: int | None = None) -> Fraction:
    """Exact mean of value_set_size over the family, by full enumeration."""
    limit = DEFAULT_ENUMERATION_BUDGET if budget is None else budget
    check_budget(
        fam.size * fam.q,
        limit,
        f"{fam.size} polynomials evaluated over F_{fam.q}",
    )
    if fam.q <= MAX_TABLE_CARDINALITY:
        return _average_tables(fam)
    return _average_reference(fam)


def _monic_product(field: FieldSpec, xs: Sequence[FieldElement]) -> list[FieldElement]:
    """Coefficients of prod (T - x) for x in xs, low-to-high."""
    coeffs = [field.one()]
    zero = field.zero()
    for x in xs:
        coeffs.append(field.one())
        for i in range(len(coeffs) - 2, 0, -1):
            coeffs[i] = coeffs[i - 1] - coeffs[i] * x
        coeffs[0] = zero - coeffs[0] * x
    return coeffs


def _poly_mod(
    num: Sequence[FieldElement], den: Sequence[FieldElement], field: FieldSpec
) -> list[FieldElement]:
    """Remainder of num modulo monic den, as deg(den) coefficients."""
    work = list(num)
    dn = len(den) - 1
    for i in range(len(work) - 1, dn - 1, -1):
        c = work[i]
        if c.is_zero():
            continue
        for j in range(dn + 1):
            work[i - dn + j] = work[i - dn + j] - c * den[j]
    out = work[:dn]
    while len(out) < dn:
        out.append(field.zero())
    return out


def is_allowable(f: UniPoly, xs: Sequence[FieldElement], s: int) -> bool:
    """Whether f agrees on the points xs with some polynomial of degree at
    most d-s-1.

    Equivalent test: the remainder of f modulo prod (T - x) has zero
    coefficients in all degrees d-s, ..., |xs|-1.  Subsets of size at most
    d-s are always allowable.
    """
    field = f.field
    r = len(xs)
    if r < 1:
        raise ValidationError("empty evaluation set")
    if len({field.index(x) for x in xs}) != r:
        raise ValidationError("evaluation points must be distinct")
    if not 0 <= s <= f.degree - 1:
        raise ValidationError(f"s = {s} outside 0..{f.degree - 1}")
    low = f.degree - s
    if r <= low:
        return True
    residue = _poly_mod(f.coeffs, _monic_product(field, xs), field)
    return all(residue[i].is_zero() for i in range(low, r))


def chi(fam: ValueSetFamily, r: int, budget: int | None = None) -> int:
    """Exact number of r-element subsets of F_q allowable for the family.

    Enumerates subsets in increasing index order as a depth-first search
    carrying Newton divided differences of the member-independent part;
    a prefix whose top difference of order >= d-s is nonzero admits no
    allowable completion, so the branch is cut.  The pruning preserves
    exactness because the order-t difference depends only on the first
    t+1 points of the subset.
    """
    d, s, q = fam.d, fam.s, fam.q
    if not d - s + 1 <= r <= d:
        raise ValidationError(f"r = {r} outside {d - s + 1}..{d}")
    limit = DEFAULT_ENUMERATION_BUDGET if budget is None else budget
    check_budget(math.comb(q, r), limit, f"{r}-subsets of F_{q}")
    field = fam.field
    elements = list(enumerate_elements(field))
    top = fam.top_poly()
    fvals = [top.evaluate(x) for x in elements]
    band_start = d - s
    count = 0

    def extend(start: int, xs: list, cs: list) -> None:
        nonlocal count
        t = len(xs)
        for i in range(start, q - (r - t) + 1):
            x = elements[i]
            acc = field.zero()
            nprod = field.one()
            for ci, xi in zip(cs, xs):
                acc = acc + ci * nprod
                nprod = nprod * (x - xi)
            c_new = (fvals[i] - acc) * inv(nprod)
            if t >= band_start and not c_new.is_zero():
                continue
            if t + 1 == r:
                count += 1
            else:
                xs.append(x)
                cs.append(c_new)
                extend(i + 1, xs, cs)
                xs.pop()
                cs.pop()

    extend(0, [], [])
    return count


def _chi_reference(fam: ValueSetFamily, r: int) -> int:
    """Unpruned subset scan; the oracle for chi on small fields."""
    from itertools import combinations

    top = fam.top_poly()
    elements = list(enumerate_elements(fam.field))
    return sum(
        1 for xs in combinations(elements, r) if is_allowable(top, xs, fam.s)
    )


def average_via_chi(fam: ValueSetFamily, budget: int | None = None) -> Fraction:
    """Family average recomputed from subset counts alone.

    Mean image size equals
    sum_{r=1..d-s} (-1)^(r-1) C(q, r) q^(1-r)
    + q^-(d-s-1) sum_{r=d-s+1..d} (-1)^(r-1) chi(r).
    Must agree exactly with average_direct.
    """
    d, s, q = fam.d, fam.s, fam.q
    total = Fraction(0)
    for r in range(1, d - s + 1):
        term = Fraction(math.comb(q, r), q ** (r - 1))
        total += term if r % 2 == 1 else -term
    tail = Fraction(0)
    for r in range(d - s + 1, d + 1):
        term = Fraction(chi(fam, r, budget=budget))
        tail += term if r % 2 == 1 else -term
    return total + tail / q ** (d - s - 1)


def chi_band(d: int, s: int, r: int) -> tuple[int, ...]:
    """Degrees d-r+1, ..., s of the coefficient constraints that cut out
    the allowable r-subsets; empty when r <= d-s."""
    return tuple(range(d - r + 1, s + 1))


def chi_bound_check(
    fam: ValueSetFamily, r: int, chi_value: int | None = None
) -> BoundCheck:
    """Soft verdict on | chi - q^(d-s)/r! | against the closed-form cap
    (15/r!) D^3 delta^2 q^(d-s-1), where D and delta are the excess sum
    and product of the constraint degrees.

    Requires 1 <= s <= d/2; outside that regime the verdict is
    not-applicable.  Violations are recorded as data, never raised.
    """
    d, s, q = fam.d, fam.s, fam.q
    name = f"chi-deviation d={d} s={s} r={r} q={q}"
    if not 1 <= 2 * s <= d:
        return check(
            name, None, None, severity=SEVERITY_SOFT, applicable=False,
            reason=f"needs 1 <= s <= d/2, got s={s}, d={d}",
        )
    band = chi_band(d, s, r)
    excess = sum(j - 1 for j in band)
    degree = math.prod(band)
    value = chi(fam, r) if chi_value is None else chi_value
    deviation = abs(Fraction(value) - Fraction(q ** (d - s), math.factorial(r)))
    bound = Fraction(15, math.factorial(r)) * excess**3 * degree**2 * q ** (d - s - 1)
    return check(name, deviation, bound, severity=SEVERITY_SOFT)


@dataclass(frozen=True)
class ChiRow:
    """chi at one subset size, with its constraint constants and verdict."""

    r: int
    chi: int
    excess: int
    degree: int
    check: BoundCheck

    def __post_init__(self):
        if self.chi < 0:
            raise ValidationError(f"negative subset count {self.chi}")


@dataclass(frozen=True)
class ChiReport:
    """All subset counts of one family, r = d-s+1 .. d."""

    d: int
    s: int
    q: int
    fixed_codes: tuple[int, ...]
    rows: tuple[ChiRow, ...]


def chi_report(fam: ValueSetFamily, budget: int | None = None) -> ChiReport:
    rows = []
    for r in range(fam.d - fam.s + 1, fam.d + 1):
        value = chi(fam, r, budget=budget)
        if value > math.comb(fam.q, r):
            raise ValidationError(
                f"chi = {value} exceeds C({fam.q}, {r})"
            )
        band = chi_band(fam.d, fam.s, r)
        rows.append(
            ChiRow(
                r=r,
                chi=value,
                excess=sum(j - 1 for j in band),
                degree=math.prod(band),
                check=chi_bound_check(fam, r, chi_value=value),
            )
        )
    return ChiReport(
        d=fam.d, s=fam.s, q=fam.q, fixed_codes=fam.fixed_codes, rows=tuple(rows)
    )


@dataclass(frozen=True)
class IntervalCheck:
    """Three-valued verdict of measured <= bound when the bound is only
    known to lie in [lower, upper]."""

    name: str
    measured: Optional[Fraction]
    lower: Optional[Fraction]
    upper: Optional[Fraction]
    verdict: str
    severity: str
    detail: str

    @property
    def ok(self) -> bool:
        return not (
            self.verdict == VERDICT_VIOLATED and self.severity != SEVERITY_SOFT
        )


def e_bound_check(
    fam: ValueSetFamily,
    average: Fraction | None = None,
    budget: int | None = None,
) -> IntervalCheck:
    """Deviation of the family average from mu_d * q, against the cap
    E(s, d) = exp(-1)/2 + 16 sum_{r=d-s+1..d} D^3 delta^2 / r! + 2d/q.

    exp(-1) enters through a rational bracket, so the verdict is holds,
    violated, or inconclusive; it is inconclusive only when the measured
    deviation lands inside the bracket width.  Requires 1 <= s <= d/2.
    """
    d, s, q = fam.d, fam.s, fam.q
    name = f"average-deviation d={d} s={s} q={q}"
    if not 1 <= 2 * s <= d:
        return IntervalCheck(
            name, None, None, None, VERDICT_NOT_APPLICABLE, SEVERITY_SOFT,
            f"needs 1 <= s <= d/2, got s={s}, d={d}",
        )
    if average is None:
        average = average_direct(fam, budget=budget)
    measured = abs(average - mu(d) * q)
    tail = Fraction(0)
    for r in range(d - s + 1, d + 1):
        band = chi_band(d, s, r)
        excess = sum(j - 1 for j in band)
        degree = math.prod(band)
        tail += Fraction(excess**3 * degree**2, math.factorial(r))
    base = 16 * tail + Fraction(2 * d, q)
    lower = EINV_LOWER / 2 + base
    upper = EINV_UPPER / 2 + base
    if measured <= lower:
        verdict = VERDICT_HOLDS
        relation = "<="
    elif measured > upper:
        verdict = VERDICT_VIOLATED
        relation = ">"
    else:
        verdict = VERDICT_INCONCLUSIVE
        relation = "inside"
    return IntervalCheck(
        name,
        measured,
        lower,
        upper,
        verdict,
        SEVERITY_SOFT,
        f"{name}: measured {measured} {relation} bound bracket "
        f"[{lower}, {upper}]",
    )


def fixed_tuples(
    field: FieldSpec, d: int, s: int, limit: int = 25, seed: int = 0
) -> tuple[tuple[FieldElement, ...], ...]:
    """Fixed-coefficient tuples for a (d, s) sweep cell: all q^s of them
    when that count is within limit, otherwise a seeded sample of exactly
    limit distinct tuples, in increasing index order."""
    if not 0 <= s <= d - 1:
        raise ValidationError(f"s = {s} outside 0..{d - 1}")
    if limit < 1:
        raise ValidationError(f"limit {limit} < 1")
    q = field.q
    total = q**s
    if total <= limit:
        indices = range(total)
    else:
        indices = sorted(random.Random(seed).sample(range(total), limit))
    out = []
    for index in indices:
        codes = []
        rest = index
        for _ in range(s):
            rest, code = divmod(rest, q)
            codes.append(code)
        codes.reverse()
        out.append(tuple(field.from_index(c) for c in codes))
    return tuple(out)
