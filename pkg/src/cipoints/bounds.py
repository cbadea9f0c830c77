"""Exact bounds, constants, and thresholds for point counts of projective
complete intersections over finite fields.

Every value here is an arbitrary-precision integer or an exact rational.
Several bounds involve q^(m/2) with m odd; those are carried in exact
``a + b*sqrt(q)`` form (SqrtBound) and inequality verdicts are decided by
squaring, so no verdict ever depends on floating point or rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Sequence, Union

from .errors import ValidationError
from .points import p_r

__all__ = [
    "BoundCheck",
    "BoundContext",
    "BoundReport",
    "B_ds",
    "ComparisonReport",
    "EstimateReport",
    "ExistenceThresholds",
    "KIND_BERTINI",
    "KIND_EXISTENCE",
    "SEVERITY_HARD",
    "SEVERITY_SOFT",
    "SqrtBound",
    "ThresholdEntry",
    "VERDICT_HOLDS",
    "VERDICT_INCONCLUSIVE",
    "VERDICT_NOT_APPLICABLE",
    "VERDICT_VIOLATED",
    "betti_b1",
    "betti_b2",
    "betti_b2_upper",
    "check",
    "comparison_bounds",
    "deligne_bound",
    "deligne_sqrt_bound",
    "eta",
    "eta_affine",
    "existence_thresholds",
    "exponential_error_constant",
    "isqrt_ceil",
    "kth_root_floor",
    "main_estimate",
    "nonzero_affine_lower",
    "projective_upper_bound",
    "q_power_half",
    "serre_bound",
    "serre_multih",
    "singular_fiber_bound",
]

Measured = Union[int, Fraction]


def isqrt_ceil(x: int) -> int:
    """Smallest integer t with t*t >= x, for x >= 0."""
    if x < 0:
        raise ValidationError(f"isqrt_ceil of negative value {x}")
    root = math.isqrt(x)
    return root if root * root == x else root + 1


def kth_root_floor(x: int, k: int) -> int:
    """Largest integer t >= 0 with t**k <= x, for x >= 0, k >= 1."""
    if k < 1:
        raise ValidationError(f"root order {k} < 1")
    if x < 0:
        raise ValidationError(f"kth_root_floor of negative value {x}")
    if k == 1 or x in (0, 1):
        return x
    if k == 2:
        return math.isqrt(x)
    # Integer Newton iteration from an upper seed; exact for any size.
    t = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        u = ((k - 1) * t + x // t ** (k - 1)) // k
        if u >= t:
            return t
        t = u


@dataclass(frozen=True)
class SqrtBound:
    """Exact bound value ``integer_part + sqrt_coefficient * sqrt(q)``.

    admits() decides value <= bound by squaring the excess, so the verdict
    is exact even when sqrt(q) is irrational.
    """

    integer_part: int
    sqrt_coefficient: int
    q: int

    def __post_init__(self):
        if self.integer_part < 0 or self.sqrt_coefficient < 0:
            raise ValidationError(
                f"negative bound parts ({self.integer_part}, {self.sqrt_coefficient})"
            )
        if self.q < 2:
            raise ValidationError(f"q = {self.q} < 2")

    def __add__(self, other: "SqrtBound") -> "SqrtBound":
        if not isinstance(other, SqrtBound):
            return NotImplemented
        if other.q != self.q:
            raise ValidationError(f"mixed q: {self.q} vs {other.q}")
        return SqrtBound(
            self.integer_part + other.integer_part,
            self.sqrt_coefficient + other.sqrt_coefficient,
            self.q,
        )

    def admits(self, value: Measured) -> bool:
        """Exact test ``value <= integer_part + sqrt_coefficient*sqrt(q)``."""
        if value <= self.integer_part:
            return True
        excess = value - self.integer_part
        return excess * excess <= self.sqrt_coefficient**2 * self.q

    def ceiling(self) -> int:
        """Smallest integer >= the bound value; display only, never a verdict."""
        return self.integer_part + isqrt_ceil(self.sqrt_coefficient**2 * self.q)

    def __str__(self) -> str:
        if self.sqrt_coefficient == 0:
            return str(self.integer_part)
        if self.integer_part == 0:
            return f"{self.sqrt_coefficient}*sqrt({self.q})"
        return f"{self.integer_part} + {self.sqrt_coefficient}*sqrt({self.q})"


def q_power_half(coefficient: int, half_exponent: int, q: int) -> SqrtBound:
    """``coefficient * q**(half_exponent/2)`` as an exact SqrtBound."""
    if half_exponent < 0:
        raise ValidationError(f"negative exponent {half_exponent}/2")
    if half_exponent % 2 == 0:
        return SqrtBound(coefficient * q ** (half_exponent // 2), 0, q)
    return SqrtBound(0, coefficient * q ** ((half_exponent - 1) // 2), q)


@dataclass(frozen=True)
class BoundContext:
    """Numeric shape (n, r, s, multidegree, q) shared by the bound formulas.

    The context only checks basic well-formedness; each formula validates
    its own applicability regime (s in {r-2, r-3}, q thresholds, and so on).
    """

    n: int
    r: int
    s: int
    multidegree: tuple[int, ...]
    q: int

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"ambient dimension {self.n} < 2")
        if not 1 <= self.r < self.n:
            raise ValidationError(f"dimension {self.r} outside 1..{self.n - 1}")
        object.__setattr__(
            self, "multidegree", tuple(sorted(self.multidegree, reverse=True))
        )
        if len(self.multidegree) != self.n - self.r:
            raise ValidationError(
                f"{len(self.multidegree)} degrees for codimension {self.n - self.r}"
            )
        if any(d < 1 for d in self.multidegree):
            raise ValidationError(f"degrees {self.multidegree} must all be >= 1")
        if not 0 <= self.s <= self.r - 1:
            raise ValidationError(
                f"singular bound {self.s} outside 0..{self.r - 1}"
            )
        if self.q < 2:
            raise ValidationError(f"q = {self.q} < 2")

    @property
    def delta(self) -> int:
        """Degree of the variety: product of the generator degrees."""
        return math.prod(self.multidegree)

    @property
    def degree_excess(self) -> int:
        """Sum of (d_i - 1) over the multidegree."""
        return sum(d - 1 for d in self.multidegree)

    @property
    def d_max(self) -> int:
        return self.multidegree[0]

    @classmethod
    def from_variety(cls, variety, s: int | None = None) -> "BoundContext":
        """Context for a counting.VarietySpec; s overrides resolve_s()."""
        return cls(
            n=variety.ambient_dim,
            r=variety.declared_dim,
            s=variety.resolve_s() if s is None else s,
            multidegree=variety.multidegree,
            q=variety.field.q,
        )


def betti_b1(n: int, d: Sequence[int]) -> int:
    """First primitive Betti number of a smooth curve cut out in P^n by
    n-1 forms of degrees d: (prod d)(sum d - n - 1) + 2."""
    degrees = tuple(d)
    if n < 2 or len(degrees) != n - 1:
        raise ValidationError(
            f"betti_b1 needs n >= 2 and n-1 degrees, got n={n}, {len(degrees)} degrees"
        )
    return math.prod(degrees) * (sum(degrees) - n - 1) + 2


def betti_b2(n: int, d: Sequence[int]) -> int:
    """Second primitive Betti number of a smooth surface cut out in P^n by
    n-2 forms of degrees d."""
    degrees = tuple(d)
    if n < 3 or len(degrees) != n - 2:
        raise ValidationError(
            f"betti_b2 needs n >= 3 and n-2 degrees, got n={n}, {len(degrees)} degrees"
        )
    pair_sum = sum(a * b for a, b in combinations_with_replacement(degrees, 2))
    bracket = math.comb(n + 1, 2) - (n + 1) * sum(degrees) + pair_sum
    return math.prod(degrees) * bracket - 3


def betti_b2_upper(n: int, d: Sequence[int]) -> int:
    """Closed-form upper bound (n-1) * D^2 * delta for betti_b2(n, d)."""
    degrees = tuple(d)
    if n < 3 or len(degrees) != n - 2:
        raise ValidationError(
            f"betti_b2_upper needs n >= 3 and n-2 degrees, got n={n}, {len(degrees)}"
        )
    excess = sum(x - 1 for x in degrees)
    return (n - 1) * excess**2 * math.prod(degrees)


def deligne_sqrt_bound(q: int, r: int, b: int) -> SqrtBound:
    """b * q^(r/2) in exact form, for verdict checks on |N - p_r|."""
    if b < 0:
        raise ValidationError(f"negative Betti coefficient {b}")
    if r < 0:
        raise ValidationError(f"negative dimension {r}")
    return q_power_half(b, r, q)


def deligne_bound(q: int, r: int, b: int) -> int:
    """Integer form of b * q^(r/2): exact for even r, ceiling for odd r.

    Display value only; exact comparisons go through deligne_sqrt_bound.
    """
    return deligne_sqrt_bound(q, r, b).ceiling()


def _check_vectors(dvec: Sequence[int], nvec: Sequence[int]) -> tuple[tuple, tuple]:
    d, nv = tuple(dvec), tuple(nvec)
    if len(d) != len(nv) or not d:
        raise ValidationError(
            f"degree vector ({len(d)}) and dimension vector ({len(nv)}) must "
            "have equal positive length"
        )
    if any(x < 0 for x in d):
        raise ValidationError(f"negative degree in {d}")
    if any(x < 1 for x in nv):
        raise ValidationError(f"dimension < 1 in {nv}")
    return d, nv


def eta(dvec: Sequence[int], nvec: Sequence[int], q: int) -> int:
    """Upper bound on the number of projective zeros in P^{n_1} x ... x P^{n_m}
    of one nonzero multihomogeneous form of multidegree d.

    Signed inclusion-exclusion over nonempty subsets of the m groups: each
    subset S contributes (-1)^(|S|+1) * prod_{i in S} d_i p_{n_i - 1}
    * prod_{i not in S} p_{n_i}.
    """
    d, nv = _check_vectors(dvec, nvec)
    m = len(d)
    total = 0
    for mask in range(1, 1 << m):
        bits = mask.bit_count()
        term = 1
        for i in range(m):
            e = (mask >> i) & 1
            term *= d[i] ** e * p_r(q, nv[i] - e)
        total += term if bits % 2 == 1 else -term
    return total


def eta_affine(dvec: Sequence[int], nvec: Sequence[int], q: int) -> int:
    """Affine analogue of eta: bound on zeros in A^{n_1+1} x ... x A^{n_m+1},
    with q^{n_i + 1 - e} in place of p_{n_i - e}."""
    d, nv = _check_vectors(dvec, nvec)
    m = len(d)
    total = 0
    for mask in range(1, 1 << m):
        bits = mask.bit_count()
        term = 1
        for i in range(m):
            e = (mask >> i) & 1
            term *= d[i] ** e * q ** (nv[i] + 1 - e)
        total += term if bits % 2 == 1 else -term
    return total


def nonzero_affine_lower(dvec: Sequence[int], nvec: Sequence[int], q: int) -> int:
    """q^(sum n_i) * prod (q - d_i): the exact complement identity
    q^(sum (n_i+1)) - eta_affine.  A positive lower bound on affine points
    where the form is nonzero whenever q > max d_i."""
    d, nv = _check_vectors(dvec, nvec)
    out = q ** sum(nv)
    for di in d:
        out *= q - di
    return out


def serre_bound(d: int, n: int, q: int) -> int:
    """Upper bound d*q^(n-1) + p_(n-2) on projective zeros in P^n of one
    nonzero form of degree d."""
    if d < 1 or n < 1:
        raise ValidationError(f"serre_bound needs d >= 1 and n >= 1, got ({d}, {n})")
    return d * q ** (n - 1) + p_r(q, n - 2)


def serre_multih(d: int, n: int, m: int, q: int) -> int:
    """Upper bound p_n^m - (q^n - (d-1) q^(n-1))^m on zeros in (P^n)^m of one
    multihomogeneous form of multidegree (d, ..., d)."""
    if d < 1:
        raise ValidationError(f"degree {d} < 1")
    if n < 1 or m < 1:
        raise ValidationError(f"(P^{n})^{m} is not a valid product")
    return p_r(q, n) ** m - (q**n - (d - 1) * q ** (n - 1)) ** m


def projective_upper_bound(delta: int, r: int, q: int) -> int:
    """delta * p_r: points of an r-dimensional projective variety of degree
    delta never exceed this."""
    if delta < 0 or r < -1:
        raise ValidationError(f"bad degree/dimension ({delta}, {r})")
    return delta * p_r(q, r)


def B_ds(ctx: BoundContext) -> int:
    """Threshold constant controlling generic linear projections:
    D^(r-s-2) * delta * (((n-s)(r-s)+2) D + r-s-1) + delta + 1."""
    if not 0 <= ctx.s <= ctx.r - 2:
        raise ValidationError(f"B_ds needs 0 <= s <= r-2, got s={ctx.s}, r={ctx.r}")
    n, r, s = ctx.n, ctx.r, ctx.s
    D, delta = ctx.degree_excess, ctx.delta
    inner = ((n - s) * (r - s) + 2) * D + (r - s - 1)
    return D ** (r - s - 2) * delta * inner + delta + 1


def singular_fiber_bound(ctx: BoundContext) -> int:
    """D^(r-s) * delta * p_s: cap on the rational points of P^(s+1) whose
    fiber under a generic projection fails the smoothness audit."""
    if not 0 <= ctx.s <= ctx.r - 2:
        raise ValidationError(
            f"singular_fiber_bound needs 0 <= s <= r-2, got s={ctx.s}, r={ctx.r}"
        )
    degree_cap = ctx.degree_excess ** (ctx.r - ctx.s) * ctx.delta
    return projective_upper_bound(degree_cap, ctx.s, ctx.q)


REGIME_CODIM2 = "codim2"
REGIME_CODIM3 = "codim3"


@dataclass(frozen=True)
class EstimateReport:
    """Bounds on | N - p_r | (or | N_sm - p_r | when smooth is set).

    refined carries the sharp form b' q^((r+s+1)/2) + A q^(r-1); simplified
    the closed form with a single constant.  For smooth counts in the
    codim2 regime, simplified_alternate records the variant with constant
    8(r+1) D^2 delta^2 alongside the primary 11(r+1) D^2 delta^2; the two
    disagree in their source material, so both are reported.
    """

    smooth: bool
    regime: str
    betti_leading: int
    refined: SqrtBound
    simplified: SqrtBound
    simplified_alternate: Optional[SqrtBound] = None

    def admits(self, value: Measured) -> bool:
        """True iff both primary bounds admit the measured deviation."""
        return self.refined.admits(value) and self.simplified.admits(value)


def main_estimate(ctx: BoundContext, smooth: bool = False) -> EstimateReport:
    """Deviation bounds for a complete intersection with singular locus of
    dimension at most s, for s = r-2 or s = r-3.

    smooth=False bounds | N - p_r | over all rational points; smooth=True
    bounds | N_sm - p_r | over the smooth rational points only.
    """
    n, r, s, q = ctx.n, ctx.r, ctx.s, ctx.q
    D, delta = ctx.degree_excess, ctx.delta
    if r < 2:
        raise ValidationError(f"estimates need r >= 2, got r={r}")
    if s == r - 2:
        regime = REGIME_CODIM2
        bp = betti_b1(n - s - 1, ctx.multidegree)
    elif s == r - 3:
        regime = REGIME_CODIM3
        bp = betti_b2(n - s - 1, ctx.multidegree)
    else:
        raise ValidationError(
            f"estimate applies for s in {{r-2, r-3}}, got s={s} with r={r}"
        )
    if smooth:
        const = (
            2 * bp
            + 2 * (2 * D ** (r - s) * delta + 1) * (delta - 1)
            + 2 * (s + 2) * (delta - 1) * B_ds(ctx)
        )
    else:
        const = 2 * bp + 2 * (7 * D ** (r - s) * delta + 1) * (delta - 1)
    refined = q_power_half(bp, r + s + 1, q) + q_power_half(const, 2 * (r - 1), q)
    alternate = None
    if regime == REGIME_CODIM2:
        lead = q_power_half(delta * (D - 2) + 2, 2 * r - 1, q)
        if smooth:
            simplified = lead + q_power_half(
                11 * (r + 1) * D**2 * delta**2, 2 * (r - 1), q
            )
            alternate = lead + q_power_half(
                8 * (r + 1) * D**2 * delta**2, 2 * (r - 1), q
            )
        else:
            simplified = lead + q_power_half(14 * D**2 * delta**2, 2 * (r - 1), q)
    else:
        coefficient = (34 * r - 20) if smooth else 14
        simplified = q_power_half(coefficient * D**3 * delta**2, 2 * (r - 1), q)
    return EstimateReport(
        smooth=smooth,
        regime=regime,
        betti_leading=bp,
        refined=refined,
        simplified=simplified,
        simplified_alternate=alternate,
    )


def exponential_error_constant(n: int, r: int, d_max: int) -> int:
    """9 * 2^(n-r) * ((n-r) d_max + 3)^(n+1): the error constant whose
    growth in n motivates the polynomial-constant bounds."""
    if not 1 <= r < n:
        raise ValidationError(f"dimension {r} outside 1..{n - 1}")
    if d_max < 1:
        raise ValidationError(f"degree {d_max} < 1")
    return 9 * 2 ** (n - r) * ((n - r) * d_max + 3) ** (n + 1)


@dataclass(frozen=True)
class ComparisonReport:
    """The two prior deviation bounds the main estimate is measured against.

    exponential: leading term b'_(r-s-1) q^((r+s+1)/2) plus an error term
    whose constant grows exponentially in n; valid for any q.  normal:
    polynomial constant 2((n-r) d delta)^2, valid for normal varieties
    once q > normal_q_threshold.
    """

    exponential: SqrtBound
    exponential_constant: int
    normal: SqrtBound
    normal_q_threshold: int
    normal_applicable: bool


def _leading_betti(ctx: BoundContext, betti: int | None) -> int:
    """b'_(r-s-1)(n-s-1, d): built in for r-s-1 in {1, 2}, injected beyond."""
    order = ctx.r - ctx.s - 1
    if order < 1:
        raise ValidationError(f"needs s <= r-2, got s={ctx.s}, r={ctx.r}")
    if betti is not None:
        if betti < 0:
            raise ValidationError(f"negative Betti number {betti}")
        return betti
    if order == 1:
        return betti_b1(ctx.n - ctx.s - 1, ctx.multidegree)
    if order == 2:
        return betti_b2(ctx.n - ctx.s - 1, ctx.multidegree)
    raise ValidationError(
        f"no built-in primitive Betti number of order {order}; pass betti="
    )


def comparison_bounds(ctx: BoundContext, betti: int | None = None) -> ComparisonReport:
    """Evaluate both prior bounds on | N - p_r | for the context."""
    n, r, s, q = ctx.n, ctx.r, ctx.s, ctx.q
    delta, d_max = ctx.delta, ctx.d_max
    bp = _leading_betti(ctx, betti)
    constant = exponential_error_constant(n, r, d_max)
    exponential = q_power_half(bp, r + s + 1, q) + q_power_half(constant, r + s, q)
    normal_threshold = 2 * (n - r) * d_max * delta + 1
    normal = q_power_half(
        betti_b1(n - r + 1, ctx.multidegree), 2 * r - 1, q
    ) + q_power_half(2 * ((n - r) * d_max * delta) ** 2, 2 * (r - 1), q)
    return ComparisonReport(
        exponential=exponential,
        exponential_constant=constant,
        normal=normal,
        normal_q_threshold=normal_threshold,
        normal_applicable=q > normal_threshold,
    )


KIND_EXISTENCE = "existence"
KIND_BERTINI = "bertini"


@dataclass(frozen=True)
class ThresholdEntry:
    """One sufficient condition of the form q > threshold."""

    name: str
    kind: str
    applicable: bool
    threshold: Optional[int] = None
    reason: str = ""

    def guaranteed(self, q: int) -> bool:
        return self.applicable and q > self.threshold


@dataclass(frozen=True)
class ExistenceThresholds:
    entries: tuple[ThresholdEntry, ...]

    def entry(self, name: str) -> ThresholdEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise ValidationError(f"no threshold named {name!r}")

    def applicable(self, kind: str | None = None) -> tuple[ThresholdEntry, ...]:
        return tuple(
            e
            for e in self.entries
            if e.applicable and (kind is None or e.kind == kind)
        )


def existence_thresholds(
    ctx: BoundContext, betti: int | None = None
) -> ExistenceThresholds:
    """All sufficient q-thresholds for the context.

    kind "existence" entries guarantee a smooth rational point on the
    variety once q exceeds the threshold; kind "bertini" entries guarantee
    good behaviour of generic linear sections and projection fibers.
    Fractional thresholds q > b^(2/k) are made exact through
    kth_root_floor(b^2, k), which preserves the strict comparison for
    integer q.
    """
    n, r, s = ctx.n, ctx.r, ctx.s
    D, delta = ctx.degree_excess, ctx.delta
    entries: list[ThresholdEntry] = []

    def skip(name: str, kind: str, reason: str) -> None:
        entries.append(ThresholdEntry(name, kind, False, None, reason))

    if 0 <= s <= r - 2:
        try:
            bp = _leading_betti(ctx, betti)
        except ValidationError as exc:
            skip("smooth-point", KIND_EXISTENCE, str(exc))
        else:
            root_member = kth_root_floor(bp * bp, r - s - 1)
            entries.append(
                ThresholdEntry(
                    "smooth-point",
                    KIND_EXISTENCE,
                    True,
                    max(B_ds(ctx), D ** (r - s) * delta, root_member),
                )
            )
    else:
        skip("smooth-point", KIND_EXISTENCE, f"needs s <= r-2, got s={s}, r={r}")

    if 0 <= s <= r - 2:
        if D >= 5 or (D == 4 and n - r > 1):
            codim2 = (delta * (D - 2) + 2) ** 2
        else:
            codim2 = (2 * (n - r + 3) * D + 2) * delta + 1
        entries.append(
            ThresholdEntry("smooth-point-codim2", KIND_EXISTENCE, True, codim2)
        )
    else:
        skip(
            "smooth-point-codim2",
            KIND_EXISTENCE,
            f"needs s <= r-2, got s={s}, r={r}",
        )

    if r >= 3 and 0 <= s <= r - 3:
        entries.append(
            ThresholdEntry(
                "smooth-point-codim3",
                KIND_EXISTENCE,
                True,
                3 * D * (D + 2) ** 2 * delta,
            )
        )
    else:
        skip(
            "smooth-point-codim3",
            KIND_EXISTENCE,
            f"needs s <= r-3, got s={s}, r={r}",
        )

    if 0 <= s <= r - 2:
        entries.append(
            ThresholdEntry(
                "generic-section",
                KIND_BERTINI,
                True,
                (n + 1) ** 2 * D ** (r - s - 1) * delta,
            )
        )
        entries.append(
            ThresholdEntry(
                "nonsingular-fiber",
                KIND_BERTINI,
                True,
                max(B_ds(ctx), D ** (r - s) * delta),
            )
        )
    else:
        skip("generic-section", KIND_BERTINI, f"needs s <= r-2, got s={s}, r={r}")
        skip("nonsingular-fiber", KIND_BERTINI, f"needs s <= r-2, got s={s}, r={r}")

    return ExistenceThresholds(tuple(entries))


VERDICT_HOLDS = "holds"
VERDICT_VIOLATED = "violated"
VERDICT_NOT_APPLICABLE = "not-applicable"
VERDICT_INCONCLUSIVE = "inconclusive"

SEVERITY_HARD = "hard"
SEVERITY_SOFT = "soft"


@dataclass(frozen=True)
class BoundCheck:
    """One verified inequality: measured value against a named bound."""

    name: str
    measured: Optional[Measured]
    bound: Union[SqrtBound, int, Fraction, None]
    verdict: str
    severity: str
    detail: str

    @property
    def ok(self) -> bool:
        """False only for a violated hard bound."""
        return not (
            self.verdict == VERDICT_VIOLATED and self.severity == SEVERITY_HARD
        )


def check(
    name: str,
    measured: Optional[Measured],
    bound: Union[SqrtBound, int, Fraction, None],
    severity: str = SEVERITY_HARD,
    applicable: bool = True,
    reason: str = "",
) -> BoundCheck:
    """Decide measured <= bound exactly and package the verdict.

    With applicable=False the verdict is not-applicable and nothing is
    compared; reason then documents the unmet hypothesis.
    """
    if not applicable:
        return BoundCheck(
            name,
            measured,
            bound,
            VERDICT_NOT_APPLICABLE,
            severity,
            reason or "hypotheses not met",
        )
    if measured is None:
        raise ValidationError(f"{name}: no measured value to check")
    if bound is None:
        raise ValidationError(f"{name}: no bound value to check against")
    if isinstance(bound, SqrtBound):
        ok = bound.admits(measured)
    else:
        ok = measured <= bound
    relation = "<=" if ok else ">"
    return BoundCheck(
        name,
        measured,
        bound,
        VERDICT_HOLDS if ok else VERDICT_VIOLATED,
        severity,
        f"{name}: measured {measured} {relation} bound {bound}",
    )


@dataclass(frozen=True)
class BoundReport:
    """All bound checks for one instance, with an aggregate verdict."""

    label: str
    checks: tuple[BoundCheck, ...]

    def __post_init__(self):
        if not self.checks:
            raise ValidationError(f"{self.label}: empty bound report")

    @property
    def hard_violations(self) -> tuple[BoundCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)

    @property
    def verdict(self) -> str:
        return VERDICT_VIOLATED if self.hard_violations else VERDICT_HOLDS
