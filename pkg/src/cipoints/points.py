"""Deterministic enumeration of A^n(F_q), P^n(F_q), and multiprojective products.

Every enumeration has a fixed documented order, O(1) memory per consumer, and
random access by index, so the index range can be partitioned into disjoint
chunks whose union over any worker count reproduces the full sequence.

Projective points are canonical: the leftmost nonzero coordinate equals 1,
which stratifies P^n = A^n + A^{n-1} + ... + A^0 and matches p_n(q) exactly.
The order is: stratum with leading 1 in position 0 first, then position 1,
etc.; within a stratum the free coordinates run lexicographically in element
enumeration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import BudgetExceededError, ValidationError
from .gf import FieldElement, FieldSpec

# Default ceiling on points visited by one exhaustive scan.
DEFAULT_ENUMERATION_BUDGET = 50_000_000


def p_r(q: int, r: int) -> int:
    """q^r + ... + q + 1; p_0 = 1 and p_{-1} = 0 by convention.

    The r = -1 case lets bounds like delta*q^{n-1} + p_{n-2} evaluate
    uniformly at n = 1.
    """
    if q < 2:
        raise ValidationError(f"p_r needs q >= 2, got {q}")
    if r < -1:
        raise ValidationError(f"p_r undefined for r = {r} < -1")
    return sum(q**i for i in range(r + 1))


def check_budget(size: int, budget: int | None, what: str) -> None:
    limit = DEFAULT_ENUMERATION_BUDGET if budget is None else budget
    if size > limit:
        raise BudgetExceededError(f"{what} has {size} points, over the budget {limit}")


@dataclass(frozen=True)
class ProjectivePoint:
    """A canonical point of P^n: leftmost nonzero coordinate is 1."""

    coords: tuple[FieldElement, ...]

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def leading_index(self) -> int:
        for i, c in enumerate(self.coords):
            if not c.is_zero():
                return i
        raise ValidationError("projective point with all coordinates zero")

    def __repr__(self) -> str:
        return "(" + ":".join(repr(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class MultiProjectivePoint:
    components: tuple[ProjectivePoint, ...]

    def __repr__(self) -> str:
        return "".join(repr(c) for c in self.components)


def normalize_projective(coords: Sequence[FieldElement]) -> ProjectivePoint:
    """Scale so the leftmost nonzero coordinate is 1."""
    lead = None
    for c in coords:
        if not c.is_zero():
            lead = c
            break
    if lead is None:
        raise ValidationError("cannot normalize the zero vector to a projective point")
    from .gf import inv

    scale = inv(lead)
    return ProjectivePoint(tuple(scale * c for c in coords))


# -- index-based random access ------------------------------------------------


def affine_size(n: int, q: int) -> int:
    return q**n


def affine_point_at(n: int, F: FieldSpec, index: int) -> tuple[FieldElement, ...]:
    """The index-th tuple of A^n in lexicographic order (first coordinate slowest)."""
    q = F.q
    if not 0 <= index < q**n:
        raise ValidationError(f"affine index {index} out of range for A^{n}(F_{q})")
    digits = []
    for _ in range(n):
        digits.append(index % q)
        index //= q
    return tuple(F.from_index(d) for d in reversed(digits))


def projective_point_at(n: int, F: FieldSpec, index: int) -> ProjectivePoint:
    """The index-th canonical point of P^n; strata by leading-1 position."""
    q = F.q
    if not 0 <= index < p_r(q, n):
        raise ValidationError(f"projective index {index} out of range for P^{n}(F_{q})")
    lead = 0
    stratum = q**n
    while index >= stratum:
        index -= stratum
        lead += 1
        stratum //= q
    zeros = (F.zero(),) * lead
    tail = affine_point_at(n - lead, F, index)
    return ProjectivePoint(zeros + (F.one(),) + tail)


def multiprojective_size(nvec: Sequence[int], q: int) -> int:
    out = 1
    for n in nvec:
        out *= p_r(q, n)
    return out


def multiprojective_point_at(
    nvec: Sequence[int], F: FieldSpec, index: int
) -> MultiProjectivePoint:
    """Mixed-radix decoding; the first component varies slowest."""
    sizes = [p_r(F.q, n) for n in nvec]
    total = 1
    for s in sizes:
        total *= s
    if not 0 <= index < total:
        raise ValidationError(f"multiprojective index {index} out of range")
    comps: list[ProjectivePoint] = [None] * len(nvec)  # type: ignore[list-item]
    for i in range(len(nvec) - 1, -1, -1):
        comps[i] = projective_point_at(nvec[i], F, index % sizes[i])
        index //= sizes[i]
    return MultiProjectivePoint(tuple(comps))


# -- streaming enumerations ----------------------------------------------------


def enumerate_affine(
    n: int,
    F: FieldSpec,
    budget: int | None = None,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[tuple[FieldElement, ...]]:
    """Stream A^n(F_q); [start, stop) selects an index chunk for one worker."""
    total = affine_size(n, F.q)
    check_budget(total, budget, f"A^{n}(F_{F.q})")
    stop = total if stop is None else min(stop, total)
    if n == 0:
        if start == 0 and stop > 0:
            yield ()
        return
    for i in range(start, stop):
        yield affine_point_at(n, F, i)


def enumerate_projective(
    n: int,
    F: FieldSpec,
    budget: int | None = None,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[ProjectivePoint]:
    """Stream the p_n(q) canonical points of P^n(F_q) in stratum order."""
    total = p_r(F.q, n)
    check_budget(total, budget, f"P^{n}(F_{F.q})")
    stop = total if stop is None else min(stop, total)
    for i in range(start, stop):
        yield projective_point_at(n, F, i)


def enumerate_multiprojective(
    nvec: Sequence[int],
    F: FieldSpec,
    budget: int | None = None,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[MultiProjectivePoint]:
    """Stream the product P^{n_1} x ... x P^{n_m}, first component slowest."""
    if any(n < 0 for n in nvec):
        raise ValidationError(f"negative ambient dimension in {tuple(nvec)}")
    total = multiprojective_size(nvec, F.q)
    check_budget(total, budget, f"P^{tuple(nvec)}(F_{F.q})")
    stop = total if stop is None else min(stop, total)
    for i in range(start, stop):
        yield multiprojective_point_at(nvec, F, i)


def chunk_ranges(total: int, workers: int) -> list[tuple[int, int]]:
    """Split [0, total) into <= workers contiguous ranges of near-equal size.

    The same (total, workers) always yields the same split, and the
    concatenation of the ranges is [0, total) regardless of workers.
    """
    if workers < 1:
        raise ValidationError(f"worker count {workers} must be >= 1")
    workers = min(workers, max(total, 1))
    base, extra = divmod(total, workers)
    ranges = []
    lo = 0
    for w in range(workers):
        hi = lo + base + (1 if w < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges
