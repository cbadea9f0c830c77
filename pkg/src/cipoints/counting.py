"""Exact point counting and classification for declared complete intersections.

A VarietySpec carries generators plus *declared* dimension and singular-locus
bound; being an ideal-theoretic complete intersection (and the bound itself)
is taken on trust, as the downstream formulas require.  Everything counted
here is counted by exhaustive enumeration over canonical representatives, so
all results are exact.

Smoothness over the algebraic closure cannot be decided by finite
enumeration.  The audit operations are therefore one-sided: they certify
fibers singular from witnesses over F_{q^k} for k up to a chosen level, and
silence is never a smoothness certificate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import fastscan, parallel
from .errors import ValidationError
from .gf import (
    Embedding,
    FieldElement,
    FieldSpec,
    extension_field,
    field_embedding,
    inv,
)
from .mpoly import MultiPoly, eval_poly, gradient, is_multihomogeneous
from .points import (
    DEFAULT_ENUMERATION_BUDGET,
    ProjectivePoint,
    check_budget,
    enumerate_affine,
    enumerate_multiprojective,
    enumerate_projective,
    normalize_projective,
    p_r,
)

MAX_AUDIT_LEVEL = 4


@dataclass(frozen=True)
class VarietySpec:
    """A declared complete intersection in P^n.

    generators: codim-many homogeneous polynomials in one group of n+1
    variables, listed with nonincreasing degrees.  singular_bound is the
    declared upper bound s on dim Sing(V), or None for a variety declared
    smooth over the closure.
    """

    field: FieldSpec
    ambient_dim: int
    generators: tuple[MultiPoly, ...]
    declared_dim: int
    singular_bound: int | None = None

    def __post_init__(self):
        n, r = self.ambient_dim, self.declared_dim
        if n < 2:
            raise ValidationError(f"ambient dimension {n} < 2")
        if not 1 <= r < n:
            raise ValidationError(f"declared dimension {r} outside 1..{n - 1}")
        if len(self.generators) != n - r:
            raise ValidationError(
                f"{len(self.generators)} generators for codimension {n - r}"
            )
        degs = []
        for i, g in enumerate(self.generators):
            if g.field != self.field:
                raise ValidationError(f"generator {i} over a different field")
            if g.group_sizes != (n + 1,):
                raise ValidationError(
                    f"generator {i} has groups {g.group_sizes}, expected ({n + 1},)"
                )
            mdeg = is_multihomogeneous(g)
            if mdeg is None:
                raise ValidationError(f"generator {i} is not homogeneous")
            if mdeg[0] < 1:
                raise ValidationError(f"generator {i} has degree {mdeg[0]} < 1")
            degs.append(mdeg[0])
        if any(degs[i] < degs[i + 1] for i in range(len(degs) - 1)):
            raise ValidationError(
                f"generator degrees {tuple(degs)} must be nonincreasing"
            )
        s = self.singular_bound
        if s is not None and not 0 <= s <= r - 2:
            raise ValidationError(
                f"singular bound {s} outside 0..{r - 2} for dimension {r}"
            )

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.declared_dim

    @property
    def multidegree(self) -> tuple[int, ...]:
        return tuple(is_multihomogeneous(g)[0] for g in self.generators)

    @property
    def degree(self) -> int:
        out = 1
        for d in self.multidegree:
            out *= d
        return out

    @property
    def degree_excess(self) -> int:
        """Sum of (d_i - 1) over the multidegree."""
        return sum(d - 1 for d in self.multidegree)

    def resolve_s(self) -> int:
        """Singular bound used by projection-shaped operations.

        A variety declared smooth is a valid s=0 instance whenever r >= 2;
        an r=1 variety admits no valid s at all.
        """
        if self.declared_dim < 2:
            raise ValidationError(
                f"no singular bound is admissible in dimension {self.declared_dim}"
            )
        return 0 if self.singular_bound is None else self.singular_bound


def make_variety(
    field: FieldSpec,
    ambient_dim: int,
    generators: Sequence[MultiPoly],
    declared_dim: int,
    singular_bound: int | None = None,
) -> VarietySpec:
    """Build a VarietySpec, sorting generators by degree (nonincreasing)."""
    gens = sorted(
        generators,
        key=lambda g: (is_multihomogeneous(g) or (0,))[0],
        reverse=True,
    )
    return VarietySpec(
        field=field,
        ambient_dim=ambient_dim,
        generators=tuple(gens),
        declared_dim=declared_dim,
        singular_bound=singular_bound,
    )


@dataclass(frozen=True)
class LinearProjection:
    """A full-rank (s+2) x (n+1) coefficient matrix; row j gives Y_j."""

    field: FieldSpec
    rows: tuple[tuple[FieldElement, ...], ...]

    def __post_init__(self):
        if not self.rows:
            raise ValidationError("projection needs at least one row")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValidationError("projection rows of unequal length")
        if matrix_rank([list(r) for r in self.rows], self.field) < len(self.rows):
            raise ValidationError("projection matrix is rank deficient")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def apply(self, coords: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
        out = []
        for row in self.rows:
            acc = coords[0].field.zero()
            for c, x in zip(row, coords):
                acc = acc + c * x
            out.append(acc)
        return tuple(out)


def matrix_rank(rows: list[list[FieldElement]], field: FieldSpec) -> int:
    """Rank by Gaussian elimination; exact field arithmetic throughout."""
    m = [list(r) for r in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    rank = 0
    for col in range(n_cols):
        pivot = next(
            (i for i in range(rank, n_rows) if not m[i][col].is_zero()), None
        )
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pinv = inv(m[rank][col])
        m[rank] = [pinv * v for v in m[rank]]
        for i in range(n_rows):
            if i != rank and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def _kernel_basis(
    rows: list[list[FieldElement]], field: FieldSpec
) -> list[list[FieldElement]]:
    """Basis of the right null space, from the reduced row echelon form."""
    m = [list(r) for r in rows]
    n_cols = len(m[0]) if m else 0
    pivot_cols: list[int] = []
    rank = 0
    for col in range(n_cols):
        pivot = next(
            (i for i in range(rank, len(m)) if not m[i][col].is_zero()), None
        )
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pinv = inv(m[rank][col])
        m[rank] = [pinv * v for v in m[rank]]
        for i in range(len(m)):
            if i != rank and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivot_cols.append(col)
        rank += 1
    zero, one = field.zero(), field.one()
    basis = []
    for free in range(n_cols):
        if free in pivot_cols:
            continue
        vec = [zero] * n_cols
        vec[free] = one
        for row_index, col in enumerate(pivot_cols):
            vec[col] = zero - m[row_index][free]
        basis.append(vec)
    return basis


def sample_projection(
    field: FieldSpec, ambient_dim: int, s: int, seed: int
) -> LinearProjection:
    """Seeded uniform draw over rank-(s+2) matrices, by rejection.

    The genericity the theory actually wants cannot be tested directly;
    rank is the only condition enforced, and any resulting bound violations
    are surfaced by the callers rather than suppressed here.
    """
    if s < 0:
        raise ValidationError(f"negative singular bound {s}")
    rng = random.Random(seed)
    q = field.q
    while True:
        rows = tuple(
            tuple(field.from_index(rng.randrange(q)) for _ in range(ambient_dim + 1))
            for _ in range(s + 2)
        )
        if matrix_rank([list(r) for r in rows], field) == s + 2:
            return LinearProjection(field=field, rows=rows)


# -- point sets ------------------------------------------------------------------


@lru_cache(maxsize=128)
def _variety_codes_cached(V: VarietySpec, level: int) -> np.ndarray:
    E = extension_field(V.field, level)
    check_budget(
        p_r(E.q, V.ambient_dim),
        DEFAULT_ENUMERATION_BUDGET,
        f"P^{V.ambient_dim}(F_{E.q})",
    )
    return fastscan.scan_projective_zero_locus(
        list(V.generators),
        V.ambient_dim,
        E,
        DEFAULT_ENUMERATION_BUDGET,
        workers=parallel.get_workers(),
    )


def variety_point_codes(V: VarietySpec, level: int = 1) -> np.ndarray:
    """Element-code matrix of V(F_{q^level}) in enumeration order (cached)."""
    return _variety_codes_cached(V, level)


@lru_cache(maxsize=64)
def variety_points(V: VarietySpec, level: int = 1) -> tuple[ProjectivePoint, ...]:
    E = extension_field(V.field, level)
    return fastscan.codes_to_points(variety_point_codes(V, level), E)


def _variety_points_reference(
    V: VarietySpec, level: int = 1, budget: int | None = None
) -> tuple[ProjectivePoint, ...]:
    """Object-level enumeration; the oracle the fast scan is tested against."""
    E = extension_field(V.field, level)
    emb = field_embedding(V.field, E) if level > 1 else None
    out = []
    for pt in enumerate_projective(V.ambient_dim, E, budget=budget):
        if all(
            eval_poly(g, pt.coords, embedding=emb).is_zero() for g in V.generators
        ):
            out.append(pt)
    return tuple(out)


def count_points(V: VarietySpec, level: int = 1) -> int:
    """|V(F_{q^level})| by exhaustive enumeration."""
    return int(variety_point_codes(V, level).shape[0])


def jacobian_rank(
    V: VarietySpec, x: ProjectivePoint, level: int = 1
) -> int:
    """Rank at x of the codim x (n+1) matrix of generator gradients."""
    E = extension_field(V.field, level)
    emb = field_embedding(V.field, E) if level > 1 else None
    for g in V.generators:
        if not eval_poly(g, x.coords, embedding=emb).is_zero():
            raise ValidationError("point is not on the variety")
    rows = [
        [eval_poly(d, x.coords, embedding=emb) for d in gradient(g)]
        for g in V.generators
    ]
    return matrix_rank(rows, E)


def is_smooth_point(V: VarietySpec, x: ProjectivePoint, level: int = 1) -> bool:
    return jacobian_rank(V, x, level) == V.codim


def classify_points(
    V: VarietySpec,
) -> tuple[tuple[ProjectivePoint, ...], tuple[ProjectivePoint, ...]]:
    """Partition V(F_q) into (smooth, singular) by Jacobian rank."""
    smooth, singular = [], []
    for x in variety_points(V):
        (smooth if jacobian_rank(V, x) == V.codim else singular).append(x)
    return tuple(smooth), tuple(singular)


def count_smooth_points(V: VarietySpec) -> tuple[int, int]:
    smooth, singular = classify_points(V)
    return len(smooth), len(singular)


def find_smooth_point(
    V: VarietySpec, budget: int | None = None
) -> ProjectivePoint | None:
    """First smooth F_q-point in enumeration order, streaming (early exit)."""
    for pt in enumerate_projective(V.ambient_dim, V.field, budget=budget):
        if all(eval_poly(g, pt.coords).is_zero() for g in V.generators):
            if jacobian_rank(V, pt) == V.codim:
                return pt
    return None


# -- multihomogeneous zero counts --------------------------------------------------


def count_multihomogeneous_zeros(
    F: MultiPoly, budget: int | None = None
) -> tuple[int, int]:
    """(projective, affine) zero counts of a multihomogeneous polynomial.

    The projective count enumerates the product of projective spaces
    directly.  When every group degree is positive the affine count follows
    exactly: tuples with a zero component are automatically zeros, and each
    projective zero lifts to (q-1)^m all-nonzero tuples; otherwise the affine
    space is enumerated as well.
    """
    mdeg = is_multihomogeneous(F)
    if mdeg is None:
        raise ValidationError(
            "zero or non-multihomogeneous polynomial has no zero-count profile"
        )
    nvec = tuple(g - 1 for g in F.group_sizes)
    q = F.field.q
    n_proj = 0
    for pt in enumerate_multiprojective(nvec, F.field, budget=budget):
        flat = tuple(c for comp in pt.components for c in comp.coords)
        if eval_poly(F, flat).is_zero():
            n_proj += 1
    if min(mdeg) >= 1:
        total = 1
        all_nonzero = 1
        for g in F.group_sizes:
            total *= q**g
            all_nonzero *= q**g - 1
        n_aff = total - all_nonzero + n_proj * (q - 1) ** len(nvec)
    else:
        n_aff = _count_affine_zeros_direct(F, budget)
    return n_proj, n_aff


def _count_affine_zeros_direct(F: MultiPoly, budget: int | None = None) -> int:
    n_aff = 0
    for x in enumerate_affine(F.n_vars, F.field, budget=budget):
        if eval_poly(F, x).is_zero():
            n_aff += 1
    return n_aff


def find_nonzero_point(F: MultiPoly, budget: int | None = None):
    """First multiprojective point where F does not vanish, or None."""
    nvec = tuple(g - 1 for g in F.group_sizes)
    for pt in enumerate_multiprojective(nvec, F.field, budget=budget):
        flat = tuple(c for comp in pt.components for c in comp.coords)
        if not eval_poly(F, flat).is_zero():
            return pt
    return None


# -- fibers of linear projections ---------------------------------------------------


@dataclass(frozen=True)
class FiberReport:
    """Per-fiber F_q counts for a projection pi: V -> P^{s+1}.

    Each N_y includes the exceptional count e = |(V cap L)(F_q)| because the
    fiber closure contains V cap L; the identity
    sum_y N_y - (p_{s+1} - 1) e = |V(F_q)| then holds exactly and is checked
    at construction time.
    """

    s: int
    q: int
    fiber_counts: tuple[tuple[ProjectivePoint, int], ...]
    exceptional: int
    total: int

    def __post_init__(self):
        lhs = sum(c for _, c in self.fiber_counts) - (
            p_r(self.q, self.s + 1) - 1
        ) * self.exceptional
        if lhs != self.total:
            raise ValidationError(
                f"fiber identity broken: {lhs} != total {self.total}"
            )

    def counts_dict(self) -> dict[ProjectivePoint, int]:
        return dict(self.fiber_counts)


def _check_projection(V: VarietySpec, proj: LinearProjection) -> int:
    s = V.resolve_s()
    if proj.field != V.field:
        raise ValidationError("projection over a different field")
    if proj.n_rows != s + 2:
        raise ValidationError(
            f"projection has {proj.n_rows} rows, variety needs s+2 = {s + 2}"
        )
    if len(proj.rows[0]) != V.ambient_dim + 1:
        raise ValidationError("projection width does not match the ambient space")
    return s


def fiber_decomposition(V: VarietySpec, proj: LinearProjection) -> FiberReport:
    s = _check_projection(V, proj)
    F = V.field
    counts: dict[ProjectivePoint, int] = {
        y: 0 for y in enumerate_projective(s + 1, F)
    }
    e = 0
    for x in variety_points(V):
        image = proj.apply(x.coords)
        if all(v.is_zero() for v in image):
            e += 1
        else:
            counts[normalize_projective(image)] += 1
    total = count_points(V)
    fibers = tuple((y, c + e) for y, c in counts.items())
    return FiberReport(
        s=s, q=F.q, fiber_counts=fibers, exceptional=e, total=total
    )


# -- polar loci and singular-fiber audits -------------------------------------------


def _embedded_rows(
    proj: LinearProjection, emb: Embedding | None
) -> tuple[tuple[FieldElement, ...], ...]:
    if emb is None:
        return proj.rows
    return tuple(tuple(emb(c) for c in row) for row in proj.rows)


def polar_minor_locus(
    V: VarietySpec, proj: LinearProjection, level: int = 1
) -> tuple[ProjectivePoint, ...]:
    """Points of V(F_{q^level}) where the stacked matrix of generator
    gradients and projection rows drops below full rank n-r+s+2.

    On the smooth locus these are exactly the polar-variety points for L;
    singular points of V always qualify since their gradient rows are
    already dependent.  Generators of degree < 2 are rejected, matching the
    domain of the underlying degree bounds.
    """
    s = _check_projection(V, proj)
    if min(V.multidegree) < 2:
        raise ValidationError("polar locus needs every generator degree >= 2")
    E = extension_field(V.field, level)
    emb = field_embedding(V.field, E) if level > 1 else None
    lam_rows = _embedded_rows(proj, emb)
    grads = [gradient(g) for g in V.generators]
    threshold = V.codim + s + 2
    out = []
    for x in variety_points(V, level):
        rows = [
            [eval_poly(d, x.coords, embedding=emb) for d in grad] for grad in grads
        ]
        rows.extend([list(r) for r in lam_rows])
        if matrix_rank(rows, E) < threshold:
            out.append(x)
    return tuple(out)


def audit_levels(max_level: int) -> tuple[int, ...]:
    """Extension levels actually scanned: k is subsumed by any multiple <= K."""
    if not 1 <= max_level <= MAX_AUDIT_LEVEL:
        raise ValidationError(
            f"audit level {max_level} outside 1..{MAX_AUDIT_LEVEL}"
        )
    return tuple(
        k for k in range(1, max_level + 1)
        if all(k * m > max_level for m in range(2, max_level + 1))
    )


AUDIT_RESEED = 1 << 20


def _center_meets_singular_locus(
    V: VarietySpec, proj: LinearProjection, levels: Sequence[int]
) -> bool:
    """Whether the projection center holds a singular point of V over any
    of the given extension levels."""
    basis = _kernel_basis([list(r) for r in proj.rows], V.field)
    if not basis:
        return False
    grads = [gradient(g) for g in V.generators]
    for level in levels:
        E = extension_field(V.field, level)
        emb = field_embedding(V.field, E) if level > 1 else None
        lifted = [
            [emb(c) if emb is not None else c for c in vec] for vec in basis
        ]
        for pt in enumerate_projective(len(lifted) - 1, E):
            x = tuple(
                sum((a * vec[j] for a, vec in zip(pt.coords, lifted)), E.zero())
                for j in range(len(lifted[0]))
            )
            if any(
                not eval_poly(g, x, embedding=emb).is_zero()
                for g in V.generators
            ):
                continue
            rows = [
                [eval_poly(dg, x, embedding=emb) for dg in grad]
                for grad in grads
            ]
            if matrix_rank(rows, E) < V.codim:
                return True
    return False


def audit_projection(
    V: VarietySpec, s: int, seed: int, max_level: int = 2
) -> LinearProjection:
    """Seeded projection admissible for the singular-fiber audit.

    Full rank alone is not enough for the audit's degree bound: a center
    through a singular point of V puts that point on the closure of every
    fiber, so one witness certifies all of them at once and the certified
    count can exceed the bound.  Draws whose center meets the singular
    locus over any scanned level are rejected and replaced by a fixed
    reseeding step, keeping the sweep deterministic.
    """
    levels = audit_levels(max_level)
    attempt = seed
    while True:
        proj = sample_projection(V.field, V.ambient_dim, s, attempt)
        if not _center_meets_singular_locus(V, proj, levels):
            return proj
        attempt += AUDIT_RESEED


@dataclass(frozen=True)
class AuditReport:
    """One-sided singular-fiber audit: every listed y is certified singular
    by an explicit witness over F_{q^k}, k <= max_level; fibers absent from
    the list are *not* certified smooth."""

    max_level: int
    levels_scanned: tuple[int, ...]
    certified: tuple[ProjectivePoint, ...]
    witness_levels: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.certified)


def _fiber_matrix_rows(
    y: ProjectivePoint,
    lam_rows: Sequence[Sequence[FieldElement]],
    emb_y: Embedding | None,
) -> list[list[FieldElement]]:
    """Gradient rows of the s+1 linear forms cutting the fiber over y."""
    j0 = y.leading_index()
    coords = [emb_y(c) if emb_y is not None else c for c in y.coords]
    rows = []
    for j in range(len(coords)):
        if j == j0:
            continue
        rows.append(
            [
                coords[j] * a - coords[j0] * b
                for a, b in zip(lam_rows[j0], lam_rows[j])
            ]
        )
    return rows


def singular_fiber_audit(
    V: VarietySpec, proj: LinearProjection, max_level: int = 2
) -> AuditReport:
    """Certify fibers of pi singular from witnesses over F_{q^k}, k <= max_level.

    A fiber over y in P^{s+1}(F_q) is certified once some x on it (points of
    V cap L lie on every fiber closure) has stacked gradient plus fiber-form
    rows of rank below n-r+s+1.  The result is a certified subset of the
    truly-singular fibers: one-sided by construction.
    """
    s = _check_projection(V, proj)
    F = V.field
    n = V.ambient_dim
    rationals = tuple(enumerate_projective(s + 1, F))
    grads = [gradient(g) for g in V.generators]
    threshold = V.codim + s + 1
    certified: dict[ProjectivePoint, int] = {}
    levels = audit_levels(max_level)

    for level in levels:
        E = extension_field(F, level)
        emb = field_embedding(F, E) if level > 1 else None
        lam_rows = _embedded_rows(proj, emb)
        T = fastscan.CodeTables(E)
        codes = variety_point_codes(V, level)
        lam_codes = np.array(
            [[E.index(c) for c in row] for row in lam_rows], dtype=np.int64
        )
        images = fastscan.apply_linear_map(lam_codes, codes, T)
        on_center = ~(images != 0).any(axis=1)
        norm = fastscan.normalize_rows(images, T)
        if level > 1:
            rational_codes = fastscan.embedding_code_map(F, E)
            rational_mask = np.isin(norm, rational_codes).all(axis=1)
            back = {int(rational_codes[i]): i for i in range(F.q)}
        else:
            rational_mask = np.ones(codes.shape[0], dtype=bool)
            back = {i: i for i in range(F.q)}
        rational_mask &= ~on_center

        def grad_rows_at(row_codes) -> list[list[FieldElement]]:
            x = tuple(E.from_index(int(c)) for c in row_codes)
            return [
                [eval_poly(d, x, embedding=emb) for d in grad] for grad in grads
            ]

        # Points of V cap L belong to every fiber closure.
        for row in codes[on_center]:
            g_rows = grad_rows_at(row)
            for y in rationals:
                if y in certified:
                    continue
                rows = g_rows + _fiber_matrix_rows(y, lam_rows, emb)
                if matrix_rank(rows, E) < threshold:
                    certified[y] = level

        for row, img in zip(codes[rational_mask], norm[rational_mask]):
            y = ProjectivePoint(
                tuple(F.from_index(back[int(c)]) for c in img)
            )
            if y in certified:
                continue
            rows = grad_rows_at(row) + _fiber_matrix_rows(y, lam_rows, emb)
            if matrix_rank(rows, E) < threshold:
                certified[y] = level

    ordered = sorted(certified, key=rationals.index)
    return AuditReport(
        max_level=max_level,
        levels_scanned=levels,
        certified=tuple(ordered),
        witness_levels=tuple(certified[y] for y in ordered),
    )


@dataclass(frozen=True)
class SectionSearchReport:
    """Outcome of the search for a fiber the audit could not fault."""

    found: bool
    seed: int | None
    projection: LinearProjection | None
    section_point: ProjectivePoint | None
    fiber_count: int
    audit_level: int
    seeds_tried: tuple[int, ...]


def nonsingular_section_search(
    V: VarietySpec, seeds: Iterable[int], max_level: int = 2
) -> SectionSearchReport:
    """First (lambda, y) whose fiber passes the level-K audit and carries at
    least one F_q-point.  The certificate is K-level only: the audit being
    one-sided, "passes" means no singularity witness was found, nothing more.
    Exhaustion is an ordinary result, not an error.
    """
    s = V.resolve_s()
    tried = []
    for seed in seeds:
        tried.append(seed)
        proj = sample_projection(V.field, V.ambient_dim, s, seed)
        audit = singular_fiber_audit(V, proj, max_level)
        flagged = set(audit.certified)
        report = fiber_decomposition(V, proj)
        for y, count in report.fiber_counts:
            if y not in flagged and count >= 1:
                return SectionSearchReport(
                    found=True,
                    seed=seed,
                    projection=proj,
                    section_point=y,
                    fiber_count=count,
                    audit_level=max_level,
                    seeds_tried=tuple(tried),
                )
    return SectionSearchReport(
        found=False,
        seed=None,
        projection=None,
        section_point=None,
        fiber_count=0,
        audit_level=max_level,
        seeds_tried=tuple(tried),
    )
