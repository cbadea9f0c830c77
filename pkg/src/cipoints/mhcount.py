"""Batch exact zero counts for seeded random multihomogeneous forms.

One cell fixes group dimensions n = (n_1, ..., n_m), a multidegree
d = (d_1, ..., d_m), a field, an instance count, and a seed.  The engine
draws that many dense random forms and evaluates all of them on every
point of P^{n_1} x ... x P^{n_m}(F_q) through a staged matrix
contraction, one group at a time, reporting per instance the exact
projective zero count, the exact affine zero count via the scaling
identity, and the first point where the form does not vanish.

Field arithmetic rides ordinary matrix products: each element is carried
as its base-p digit vector packed into a single integer with a radix wide
enough that digit slots never collide.  A product of packed values then
convolves the digit vectors slot by slot, and a fixed reduction matrix
folds slots k..2k-2 back onto the field basis.  Every intermediate stays
far below 2^53, so float64 matrix products are exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .gf import FieldElement, FieldSpec, power
from .mpoly import MultiPoly, make_poly, monomials_of_degree, multidegree_monomials
from .points import multiprojective_size, p_r, projective_point_at

__all__ = [
    "CellCounts",
    "CellSpec",
    "cell_coefficients",
    "count_cell",
    "instance_poly",
]

FLOAT_EXACT_LIMIT = 1 << 53
DEFAULT_BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class CellSpec:
    """One batch: random forms of fixed shape over a fixed field."""

    field: FieldSpec
    group_dims: tuple[int, ...]
    multidegree: tuple[int, ...]
    instances: int
    seed: int

    def __post_init__(self):
        if not self.group_dims:
            raise ValidationError("at least one group is required")
        if len(self.multidegree) != len(self.group_dims):
            raise ValidationError(
                f"{len(self.multidegree)} degrees for {len(self.group_dims)} groups"
            )
        if any(n < 1 for n in self.group_dims):
            raise ValidationError(f"group dimensions {self.group_dims} must be >= 1")
        if any(d < 1 for d in self.multidegree):
            raise ValidationError(f"multidegree {self.multidegree} must be >= 1")
        if self.instances < 1:
            raise ValidationError(f"instance count {self.instances} < 1")

    @property
    def m(self) -> int:
        return len(self.group_dims)

    @property
    def monomial_counts(self) -> tuple[int, ...]:
        return tuple(
            math.comb(n + d, d) for n, d in zip(self.group_dims, self.multidegree)
        )

    @property
    def point_count(self) -> int:
        return multiprojective_size(self.group_dims, self.field.q)

    @property
    def affine_total(self) -> int:
        return self.field.q ** sum(n + 1 for n in self.group_dims)


@dataclass(frozen=True)
class CellCounts:
    """Per-instance exact counts for one cell.

    nonzero_index[b] is the smallest multiprojective point index where
    instance b does not vanish, or -1 if it vanishes at every rational
    point, which a nonzero form can do when q is small relative to its
    degree.
    """

    spec: CellSpec
    projective_zeros: tuple[int, ...]
    affine_zeros: tuple[int, ...]
    nonzero_index: tuple[int, ...]


def cell_coefficients(spec: CellSpec) -> np.ndarray:
    """Seeded coefficient codes, shape (instances, total monomials).

    Column j holds the coefficient of multidegree_monomials(...)[j].
    All-zero draws are redrawn so every instance is a genuine form of the
    requested multidegree.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    total = math.prod(spec.monomial_counts)
    codes = rng.integers(0, spec.field.q, size=(spec.instances, total), dtype=np.int64)
    while True:
        zero_rows = ~codes.any(axis=1)
        if not zero_rows.any():
            return codes
        codes[zero_rows] = rng.integers(
            0, spec.field.q, size=(int(zero_rows.sum()), total), dtype=np.int64
        )


def instance_poly(spec: CellSpec, index: int) -> MultiPoly:
    """Rebuild instance `index` as a MultiPoly for independent evaluation."""
    if not 0 <= index < spec.instances:
        raise ValidationError(f"instance {index} outside 0..{spec.instances - 1}")
    field = spec.field
    codes = cell_coefficients(spec)[index]
    group_sizes = tuple(n + 1 for n in spec.group_dims)
    monos = multidegree_monomials(group_sizes, spec.multidegree)
    terms = {
        mono: field.from_index(int(code))
        for mono, code in zip(monos, codes)
        if code
    }
    return make_poly(field, group_sizes, terms)


def _digit_planes(codes: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Base-p digits of element codes; plane j is the coefficient of x^j."""
    p, k = field.p, field.k
    return np.stack([(codes // p ** (k - 1 - j)) % p for j in range(k)])


def _pack(digits: np.ndarray, radix: int) -> np.ndarray:
    """Digit planes to one packed float64 plane: sum digits[j] * radix^j."""
    out = np.zeros(digits.shape[1:], dtype=np.float64)
    for j in range(digits.shape[0] - 1, -1, -1):
        out *= radix
        out += digits[j]
    return out


@lru_cache(maxsize=None)
def _reduction_matrix(field: FieldSpec) -> np.ndarray:
    """k x (2k-1) matrix folding convolution slots onto the field basis.

    Column t carries the basis digits of x^t; for t < k that is a unit
    vector, beyond that the modulus folds it back down.
    """
    k = field.k
    R = np.zeros((k, 2 * k - 1), dtype=np.int64)
    for t in range(k):
        R[t, t] = 1
    if k > 1:
        x = FieldElement(field, tuple(1 if j == 1 else 0 for j in range(k)))
        for t in range(k, 2 * k - 1):
            R[:, t] = power(x, t).coeffs
    return R


def _slot_radix(field: FieldSpec, inner: int) -> tuple[int, int]:
    """(radix, shift) wide enough that convolution slots cannot collide.

    A slot accumulates at most inner * k * (p-1)^2, and the packed values
    must keep inner * packed^2 below 2^53 for exact float64 products.
    """
    p, k = field.p, field.k
    cap = inner * k * (p - 1) ** 2
    shift = max(1, cap.bit_length())
    radix = 1 << shift
    packed_max = (p - 1) * (radix ** k - 1) // (radix - 1)
    if inner * packed_max * packed_max >= FLOAT_EXACT_LIMIT:
        raise ValidationError(
            f"digit packing for F_{field.q} with inner dimension {inner} "
            "cannot stay exact in float64"
        )
    return radix, shift


def _reduce(acc: np.ndarray, field: FieldSpec, radix: int, shift: int) -> np.ndarray:
    """Packed accumulator back to digit planes, folded and taken mod p."""
    p, k = field.p, field.k
    acc_int = acc.astype(np.int64)
    if k == 1:
        return (acc_int % p)[None]
    mask = radix - 1
    conv = np.stack([(acc_int >> (shift * t)) & mask for t in range(2 * k - 1)])
    R = _reduction_matrix(field)
    return np.tensordot(R, conv, axes=(1, 0)) % p


FOLD_TABLE_LIMIT = 1 << 25


@lru_cache(maxsize=64)
def _fold_tables(
    field: FieldSpec, radix: int, shift: int, inner: int
) -> tuple[np.ndarray, np.ndarray] | None:
    """Lookup tables over every reachable accumulator value: a zero-element
    mask and the folded repacked value.  One gather then replaces the whole
    unpack-fold-repack chain.  None when the reachable range is too large
    to tabulate; callers fall back to _reduce.

    The cache must hold the full working set of a sweep that interleaves
    several fields and shapes; rebuilding a large table dwarfs the actual
    contraction cost, so eviction is sized to be rare."""
    p, k = field.p, field.k
    cap = (p - 1) * (radix**k - 1) // (radix - 1)
    limit = inner * cap * cap + 1
    if limit > FOLD_TABLE_LIMIT:
        return None
    zero = np.empty(limit, dtype=bool)
    repacked = np.empty(limit, dtype=np.float64)
    block = 1 << 20
    for lo in range(0, limit, block):
        acc = np.arange(lo, min(limit, lo + block), dtype=np.int64)
        digits = _reduce(acc, field, radix, shift)
        zero[lo : lo + acc.size] = ~(digits != 0).any(axis=0)
        repacked[lo : lo + acc.size] = _pack(digits, radix)
    return zero, repacked


@lru_cache(maxsize=None)
def _monomial_matrix(field: FieldSpec, n: int, d: int) -> np.ndarray:
    """Codes of all degree-d monomials in n+1 variables at every canonical
    point of P^n(F_q); shape (monomials, points)."""
    monos = monomials_of_degree(n + 1, d)
    size = p_r(field.q, n)
    out = np.empty((len(monos), size), dtype=np.int64)
    for col in range(size):
        coords = projective_point_at(n, field, col).coords
        for row, mono in enumerate(monos):
            value = field.one()
            for coord, exp in zip(coords, mono):
                if exp:
                    value = value * power(coord, exp)
            out[row, col] = field.index(value)
    return out


def count_cell(spec: CellSpec, block_elements: int = DEFAULT_BLOCK_ELEMENTS) -> CellCounts:
    """Exact per-instance zero counts over the whole multiprojective space.

    Groups are contracted from the last to the first, so the emitted point
    axis order matches multiprojective_point_at: the first group varies
    slowest.  The affine count follows from the projective one because
    every group degree is positive: tuples with a vanished group are
    automatic zeros, and each projective zero lifts (q-1)^m ways.
    """
    field = spec.field
    q, m = field.q, spec.m
    counts = list(spec.monomial_counts)
    sizes = [p_r(q, n) for n in spec.group_dims]
    radix, shift = _slot_radix(field, max(counts))
    mats = [
        _pack(_digit_planes(_monomial_matrix(field, n, d), field), radix)
        for n, d in zip(spec.group_dims, spec.multidegree)
    ]
    codes = cell_coefficients(spec)
    B = spec.instances
    cur = _pack(_digit_planes(codes, field), radix)
    cur = cur.reshape(B * math.prod(counts[:-1]), counts[-1], 1)
    X = 1

    def contracted(cur: np.ndarray, mat: np.ndarray, inner: int) -> np.ndarray:
        batch, _c, width = cur.shape
        points = mat.shape[1]
        left = np.ascontiguousarray(mat.T)[None]
        tables = _fold_tables(field, radix, shift, inner)
        out = np.empty((batch, points, width), dtype=np.float64)
        rows = max(1, block_elements // max(1, points * width))
        for a in range(0, batch, rows):
            acc = np.matmul(left, cur[a : a + rows])
            if tables is None:
                out[a : a + rows] = _pack(_reduce(acc, field, radix, shift), radix)
            else:
                out[a : a + rows] = tables[1][acc.astype(np.int64)]
        return out

    for g in range(m - 1, 0, -1):
        cur = contracted(cur, mats[g], counts[g])
        X *= sizes[g]
        cur = cur.reshape(B * math.prod(counts[: g - 1]), counts[g - 1], X)

    # Final stage: contract the first group, streaming per-instance masks.
    first_points = sizes[0]
    total = first_points * X
    left = np.ascontiguousarray(mats[0].T)[None]
    tables = _fold_tables(field, radix, shift, counts[0])
    zeros = np.zeros(B, dtype=np.int64)
    first = np.full(B, -1, dtype=np.int64)
    rows = max(1, block_elements // max(1, total))
    for a in range(0, B, rows):
        acc = np.matmul(left, cur[a : a + rows])
        if tables is None:
            digits = _reduce(acc, field, radix, shift)
            nonzero = (digits != 0).any(axis=0).reshape(-1, total)
        else:
            nonzero = ~tables[0][acc.astype(np.int64)].reshape(-1, total)
        zeros[a : a + rows] = total - nonzero.sum(axis=1)
        has = nonzero.any(axis=1)
        locs = nonzero.argmax(axis=1)
        segment = first[a : a + rows]
        segment[has] = locs[has]

    assert spec.point_count == total
    missing = math.prod(q ** (n + 1) - 1 for n in spec.group_dims)
    affine = tuple(
        spec.affine_total - missing + int(z) * (q - 1) ** m for z in zeros
    )
    return CellCounts(
        spec=spec,
        projective_zeros=tuple(int(z) for z in zeros),
        affine_zeros=affine,
        nonzero_index=tuple(int(i) for i in first),
    )
