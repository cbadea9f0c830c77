"""Vectorized enumeration and polynomial evaluation on element-code arrays.

An element code is its enumeration index in the field (gf.FieldSpec.index).
Everything here works on int64 code arrays with table-driven arithmetic, so
results are exact and agree entry-for-entry with the object-level routines in
points/mpoly; the test suite pins that equivalence.  Fields must fit the
arithmetic-table budget (gf.MAX_TABLE_CARDINALITY).
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .gf import FieldSpec, arithmetic_tables, field_embedding, power_table
from .mpoly import MultiPoly


class CodeTables:
    """Arithmetic lookup tables for one field, plus helpers used by scans."""

    def __init__(self, field: FieldSpec, max_exponent: int = 8):
        self.field = field
        self.q = field.q
        self.add, self.mul, self.neg, self.inv = arithmetic_tables(field)
        self.pow = power_table(field, max_exponent)
        self.one_code = field.index(field.one())

    def ensure_exponent(self, e: int) -> None:
        if e >= self.pow.shape[1]:
            self.pow = power_table(self.field, max(e, 2 * (self.pow.shape[1] - 1)))


def embedding_code_map(F: FieldSpec, E: FieldSpec) -> np.ndarray:
    """codes of F -> codes of their images in E, as an int64 array of length q."""
    emb = field_embedding(F, E)
    out = np.empty(F.q, dtype=np.int64)
    for i in range(F.q):
        out[i] = E.index(emb(F.from_index(i)))
    return out


def iter_chunks(total: int, chunk: int) -> Iterator[tuple[int, int]]:
    lo = 0
    while lo < total:
        hi = min(lo + chunk, total)
        yield lo, hi
        lo = hi


def affine_codes(n: int, F: FieldSpec, start: int, stop: int) -> np.ndarray:
    """Code matrix of affine points start..stop-1; first coordinate is the
    most significant base-q digit of the index, matching points.affine_point_at."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, n), dtype=np.int64)
    q = F.q
    for col in range(n - 1, -1, -1):
        out[:, col] = idx % q
        idx //= q
    return out


def projective_codes(n: int, F: FieldSpec, start: int, stop: int) -> np.ndarray:
    """Canonical projective representatives start..stop-1 as an (m, n+1) code
    matrix, mirroring points.projective_point_at (strata by leading-1 slot)."""
    q = F.q
    one = F.index(F.one())
    out = np.zeros((stop - start, n + 1), dtype=np.int64)
    row = 0
    offset = start
    stratum_lo = 0
    for lead in range(n + 1):
        size = q ** (n - lead)
        lo = max(offset, stratum_lo)
        hi = min(stop, stratum_lo + size)
        if lo < hi:
            m = hi - lo
            out[row : row + m, lead] = one
            if n - lead:
                out[row : row + m, lead + 1 :] = affine_codes(
                    n - lead, F, lo - stratum_lo, hi - stratum_lo
                )
            row += m
            offset = hi
        stratum_lo += size
    return out


def projective_index(codes: np.ndarray, F: FieldSpec) -> np.ndarray:
    """Inverse of projective_codes for canonical rows."""
    q = F.q
    n = codes.shape[1] - 1
    lead = np.argmax(codes != 0, axis=1)
    idx = np.zeros(codes.shape[0], dtype=np.int64)
    # start of each stratum: sum of q^(n-j) for j < lead
    stratum_start = np.zeros(n + 2, dtype=np.int64)
    for j in range(n + 1):
        stratum_start[j + 1] = stratum_start[j] + q ** (n - j)
    idx += stratum_start[lead]
    for col in range(n + 1):
        active = lead < col
        if active.any():
            idx[active] = idx[active] * q + codes[active, col]
    return idx


CompiledTerm = tuple[int, tuple[tuple[int, int], ...]]


def compile_poly(
    poly: MultiPoly, E: FieldSpec, T: CodeTables
) -> tuple[CompiledTerm, ...]:
    """Flatten a polynomial to (coefficient code in E, ((var, exp), ...)) terms."""
    if E == poly.field:
        code_of = {i: i for i in range(poly.field.q)}
    else:
        table = embedding_code_map(poly.field, E)
        code_of = {i: int(table[i]) for i in range(poly.field.q)}
    out = []
    for mono, coeff in poly.terms:
        factors = tuple((v, e) for v, e in enumerate(mono) if e)
        for _, e in factors:
            T.ensure_exponent(e)
        out.append((code_of[poly.field.index(coeff)], factors))
    return tuple(out)


def eval_compiled(
    compiled: Sequence[CompiledTerm], codes: np.ndarray, T: CodeTables
) -> np.ndarray:
    """Evaluate one compiled polynomial at every row of a code matrix."""
    m = codes.shape[0]
    acc = np.zeros(m, dtype=np.int64)
    for coeff_code, factors in compiled:
        val = np.full(m, coeff_code, dtype=np.int64)
        for var, exp in factors:
            val = T.mul[val, T.pow[codes[:, var], exp]]
        acc = T.add[acc, val]
    return acc


def scan_projective_zero_locus(
    polys: Sequence[MultiPoly],
    n: int,
    E: FieldSpec,
    budget: int,
    chunk: int = 1 << 20,
    workers: int = 1,
) -> np.ndarray:
    """Codes of all canonical points of P^n(E) where every poly vanishes,
    in enumeration order.  Coefficients are embedded from the polys' base
    field into E.  Raises through points.check_budget semantics upstream;
    here budget is assumed already validated by the caller."""
    from concurrent.futures import ThreadPoolExecutor

    T = CodeTables(E)
    compiled = [compile_poly(F, E, T) for F in polys]
    total = sum(E.q**j for j in range(n + 1))

    def scan_range(lo_hi: tuple[int, int]) -> np.ndarray:
        lo, hi = lo_hi
        codes = projective_codes(n, E, lo, hi)
        mask = np.ones(hi - lo, dtype=bool)
        for comp in compiled:
            mask &= eval_compiled(comp, codes, T) == 0
            if not mask.any():
                break
        return codes[mask]

    ranges = list(iter_chunks(total, chunk))
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(scan_range, ranges))
    else:
        parts = [scan_range(r) for r in ranges]
    if not parts:
        return np.empty((0, n + 1), dtype=np.int64)
    return np.concatenate(parts, axis=0)


def codes_to_points(codes: np.ndarray, E: FieldSpec):
    """Materialize code rows as canonical ProjectivePoint objects."""
    from .points import ProjectivePoint

    elems = [E.from_index(i) for i in range(E.q)]
    return tuple(
        ProjectivePoint(tuple(elems[c] for c in row)) for row in codes.tolist()
    )


def apply_linear_map(
    rows_codes: np.ndarray, point_codes: np.ndarray, T: CodeTables
) -> np.ndarray:
    """Images lambda . x for every point row: (m, n+1) x (k, n+1) -> (m, k)."""
    m = point_codes.shape[0]
    k = rows_codes.shape[0]
    out = np.zeros((m, k), dtype=np.int64)
    for j in range(k):
        acc = np.zeros(m, dtype=np.int64)
        for col in range(point_codes.shape[1]):
            c = int(rows_codes[j, col])
            if c == 0:
                continue
            acc = T.add[acc, T.mul[c, point_codes[:, col]]]
        out[:, j] = acc
    return out


def normalize_rows(images: np.ndarray, T: CodeTables) -> np.ndarray:
    """Scale each nonzero row so its leftmost nonzero entry is 1."""
    nonzero = images != 0
    lead = np.argmax(nonzero, axis=1)
    lead_codes = images[np.arange(images.shape[0]), lead]
    scale = T.inv[lead_codes]
    out = T.mul[scale[:, None], images]
    out[~nonzero.any(axis=1)] = 0
    return out
