"""Exact arithmetic in F_{p^k}: construction, element ops, enumeration, embeddings.

Elements are coefficient vectors over Z_p in the power basis 1, x, ..., x^{k-1},
reduced modulo a deterministically chosen irreducible modulus, so that equal
field elements always have equal representations.  Everything here is pure and
immutable; no randomness, no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from .errors import BudgetExceededError, ValidationError

# Largest field constructed by make_field: covers base fields (q <= 2^16) and
# the extension levels used by audits (q^K <= 2^24).
MAX_FIELD_CARDINALITY = 1 << 24


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# Coefficient-vector helpers over Z_p.  Vectors are tuples, constant term
# first; they are kept at full length k (trailing zeros included) inside
# FieldElement, while the divmod helpers below work on variable-length lists.
# ---------------------------------------------------------------------------


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    # m monic; standard long division, remainder only.
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for j, mj in enumerate(m):
                a[shift + j] = (a[shift + j] - lead * mj) % p
        a.pop()
    return _poly_trim(a)


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    # b need not be monic but must be nonzero.
    inv_lead = pow(b[-1], p - 2, p)
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        if coef:
            q[shift] = coef
            for j, bj in enumerate(b):
                a[shift + j] = (a[shift + j] - coef * bj) % p
        a.pop()
    return _poly_trim(q), _poly_trim(a)


def _poly_is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree 1..deg(m)//2."""
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        # Monic degree-d candidates, low coefficients counted in base p.
        for code in range(p**d):
            cand = [0] * (d + 1)
            cand[d] = 1
            c = code
            for i in range(d):
                cand[i] = c % p
                c //= p
            if not _poly_mod(m, cand, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A concrete finite field F_{p^k}.

    ``modulus`` is the monic irreducible polynomial of degree k over Z_p used
    for reduction, stored constant term first with the leading 1 included;
    it is None exactly when k == 1.
    """

    p: int
    k: int
    modulus: tuple[int, ...] | None

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def cardinality(self) -> int:
        return self.q

    # -- element constructors ------------------------------------------------

    def element(self, value: int | tuple[int, ...] | list[int]) -> "FieldElement":
        """Coerce an integer (prime-subfield scalar) or coefficient vector."""
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.k - 1)
            return FieldElement(self, coeffs)
        if len(value) != self.k:
            raise ValidationError(
                f"coefficient vector of length {len(value)} for degree-{self.k} field"
            )
        return FieldElement(self, tuple(v % self.p for v in value))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def generator(self) -> "FieldElement":
        """The class of x (only meaningful for k > 1)."""
        if self.k == 1:
            return self.one()
        return FieldElement(self, (0, 1) + (0,) * (self.k - 2))

    # -- enumeration indexing ------------------------------------------------
    # Elements are ordered lexicographically on their coefficient vectors
    # (constant term compared first), so index 0 is 0 and, for prime fields,
    # the index equals the residue.

    def from_index(self, i: int) -> "FieldElement":
        if not 0 <= i < self.q:
            raise ValidationError(f"element index {i} outside [0, {self.q})")
        digits = []
        for _ in range(self.k):
            digits.append(i % self.p)
            i //= self.p
        return FieldElement(self, tuple(reversed(digits)))

    def index(self, a: "FieldElement") -> int:
        if a.field != self:
            raise ValidationError("element belongs to a different field")
        i = 0
        for c in a.coeffs:
            i = i * self.p + c
        return i

    def __repr__(self) -> str:
        return f"F_{self.p}" if self.k == 1 else f"F_{self.p}^{self.k}"


@dataclass(frozen=True)
class FieldElement:
    """An element of a FieldSpec; canonical (equal value <=> equal coeffs)."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check_same_field(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise ValidationError(f"mixed fields: {self.field} vs {other.field}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check_same_field(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check_same_field(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check_same_field(other)
        f = self.field
        if f.k == 1:
            return FieldElement(f, ((self.coeffs[0] * other.coeffs[0]) % f.p,))
        prod = _poly_mul(list(self.coeffs), list(other.coeffs), f.p)
        red = _poly_mod(prod, list(f.modulus), f.p)
        return FieldElement(f, tuple(red) + (0,) * (f.k - len(red)))

    def __repr__(self) -> str:
        if self.field.k == 1:
            return str(self.coeffs[0])
        names = {0: "", 1: "x"}
        parts = []
        for e, c in enumerate(self.coeffs):
            if c == 0:
                continue
            var = names.get(e, f"x^{e}")
            if not var:
                parts.append(str(c))
            else:
                parts.append(var if c == 1 else f"{c}{var}")
        return "+".join(parts) if parts else "0"


def field_of_order(q: int) -> FieldSpec:
    """Return F_q from its cardinality; q must be a prime power."""
    if not isinstance(q, int) or q < 2:
        raise ValidationError(f"field order {q!r} must be an integer >= 2")
    p = q
    for c in range(2, q):
        if c * c > q:
            break
        if q % c == 0:
            p = c
            break
    k = 0
    rest = q
    while rest % p == 0 and rest > 1:
        rest //= p
        k += 1
    if rest != 1:
        raise ValidationError(f"field order {q} is not a prime power")
    return make_field(p, k)


def make_field(p: int, k: int) -> FieldSpec:
    """Return F_{p^k} with the deterministic modulus.

    The modulus is the lexicographically smallest monic irreducible of degree
    k over Z_p, comparing coefficient vectors from the constant term up.
    """
    if not isinstance(p, int) or not _is_prime(p):
        raise ValidationError(f"characteristic {p!r} is not prime")
    if not isinstance(k, int) or k < 1:
        raise ValidationError(f"extension degree {k!r} must be a positive integer")
    if p**k > MAX_FIELD_CARDINALITY:
        raise BudgetExceededError(
            f"field size {p}^{k} exceeds the supported maximum {MAX_FIELD_CARDINALITY}"
        )
    if k == 1:
        return FieldSpec(p, 1, None)
    for code in range(p**k):
        low = []
        c = code
        for _ in range(k):
            low.append(c % p)
            c //= p
        # ``low`` holds (c_0, ..., c_{k-1}) with c_0 varying slowest, so the
        # scan order is exactly lexicographic from the constant term up.
        low = list(reversed(low))
        cand = low + [1]
        if _poly_is_irreducible(cand, p):
            return FieldSpec(p, k, tuple(cand))
    raise RuntimeError(f"no irreducible polynomial of degree {k} over F_{p}")  # unreachable


def parse_field_string(text: str) -> FieldSpec:
    """Parse a field named as "p" or "p^k" (e.g. "3", "2^4")."""
    parts = text.strip().split("^")
    if len(parts) not in (1, 2):
        raise ValidationError(f"bad field string {text!r}: expected p or p^k")
    try:
        p = int(parts[0])
    except ValueError:
        raise ValidationError(f"bad field string {text!r}: {parts[0]!r} is not an integer")
    k = 1
    if len(parts) == 2:
        try:
            k = int(parts[1])
        except ValueError:
            raise ValidationError(f"bad field string {text!r}: {parts[1]!r} is not an integer")
    return make_field(p, k)


# -- spec-named functional aliases ------------------------------------------


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def int_element(F: FieldSpec, n: int) -> FieldElement:
    """Image of the integer n under the canonical map Z -> F_q."""
    return FieldElement(F, (n % F.p,) + (0,) * (F.k - 1))


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse via extended Euclid on coefficient vectors."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero field element")
    f = a.field
    if f.k == 1:
        return FieldElement(f, (pow(a.coeffs[0], f.p - 2, f.p),))
    # Extended Euclid: r0 = modulus, r1 = a; track s only for r1's side.
    p = f.p
    r0, r1 = list(f.modulus), _poly_trim(list(a.coeffs))
    s0, s1 = [], [1]
    while r1:
        q, rem = _poly_divmod(r0, r1, p)
        r0, r1 = r1, rem
        qs = _poly_mul(q, s1, p)
        new_s = [0] * max(len(s0), len(qs))
        for i, c in enumerate(s0):
            new_s[i] = c
        for i, c in enumerate(qs):
            new_s[i] = (new_s[i] - c) % p
        s0, s1 = s1, _poly_trim(new_s)
    # r0 is now gcd = nonzero constant; scale s0 by its inverse.
    scale = pow(r0[0], p - 2, p)
    out = [c * scale % p for c in s0]
    out = _poly_mod(out, list(f.modulus), p)
    return FieldElement(f, tuple(out) + (0,) * (f.k - len(out)))


def power(a: FieldElement, e: int) -> FieldElement:
    """a**e for e >= 0 by square-and-multiply; power(0, 0) = 1 by convention."""
    if e < 0:
        raise ValidationError("negative exponent; use inv() first")
    result = a.field.one()
    base = a
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def enumerate_elements(F: FieldSpec) -> Iterator[FieldElement]:
    """All q elements, lexicographic on coefficient vectors (deterministic)."""
    for i in range(F.q):
        yield F.from_index(i)


class Embedding:
    """The deterministic ring embedding F -> E.

    The generator of F maps to the first root of F's modulus in E under
    enumeration order; prime subfields map scalar-to-scalar.  Supports
    forward application and partial inversion (None when an element of E
    is outside the image).
    """

    def __init__(self, F: FieldSpec, E: FieldSpec, gen_image: FieldElement | None):
        self.domain = F
        self.codomain = E
        self._gen_image = gen_image
        # Power table x^0..x^{k-1} in E for O(k) evaluation.
        if gen_image is not None:
            pows = [E.one()]
            for _ in range(F.k - 1):
                pows.append(pows[-1] * gen_image)
            self._pows = pows
        else:
            self._pows = [E.one()]
        self._image_index: dict[FieldElement, FieldElement] | None = None

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.field != self.domain:
            raise ValidationError("element not in the embedding's domain")
        E = self.codomain
        acc = E.zero()
        for c, xe in zip(a.coeffs, self._pows):
            if c:
                acc = acc + E.element(c) * xe
        return acc

    def preimage(self, b: FieldElement) -> FieldElement | None:
        """The element of F mapping to b, or None if b is not in the image."""
        if b.field != self.codomain:
            raise ValidationError("element not in the embedding's codomain")
        if self._image_index is None:
            self._image_index = {self(a): a for a in enumerate_elements(self.domain)}
        return self._image_index.get(b)


@lru_cache(maxsize=None)
def field_embedding(F: FieldSpec, E: FieldSpec) -> Embedding:
    """Deterministic embedding F_{p^j} -> F_{p^k} for j | k."""
    if F.p != E.p:
        raise ValidationError(f"incompatible characteristics {F.p} and {E.p}")
    if E.k % F.k != 0:
        raise ValidationError(
            f"no embedding: extension degree {F.k} does not divide {E.k}"
        )
    if F.k == 1:
        return Embedding(F, E, None)
    if F == E:
        return Embedding(F, E, F.generator())
    # First root of F's modulus in E, scanning enumeration order.
    modulus = F.modulus
    for cand in enumerate_elements(E):
        acc = E.zero()
        # Horner from the leading coefficient down.
        for c in reversed(modulus):
            acc = acc * cand + E.element(c)
        if acc.is_zero():
            return Embedding(F, E, cand)
    raise RuntimeError("modulus has no root in the extension")  # unreachable for j | k


def extension_field(F: FieldSpec, level: int) -> FieldSpec:
    """F_{q^level} for the base field F (level >= 1)."""
    if level < 1:
        raise ValidationError(f"extension level {level} must be >= 1")
    return make_field(F.p, F.k * level)


# ---------------------------------------------------------------------------
# Integer-coded arithmetic tables.  Bulk enumeration paths index elements by
# their enumeration order and do arithmetic through these tables; results are
# cross-checked against FieldElement arithmetic in the test suite.
# ---------------------------------------------------------------------------

MAX_TABLE_CARDINALITY = 4096


@lru_cache(maxsize=None)
def arithmetic_tables(F: FieldSpec):
    """(add, mul, neg, inv) numpy tables over element indices.

    inv[0] is 0 as a sentinel; callers must not rely on it.
    """
    import numpy as np

    q = F.q
    if q > MAX_TABLE_CARDINALITY:
        raise BudgetExceededError(
            f"arithmetic tables requested for q={q} > {MAX_TABLE_CARDINALITY}"
        )
    elems = list(enumerate_elements(F))
    dtype = np.int64
    add_t = np.zeros((q, q), dtype=dtype)
    mul_t = np.zeros((q, q), dtype=dtype)
    neg_t = np.zeros(q, dtype=dtype)
    inv_t = np.zeros(q, dtype=dtype)
    for i, a in enumerate(elems):
        neg_t[i] = F.index(-a)
        if i:
            inv_t[i] = F.index(inv(a))
        for j in range(i, q):
            b = elems[j]
            s = F.index(a + b)
            m = F.index(a * b)
            add_t[i, j] = add_t[j, i] = s
            mul_t[i, j] = mul_t[j, i] = m
    return add_t, mul_t, neg_t, inv_t


@lru_cache(maxsize=None)
def power_table(F: FieldSpec, max_exponent: int):
    """numpy table P[i, e] = index of (element i)**e, e in [0, max_exponent]."""
    import numpy as np

    _, mul_t, _, _ = arithmetic_tables(F)
    q = F.q
    tab = np.zeros((q, max_exponent + 1), dtype=np.int64)
    tab[:, 0] = F.index(F.one())
    for e in range(1, max_exponent + 1):
        tab[:, e] = mul_t[tab[:, e - 1], np.arange(q)]
    return tab


EmbeddingMap = Callable[[FieldElement], FieldElement]
