"""Polynomials in z over a finite field, plus the vector/matrix layer the
generator-matrix machinery is built on.

The degree of the zero polynomial is the sentinel -inf (a float), never an
integer: any attempt to use it in index arithmetic fails loudly instead of
silently producing an off-by-one bound.
"""

from __future__ import annotations

import itertools
import math

from .errors import BothZero, DivisionByZero, ParseError, ShapeError
from .gf import FieldElement, FiniteField

NEG_INF = -math.inf


class FqPoly:
    """Immutable polynomial over one finite field; coeffs ascending in z."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs=()):
        cs = tuple(coeffs)
        n = len(cs)
        while n and not cs[n - 1]:
            n -= 1
        self.field = field
        self.coeffs = cs[:n]

    @classmethod
    def zero(cls, field) -> "FqPoly":
        return cls(field)

    @classmethod
    def const(cls, c: FieldElement) -> "FqPoly":
        return cls(c.field, (c,))

    @classmethod
    def monomial(cls, c: FieldElement, deg: int) -> "FqPoly":
        return cls(c.field, (c.field.zero,) * deg + (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, d: int) -> FieldElement:
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return self.field.zero

    @property
    def lead(self) -> FieldElement:
        if not self.coeffs:
            raise DivisionByZero("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "FqPoly") -> "FqPoly":
        z = self.field.zero
        cs = [
            a + b
            for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=z)
        ]
        return FqPoly(self.field, cs)

    def __sub__(self, other: "FqPoly") -> "FqPoly":
        z = self.field.zero
        cs = [
            a - b
            for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=z)
        ]
        return FqPoly(self.field, cs)

    def __neg__(self) -> "FqPoly":
        return FqPoly(self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "FqPoly":
        if isinstance(other, FieldElement):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return FqPoly(self.field)
        z = self.field.zero
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return FqPoly(self.field, out)

    def scale(self, c: FieldElement) -> "FqPoly":
        return FqPoly(self.field, tuple(a * c for a in self.coeffs))

    def shift(self, d: int) -> "FqPoly":
        """Multiply by z^d."""
        if self.is_zero():
            return self
        return FqPoly(self.field, (self.field.zero,) * d + self.coeffs)

    def __divmod__(self, other: "FqPoly"):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dd = len(other.coeffs) - 1
        lead_inv = other.lead.inverse()
        quo = [f.zero] * max(0, len(rem) - dd)
        while len(rem) - 1 >= dd and rem:
            while rem and not rem[-1]:
                rem.pop()
            if len(rem) - 1 < dd:
                break
            c = rem[-1] * lead_inv
            shift = len(rem) - 1 - dd
            quo[shift] = c
            for j, b in enumerate(other.coeffs):
                rem[shift + j] = rem[shift + j] - c * b
        return FqPoly(f, quo), FqPoly(f, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, z0: FieldElement) -> FieldElement:
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * z0 + c
        return acc

    def monic(self) -> "FqPoly":
        if self.is_zero():
            return self
        return self.scale(self.lead.inverse())

    def __eq__(self, other):
        return (
            isinstance(other, FqPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, tuple(c.code for c in self.coeffs)))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"FqPoly({self})"


def weight(vector) -> int:
    """Total number of nonzero coefficients across the components."""
    return sum(1 for poly in vector for c in poly.coeffs if c)


def poly_gcd(a: FqPoly, b: FqPoly) -> FqPoly:
    """Monic gcd by the Euclidean algorithm."""
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# ---------------------------------------------------------------------------
# Scalar matrices
# ---------------------------------------------------------------------------


class ScalarMatrix:
    """Dense matrix of field elements; immutable."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FiniteField, rows):
        rws = tuple(tuple(r) for r in rows)
        if rws and any(len(r) != len(rws[0]) for r in rws):
            raise ShapeError("ragged rows")
        self.field = field
        self.rows = rws

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @classmethod
    def from_codes(cls, field, code_rows):
        return cls(field, [[field.element(c) for c in r] for r in code_rows])

    @classmethod
    def zeros(cls, field, r, c):
        return cls(field, [[field.zero] * c for _ in range(r)])

    @classmethod
    def identity(cls, field, n):
        return cls(
            field,
            [[field.one if i == j else field.zero for j in range(n)] for i in range(n)],
        )

    @classmethod
    def vstack(cls, mats):
        field = mats[0].field
        rows = [r for m in mats for r in m.rows]
        return cls(field, rows)

    def hstack(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.shape[0] != other.shape[0]:
            raise ShapeError("row counts differ")
        return ScalarMatrix(
            self.field, [a + b for a, b in zip(self.rows, other.rows)]
        )

    def int_rows(self) -> list[list[int]]:
        return [[c.code for c in r] for r in self.rows]

    def row_weight(self, i: int) -> int:
        return sum(1 for c in self.rows[i] if c)

    def __eq__(self, other):
        return (
            isinstance(other, ScalarMatrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __str__(self):
        return "\n".join("  ".join(str(c) for c in r) for r in self.rows)


def _eliminate(int_rows: list[list[int]], field: FiniteField):
    """Row echelon over the field on integer codes.

    Returns (pivot_cols, echelon_rows, pivot_row_sources); echelon rows are
    the surviving nonzero rows, pivot_row_sources the original indices that
    contributed each pivot.
    """
    rows = [list(r) for r in int_rows]
    src = list(range(len(rows)))
    ncols = len(rows[0]) if rows else 0
    piv_cols, ech, piv_src = [], [], []
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        src[r], src[sel] = src[sel], src[r]
        inv = field.inv_code(rows[r][col])
        mul, sub = field.mul_codes, field.sub_codes
        if inv != 1:
            rows[r] = [mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                c = rows[i][col]
                ri, rr = rows[i], rows[r]
                rows[i] = [sub(x, mul(c, y)) for x, y in zip(ri, rr)]
        piv_cols.append(col)
        ech.append(rows[r])
        piv_src.append(src[r])
        r += 1
        if r == len(rows):
            break
    return piv_cols, ech, piv_src


def scalar_rank(S: ScalarMatrix) -> int:
    if not S.rows:
        return 0
    piv, _, _ = _eliminate(S.int_rows(), S.field)
    return len(piv)


def nullspace(S: ScalarMatrix) -> list[list[FieldElement]]:
    """Basis of the right kernel of S (viewing rows as vectors: returns
    combinations c with sum_i c_i row_i = 0 when applied to S^T)."""
    f = S.field
    piv_cols, ech, _ = _eliminate(S.int_rows(), f)
    r, n = len(ech), S.shape[1]
    free_cols = [c for c in range(n) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        vec = [0] * n
        vec[fc] = 1
        for i, pc in enumerate(piv_cols):
            vec[pc] = f.neg_code(ech[i][fc])
        basis.append([f.element(c) for c in vec])
    return basis


# ---------------------------------------------------------------------------
# Polynomial matrices
# ---------------------------------------------------------------------------


class PolyMatrix:
    """k x n matrix of FqPoly over a common field; the generator carrier."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FiniteField, rows):
        rws = tuple(tuple(e) for e in rows)
        if rws and any(len(r) != len(rws[0]) for r in rws):
            raise ShapeError("ragged rows")
        for r in rws:
            for e in r:
                if e.field != field:
                    raise ShapeError("mixed fields in matrix")
        self.field = field
        self.rows = rws

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def max_degree(self) -> int:
        d = max((e.degree for r in self.rows for e in r), default=NEG_INF)
        return 0 if d == NEG_INF else int(d)

    def row_degrees(self) -> list:
        return [max((e.degree for e in r), default=NEG_INF) for r in self.rows]

    def column_degrees(self) -> list[int]:
        k, n = self.shape
        out = []
        for j in range(n):
            d = max((self.rows[i][j].degree for i in range(k)), default=NEG_INF)
            out.append(0 if d == NEG_INF else int(d))
        return out

    def eval_at(self, z0: FieldElement) -> ScalarMatrix:
        return ScalarMatrix(self.field, [[e(z0) for e in r] for r in self.rows])

    def decompose(self) -> list[ScalarMatrix]:
        """Coefficient matrices [G_0, ..., G_d], d = max entry degree."""
        d = self.max_degree()
        return [
            ScalarMatrix(self.field, [[e.coeff(i) for e in r] for r in self.rows])
            for i in range(d + 1)
        ]

    def submatrix(self, row_idx, col_idx) -> "PolyMatrix":
        return PolyMatrix(
            self.field, [[self.rows[i][j] for j in col_idx] for i in row_idx]
        )

    def scale_row(self, i: int, c: FieldElement) -> "PolyMatrix":
        rows = [list(r) for r in self.rows]
        rows[i] = [e.scale(c) for e in rows[i]]
        return PolyMatrix(self.field, rows)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.field == other.field
            and self.rows == other.rows
        )

    def __str__(self):
        return "\n".join("  |  ".join(str(e) for e in r) for r in self.rows)


def det(M: PolyMatrix) -> FqPoly:
    """Determinant of a square polynomial matrix.

    Fraction-free Bareiss elimination up to 6x6 (exact polynomial division
    at every step), cofactor expansion beyond.
    """
    k, n = M.shape
    if k != n:
        raise ShapeError("determinant needs a square matrix")
    f = M.field
    if k == 0:
        return FqPoly.const(f.one)
    if k == 1:
        return M.rows[0][0]
    if k <= 6:
        return _det_bareiss(M)
    return _det_cofactor(M)


def _det_bareiss(M: PolyMatrix) -> FqPoly:
    f = M.field
    a = [list(r) for r in M.rows]
    n = len(a)
    prev = FqPoly.const(f.one)
    sign = f.one
    for p in range(n - 1):
        if a[p][p].is_zero():
            swap = next((i for i in range(p + 1, n) if not a[i][p].is_zero()), None)
            if swap is None:
                return FqPoly.zero(f)
            a[p], a[swap] = a[swap], a[p]
            sign = -sign
        for i in range(p + 1, n):
            for j in range(p + 1, n):
                num = a[i][j] * a[p][p] - a[i][p] * a[p][j]
                q, r = divmod(num, prev)
                assert r.is_zero(), "Bareiss division must be exact"
                a[i][j] = q
        prev = a[p][p]
    return a[n - 1][n - 1].scale(sign)


def _det_cofactor(M: PolyMatrix) -> FqPoly:
    f = M.field
    k = M.shape[0]
    if k == 1:
        return M.rows[0][0]
    acc = FqPoly.zero(f)
    rest = list(range(1, k))
    cols = list(range(k))
    for j in range(k):
        e = M.rows[0][j]
        if e.is_zero():
            continue
        minor = _det_cofactor(M.submatrix(rest, [c for c in cols if c != j]))
        term = e * minor
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def maximal_minors(M: PolyMatrix) -> list[FqPoly]:
    """All k x k minors (k = row count), column sets in lexicographic order."""
    k, n = M.shape
    if k > n:
        raise ShapeError("need rows <= cols")
    rows = list(range(k))
    return [det(M.submatrix(rows, cols)) for cols in itertools.combinations(range(n), k)]


# ---------------------------------------------------------------------------
# Text syntax: monomials `c*z^d` joined by `+`, e.g. `a^5 + a^2*z + z^2`.
# ---------------------------------------------------------------------------


def parse_poly(field: FiniteField, text: str) -> FqPoly:
    t = text.strip()
    if not t:
        raise ParseError("empty polynomial")
    terms = {}
    for raw in t.split("+"):
        term = raw.strip()
        if not term:
            raise ParseError(f"empty term in {text!r}")
        coeff = field.one
        deg = 0
        for part in term.split("*"):
            part = part.strip()
            if part.startswith("z"):
                rest = part[1:]
                if rest == "":
                    deg += 1
                elif rest.startswith("^"):
                    try:
                        deg += int(rest[1:])
                    except ValueError:
                        raise ParseError(f"bad monomial {part!r}") from None
                else:
                    raise ParseError(f"bad monomial {part!r}")
            else:
                coeff = coeff * field.parse(part)
        terms[deg] = terms.get(deg, field.zero) + coeff
    size = max(terms) + 1
    cs = [field.zero] * size
    for d, c in terms.items():
        cs[d] = c
    return FqPoly(field, cs)


def format_poly(poly: FqPoly) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for d, c in enumerate(poly.coeffs):
        if not c:
            continue
        if d == 0:
            parts.append(str(c))
        else:
            zs = "z" if d == 1 else f"z^{d}"
            parts.append(zs if c == poly.field.one else f"{c}*{zs}")
    return " + ".join(parts)
