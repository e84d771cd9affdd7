"""Convolutional codes: generator validation, structural invariants, and
base-field lifting.

A code is stored through a canonical generator matrix, i.e. one that is
*basic* (the maximal minors are coprime) and *reduced* (the matrix of
leading row coefficients has full rank).  Row degrees of such a matrix are
the Forney indices; their sum is the degree and their maximum the memory.

Basic-ization of a non-basic input is deliberately not offered: callers
must start from a basic matrix, mirroring how the constructions in this
package always produce one.

One caveat on column degrees: the classification literature defines the
i-th column index as a supremum over *all* canonical generator matrices of
the code.  No finite procedure for that supremum is implemented here; the
reported `column_degrees` are those of the stored canonical matrix.
"""

from __future__ import annotations

from functools import reduce

from .errors import FieldMismatch, NotBasic, ParseError, RankDeficient
from .gf import FieldEmbedding, FiniteField, parse_field_spec
from .polymat import (
    FqPoly,
    PolyMatrix,
    ScalarMatrix,
    maximal_minors,
    nullspace,
    parse_poly,
    poly_gcd,
    scalar_rank,
)


def _minors_nonzero(G: PolyMatrix) -> list[FqPoly]:
    minors = [m for m in maximal_minors(G) if not m.is_zero()]
    if not minors:
        raise RankDeficient("matrix does not have full row rank over F(z)")
    return minors


def is_basic(G: PolyMatrix) -> bool:
    """True iff the gcd of all maximal minors is a nonzero constant."""
    minors = _minors_nonzero(G)
    g = reduce(poly_gcd, minors)
    return g.is_constant()


def leading_coefficient_matrix(G: PolyMatrix) -> ScalarMatrix:
    """Row i holds the coefficients at that row's top degree."""
    rows = []
    for r, d in zip(G.rows, G.row_degrees()):
        if d < 0:
            raise RankDeficient("zero row")
        rows.append([e.coeff(int(d)) for e in r])
    return ScalarMatrix(G.field, rows)


def is_reduced(G: PolyMatrix) -> bool:
    lead = leading_coefficient_matrix(G)
    return scalar_rank(lead) == G.shape[0]


def to_canonical(G: PolyMatrix) -> PolyMatrix:
    """Reduce a basic matrix by elementary row operations.

    Whenever the leading-coefficient matrix is rank deficient, a dependent
    row's top term is cancelled by z-shifted multiples of lower-degree rows,
    which strictly decreases the total row degree, so the loop terminates.
    """
    if not is_basic(G):
        raise NotBasic("matrix is not basic")
    rows = [list(r) for r in G.rows]
    f = G.field
    while True:
        M = PolyMatrix(f, rows)
        degs = M.row_degrees()
        if any(d < 0 for d in degs):
            raise RankDeficient("zero row appeared during reduction")
        lead = leading_coefficient_matrix(M)
        combos = nullspace(ScalarMatrix(f, list(zip(*lead.rows))))
        if not combos:
            return M
        combo = combos[0]
        support = [i for i, c in enumerate(combo) if c]
        target = max(support, key=lambda i: (degs[i], i))
        ct_inv = combo[target].inverse()
        for i in support:
            if i == target:
                continue
            shift = int(degs[target]) - int(degs[i])
            scale = combo[i] * ct_inv
            rows[target] = [
                rt + ri.scale(scale).shift(shift)
                for rt, ri in zip(rows[target], rows[i])
            ]


class ConvCode:
    """A validated convolutional code with cached structural invariants."""

    __slots__ = ("gen", "n", "k", "delta", "memory", "forney", "column_degrees")

    def __init__(self, gen: PolyMatrix, *, _validated: bool = False):
        if not _validated:
            raise ParseError("use new_code() to construct a ConvCode")
        k, n = gen.shape
        degs = [int(d) for d in gen.row_degrees()]
        self.gen = gen
        self.n = n
        self.k = k
        self.forney = tuple(sorted(degs))
        self.delta = sum(degs)
        self.memory = max(degs)
        self.column_degrees = tuple(gen.column_degrees())

    @property
    def field(self) -> FiniteField:
        return self.gen.field

    def decompose(self):
        return self.gen.decompose()

    def __repr__(self):
        return (
            f"ConvCode[n={self.n}, k={self.k}, delta={self.delta}, "
            f"m={self.memory}] over {self.field!r}"
        )


def new_code(G: PolyMatrix) -> ConvCode:
    """Validate and canonicalize a basic generator matrix."""
    k, n = G.shape
    if k > n:
        raise RankDeficient(f"k={k} exceeds n={n}")
    minors = _minors_nonzero(G)
    if not reduce(poly_gcd, minors).is_constant():
        raise NotBasic("maximal minors share a non-constant factor")
    canon = G if is_reduced(G) else to_canonical(G)
    code = ConvCode(canon, _validated=True)
    minor_deg = max(int(m.degree) for m in _minors_nonzero(canon))
    if minor_deg != code.delta:
        raise RankDeficient(
            f"degree mismatch: row degrees sum to {code.delta}, "
            f"max minor degree is {minor_deg}"
        )
    return code


def singleton_bound(c: ConvCode) -> int:
    """Generalized Singleton bound (n-k)(floor(delta/k)+1) + delta + 1."""
    return (c.n - c.k) * (c.delta // c.k + 1) + c.delta + 1


def singleton_bound_params(n: int, k: int, delta: int) -> int:
    return (n - k) * (delta // k + 1) + delta + 1


class ClassificationParams:
    """Numeric coordinates of the code's class in the classifying space."""

    __slots__ = ("kappa", "mu_g")

    def __init__(self, kappa: int, mu_g: int):
        self.kappa = kappa
        self.mu_g = mu_g

    def __eq__(self, other):
        return (
            isinstance(other, ClassificationParams)
            and (self.kappa, self.mu_g) == (other.kappa, other.mu_g)
        )

    def __repr__(self):
        return f"ClassificationParams(kappa={self.kappa}, mu_g={self.mu_g})"


def classification_params(c: ConvCode) -> ClassificationParams:
    kappa = c.k * (c.memory + 1) - c.delta
    mu_g = sum(d + 1 for d in c.column_degrees)
    return ClassificationParams(kappa, mu_g)


def lift_code(c: ConvCode, e: FieldEmbedding) -> ConvCode:
    """The same generator matrix read over the extension field.

    Being basic and reduced is preserved: minor gcds are stable under
    scalar extension and leading-coefficient ranks do not change.
    """
    if c.field != e.source:
        raise FieldMismatch("code is not defined over the embedding's source")
    tgt = e.target
    rows = [
        [FqPoly(tgt, [e(coef) for coef in entry.coeffs]) for entry in row]
        for row in c.gen.rows
    ]
    return new_code(PolyMatrix(tgt, rows))


# ---------------------------------------------------------------------------
# Code file format:
#   field: gf(8)
#   shape: 2 x 4
#   row: a + z, a^3 + z, a*z, 1 + a^3*z
#   row: ...
# ---------------------------------------------------------------------------


def code_to_text(c: ConvCode) -> str:
    lines = [f"field: {c.field.spec_string()}", f"shape: {c.k} x {c.n}"]
    for r in c.gen.rows:
        lines.append("row: " + ", ".join(str(e) for e in r))
    return "\n".join(lines) + "\n"


def generator_from_text(text: str) -> PolyMatrix:
    field = None
    shape = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno)
        key, _, value = line.partition(":")
        key = key.strip().lower()
        value = value.strip()
        try:
            if key == "field":
                field = parse_field_spec(value)
            elif key == "shape":
                parts = value.lower().split("x")
                shape = (int(parts[0]), int(parts[1]))
            elif key == "row":
                if field is None:
                    raise ParseError("row before field line", lineno)
                rows.append([parse_poly(field, p) for p in value.split(",")])
            else:
                raise ParseError(f"unknown key {key!r}", lineno)
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
        except (ValueError, IndexError):
            raise ParseError(f"bad value for {key!r}: {value!r}", lineno) from None
    if field is None:
        raise ParseError("missing field line")
    if shape is None:
        raise ParseError("missing shape line")
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise ParseError(
            f"matrix body does not match declared shape {shape[0]} x {shape[1]}"
        )
    return PolyMatrix(field, rows)


def code_from_text(text: str) -> ConvCode:
    return new_code(generator_from_text(text))
