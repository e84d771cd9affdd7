"""One-dimensional convolutional Goppa codes on the projective line.

A code is cut out by evaluating a degree-delta polynomial s(t) at n points
with affine coordinates a_i z + b_i (a_i != 0).  The coefficient matrices
of the resulting 1 x n generator are governed by the Hasse derivatives of
s: G_j has entries a_i^j s^(j)(b_i), where s^(j) is the j-th Hasse
derivative (binomials reduced mod p, the characteristic-safe stand-in for
scaled ordinary derivatives).

Family scans classify every coefficient vector lambda in projective space
against the *family's* Singleton bound n(delta+1): a member whose degree
degenerates (top coefficients vanishing) or whose generator picks up a
common factor still defines a code, just never an MDS one of the family's
type.  For k = 1 a common factor is divided out before validation, which
leaves the code (and hence its free distance) unchanged.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import reduce

from .code import ConvCode, new_code
from .distance import DEFAULT_CAP, DEFAULT_ORACLE_STAGE, meets_bound
from .errors import (
    CodesError,
    NotBasic,
    OutsideParameterSpace,
    ParseError,
    PreconditionViolated,
)
from .gf import FieldElement, FiniteField, parse_field_spec
from .polymat import FqPoly, PolyMatrix, parse_poly, poly_gcd


def binomial_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        n //= p
        k //= p
        if ki > ni:
            return 0
        num = den = 1
        for i in range(ki):
            num = num * (ni - i) % p
            den = den * (i + 1) % p
        result = result * num * pow(den, p - 2, p) % p
    return result


def hasse_eval(lam, j: int, t0: FieldElement) -> FieldElement:
    """j-th Hasse derivative of s(t) = sum lam_r t^r, evaluated at t0."""
    f = t0.field
    acc = f.zero
    power = f.one
    for r in range(j, len(lam)):
        b = binomial_mod_p(r, j, f.p)
        if b:
            acc = acc + f.integer(b) * lam[r] * power
        power = power * t0
    return acc


@dataclass(frozen=True)
class CgcSpec:
    """Evaluation data for one code: points (a_i, b_i) and coefficients."""

    field: FiniteField
    points: tuple[tuple[FieldElement, FieldElement], ...]
    lam: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise PreconditionViolated("evaluation points must be distinct")
        if any(not a for a, _ in self.points):
            raise PreconditionViolated("leading coordinates a_i must be nonzero")
        if not any(self.lam):
            raise PreconditionViolated("coefficient vector must be nonzero")
        if self.delta >= self.n:
            raise PreconditionViolated("need delta < n")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def delta(self) -> int:
        return len(self.lam) - 1

    @property
    def family_singleton(self) -> int:
        return self.n * (self.delta + 1)

    def equal_b(self) -> bool:
        return len({b.code for _, b in self.points}) == 1

    def with_lambda(self, lam) -> "CgcSpec":
        return CgcSpec(self.field, self.points, tuple(lam))

    def s_polynomial(self) -> FqPoly:
        return FqPoly(self.field, self.lam)


def in_parameter_space(spec: CgcSpec) -> bool:
    """Non-degeneracy conditions on lambda, one per pair of points with
    both coordinates differing.

    Pairs sharing a_i impose nothing (their point coincidence equation is
    unsolvable); pairs sharing b_i impose nothing either, so for an
    equal-b family every lambda is admissible.  Degenerations the pair
    conditions cannot see are still caught when the built generator is
    validated.
    """
    f = spec.field
    d = spec.delta
    pts = spec.points
    for i in range(len(pts)):
        ai, bi = pts[i]
        for j in range(i + 1, len(pts)):
            aj, bj = pts[j]
            if ai == aj or bi == bj:
                continue
            db = bj - bi
            da = ai - aj
            acc = f.zero
            for k, lk in enumerate(spec.lam):
                acc = acc + lk * db**k * da ** (d - k)
            if not acc:
                return False
    return True


def generator_row(spec: CgcSpec) -> PolyMatrix:
    """The raw 1 x n generator: entry i is s evaluated at a_i z + b_i."""
    f = spec.field
    entries = []
    for a, b in spec.points:
        coeffs = []
        apow = f.one
        for j in range(spec.delta + 1):
            coeffs.append(hasse_eval(spec.lam, j, b) * apow)
            apow = apow * a
        entries.append(FqPoly(f, coeffs))
    return PolyMatrix(f, [entries])


def build(spec: CgcSpec) -> ConvCode:
    """Validated code for an admissible spec; degenerate inputs are refused."""
    if not in_parameter_space(spec):
        raise OutsideParameterSpace("pair condition violated")
    return new_code(generator_row(spec))


def family_member_code(spec: CgcSpec) -> tuple[ConvCode, bool]:
    """Code of a family member, tolerant of degenerations.

    A common factor of the single generator row is divided out first (the
    row module changes only by a unit shift in z, so the code's weights do
    not), letting every nonzero lambda of an equal-b family be classified.
    Returns (code, stripped_flag).
    """
    row = list(generator_row(spec).rows[0])
    nonzero = [e for e in row if not e.is_zero()]
    if not nonzero:
        raise NotBasic("zero generator row")
    g = reduce(poly_gcd, nonzero)
    stripped = False
    if g.degree > 0:
        row = [e // g if not e.is_zero() else e for e in row]
        stripped = True
    return new_code(PolyMatrix(spec.field, [row])), stripped


def mds_criterion_equal_b(spec: CgcSpec) -> bool:
    """For all b_i equal: MDS of the family's type iff every Hasse value
    s^(j)(b), 0 <= j <= delta, is nonzero."""
    if not spec.equal_b():
        raise PreconditionViolated("criterion requires all b_i equal")
    b = spec.points[0][1]
    return all(hasse_eval(spec.lam, j, b) for j in range(spec.delta + 1))


def hasse_values(spec: CgcSpec) -> tuple[FieldElement, ...]:
    b = spec.points[0][1]
    return tuple(hasse_eval(spec.lam, j, b) for j in range(spec.delta + 1))


# ---------------------------------------------------------------------------
# Parameter-space enumeration and family scans
# ---------------------------------------------------------------------------


def projective_points(field: FiniteField, dim: int, *, top_nonzero: bool = False):
    """Representatives of P^dim: first nonzero coordinate normalised to 1,
    remaining coordinates in enumeration order (lexicographic).

    With top_nonzero, only the affine chart with last coordinate != 0 is
    produced (normalised the same way).
    """
    els = list(field.elements())
    out = []

    def rec(prefix, started):
        i = len(prefix)
        if i == dim + 1:
            if started:
                out.append(tuple(prefix))
            return
        if not started:
            rec(prefix + [field.zero], False)
            rec(prefix + [field.one], True)
        else:
            for e in els:
                rec(prefix + [e], True)

    rec([], False)
    if top_nonzero:
        out = [lam for lam in out if lam[-1]]
    return out


@dataclass
class ScanReport:
    """Outcome of sweeping a parametrized family over a finite domain."""

    description: str
    bound: int
    total: int
    mds_set: set
    non_mds_set: set
    excluded: dict
    condition_matched: tuple[bool, ...] | None = None
    mismatches: list = dc_field(default_factory=list)

    @property
    def matched_equations(self) -> bool | None:
        if self.condition_matched is None:
            return None
        return not self.mismatches

    def counts(self):
        return len(self.mds_set), len(self.non_mds_set), len(self.excluded)


def scan_family(
    constructor,
    domain,
    *,
    bound: int,
    predicted=None,
    description: str = "",
    workers: int = 1,
    max_stage: int = DEFAULT_ORACLE_STAGE,
    cap: int = DEFAULT_CAP,
) -> ScanReport:
    """Classify every parameter tuple as MDS / non-MDS / excluded.

    `constructor(params)` must return a ConvCode (raising a CodesError to
    mark the tuple excluded); `bound` is the family-level Singleton bound
    the free distance is measured against.  `predicted`, when given, is a
    list of callables params -> FieldElement whose common zero locus should
    be exactly the non-MDS set; mismatching tuples are reported.
    """
    domain = list(domain)

    def classify(params):
        try:
            code = constructor(params)
        except CodesError as exc:
            return params, "excluded", f"{type(exc).__name__}: {exc}"
        ok, value, method = meets_bound(
            code, bound, max_stage=max_stage, cap=cap
        )
        if method == "unresolved":
            return params, "excluded", f"unresolved after {max_stage} stages"
        return params, ("mds" if ok else "non_mds"), value

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(classify, domain))
    else:
        results = [classify(p) for p in domain]

    mds, non_mds, excluded = set(), set(), {}
    for params, status, info in results:
        if status == "mds":
            mds.add(params)
        elif status == "non_mds":
            non_mds.add(params)
        else:
            excluded[params] = info

    condition_matched = None
    mismatches = []
    if predicted is not None:
        per_condition = []
        for cond in predicted:
            zeros = {p for p in domain if p not in excluded and not cond(p)}
            per_condition.append(zeros <= non_mds)
        condition_matched = tuple(per_condition)
        for p in domain:
            if p in excluded:
                continue
            predicted_non_mds = any(not cond(p) for cond in predicted)
            if predicted_non_mds != (p in non_mds):
                mismatches.append(p)

    return ScanReport(
        description=description,
        bound=bound,
        total=len(domain),
        mds_set=mds,
        non_mds_set=non_mds,
        excluded=excluded,
        condition_matched=condition_matched,
        mismatches=mismatches,
    )


@dataclass(frozen=True)
class CgcFamily:
    """All codes sharing one point configuration, lambda left free."""

    field: FiniteField
    points: tuple[tuple[FieldElement, FieldElement], ...]
    delta: int

    @classmethod
    def from_spec(cls, spec: CgcSpec) -> "CgcFamily":
        return cls(spec.field, spec.points, spec.delta)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def bound(self) -> int:
        return self.n * (self.delta + 1)

    def member(self, lam) -> CgcSpec:
        return CgcSpec(self.field, self.points, tuple(lam))

    def member_code(self, lam) -> ConvCode:
        spec = self.member(lam)
        if not in_parameter_space(spec):
            raise OutsideParameterSpace("pair condition violated")
        return family_member_code(spec)[0]

    def domain(self, *, top_nonzero: bool = False):
        return projective_points(self.field, self.delta, top_nonzero=top_nonzero)

    def scan(
        self,
        *,
        domain=None,
        top_nonzero: bool = False,
        predicted=None,
        workers: int = 1,
        max_stage: int = DEFAULT_ORACLE_STAGE,
        cap: int = DEFAULT_CAP,
    ) -> ScanReport:
        if domain is None:
            domain = self.domain(top_nonzero=top_nonzero)
        return scan_family(
            self.member_code,
            domain,
            bound=self.bound,
            predicted=predicted,
            description=f"CGC family [{self.n},1,{self.delta}] over {self.field!r}",
            workers=workers,
            max_stage=max_stage,
            cap=cap,
        )


# ---------------------------------------------------------------------------
# Spec file format:
#   field: gf(4)
#   points: (1, a), (a, a), (a^2, a)
#   lambda: 1, a, 1
#   scan: all            (optional; or an explicit `;`-separated tuple list)
# ---------------------------------------------------------------------------


def cgc_spec_to_text(spec: CgcSpec, scan: str | None = None) -> str:
    pts = ", ".join(f"({a}, {b})" for a, b in spec.points)
    lam = ", ".join(str(x) for x in spec.lam)
    lines = [
        f"field: {spec.field.spec_string()}",
        f"points: {pts}",
        f"lambda: {lam}",
    ]
    if scan:
        lines.append(f"scan: {scan}")
    return "\n".join(lines) + "\n"


def _parse_points(field, text, lineno):
    pts = []
    depth = 0
    token = ""
    for ch in text:
        if ch == "(":
            depth += 1
            token = ""
        elif ch == ")":
            depth -= 1
            parts = token.split(",")
            if depth != 0 or len(parts) != 2:
                raise ParseError(f"bad point list {text!r}", lineno)
            pts.append((field.parse(parts[0]), field.parse(parts[1])))
        elif depth == 1:
            token += ch
        elif ch in ", \t":
            continue
        else:
            raise ParseError(f"bad point list {text!r}", lineno)
    if depth != 0 or not pts:
        raise ParseError(f"bad point list {text!r}", lineno)
    return tuple(pts)


def cgc_spec_from_text(text: str) -> tuple[CgcSpec, str | None]:
    """Parse a spec file; returns (spec, scan_directive)."""
    field = None
    points = None
    lam = None
    scan = None
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
            elif key == "points":
                if field is None:
                    raise ParseError("points before field line", lineno)
                points = _parse_points(field, value, lineno)
            elif key == "lambda":
                if field is None:
                    raise ParseError("lambda before field line", lineno)
                lam = tuple(field.parse(v) for v in value.split(","))
            elif key == "scan":
                scan = value
            else:
                raise ParseError(f"unknown key {key!r}", lineno)
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
    if field is None or points is None or lam is None:
        raise ParseError("spec needs field, points and lambda lines")
    try:
        spec = CgcSpec(field, points, lam)
    except PreconditionViolated as exc:
        raise ParseError(str(exc)) from None
    return spec, scan


def parse_scan_domain(spec: CgcSpec, directive: str | None):
    """Interpret a scan directive: None/'all' -> full projective space,
    'top-nonzero' -> chart with the top coefficient nonzero, otherwise a
    `;`-separated list of lambda tuples."""
    fam = CgcFamily.from_spec(spec)
    if directive is None or directive.strip().lower() in ("", "all"):
        return fam.domain()
    d = directive.strip().lower()
    if d in ("top-nonzero", "top_nonzero"):
        return fam.domain(top_nonzero=True)
    out = []
    for chunk in directive.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        lam = tuple(spec.field.parse(v) for v in chunk.split(","))
        if len(lam) != spec.delta + 1:
            raise ParseError(f"lambda tuple {chunk!r} has wrong length")
        out.append(lam)
    if not out:
        raise ParseError("empty scan list")
    return out


# ---------------------------------------------------------------------------
# Predicted-condition expressions: polynomials in l0..l<delta> over the field
# ---------------------------------------------------------------------------


def parse_condition(field: FiniteField, nvars: int, text: str):
    """Compile `l0 + a*l1 + a^2*l2`-style text into a callable on lambda
    tuples.  Terms are `*`-products of field constants, variables `l<i>`,
    and powers thereof, joined by `+`."""
    terms = []
    for raw in text.split("+"):
        term = raw.strip()
        if not term:
            raise ParseError(f"empty term in condition {text!r}")
        const = field.one
        var_pows = []
        for part in term.split("*"):
            part = part.strip()
            base, _, exp = part.partition("^")
            base = base.strip()
            if base.startswith("l") and base[1:].isdigit():
                idx = int(base[1:])
                if idx >= nvars:
                    raise ParseError(f"variable {base!r} out of range")
                var_pows.append((idx, int(exp) if exp else 1))
            else:
                const = const * field.parse(part)
        terms.append((const, tuple(var_pows)))

    def evaluate(lam):
        acc = field.zero
        for const, vps in terms:
            val = const
            for idx, e in vps:
                val = val * lam[idx] ** e
            acc = acc + val
        return acc

    evaluate.text = text.strip()
    return evaluate
