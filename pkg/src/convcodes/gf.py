"""Exact arithmetic in small finite fields GF(p^m).

An element is stored as an integer code in [0, q) whose base-p digits are
the coefficients of its polynomial-basis representation (least significant
digit = constant coefficient).  Every field carries log/antilog tables for
a fixed primitive element, so multiplication, division and inversion are
O(1) table lookups.  Fields with q > 2^16 are rejected: the tables must
stay desk-sized.
"""

from __future__ import annotations

import itertools
from functools import reduce

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NotPrime,
    ParseError,
    Reducible,
    TooLarge,
)

MAX_ORDER = 1 << 16

# Default moduli, ascending coefficients (c_0, ..., c_m).  The p = 2 rows
# come from the usual table of primitive trinomials/pentanomials; all other
# characteristics fall back to a deterministic search.  Every entry is
# re-verified (irreducibility, generator order) at construction time.
_DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),                      # x^2+x+1
    (2, 3): (1, 1, 0, 1),                   # x^3+x+1
    (2, 4): (1, 1, 0, 0, 1),                # x^4+x+1
    (2, 5): (1, 0, 1, 0, 0, 1),             # x^5+x^2+1
    (2, 6): (1, 1, 0, 0, 0, 0, 1),          # x^6+x+1
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),       # x^7+x+1
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),    # x^8+x^4+x^3+x^2+1
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),             # x^9+x^4+1
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),         # x^10+x^3+1
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),      # x^11+x^2+1
    (2, 12): (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),   # x^12+x^6+x^4+x+1
    (3, 2): (2, 1, 1),                      # x^2+x+2
    (3, 3): (1, 2, 0, 1),                   # x^3+2x+1
    (5, 2): (2, 1, 1),                      # x^2+x+2
    (5, 3): (2, 3, 0, 1),                   # x^3+3x+2
    (7, 2): (3, 1, 1),                      # x^2+x+3
}

_FIELD_CACHE: dict[tuple[int, int, tuple[int, ...]], "FiniteField"] = {}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Digit-tuple polynomial arithmetic over GF(p), used only while bootstrapping
# a field's tables and for irreducibility trial division.
# ---------------------------------------------------------------------------

def _trim(c: tuple[int, ...]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _polymod(a: tuple[int, ...], mod: tuple[int, ...], p: int) -> tuple[int, ...]:
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j, mj in enumerate(mod):
                a[i - dm + j] = (a[i - dm + j] - c * mj) % p
    return _trim(tuple(a[:dm])) if dm else ()


def _polymulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b))
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _polymod(tuple(out), mod, p)


def _poly_divides(d: tuple[int, ...], a: tuple[int, ...], p: int) -> bool:
    """Whether monic d divides a over GF(p)."""
    r = list(a)
    dd = len(d) - 1
    while len(_trim(tuple(r))) - 1 >= dd:
        r = list(_trim(tuple(r)))
        c = r[-1]
        shift = len(r) - 1 - dd
        for j, dj in enumerate(d):
            r[shift + j] = (r[shift + j] - c * dj) % p
    return not _trim(tuple(r))


def _is_irreducible(mod: tuple[int, ...], p: int) -> bool:
    """Trial division against every monic polynomial of degree <= m/2."""
    m = len(mod) - 1
    if m <= 0:
        return False
    for deg in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            divisor = tuple(tail) + (1,)
            if _poly_divides(divisor, mod, p):
                return False
    return True


def _code_to_digits(code: int, p: int, m: int) -> tuple[int, ...]:
    out = []
    for _ in range(m):
        out.append(code % p)
        code //= p
    return tuple(out)


def _digits_to_code(digits, p: int) -> int:
    code = 0
    for d in reversed(list(digits)):
        code = code * p + d
    return code


def _search_modulus(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m in code order, preferring one
    whose root x is itself primitive."""
    fallback = None
    for tail_code in range(p**m):
        mod = _code_to_digits(tail_code, p, m) + (1,)
        if not _is_irreducible(mod, p):
            continue
        if _x_is_primitive(mod, p, m):
            return mod
        if fallback is None:
            fallback = mod
    if fallback is None:
        raise Reducible(f"no irreducible polynomial of degree {m} over GF({p})")
    return fallback


def _element_order(code_digits, mod, p, q):
    acc = code_digits
    order = 1
    one = (1,)
    while _trim(acc) != one:
        acc = _polymulmod(acc, code_digits, mod, p)
        order += 1
        if order > q:
            raise Reducible("element order exceeds group order; modulus reducible")
    return order


def _x_is_primitive(mod, p, m) -> bool:
    q = p**m
    if m == 1:
        return False
    return _element_order((0, 1), mod, p, q) == q - 1


class FiniteField:
    """GF(p^m) with table-based arithmetic on integer codes.

    Use :func:`field_new` (or :meth:`element` on an instance) rather than
    juggling raw codes outside performance-critical loops.
    """

    def __init__(self, p: int, m: int, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if m < 1:
            raise ParseError(f"extension degree must be >= 1, got {m}")
        q = p**m
        if q > MAX_ORDER:
            raise TooLarge(f"GF({p}^{m}) has order {q} > 2^16")

        if modulus is None:
            if m == 1:
                modulus = (0, 1)
            else:
                modulus = _DEFAULT_MODULI.get((p, m)) or _search_modulus(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[m] != 1:
            raise ParseError(f"modulus must be monic of degree {m}")
        if m > 1 and not _is_irreducible(modulus, p):
            raise Reducible(f"modulus {modulus} is reducible over GF({p})")

        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus

        self._neg = tuple(self._neg_code(c) for c in range(q))
        self._build_log_tables()
        self._np_add = None
        self._np_mul_cache: dict[int, object] = {}

    # -- bootstrap helpers ---------------------------------------------------

    def _neg_code(self, code: int) -> int:
        p, m = self.p, self.m
        return _digits_to_code(((-d) % p for d in _code_to_digits(code, p, m)), p)

    def _mul_raw(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da = _code_to_digits(a, p, m)
        db = _code_to_digits(b, p, m)
        return _digits_to_code(
            _polymulmod(da, db, self.modulus, p) + (0,) * m, p
        )

    def _build_log_tables(self):
        q = self.q
        # Smallest code of full multiplicative order q-1 becomes the
        # generator; the order of every candidate is verified directly.
        gen = None
        for cand in range(2 if self.m > 1 or self.p > 2 else 1, q):
            x, order = cand, 1
            while x != 1:
                x = self._mul_raw(x, cand)
                order += 1
                if order >= q:
                    raise Reducible("multiplicative group broken; modulus reducible")
            if order == q - 1:
                gen = cand
                break
        if gen is None:
            raise Reducible("no primitive element found; modulus reducible")
        self.generator_code = gen
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            exp[i + q - 1] = x
            log[x] = i
            x = self._mul_raw(x, gen)
        if x != 1:
            raise Reducible("generator order check failed")
        self._exp = exp
        self._log = log
        if self.p == 2:
            self._add_rows = None
        else:
            self._add_rows = [
                [self.add_codes_slow(a, b) for b in range(q)] for a in range(q)
            ] if q <= 1024 else None

    # -- raw code arithmetic ---------------------------------------------------

    def add_codes_slow(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da = _code_to_digits(a, p, m)
        db = _code_to_digits(b, p, m)
        return _digits_to_code(((x + y) % p for x, y in zip(da, db)), p)

    def add_codes(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_rows is not None:
            return self._add_rows[a][b]
        return self.add_codes_slow(a, b)

    def sub_codes(self, a: int, b: int) -> int:
        return self.add_codes(a, self._neg[b])

    def neg_code(self, a: int) -> int:
        return self._neg[a]

    def mul_codes(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._exp[self.q - 1 - self._log[a]]

    def div_codes(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero("division by zero")
        if a == 0:
            return 0
        return self._exp[self._log[a] - self._log[b] + self.q - 1]

    def pow_code(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero("inverse of zero")
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    # -- element interface -----------------------------------------------------

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.q:
            raise ParseError(f"code {code} out of range for order-{self.q} field")
        return FieldElement(self, code)

    def from_digits(self, digits) -> "FieldElement":
        digits = [int(d) % self.p for d in digits]
        if len(digits) > self.m:
            raise ParseError("too many coefficients for this field")
        digits += [0] * (self.m - len(digits))
        return FieldElement(self, _digits_to_code(digits, self.p))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def generator(self) -> "FieldElement":
        return FieldElement(self, self.generator_code)

    def elements(self):
        """All q elements: zero first, then ascending generator powers."""
        yield self.zero
        for i in range(self.q - 1):
            yield FieldElement(self, self._exp[i])

    def nonzero_elements(self):
        for i in range(self.q - 1):
            yield FieldElement(self, self._exp[i])

    def integer(self, n: int) -> "FieldElement":
        """Image of the rational integer n (i.e. n * 1)."""
        return FieldElement(self, n % self.p)

    # -- text syntax: 0, 1, a^k ------------------------------------------------

    def parse(self, text: str) -> "FieldElement":
        t = text.strip()
        if t == "0":
            return self.zero
        if t == "1":
            return self.one
        if t == "a":
            return self.generator
        if t.startswith("a^"):
            try:
                k = int(t[2:])
            except ValueError:
                raise ParseError(f"bad element {text!r}") from None
            return FieldElement(self, self._exp[k % (self.q - 1)])
        if t.isdigit() and self.m == 1:
            return self.integer(int(t))
        raise ParseError(f"bad element {text!r}")

    def format(self, code: int) -> str:
        if code == 0:
            return "0"
        k = self._log[code]
        if k == 0:
            return "1"
        if k == 1:
            return "a"
        return f"a^{k}"

    # -- numpy mirrors for the vectorised kernels --------------------------------

    def np_add_table(self):
        """(q, q) uint16 addition table; only sensible for small odd p."""
        if self.p == 2:
            return None
        if self._np_add is None:
            import numpy as np

            if self.q > 4096:
                raise TooLarge(f"addition table for q={self.q} not supported")
            if self._add_rows is not None:
                self._np_add = np.array(self._add_rows, dtype=np.uint16)
            else:
                tab = np.empty((self.q, self.q), dtype=np.uint16)
                for a in range(self.q):
                    for b in range(self.q):
                        tab[a, b] = self.add_codes_slow(a, b)
                self._np_add = tab
        return self._np_add

    def spec_string(self) -> str:
        coeffs = ",".join(str(c) for c in reversed(self.modulus))
        return f"gf({self.p}^{self.m}; modulus={coeffs})"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


def field_new(p: int, m: int, modulus=None) -> FiniteField:
    """Construct (or fetch from cache) GF(p^m) with the given modulus.

    The modulus is a coefficient sequence, ascending degree; omit it to use
    the shipped default for (p, m).
    """
    key_mod = None if modulus is None else tuple(int(c) for c in modulus)
    probe = (p, m, key_mod)
    if probe in _FIELD_CACHE:
        return _FIELD_CACHE[probe]
    f = FiniteField(p, m, key_mod)
    _FIELD_CACHE[probe] = f
    _FIELD_CACHE[(p, m, f.modulus)] = f
    return f


class FieldElement:
    """A value of one specific FiniteField; immutable."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = code

    def _check(self, other: "FieldElement"):
        if self.field is not other.field and self.field != other.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add_codes(self.code, other.code))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub_codes(self.code, other.code))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul_codes(self.code, other.code))

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.div_codes(self.code, other.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_code(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_code(self.code, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv_code(self.code))

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.code == other.code
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.code, self.field.q))

    @property
    def digits(self) -> tuple[int, ...]:
        return _code_to_digits(self.code, self.field.p, self.field.m)

    def __str__(self):
        return self.field.format(self.code)

    def __repr__(self):
        return f"<{self} in {self.field!r}>"


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch add/sub/mul/div by name; exact field arithmetic."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ParseError(f"unknown operation {op!r}")


def minimal_polynomial(x: FieldElement) -> tuple[int, ...]:
    """Minimal polynomial of x over the prime field, ascending coefficients
    reduced to integers mod p."""
    f = x.field
    conjugates = []
    y = x
    while y not in conjugates:
        conjugates.append(y)
        y = y ** f.p
    poly = [f.one]
    for c in conjugates:
        nxt = [f.zero] * (len(poly) + 1)
        for i, coeff in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + coeff
            nxt[i] = nxt[i] - coeff * c
        poly = nxt
    out = []
    for coeff in poly:
        if coeff.code >= f.p:
            raise Reducible("minimal polynomial has a non-prime-field coefficient")
        out.append(coeff.code)
    return tuple(out)


class FieldEmbedding:
    """The homomorphism GF(p^m) -> GF(p^M) (m | M) sending the source
    generator to the first root of its minimal polynomial, in enumeration
    order.  Any root gives a valid embedding; taking the first makes the
    choice reproducible, and since the generator itself precedes its other
    conjugates in enumeration order, source == target yields the identity.
    """

    def __init__(self, source: FiniteField, target: FiniteField):
        if source.p != target.p:
            raise FieldMismatch("different characteristics")
        if target.m % source.m != 0:
            raise FieldMismatch(
                f"GF({source.p}^{source.m}) does not embed in GF({target.p}^{target.m})"
            )
        self.source = source
        self.target = target
        minpoly = minimal_polynomial(source.generator)
        root = None
        for cand in target.elements():
            acc = target.zero
            for c in reversed(minpoly):
                acc = acc * cand + target.integer(c)
            if not acc:
                root = cand
                break
        if root is None:
            raise Reducible("minimal polynomial has no root in the target field")
        self.image_of_generator = root
        self._verify()

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field != self.source:
            raise FieldMismatch("element not in the source field")
        if x.code == 0:
            return self.target.zero
        return self.image_of_generator ** self.source._log[x.code]

    def _verify(self, samples: int = 10_000):
        src = self.source
        if src.q <= 256:
            pairs = itertools.product(src.elements(), repeat=2)
        else:
            import random

            rng = random.Random(0xC0DE5)
            els = list(src.elements())
            pairs = ((rng.choice(els), rng.choice(els)) for _ in range(samples))
        for x, y in pairs:
            if self(x + y) != self(x) + self(y) or self(x * y) != self(x) * self(y):
                raise Reducible("embedding is not a homomorphism")

    def __repr__(self):
        return f"Embedding({self.source!r} -> {self.target!r})"


def embed(e: FieldEmbedding, x: FieldElement) -> FieldElement:
    return e(x)


def extension_of(f: FiniteField, s: int) -> FieldEmbedding:
    """Embedding of f into GF(q^s) built on the default modulus."""
    target = field_new(f.p, f.m * s)
    return FieldEmbedding(f, target)


def parse_field_spec(text: str) -> FiniteField:
    """Parse `gf(q)`, `gf(p^m)` or `gf(p^m; modulus=c_m,...,c_0)`."""
    t = text.strip().lower()
    if not (t.startswith("gf(") and t.endswith(")")):
        raise ParseError(f"bad field spec {text!r}")
    body = t[3:-1]
    mod = None
    if ";" in body:
        body, modpart = body.split(";", 1)
        modpart = modpart.strip()
        if not modpart.startswith("modulus="):
            raise ParseError(f"bad field spec {text!r}")
        try:
            desc = [int(c) for c in modpart[len("modulus="):].split(",")]
        except ValueError:
            raise ParseError(f"bad modulus in {text!r}") from None
        mod = tuple(reversed(desc))
    body = body.strip()
    try:
        if "^" in body:
            ps, ms = body.split("^", 1)
            p, m = int(ps), int(ms)
        else:
            q = int(body)
            p = next(d for d in range(2, q + 1) if q % d == 0)
            m = 0
            while q > 1:
                if q % p:
                    raise ParseError(f"{body} is not a prime power")
                q //= p
                m += 1
    except (ValueError, StopIteration):
        raise ParseError(f"bad field spec {text!r}") from None
    return field_new(p, m, mod)
