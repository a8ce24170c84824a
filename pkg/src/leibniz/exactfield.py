"""Exact scalars over Q and prime fields GF(p), plus the linear algebra on top.

Internally a field element is a bare Python value: an ``int`` in ``[0, p)`` for
GF(p) and a :class:`fractions.Fraction` for Q.  Vectors are tuples of such
values.  :class:`Scalar` wraps a value together with its field for the public,
type-checked surface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DivisionByZero, MixedFields, ParseError

MAX_MODULUS = 1 << 16


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True, order=True)
class FieldSpec:
    kind: str  # "Q" or "GF"
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.modulus is not None:
                raise ValueError("the rationals take no modulus")
        elif self.kind == "GF":
            p = self.modulus
            if not isinstance(p, int) or not (2 <= p < MAX_MODULUS) or not is_prime(p):
                raise ValueError(f"modulus must be a prime below 2^16, got {p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("Q")

    @classmethod
    def gf(cls, p: int) -> FieldSpec:
        return cls("GF", p)

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Accept ``"Q"`` or ``"GF(p)"``."""
        text = text.strip()
        if text == "Q":
            return cls.rationals()
        m = re.fullmatch(r"GF\((\d+)\)", text)
        if not m:
            raise ParseError(f"bad field {text!r}; expected 'Q' or 'GF(p)'")
        try:
            return cls.gf(int(m.group(1)))
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    def __str__(self) -> str:
        return "Q" if self.kind == "Q" else f"GF({self.modulus})"

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "GF"

    @property
    def characteristic(self) -> int:
        return self.modulus or 0

    # raw-value arithmetic; all results normalized

    def norm(self, x):
        if self.modulus is not None:
            return int(x) % self.modulus
        return x if type(x) is Fraction else Fraction(x)

    @property
    def zero(self):
        return 0 if self.modulus is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.modulus is not None else Fraction(1)

    def add(self, a, b):
        return self.norm(a + b)

    def sub(self, a, b):
        return self.norm(a - b)

    def mul(self, a, b):
        return self.norm(a * b)

    def neg(self, a):
        return self.norm(-a)

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        if self.modulus is not None:
            return pow(int(a), -1, self.modulus)
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        if self.modulus is None:
            raise TypeError("the rationals are not enumerable")
        return range(self.modulus)

    def format(self, x) -> str:
        x = self.norm(x)
        if self.modulus is not None:
            return str(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def parse_scalar(self, text: str):
        """Parse a scalar string; GF(p) residues must already lie in [0, p)."""
        if not isinstance(text, str):
            raise ParseError(f"scalar must be a string, got {text!r}")
        if self.modulus is not None:
            if not re.fullmatch(r"\d+", text):
                raise ParseError(f"bad GF({self.modulus}) scalar {text!r}")
            k = int(text)
            if k >= self.modulus:
                raise ParseError(f"residue {k} out of range for GF({self.modulus})")
            return k
        m = re.fullmatch(r"(-?\d+)(?:/(\d+))?", text)
        if not m:
            raise ParseError(f"bad rational scalar {text!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)


Q = FieldSpec.rationals()


def GF(p: int) -> FieldSpec:
    return FieldSpec.gf(p)


@dataclass(frozen=True)
class Scalar:
    spec: FieldSpec
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.spec.norm(self.value))

    def _other(self, other) -> object:
        if isinstance(other, Scalar):
            if other.spec != self.spec:
                raise MixedFields(f"{self.spec} vs {other.spec}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.spec, self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.spec, self.value - o)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else Scalar(self.spec, self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.spec, -self.value)

    def inv(self) -> Scalar:
        return Scalar(self.spec, self.spec.inv(self.value))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Scalar(self.spec, self.value * self.spec.inv(self.spec.norm(o)))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return self.spec.format(self.value)


def scalar_arith(op: str, a: Scalar, b: Scalar | None = None) -> Scalar:
    """Apply ``add``, ``mul``, ``neg`` or ``inv`` to scalars of one field."""
    if op in ("neg", "inv"):
        return -a if op == "neg" else a.inv()
    if b is None:
        raise TypeError(f"{op} needs two operands")
    if a.spec != b.spec:
        raise MixedFields(f"{a.spec} vs {b.spec}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# linear algebra over raw values


def rref_raw(field: FieldSpec, rows: Iterable[Sequence]) -> tuple[tuple[tuple, ...], tuple[int, ...]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    norm = field.norm
    m = [[norm(x) for x in r] for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    if any(len(r) != ncols for r in m):
        raise ValueError("ragged matrix")
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            inv = field.inv(lead)
            m[r] = [norm(x * inv) for x in m[r]]
        row = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [norm(a - f * b) for a, b in zip(m[i], row)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(x) for x in m[:r]), tuple(pivots)


def rref(matrix: Sequence[Sequence], field: FieldSpec | None = None):
    """Canonical reduced row echelon form of ``matrix``.

    Entries are either :class:`Scalar` objects (the field is inferred and must
    be common to all of them) or raw values together with ``field``.  Returns
    ``(rows, rank)`` in the same representation as the input; zero rows are
    dropped.
    """
    scalars = any(isinstance(x, Scalar) for row in matrix for x in row)
    if scalars:
        specs = {x.spec for row in matrix for x in row if isinstance(x, Scalar)}
        if field is not None:
            specs.add(field)
        if len(specs) != 1:
            raise MixedFields(", ".join(sorted(map(str, specs))))
        field = specs.pop()
        raw = [[x.value if isinstance(x, Scalar) else x for x in row] for row in matrix]
    else:
        if field is None:
            raise TypeError("raw matrices need an explicit field")
        raw = matrix
    rows, piv = rref_raw(field, raw)
    if scalars:
        rows = tuple(tuple(Scalar(field, x) for x in r) for r in rows)
    return rows, len(piv)


def reduce_vector(field: FieldSpec, basis: Sequence[Sequence], pivots: Sequence[int], v: Sequence) -> tuple:
    """Remainder of ``v`` modulo the row space of an rref ``basis``."""
    norm = field.norm
    w = list(v)
    for row, c in zip(basis, pivots):
        f = w[c]
        if f:
            w = [a - f * b for a, b in zip(w, row)]
    return tuple(norm(x) for x in w)


def nullspace(field: FieldSpec, equations: Sequence[Sequence], ncols: int) -> tuple[tuple, ...]:
    """Rref basis of ``{x : sum_j eq[j] * x[j] == 0 for every eq}``."""
    rows, piv = rref_raw(field, equations) if equations else ((), ())
    free = [c for c in range(ncols) if c not in piv]
    one, zero = field.one, field.zero
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = one
        for row, c in zip(rows, piv):
            x[c] = field.neg(row[f])
        basis.append(x)
    return rref_raw(field, basis)[0]


def mat_mul(field: FieldSpec, a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple[tuple, ...]:
    norm = field.norm
    bt = list(zip(*b)) if b else []
    return tuple(tuple(norm(sum(x * y for x, y in zip(row, col))) for col in bt) for row in a)


def mat_inverse(field: FieldSpec, m: Sequence[Sequence]) -> tuple[tuple, ...] | None:
    """Inverse of a square matrix, or None when singular."""
    n = len(m)
    one, zero = field.one, field.zero
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    rows, piv = rref_raw(field, aug)
    if tuple(piv[:n]) != tuple(range(n)) or len(rows) < n:
        return None
    return tuple(tuple(r[n:]) for r in rows)
