"""Exact value carriers.

``LogValue`` is an element of the real quadratic field Q(sqrt 2), used for
log-radii, valuations and slopes.  ``HahnElement`` is a finite Hahn series
sum c_e t^e with coefficients in a finite field F_q and rational exponents;
it models elements of a perfect residue field of characteristic p.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

__all__ = [
    "INF",
    "LogValue",
    "FiniteField",
    "HahnElement",
    "logvalue_cmp",
    "hahn_val",
    "hahn_pth_root",
    "as_fraction",
]

RationalLike = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_q2(a: Fraction, b: Fraction) -> int:
    """Sign of a + b*sqrt(2), decided without floating point."""
    sa, sb = _sign(a), _sign(b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with 2 b^2
    return sa * _sign(a * a - 2 * b * b)


class _Infinity:
    """The valuation of zero; larger than every LogValue."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("padic_radii.INF")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = _Infinity()


class LogValue:
    """An exact real number a + b*sqrt(2) with a, b rational."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0):
        if isinstance(a, LogValue):
            if b:
                raise TypeError("cannot combine a LogValue with a sqrt(2) part")
            self._a, self._b = a._a, a._b
            return
        self._a = as_fraction(a)
        self._b = as_fraction(b)

    @classmethod
    def coerce(cls, x) -> "LogValue":
        return x if isinstance(x, LogValue) else cls(x)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    def as_rational(self) -> Fraction:
        if self._b:
            raise ValueError(f"{self} is irrational")
        return self._a

    def sign(self) -> int:
        return _sign_q2(self._a, self._b)

    def conjugate(self) -> "LogValue":
        return LogValue(self._a, -self._b)

    def norm(self) -> Fraction:
        return self._a * self._a - 2 * self._b * self._b

    def floor(self) -> int:
        guess = math.floor(float(self))
        # float error is far below 1 for the magnitudes used here; settle exactly
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if other is INF:
            return INF
        try:
            o = LogValue.coerce(other)
        except TypeError:
            return NotImplemented
        return LogValue(self._a + o._a, self._b + o._b)

    __radd__ = __add__

    def __neg__(self) -> "LogValue":
        return LogValue(-self._a, -self._b)

    def __pos__(self) -> "LogValue":
        return self

    def __sub__(self, other):
        try:
            o = LogValue.coerce(other)
        except TypeError:
            return NotImplemented
        return LogValue(self._a - o._a, self._b - o._b)

    def __rsub__(self, other):
        try:
            o = LogValue.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = LogValue.coerce(other)
        except TypeError:
            return NotImplemented
        return LogValue(self._a * o._a + 2 * self._b * o._b, self._a * o._b + self._b * o._a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = LogValue.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero LogValue")
        num = self * o.conjugate()
        return LogValue(num._a / n, num._b / n)

    def __rtruediv__(self, other):
        return LogValue.coerce(other) / self

    def __abs__(self) -> "LogValue":
        return -self if self.sign() < 0 else self

    # comparison ---------------------------------------------------------
    def _cmp(self, other) -> int:
        o = LogValue.coerce(other)
        return _sign_q2(self._a - o._a, self._b - o._b)

    def __eq__(self, other) -> bool:
        if isinstance(other, LogValue):
            return self._a == other._a and self._b == other._b
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._a) if self._b == 0 else hash((self._a, self._b))

    def __lt__(self, other):
        if other is INF:
            return True
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        if other is INF:
            return True
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        if other is INF:
            return False
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        if other is INF:
            return False
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * math.sqrt(2)

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def __repr__(self) -> str:
        return f"LogValue({self})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        if self._a == 0:
            return f"{self._b}*sqrt2"
        sep = "+" if self._b > 0 else "-"
        return f"{self._a}{sep}{abs(self._b)}*sqrt2"


def logvalue_cmp(x: LogValue, y: LogValue) -> int:
    """Return -1, 0 or 1 as x is less than, equal to or greater than y."""
    return LogValue.coerce(x)._cmp(y)


# finite fields ----------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _poly_mod(num, den, p):
    """Remainder of num by monic den, coefficients low-degree first, over F_p."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    out = [c % p for c in num[:dd]]
    return out + [0] * (dd - len(out))


def _monic_polys(p, d):
    for k in range(p ** d):
        coeffs = []
        for _ in range(d):
            coeffs.append(k % p)
            k //= p
        yield coeffs + [1]


def _irreducible(p: int, m: int):
    for f in _monic_polys(p, m):
        if f[0] == 0:
            continue
        if all(
            any(_poly_mod(f, g, p)) for d in range(1, m // 2 + 1) for g in _monic_polys(p, d)
        ):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class FiniteField:
    """F_q with q = p^m.

    Elements are the integers 0..q-1, read as base-p digit vectors of
    polynomials modulo a fixed irreducible.  The prime subfield is 0..p-1.
    """

    def __init__(self, p: int, m: int = 1):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be positive")
        self.p, self.m, self.q = p, m, p ** m
        self.modulus = _irreducible(p, m) if m > 1 else (0, 1)
        self._exp, self._log = self._tables()

    def __repr__(self) -> str:
        return f"FiniteField({self.p}, {self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self) -> int:
        return hash((self.p, self.m))

    def _digits(self, x: int):
        out = []
        for _ in range(self.m):
            out.append(x % self.p)
            x //= self.p
        return out

    def _from_digits(self, ds) -> int:
        x = 0
        for d in reversed(ds):
            x = x * self.p + d % self.p
        return x

    def _poly_mul(self, x: int, y: int) -> int:
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * self.m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        if self.m == 1:
            return prod[0] % self.p
        return self._from_digits(_poly_mod(prod, self.modulus, self.p))

    def _tables(self):
        q = self.q
        for g in range(1, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._poly_mul(x, g)
                exp.append(x)
            if len(set(exp)) == q - 1:
                return exp, {v: i for i, v in enumerate(exp)}
        # q == 2: the only unit is 1
        return [1], {1: 0}

    def add(self, x: int, y: int) -> int:
        if self.m == 1:
            return (x + y) % self.p
        return self._from_digits([a + b for a, b in zip(self._digits(x), self._digits(y))])

    def neg(self, x: int) -> int:
        if self.m == 1:
            return -x % self.p
        return self._from_digits([-a for a in self._digits(x)])

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self._exp[(self._log[x] + self._log[y]) % (self.q - 1)]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self._exp[-self._log[x] % (self.q - 1)]

    def pow(self, x: int, k: int) -> int:
        if x == 0:
            if k < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0 if k else 1
        return self._exp[(self._log[x] * k) % (self.q - 1)]

    def pth_root(self, x: int) -> int:
        # Frobenius has order m on F_q, so its inverse is c -> c^(p^(m-1))
        return self.pow(x, self.p ** (self.m - 1))

    def embed(self, n: int) -> int:
        """Image of an integer in the prime subfield."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def _field(p: int, m: int) -> FiniteField:
    return FiniteField(p, m)


class HahnElement:
    """A finite sum of terms c * t^e, c in F_q nonzero, e rational.

    Immutable; terms are kept sorted by exponent.
    """

    __slots__ = ("field", "_terms")

    def __init__(self, field: FiniteField, terms: Union[Mapping, Iterable] = ()):
        self.field = field
        acc: Dict[Fraction, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = as_fraction(e)
            c = c % field.q if field.m == 1 else c
            if not 0 <= c < field.q:
                raise ValueError(f"coefficient {c} outside F_{field.q}")
            acc[e] = field.add(acc.get(e, 0), c)
        self._terms: Tuple[Tuple[Fraction, int], ...] = tuple(
            sorted((e, c) for e, c in acc.items() if c)
        )

    # construction -------------------------------------------------------
    @classmethod
    def of(cls, p: int, terms=(), m: int = 1) -> "HahnElement":
        return cls(_field(p, m), terms)

    @classmethod
    def zero(cls, p: int, m: int = 1) -> "HahnElement":
        return cls(_field(p, m))

    @classmethod
    def monomial(cls, p: int, coeff: int, exp: RationalLike, m: int = 1) -> "HahnElement":
        return cls(_field(p, m), [(exp, coeff)])

    def _new(self, terms) -> "HahnElement":
        return HahnElement(self.field, terms)

    # inspection ---------------------------------------------------------
    @property
    def p(self) -> int:
        return self.field.p

    @property
    def terms(self) -> Tuple[Tuple[Fraction, int], ...]:
        return self._terms

    def __iter__(self) -> Iterator[Tuple[Fraction, int]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def val(self):
        return LogValue(self._terms[0][0]) if self._terms else INF

    def truncate_below(self, s) -> "HahnElement":
        """Terms with exponent strictly less than s."""
        return self._new([(e, c) for e, c in self._terms if LogValue(e) < s])

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "HahnElement":
        if isinstance(other, HahnElement):
            if other.field != self.field:
                raise ValueError("Hahn elements over different fields")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self._new([(0, self.field.embed(other))])
        raise TypeError(f"cannot use {other!r} as a Hahn element")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self._new(list(self._terms) + list(o._terms))

    __radd__ = __add__

    def __neg__(self) -> "HahnElement":
        return self._new([(e, self.field.neg(c)) for e, c in self._terms])

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        f = self.field
        return self._new(
            [(e1 + e2, f.mul(c1, c2)) for e1, c1 in self._terms for e2, c2 in o._terms]
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HahnElement":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have inverses in this model")
            (e, c), = self._terms
            return self._new([(-e * (-k), self.field.pow(self.field.inv(c), -k))])
        if k % self.p == 0 and k:
            # Frobenius is additive in characteristic p
            return self._new(
                [(e * self.p, self.field.pow(c, self.p)) for e, c in self._terms]
            ) ** (k // self.p)
        out = self._new([(0, 1)])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def pth_root(self) -> "HahnElement":
        return self._new([(e / self.p, self.field.pth_root(c)) for e, c in self._terms])

    # identity -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, HahnElement):
            return self.field == other.field and self._terms == other._terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self._terms))

    def __repr__(self) -> str:
        return f"HahnElement({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms:
            if e == 0:
                parts.append(str(c))
                continue
            mono = "t" if e == 1 else f"t^({e})"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def hahn_val(e: HahnElement):
    return e.val()


def hahn_pth_root(e: HahnElement) -> HahnElement:
    return e.pth_root()
