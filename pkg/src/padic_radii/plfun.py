"""Continuous piecewise-affine functions with exact breakpoints.

A ``PLFun`` is stored as the list of its knots (x, y) on a bounded interval,
including both endpoints; between knots it is the linear interpolant.  The
knot list is kept canonical (no knot where left and right slopes agree), so
structural equality is functional equality.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .scalars import LogValue, as_fraction

__all__ = [
    "Interval",
    "PLFun",
    "pl_eval",
    "pl_combine",
    "pl_reparam",
    "pl_is_convex",
    "pl_slopes",
    "order_statistics",
    "slopes_in_factorial_lattice",
    "to_csv",
    "from_csv",
]

Knot = Tuple[LogValue, LogValue]


def _lv(x) -> LogValue:
    return LogValue.coerce(x)


@dataclass(frozen=True)
class Interval:
    lo: LogValue
    hi: LogValue
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _lv(self.lo))
        object.__setattr__(self, "hi", _lv(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo {self.lo} > hi {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("a one-point interval must be closed")

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x, True, True)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        x = _lv(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def contains_interval(self, other: "Interval") -> bool:
        lo_ok = other.lo > self.lo or (other.lo == self.lo and (self.lo_closed or not other.lo_closed))
        hi_ok = other.hi < self.hi or (other.hi == self.hi and (self.hi_closed or not other.hi_closed))
        return lo_ok and hi_ok

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        if lo > hi or (lo == hi and not (lc and hc)):
            return None
        return Interval(lo, hi, lc, hc)

    def scaled(self, a, b=0) -> "Interval":
        """Image under x -> a*x + b."""
        a, b = _lv(a), _lv(b)
        lo, hi = a * self.lo + b, a * self.hi + b
        if a.sign() < 0:
            return Interval(hi, lo, self.hi_closed, self.lo_closed)
        return Interval(lo, hi, self.lo_closed, self.hi_closed)

    def midpoint(self) -> LogValue:
        return (self.lo + self.hi) / 2

    def brackets(self) -> str:
        return ("[" if self.lo_closed else "(") + ("]" if self.hi_closed else ")")

    def __str__(self) -> str:
        b = self.brackets()
        return f"{b[0]}{self.lo}, {self.hi}{b[1]}"


def _collinear(k0: Knot, k1: Knot, k2: Knot) -> bool:
    (x0, y0), (x1, y1), (x2, y2) = k0, k1, k2
    return (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)


class PLFun:
    """A continuous piecewise-affine function on a bounded interval."""

    __slots__ = ("domain", "knots", "_xs")

    def __init__(self, domain: Interval, knots: Iterable[Tuple[object, object]]):
        ks = [(_lv(x), _lv(y)) for x, y in knots]
        if not ks:
            raise ValueError("a PLFun needs at least one knot")
        for (x0, _), (x1, _) in zip(ks, ks[1:]):
            if not x0 < x1:
                raise ValueError("knot abscissae must be strictly increasing")
        if ks[0][0] != domain.lo or ks[-1][0] != domain.hi:
            raise ValueError("first and last knots must sit on the domain endpoints")
        canon = [ks[0]]
        for k in ks[1:]:
            if len(canon) >= 2 and _collinear(canon[-2], canon[-1], k):
                canon[-1] = k
            else:
                canon.append(k)
        self.domain = domain
        self.knots: Tuple[Knot, ...] = tuple(canon)
        self._xs = [x for x, _ in canon]

    # constructors -------------------------------------------------------
    @classmethod
    def from_knots(cls, knots, lo_closed: bool = True, hi_closed: bool = True) -> "PLFun":
        ks = [(_lv(x), _lv(y)) for x, y in knots]
        return cls(Interval(ks[0][0], ks[-1][0], lo_closed, hi_closed), ks)

    @classmethod
    def affine(cls, domain: Interval, slope, intercept=0) -> "PLFun":
        slope, intercept = _lv(slope), _lv(intercept)
        xs = [domain.lo] if domain.is_point else [domain.lo, domain.hi]
        return cls(domain, [(x, slope * x + intercept) for x in xs])

    @classmethod
    def identity(cls, domain: Interval) -> "PLFun":
        return cls.affine(domain, 1, 0)

    @classmethod
    def constant(cls, domain: Interval, c) -> "PLFun":
        return cls.affine(domain, 0, c)

    # evaluation ---------------------------------------------------------
    def value(self, x) -> LogValue:
        """Value of the continuous extension to the closed domain."""
        x = _lv(x)
        if x < self.domain.lo or x > self.domain.hi:
            raise ValueError(f"{x} outside {self.domain}")
        i = bisect_right(self._xs, x)
        if i == 0:
            i = 1
        if i >= len(self.knots):
            if x == self._xs[-1]:
                return self.knots[-1][1]
            i = len(self.knots) - 1
        (x0, y0), (x1, y1) = self.knots[i - 1], self.knots[i]
        if x == x0:
            return y0
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def __call__(self, x) -> LogValue:
        if not self.domain.contains(x):
            raise ValueError(f"{x} outside {self.domain}")
        return self.value(x)

    def pieces(self) -> List[Tuple[LogValue, LogValue, LogValue]]:
        """(x0, x1, slope) for each affine piece."""
        return [
            (x0, x1, (y1 - y0) / (x1 - x0))
            for (x0, y0), (x1, y1) in zip(self.knots, self.knots[1:])
        ]

    def slope_list(self) -> List[LogValue]:
        return [s for _, _, s in self.pieces()]

    def left_slope(self) -> LogValue:
        return self.pieces()[0][2]

    def right_slope(self) -> LogValue:
        return self.pieces()[-1][2]

    # structure ----------------------------------------------------------
    def restrict(self, dom: Interval) -> "PLFun":
        if not Interval(self.domain.lo, self.domain.hi).contains_interval(dom):
            raise ValueError(f"{dom} not inside {self.domain}")
        inner = [(x, y) for x, y in self.knots if dom.lo < x < dom.hi]
        if dom.is_point:
            return PLFun(dom, [(dom.lo, self.value(dom.lo))])
        return PLFun(dom, [(dom.lo, self.value(dom.lo))] + inner + [(dom.hi, self.value(dom.hi))])

    def with_domain_flags(self, lo_closed: bool, hi_closed: bool) -> "PLFun":
        d = self.domain
        return PLFun(Interval(d.lo, d.hi, lo_closed, hi_closed), self.knots)

    def scale(self, c) -> "PLFun":
        c = _lv(c)
        return PLFun(self.domain, [(x, c * y) for x, y in self.knots])

    def add_affine(self, slope, intercept=0) -> "PLFun":
        slope, intercept = _lv(slope), _lv(intercept)
        return PLFun(self.domain, [(x, y + slope * x + intercept) for x, y in self.knots])

    def __add__(self, other):
        if isinstance(other, PLFun):
            return pl_combine("add", self, other)
        return self.add_affine(0, other)

    __radd__ = __add__

    def __neg__(self) -> "PLFun":
        return self.scale(-1)

    def __sub__(self, other):
        if isinstance(other, PLFun):
            return pl_combine("add", self, -other)
        return self.add_affine(0, -_lv(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PLFun):
            return NotImplemented
        return self.domain == other.domain and self.knots == other.knots

    def __hash__(self) -> int:
        return hash((self.domain, self.knots))

    def __repr__(self) -> str:
        ks = ", ".join(f"({x}, {y})" for x, y in self.knots)
        return f"PLFun({self.domain.brackets()} {ks})"


def pl_eval(f: PLFun, x) -> LogValue:
    return f(x)


def _breakpoints(funcs: Sequence[PLFun], dom: Interval) -> List[LogValue]:
    xs = {dom.lo, dom.hi}
    for f in funcs:
        xs.update(x for x in f._xs if dom.lo < x < dom.hi)
    return sorted(xs)


def _crossings(f: PLFun, g: PLFun, xs: Sequence[LogValue]) -> List[LogValue]:
    out = []
    for x0, x1 in zip(xs, xs[1:]):
        d0 = f.value(x0) - g.value(x0)
        d1 = f.value(x1) - g.value(x1)
        if d0.sign() * d1.sign() < 0:
            out.append(x0 + d0 * (x1 - x0) / (d0 - d1))
    return out


def pl_combine(mode: str, f: PLFun, g: PLFun) -> PLFun:
    """Pointwise max, min or sum on the intersection of the domains."""
    if mode not in ("max", "min", "add"):
        raise ValueError(f"unknown mode {mode!r}")
    dom = f.domain.intersect(g.domain)
    if dom is None or dom.is_point:
        raise ValueError("domains do not meet in a nondegenerate interval")
    xs = _breakpoints([f, g], dom)
    if mode != "add":
        xs = sorted(set(xs) | set(_crossings(f, g, xs)))
    op = {"max": max, "min": min, "add": lambda a, b: a + b}[mode]
    return PLFun(dom, [(x, op(f.value(x), g.value(x))) for x in xs])


def pl_max(*fs: PLFun) -> PLFun:
    out = fs[0]
    for f in fs[1:]:
        out = pl_combine("max", out, f)
    return out


def pl_min(*fs: PLFun) -> PLFun:
    out = fs[0]
    for f in fs[1:]:
        out = pl_combine("min", out, f)
    return out


def pl_reparam(f: PLFun, a, b, c) -> PLFun:
    """g(t) = c * f(a*t + b) on the pulled-back domain."""
    a = as_fraction(a)
    if a == 0:
        raise ValueError("reparametrization needs a != 0")
    b, c = _lv(b), as_fraction(c)
    inv = Fraction(1) / a
    dom = f.domain.scaled(inv, -b * inv)
    knots = [((x - b) * inv, y * c) for x, y in f.knots]
    if a < 0:
        knots.reverse()
    return PLFun(dom, knots)


def pl_is_convex(f: PLFun) -> bool:
    slopes = f.slope_list()
    return all(s0 <= s1 for s0, s1 in zip(slopes, slopes[1:]))


def pl_slopes(f: PLFun) -> Tuple[List[Tuple[LogValue, Interval]], LogValue]:
    """Affine pieces left to right as (slope, subinterval), and the terminal slope."""
    if f.domain.is_point:
        raise ValueError("a one-point function has no slopes")
    d = f.domain
    pcs = f.pieces()
    out = []
    for k, (x0, x1, s) in enumerate(pcs):
        lc = d.lo_closed if k == 0 else True
        hc = d.hi_closed if k == len(pcs) - 1 else True
        out.append((s, Interval(x0, x1, lc, hc)))
    return out, pcs[-1][2]


def slopes_in_factorial_lattice(f: PLFun, n: int) -> bool:
    """True iff every slope of f is a rational in (1/n!) Z."""
    nf = math.factorial(n)
    for s in f.slope_list():
        if not s.is_rational or (s.a * nf).denominator != 1:
            return False
    return True


def concat(parts: Sequence[PLFun]) -> PLFun:
    """Join functions on abutting domains; values must agree at the seams."""
    knots: List[Knot] = []
    for f in parts:
        ks = list(f.knots)
        if knots:
            if knots[-1][0] != ks[0][0] or knots[-1][1] != ks[0][1]:
                raise ValueError("pieces do not join continuously")
            ks = ks[1:]
        knots.extend(ks)
    first, last = parts[0].domain, parts[-1].domain
    return PLFun(Interval(first.lo, last.hi, first.lo_closed, last.hi_closed), knots)


def order_statistics(funcs: Sequence[PLFun], dom: Optional[Interval] = None) -> List[PLFun]:
    """The k-th largest of ``funcs`` pointwise, for k = 1..len(funcs)."""
    if dom is None:
        dom = funcs[0].domain
        for f in funcs[1:]:
            dom = dom.intersect(f.domain)
            if dom is None:
                raise ValueError("empty common domain")
    if dom.is_point:
        vals = sorted((f.value(dom.lo) for f in funcs), reverse=True)
        return [PLFun(dom, [(dom.lo, v)]) for v in vals]
    xs = _breakpoints(funcs, dom)
    extra = set()
    for i in range(len(funcs)):
        for j in range(i + 1, len(funcs)):
            extra.update(_crossings(funcs[i], funcs[j], xs))
    xs = sorted(set(xs) | extra)
    table = [sorted((f.value(x) for f in funcs), reverse=True) for x in xs]
    return [PLFun(dom, [(x, row[k]) for x, row in zip(xs, table)]) for k in range(len(funcs))]


# CSV ----------------------------------------------------------------------

CSV_HEADER = "x_a,x_b,y_a,y_b"


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def lv_cells(v: LogValue) -> List[str]:
    return [frac_str(v.a), frac_str(v.b)]


def knot_row(x: LogValue, y: LogValue) -> str:
    return ",".join(lv_cells(x) + lv_cells(y))


def parse_frac(cell: str) -> Fraction:
    num, _, den = cell.strip().partition("/")
    d = int(den) if den else 1
    if d == 0:
        raise ValueError(f"zero denominator in {cell!r}")
    return Fraction(int(num), d)


def to_csv(f: PLFun) -> str:
    lines = [f"# domain {f.domain.brackets()}", CSV_HEADER]
    lines += [knot_row(x, y) for x, y in f.knots]
    return "\n".join(lines) + "\n"


def from_csv(text: str) -> PLFun:
    flags = "[]"
    knots = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# domain"):
                flags = line.split()[-1]
            continue
        if line == CSV_HEADER:
            continue
        xa, xb, ya, yb = (parse_frac(c) for c in line.split(","))
        knots.append((LogValue(xa, xb), LogValue(ya, yb)))
    return PLFun.from_knots(knots, flags[0] == "[", flags[1] == "]")
