"""Valued Laurent polynomials, Gauss valuations and exact Newton polygons.

All valuations are -log_p of absolute values.  A polygon is the lower convex
hull of the points (i, V_i); its slopes are listed in ascending order with
their horizontal widths as multiplicities.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .plfun import Interval, PLFun, _breakpoints, pl_min
from .scalars import LogValue, as_fraction

__all__ = [
    "ValuedPoly",
    "BivariatePoly",
    "PolygonSlopes",
    "HullCell",
    "ParamHull",
    "gauss_val",
    "gauss_val2",
    "newton_polygon",
    "parametric_hull",
]


class ValuedPoly:
    """Laurent polynomial known through the valuations of its coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Tuple[int, object]] = ()):
        if isinstance(terms, dict):
            terms = terms.items()
        acc: Dict[int, LogValue] = {}
        for e, v in terms:
            if int(e) != e:
                raise ValueError(f"exponent {e!r} is not an integer")
            if e in acc:
                raise ValueError(f"duplicate exponent {e}: pre-combine equal-norm terms")
            acc[int(e)] = LogValue.coerce(v)
        self.terms: Tuple[Tuple[int, LogValue], ...] = tuple(sorted(acc.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self) -> List[int]:
        return [e for e, _ in self.terms]

    def shifted(self, dv) -> "ValuedPoly":
        """Multiply by a scalar of valuation dv."""
        return ValuedPoly((e, v + dv) for e, v in self.terms)

    def gauss_val(self, r) -> LogValue:
        if not self.terms:
            raise ValueError("Gauss valuation of the zero polynomial")
        r = LogValue.coerce(r)
        return min(v + e * r for e, v in self.terms)

    def gauss_val_fn(self, dom: Interval) -> PLFun:
        """r -> gauss_val(r) as a concave PLFun on dom."""
        if not self.terms:
            raise ValueError("Gauss valuation of the zero polynomial")
        return pl_min(*(PLFun.affine(dom, e, v) for e, v in self.terms)) if not dom.is_point \
            else PLFun(dom, [(dom.lo, self.gauss_val(dom.lo))])

    def __eq__(self, other) -> bool:
        return isinstance(other, ValuedPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        return "ValuedPoly({" + ", ".join(f"{e}: {v}" for e, v in self.terms) + "})"


def gauss_val(P: ValuedPoly, r) -> LogValue:
    return P.gauss_val(r)


@dataclass(frozen=True)
class BivariatePoly:
    """Terms (i, k, q): x^i with coefficient of p-valuation k and residue valuation q."""

    terms: Tuple[Tuple[int, object, object], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "terms",
            tuple((int(i), as_fraction(k), as_fraction(q)) for i, k, q in self.terms),
        )


def gauss_val2(B: BivariatePoly, r, s) -> LogValue:
    if not B.terms:
        raise ValueError("Gauss valuation of the zero polynomial")
    r, s = LogValue.coerce(r), LogValue.coerce(s)
    if not r > 0 or s < 0:
        raise ValueError("need r > 0 and s >= 0")
    return min(k + q * r + i * s * r for i, k, q in B.terms)


@dataclass(frozen=True)
class PolygonSlopes:
    """Ascending slopes with multiplicities (horizontal widths)."""

    slopes: Tuple[Tuple[LogValue, int], ...]

    @property
    def width(self) -> int:
        return sum(m for _, m in self.slopes)

    def expanded(self) -> List[LogValue]:
        return [s for s, m in self.slopes for _ in range(m)]

    def __iter__(self):
        return iter(self.slopes)


def _cross(o, a, b) -> LogValue:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _lower_hull(points: Sequence[Tuple[int, LogValue]]) -> List[Tuple[int, LogValue]]:
    hull: List[Tuple[int, LogValue]] = []
    for pt in sorted(points, key=lambda t: t[0]):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt).sign() <= 0:
            hull.pop()
        hull.append(pt)
    return hull


def newton_polygon(points: Iterable[Tuple[int, object]]) -> PolygonSlopes:
    pts = [(int(i), LogValue.coerce(v)) for i, v in points]
    if len(pts) < 2:
        raise ValueError("a Newton polygon needs at least two points")
    if len({i for i, _ in pts}) != len(pts):
        raise ValueError("abscissae must be distinct")
    hull = _lower_hull(pts)
    return PolygonSlopes(
        tuple(((b[1] - a[1]) / (b[0] - a[0]), b[0] - a[0]) for a, b in zip(hull, hull[1:]))
    )


@dataclass(frozen=True)
class HullCell:
    """A closed r-interval on which the hull vertices are fixed."""

    lo: LogValue
    hi: LogValue
    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[PLFun, int], ...]

    def slopes_at(self, r) -> PolygonSlopes:
        merged: List[List] = []
        for fn, m in self.edges:
            s = fn.value(r)
            if merged and merged[-1][0] == s:
                merged[-1][1] += m
            else:
                merged.append([s, m])
        return PolygonSlopes(tuple((s, m) for s, m in merged))


@dataclass(frozen=True)
class ParamHull:
    interval: Interval
    cells: Tuple[HullCell, ...]

    def cell_at(self, r) -> HullCell:
        r = LogValue.coerce(r)
        if not self.interval.contains(r):
            raise ValueError(f"{r} outside {self.interval}")
        for c in self.cells:
            if c.lo <= r <= c.hi:
                return c
        raise AssertionError("cells do not cover the interval")

    def evaluate(self, r) -> PolygonSlopes:
        return self.cell_at(r).slopes_at(r)

    def breakpoints(self) -> List[LogValue]:
        return [self.cells[0].lo] + [c.hi for c in self.cells]


def _zero_in(f0: LogValue, f1: LogValue, x0: LogValue, x1: LogValue) -> Optional[LogValue]:
    if f0.sign() * f1.sign() < 0:
        return x0 + f0 * (x1 - x0) / (f0 - f1)
    return None


def parametric_hull(polys: Sequence[Optional[ValuedPoly]], interval: Interval) -> ParamHull:
    """Newton polygon of (i, gauss_val(polys[i], r)) as r ranges over interval.

    Cells are cut wherever a height changes slope or three heights become
    collinear, so on each cell the lower hull has fixed vertices and every
    edge slope is affine in r.
    """
    if interval.is_point:
        raise ValueError("parametric_hull needs a nondegenerate interval")
    closed = Interval(interval.lo, interval.hi)
    heights = {
        i: P.gauss_val_fn(closed) for i, P in enumerate(polys) if P is not None and not P.is_zero()
    }
    if len(heights) < 2:
        raise ValueError("need at least two nonzero coefficients")
    idx = sorted(heights)
    grid = _breakpoints(list(heights.values()), closed)
    cuts = set(grid)
    for x0, x1 in zip(grid, grid[1:]):
        h0 = {i: heights[i].value(x0) for i in idx}
        h1 = {i: heights[i].value(x1) for i in idx}
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                for c in range(b + 1, len(idx)):
                    i, j, k = idx[a], idx[b], idx[c]
                    o0 = (j - i) * (h0[k] - h0[i]) - (k - i) * (h0[j] - h0[i])
                    o1 = (j - i) * (h1[k] - h1[i]) - (k - i) * (h1[j] - h1[i])
                    z = _zero_in(o0, o1, x0, x1)
                    if z is not None:
                        cuts.add(z)
    xs = sorted(cuts)
    cells = []
    for x0, x1 in zip(xs, xs[1:]):
        mid = (x0 + x1) / 2
        hull = _lower_hull([(i, heights[i].value(mid)) for i in idx])
        verts = tuple(i for i, _ in hull)
        dom = Interval(x0, x1)
        edges = []
        for i, j in zip(verts, verts[1:]):
            fn = (heights[j].restrict(dom) - heights[i].restrict(dom)).scale(LogValue(1) / (j - i))
            edges.append((fn, j - i))
        cells.append(HullCell(x0, x1, verts, tuple(edges)))
    return ParamHull(interval, tuple(cells))
