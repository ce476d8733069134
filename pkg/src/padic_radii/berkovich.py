"""Points of the closed unit disc over the Hahn field, as discs and disc sequences.

A disc point is stored with its center truncated below the log-radius s, so
two descriptions of the same disc compare equal structurally.  Everything is
in valuation form: larger s means a smaller disc.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .scalars import INF, HahnElement, LogValue

__all__ = [
    "Disc",
    "SeqPrefix",
    "BerkovichPoint",
    "DiscSet",
    "Undecidable",
    "DisjointDiscReport",
    "dominates",
    "classify",
    "path_point",
    "meet",
    "gauss_point",
    "check_disjoint_discs",
    "union_discs",
    "poly_val_at",
]


class Undecidable(Exception):
    """The answer depends on the unseen tail of a disc sequence."""


def _radius(s):
    return INF if s is INF or s == "inf" else LogValue.coerce(s)


def _le(a, b) -> bool:
    if b is INF:
        return True
    if a is INF:
        return False
    return a <= b


def _min(*xs):
    finite = [x for x in xs if x is not INF]
    return min(finite) if finite else INF


def _dist(z: HahnElement, w: HahnElement):
    return (z - w).val()


@dataclass(frozen=True)
class Disc:
    center: HahnElement
    s: object

    def __post_init__(self):
        s = _radius(self.s)
        if s is not INF and s < 0:
            raise ValueError(f"log-radius {s} must be >= 0")
        if not self.center.is_zero() and self.center.val() < 0:
            raise ValueError(f"center {self.center} lies outside the unit disc")
        object.__setattr__(self, "s", s)
        if s is not INF:
            object.__setattr__(self, "center", self.center.truncate_below(s))

    def contains(self, z: HahnElement) -> bool:
        return _le(self.s, _dist(self.center, z))

    def __str__(self) -> str:
        return f"D({self.center}, {self.s})"


@dataclass(frozen=True)
class SeqPrefix:
    discs: Tuple[Disc, ...]

    def __post_init__(self):
        ds = tuple(self.discs)
        if not ds:
            raise ValueError("a disc sequence needs at least one disc")
        for a, b in zip(ds, ds[1:]):
            if a.s is INF or b.s is INF or not a.s < b.s or not _disc_dominates(a, b):
                raise ValueError(f"{a} must strictly contain {b}")
        object.__setattr__(self, "discs", ds)

    @property
    def last(self) -> Disc:
        return self.discs[-1]


BerkovichPoint = Union[Disc, SeqPrefix]


def gauss_point(p: int, m: int = 1) -> Disc:
    return Disc(HahnElement.zero(p, m), LogValue(0))


def _disc_dominates(a: Disc, b: Disc) -> bool:
    return _le(a.s, b.s) and _le(a.s, _dist(a.center, b.center))


def _disjoint(a: Disc, b: Disc) -> bool:
    return not _disc_dominates(a, b) and not _disc_dominates(b, a)


def dominates(alpha: BerkovichPoint, beta: BerkovichPoint) -> bool:
    """alpha >= beta, i.e. the disc of alpha contains that of beta.

    Raises Undecidable when a disc sequence's unseen tail decides the answer.
    """
    if isinstance(alpha, Disc) and isinstance(beta, Disc):
        return _disc_dominates(alpha, beta)
    if isinstance(alpha, Disc):
        last = beta.last
        if _disc_dominates(alpha, last):
            return True
        if _disjoint(alpha, last):
            return False
        raise Undecidable(f"{alpha} lies inside {last}")
    if isinstance(beta, Disc):
        if not _disc_dominates(alpha.last, beta):
            return False
        raise Undecidable(f"{beta} lies inside every listed disc")
    if alpha.discs == beta.discs:
        return True
    if any(_disjoint(a, b) for a in alpha.discs for b in beta.discs):
        return False
    raise Undecidable("the sequences agree on their listed discs")


def classify(alpha: BerkovichPoint) -> str:
    if isinstance(alpha, SeqPrefix):
        return "iv-prefix"
    if alpha.s is INF:
        return "i"
    return "ii" if alpha.s.is_rational else "iii"


def path_point(alpha: Disc, s) -> Disc:
    """The point of log-radius s on the path from the Gauss point to alpha."""
    s = LogValue.coerce(s)
    if s < 0 or not _le(s, alpha.s):
        raise ValueError(f"s = {s} must lie in [0, {alpha.s}]")
    return Disc(alpha.center, s)


def meet(alpha: Disc, beta: Disc) -> Disc:
    return Disc(alpha.center, _min(alpha.s, beta.s, _dist(alpha.center, beta.center)))


# polynomials given by their roots -------------------------------------------


def poly_val_at(roots: Sequence[HahnElement], lead_val, point: Disc):
    """Valuation form of |P|_point for P = c * prod(x - z), val(c) = lead_val."""
    total = LogValue.coerce(lead_val)
    for z in roots:
        d = _min(point.s, _dist(point.center, z))
        if d is INF:
            return INF
        total = total + d
    return total


@dataclass(frozen=True)
class DisjointDiscReport:
    hypothesis: bool
    holds: Optional[bool]
    value_at_z2: object = None
    norm_at_disc: object = None
    reason: str = ""


def check_disjoint_discs(
    roots: Sequence[HahnElement], lead_val, z1_index: int, s1, z2: HahnElement
) -> DisjointDiscReport:
    """Compare val P(z2) with the Gauss valuation of P on the disc D(z1, s1).

    z1 must be a root nearest to z2: for conjugate roots this is arranged by
    a field automorphism, here it is checked.
    """
    s1 = LogValue.coerce(s1)
    z1 = roots[z1_index]
    dists = [_dist(z, z2) for z in roots]
    far = all(d is not INF and d < s1 for d in dists)
    nearest = all(_le(d, dists[z1_index]) for d in dists)
    if not (far and nearest):
        why = "some root lies within the disc around z2" if not far else "z1 is not a nearest root to z2"
        return DisjointDiscReport(False, None, reason=f"hypothesis fails: {why}")
    lhs = poly_val_at(roots, lead_val, Disc(z2, INF))
    rhs = poly_val_at(roots, lead_val, Disc(z1, s1))
    return DisjointDiscReport(True, lhs < rhs, lhs, rhs)


@dataclass(frozen=True)
class DiscSet:
    discs: Tuple[Disc, ...]
    disjoint: bool = True

    def contains(self, z: HahnElement) -> bool:
        return any(d.contains(z) for d in self.discs)

    def __len__(self) -> int:
        return len(self.discs)


def _clusters(roots: List[HahnElement], d) -> List[List[HahnElement]]:
    out: List[List[HahnElement]] = []
    for z in roots:
        for cl in out:
            if d < _dist(cl[0], z):
                cl.append(z)
                break
        else:
            out.append([z])
    return out


def _locus(roots: List[HahnElement], lead: LogValue, bound: LogValue, field_zero) -> List[Disc]:
    """{x in the unit disc : lead + sum val(x - z) >= bound} as disjoint discs."""
    l = len(roots)
    if l == 0:
        return [Disc(field_zero, LogValue(0))] if lead >= bound else []
    d = _min(*(_dist(a, b) for i, a in enumerate(roots) for b in roots[i + 1:])) if l > 1 else INF
    if d is INF or bound <= lead + l * d:
        s = (bound - lead) / l
        z = roots[0]
        zval = z.val()
        if s <= 0:
            return [Disc(field_zero, LogValue(0))] if _le(s, zval) else []
        return [Disc(z, s)] if _le(LogValue(0), zval) else []
    out = []
    for cl in _clusters(roots, d):
        out.extend(_locus(cl, lead + (l - len(cl)) * d, bound, field_zero))
    return out


def _intersect(a: List[Disc], b: List[Disc]) -> List[Disc]:
    out = []
    for x in a:
        for y in b:
            if _disc_dominates(x, y):
                out.append(y)
            elif _disc_dominates(y, x):
                out.append(x)
    return list(dict.fromkeys(out))


def union_discs(constraints: Sequence[Tuple[Sequence[HahnElement], object, object]], p: int = None, m: int = 1) -> DiscSet:
    """Points of the unit disc where every P_i has Gauss valuation >= bound_i."""
    result: Optional[List[Disc]] = None
    zero = None
    for roots, lead, bound in constraints:
        roots = list(roots)
        if zero is None:
            zero = roots[0] * 0 if roots else HahnElement.zero(p, m) if p else None
        if zero is None:
            raise ValueError("a root-free constraint needs p to fix the field")
        discs = _locus(roots, LogValue.coerce(lead), LogValue.coerce(bound), zero)
        result = discs if result is None else _intersect(result, discs)
    return DiscSet(tuple(result or ()), True)
