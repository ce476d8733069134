"""Subsidiary-radius profiles of differential modules on discs and annuli.

Units: the argument r = -log_p(rho) and every entry f = -log_p(radius).  The
uniformizer pi (pi^(p-1) = -p) enters only through its valuation 1/(p-1).

A profile entry is a run of pieces; each piece is either exact (a PLFun) or
bounded by a lower and an upper PLFun.  Entries are ordered f_1 >= ... >= f_n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .newton import ValuedPoly, newton_polygon, parametric_hull
from .plfun import (
    Interval,
    PLFun,
    CSV_HEADER,
    _breakpoints,
    knot_row,
    order_statistics,
    parse_frac,
    pl_is_convex,
    pl_max,
    pl_reparam,
    slopes_in_factorial_lattice,
)
from .scalars import INF, LogValue

__all__ = [
    "CyclicOperator",
    "Piece",
    "RadiiProfile",
    "RadiusMultiset",
    "VariationReport",
    "SubharmonicityReport",
    "DescendantCheck",
    "dwork_operator",
    "radii_profile",
    "dwork_profile",
    "tame_transform",
    "antecedent_exists",
    "antecedent_transform",
    "antecedent_inverse",
    "descendant_multiset",
    "descendant_sum_check",
    "direct_sum_profile",
    "check_variation",
    "check_subharmonicity",
    "robba_condition",
    "is_separated",
    "tame_pullback_datum",
    "frobenius_pullback_datum",
    "profile_to_csv",
    "profile_from_csv",
]

EXACT, BOUNDED = "exact", "bounded"


def omega(p: int) -> Fraction:
    """Valuation of pi, i.e. 1/(p-1)."""
    return Fraction(1, p - 1)


@dataclass(frozen=True)
class CyclicOperator:
    """P_n T^n + ... + P_0 annihilating a cyclic vector (T = d/dx)."""

    p: int
    coeffs: Tuple[ValuedPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("an operator of rank n needs n+1 >= 2 coefficients")
        if self.coeffs[-1].is_zero():
            raise ValueError("leading coefficient P_n must be nonzero")

    @property
    def rank(self) -> int:
        return len(self.coeffs) - 1


def dwork_operator(p: int, r: ValuedPoly) -> CyclicOperator:
    """T - pi*r for the rank-one module with nabla(v) = pi r v dx."""
    return CyclicOperator(p, (r.shifted(omega(p)), ValuedPoly({0: 0})))


@dataclass(frozen=True)
class Piece:
    kind: str
    lower: PLFun
    upper: PLFun

    @property
    def domain(self) -> Interval:
        return self.lower.domain

    @property
    def exact(self) -> bool:
        return self.kind == EXACT

    def map(self, fn) -> "Piece":
        lo = fn(self.lower)
        return Piece(self.kind, lo, lo if self.exact else fn(self.upper))


@dataclass(frozen=True)
class RadiiProfile:
    p: int
    domain: Interval
    entries: Tuple[Tuple[Piece, ...], ...]
    widened: Tuple[Interval, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.entries)

    @classmethod
    def from_exact(cls, p: int, funcs: Sequence[PLFun]) -> "RadiiProfile":
        dom = funcs[0].domain
        if any(f.domain != dom for f in funcs):
            raise ValueError("entries must share a domain")
        stats = order_statistics(funcs, dom) if len(funcs) > 1 else list(funcs)
        return cls(p, dom, tuple((Piece(EXACT, f, f),) for f in stats))

    def exact(self, i: int) -> Optional[PLFun]:
        """Entry i (0-based) if it is a single exact piece over the whole domain."""
        pcs = self.entries[i]
        if len(pcs) == 1 and pcs[0].exact:
            return pcs[0].lower
        return None

    @property
    def is_exact(self) -> bool:
        return all(self.exact(i) is not None for i in range(self.rank))

    def exact_on(self, i: int, dom: Interval) -> Optional[PLFun]:
        for pc in self.entries[i]:
            if pc.exact and pc.domain.contains_interval(dom):
                return pc.lower.restrict(dom)
        return None

    def piece_at(self, i: int, x) -> Piece:
        for pc in self.entries[i]:
            if pc.domain.contains(x):
                return pc
        raise ValueError(f"{x} outside {self.domain}")

    def envelope_at(self, i: int, x) -> Tuple[LogValue, LogValue]:
        pc = self.piece_at(i, x)
        return pc.lower.value(x), pc.upper.value(x)

    def map_pieces(self, fn, domain_map) -> "RadiiProfile":
        return RadiiProfile(
            self.p,
            domain_map(self.domain),
            tuple(tuple(pc.map(fn) for pc in pcs) for pcs in self.entries),
            tuple(domain_map(w) for w in self.widened),
        )


@dataclass(frozen=True)
class RadiusMultiset:
    """Values f_i at a fixed r, sorted in decreasing order."""

    r: LogValue
    values: Tuple[LogValue, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", LogValue.coerce(self.r))
        object.__setattr__(
            self, "values", tuple(sorted((LogValue.coerce(v) for v in self.values), reverse=True))
        )

    def __len__(self) -> int:
        return len(self.values)


# region bookkeeping -------------------------------------------------------


def _regions(dom: Interval, cuts) -> List[Interval]:
    """Split dom into alternating points and open cells at the given cuts."""
    if dom.is_point:
        return [dom]
    xs = sorted({dom.lo, dom.hi} | {x for x in cuts if dom.lo < x < dom.hi})
    out = []
    if dom.lo_closed:
        out.append(Interval.point(dom.lo))
    for k, (x0, x1) in enumerate(zip(xs, xs[1:])):
        out.append(Interval.open(x0, x1))
        if k < len(xs) - 2 or dom.hi_closed:
            out.append(Interval.point(x1))
    return out


def _closure(region: Interval) -> Interval:
    return Interval(region.lo, region.hi)


def _stitch(regions: List[Interval], rows) -> Tuple[Tuple[Piece, ...], ...]:
    """rows[r][k] = (kind, lower, upper) on the closure of region r."""
    n = len(rows[0])
    entries = []
    for k in range(n):
        runs: List[List] = []
        for reg, row in zip(regions, rows):
            kind, lo, up = row[k]
            if runs:
                kind0, regs, los, ups = runs[-1]
                if (
                    kind0 == kind
                    and los[-1].knots[-1] == lo.knots[0]
                    and ups[-1].knots[-1] == up.knots[0]
                ):
                    regs.append(reg)
                    los.append(lo)
                    ups.append(up)
                    continue
            runs.append([kind, [reg], [lo], [up]])
        pieces = []
        for kind, regs, los, ups in runs:
            dom = Interval(regs[0].lo, regs[-1].hi, regs[0].lo_closed, regs[-1].hi_closed)
            lo = _join(los, dom)
            up = lo if kind == EXACT else _join(ups, dom)
            pieces.append(Piece(kind, lo, up))
        entries.append(tuple(pieces))
    return tuple(entries)


def _join(funcs: List[PLFun], dom: Interval) -> PLFun:
    knots = []
    for f in funcs:
        for x, y in f.knots:
            if knots and knots[-1][0] == x:
                continue
            knots.append((x, y))
    return PLFun(dom, knots)


def _bounded_row(p: int, reg: Interval):
    c = _closure(reg)
    lo = PLFun.identity(c)
    return (BOUNDED, lo, lo.add_affine(0, omega(p)))


# operations ----------------------------------------------------------------


def radii_profile(op: CyclicOperator, interval: Interval) -> RadiiProfile:
    """Subsidiary radii read off the Newton polygon of the operator.

    A polygon slope mu (valuation convention) is visible at r when mu > r and
    then gives the exact entry f = 1/(p-1) + mu; the remaining entries are
    only known to lie in [r, 1/(p-1) + r].
    """
    p, n = op.p, op.rank
    w = omega(p)
    nonzero = [i for i, P in enumerate(op.coeffs) if not P.is_zero()]
    hull = parametric_hull(op.coeffs, interval) if len(nonzero) >= 2 and not interval.is_point else None

    cuts = set()
    if hull is not None:
        for cell in hull.cells:
            cuts.update((cell.lo, cell.hi))
            for fn, _ in cell.edges:
                d0, d1 = fn.value(cell.lo) - cell.lo, fn.value(cell.hi) - cell.hi
                if d0.sign() * d1.sign() < 0:
                    cuts.add(cell.lo + d0 * (cell.hi - cell.lo) / (d0 - d1))
    regions = _regions(interval, cuts)

    rows = []
    for reg in regions:
        clo = _closure(reg)
        if reg.is_point:
            x = reg.lo
            if len(nonzero) >= 2:
                pts = [(i, op.coeffs[i].gauss_val(x)) for i in nonzero]
                vis = sorted((s + w for s in newton_polygon(pts).expanded() if s > x), reverse=True)
            else:
                vis = []
            exact = [(EXACT, f, f) for f in (PLFun(clo, [(x, v)]) for v in vis)]
        else:
            mid = reg.midpoint()
            exact = []
            if hull is not None:
                cell = hull.cell_at(mid)
                funcs = []
                for fn, m in cell.edges:
                    if fn.value(mid) > mid:
                        g = fn.restrict(clo).add_affine(0, w)
                        funcs.extend([g] * m)
                funcs.sort(key=lambda g: g.value(mid), reverse=True)
                exact = [(EXACT, g, g) for g in funcs]
        rows.append(exact + [_bounded_row(p, reg)] * (n - len(exact)))
    return RadiiProfile(p, interval, _stitch(regions, rows))


def _check_dwork_hypothesis(p: int, r: ValuedPoly):
    bad = [j for j in r.exponents() if (j + 1) % p == 0]
    if bad:
        raise ValueError(f"Dwork datum has terms x^{bad[0]} with p | j+1")


def dwork_profile(p: int, r: ValuedPoly, interval: Interval) -> PLFun:
    """f(r) = max(r, max_j(-v_j - j r)) for nabla(v) = pi*r(x) v dx."""
    _check_dwork_hypothesis(p, r)
    if interval.is_point:
        x = interval.lo
        return PLFun(interval, [(x, max([x] + [-v - j * x for j, v in r.terms]))])
    return pl_max(PLFun.identity(interval), *(PLFun.affine(interval, -j, -v) for j, v in r.terms))


def tame_pullback_datum(r: ValuedPoly, m: int) -> ValuedPoly:
    """Dwork datum of the pullback along x -> x^m: r(x) -> m x^(m-1) r(x^m)."""
    return ValuedPoly((m * (j + 1) - 1, v) for j, v in r.terms)


def frobenius_pullback_datum(p: int, r: ValuedPoly) -> ValuedPoly:
    """Coefficient of the pullback along x -> x^p: p x^(p-1) r(x^p)."""
    return ValuedPoly((p * (j + 1) - 1, v + 1) for j, v in r.terms)


def tame_transform(profile: RadiiProfile, m: int) -> RadiiProfile:
    """f_F(u) = f_E(m u) - m u + u for the pullback along x -> x^m."""
    if m < 1 or gcd(m, profile.p) != 1:
        raise ValueError(f"m = {m} must be a positive integer prime to p = {profile.p}")
    return profile.map_pieces(
        lambda f: pl_reparam(f, m, 0, 1).add_affine(1 - m),
        lambda d: d.scaled(Fraction(1, m)),
    )


def _positive_on(d: PLFun) -> bool:
    dom = d.domain
    if dom.is_point:
        return d.value(dom.lo) > 0
    for x, y in d.knots:
        if dom.contains(x):
            if not y > 0:
                return False
        elif y < 0:
            return False
    return all(d.value((x0 + x1) / 2) > 0 for x0, x1, _ in d.pieces())


def antecedent_exists(profile: RadiiProfile, interval: Optional[Interval] = None) -> bool:
    """f_1(r) < 1/(p-1) + r on the whole interval."""
    interval = interval or profile.domain
    f1 = profile.exact_on(0, interval)
    if f1 is None:
        raise ValueError("antecedent test needs an exact first entry on the interval")
    return _positive_on(PLFun.identity(interval).add_affine(0, omega(profile.p)) - f1)


def antecedent_transform(profile: RadiiProfile) -> RadiiProfile:
    """Profile of the Frobenius antecedent: g(t) = p f(t/p)."""
    if not antecedent_exists(profile):
        raise ValueError("no Frobenius antecedent on this domain")
    p = profile.p
    return profile.map_pieces(lambda f: pl_reparam(f, Fraction(1, p), 0, p), lambda d: d.scaled(p))


def antecedent_inverse(profile: RadiiProfile) -> RadiiProfile:
    """From the antecedent profile back to the pulled-back one: f(s) = g(p s)/p."""
    p = profile.p
    return profile.map_pieces(lambda f: pl_reparam(f, p, 0, Fraction(1, p)), lambda d: d.scaled(Fraction(1, p)))


def descendant_multiset(ms: RadiusMultiset, p: int) -> RadiusMultiset:
    w = omega(p)
    if not (0 < ms.r < w):
        raise ValueError(f"r = {ms.r} must lie in (0, 1/(p-1))")
    out: List[LogValue] = []
    for f in ms.values:
        if f < w:
            out.append(p * f)
            out.extend([LogValue(p * w)] * (p - 1))
        else:
            out.extend([f + 1] * p)
    return RadiusMultiset(p * ms.r, tuple(out))


@dataclass(frozen=True)
class DescendantCheck:
    ok: Optional[bool]
    reason: str = ""
    lhs: Optional[LogValue] = None
    rhs: Optional[LogValue] = None


def descendant_sum_check(ms_in: RadiusMultiset, ms_out: RadiusMultiset, i: int, p: int) -> DescendantCheck:
    """Partial-sum identity for the Frobenius descendant (i is 1-based)."""
    n = len(ms_in)
    if len(ms_out) != p * n:
        return DescendantCheck(None, f"output has {len(ms_out)} values, expected {p * n}")
    if not 1 <= i <= n:
        return DescendantCheck(None, f"index {i} out of range")
    if not ms_in.values[i - 1] < omega(p):
        return DescendantCheck(None, f"f_{i} = {ms_in.values[i - 1]} is not below 1/(p-1)")
    k = i + (p - 1) * n
    lhs = sum(ms_out.values[:k], LogValue(0))
    rhs = p * n + p * sum(ms_in.values[:i], LogValue(0))
    ok = lhs == rhs and ms_out.values[k - 1] == p * ms_in.values[i - 1]
    return DescendantCheck(ok, "" if ok else "identity fails", lhs, rhs)


def _cut_points(profiles: Sequence[RadiiProfile]) -> set:
    cuts = set()
    for prof in profiles:
        for pcs in prof.entries:
            for pc in pcs:
                cuts.update((pc.domain.lo, pc.domain.hi))
                cuts.update(x for x, _ in pc.lower.knots)
                cuts.update(x for x, _ in pc.upper.knots)
    return cuts


def direct_sum_profile(parts: Sequence[RadiiProfile]) -> RadiiProfile:
    """Radii of a direct sum: the pointwise merged multiset of the parts' radii."""
    p, dom = parts[0].p, parts[0].domain
    if any(pt.domain != dom or pt.p != p for pt in parts):
        raise ValueError("direct sum needs a common domain and prime")
    items_per_region = []
    regions0 = _regions(dom, _cut_points(parts))
    regions: List[Interval] = []
    rows = []
    widened = []
    for reg in regions0:
        clo = _closure(reg)
        probe = reg.lo if reg.is_point else reg.midpoint()
        items = []
        for pt in parts:
            for k in range(pt.rank):
                pc = pt.piece_at(k, probe)
                items.append((pc.kind, pc.lower.restrict(clo), pc.upper.restrict(clo)))
        lows = order_statistics([lo for _, lo, _ in items], clo)
        ups = order_statistics([up for _, _, up in items], clo)
        sub_cuts = _breakpoints(lows + ups, clo)
        for sreg in _regions(reg, sub_cuts):
            sclo = _closure(sreg)
            row = []
            for lo, up in zip(lows, ups):
                lo_s, up_s = lo.restrict(sclo), up.restrict(sclo)
                if lo_s == up_s:
                    row.append((EXACT, lo_s, lo_s))
                else:
                    row.append((BOUNDED, lo_s, up_s))
                    if not any(
                        it[0] == BOUNDED and it[1].restrict(sclo) == lo_s and it[2].restrict(sclo) == up_s
                        for it in items
                    ):
                        widened.append(sreg)
            regions.append(sreg)
            rows.append(row)
    return RadiiProfile(p, dom, _stitch(regions, rows), tuple(dict.fromkeys(widened)))


def is_separated(profile: RadiiProfile, i: int, interval: Optional[Interval] = None) -> Optional[bool]:
    """Whether the profile splits off a summand after entry i (1-based)."""
    interval = interval or profile.domain
    fs = [profile.exact_on(k, interval) for k in range(i + 1)]
    if any(f is None for f in fs):
        return None
    total = fs[0]
    for f in fs[1:i]:
        total = total + f
    gap = fs[i - 1] - fs[i]
    return len(total.pieces()) <= 1 and _positive_on(gap)


@dataclass
class VariationReport:
    slopes: Optional[bool] = None
    transfer: Optional[bool] = None
    convexity: Optional[bool] = None
    lower_bound: Optional[bool] = None
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> Optional[bool]:
        vals = [self.slopes, self.transfer, self.convexity, self.lower_bound]
        if any(v is False for v in vals):
            return False
        if any(v is None for v in vals):
            return None
        return True


def check_variation(profile: RadiiProfile, has_zero_endpoint: bool) -> VariationReport:
    n = profile.rank
    rep = VariationReport()
    exact_pieces = [pc.lower for pcs in profile.entries for pc in pcs if pc.exact]
    rep.slopes = all(slopes_in_factorial_lattice(f, n) for f in exact_pieces if not f.domain.is_point)
    if not rep.slopes:
        rep.details.append(f"a slope lies outside (1/{n}!)Z")

    rep.lower_bound = True
    for k, pcs in enumerate(profile.entries):
        for pc in pcs:
            if any(y < x for x, y in pc.lower.knots):
                rep.lower_bound = False
                rep.details.append(f"f_{k + 1} drops below r on {pc.domain}")

    fs = [profile.exact(k) for k in range(n)]
    sums: List[Optional[PLFun]] = []
    acc = None
    for f in fs:
        acc = None if f is None or (acc is None and sums) else (f if acc is None else acc + f)
        sums.append(acc)
    if profile.domain.is_point:
        rep.convexity = True
        rep.transfer = True
        return rep
    known = [s for s in sums if s is not None]
    rep.convexity = all(pl_is_convex(s) for s in known) if len(known) == n else (
        False if not all(pl_is_convex(s) for s in known) else None
    )
    if rep.convexity is False:
        rep.details.append("a partial sum is not convex")

    if not has_zero_endpoint:
        rep.transfer = True
        return rep
    transfer: Optional[bool] = True
    for k in range(n):
        f, S = fs[k], sums[k]
        if f is None or S is None:
            transfer = None if transfer else transfer
            continue
        xs = _breakpoints([f, S], profile.domain)
        for x0, x1 in zip(xs, xs[1:]):
            above = any(f.value(x) > x for x in (x0, x1, (x0 + x1) / 2))
            slope = (S.value(x1) - S.value(x0)) / (x1 - x0)
            if above and slope > 0:
                transfer = False
                rep.details.append(f"partial sum {k + 1} increases on ({x0}, {x1}) where f_{k + 1} > r")
    rep.transfer = transfer
    return rep


def robba_condition(profile: RadiiProfile, interval: Optional[Interval] = None) -> Optional[bool]:
    """True iff every entry is the identity; None when a bounded piece leaves it open."""
    interval = interval or profile.domain
    undecided = False
    for pcs in profile.entries:
        for pc in pcs:
            dom = pc.domain.intersect(interval)
            if dom is None:
                continue
            if pc.exact:
                if pc.lower.restrict(dom) != PLFun.identity(dom):
                    return False
            else:
                undecided = True
    return None if undecided else True


# subharmonicity --------------------------------------------------------------

ConcretePoly = Dict[int, Fraction]


def padic_val(q: Fraction, p: int):
    q = Fraction(q)
    if q == 0:
        return INF
    v, num, den = 0, q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def valued(poly: ConcretePoly, p: int) -> ValuedPoly:
    return ValuedPoly((e, padic_val(c, p)) for e, c in poly.items() if c != 0)


def translate_concrete(poly: ConcretePoly, z: Fraction) -> ConcretePoly:
    """poly(x + z) for a polynomial with nonnegative exponents."""
    out: Dict[int, Fraction] = {}
    for e, c in poly.items():
        if e < 0:
            raise ValueError("translation needs nonnegative exponents")
        for k in range(e + 1):
            out[k] = out.get(k, Fraction(0)) + Fraction(c) * comb(e, k) * Fraction(z) ** (e - k)
    return {e: c for e, c in out.items() if c != 0}


def _residue(z: Fraction, p: int) -> int:
    z = Fraction(z)
    if padic_val(z, p) is not INF and padic_val(z, p) < 0:
        raise ValueError(f"translate {z} is not p-integral")
    return z.numerator * pow(z.denominator, -1, p) % p


@dataclass
class SubharmonicityReport:
    left: List[Optional[LogValue]]
    right: List[List[Optional[LogValue]]]
    holds: Optional[bool]

    def as_rows(self):
        return [
            (i + 1, self.left[i], [r[i] for r in self.right]) for i in range(len(self.left))
        ]


def _partial_slopes(profile: RadiiProfile, side: str) -> List[Optional[LogValue]]:
    out: List[Optional[LogValue]] = []
    acc: Optional[LogValue] = LogValue(0)
    for pcs in profile.entries:
        pc = pcs[-1] if side == "left" else pcs[0]
        if acc is None or not pc.exact or pc.domain.is_point:
            acc = None
        else:
            acc = acc + (pc.lower.right_slope() if side == "left" else pc.lower.left_slope())
        out.append(acc)
    return out


def _profile_of(p: int, base, lo, hi) -> RadiiProfile:
    dom = Interval.closed(lo, hi)
    if isinstance(base, dict):
        r = valued(base, p)
        try:
            return RadiiProfile.from_exact(p, [dwork_profile(p, r, dom)])
        except ValueError:
            return radii_profile(dwork_operator(p, r), dom)
    return radii_profile(CyclicOperator(p, tuple(valued(P, p) for P in base)), dom)


def check_subharmonicity(
    p: int, base: Union[ConcretePoly, Sequence[ConcretePoly]], translates: Sequence[Fraction]
) -> SubharmonicityReport:
    """Compare the left slopes at r = 0 with the sum of right slopes of the translates.

    ``base`` is a Dwork datum r(x) (rational coefficients, polynomial) or the
    coefficient list P_0..P_n of a cyclic operator.  Translates are p-integral
    rationals with distinct residues mod p.
    """
    residues = [_residue(z, p) for z in translates]
    if len(set(residues)) != len(residues):
        raise ValueError("translates must have distinct residues mod p")
    left = _partial_slopes(_profile_of(p, base, -1, 0), "left")
    right = []
    for z in translates:
        if isinstance(base, dict):
            moved = translate_concrete(base, z)
        else:
            moved = [translate_concrete(P, z) for P in base]
        right.append(_partial_slopes(_profile_of(p, moved, 0, 1), "right"))
    holds: Optional[bool] = True
    for i, s_inf in enumerate(left):
        rs = [r[i] for r in right]
        if s_inf is None or any(s is None for s in rs):
            holds = None if holds else holds
            continue
        if not s_inf <= sum(rs, LogValue(0)):
            holds = False
    return SubharmonicityReport(left, right, holds)


# CSV -------------------------------------------------------------------------

PROFILE_HEADER = "entry,piece,tag,domain," + CSV_HEADER


def profile_to_csv(profile: RadiiProfile) -> str:
    lines = [f"# p {profile.p} domain {profile.domain.brackets()}", PROFILE_HEADER]
    for k, pcs in enumerate(profile.entries):
        for j, pc in enumerate(pcs):
            fl = pc.domain.brackets()
            funcs = [("exact", pc.lower)] if pc.exact else [("lower", pc.lower), ("upper", pc.upper)]
            for tag, f in funcs:
                lines += [f"{k + 1},{j + 1},{tag},{fl}," + knot_row(x, y) for x, y in f.knots]
    return "\n".join(lines) + "\n"


def profile_from_csv(text: str) -> RadiiProfile:
    p, flags = None, "[]"
    rows: Dict[Tuple[int, int], Dict[str, list]] = {}
    piece_flags: Dict[Tuple[int, int], str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line == PROFILE_HEADER:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            p, flags = int(parts[1]), parts[3]
            continue
        e, j, tag, fl, xa, xb, ya, yb = line.split(",")
        key = (int(e), int(j))
        piece_flags[key] = fl
        x = LogValue(parse_frac(xa), parse_frac(xb))
        y = LogValue(parse_frac(ya), parse_frac(yb))
        rows.setdefault(key, {}).setdefault(tag, []).append((x, y))
    if p is None:
        raise ValueError("profile CSV lacks its '# p' header")
    entries: Dict[int, List[Piece]] = {}
    for key in sorted(rows):
        fl = piece_flags[key]
        make = lambda kn: PLFun.from_knots(kn, fl[0] == "[", fl[1] == "]")
        tags = rows[key]
        if "exact" in tags:
            f = make(tags["exact"])
            pc = Piece(EXACT, f, f)
        else:
            pc = Piece(BOUNDED, make(tags["lower"]), make(tags["upper"]))
        entries.setdefault(key[0], []).append(pc)
    pcs0 = [entries[k] for k in sorted(entries)]
    lo, hi = pcs0[0][0].domain, pcs0[0][-1].domain
    dom = Interval(lo.lo, hi.hi, flags[0] == "[", flags[1] == "]")
    return RadiiProfile(p, dom, tuple(tuple(v) for v in pcs0))
