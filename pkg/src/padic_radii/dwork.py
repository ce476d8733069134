"""Artin-Schreier parameters over the Hahn field and their b1 profiles.

A parameter is a Laurent polynomial sum u_i x^i whose coefficients live in
F_q((t^Q)).  Two parameters define the same character when they differ by
y^p - y; folding every exponent j*p^k down to j (taking p^k-th roots of the
coefficient) picks a canonical representative.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Dict, Mapping, Optional, Tuple

from .plfun import Interval, PLFun, concat, pl_max
from .scalars import INF, HahnElement, LogValue, _field

__all__ = [
    "ASParameter",
    "PathProfile",
    "as_prepare",
    "as_translate",
    "b1_profile",
    "as_is_trivial",
    "as_combine",
    "as_pullback_tame",
    "b1_along_path",
]


class ASParameter:
    __slots__ = ("p", "m", "coeffs")

    def __init__(self, p: int, coeffs: Mapping[int, HahnElement] = (), m: int = 1):
        self.p, self.m = p, m
        fld = _field(p, m)
        acc: Dict[int, HahnElement] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for i, c in items:
            if not isinstance(c, HahnElement):
                c = HahnElement(fld, c)
            if c.field != fld:
                raise ValueError(f"coefficient of x^{i} is over {c.field}, expected {fld}")
            acc[int(i)] = acc[int(i)] + c if int(i) in acc else c
        self.coeffs: Tuple[Tuple[int, HahnElement], ...] = tuple(
            sorted((i, c) for i, c in acc.items() if not c.is_zero())
        )

    @classmethod
    def zero(cls, p: int, m: int = 1) -> "ASParameter":
        return cls(p, {}, m)

    def coeff(self, i: int) -> HahnElement:
        return dict(self.coeffs).get(i, HahnElement.zero(self.p, self.m))

    def exponents(self):
        return [i for i, _ in self.coeffs]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_prepared(self) -> bool:
        return all(i % self.p != 0 for i in self.exponents())

    def _check(self, other: "ASParameter"):
        if (self.p, self.m) != (other.p, other.m):
            raise ValueError("parameters over different fields")

    def __add__(self, other: "ASParameter") -> "ASParameter":
        self._check(other)
        return ASParameter(self.p, list(self.coeffs) + list(other.coeffs), self.m)

    def __neg__(self) -> "ASParameter":
        return ASParameter(self.p, [(i, -c) for i, c in self.coeffs], self.m)

    def __sub__(self, other: "ASParameter") -> "ASParameter":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ASParameter)
            and (self.p, self.m) == (other.p, other.m)
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "ASParameter(0)"
        return "ASParameter(" + " + ".join(f"({c})*x^{i}" for i, c in self.coeffs) + ")"


def _fold_target(i: int, p: int) -> Tuple[int, int]:
    k = 0
    while i != 0 and i % p == 0:
        i //= p
        k += 1
    return i, k


def as_prepare(u: ASParameter) -> Tuple[ASParameter, HahnElement]:
    """Canonical representative: fold x^(j p^k) onto x^j and split off the constant."""
    out: Dict[int, HahnElement] = {}
    dropped = HahnElement.zero(u.p, u.m)
    for i, c in u.coeffs:
        if i == 0:
            dropped = c
            continue
        j, k = _fold_target(i, u.p)
        for _ in range(k):
            c = c.pth_root()
        out[j] = out[j] + c if j in out else c
    return ASParameter(u.p, out, u.m), dropped


def as_translate(u: ASParameter, h: HahnElement) -> ASParameter:
    """u(x + h) by binomial expansion."""
    if any(i < 0 for i in u.exponents()):
        raise ValueError("translation is only defined for nonnegative exponents")
    out = []
    for i, c in u.coeffs:
        for k in range(i + 1):
            b = comb(i, k) % u.p
            if b:
                out.append((k, c * (h ** (i - k)) * b))
    return ASParameter(u.p, out, u.m)


def _require_prepared(u: ASParameter):
    if not u.is_prepared():
        raise ValueError(f"{u} is not prepared; run as_prepare first")


def b1_profile(u: ASParameter, domain: Interval) -> PLFun:
    """s -> max(s, max_i(-val(u_i) + (1 - i) s))."""
    _require_prepared(u)
    if domain.is_point:
        s = domain.lo
        vals = [s] + [-c.val() + (1 - i) * s for i, c in u.coeffs]
        return PLFun(domain, [(s, max(vals))])
    return pl_max(PLFun.identity(domain), *(PLFun.affine(domain, 1 - i, -c.val()) for i, c in u.coeffs))


def as_is_trivial(u: ASParameter, J: Interval) -> bool:
    """Every term has val(u_i) + i*s > 0 on the closed interval J."""
    _require_prepared(u)
    return all(c.val() + i * s > 0 for i, c in u.coeffs for s in (J.lo, J.hi))


def as_combine(u1: ASParameter, u2: ASParameter) -> ASParameter:
    return u1 + u2


def as_pullback_tame(u: ASParameter, m: int) -> ASParameter:
    if m < 1 or gcd(m, u.p) != 1:
        raise ValueError(f"m = {m} must be a positive integer prime to p = {u.p}")
    return ASParameter(u.p, [(i * m, c) for i, c in u.coeffs], u.m)


@dataclass(frozen=True)
class PathProfile:
    """b1 along the path towards a point, on the window [0, S]."""

    b1: PLFun
    s0: object = INF

    @property
    def terminal_slope(self) -> LogValue:
        return self.b1.right_slope()


def b1_along_path(u: ASParameter, z: HahnElement, window: Interval) -> PathProfile:
    """b1 at the disc of radius s about z, for s running over the window.

    At level s only the part of z below exponent s matters, so the window is
    cut at the exponents of z and each cell uses one fixed truncation.
    """
    if any(i < 0 for i in u.exponents()):
        raise ValueError("b1_along_path needs nonnegative exponents")
    if not z.is_zero() and z.val() < 0:
        raise ValueError("target must lie in the closed unit disc")
    dom = Interval(window.lo, window.hi)
    cuts = sorted({dom.lo, dom.hi} | {LogValue(e) for e, _ in z.terms if dom.lo < e < dom.hi})
    parts = []
    for a, b in zip(cuts, cuts[1:]):
        h = z.truncate_below(b)
        prepared, _ = as_prepare(as_translate(u, h))
        parts.append(b1_profile(prepared, Interval(a, b)))
    fn = concat(parts) if parts else b1_profile(as_prepare(u)[0], dom)
    return PathProfile(fn.with_domain_flags(window.lo_closed, window.hi_closed), INF)
