"""Random instance generators and brute-force oracles shared by the tests."""
from __future__ import annotations

import random
from decimal import Decimal, getcontext
from fractions import Fraction
from itertools import permutations
from typing import Dict, List

import math

from padic_radii.berkovich import Disc
from padic_radii.dwork import ASParameter
from padic_radii.newton import ValuedPoly
from padic_radii.scalars import INF, HahnElement, LogValue
from padic_radii.valuation import rational_rank

getcontext().prec = 60
SQRT2 = Decimal(2).sqrt()


def dec(v: LogValue) -> Decimal:
    return Decimal(v.a.numerator) / Decimal(v.a.denominator) + SQRT2 * (
        Decimal(v.b.numerator) / Decimal(v.b.denominator)
    )


def rand_frac(rng: random.Random, lo: int, hi: int, maxden: int) -> Fraction:
    den = rng.randint(1, maxden)
    return Fraction(rng.randint(lo * den, hi * den), den)


def admissible_exponents(p: int, lo: int = 0, hi: int = 6) -> List[int]:
    return [j for j in range(lo, hi + 1) if (j + 1) % p != 0]


def rand_dwork_datum(rng: random.Random, p: int, max_terms: int = 4, vlo: int = -5, vhi: int = 5) -> ValuedPoly:
    exps = rng.sample(admissible_exponents(p), rng.randint(1, max_terms))
    return ValuedPoly({j: rand_frac(rng, vlo, vhi, 6) for j in exps})


def brute_dwork(r: ValuedPoly, x: LogValue) -> LogValue:
    return max([x] + [-v - j * x for j, v in r.terms])


def brute_lower_hull_slopes(points):
    """Slopes of the lower hull by checking every candidate segment."""
    pts = sorted(points)
    verts = [pts[0]]
    while verts[-1] != pts[-1]:
        a = verts[-1]
        best = None
        for b in pts:
            if b[0] <= a[0]:
                continue
            s = (b[1] - a[1]) / (b[0] - a[0])
            if best is None or s < best[0] or (s == best[0] and b[0] > best[1][0]):
                best = (s, b)
        verts.append(best[1])
    out = []
    for a, b in zip(verts, verts[1:]):
        s = (b[1] - a[1]) / (b[0] - a[0])
        if out and out[-1][0] == s:
            out[-1] = (s, out[-1][1] + b[0] - a[0])
        else:
            out.append((s, b[0] - a[0]))
    return out


def rand_hahn(rng: random.Random, p: int, terms: int = 2, elo: int = -3, ehi: int = 3, maxden: int = 3, m: int = 1) -> HahnElement:
    q = p**m
    return HahnElement.of(p, [(rand_frac(rng, elo, ehi, maxden), rng.randint(1, q - 1)) for _ in range(terms)], m)


def rand_asparam(rng: random.Random, p: int, lo: int = -6, hi: int = 6, terms: int = 3) -> ASParameter:
    return ASParameter(p, {rng.randint(lo, hi): rand_hahn(rng, p, rng.randint(1, 2)) for _ in range(terms)})


def as_mul(u: ASParameter, w: ASParameter) -> ASParameter:
    return ASParameter(u.p, [(i + j, a * b) for i, a in u.coeffs for j, b in w.coeffs], u.m)


def as_pow(u: ASParameter, k: int) -> ASParameter:
    out = ASParameter(u.p, {0: HahnElement.of(u.p, [(0, 1)], u.m)}, u.m)
    for _ in range(k):
        out = as_mul(out, u)
    return out


def det_leibniz(M) -> int:
    n = len(M)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = 1
        for i in range(n):
            prod *= M[i][perm[i]]
        total += sign * prod
    return total


def adjugate_inverse(M):
    """Inverse of a determinant +-1 integer matrix through cofactors."""
    n = len(M)
    d = det_leibniz(M)
    assert abs(d) == 1
    inv = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            cof = (-1) ** (i + j) * (det_leibniz(minor) if minor else 1)
            inv[j][i] = cof * d
    return inv


def rand_positive_lv(rng: random.Random, sqrt2: bool = True) -> LogValue:
    while True:
        a = rand_frac(rng, -20, 20, 12)
        b = rand_frac(rng, -4, 4, 12) if sqrt2 and rng.random() < 0.6 else Fraction(0)
        v = LogValue(a, b)
        if v > 0:
            return v


def val_sum(roots, lead, z) -> object:
    total = LogValue.coerce(lead)
    for w in roots:
        d = (z - w).val()
        if d is INF:
            return INF
        total = total + d
    return total


def padic_val_oracle(q: Fraction, p: int) -> int:
    n, d, v = q.numerator, q.denominator, 0
    while n % p == 0:
        n, v = n // p, v + 1
    while d % p == 0:
        d, v = d // p, v - 1
    return v


def rand_concrete_dwork(rng: random.Random, p: int) -> Dict[int, Fraction]:
    """Rational polynomial r with p-adic data admissible for the Dwork formula."""
    vmin = -2 if p == 2 else -1
    while True:
        exps = rng.sample(admissible_exponents(p, 0, 5), rng.randint(1, 3))
        poly = {}
        for j in exps:
            v = rng.randint(vmin - 2, 2)
            unit = rng.choice([u for u in range(1, 3 * p) if u % p])
            poly[j] = Fraction(unit) * Fraction(p) ** v
        if min(padic_val_oracle(c, p) for c in poly.values()) <= vmin:
            return poly


def rand_zariski_input(rng: random.Random):
    """Positive values c_1..c_s whose first r entries are a Q-basis of their span."""
    s = rng.randint(1, 5)
    r = rng.randint(1, min(2, s))
    while True:
        base = [rand_positive_lv(rng) for _ in range(r)]
        if rational_rank(base) == r:
            break
    c = list(base)
    while len(c) < s:
        coef = [rand_frac(rng, -6, 6, 12) for _ in base]
        v = sum((q * b for q, b in zip(coef, base)), LogValue(0))
        if v > 0:
            c.append(v)
    return c, r


# unit-disc points over the Hahn field in characteristic 5

DISC_P = 5


def rand_radius(rng: random.Random, hi: int = 4):
    k = rng.random()
    if k < 0.15:
        return INF
    if k < 0.35:
        v = LogValue(rand_frac(rng, 0, 2, 3), Fraction(rng.randint(0, 2), 2))
        return v if v <= hi else LogValue(hi)
    return LogValue(rand_frac(rng, 0, hi, 4))


def rand_center(rng: random.Random, lo: int = 0) -> HahnElement:
    return rand_hahn(rng, DISC_P, rng.randint(0, 3), lo, lo + 3, 3)


def perturb(rng: random.Random, c: HahnElement, s) -> HahnElement:
    """A center at distance >= s from c."""
    if s is INF:
        return c
    lo = math.ceil(s.a + s.b * 2) + 1
    return c + rand_hahn(rng, DISC_P, rng.randint(0, 2), lo, lo + 3, 2)


def rand_disc(rng: random.Random) -> Disc:
    return Disc(rand_center(rng), rand_radius(rng))


def dominated_by(rng: random.Random, gamma: Disc) -> Disc:
    """A random point dominating gamma."""
    cap = gamma.s if gamma.s is not INF else LogValue(5)
    s = LogValue(rand_frac(rng, 0, 5, 4))
    s = s if s <= cap else cap
    if gamma.s is INF and rng.random() < 0.1:
        return gamma
    return Disc(perturb(rng, gamma.center, s), s)


def rand_roots(rng: random.Random, n: int) -> List[HahnElement]:
    base = [rand_center(rng) for _ in range(rng.randint(1, n))]
    roots = []
    for _ in range(n):
        b = rng.choice(base)
        roots.append(b + rand_hahn(rng, DISC_P, 1, 0, 3, 2) if rng.random() < 0.7 else b)
    return roots


def satisfies_all(constraints, z) -> bool:
    for roots, lead, bound in constraints:
        v = val_sum(roots, lead, z)
        if v is not INF and v < LogValue.coerce(bound):
            return False
    return True
