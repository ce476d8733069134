"""Rank, residue-degree and defect bookkeeping for real valuations.

Values live in Q(sqrt2), so a list of values spans a Q-space of dimension at
most two; every value is handled as its rational coordinate pair (a, b).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import List, Sequence, Tuple

from .scalars import LogValue

__all__ = [
    "WeightVector",
    "InvariantTuple",
    "rational_rank",
    "monomial_invariants",
    "extend_invariants",
    "zariski_matrix",
    "check_zariski",
]

Matrix = List[List[int]]


@dataclass(frozen=True)
class WeightVector:
    weights: Tuple[LogValue, ...]

    def __post_init__(self):
        ws = tuple(LogValue.coerce(w) for w in self.weights)
        if not ws:
            raise ValueError("a weight vector needs at least one weight")
        for k, w in enumerate(ws):
            if not w > 0:
                raise ValueError(f"weight {k} = {w} must be positive")
        object.__setattr__(self, "weights", ws)


@dataclass(frozen=True)
class InvariantTuple:
    trdeg: int
    ratrank: int
    restrdeg: int
    defect: int

    def __post_init__(self):
        if min(self.trdeg, self.ratrank, self.restrdeg) < 0:
            raise ValueError("invariants are nonnegative")
        if self.defect != self.trdeg - self.ratrank - self.restrdeg or self.defect < 0:
            raise ValueError(f"inconsistent invariants {self}")

    @classmethod
    def of(cls, trdeg: int, ratrank: int, restrdeg: int) -> "InvariantTuple":
        return cls(trdeg, ratrank, restrdeg, trdeg - ratrank - restrdeg)

    def as_list(self) -> List[int]:
        return [self.trdeg, self.ratrank, self.restrdeg, self.defect]


def _coords(values: Sequence) -> List[Tuple[Fraction, Fraction]]:
    return [(v.a, v.b) for v in (LogValue.coerce(x) for x in values)]


def rational_rank(values: Sequence) -> int:
    """Dimension of the Q-span of the values."""
    vs = [v for v in _coords(values) if v != (0, 0)]
    if not vs:
        return 0
    a0, b0 = vs[0]
    return 1 if all(a * b0 - b * a0 == 0 for a, b in vs) else 2


def monomial_invariants(w: WeightVector) -> InvariantTuple:
    n = len(w.weights)
    rk = rational_rank(w.weights)
    return InvariantTuple.of(n, rk, n - rk)


def extend_invariants(base: InvariantTuple, point_type: str) -> InvariantTuple:
    t = point_type.lower().replace("iv-prefix", "iv")
    if t not in ("i", "ii", "iii", "iv"):
        raise ValueError(f"unknown point type {point_type!r}")
    return InvariantTuple.of(
        base.trdeg + 1,
        base.ratrank + (t == "iii"),
        base.restrdeg + (t == "ii"),
    )


# integer linear algebra -------------------------------------------------------


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _det(M: Matrix) -> Fraction:
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def _inverse(M: Matrix) -> Matrix:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        A[c] = [x / A[c][c] for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    inv = [row[n:] for row in A]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def _row_reduce_to_identity(Bp: Matrix) -> Matrix:
    """U in GL_s(Z) with U Bp = [I_r; 0], for an s x r matrix with surjective transpose."""
    s, r = len(Bp), len(Bp[0])
    W = [list(row) for row in Bp]
    U = _identity(s)

    def swap(i, j):
        W[i], W[j] = W[j], W[i]
        U[i], U[j] = U[j], U[i]

    def addrow(dst, src, k):
        W[dst] = [x + k * y for x, y in zip(W[dst], W[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def negate(i):
        W[i] = [-x for x in W[i]]
        U[i] = [-x for x in U[i]]

    for c in range(r):
        while True:
            rows = [i for i in range(c, s) if W[i][c] != 0]
            if not rows:
                raise ValueError("columns are not part of a unimodular basis")
            piv = min(rows, key=lambda i: abs(W[i][c]))
            swap(c, piv)
            if W[c][c] < 0:
                negate(c)
            done = True
            for i in range(c + 1, s):
                if W[i][c]:
                    addrow(i, c, -(W[i][c] // W[c][c]))
                    done = done and W[i][c] == 0
            if done:
                break
        if W[c][c] != 1:
            raise ValueError("columns are not part of a unimodular basis")
        for i in range(c):
            if W[i][c]:
                addrow(i, c, -W[i][c])
    return U


# lattice basis of the value group ---------------------------------------------


def _rank1_basis(c: List[LogValue]) -> Tuple[LogValue, Matrix]:
    ratios = [x / c[0] for x in c]
    qs = [q.as_rational() for q in ratios]
    g_num = 0
    for q in qs:
        g_num = gcd(g_num, q.numerator)
    g_den = lcm(*(q.denominator for q in qs))
    g = Fraction(g_num, g_den)
    y = c[0] * g
    return y, [[int(q / g)] for q in qs]


def _lattice_basis(vecs: List[Tuple[Fraction, Fraction]]):
    """Z-basis (two rational vectors) of the lattice spanned by rank-2 vectors."""
    D = lcm(*(x.denominator for v in vecs for x in v))
    cols = [[int(x * D) for x in v] for v in vecs]
    # column HNF on the 2 x s integer matrix
    basis: List[List[int]] = []
    work = [list(v) for v in cols]
    for row in range(2):
        while True:
            nz = [v for v in work if v[row] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda v: abs(v[row]))
            piv = nz[0]
            for v in nz[1:]:
                q = v[row] // piv[row]
                v[0] -= q * piv[0]
                v[1] -= q * piv[1]
        nz = [v for v in work if v[row] != 0]
        if nz:
            basis.append(nz[0])
            work = [v for v in work if v is not nz[0]]
    return [(Fraction(v[0], D), Fraction(v[1], D)) for v in basis]


def _solve2(e1, e2, v) -> Tuple[int, int]:
    det = e1[0] * e2[1] - e1[1] * e2[0]
    m = (v[0] * e2[1] - v[1] * e2[0]) / det
    n = (e1[0] * v[1] - e1[1] * v[0]) / det
    assert m.denominator == 1 and n.denominator == 1
    return int(m), int(n)


def _rank2_basis(c: List[LogValue]) -> Tuple[List[LogValue], Matrix]:
    vecs = _coords(c)
    e1, e2 = _lattice_basis(vecs)
    E1, E2 = LogValue(*e1), LogValue(*e2)
    pts = [_solve2(e1, e2, v) for v in vecs]

    def phi(v):
        return v[0] * E1 + v[1] * E2

    # convergents of the kernel slope -E2/E1 sandwich the line phi = 0
    alpha = -E2 / E1
    h0, k0, h1, k1 = 1, 0, alpha.floor(), 1
    x = alpha
    while True:
        for u, w in (((h0, k0), (h1, k1)),):
            y1 = u if phi(u) > 0 else (-u[0], -u[1])
            y2 = w if phi(w) > 0 else (-w[0], -w[1])
            coeffs = [_solve_int(y1, y2, pt) for pt in pts]
            if all(cf is not None and cf[0] >= 0 and cf[1] >= 0 for cf in coeffs):
                return [phi(y1), phi(y2)], [list(cf) for cf in coeffs]
        frac = x - x.floor()
        x = 1 / frac
        a = x.floor()
        h0, k0, h1, k1 = h1, k1, a * h1 + h0, a * k1 + k0


def _solve_int(y1, y2, v):
    det = y1[0] * y2[1] - y1[1] * y2[0]
    m = Fraction(v[0] * y2[1] - v[1] * y2[0], det)
    n = Fraction(y1[0] * v[1] - y1[1] * v[0], det)
    if m.denominator != 1 or n.denominator != 1:
        return None
    return int(m), int(n)


def check_zariski(A: Matrix, c: Sequence, r: int) -> bool:
    c = [LogValue.coerce(x) for x in c]
    s = len(c)
    if len(A) != s or any(len(row) != s for row in A):
        return False
    if abs(_det(A)) != 1:
        return False
    if any(x < 0 for row in _inverse(A) for x in row):
        return False
    Ac = [sum((a * x for a, x in zip(row, c)), LogValue(0)) for row in A]
    return all(v > 0 for v in Ac[:r]) and all(v == 0 for v in Ac[r:])


def zariski_matrix(c: Sequence, r: int) -> Matrix:
    """Unimodular A with nonnegative inverse sending c to (positive basis values, 0, ..., 0)."""
    c = [LogValue.coerce(x) for x in c]
    s = len(c)
    if not 1 <= r <= s:
        raise ValueError(f"r = {r} must lie in [1, {s}]")
    for k, x in enumerate(c):
        if not x > 0:
            raise ValueError(f"c[{k}] = {x} must be positive")
    if rational_rank(c[:r]) != r or rational_rank(c) != r:
        raise ValueError(f"the first {r} values must be a Q-basis of the span")
    if r == s:
        return _identity(s)
    if r == 1:
        _, Bp = _rank1_basis(c)
    else:
        _, Bp = _rank2_basis(c)
    U = _row_reduce_to_identity(Bp)
    B = _inverse(U)
    colsum = [sum(B[i][k] for k in range(r)) for i in range(s)]
    for j in range(r, s):
        need = max((-B[i][j] + colsum[i] - 1) // colsum[i] for i in range(s))
        need = max(need, 0)
        for i in range(s):
            B[i][j] += need * colsum[i]
    A = _inverse(B)
    if not check_zariski(A, c, r):
        raise AssertionError("constructed matrix fails verification")
    return A
