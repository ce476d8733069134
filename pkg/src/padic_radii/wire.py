"""JSON wire format: exact numbers in, exact numbers out, with path-aware errors."""
from __future__ import annotations

from fractions import Fraction
from typing import Any, List

from .dwork import ASParameter
from .newton import ValuedPoly
from .plfun import Interval, PLFun
from .scalars import INF, HahnElement, LogValue

__all__ = ["WireError", "dec_rational", "dec_logvalue", "enc_logvalue", "enc_value"]


class WireError(ValueError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path
        self.msg = msg


def _int(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise WireError(path, f"expected an integer, got {x!r}")
    return x


def _list(x: Any, path: str) -> list:
    if not isinstance(x, list):
        raise WireError(path, f"expected a list, got {type(x).__name__}")
    return x


def _frac(num: Any, den: Any, path: str) -> Fraction:
    n, d = _int(num, path), _int(den, path)
    if d == 0:
        raise WireError(path, "zero denominator")
    return Fraction(n, d)


def dec_rational(x: Any, path: str) -> Fraction:
    """int or [num, den]."""
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    xs = _list(x, path)
    if len(xs) != 2:
        raise WireError(path, "a rational is an integer or [num, den]")
    return _frac(xs[0], xs[1], path)


def dec_logvalue(x: Any, path: str) -> LogValue:
    """int, [a, b] meaning a + b*sqrt2, or [a_num, a_den, b_num, b_den]."""
    if isinstance(x, int) and not isinstance(x, bool):
        return LogValue(x)
    xs = _list(x, path)
    if len(xs) == 2:
        return LogValue(_int(xs[0], path), _int(xs[1], path))
    if len(xs) == 4:
        return LogValue(_frac(xs[0], xs[1], path), _frac(xs[2], xs[3], path))
    raise WireError(path, "a log value is an integer, [a, b] or [a_num, a_den, b_num, b_den]")


def dec_radius(x: Any, path: str):
    return INF if x == "inf" else dec_logvalue(x, path)


def dec_interval(x: Any, path: str) -> Interval:
    """[lo, hi] (closed) or {"lo": .., "hi": .., "closed": "[)"}."""
    if isinstance(x, list):
        if len(x) != 2:
            raise WireError(path, "an interval is [lo, hi]")
        lo, hi, fl = x[0], x[1], "[]"
    elif isinstance(x, dict):
        for key in ("lo", "hi"):
            if key not in x:
                raise WireError(f"{path}.{key}", "missing")
        lo, hi, fl = x["lo"], x["hi"], x.get("closed", "[]")
    else:
        raise WireError(path, "expected an interval")
    if fl not in ("[]", "[)", "(]", "()"):
        raise WireError(f"{path}.closed", f"bracket pair {fl!r} not one of [] [) (] ()")
    a, b = dec_logvalue(lo, f"{path}.lo"), dec_logvalue(hi, f"{path}.hi")
    try:
        return Interval(a, b, fl[0] == "[", fl[1] == "]")
    except ValueError as exc:
        raise WireError(path, str(exc)) from None


def dec_vpoly(x: Any, path: str) -> ValuedPoly:
    terms = []
    for k, t in enumerate(_list(x, path)):
        tp = f"{path}[{k}]"
        t = _list(t, tp)
        if len(t) != 2:
            raise WireError(tp, "a term is [exponent, valuation]")
        terms.append((_int(t[0], f"{tp}[0]"), dec_logvalue(t[1], f"{tp}[1]")))
    try:
        return ValuedPoly(terms)
    except ValueError as exc:
        raise WireError(path, str(exc)) from None


def dec_hahn(x: Any, path: str, p: int, m: int = 1) -> HahnElement:
    """[[coeff, exp_num, exp_den], ...]."""
    terms = []
    for k, t in enumerate(_list(x, path)):
        tp = f"{path}[{k}]"
        t = _list(t, tp)
        if len(t) != 3:
            raise WireError(tp, "a term is [coeff, exp_num, exp_den]")
        terms.append((_frac(t[1], t[2], tp), _int(t[0], f"{tp}[0]")))
    try:
        return HahnElement.of(p, terms, m)
    except ValueError as exc:
        raise WireError(path, str(exc)) from None


def dec_asparam(x: Any, path: str, p: int, m: int = 1) -> ASParameter:
    """[[x_exponent, hahn], ...]."""
    coeffs = []
    for k, t in enumerate(_list(x, path)):
        tp = f"{path}[{k}]"
        t = _list(t, tp)
        if len(t) != 2:
            raise WireError(tp, "a term is [x_exponent, coefficient]")
        coeffs.append((_int(t[0], f"{tp}[0]"), dec_hahn(t[1], f"{tp}[1]", p, m)))
    return ASParameter(p, coeffs, m)


def dec_knots(x: Any, path: str) -> List:
    out = []
    for k, kn in enumerate(_list(x, path)):
        kp = f"{path}[{k}]"
        kn = _list(kn, kp)
        if len(kn) != 2:
            raise WireError(kp, "a knot is [x, y]")
        out.append((dec_logvalue(kn[0], f"{kp}[0]"), dec_logvalue(kn[1], f"{kp}[1]")))
    return out


def enc_logvalue(v) -> Any:
    if v is INF:
        return "inf"
    v = LogValue.coerce(v)
    return [v.a.numerator, v.a.denominator, v.b.numerator, v.b.denominator]


def enc_hahn(h: HahnElement) -> list:
    return [[c, e.numerator, e.denominator] for e, c in h.terms]


def enc_asparam(u: ASParameter) -> list:
    return [[i, enc_hahn(c)] for i, c in u.coeffs]


def enc_knots(f: PLFun) -> list:
    return [[enc_logvalue(x), enc_logvalue(y)] for x, y in f.knots]


def enc_value(v) -> Any:
    """Best-effort exact encoding of nested library values."""
    if v is INF or isinstance(v, (LogValue, Fraction)):
        return enc_logvalue(v)
    if isinstance(v, HahnElement):
        return enc_hahn(v)
    if isinstance(v, (list, tuple)):
        return [enc_value(x) for x in v]
    if isinstance(v, dict):
        return {k: enc_value(x) for k, x in v.items()}
    return v
