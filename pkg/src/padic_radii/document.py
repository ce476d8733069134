"""Problem documents: validation, task dispatch and report assembly."""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from . import berkovich as bk
from .diffmod import (
    CyclicOperator,
    RadiiProfile,
    RadiusMultiset,
    antecedent_exists,
    check_variation,
    descendant_multiset,
    descendant_sum_check,
    dwork_operator,
    dwork_profile,
    is_separated,
    profile_to_csv,
    radii_profile,
    robba_condition,
)
from .dwork import as_prepare, b1_along_path, b1_profile
from .newton import newton_polygon, parametric_hull
from .plfun import PLFun, to_csv
from .scalars import _is_prime
from .valuation import (
    WeightVector,
    _inverse,
    check_zariski,
    extend_invariants,
    monomial_invariants,
    zariski_matrix,
)
from .wire import (
    WireError,
    dec_asparam,
    dec_hahn,
    dec_interval,
    dec_knots,
    dec_logvalue,
    dec_radius,
    dec_vpoly,
    enc_asparam,
    enc_hahn,
    enc_knots,
    enc_logvalue,
    enc_value,
)

VERSION = "padic-radii/1"
OK, FAIL, INDETERMINATE = "ok", "fail", "indeterminate"


@dataclass
class Task:
    index: int
    kind: str
    p: int
    payload: Dict[str, Any]
    run: Callable[[], "TaskResult"]


@dataclass
class ProblemDocument:
    version: str
    p: int
    tasks: List[Task]


@dataclass
class TaskResult:
    status: str = OK
    outputs: Dict[str, Any] = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)
    csv: Dict[str, str] = field(default_factory=dict)
    plots: Dict[str, List[PLFun]] = field(default_factory=dict)


@dataclass
class Report:
    version: str
    results: List[TaskResult]
    kinds: List[str]

    @property
    def all_ok(self) -> bool:
        return all(r.status == OK for r in self.results)

    def to_json(self, timestamp: Optional[str] = None) -> str:
        doc: Dict[str, Any] = {"version": self.version}
        if timestamp is not None:
            doc["generated_at"] = timestamp
        doc["tasks"] = [
            {
                "index": i,
                "kind": kind,
                "status": r.status,
                "outputs": r.outputs,
                "csv": r.csv,
                "diagnostics": r.diagnostics,
            }
            for i, (kind, r) in enumerate(zip(self.kinds, self.results))
        ]
        return json.dumps(doc, indent=2) + "\n"


def _tri(v: Optional[bool]) -> str:
    return OK if v is True else FAIL if v is False else INDETERMINATE


def _worst(*statuses: str) -> str:
    if FAIL in statuses:
        return FAIL
    if INDETERMINATE in statuses:
        return INDETERMINATE
    return OK


# task builders: each validates its payload and returns a thunk -------------


def _need(payload: dict, key: str, path: str):
    if key not in payload:
        raise WireError(f"{path}.{key}", "missing")
    return payload[key]


def _profile_outputs(res: TaskResult, prof: RadiiProfile):
    res.csv["profile"] = profile_to_csv(prof)
    res.outputs["exact"] = [prof.exact(k) is not None for k in range(prof.rank)]
    res.plots["profile"] = [pc.lower for pcs in prof.entries for pc in pcs] + [
        pc.upper for pcs in prof.entries for pc in pcs if not pc.exact
    ]


def _build_radii(t: dict, path: str, p: int):
    dom = dec_interval(_need(t, "interval", path), f"{path}.interval")
    if "op" in t:
        coeffs = [dec_vpoly(c, f"{path}.op[{k}]") for k, c in enumerate(_need(t, "op", path))]
        try:
            op = CyclicOperator(p, tuple(coeffs))
        except ValueError as exc:
            raise WireError(f"{path}.op", str(exc)) from None
    else:
        op = dwork_operator(p, dec_vpoly(_need(t, "r", path), f"{path}.r"))

    def run():
        res = TaskResult()
        prof = radii_profile(op, dom)
        _profile_outputs(res, prof)
        return res

    return run


def _build_dwork(t: dict, path: str, p: int):
    r = dec_vpoly(_need(t, "r", path), f"{path}.r")
    dom = dec_interval(_need(t, "interval", path), f"{path}.interval")

    def run():
        res = TaskResult()
        f = dwork_profile(p, r, dom)
        res.outputs["knots"] = enc_knots(f)
        res.csv["profile"] = to_csv(f)
        res.plots["profile"] = [f]
        return res

    return run


def _field_degree(t: dict, path: str) -> int:
    m = t.get("m", 1)
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise WireError(f"{path}.m", "field degree must be a positive integer")
    return m


def _build_b1(t: dict, path: str, p: int):
    m = _field_degree(t, path)
    u = dec_asparam(_need(t, "u", path), f"{path}.u", p, m)
    dom = dec_interval(_need(t, "interval", path), f"{path}.interval")

    def run():
        res = TaskResult()
        f = b1_profile(u, dom)
        res.outputs["knots"] = enc_knots(f)
        res.csv["b1"] = to_csv(f)
        res.plots["b1"] = [f]
        return res

    return run


def _build_b1path(t: dict, path: str, p: int):
    m = _field_degree(t, path)
    u = dec_asparam(_need(t, "u", path), f"{path}.u", p, m)
    z = dec_hahn(_need(t, "z", path), f"{path}.z", p, m)
    win = dec_interval(_need(t, "window", path), f"{path}.window")

    def run():
        res = TaskResult()
        pp = b1_along_path(u, z, win)
        res.outputs["knots"] = enc_knots(pp.b1)
        res.outputs["terminal_slope"] = enc_logvalue(pp.terminal_slope)
        res.csv["b1"] = to_csv(pp.b1)
        res.plots["b1"] = [pp.b1]
        return res

    return run


def _build_prepare(t: dict, path: str, p: int):
    m = _field_degree(t, path)
    u = dec_asparam(_need(t, "u", path), f"{path}.u", p, m)

    def run():
        prepared, dropped = as_prepare(u)
        return TaskResult(outputs={"prepared": enc_asparam(prepared), "dropped": enc_hahn(dropped)})

    return run


def _build_newton(t: dict, path: str, p: int):
    if "points" in t:
        pts = dec_knots(t["points"], f"{path}.points")
        for k, (i, _) in enumerate(pts):
            if not i.is_rational or i.as_rational().denominator != 1:
                raise WireError(f"{path}.points[{k}][0]", "abscissa must be an integer")

        def run():
            poly = newton_polygon((int(i.as_rational()), v) for i, v in pts)
            return TaskResult(outputs={"slopes": [[enc_logvalue(s), w] for s, w in poly]})

        return run
    polys = [None if c is None else dec_vpoly(c, f"{path}.polys[{k}]") for k, c in enumerate(_need(t, "polys", path))]
    dom = dec_interval(_need(t, "interval", path), f"{path}.interval")

    def run():
        hull = parametric_hull(polys, dom)
        cells = []
        for c in hull.cells:
            cells.append(
                {
                    "lo": enc_logvalue(c.lo),
                    "hi": enc_logvalue(c.hi),
                    "vertices": list(c.vertices),
                    "edges": [[enc_knots(fn), w] for fn, w in c.edges],
                }
            )
        return TaskResult(outputs={"cells": cells})

    return run


def _build_descend(t: dict, path: str, p: int):
    r = dec_logvalue(_need(t, "r", path), f"{path}.r")
    vals = [dec_logvalue(v, f"{path}.values[{k}]") for k, v in enumerate(_need(t, "values", path))]

    def run():
        ms = RadiusMultiset(r, tuple(vals))
        out = descendant_multiset(ms, p)
        res = TaskResult(outputs={"r": enc_logvalue(out.r), "values": enc_value(list(out.values))})
        checks = []
        statuses = []
        for i in range(1, len(ms) + 1):
            chk = descendant_sum_check(ms, out, i, p)
            checks.append({"i": i, "holds": chk.ok, "reason": chk.reason})
            if chk.ok is not None:
                statuses.append(_tri(chk.ok))
        res.outputs["sum_checks"] = checks
        res.outputs["size_ok"] = len(out) == p * len(ms)
        res.status = _worst(OK if res.outputs["size_ok"] else FAIL, *statuses)
        return res

    return run


def _build_zariski(t: dict, path: str, p: int):
    c = [dec_logvalue(v, f"{path}.c[{k}]") for k, v in enumerate(_need(t, "c", path))]
    r = _need(t, "r", path)
    if isinstance(r, bool) or not isinstance(r, int):
        raise WireError(f"{path}.r", "expected an integer")

    def run():
        A = zariski_matrix(c, r)
        Ac = [sum((a * x for a, x in zip(row, c)), c[0] * 0) for row in A]
        return TaskResult(
            outputs={
                "matrix": A,
                "inverse": _inverse(A),
                "image": enc_value(Ac),
                "verified": check_zariski(A, c, r),
            }
        )

    return run


def _point(x: Any, path: str, p: int, m: int):
    if not isinstance(x, dict):
        raise WireError(path, "a point is an object")
    if "sequence" in x:
        discs = [_point(d, f"{path}.sequence[{k}]", p, m) for k, d in enumerate(x["sequence"])]
        try:
            return bk.SeqPrefix(tuple(discs))
        except ValueError as exc:
            raise WireError(path, str(exc)) from None
    center = dec_hahn(_need(x, "center", path), f"{path}.center", p, m)
    s = dec_radius(_need(x, "s", path), f"{path}.s")
    try:
        return bk.Disc(center, s)
    except ValueError as exc:
        raise WireError(path, str(exc)) from None


def _enc_point(a) -> dict:
    if isinstance(a, bk.SeqPrefix):
        return {"sequence": [_enc_point(d) for d in a.discs]}
    return {"center": enc_hahn(a.center), "s": enc_logvalue(a.s)}


def _build_berkovich(t: dict, path: str, p: int):
    m = _field_degree(t, path)
    op = _need(t, "op", path)
    ops = ("dominates", "meet", "classify", "path_point", "disjoint_discs", "union_discs")
    if op not in ops:
        raise WireError(f"{path}.op", f"unknown operation {op!r}; permitted: {', '.join(ops)}")
    pt = lambda key: _point(_need(t, key, path), f"{path}.{key}", p, m)

    if op == "dominates":
        a, b = pt("alpha"), pt("beta")

        def run():
            try:
                return TaskResult(outputs={"dominates": bk.dominates(a, b)})
            except bk.Undecidable as exc:
                return TaskResult(INDETERMINATE, {"dominates": None}, [f"undecidable from prefix: {exc}"])

        return run
    if op == "meet":
        a, b = pt("alpha"), pt("beta")
        return lambda: TaskResult(outputs={"meet": _enc_point(bk.meet(a, b))})
    if op == "classify":
        a = pt("alpha")
        return lambda: TaskResult(outputs={"type": bk.classify(a)})
    if op == "path_point":
        a = pt("alpha")
        s = dec_logvalue(_need(t, "s", path), f"{path}.s")
        return lambda: TaskResult(outputs={"point": _enc_point(bk.path_point(a, s))})

    def roots_of(x, rp):
        return [dec_hahn(z, f"{rp}[{k}]", p, m) for k, z in enumerate(x)]

    if op == "disjoint_discs":
        roots = roots_of(_need(t, "roots", path), f"{path}.roots")
        lead = dec_logvalue(t.get("lead_val", 0), f"{path}.lead_val")
        z1 = _need(t, "z1_index", path)
        s1 = dec_logvalue(_need(t, "s1", path), f"{path}.s1")
        z2 = dec_hahn(_need(t, "z2", path), f"{path}.z2", p, m)

        def run():
            rep = bk.check_disjoint_discs(roots, lead, z1, s1, z2)
            status = _tri(rep.holds)
            return TaskResult(
                status,
                {
                    "hypothesis": rep.hypothesis,
                    "holds": rep.holds,
                    "value_at_z2": enc_value(rep.value_at_z2),
                    "norm_at_disc": enc_value(rep.norm_at_disc),
                },
                [rep.reason] if rep.reason else [],
            )

        return run
    cons = []
    for k, cdoc in enumerate(_need(t, "constraints", path)):
        cp = f"{path}.constraints[{k}]"
        cons.append(
            (
                roots_of(_need(cdoc, "roots", cp), f"{cp}.roots"),
                dec_logvalue(cdoc.get("lead_val", 0), f"{cp}.lead_val"),
                dec_logvalue(_need(cdoc, "bound", cp), f"{cp}.bound"),
            )
        )

    def run():
        ds = bk.union_discs(cons, p, m)
        return TaskResult(outputs={"discs": [_enc_point(d) for d in ds.discs]})

    return run


def _build_invariants(t: dict, path: str, p: int):
    ws = [dec_logvalue(w, f"{path}.weights[{k}]") for k, w in enumerate(_need(t, "weights", path))]
    try:
        wv = WeightVector(tuple(ws))
    except ValueError as exc:
        raise WireError(f"{path}.weights", str(exc)) from None
    steps = t.get("steps", [])
    for k, s in enumerate(steps):
        if s not in ("i", "ii", "iii", "iv"):
            raise WireError(f"{path}.steps[{k}]", f"point type {s!r} not one of i, ii, iii, iv")

    def run():
        inv = monomial_invariants(wv)
        chain = [inv.as_list()]
        for s in steps:
            inv = extend_invariants(inv, s)
            chain.append(inv.as_list())
        return TaskResult(outputs={"monomial": chain[0], "chain": chain})

    return run


def _build_check(t: dict, path: str, p: int):
    dom = dec_interval(_need(t, "domain", path), f"{path}.domain")
    funcs = []
    for k, e in enumerate(_need(t, "entries", path)):
        kn = dec_knots(e, f"{path}.entries[{k}]")
        try:
            funcs.append(PLFun(dom, kn))
        except ValueError as exc:
            raise WireError(f"{path}.entries[{k}]", str(exc)) from None
    if not funcs:
        raise WireError(f"{path}.entries", "at least one entry is required")
    checks = t.get("checks", ["variation"])
    known = ("variation", "robba", "antecedent", "separated")
    for k, c in enumerate(checks):
        if c not in known:
            raise WireError(f"{path}.checks[{k}]", f"unknown check {c!r}; permitted: {', '.join(known)}")
    zero_end = bool(t.get("has_zero_endpoint", False))

    def run():
        prof = RadiiProfile.from_exact(p, funcs)
        res = TaskResult()
        statuses = []
        for c in checks:
            if c == "variation":
                rep = check_variation(prof, zero_end)
                res.outputs["variation"] = {
                    "slopes": rep.slopes,
                    "transfer": rep.transfer,
                    "convexity": rep.convexity,
                    "lower_bound": rep.lower_bound,
                }
                res.diagnostics.extend(rep.details)
                statuses.append(_tri(rep.passed))
            elif c == "robba":
                v = robba_condition(prof)
                res.outputs["robba"] = v
                statuses.append(_tri(v))
            elif c == "antecedent":
                v = antecedent_exists(prof)
                res.outputs["antecedent"] = v
                statuses.append(_tri(v))
            else:
                seps = [is_separated(prof, i) for i in range(1, prof.rank)]
                res.outputs["separated"] = seps
        res.status = _worst(*statuses)
        return res

    return run


BUILDERS: Dict[str, Callable] = {
    "radii": _build_radii,
    "dwork": _build_dwork,
    "b1": _build_b1,
    "b1path": _build_b1path,
    "prepare": _build_prepare,
    "newton": _build_newton,
    "descend": _build_descend,
    "zariski": _build_zariski,
    "berkovich": _build_berkovich,
    "invariants": _build_invariants,
    "check": _build_check,
}


def _prime(x: Any, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or not _is_prime(x):
        raise WireError(path, f"expected a prime, got {x!r}")
    return x


def load_document(text: str) -> ProblemDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WireError("$", f"malformed JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise WireError("$", "document must be a JSON object")
    version = raw.get("version")
    if version != VERSION:
        raise WireError("version", f"unrecognized version {version!r}; expected {VERSION!r}")
    p = _prime(raw.get("p"), "p")
    tasks = []
    for k, t in enumerate(_list_of_tasks(raw)):
        path = f"tasks[{k}]"
        if not isinstance(t, dict):
            raise WireError(path, "a task is an object")
        kind = t.get("kind")
        if kind not in BUILDERS:
            raise WireError(f"{path}.kind", f"unknown task {kind!r}; permitted: {', '.join(BUILDERS)}")
        tp = _prime(t["p"], f"{path}.p") if "p" in t else p
        tasks.append(Task(k, kind, tp, t, BUILDERS[kind](t, path, tp)))
    return ProblemDocument(version, p, tasks)


def _list_of_tasks(raw: dict) -> list:
    tasks = raw.get("tasks")
    if not isinstance(tasks, list):
        raise WireError("tasks", "expected a list of tasks")
    return tasks


def _run_one(task: Task) -> TaskResult:
    try:
        return task.run()
    except (ValueError, ArithmeticError) as exc:
        return TaskResult(FAIL, {}, [f"{type(exc).__name__}: {exc}"])


def thread_cap() -> int:
    env = os.environ.get("PADIC_RADII_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def execute(doc: ProblemDocument, threads: Optional[int] = None) -> Report:
    n = threads or thread_cap()
    if n <= 1 or len(doc.tasks) <= 1:
        results = [_run_one(t) for t in doc.tasks]
    else:
        with ThreadPoolExecutor(max_workers=min(n, len(doc.tasks))) as pool:
            results = list(pool.map(_run_one, doc.tasks))
    return Report(doc.version, results, [t.kind for t in doc.tasks])
