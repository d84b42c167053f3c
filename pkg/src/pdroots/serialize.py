"""JSON interchange formats and CSV dumps.

Numbers are plain JSON decimals except infinities, written as ``"inf"`` /
``"-inf"``. Output is canonical (sorted keys, fixed indentation) so reading
and re-writing a file reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .atoms import Atom, GeometricTail, TranslateSum
from .branch import Branch, BranchFunction, PeriodicBranches
from .construct import ConstructionParams
from .roots import RootSet
from .support import Interval, PeriodicRule, SpecError, SupportSpec


def _num(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return float(v)


def _parse_num(v, what: str) -> float:
    if isinstance(v, str):
        if v in ("inf", "+inf"):
            return math.inf
        if v == "-inf":
            return -math.inf
        raise SpecError(f"{what}: unexpected string {v!r}")
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"{what}: number expected, got {v!r}")
    return float(v)


def _pair(v, what: str) -> tuple:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise SpecError(f"{what}: expected a [lo, hi] pair, got {v!r}")
    return _parse_num(v[0], what), _parse_num(v[1], what)


def _need(d: dict, key: str, what: str):
    if not isinstance(d, dict):
        raise SpecError(f"{what}: object expected")
    if key not in d:
        raise SpecError(f"{what}: missing key {key!r}")
    return d[key]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from exc


# -- support specs --------------------------------------------------------------

def spec_to_json(spec: SupportSpec) -> dict:
    gen = None
    if spec.generator is not None:
        gen = {"period": spec.generator.period, "width": spec.generator.width}
    return {"center": [_num(spec.center.lo), _num(spec.center.hi)],
            "positives": [[_num(iv.lo), _num(iv.hi)] for iv in spec.positives],
            "generator": gen}


def spec_from_json(d: dict) -> SupportSpec:
    center = Interval(*_pair(_need(d, "center", "spec"), "spec.center"))
    positives = d.get("positives") or []
    if not isinstance(positives, list):
        raise SpecError("spec.positives must be a list")
    pos = tuple(Interval(*_pair(p, "spec.positives")) for p in positives)
    gen = d.get("generator")
    rule = None
    if gen is not None:
        rule = PeriodicRule(_parse_num(_need(gen, "period", "spec.generator"), "period"),
                            _parse_num(_need(gen, "width", "spec.generator"), "width"))
    return SupportSpec(center, pos, rule)


# -- construction parameters ------------------------------------------------------

# request files may name the halving scale rule by its older token
_SCALE_ALIASES = {"eq57": "halving"}


def params_from_json(d: dict | None) -> ConstructionParams:
    d = d or {}
    known = {"alpha", "knot_margin", "alphas", "omega0_margin", "tail_ratio", "center_weights"}
    extra = set(d) - known
    if extra:
        raise SpecError(f"params: unknown keys {sorted(extra)}")
    kw = {}
    for key in ("alpha", "knot_margin", "omega0_margin", "tail_ratio"):
        if key in d:
            kw[key] = _parse_num(d[key], f"params.{key}")
    if "alphas" in d and d["alphas"] is not None:
        a = d["alphas"]
        if isinstance(a, str):
            kw["alphas"] = _SCALE_ALIASES.get(a, a)
        else:
            kw["alphas"] = tuple(_parse_num(v, "params.alphas") for v in a)
    if "center_weights" in d and d["center_weights"] is not None:
        kw["center_weights"] = tuple(_parse_num(v, "params.center_weights") for v in d["center_weights"])
    return ConstructionParams(**kw)


def params_to_json(p: ConstructionParams) -> dict:
    alphas = p.alphas if p.alphas is None or isinstance(p.alphas, str) else list(p.alphas)
    cw = None if p.center_weights is None else list(p.center_weights)
    return {"alpha": p.alpha, "knot_margin": p.knot_margin, "alphas": alphas,
            "omega0_margin": p.omega0_margin, "tail_ratio": p.tail_ratio, "center_weights": cw}


# -- branch functions ---------------------------------------------------------------

def _frac(q: Fraction) -> list:
    return [q.numerator, q.denominator]


def _parse_frac(v, what: str) -> Fraction:
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    if not isinstance(v, list) or len(v) != 2 or not all(isinstance(i, int) for i in v):
        raise SpecError(f"{what}: expected [numerator, denominator] integers, got {v!r}")
    if v[1] == 0:
        raise SpecError(f"{what}: zero denominator")
    return Fraction(v[0], v[1])


def _sum_to_json(u: TranslateSum) -> dict:
    tail = None
    if u.tail is not None:
        tail = {"base": u.tail.base, "spacing": u.tail.spacing, "ratio": u.tail.ratio}
    return {"atom": {"alpha": u.atom.alpha, "half_width": u.atom.half_width},
            "terms": [[c, s] for c, s in u.terms], "tail": tail}


def _sum_from_json(d: dict, what: str) -> TranslateSum:
    a = _need(d, "atom", what)
    atom = Atom(_parse_num(_need(a, "alpha", what), "alpha"),
                _parse_num(_need(a, "half_width", what), "half_width"))
    terms = tuple(_pair(t, f"{what}.terms") for t in d.get("terms") or [])
    tail = d.get("tail")
    if tail is not None:
        tail = GeometricTail(_parse_num(_need(tail, "base", what), "base"),
                             _parse_num(_need(tail, "spacing", what), "spacing"),
                             _parse_num(tail.get("ratio", 0.5), "ratio"))
    return TranslateSum(atom, terms, tail)


def branch_function_to_json(f: BranchFunction) -> dict:
    out = {"kind": "branch_function", "spec": spec_to_json(f.spec), "power": _frac(f.power),
           "center": _sum_to_json(f.center), "branches": [], "periodic": None}
    if f.periodic:
        pb = f.branches
        out["periodic"] = {"shape": _sum_to_json(pb.shape), "period": pb.period,
                           "lead_scale": pb.lead_scale, "scale_ratio": pb.scale_ratio,
                           "phases": [[j, *_frac(p)] for j, p in pb.phases]}
    else:
        out["branches"] = [{"scale": br.scale, "shape": _sum_to_json(br.shape),
                            "phase": _frac(br.phase)} for br in f.branches]
    return out


def branch_function_from_json(d: dict) -> BranchFunction:
    if not isinstance(d, dict) or d.get("kind") != "branch_function":
        raise SpecError("not a serialized branch function (kind != 'branch_function')")
    spec = spec_from_json(_need(d, "spec", "function"))
    power = _parse_frac(_need(d, "power", "function"), "power")
    center = _sum_from_json(_need(d, "center", "function"), "center")
    per = d.get("periodic")
    if per is not None:
        phases = []
        for item in per.get("phases") or []:
            if not isinstance(item, list) or len(item) != 3:
                raise SpecError("periodic.phases entries are [j, numerator, denominator]")
            phases.append((item[0], Fraction(item[1], item[2])))
        branches = PeriodicBranches(_sum_from_json(_need(per, "shape", "periodic"), "periodic.shape"),
                                    _parse_num(_need(per, "period", "periodic"), "period"),
                                    _parse_num(_need(per, "lead_scale", "periodic"), "lead_scale"),
                                    _parse_num(_need(per, "scale_ratio", "periodic"), "scale_ratio"),
                                    tuple(phases))
    else:
        branches = tuple(
            Branch(_parse_num(_need(b, "scale", "branch"), "scale"),
                   _sum_from_json(_need(b, "shape", "branch"), "branch.shape"),
                   _parse_frac(b.get("phase", 0), "branch.phase"))
            for b in d.get("branches") or [])
    return BranchFunction(spec, center, branches, power)


# -- reports -----------------------------------------------------------------------

def rootset_report(rs: RootSet) -> dict:
    from .roots import distinct_count

    return {"n": rs.n, "k": rs.k, "bound": rs.bound, "verified": distinct_count(rs),
            "unbounded_evidence": rs.unbounded,
            "roots": [{"pv": list(e.pv.entries) if e.pv is not None else None,
                       "pd_path": e.verdict.path} for e in rs.roots],
            "rejected": [{"pv": list(r.pv.entries), "pd_path": r.verdict.path,
                          "pd_passed": r.verdict.passed, "residual": r.residual,
                          "witness": r.verdict.witness} for r in rs.rejected]}


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def write_spectrum_csv(path, table: np.ndarray) -> None:
    write_csv(path, ["t", "bracket", "atom_factor", "value"], table)


def write_samples_csv(path, g, x) -> None:
    v = g(np.asarray(x, dtype=np.float64))
    write_csv(path, ["x", "re", "im", "abs"], np.column_stack([x, v.real, v.imag, np.abs(v)]))
