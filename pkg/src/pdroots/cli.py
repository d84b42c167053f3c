"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 verification failure,
4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import serialize as ser
from .construct import construct_f, example_f1, example_f2
from .roots import (CapExceeded, enumerate_roots, has_closed_spectrum, pd_verdict, root_residual,
                    verify_root)
from .spectrum import bochner_check, gram_search, default_bochner_grid, spectrum_of, spectrum_table
from .support import SpecError, build_support_spec, sample_grid

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFY = 3
EXIT_CAP = 4


@dataclass
class RunReport:
    command: str
    input_digest: str
    seconds: float = 0.0
    verdicts: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    exit_code: int = EXIT_OK

    def to_json(self) -> dict:
        return asdict(self)


def _digest(*paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        if p is not None:
            h.update(Path(p).read_bytes())
    return h.hexdigest()


def _load_spec(d: dict):
    if "intervals" in d:
        return build_support_spec([ser._pair(iv, "intervals") for iv in d["intervals"]])
    return ser.spec_from_json(d)


def _load_function(path):
    return ser.branch_function_from_json(ser.read_json(path))


def cmd_construct(spec_file, params_file=None, n=None, out_file=None) -> RunReport:
    t0 = time.perf_counter()
    doc = ser.read_json(spec_file)
    if isinstance(doc, dict) and "spec" in doc:
        spec_doc, params_doc = doc["spec"], doc.get("params")
        n = n if n is not None else doc.get("n")
    else:
        spec_doc, params_doc = doc, None
    if params_file is not None:
        params_doc = ser.read_json(params_file)
    if n is None:
        raise SpecError("n is required (flag --n or request field 'n')")
    spec = _load_spec(spec_doc)
    f = construct_f(spec, int(n), ser.params_from_json(params_doc))
    rep = RunReport("construct", _digest(spec_file, params_file))
    if out_file is not None:
        ser.write_json(ser.branch_function_to_json(f), out_file)
        rep.outputs.append(str(out_file))
    rep.counts = {"k": spec.k, "components": spec.component_count if spec.finite else "inf", "n": int(n)}
    rep.seconds = time.perf_counter() - t0
    return rep


def cmd_roots(f_file, n=None, cap=4096, out_file=None, seed=0, tol=1e-12, grid_step=None,
              csv_dir=None) -> RunReport:
    t0 = time.perf_counter()
    f = _load_function(f_file)
    if n is None:
        if f.power.denominator != 1 or f.power < 2:
            raise SpecError("--n is required when f's power is not an integer >= 2")
        n = int(f.power)
    rs = enumerate_roots(f, int(n), cap, seed=seed, tol=tol, grid_step=grid_step)
    report = ser.rootset_report(rs)
    rep = RunReport("roots", _digest(f_file))
    rep.counts = {"verified": report["verified"], "bound": report["bound"],
                  "rejected": len(report["rejected"])}
    rep.verdicts = [e.verdict.to_json() for e in rs.roots]
    if out_file is not None:
        ser.write_json(report, out_file)
        rep.outputs.append(str(out_file))
    if csv_dir is not None:
        d = Path(csv_dir)
        d.mkdir(parents=True, exist_ok=True)
        x = sample_grid(f.spec, max_index=max(f.max_phase_index, 4) + 4)
        for e in rs.roots:
            name = d / ("root_" + ("_".join(map(str, e.pv.entries)) or "principal") + ".csv")
            ser.write_samples_csv(name, e.g, x)
            rep.outputs.append(str(name))
    rep.seconds = time.perf_counter() - t0
    return rep


def cmd_verify(g_file, f_file, n, tol=1e-12, seed=0) -> RunReport:
    g, f = _load_function(g_file), _load_function(f_file)
    verdict = pd_verdict(g, np.random.default_rng(seed))
    ok = verify_root(g, f, int(n), tol, verdict=verdict)
    rep = RunReport("verify", _digest(g_file, f_file), verdicts=[verdict.to_json()])
    rep.counts = {"verified": int(ok), "residual": root_residual(g, f, int(n))}
    if not ok:
        rep.exit_code = EXIT_VERIFY
    return rep


def cmd_check(f_file, mode="both", out_file=None, seed=0, grid_step=None, trials=100,
              spectrum_csv=None) -> RunReport:
    f = _load_function(f_file)
    rep = RunReport("check", _digest(f_file))
    verdicts = []
    if mode == "bochner" and not has_closed_spectrum(f):
        raise SpecError("no closed-form spectrum (needs power 1 and one atom with exponent >= 1)")
    if mode == "both" and not has_closed_spectrum(f):
        mode = "gram"
    if mode in ("bochner", "both"):
        s = spectrum_of(f)
        verdicts.append(bochner_check(s, grid_step))
        if spectrum_csv is not None:
            step, tm = default_bochner_grid(s)
            step = grid_step or step
            ser.write_spectrum_csv(spectrum_csv, spectrum_table(s, np.arange(0.0, tm + step / 2, step)))
            rep.outputs.append(str(spectrum_csv))
    if mode in ("gram", "both"):
        span = f.spec.extent(max_index=max(f.max_phase_index, 4) + 4)
        verdicts.append(gram_search(f, np.random.default_rng(seed), trials, 12, span))
    rep.verdicts = [v.to_json() for v in verdicts]
    rep.counts = {"passed": sum(v.passed for v in verdicts), "checks": len(verdicts)}
    if out_file is not None:
        ser.write_json(rep.verdicts[0] if len(verdicts) == 1 else rep.verdicts, out_file)
        rep.outputs.append(str(out_file))
    if not all(v.passed for v in verdicts):
        rep.exit_code = EXIT_VERIFY
    return rep


def cmd_example(which, n, a=16.0, out_file=None) -> RunReport:
    f = example_f1(int(n)) if which == "f1" else example_f2(int(n), float(a))
    rep = RunReport("example", hashlib.sha256(f"{which}:{n}:{a}".encode()).hexdigest())
    if out_file is not None:
        ser.write_json(ser.branch_function_to_json(f), out_file)
        rep.outputs.append(str(out_file))
    rep.counts = {"k": f.spec.k, "components": f.spec.component_count, "n": int(n)}
    return rep


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdroots", description=__doc__.splitlines()[0])
    p.add_argument("--report", help="write the run report JSON here")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build an n-divisible f for a support spec")
    c.add_argument("spec_file")
    c.add_argument("--params", dest="params_file")
    c.add_argument("--n", type=int)
    c.add_argument("--out", required=True)

    r = sub.add_parser("roots", help="enumerate the verified n-th roots of f")
    r.add_argument("f_file")
    r.add_argument("--n", type=int)
    r.add_argument("--cap", type=int, default=4096)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--tol", type=float, default=1e-12)
    r.add_argument("--grid-step", type=float)
    r.add_argument("--csv-dir")
    r.add_argument("--out")

    v = sub.add_parser("verify", help="check g^n = f and that g is positive definite")
    v.add_argument("g_file")
    v.add_argument("f_file")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--tol", type=float, default=1e-12)
    v.add_argument("--seed", type=int, default=0)

    k = sub.add_parser("check", help="positive-definiteness verdicts for one function")
    k.add_argument("f_file")
    k.add_argument("--mode", choices=["bochner", "gram", "both"], default="both")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--grid-step", type=float)
    k.add_argument("--trials", type=int, default=100)
    k.add_argument("--spectrum-csv")
    k.add_argument("--out")

    e = sub.add_parser("example", help="write one of the packaged examples")
    e.add_argument("which", choices=["f1", "f2"])
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--a", type=float, default=16.0)
    e.add_argument("--out", required=True)
    return p


def _summary(rep: RunReport) -> str:
    c = rep.counts
    if rep.command == "roots":
        bound = "inf" if c["bound"] is None else c["bound"]
        return f"verified={c['verified']} bound={bound}"
    if rep.command in ("construct", "example"):
        return f"k={c['k']} components={c['components']}"
    if rep.command == "verify":
        return f"verified={'true' if c['verified'] else 'false'} residual={c['residual']:.3e}"
    return " ".join(f"{v['path']}={'pass' if v['passed'] else 'fail'}" for v in rep.verdicts)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "construct":
            rep = cmd_construct(args.spec_file, args.params_file, args.n, args.out)
        elif args.command == "roots":
            rep = cmd_roots(args.f_file, args.n, args.cap, args.out, args.seed, args.tol,
                            args.grid_step, args.csv_dir)
        elif args.command == "verify":
            rep = cmd_verify(args.g_file, args.f_file, args.n, args.tol, args.seed)
        elif args.command == "check":
            rep = cmd_check(args.f_file, args.mode, args.out, args.seed, args.grid_step,
                            args.trials, args.spectrum_csv)
        else:
            rep = cmd_example(args.which, args.n, args.a, args.out)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SpecError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(_summary(rep))
    if args.report:
        ser.write_json(rep.to_json(), args.report)
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
