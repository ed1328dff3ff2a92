"""Command-line front end.

Commands operate on JSON spec files and emit CSV (sequences, profiles) or
JSON (structured reports) for external plotting; nothing is plotted
in-process.  Exit codes: 0 success, 2 malformed spec or inapplicable
operation, 3 classification came back without a decided verdict.

Every command is pure: the same inputs produce byte-identical outputs.
``--seed`` only drives the optional randomized self-checks and never
changes the emitted report.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from typing import List, Optional

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_INCONCLUSIVE = 3


def _jsonable(obj):
    import numpy as np

    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return {f.name: _jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return str(obj)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload, out: Optional[str]) -> None:
    _emit(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n", out)


def _parse_range(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--range expects LO,HI, got {text!r}")
    return float(parts[0]), float(parts[1])


def _load(path: str):
    from .model import load_spec

    return load_spec(path)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_classify(args) -> int:
    from .classify import classify

    spec = _load(args.spec)
    report = classify(spec, probe_n=args.probe)
    payload = {
        "route": report.route,
        "self_adjoint": report.self_adjoint,
        "ess_spectrum": report.ess_spectrum,
        "lambda_intervals": [[lo, hi] for lo, hi in report.lambda_intervals],
        "caveats": list(report.caveats),
        "detail": _jsonable(report.detail),
    }
    _emit_json(payload, args.out)
    if report.self_adjoint == "conditional":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _intervals_for(spec, tol: float):
    from .classify import lambda_blended, lambda_critical
    from .model import BlendedSpec, KMSpec, ModulatedSpec, SpecError
    from .transfer import closed_form_R_modulated

    if isinstance(spec, BlendedSpec):
        return lambda_blended(spec.alpha, spec.beta, refine_tol=tol)
    if isinstance(spec, ModulatedSpec) and spec.s is not None \
            and spec.z is not None:
        R = closed_form_R_modulated(spec.alpha, spec.beta, spec.s, spec.z)
        return lambda_critical(R, refine_tol=tol)
    if isinstance(spec, KMSpec):
        raise SpecError(
            "growth-regulated specs have no open spectral set: the "
            "essential spectrum is empty whenever the operator is "
            "self-adjoint; run classify instead")
    raise SpecError("no spectral set for this variant: need a blended spec "
                    "or a modulated one with correction sequences s, z")


def _cmd_lambda(args) -> int:
    spec = _load(args.spec)
    intervals = _intervals_for(spec, args.tol)
    if args.format == "json":
        _emit_json({"intervals": [[lo, hi] for lo, hi in intervals]}, args.out)
    else:
        lines = ["interval_lo,interval_hi"]
        lines += [f"{lo:.12g},{hi:.12g}" for lo, hi in intervals]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_eigs(args) -> int:
    import numpy as np

    from .model import build
    from .sections import eigs_all, eigs_in, section, sturm_count

    spec = _load(args.spec)
    if args.size < 1:
        raise ValueError("--size must be >= 1")
    a, b = build(spec, args.size)
    d, e = section(a, b, args.size)
    if args.range:
        lo, hi = _parse_range(args.range)
        eigs = eigs_in(d, e, lo, hi, tol=args.tol)
    else:
        eigs = eigs_all(d, e, tol=args.tol)

    if args.grid > 0:
        # randomized monotonicity self-check of the Sturm counts; failures
        # abort, successes leave the output untouched
        rng = np.random.default_rng(args.seed)
        lo_g, hi_g = (float(eigs[0]) - 1.0, float(eigs[-1]) + 1.0) \
            if len(eigs) else (-1.0, 1.0)
        shifts = np.sort(rng.uniform(lo_g, hi_g, size=args.grid))
        counts = sturm_count(d, e, shifts)
        if np.any(np.diff(counts) < 0):
            raise AssertionError("Sturm counts are not monotone")

    if args.format == "json":
        _emit_json({"size": args.size, "eigenvalues": list(map(float, eigs))},
                   args.out)
    else:
        lines = ["index,eigenvalue"]
        lines += [f"{k},{v:.15g}" for k, v in enumerate(eigs)]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_asymptotics(args) -> int:
    import numpy as np

    from .levinson import yafaev_asymptotics
    from .model import build

    spec = _load(args.spec)
    n_max = args.size
    if n_max < 4:
        raise ValueError("--size must be >= 4")
    z = complex(*_parse_range(args.z)) if args.z else 0.0
    far_factor = 8
    a, b = build(spec, far_factor * max(n_max, 16) + 2)
    basis = yafaev_asymptotics(a, b, z, n_max, q_tol=args.tol,
                               far_factor=far_factor)
    if args.format == "json":
        payload = {
            "q": basis.q,
            "mode": basis.mode,
            "n_max": n_max,
            "max_residual": float(np.max(np.maximum(
                basis.residual_plus, basis.residual_minus))),
            "eps_plus_tail": _jsonable(np.abs(basis.eps_plus[-8:])),
            "eps_minus_tail": _jsonable(np.abs(basis.eps_minus[-8:])),
        }
        _emit_json(payload, args.out)
    else:
        lines = ["n,mod_u_plus,mod_u_minus,abs_eps_plus,abs_eps_minus"]
        for k in range(n_max + 1):
            lines.append(
                f"{k},{abs(basis.u_plus[k]):.15g},{abs(basis.u_minus[k]):.15g},"
                f"{abs(basis.eps_plus[k]):.15g},{abs(basis.eps_minus[k]):.15g}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_stolz(args) -> int:
    import numpy as np

    from .model import BlendedSpec, build
    from .stolz import class_diagnostic, weighted_diagnostic
    from .transfer import window_products

    spec = _load(args.spec)
    n = args.probe
    a, b = build(spec, n + 4)
    idx = np.arange(1, n + 1)
    reports = {}
    ratio_seq = a[idx - 1] / a[idx]
    diag_seq = b[idx] / a[idx]
    reports["offdiagonal_ratio"] = class_diagnostic(ratio_seq, r=1, s=0)
    reports["diagonal_ratio"] = class_diagnostic(diag_seq, r=1, s=0)
    if getattr(spec, "alpha", None) is not None \
            and not isinstance(spec, BlendedSpec):
        N = spec.alpha.period
        starts = np.arange(1, (n - 1) // N)
        if len(starts) >= 8:
            X = window_products(a, b, 0.0, starts * N, N)
            reports["window_family"] = class_diagnostic(X, r=1, s=0)
    reports["perturbation_weighted"] = weighted_diagnostic(
        diag_seq, np.ones_like(diag_seq))
    payload = {name: {"verdict": rep.verdict,
                      "sup_norm": rep.sup_norm,
                      "partial_sums": _jsonable(rep.partial_sums),
                      "fitted_ratio": _jsonable(rep.fitted_ratio)}
               for name, rep in reports.items()}
    _emit_json(payload, args.out)
    return EXIT_OK


def _cmd_km_closed_forms(args) -> int:
    from .classify import _limit_periodic_f
    from .model import KMSpec, SpecError
    from .transfer import discr, km_R, km_R_even_closed, tr

    spec = _load(args.spec)
    if not isinstance(spec, KMSpec):
        raise SpecError("closed forms need a growth-regulated spec")
    ff = _limit_periodic_f(spec)
    N = spec.alpha.period
    out = {"kappa": spec.kappa, "frak_f": list(ff.values), "R": {}}
    for i in range(N):
        R = km_R(spec.alpha, spec.beta, spec.kappa, ff, i=i)
        out["R"][str(i)] = {"matrix": _jsonable(R),
                            "trace": float(tr(R).real),
                            "discr": float(discr(R).real)}
    if N % 2 == 0 and all(v == 0.0 for v in spec.beta.values):
        try:
            trace, d = km_R_even_closed(spec.alpha, ff, spec.kappa)
            out["even_closed"] = {"trace": trace, "discr": d}
        except SpecError:
            pass
    _emit_json(out, args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    from .model import validate

    spec = _load(args.spec)
    report = validate(spec, probe_n=args.probe)
    if args.format == "json":
        _emit_json({"variant": report.variant,
                    "probe_n": report.probe_n,
                    "clauses": [{"name": c.name, "value": c.value,
                                 "note": c.note} for c in report.clauses]},
                   args.out)
    else:
        _emit(str(report) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, fmt_default: str) -> None:
    p.add_argument("--spec", required=True, help="path to a JSON spec file")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized self-checks (output-neutral)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="jacspec",
        description="Spectral diagnostics for unbounded Jacobi matrices")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="run the decision tree")
    _add_common(p, "json")
    p.add_argument("--probe", type=int, default=8192,
                   help="probe depth for series heuristics")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("lambda", help="spectral interval set")
    _add_common(p, "csv")
    p.add_argument("--tol", type=float, default=1e-12,
                   help="endpoint refinement tolerance")
    p.set_defaults(func=_cmd_lambda)

    p = sub.add_parser("eigs", help="finite-section eigenvalues")
    _add_common(p, "csv")
    p.add_argument("--size", type=int, required=True, help="section size")
    p.add_argument("--range", default=None, help="LO,HI half-open window")
    p.add_argument("--tol", type=float, default=1e-12,
                   help="bisection tolerance")
    p.add_argument("--grid", type=int, default=0,
                   help="extra random Sturm-count self-checks")
    p.set_defaults(func=_cmd_eigs)

    p = sub.add_parser("asymptotics", help="eigenvalue-product solution basis")
    _add_common(p, "csv")
    p.add_argument("--size", type=int, required=True,
                   help="deepest index of the reported window")
    p.add_argument("--z", default=None, help="spectral parameter RE,IM")
    p.add_argument("--tol", type=float, default=1e-3,
                   help="refusal margin around the branch-collision ratio")
    p.set_defaults(func=_cmd_asymptotics)

    p = sub.add_parser("stolz", help="regularity diagnostics of the entries")
    _add_common(p, "json")
    p.add_argument("--probe", type=int, default=8192, help="probe depth")
    p.set_defaults(func=_cmd_stolz)

    p = sub.add_parser("km-closed-forms",
                       help="deviation limits of a growth-regulated spec")
    _add_common(p, "json")
    p.set_defaults(func=_cmd_km_closed_forms)

    p = sub.add_parser("validate", help="probe the defining spec clauses")
    _add_common(p, "json")
    p.add_argument("--probe", type=int, default=4096, help="probe depth")
    p.set_defaults(func=_cmd_validate)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    from .model import SpecError

    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
