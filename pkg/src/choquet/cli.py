"""Command-line entry point: ``choquet <subcommand> ...``.

Every subcommand reads JSON files and writes one JSON document (to stdout
or ``--out``).  Exit status is 0 when every check passes, 1 when a check
fails and 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from fractions import Fraction
from pathlib import Path

from .exceptions import ChoquetError, ConfigError
from .intervals import IntervalUnion, MeasureModel
from .io import (
    compact_from_json,
    element_str,
    load_json,
    measure_model_from_json,
    measure_to_json,
    parse_rational,
    parse_set,
    setfunction_from_json,
)
from .lfv import (
    CompoundPoissonAvoidance,
    FiniteLawAvoidance,
    PoissonIntervalAvoidance,
    SolidGrainAvoidance,
    lfv_certificate,
    poisson_singletons,
)
from .measure import DiscreteMeasure
from .random_sets import (
    AVOIDANCE,
    HITTING,
    CompoundSetSampler,
    DistributionSampler,
    PoissonSampler,
    estimate_functionals,
    z_compare,
)
from .report import dumps, emit_report
from .representation import MODES, choquet_represent, forward_values
from .setfun import (
    CLASSES,
    classify,
    is_exponential_valuation,
    is_k_valuation,
    is_valuation,
    levy_divisibility,
)
from .suites import ACCEPTANCE, SUITES, SuiteConfig, run_suites

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _write(doc, out: str | None) -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# represent


def cmd_represent(args) -> int:
    f, model = setfunction_from_json(args.function)
    m = choquet_represent(f, args.mode, model)
    back = forward_values(m, f.lattice, args.mode, model)
    transcript = [
        {"x": element_str(x), "f": f(x), "forward": back[x], "ok": back[x] == f(x)}
        for x in f.lattice.elements
    ]
    doc = {"mode": args.mode, "measure": measure_to_json(m), "verification": transcript}
    _write(doc, args.out)
    return EXIT_OK if all(t["ok"] for t in transcript) else EXIT_FAIL


# ---------------------------------------------------------------------------
# classify

EXTRA_CLASSES = ("k_valuation", "valuation", "exponential_valuation", "levy")


def _witness(w):
    if w is None:
        return None
    if isinstance(w, tuple) and len(w) == 3:
        A, x, v = w
        A = [element_str(a) for a in A] if isinstance(A, (tuple, list, frozenset)) else element_str(A)
        return {"A": A, "x": element_str(x), "value": v}
    return [element_str(v) for v in w]


def cmd_classify(args) -> int:
    f, _ = setfunction_from_json(args.function)
    if args.cls == "k_valuation":
        if args.k is None:
            raise ConfigError("k_valuation needs --k")
        rep = is_k_valuation(f, args.k)
    elif args.cls == "valuation":
        rep = is_valuation(f)
    elif args.cls == "exponential_valuation":
        rep = is_exponential_valuation(f)
    elif args.cls == "levy":
        lr = levy_divisibility(f, args.nmax)
        doc = {
            "class_queried": "levy",
            "verdict": lr.verdict,
            "support_is_filter": lr.support_is_filter,
            "n_checked": lr.n_checked,
            "failing_n": lr.failing_n,
            "witness": _witness(lr.witness),
            "exponent_alternating": lr.exponent_alternating,
            "exponent": {element_str(x): float(v) for x, v in (lr.exponent or {}).items()},
        }
        _write(doc, args.out)
        return EXIT_OK if lr.divisible else EXIT_FAIL
    else:
        rep = classify(f, args.cls, full_subsets=args.full_subsets)
    doc = {
        "class_queried": rep.class_queried,
        "holds": rep.holds,
        "witness": _witness(rep.witness),
        "strictly_positive": rep.strictly_positive,
        "checked": rep.checked,
    }
    _write(doc, args.out)
    return EXIT_OK if rep.holds else EXIT_FAIL


# ---------------------------------------------------------------------------
# simulate


def _grain_measure(obj: dict, kind: str) -> DiscreteMeasure:
    w = {parse_set(k): parse_rational(v) for k, v in obj.items()}
    return DiscreteMeasure(list(w), w, carrier_kind=kind)


def build_sampler(model: dict):
    kind = model.get("kind")
    if kind == "poisson":
        lam = measure_model_from_json(model["lambda"])
        window = compact_from_json(model["window"])
        if not isinstance(window, IntervalUnion):
            raise ConfigError("a Poisson window is an interval union")
        return PoissonSampler(lam, window)
    if kind == "compound":
        return CompoundSetSampler(_grain_measure(model["grains"], "grains"), [str(r) for r in model["ground"]])
    if kind == "law":
        return DistributionSampler(_grain_measure(model["law"], "closed_sets"), [str(r) for r in model["ground"]])
    raise ConfigError(f"unknown model kind {kind!r}; expected poisson, compound or law")


def cmd_simulate(args) -> int:
    if args.seed is None:
        raise ConfigError("simulate needs --seed")
    sampler = build_sampler(load_json(args.model))
    q = compact_from_json(args.q)
    per_batch: list = []
    rep = estimate_functionals(sampler, [(args.functional, q)], args.n, args.seed, per_batch=per_batch)[0]
    verdict = z_compare(rep, args.z)
    doc = {
        "estimate": rep.estimate,
        "std_error": rep.std_error,
        "theory": rep.theory,
        "theory_float": rep.theory_value,
        "z": rep.z,
        "n": rep.n,
        "seed": rep.seed,
        "label": rep.label,
        "z_threshold": args.z,
        "verdict": verdict,
        "exact": False,
    }
    _write(doc, args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["batch", "size", "count"])
            for i, size, row in per_batch:
                w.writerow([i, size, row[0]])
    return EXIT_OK if verdict == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------
# lfv

BUILTIN_PHI = ("poisson-singletons", "solid-grain", "poisson-lebesgue")


def _phi(spec: str, windows: list):
    if spec == "poisson-singletons":
        pts = sorted(set().union(*windows), key=str) if windows and isinstance(windows[0], frozenset) else list("abcde")
        return poisson_singletons({r: Fraction(1) for r in pts})
    if spec == "solid-grain":
        w = windows[0]
        for x in windows[1:]:
            w = w | x if isinstance(w, frozenset) else w
        return SolidGrainAvoidance(w)
    if spec == "poisson-lebesgue":
        return PoissonIntervalAvoidance(MeasureModel.lebesgue(0, 1))
    obj = load_json(spec)
    kind = obj.get("kind")
    if kind == "compound":
        return CompoundPoissonAvoidance(_grain_measure(obj["grains"], "grains"), [str(r) for r in obj["ground"]])
    if kind == "law":
        return FiniteLawAvoidance(_grain_measure(obj["law"], "closed_sets"))
    if kind == "poisson":
        return PoissonIntervalAvoidance(measure_model_from_json(obj["lambda"]))
    if kind == "solid":
        return SolidGrainAvoidance(compact_from_json(obj["grain"]))
    raise ConfigError(f"unknown avoidance functional {spec!r}")


def _windows(path: str) -> list:
    obj = load_json(path)
    items = obj["windows"] if isinstance(obj, dict) and "windows" in obj else [obj]
    return [compact_from_json(w) for w in items]


def cmd_lfv(args) -> int:
    windows = _windows(args.window)
    phi = _phi(args.phi, windows)
    cert = lfv_certificate(phi, windows, parse_rational(args.delta), args.nmax, args.budget, route=args.route)
    doc = {
        "delta": cert.delta,
        "n_used": cert.n_used,
        "verdict": cert.verdict,
        "exhaustive": cert.exhaustive,
        "counterexample": None if cert.counterexample is None else {
            "window": cert.counterexample[0],
            "cover": list(cert.counterexample[1].members),
            "n": cert.counterexample[2],
            "lhs": cert.counterexample[3],
        },
        "per_cover_results": [
            {"cover": r.cover_id, "lhs": r.lhs, "passed": r.passed, "n_needed": r.n_needed}
            for r in cert.per_cover_results
        ],
    }
    _write(doc, args.out)
    return EXIT_OK if cert.verdict == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------
# suite


def suite_config(args) -> SuiteConfig:
    conf = load_json(args.config) if args.config else {}
    suites = args.suites or conf.get("suites") or list(ACCEPTANCE)
    if isinstance(suites, str):
        suites = [s.strip() for s in suites.split(",") if s.strip()]
    seed = args.seed if args.seed is not None else conf.get("seed")
    base = Path(args.config).parent if args.config else Path(".")
    fixtures = [
        {**fx, "function": str(base / fx["function"])} for fx in conf.get("fixtures", [])
    ]
    if fixtures and "fixtures" not in suites:
        suites = list(suites) + ["fixtures"]
    return SuiteConfig(
        seed=seed,
        suites=tuple(suites),
        z=args.z if args.z is not None else float(conf.get("z", 3.0)),
        output=args.output or conf.get("output"),
        format=args.format or conf.get("format", "json"),
        fixtures=fixtures,
    )


def cmd_suite(args) -> int:
    cfg = suite_config(args)
    t0 = time.perf_counter()
    results = run_suites(cfg)
    text = emit_report(results, cfg.output, cfg.format)
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        # timings stay out of the report so reports remain byte-identical
        log = Path(str(cfg.output) + ".log")
        log.write_text(f"elapsed_seconds {time.perf_counter() - t0:.3f}\n", encoding="utf-8")
    for sid, checks in results.items():
        bad = sum(not c.passed for c in checks)
        print(f"{'PASS' if not bad else 'FAIL'} {sid} ({len(checks) - bad}/{len(checks)})", file=sys.stderr)
    return EXIT_OK if all(c.passed for cs in results.values() for c in cs) else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="choquet", description="Exact Choquet representations, random-set samplers and verification suites.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("represent", help="represent a set function by a measure")
    r.add_argument("--function", required=True, help="set-function JSON file")
    r.add_argument("--mode", required=True, choices=MODES)
    r.add_argument("--out", help="output file (default stdout)")
    r.set_defaults(func=cmd_represent)

    c = sub.add_parser("classify", help="test a monotonicity class")
    c.add_argument("--function", required=True, help="set-function JSON file")
    c.add_argument("--class", dest="cls", required=True, choices=CLASSES + EXTRA_CLASSES)
    c.add_argument("--k", type=int, help="order for k_valuation")
    c.add_argument("--nmax", type=int, default=16, help="largest root order for levy (default 16)")
    c.add_argument("--full-subsets", action="store_true", help="check every index subset, not only antichains")
    c.add_argument("--out", help="output file (default stdout)")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("simulate", help="Monte Carlo estimate of a hitting or avoidance probability")
    s.add_argument("--model", required=True, help="model JSON (kind poisson, compound or law)")
    s.add_argument("--functional", required=True, choices=(HITTING, AVOIDANCE))
    s.add_argument("--q", required=True, help="compact JSON: {\"set\": [...]} or {\"intervals\": [...]}")
    s.add_argument("--n", type=int, default=100_000, help="replications (default 100000)")
    s.add_argument("--seed", type=int, help="nonnegative seed (required)")
    s.add_argument("--z", type=float, default=3.0, help="z threshold (default 3)")
    s.add_argument("--csv", help="also write per-batch counts to this CSV file")
    s.add_argument("--out", help="output file (default stdout)")
    s.set_defaults(func=cmd_simulate)

    f = sub.add_parser("lfv", help="locally-finite-valuation certificate")
    f.add_argument("--phi", required=True, help=f"avoidance JSON file or builtin ({', '.join(BUILTIN_PHI)})")
    f.add_argument("--window", required=True, help="window JSON (one compact or {\"windows\": [...]})")
    f.add_argument("--delta", default="1/20", help="tolerance p/q (default 1/20)")
    f.add_argument("--nmax", type=int, default=20, help="largest order (default 20)")
    f.add_argument("--budget", type=int, help="cover budget")
    f.add_argument("--route", default="auto", choices=("auto", "enumerate", "measure"))
    f.add_argument("--out", help="output file (default stdout)")
    f.set_defaults(func=cmd_lfv)

    u = sub.add_parser("suite", help="run verification suites")
    u.add_argument("--suites", type=lambda v: [x.strip() for x in v.split(",") if x.strip()], help=f"comma-separated ids from: {', '.join(SUITES)}")
    u.add_argument("--seed", type=int, help="seed (required for Monte Carlo suites)")
    u.add_argument("--z", type=float, help="z threshold (default 3)")
    u.add_argument("--output", help="report path (default stdout)")
    u.add_argument("--format", choices=("json", "csv"))
    u.add_argument("--config", help="JSON config with any of: seed, suites, z, output, format, fixtures")
    u.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ChoquetError as e:
        print(f"check failed: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
