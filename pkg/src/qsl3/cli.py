"""Command-line front end.

Every subcommand prints one JSON report (``schema: 1``; all numbers as exact
strings) and exits with 0 on pass, 1 on failure, 3 when a check was
inconclusive (a size cap was hit) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from .bqd import CaseIhParams, InvalidParameter, check_coherence, check_t, make_case_ie, make_case_ih
from .classify import InvalidDatum
from .exactmath.scalars import RatFunc, format_scalar, parse_scalar, word_primes

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
SCHEMA = 1


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    family: str = "ih"
    t: Any = Fraction(2)
    max_degree: int = 4
    cap: int = 2000
    mod_p: bool = False
    output: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"command": self.command, "family": self.family, "t": format_scalar(self.t),
               "max_degree": str(self.max_degree), "cap": str(self.cap), "mod_p": self.mod_p}
        out.update({k: (v if isinstance(v, (bool, str)) or v is None else str(v)) for k, v in self.extra.items()})
        return out


def _exact_strings(x: Any) -> Any:
    """Render every number in a payload as a string; booleans and None stay."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, dict):
        return {k: _exact_strings(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_exact_strings(v) for v in x]
    if isinstance(x, float):
        raise TypeError("floating-point value in a report")
    return format_scalar(x)


@dataclass
class RunReport:
    config: RunConfig
    checks: dict = field(default_factory=dict)  # name -> (status, payload)
    timings: dict = field(default_factory=dict)
    field_mode: str = "QQ"

    @property
    def status(self) -> str:
        states = [s for s, _ in self.checks.values()]
        if any(s == "fail" for s in states):
            return "fail"
        if any(s == "inconclusive" for s in states):
            return "inconclusive"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def exit_code(self) -> int:
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[self.status]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.config.to_json(),
            "field": self.field_mode,
            "checks": {k: {"status": s, "result": _exact_strings(p)} for k, (s, p) in self.checks.items()},
            "timings": {k: f"{v:.3f}" for k, v in self.timings.items()},
            "verdict": self.status,
            "pass": self.passed,
        }


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _family_bqd(family: str, t: Any):
    if family == "ih":
        return make_case_ih(t)
    if family == "ie":
        return make_case_ie(t)
    raise UsageError(f"unknown family {family!r}")


def _field_of(t: Any) -> str:
    return "QQ(t)" if isinstance(t, RatFunc) else "QQ"


# --------------------------------------------------------------------------
# suites


def suite_check_bqd(cfg: RunConfig, rep: RunReport) -> None:
    report = check_coherence(_family_bqd(cfg.family, cfg.t))
    rep.checks["coherence"] = (_status(report.passed), report.to_json())


def suite_classify(cfg: RunConfig, rep: RunReport) -> None:
    from .classify import final_resultant_check, normalize

    if cfg.extra.get("verify_elimination"):
        trace = final_resultant_check()
        rep.checks["elimination"] = (_status(trace.passed), trace.to_json())
        return
    names = ("alpha", "beta", "gamma", "alpha_p", "beta_p", "gamma_p")
    vals = [cfg.extra.get(n) for n in names]
    if any(v is None for v in vals):
        raise UsageError("classify needs --verify-elimination or all six parameters")
    params = CaseIhParams(*[parse_scalar(v) for v in vals])
    witness = normalize(params)
    replayed = witness.replay(params)
    ok = replayed.as_tuple() == witness.result.as_tuple()
    rep.checks["normalization"] = (_status(ok), witness.to_json())


def suite_shape_dims(cfg: RunConfig, rep: RunReport) -> None:
    from .shape import dimension_table, shape_presentation

    p = shape_presentation(_family_bqd(cfg.family, cfg.t))
    prime = word_primes()[0] if cfg.mod_p else None
    table = dimension_table(p, cfg.max_degree, prime=prime)
    payload = table.to_json()
    payload["text"] = table.to_text()
    rep.field_mode = table.mode if cfg.mod_p else _field_of(cfg.t)
    rep.checks["dimensions"] = (_status(table.passed), payload)


def suite_koszul(cfg: RunConfig, rep: RunReport) -> None:
    from .koszul import distributivity_check, dual_series_report
    from .shape import shape_presentation

    if isinstance(cfg.t, RatFunc):
        raise UsageError("koszul needs a rational t (prime-field mode)")
    p = shape_presentation(_family_bqd(cfg.family, cfg.t))
    per_k = []
    status = "pass"
    for k in range(2, cfg.max_degree + 1):
        verdicts = [distributivity_check(p, k, cfg.cap, prime=q) for q in word_primes()[:2]]
        states = {v.status for v in verdicts}
        if states == {"Distributive"}:
            s = "pass"
        elif "NotDistributive" in states and len(states) == 1:
            s = "fail"
        else:
            s = "inconclusive"
        if s == "fail" or (s == "inconclusive" and status == "pass"):
            status = s
        per_k.append({"k": str(k), "status": s, "verdicts": [v.to_json() for v in verdicts]})
    rep.field_mode = "GF(p) x2"
    rep.checks["distributivity"] = (status, per_k)
    series_n = int(cfg.extra.get("series", 5))
    series = dual_series_report(p, series_n)
    rep.checks["dual_series"] = (_status(series.passed), series.to_json())


def suite_twist(cfg: RunConfig, rep: RunReport) -> None:
    from .twist import verify_untwist

    t = RatFunc.t() if cfg.extra.get("symbolic") else cfg.t
    verdict = verify_untwist(t)
    rep.field_mode = _field_of(t)
    rep.checks["twist"] = (_status(verdict.passed and verdict.round_trip), verdict.to_json())


def suite_curves(cfg: RunConfig, rep: RunReport) -> None:
    from .geometry import curve_report

    report = curve_report(cfg.t, cfg.family)
    rep.field_mode = _field_of(cfg.t)
    rep.checks["curves"] = (_status(report.passed), report.to_json())


def suite_flag(cfg: RunConfig, rep: RunReport) -> None:
    from .geometry import flag_components, sigma_fixed_points, verify_gamma_relations

    t = RatFunc.t() if cfg.extra.get("symbolic") else cfg.t
    report = verify_gamma_relations(t)
    fixed = sigma_fixed_points(t)
    comps = flag_components(t)
    payload = report.to_json()
    payload["fixed_points"] = fixed
    payload["components"] = [c.to_json() for c in comps]
    rep.field_mode = _field_of(t)
    rep.checks["flag"] = (_status(report.passed and not fixed), payload)


def suite_hopf(cfg: RunConfig, rep: RunReport) -> None:
    from .hopf import FAMILY_COUNTS, antipode_square_report, hopf_presentation

    b = _family_bqd(cfg.family, cfg.t)
    pres = hopf_presentation(b)
    dump = cfg.extra.get("dump_relations")
    if dump:
        with open(dump, "w") as fh:
            fh.write(pres.relations_text())
    ant = antipode_square_report(b)
    payload = pres.to_json()
    payload["antipode"] = ant.to_json()
    ok = ant.passed and pres.family_counts() == FAMILY_COUNTS
    rep.field_mode = _field_of(cfg.t)
    rep.checks["hopf"] = (_status(ok), payload)


SUITES: dict[str, Callable[[RunConfig, RunReport], None]] = {
    "check-bqd": suite_check_bqd,
    "classify": suite_classify,
    "shape-dims": suite_shape_dims,
    "koszul": suite_koszul,
    "twist-verify": suite_twist,
    "curves": suite_curves,
    "flag": suite_flag,
    "hopf": suite_hopf,
}


def run(cfg: RunConfig) -> RunReport:
    rep = RunReport(cfg, field_mode=_field_of(cfg.t))
    if cfg.command == "all":
        plan = [
            ("check-bqd", {"family": "ih"}), ("check-bqd", {"family": "ie"}),
            ("classify", {"extra": {"verify_elimination": True}}),
            ("shape-dims", {"family": "ih"}), ("twist-verify", {"extra": {"symbolic": True}}),
            ("koszul", {"family": "ih"}), ("koszul", {"family": "ie"}),
            ("flag", {"extra": {"symbolic": True}}), ("curves", {"family": "ih"}),
            ("hopf", {"family": "ih"}), ("hopf", {"family": "ie"}),
        ]
        for name, over in plan:
            sub = RunConfig(name, family=over.get("family", cfg.family), t=cfg.t,
                            max_degree=cfg.max_degree, cap=cfg.cap, extra=dict(over.get("extra", {})))
            inner = RunReport(sub, field_mode=_field_of(cfg.t))
            start = time.perf_counter()
            SUITES[name](sub, inner)
            label = f"{name}[{sub.family}]" if "family" in over else name
            rep.timings[label] = time.perf_counter() - start
            for k, v in inner.checks.items():
                rep.checks[f"{label}.{k}"] = v
        rep.field_mode = "mixed"
        return rep
    if cfg.command not in SUITES:
        raise UsageError(f"unknown command {cfg.command!r}")
    start = time.perf_counter()
    SUITES[cfg.command](cfg, rep)
    rep.timings[cfg.command] = time.perf_counter() - start
    return rep


# --------------------------------------------------------------------------
# argument parsing


def _t_arg(text: str) -> Any:
    try:
        t = parse_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if not isinstance(t, RatFunc):
        try:
            check_t(t)
        except InvalidParameter as exc:
            raise argparse.ArgumentTypeError(str(exc))
    return t


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsl3", description=__doc__.splitlines()[0])
    parser.add_argument("--output", "-o", help="also write the JSON report to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, family=True, t=True):
        if family:
            sp.add_argument("--family", choices=("ih", "ie"), default="ih")
        if t:
            sp.add_argument("--t", type=_t_arg, default=Fraction(2), help="rational literal or 'symbolic'")

    common(sub.add_parser("check-bqd", help="coherence conditions for a family"))

    sp = sub.add_parser("classify", help="normalize a Case I.h datum or verify the elimination")
    sp.add_argument("--verify-elimination", action="store_true")
    for name in ("alpha", "beta", "gamma", "alpha-p", "beta-p", "gamma-p"):
        sp.add_argument(f"--{name}")

    sp = sub.add_parser("shape-dims", help="graded dimensions of the shape algebra")
    common(sp)
    sp.add_argument("--max-total-degree", type=int, default=4)
    sp.add_argument("--mod-p", action="store_true")
    sp.add_argument("--text", action="store_true", help="print the aligned table before the JSON")

    sp = sub.add_parser("koszul", help="distributivity and dual-series evidence")
    common(sp)
    sp.add_argument("--max-degree", type=int, default=4)
    sp.add_argument("--cap", type=int, default=2000)
    sp.add_argument("--series", type=int, default=5)

    sp = sub.add_parser("twist-verify", help="twist identification of the two shape algebras")
    common(sp, family=False)
    sp.add_argument("--symbolic", action="store_true")

    sp = sub.add_parser("curves", help="the cubics attached to a family")
    common(sp)
    sp.add_argument("--text", action="store_true")

    sp = sub.add_parser("flag", help="flag-variety components and fixed points")
    common(sp, family=False)
    sp.add_argument("--symbolic", action="store_true")

    sp = sub.add_parser("hopf", help="the (9+9)-generator presentation")
    common(sp)
    sp.add_argument("--dump-relations", metavar="FILE")

    sp = sub.add_parser("all", help="run every suite")
    common(sp, family=False)
    sp.add_argument("--max-degree", type=int, default=4)
    sp.add_argument("--cap", type=int, default=2000)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(ns.command, family=getattr(ns, "family", "ih"), t=getattr(ns, "t", Fraction(2)),
                    output=ns.output)
    if ns.command == "shape-dims":
        cfg.max_degree = ns.max_total_degree
        cfg.mod_p = ns.mod_p
    if ns.command in ("koszul", "all"):
        cfg.max_degree = ns.max_degree
        cfg.cap = ns.cap
    if ns.command == "koszul":
        cfg.extra["series"] = ns.series
    if ns.command == "classify":
        cfg.extra["verify_elimination"] = ns.verify_elimination
        for name in ("alpha", "beta", "gamma", "alpha_p", "beta_p", "gamma_p"):
            cfg.extra[name] = getattr(ns, name)
    if ns.command in ("twist-verify", "flag"):
        cfg.extra["symbolic"] = ns.symbolic
    if ns.command == "hopf":
        cfg.extra["dump_relations"] = ns.dump_relations
    if ns.command == "all":
        cfg.max_degree = ns.max_degree
    return cfg


def _attach_negative_values(argv: list[str]) -> list[str]:
    """``--t -3/7`` -> ``--t=-3/7`` (argparse would read ``-3/7`` as an option)."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and len(tok) > 1 \
                and tok[0] == "-" and (tok[1].isdigit() or tok[1] == "/"):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    cfg = config_from_args(ns)
    try:
        rep = run(cfg)
    except (UsageError, InvalidParameter, InvalidDatum) as exc:
        print(f"qsl3: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(ns, "text", False):
        for name, (_, payload) in rep.checks.items():
            if isinstance(payload, dict) and "text" in payload:
                print(payload["text"])
            elif name == "curves":
                for key in ("s", "as_curve", "atv_curve"):
                    print(f"{key}: {payload[key]} = 0")
    text = json.dumps(rep.to_json(), indent=2, sort_keys=False)
    print(text)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    return rep.exit_code()


if __name__ == "__main__":
    sys.exit(main())
