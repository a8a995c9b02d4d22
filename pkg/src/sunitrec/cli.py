"""Command-line interface: analyze, certify, search, verify.

Exit codes: 0 ok, 2 configuration error, 3 hypothesis refusal (or analysis
failure), 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .bounds import final_bound
from .errors import HypothesisFailure, SunitrecError
from .exactmath.ball import DEFAULT_PRECISION_CAP, log_int, precision_cap
from .problem import ProblemInstance, parse_epsilon
from .recurrence import InvalidRecurrence, binet_decomposition, gamma, is_degenerate, new_recurrence, spectral_data
from .report import ball_json
from .search import SearchStats, SolutionRecord, brute_solutions, verify_solution
from .sunits import PrimeSet

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REFUSED = 3
EXIT_VERIFY = 4


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    instance: ProblemInstance
    nmax: Optional[int]
    zmax: Optional[int]
    moduli: tuple[int, ...]
    precision_cap: int
    raw: dict


def _int_field(data: dict, key: str, where: str = "") -> int:
    label = f"{where}{key}"
    if key not in data:
        raise ConfigError(f"missing field '{label}'")
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise ConfigError(f"field '{label}' must be an integer string")
    try:
        return int(v)
    except ValueError:
        raise ConfigError(f"field '{label}' is not an integer: {v!r}") from None


def _int_list(data: dict, key: str, where: str = "") -> list[int]:
    label = f"{where}{key}"
    if key not in data:
        raise ConfigError(f"missing field '{label}'")
    v = data[key]
    if not isinstance(v, list):
        raise ConfigError(f"field '{label}' must be a list")
    return [_int_field({"x": x}, "x", f"{label}[{i}]/") for i, x in enumerate(v)]


def _parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def parse_config(data: Any, overrides: Optional[dict] = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    over = {k: v for k, v in (overrides or {}).items() if v is not None}
    rec_data = data.get("recurrence")
    if not isinstance(rec_data, dict):
        raise ConfigError("missing object 'recurrence'")
    coeffs = _int_list(rec_data, "coefficients", "recurrence.")
    initials = _int_list(rec_data, "initials", "recurrence.")
    try:
        rec = new_recurrence(coeffs, initials)
    except InvalidRecurrence as exc:
        raise ConfigError(f"recurrence: {exc}") from None
    try:
        S = PrimeSet.of(_int_list(data, "primes"))
    except ValueError as exc:
        raise ConfigError(f"primes: {exc}") from None
    a, b = _int_field(data, "a"), _int_field(data, "b")
    if "r" not in data or isinstance(data["r"], bool) or not isinstance(data["r"], int):
        raise ConfigError("field 'r' must be an integer")
    if "epsilon" not in data or not isinstance(data["epsilon"], str):
        raise ConfigError("field 'epsilon' must be a string 'u/v'")
    try:
        eps = parse_epsilon(data["epsilon"])
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"epsilon: {exc}") from None
    strict = over.get("strict_dominance", data.get("strict_dominance", True))
    strict = strict if isinstance(strict, bool) else _parse_bool(strict)
    try:
        inst = ProblemInstance(rec, S, a, b, data["r"], eps, strict)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    def opt_int(key: str) -> Optional[int]:
        if key in over:
            return int(over[key])
        return _int_field(data, key) if key in data else None

    moduli = over.get("moduli", data.get("moduli", []))
    if isinstance(moduli, str):
        moduli = [m for m in moduli.split(",") if m.strip()]
    try:
        moduli = tuple(int(m) for m in moduli)
    except ValueError:
        raise ConfigError("moduli must be integers") from None
    cap = opt_int("precision_cap") or DEFAULT_PRECISION_CAP
    return RunConfig(inst, opt_int("nmax"), opt_int("zmax"), moduli, cap, data)


def load_config(path: str, overrides: Optional[dict] = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(data, overrides)


# -- rendering --

def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def render_text(obj: Any, indent: int = 0) -> str:
    """Plain-text rendering of a JSON-like report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v) if not isinstance(v, str) else v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def _emit(report: dict, args, stream=None) -> None:
    stream = stream or sys.stdout
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text)
        stream.write(render_text(report) + "\n")
    elif args.format == "text":
        stream.write(render_text(report) + "\n")
    else:
        stream.write(text)


# -- commands --

def analyze_report(cfg: RunConfig) -> dict:
    inst = cfg.instance
    rec = inst.rec
    spectral = spectral_data(rec, strict=False)
    report: dict[str, Any] = {
        "version": __version__,
        "config": inst.to_json(),
        "gamma": str(gamma(rec)),
        "degenerate": is_degenerate(rec),
    }
    report.update(spectral.to_json())
    checks = {
        "non_degenerate": not report["degenerate"],
        "dominant_root_exists": spectral.dominance == "dominant",
        "dominant_simple": spectral.dominant_is_simple,
        "dominant_real_gt1": bool(spectral.dominant_is_real and spectral.dominant_index is not None
                                  and spectral.dominant.ball.lower() > 1),
        "dominant_not_integer_gt1": not spectral.dominant_is_integer_gt1,
        "eta_nonzero": False,
    }
    binet = None
    if spectral.dominance == "dominant":
        try:
            bf = binet_decomposition(rec, spectral)
            checks["eta_nonzero"] = True
            binet = {
                "eta": ball_json(bf.eta1),
                "coefficients": [[ball_json(c) for c in p] for p in bf.coeff_polys],
            }
        except HypothesisFailure as exc:
            binet = {"error": exc.reason, "message": str(exc)}
    report["binet"] = binet
    report["hypotheses"] = checks
    return report


def cmd_analyze(cfg: RunConfig, args) -> int:
    with precision_cap(cfg.precision_cap):
        report = analyze_report(cfg)
    _emit(report, args)
    return EXIT_OK


def certificate_report(cfg: RunConfig) -> tuple[int, dict]:
    try:
        with precision_cap(cfg.precision_cap):
            cert = final_bound(cfg.instance)
    except SunitrecError as exc:
        return EXIT_REFUSED, {
            "version": __version__,
            "config": cfg.instance.to_json(),
            "refused": True,
            "reason": exc.reason,
            "message": str(exc),
        }
    return EXIT_OK, cert.to_json()


def cmd_certify(cfg: RunConfig, args) -> int:
    code, report = certificate_report(cfg)
    _emit(report, args)
    return code


def cmd_search(cfg: RunConfig, args) -> int:
    if cfg.nmax is None or cfg.zmax is None:
        raise ConfigError("search needs nmax and zmax (flags or config)")
    stats = SearchStats()
    start = time.perf_counter()
    try:
        sols = brute_solutions(cfg.instance, cfg.nmax, cfg.zmax, engine=args.engine, moduli=cfg.moduli or None,
                               require_dominance=args.only_dominant, require_size=args.only_size, stats=stats)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    elapsed = time.perf_counter() - start
    lines = "".join(json.dumps(s.to_json()) + "\n" for s in sols)
    if args.out:
        Path(args.out).write_text(lines)
    else:
        sys.stdout.write(lines)
    summary = {"count": len(sols), "seconds": round(elapsed, 3), "stats": stats.to_json()}
    sys.stderr.write(json.dumps(summary) + "\n")
    return EXIT_OK


def _cert_checks(cert: dict, rec: SolutionRecord) -> list[str]:
    """Inequalities of the certificate that a solution in scope must satisfy."""
    bad = []
    if rec.n > int(cert["N0"]):
        bad.append("n > N0")
    gap = Fraction(cert["gap_constant"])
    if rec.n - rec.m > gap * log_int(max(rec.n, 3)).lower():
        bad.append("gap bound violated")
    slope = Fraction(cert["zr_linear"]["slope"])
    offset = Fraction(cert["zr_linear"]["offset"])
    if not log_int(abs(rec.summands[-1].value)).upper() < slope * max(rec.n, 1) + offset:
        bad.append("largest summand bound violated")
    return bad


def verify_report(cfg: RunConfig, lines: Sequence[str], cert: Optional[dict]) -> dict:
    failures = []
    checked = in_scope = 0
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        checked += 1
        try:
            rec = SolutionRecord.from_json(json.loads(line), cfg.instance)
        except (ValueError, KeyError, TypeError, SunitrecError) as exc:
            failures.append({"line": lineno, "reason": f"malformed record: {exc}"})
            continue
        if not verify_solution(cfg.instance, rec):
            failures.append({"line": lineno, "reason": "record does not verify"})
            continue
        if cert is not None and rec.satisfies_size_hypothesis and rec.satisfies_dominance:
            in_scope += 1
            for reason in _cert_checks(cert, rec):
                failures.append({"line": lineno, "reason": reason})
    return {
        "records": checked,
        "certificate_checked": cert is not None,
        "in_scope": in_scope,
        "failures": failures,
        "ok": not failures,
    }


def cmd_verify(cfg: RunConfig, args) -> int:
    try:
        lines = Path(args.solutions).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read solutions: {exc}") from None
    cert = None
    if args.certificate:
        try:
            cert = json.loads(Path(args.certificate).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read certificate: {exc}") from None
        if cert.get("refused"):
            raise ConfigError("certificate file is a refusal")
    report = verify_report(cfg, lines, cert)
    _emit(report, args)
    return EXIT_OK if report["ok"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sunitrec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="problem configuration (JSON)")
        p.add_argument("--precision-cap", type=int, help="maximum working precision in bits")
        p.add_argument("--strict-dominance", help="true: |z_i|^(1+eps) < |z_r|; false: <=")
        p.add_argument("--out", help="write the JSON report here and a text summary to stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("analyze", help="roots, dominance, degeneracy, Binet form")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="explicit bound certificate")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("search", help="all solutions below nmax / zmax")
    common(p)
    p.add_argument("--nmax", type=int)
    p.add_argument("--zmax", type=int)
    p.add_argument("--moduli", help="comma-separated coprime moduli for residue pruning")
    p.add_argument("--engine", choices=("mitm", "naive"), default="mitm")
    p.add_argument("--only-dominant", action="store_true", help="keep only solutions with the dominance condition")
    p.add_argument("--only-size", action="store_true", help="keep only solutions with |aU_n+bU_m| >= |U_n|")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="recheck a solutions file, optionally against a certificate")
    common(p)
    p.add_argument("--solutions", required=True, help="JSON-lines file from 'search'")
    p.add_argument("--certificate", help="certificate JSON from 'certify'")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    overrides = {
        "nmax": getattr(args, "nmax", None),
        "zmax": getattr(args, "zmax", None),
        "moduli": getattr(args, "moduli", None),
        "precision_cap": args.precision_cap,
        "strict_dominance": args.strict_dominance,
    }
    try:
        cfg = load_config(args.config, overrides)
        return args.func(cfg, args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except SunitrecError as exc:
        sys.stderr.write(f"analysis failed ({exc.reason}): {exc}\n")
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
