"""Command-line entry point.

    semiprime-bias verify  --goal 1.1e13 --max-prime 1e9
    semiprime-bias certify --xmin 1.1e13 --xcap 1e100
    semiprime-bias oracle 9 49 121

Every numeric flag accepts scientific notation but is parsed to an exact
integer where the quantity is one (certificates are about integers);
fractional mantissas that do not land on an integer are rejected.
Defaults can be overridden with SPB_-prefixed environment variables
(SPB_MAX_PRIME, SPB_GOAL, SPB_START, SPB_SPACING, SPB_SMALL_PRIME_BOUND,
SPB_FORMAT, SPB_STRIDE, SPB_THREADS, SPB_FLAGS_CACHE).

Exit codes: 0 verified / all checks passed, 2 a verification or
certification check failed, 3 configuration error. (argparse usage
errors exit 2 as usual for CLI tools.)
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from .errors import ConfigurationError, ValidityRangeError

ENV_PREFIX = "SPB_"

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_CONFIG = 3


def parse_exact_int(text: str) -> int:
    """'1.1e13' -> 11000000000000; reject values that are not integers."""
    try:
        d = Decimal(str(text))
    except InvalidOperation as exc:
        raise ConfigurationError(f"cannot parse integer from {text!r}") from exc
    n = int(d)
    if d != n:
        raise ConfigurationError(f"{text!r} is not an exact integer")
    return n


def _env(name: str, fallback: str) -> str:
    return os.environ.get(ENV_PREFIX + name, fallback)


@dataclass
class Config:
    max_prime: int = 10**9
    goal: int = 11 * 10**12
    start: int = 9
    checkpoint_spacing: int = 8192
    small_prime_bound: int = 10**7
    report_format: str = "json"
    report_stride: int = 1
    threads: int = 1
    flags_cache_path: str | None = None

    def validate_for_verify(self):
        if self.goal > 10**18:
            raise ConfigurationError(f"goal {self.goal} exceeds 10^18")
        root = math.isqrt(self.goal)
        if self.max_prime < root:
            raise ConfigurationError(
                f"max_prime {self.max_prime} < sqrt(goal) = {root}"
            )
        if self.small_prime_bound < root:
            raise ConfigurationError(
                f"small_prime_bound {self.small_prime_bound} < sqrt(goal) "
                f"= {root}"
            )
        if self.small_prime_bound > self.max_prime:
            raise ConfigurationError(
                "small_prime_bound cannot exceed max_prime"
            )


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--max-prime", default=_env("MAX_PRIME", "1e9"))
    p.add_argument("--spacing", default=_env("SPACING", "8192"))
    p.add_argument("--small-prime-bound",
                   default=_env("SMALL_PRIME_BOUND", "1e7"))
    p.add_argument("--threads", type=int, default=int(_env("THREADS", "1")))
    p.add_argument("--flags-cache", default=_env("FLAGS_CACHE", "") or None)
    p.add_argument("--out", default=None, help="report path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="semiprime-bias",
        description="verify and certify the 3-mod-4 semiprime bias",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the skip-ahead verification")
    _add_common(v)
    v.add_argument("--goal", default=_env("GOAL", "1.1e13"))
    v.add_argument("--start", default=_env("START", "9"))
    v.add_argument("--format", choices=("json", "csv"),
                   default=_env("FORMAT", "json"))
    v.add_argument("--stride", type=int, default=int(_env("STRIDE", "1")))
    v.add_argument("--progress-every", type=int, default=0)

    c = sub.add_parser("certify", help="run the analytic certificate")
    _add_common(c)
    c.add_argument("--xmin", default="1.1e13")
    c.add_argument("--xcap", default="1e100")
    c.add_argument("--skip-scan", action="store_true",
                   help="omit the small-range scan of the 3-mod-4 bounds")

    o = sub.add_parser("oracle", help="brute-force vs certified counts")
    _add_common(o)
    o.add_argument("x", nargs="+", help="odd x values to compare at")

    return ap


def _config_from(args) -> Config:
    return Config(
        max_prime=parse_exact_int(args.max_prime),
        checkpoint_spacing=parse_exact_int(args.spacing),
        small_prime_bound=parse_exact_int(args.small_prime_bound),
        threads=args.threads,
        flags_cache_path=args.flags_cache,
    )


def _build_artifacts(cfg: Config):
    from . import sieve, tables

    flags = None
    cache = cfg.flags_cache_path
    if cache and os.path.exists(cache):
        try:
            flags = sieve.load_flags(cache)
            if flags.limit != cfg.max_prime:
                flags = None
        except ValueError:
            flags = None
    if flags is None:
        wheel = sieve.build_wheel()
        flags = sieve.sieve_primes(cfg.max_prime, wheel, threads=cfg.threads)
        if cache:
            sieve.save_flags(flags, cache)

    table = None
    ckpt_cache = cache + ".ckpt" if cache else None
    if ckpt_cache and os.path.exists(ckpt_cache):
        try:
            table = tables.load_checkpoints(ckpt_cache, flags)
            if table.spacing != cfg.checkpoint_spacing:
                table = None
        except ValueError:
            table = None
    if table is None:
        table = tables.build_checkpoints(flags, cfg.checkpoint_spacing)
        if ckpt_cache:
            tables.save_checkpoints(table, ckpt_cache)

    splist = tables.build_small_prime_list(
        flags, min(cfg.small_prime_bound, flags.limit))
    return flags, table, splist


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        print(text)


def cmd_verify(args) -> int:
    from .verifier import verify_range

    cfg = _config_from(args)
    cfg.goal = parse_exact_int(args.goal)
    cfg.start = parse_exact_int(args.start)
    cfg.report_format = args.format
    cfg.report_stride = args.stride
    cfg.validate_for_verify()

    flags, table, splist = _build_artifacts(cfg)
    report = verify_range(
        cfg.start, cfg.goal, flags, table, splist,
        stride=cfg.report_stride, progress_every=args.progress_every,
    )
    text = report.to_csv() if cfg.report_format == "csv" else report.to_json()
    _emit(text, args.out)
    if report.verified:
        return EXIT_OK
    print(f"verification failed at x = {report.failed_at}", file=sys.stderr)
    return EXIT_FAILED


def cmd_certify(args) -> int:
    from . import certificate as cert
    from .bounds import scan_3mod4_bounds

    cfg = _config_from(args)
    if cfg.max_prime < cert.MOMENT_BOUND:
        raise ConfigurationError("certify needs max_prime >= 1e6")
    xmin = parse_exact_int(args.xmin)
    xcap = float(args.xcap)

    t0 = time.perf_counter()
    flags, table, _ = _build_artifacts(cfg)

    moments = cert.compute_char_moments(flags)
    martin = cert.martin_display_audit(moments)
    lchi = cert.lchi_bracket(flags, table)
    audit = cert.small_constants_audit(flags, table)
    result = cert.certify_tail(float(xmin), xcap)
    w_at_xmin = cert.w_lower_bound(xmin)

    checks = {
        "martin_coefficients": all(row["ok"] for row in martin),
        "lchi_contains_minus_0334": lchi.contains(-0.334),
        "constants_audit": audit.ok,
        "w_positive_at_xmin": w_at_xmin.lo > 0,
        "tail_certified": result.certified,
    }
    scan_json = None
    if args.skip_scan:
        scan_note = "skipped by --skip-scan"
    else:
        scan = scan_3mod4_bounds(flags, table)
        checks["small_range_scan"] = scan.ok
        scan_json = json.loads(scan.to_json())
        scan_note = None

    payload = {
        "ok": all(checks.values()),
        "checks": checks,
        "martin": [{k: (repr(v) if isinstance(v, float) else v)
                    for k, v in row.items()} for row in martin],
        "lchi": {"lo": repr(lchi.lo), "hi": repr(lchi.hi),
                 "width": repr(lchi.width)},
        "constants_audit": json.loads(audit.to_json()),
        "small_range_scan": scan_json if scan_json is not None else scan_note,
        "w_at_xmin": {"x": xmin, "lo": repr(w_at_xmin.lo),
                      "hi": repr(w_at_xmin.hi)},
        "tail_certificate": json.loads(result.to_json()),
        "elapsed_s": round(time.perf_counter() - t0, 3),
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK if payload["ok"] else EXIT_FAILED


def cmd_oracle(args) -> int:
    from . import sieve, tables
    from .verifier import ORACLE_BUDGET, brute_force_counts, count_at

    cfg = _config_from(args)
    xs = [parse_exact_int(s) for s in args.x]
    usable = [x for x in xs if x <= ORACLE_BUDGET]
    limit = max(1000, min(max(usable, default=1000) // 3 + 1, cfg.max_prime))
    wheel = sieve.build_wheel()
    flags = sieve.sieve_primes(limit, wheel, threads=cfg.threads)
    table = tables.build_checkpoints(flags, cfg.checkpoint_spacing)
    splist = tables.build_small_prime_list(
        flags, min(cfg.small_prime_bound, limit))

    lines = []
    for x in xs:
        if x > ORACLE_BUDGET:
            print(f"skipping x = {x}: oracle budget is {ORACLE_BUDGET}",
                  file=sys.stderr)
            continue
        bn, bd = brute_force_counts(x)
        if x >= 9:
            c = count_at(x, flags, table, splist)
            lines.append(f"{x},{bn},{bd},{c.numerator_lb},{c.denominator_ub}")
        else:
            lines.append(f"{x},{bn},{bd},{bn},{bd}")
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"verify": cmd_verify, "certify": cmd_certify,
                "oracle": cmd_oracle}
    try:
        return handlers[args.command](args)
    except (ConfigurationError, ValidityRangeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
