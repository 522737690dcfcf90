"""Command-line driver.

    braidcheck catalog list
    braidcheck check compat --R uq_sl11 --F superflip:1,1
    braidcheck check bethe --R dj_hecke:2 --F same --kind trig --k 1 --p 2 --K 2 --bound 2,2
    braidcheck check all --seed 7 --format json
    braidcheck run config.json

Exit codes: 0 all checks pass, 1 some check fails, 2 inconclusive (no
failure), 3 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .report import FAIL, INCONCLUSIVE, PASS
from .suite import SUITES, ConfigError, parse_config, run_suite

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


_FLAGS = [
    ("--R", str, "braiding spec: flip:N, superflip:m,n, dj_hecke:N, uq_sl11 or a matrix .json"),
    ("--F", str, "second braiding spec, or 'same' for F = R"),
    ("--kind", str, "rational or trig(onometric)"),
    ("--q", str, "rational value of q"),
    ("--n", int, "number of sites"),
    ("--g", str, "g matrix: I, diag:a,b, dense:a,b;c,d or a matrix .json"),
    ("--kappa", str, "kappa"),
    ("--p", str, "qKZ shift step, or the second Bethe order"),
    ("--k", int, "Bethe/Newton order"),
    ("--K", int, "truncation order"),
    ("--bound", str, "bi-degree bound a,b"),
    ("--relations-K", int, "truncation order of the relations (default K+1)"),
    ("--ybe-n", int, "largest n for the braided YBE"),
    ("--points", int, "number of sample points"),
    ("--seed", int, "sampling seed"),
    ("--sample-bound", int, "bound on sampled numerators/denominators"),
]


def build_parser():
    ap = _Parser(prog="braidcheck", description="Exact verification of braided R-matrix structures.")
    sub = ap.add_subparsers(dest="command", required=True)
    cat = sub.add_parser("catalog", help="list catalog braidings")
    cat.add_argument("action", choices=["list"])
    chk = sub.add_parser("check", help="run one family of checks")
    chk.add_argument("suite", choices=sorted(SUITES))
    for flag, typ, help_ in _FLAGS:
        chk.add_argument(flag, type=typ, help=help_, default=None)
    chk.add_argument("--T0-identity", action="store_true", help="impose T[0] = I")
    chk.add_argument("--no-certificates", action="store_true", help="omit certificates from the report")
    chk.add_argument("--format", choices=["json", "text"], default="json")
    chk.add_argument("--timing", action="store_true", help="include wall times (breaks byte-identity)")
    run = sub.add_parser("run", help="run a JSON config file")
    run.add_argument("config")
    run.add_argument("--format", choices=["json", "text"], default="json")
    run.add_argument("--timing", action="store_true")
    return ap


def _config_from_args(args):
    obj = {"suite": args.suite}
    for flag, _, _ in _FLAGS:
        key = flag[2:].replace("-", "_")
        v = getattr(args, key)
        if v is None:
            continue
        if key not in SUITES[args.suite] and key not in ("seed", "points", "sample_bound"):
            raise ConfigError(f"flag {flag} does not apply to '{args.suite}'", flag)
        obj[key] = v
    if args.T0_identity:
        obj["T0_identity"] = True
    if args.no_certificates:
        obj["certificates"] = False
    return parse_config(obj)


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = sys.stdout.buffer
    if args.command == "catalog":
        from .braidings import catalog_names
        for name, desc in sorted(catalog_names().items()):
            out.write(f"{name:10s} {desc}\n".encode())
        return 0
    try:
        if args.command == "run":
            try:
                with open(args.config, encoding="utf-8") as fh:
                    cfg = parse_config(fh.read())
            except OSError as exc:
                raise ConfigError(str(exc), args.config) from None
        else:
            cfg = _config_from_args(args)
        report = run_suite(cfg)
    except ConfigError as exc:
        sys.stderr.write(f"braidcheck: config error: {exc}\n")
        return EXIT_USAGE
    try:
        out.write(report.emit(args.format, include_timing=args.timing))
        out.flush()
    except BrokenPipeError:
        sys.stderr.close()
    return EXIT[report.status]


if __name__ == "__main__":
    sys.exit(main())
