"""Command-line entry point: ``ridgebls-bench`` / ``python -m ridgebls``.

Exit codes: 0 success, 1 invalid arguments or configuration, 2 unreadable or
malformed data.
"""

import argparse
import logging
import sys

from .bench import ExperimentConfig, run_experiment
from .errors import ConfigError, DataError, NumericalBreakdown
from .network import ACTIVATIONS, NetworkConfig

log = logging.getLogger("ridgebls")

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _schedule(text):
    """``"2000,2000,100"``; ``"2000x5,100x5"`` repeats a size."""
    out = []
    try:
        for tok in text.split(","):
            tok = tok.strip()
            if not tok:
                continue
            size, _, reps = tok.partition("x")
            out.extend([int(size)] * (int(reps) if reps else 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad schedule {text!r}") from None
    return tuple(out)


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser():
    p = _Parser(prog="ridgebls-bench", description="Incremental broad-learning benchmark on added inputs.")
    p.add_argument("--data", required=True, help="csv:PATH | idx:IMAGES,LABELS | synth:N,Q,C[,NOISE]")
    p.add_argument("--test-data", help="held-out set in the same syntax (default: split --test-frac off --data)")
    labels = p.add_mutually_exclusive_group()
    labels.add_argument("--label-cols", type=int, default=1, metavar="N", help="trailing CSV columns that are targets")
    labels.add_argument("--class-col", action="store_true", help="last CSV column is an integer class id")
    p.add_argument("--test-frac", type=float, default=0.2)
    p.add_argument("--test-size", type=int, help="number of synthetic test samples (default N/4)")
    p.add_argument("--feature-groups", type=int, default=10, metavar="n")
    p.add_argument("--feature-nodes", type=int, default=10, metavar="fn")
    p.add_argument("--enh-groups", type=int, default=1, metavar="m")
    p.add_argument("--enh-nodes", type=int, default=100, metavar="en")
    p.add_argument("--phi", choices=sorted(ACTIVATIONS), default="tanh", help="feature activation")
    p.add_argument("--enh-scale", type=float, default=1.0, help="multiplier on enhancement weights")
    p.add_argument("--lambda", dest="lambdas", type=_floats, default=(1e-8,), metavar="v[,v...]")
    p.add_argument("--initial-l", type=int, default=1000, metavar="N")
    p.add_argument("--schedule", type=_schedule, default=(500,), metavar="p1,p2,...")
    p.add_argument("--algos", default="existing,recursive,sqrt,standard-oracle", metavar="LIST")
    p.add_argument("--c-zero-tol", type=float, help="fixed tolerance factor for the baseline's C == 0 test")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--out", default="-", metavar="PATH", help="output file ('-' for stdout)")
    p.add_argument("--format", dest="fmt", choices=("table", "ndjson", "csv"), default="table")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args):
    try:
        net = NetworkConfig(
            feature_groups=args.feature_groups,
            feature_nodes=args.feature_nodes,
            enh_groups=args.enh_groups,
            enh_nodes=args.enh_nodes,
            phi=args.phi,
            enh_scale=args.enh_scale,
            seed=args.seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentConfig(
        data=args.data,
        test_data=args.test_data,
        label_cols=args.label_cols,
        class_col=args.class_col,
        test_frac=args.test_frac,
        test_size=args.test_size,
        network=net,
        lambdas=args.lambdas,
        initial_l=args.initial_l,
        schedule=args.schedule,
        algorithms=tuple(a for a in args.algos.split(",") if a.strip()),
        trials=args.trials,
        seed=args.seed,
        c_zero_tol=args.c_zero_tol,
    ).validated()


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = config_from_args(args)
        log.info("running %s", config)
        text = run_experiment(config).render(args.fmt)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalBreakdown as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
