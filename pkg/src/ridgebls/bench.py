"""Incremental-training experiment: accuracy, timing and flop snapshots per update.

One run builds the random network once, then for every ridge parameter and
selected algorithm trains on the first ``initial_l`` samples and absorbs the
batch schedule.  A snapshot is recorded after the initial fit and after each
batch.  Timings cover only the solver call: activations are computed up front
and shared by all algorithms.  Each timing is the median over ``trials``
repetitions of the same computation.
"""

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import data as datamod
from .errors import ConfigError, ScheduleExceedsData
from .flops import FlopInputs, flops_for
from .incremental import (
    IncrementBatch,
    init_baseline_state,
    update_generalized_existing,
    update_recursive,
    update_sqrt,
)
from .network import NetworkConfig, build_expanded, gen_params, incremental_expanded
from .ridge import check_lambda, init_recursive_state, init_sqrt_state, standard_ridge_solution

__all__ = [
    "ALGORITHMS",
    "ExperimentConfig",
    "SnapshotRow",
    "SnapshotReport",
    "normalize_algorithm",
    "load_dataset",
    "run_experiment",
]

ALGORITHMS = ("existing", "recursive", "sqrt", "standard")
PROPOSED = ("recursive", "sqrt")
_ALIASES = {
    "standard-oracle": "standard",
    "oracle": "standard",
    "baseline": "existing",
    "square-root": "sqrt",
    "recur": "recursive",
}
REPORT_DECIMALS = 4


def normalize_algorithm(name):
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)} (or standard-oracle)")
    return key


@dataclass(frozen=True)
class ExperimentConfig:
    data: str = "synth:2000,20,4"
    test_data: str | None = None
    label_cols: int = 1
    class_col: bool = False
    test_frac: float = 0.2
    test_size: int | None = None  # synthetic data only
    network: NetworkConfig = field(default_factory=NetworkConfig)
    lambdas: tuple = (1e-8,)
    initial_l: int = 1000
    schedule: tuple = (500,)
    algorithms: tuple = ALGORITHMS
    trials: int = 1
    seed: int = 0
    c_zero_tol: float | None = None  # baseline C == 0 test, see existing_gain

    def validated(self):
        if not self.schedule:
            raise ConfigError("batch schedule must not be empty")
        if any(int(p) < 1 for p in self.schedule):
            raise ConfigError("every batch size must be >= 1")
        if self.initial_l < 1:
            raise ConfigError("initial_l must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.lambdas:
            raise ConfigError("at least one ridge parameter is required")
        try:
            lams = tuple(check_lambda(v) for v in self.lambdas)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        algos = tuple(dict.fromkeys(normalize_algorithm(a) for a in self.algorithms))
        if not algos:
            raise ConfigError("no algorithms selected")
        if not 0.0 < self.test_frac < 1.0:
            raise ConfigError("test_frac must lie in (0, 1)")
        return replace(self, lambdas=lams, algorithms=algos, schedule=tuple(int(p) for p in self.schedule))


@dataclass(frozen=True)
class SnapshotRow:
    samples_seen: int
    algorithm: str
    lam: float
    accuracy: float
    update_seconds: float
    cumulative_seconds: float
    flops: Fraction | None  # modelled cost of this update; None for full fits
    batch_size: int | None  # None for the initial fit
    state_bytes: int  # memory retained between updates
    speedup_update: float | None = None  # T_existing / T_this, proposed algorithms only
    speedup_cumulative: float | None = None

    def record(self):
        d = asdict(self)
        d["flops"] = None if self.flops is None else float(self.flops)
        return d


_TIMING_FIELDS = ("update_seconds", "cumulative_seconds", "speedup_update", "speedup_cumulative")


@dataclass
class SnapshotReport:
    rows: list

    def records(self):
        return [r.record() for r in self.rows]

    def deterministic_records(self):
        """Records with timing-dependent fields removed."""
        return [{k: v for k, v in r.items() if k not in _TIMING_FIELDS} for r in self.records()]

    def column(self, algorithm, lam, name="accuracy"):
        return [getattr(r, name) for r in self.rows if r.algorithm == algorithm and r.lam == lam]

    def to_ndjson(self):
        return "".join(json.dumps(r) + "\n" for r in self.records())

    def to_csv(self):
        buf = io.StringIO()
        names = [f.name for f in SnapshotRow.__dataclass_fields__.values()]
        w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        w.writeheader()
        for r in self.records():
            w.writerow({k: "" if v is None else v for k, v in r.items()})
        return buf.getvalue()

    def to_table(self):
        head = (
            "samples", "algorithm", "lambda", "accuracy", "update_s", "cumulative_s",
            "flops", "batch", "state_bytes", "speedup", "speedup_cum",
        )

        def fmt(v, spec):
            return "-" if v is None else format(v, spec)

        body = [
            (
                str(r.samples_seen), r.algorithm, f"{r.lam:.0e}", f"{r.accuracy:.{REPORT_DECIMALS}f}",
                f"{r.update_seconds:.4f}", f"{r.cumulative_seconds:.4f}",
                "-" if r.flops is None else f"{float(r.flops):.4g}", fmt(r.batch_size, "d"),
                str(r.state_bytes), fmt(r.speedup_update, ".2f"), fmt(r.speedup_cumulative, ".2f"),
            )
            for r in self.rows
        ]
        widths = [max(len(h), *(len(b[i]) for b in body)) if body else len(h) for i, h in enumerate(head)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(c.rjust(w) for c, w in zip(b, widths)) for b in body]
        return "\n".join(lines) + "\n"

    def render(self, fmt):
        try:
            return {"table": self.to_table, "ndjson": self.to_ndjson, "csv": self.to_csv}[fmt]()
        except KeyError:
            raise ConfigError(f"unknown output format {fmt!r}") from None


def _split(x, y, frac, seed):
    n = x.shape[0]
    n_test = int(round(n * frac))
    if n_test < 1 or n_test >= n:
        raise ConfigError(f"cannot hold out {frac:.2f} of {n} rows as a test set")
    perm = np.random.Generator(np.random.Philox(key=int(seed))).permutation(n)
    tr, te = np.sort(perm[n_test:]), np.sort(perm[:n_test])
    return datamod.Dataset(x[tr], y[tr], x[te], y[te])


def _load_source(spec, config):
    kind, _, arg = spec.partition(":")
    if kind == "csv" and arg:
        return datamod.load_csv(arg, label_columns=config.label_cols, class_column=config.class_col)
    if kind == "idx" and arg:
        parts = arg.split(",")
        if len(parts) != 2:
            raise ConfigError("idx source must be idx:IMAGES,LABELS")
        return datamod.load_idx(*parts)
    raise ConfigError(f"unsupported data source {spec!r}")


def load_dataset(config: ExperimentConfig) -> datamod.Dataset:
    """Resolve ``config.data`` (``csv:PATH``, ``idx:IMG,LBL`` or ``synth:N,Q,C[,NOISE]``)."""
    kind, _, arg = config.data.partition(":")
    if kind == "synth":
        try:
            vals = [float(v) for v in arg.split(",")]
        except ValueError:
            raise ConfigError(f"bad synthetic spec {config.data!r}; expected synth:N,Q,C[,NOISE]") from None
        if len(vals) not in (3, 4) or any(v != int(v) or v < 1 for v in vals[:3]):
            raise ConfigError(f"bad synthetic spec {config.data!r}; expected synth:N,Q,C[,NOISE]")
        noise = vals[3] if len(vals) == 4 else 0.1
        n, q, c = (int(v) for v in vals[:3])
        return datamod.synthetic(n, q, c, noise=noise, n_test=config.test_size, seed=config.seed)
    x, y = _load_source(config.data, config)
    if config.test_data:
        xt, yt = _load_source(config.test_data, config)
        if xt.shape[1] != x.shape[1]:
            raise ConfigError("training and test data have different input widths")
        c = max(y.shape[1], yt.shape[1])
        if config.class_col or config.data.startswith("idx:"):
            y, yt = (np.pad(m, ((0, 0), (0, c - m.shape[1]))) for m in (y, yt))
        return datamod.Dataset(x, y, xt, yt)
    return _split(x, y, config.test_frac, config.seed)


def _run_once(algo, lam, a0, y0, batches, a_cum, y_cum, c_zero_tol):
    """One pass over the schedule; returns per-snapshot (weights, seconds, state bytes)."""
    weights, secs, nbytes = [], [], []
    if algo == "standard":
        seen = a0.shape[0]
        for j in range(len(batches) + 1):
            if j:
                seen += batches[j - 1].p
            a, y = a_cum[:seen], y_cum[:seen]
            t0 = time.perf_counter()
            w = standard_ridge_solution(a, y, lam)
            secs.append(time.perf_counter() - t0)
            weights.append(w)
            nbytes.append(a.nbytes + y.nbytes)
        return weights, secs, nbytes

    if algo == "existing":
        init, step, size = init_baseline_state, update_generalized_existing, lambda s: s.nbytes
    elif algo == "recursive":
        init, step, size = init_recursive_state, update_recursive, lambda s: s.q.nbytes + s.w.nbytes
    else:
        init, step, size = init_sqrt_state, update_sqrt, lambda s: s.f.nbytes + s.w.nbytes
    kwargs = {"c_zero_tol": c_zero_tol} if algo == "existing" else {}

    t0 = time.perf_counter()
    state = init(a0, y0, lam)
    secs.append(time.perf_counter() - t0)
    weights.append(state.w)
    nbytes.append(size(state))
    for batch in batches:
        t0 = time.perf_counter()
        state = step(state, batch, **kwargs)
        secs.append(time.perf_counter() - t0)
        weights.append(state.w)
        nbytes.append(size(state))
    return weights, secs, nbytes


def run_experiment(config: ExperimentConfig, dataset: datamod.Dataset | None = None) -> SnapshotReport:
    """Run the incremental benchmark and return one row per (lambda, algorithm, snapshot).

    ``dataset`` overrides ``config.data`` when given.
    """
    config = config.validated()
    ds = dataset if dataset is not None else load_dataset(config)
    n_train, q = ds.x_train.shape
    needed = config.initial_l + sum(config.schedule)
    if needed > n_train:
        raise ScheduleExceedsData(
            f"initial_l + schedule needs {needed} training rows but only {n_train} are available"
        )
    net = replace(config.network, input_dim=q, seed=config.seed)
    params = gen_params(net)

    l0 = config.initial_l
    a0 = build_expanded(ds.x_train[:l0], params, net)
    y0 = ds.y_train[:l0]
    batches = []
    off = l0
    for p in config.schedule:
        batches.append(IncrementBatch(incremental_expanded(ds.x_train[off:off + p], params, net), ds.y_train[off:off + p]))
        off += p
    a_cum = np.vstack([a0] + [b.a_p for b in batches])
    y_cum = ds.y_train[:off]
    a_test = build_expanded(ds.x_test, params, net)

    k, c = net.k, ds.y_train.shape[1]
    seen = [l0]
    for p in config.schedule:
        seen.append(seen[-1] + p)

    rows = []
    for lam in config.lambdas:
        per_algo = {}
        for algo in config.algorithms:
            runs = [_run_once(algo, lam, a0, y0, batches, a_cum, y_cum, config.c_zero_tol) for _ in range(config.trials)]
            weights, _, nbytes = runs[0]
            secs = np.median(np.array([r[1] for r in runs]), axis=0)
            per_algo[algo] = (weights, secs, nbytes)
        for algo in config.algorithms:
            weights, secs, nbytes = per_algo[algo]
            cum = np.cumsum(secs)
            for j, w in enumerate(weights):
                p = config.schedule[j - 1] if j else None
                flops = None
                if p is not None and algo != "standard":
                    flops = flops_for(algo, FlopInputs(p=p, k=k, l=seen[j - 1], c=c))
                sp_u = sp_c = None
                if p is not None and algo in PROPOSED and "existing" in per_algo:
                    base = per_algo["existing"][1]
                    sp_u = float(base[j] / secs[j]) if secs[j] > 0 else None
                    sp_c = float(np.sum(base[: j + 1]) / cum[j]) if cum[j] > 0 else None
                rows.append(
                    SnapshotRow(
                        samples_seen=seen[j],
                        algorithm=algo,
                        lam=lam,
                        accuracy=datamod.accuracy(a_test @ w, ds.y_test),
                        update_seconds=float(secs[j]),
                        cumulative_seconds=float(cum[j]),
                        flops=flops,
                        batch_size=p,
                        state_bytes=int(nbytes[j]),
                        speedup_update=sp_u,
                        speedup_cumulative=sp_c,
                    )
                )
    return SnapshotReport(rows)
