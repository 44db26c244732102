"""Random feature and enhancement layers of a broad learning network.

The expanded input is ``A = [Z_1 ... Z_n | H_1 ... H_m]`` with
``Z_i = phi(X W_e[i] + b_e[i])`` and ``H_j = xi(Z W_h[j] + b_h[j])``.
Only the output weights on top of ``A`` are trained; the random layers are
fixed once drawn, and new samples reuse them.

Projections use a batched one-row-at-a-time matmul.  Each output row is then
bitwise independent of how many rows are processed together, so activations
computed incrementally match a from-scratch computation exactly.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch

__all__ = [
    "ACTIVATIONS",
    "NetworkConfig",
    "NetworkParams",
    "gen_params",
    "map_features",
    "enhance",
    "build_expanded",
    "incremental_expanded",
]


def _identity(x):
    return x


ACTIVATIONS = {
    "tanh": np.tanh,
    "tansig": np.tanh,
    "identity": _identity,
    "linear": _identity,
}


@dataclass(frozen=True)
class NetworkConfig:
    feature_groups: int = 10
    feature_nodes: int = 10
    enh_groups: int = 1
    enh_nodes: int = 100
    input_dim: int | None = None
    phi: str = "tanh"
    xi: str = "tanh"
    seed: int = 0
    enh_scale: float = 1.0  # multiplier applied to W_h at activation time

    def __post_init__(self):
        for name in ("feature_groups", "feature_nodes", "enh_groups", "enh_nodes"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.input_dim is not None and self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        for name in ("phi", "xi"):
            if getattr(self, name) not in ACTIVATIONS:
                raise ValueError(f"unknown activation {getattr(self, name)!r}; choose from {sorted(ACTIVATIONS)}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def n_features(self):
        return self.feature_groups * self.feature_nodes

    @property
    def n_enhancement(self):
        return self.enh_groups * self.enh_nodes

    @property
    def k(self):
        return self.n_features + self.n_enhancement


@dataclass(frozen=True)
class NetworkParams:
    w_e: list = field(default_factory=list)  # q x feature_nodes, one per group
    beta_e: list = field(default_factory=list)  # feature_nodes
    w_h: list = field(default_factory=list)  # n_features x enh_nodes
    beta_h: list = field(default_factory=list)  # enh_nodes


def gen_params(config: NetworkConfig) -> NetworkParams:
    """Draw all weights and biases i.i.d. uniform on [-1, 1].

    Uses the counter-based Philox generator keyed by ``config.seed``, so the
    same config always yields bitwise-identical parameters.
    """
    if config.input_dim is None:
        raise ValueError("config.input_dim must be set before generating parameters")
    rng = np.random.Generator(np.random.Philox(key=int(config.seed)))
    q, fn, en = config.input_dim, config.feature_nodes, config.enh_nodes
    w_e, beta_e, w_h, beta_h = [], [], [], []
    for _ in range(config.feature_groups):
        w_e.append(rng.uniform(-1.0, 1.0, size=(q, fn)))
        beta_e.append(rng.uniform(-1.0, 1.0, size=fn))
    for _ in range(config.enh_groups):
        w_h.append(rng.uniform(-1.0, 1.0, size=(config.n_features, en)))
        beta_h.append(rng.uniform(-1.0, 1.0, size=en))
    return NetworkParams(w_e=w_e, beta_e=beta_e, w_h=w_h, beta_h=beta_h)


def _project(x, w, b):
    # (l, 1, q) @ (q, n): identical BLAS call per row, so rows never depend on l.
    return np.matmul(x[:, None, :], w)[:, 0, :] + b


def _as_input(x, cols, name):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != cols:
        raise DimensionMismatch(f"{name} must have {cols} columns, got shape {x.shape}")
    return np.ascontiguousarray(x)


def map_features(x, params: NetworkParams, config: NetworkConfig):
    x = _as_input(x, params.w_e[0].shape[0], "X")
    phi = ACTIVATIONS[config.phi]
    return np.hstack([phi(_project(x, w, b)) for w, b in zip(params.w_e, params.beta_e)])


def enhance(zn, params: NetworkParams, config: NetworkConfig):
    zn = _as_input(zn, params.w_h[0].shape[0], "Zn")
    xi = ACTIVATIONS[config.xi]
    scale = config.enh_scale
    return np.hstack(
        [xi(_project(zn, w if scale == 1.0 else scale * w, b)) for w, b in zip(params.w_h, params.beta_h)]
    )


def build_expanded(x, params: NetworkParams, config: NetworkConfig):
    """Expanded input ``[Zn | Hm]`` (l x k)."""
    zn = map_features(x, params, config)
    return np.hstack([zn, enhance(zn, params, config)])


def incremental_expanded(x_p, params: NetworkParams, config: NetworkConfig):
    """Expanded rows for newly arrived raw inputs, using the stored random weights."""
    return build_expanded(x_p, params, config)
