"""From-scratch recurrent regressor: LSTM over a scalar series, then three
dense layers, trained with log-cosh loss and Adam.

Every operation here is pure: parameters, optimizer state and caches are
explicit values, nothing hides inside module globals. All arithmetic is
float64. The batch convention is row vectors: a batch of B windows of
length N is a (B, N) array, hidden states are (B, H), dense activations
(B, D), and matrix weights multiply on the right (h @ w).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from .errors import InputError, NumericError

_LN2 = math.log(2.0)
_CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class Hyperparams:
    """Network sizes plus everything the training loop needs.

    Defaults keep the model deliberately small; with only a couple dozen
    yearly data points per word, a large model just memorizes.
    """

    hidden_size: int = 32
    dense1: int = 64
    dense2: int = 32
    dropout: float = 0.3
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 200
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.hidden_size, self.dense1, self.dense2) < 1:
            raise InputError("layer sizes must be >= 1")
        if not 0.0 <= self.dropout < 1.0:
            raise InputError("dropout must satisfy 0 <= p < 1")
        if self.learning_rate <= 0.0:
            raise InputError("learning rate must be positive")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise InputError("Adam betas must satisfy 0 <= beta < 1")
        if self.epsilon <= 0.0:
            raise InputError("Adam epsilon must be positive")
        if self.epochs < 0:
            raise InputError("epochs must be >= 0")
        if self.batch_size < 1:
            raise InputError("batch size must be >= 1")

    def with_seed(self, seed: int) -> "Hyperparams":
        return replace(self, seed=seed)


@dataclass
class ModelParams:
    """All trainable arrays. Gate order everywhere is input, forget,
    candidate (g), output; w_x* are per-gate input weights for the scalar
    input, w_h* the recurrent matrices."""

    w_xi: np.ndarray
    w_xf: np.ndarray
    w_xg: np.ndarray
    w_xo: np.ndarray
    w_hi: np.ndarray
    w_hf: np.ndarray
    w_hg: np.ndarray
    w_ho: np.ndarray
    b_i: np.ndarray
    b_f: np.ndarray
    b_g: np.ndarray
    b_o: np.ndarray
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    w3: np.ndarray
    b3: np.ndarray

    def items(self) -> Iterator[tuple[str, np.ndarray]]:
        for f in fields(self):
            yield f.name, getattr(self, f.name)

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "ModelParams":
        return ModelParams(**{name: fn(arr) for name, arr in self.items()})

    def copy(self) -> "ModelParams":
        return self.map(np.copy)

    @property
    def hidden_size(self) -> int:
        return self.w_hi.shape[0]

    @property
    def dense_sizes(self) -> tuple[int, int]:
        return self.w1.shape[1], self.w2.shape[1]


@dataclass
class AdamState:
    """First/second moment accumulators shaped like the parameters."""

    m: ModelParams
    v: ModelParams
    t: int = 0

    @classmethod
    def zeros_like(cls, params: ModelParams) -> "AdamState":
        return cls(m=params.map(np.zeros_like), v=params.map(np.zeros_like), t=0)


@dataclass
class ForwardCache:
    """Everything backward() needs to replay one forward pass exactly."""

    gates_i: np.ndarray  # (N, B, H)
    gates_f: np.ndarray
    gates_g: np.ndarray
    gates_o: np.ndarray
    cells: np.ndarray  # (N + 1, B, H), cells[0] is the zero initial state
    tanh_cells: np.ndarray  # (N, B, H)
    hiddens: np.ndarray  # (N + 1, B, H)
    a1: np.ndarray  # (B, D1) dense1 preactivation
    mask1: np.ndarray  # (B, D1) inverted-dropout mask, entries 0 or 1/(1-p)
    d1: np.ndarray  # (B, D1) after relu and dropout
    a2: np.ndarray  # (B, D2)
    mask2: np.ndarray
    d2: np.ndarray
    pred: np.ndarray  # (B,)
    training: bool


def init_params(hyper: Hyperparams, rng: np.random.Generator) -> ModelParams:
    """Uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for every array
    (fan_in of the layer the array feeds), except the LSTM forget gate
    bias, which starts at a constant 1 so early training does not wipe the
    cell state. Arrays are drawn in field order, so a given seed always
    yields the same model.
    """
    h, d1, d2 = hyper.hidden_size, hyper.dense1, hyper.dense2
    s_lstm = 1.0 / math.sqrt(1 + h)

    def u(bound, *shape):
        return rng.uniform(-bound, bound, size=shape)

    return ModelParams(
        w_xi=u(s_lstm, h),
        w_xf=u(s_lstm, h),
        w_xg=u(s_lstm, h),
        w_xo=u(s_lstm, h),
        w_hi=u(s_lstm, h, h),
        w_hf=u(s_lstm, h, h),
        w_hg=u(s_lstm, h, h),
        w_ho=u(s_lstm, h, h),
        b_i=u(s_lstm, h),
        b_f=np.ones(h),
        b_g=u(s_lstm, h),
        b_o=u(s_lstm, h),
        w1=u(1.0 / math.sqrt(h), h, d1),
        b1=u(1.0 / math.sqrt(h), d1),
        w2=u(1.0 / math.sqrt(d1), d1, d2),
        b2=u(1.0 / math.sqrt(d1), d2),
        w3=u(1.0 / math.sqrt(d2), d2),
        b3=u(1.0 / math.sqrt(d2)),
    )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(
    params: ModelParams,
    batch: np.ndarray,
    training: bool = False,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, ForwardCache]:
    """Run the network on a (B, N) batch of scalar series.

    The LSTM consumes the N timesteps; its final hidden state feeds
    dense1 -> relu -> dropout -> dense2 -> relu -> dropout -> dense3, and
    the output is a raw scalar per row (no output activation). Dropout is
    inverted (masks carry the 1/(1-p) scaling) and only applied when
    training is true; inference is deterministic.
    """
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 2 or batch.shape[1] < 1:
        raise InputError(f"forward expects a (B, N) batch, got shape {batch.shape}")
    if not np.isfinite(batch).all():
        raise NumericError("forward input contains non-finite values")
    if not 0.0 <= dropout < 1.0:
        raise InputError("dropout must satisfy 0 <= p < 1")
    if training and dropout > 0.0 and rng is None:
        raise InputError("training with dropout needs a random generator")

    b, n = batch.shape
    h_size = params.hidden_size
    d1_size, d2_size = params.dense_sizes

    # The four gates share one fused preactivation matmul per timestep;
    # slice order is i, f, g, o.
    w_x = np.concatenate([params.w_xi, params.w_xf, params.w_xg, params.w_xo])
    w_h = np.concatenate([params.w_hi, params.w_hf, params.w_hg, params.w_ho], axis=1)
    bias = np.concatenate([params.b_i, params.b_f, params.b_g, params.b_o])

    gates_i = np.empty((n, b, h_size))
    gates_f = np.empty((n, b, h_size))
    gates_g = np.empty((n, b, h_size))
    gates_o = np.empty((n, b, h_size))
    cells = np.zeros((n + 1, b, h_size))
    tanh_cells = np.empty((n, b, h_size))
    hiddens = np.zeros((n + 1, b, h_size))

    h = hiddens[0]
    c = cells[0]
    for t in range(n):
        x = batch[:, t][:, None]  # (B, 1) scalar input this step
        z = x * w_x + h @ w_h + bias
        i = _sigmoid(z[:, :h_size])
        f = _sigmoid(z[:, h_size : 2 * h_size])
        g = np.tanh(z[:, 2 * h_size : 3 * h_size])
        o = _sigmoid(z[:, 3 * h_size :])
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        gates_i[t], gates_f[t], gates_g[t], gates_o[t] = i, f, g, o
        cells[t + 1] = c
        tanh_cells[t] = tc
        hiddens[t + 1] = h

    if training and dropout > 0.0:
        keep = 1.0 - dropout
        mask1 = (rng.random((b, d1_size)) < keep).astype(np.float64) / keep
        mask2 = (rng.random((b, d2_size)) < keep).astype(np.float64) / keep
    else:
        mask1 = np.ones((b, d1_size))
        mask2 = np.ones((b, d2_size))

    a1 = h @ params.w1 + params.b1
    d1 = np.maximum(a1, 0.0) * mask1
    a2 = d1 @ params.w2 + params.b2
    d2 = np.maximum(a2, 0.0) * mask2
    pred = d2 @ params.w3 + params.b3

    cache = ForwardCache(
        gates_i=gates_i,
        gates_f=gates_f,
        gates_g=gates_g,
        gates_o=gates_o,
        cells=cells,
        tanh_cells=tanh_cells,
        hiddens=hiddens,
        a1=a1,
        mask1=mask1,
        d1=d1,
        a2=a2,
        mask2=mask2,
        d2=d2,
        pred=pred,
        training=training,
    )
    return pred, cache


def logcosh_loss(pred: np.ndarray, target: np.ndarray) -> float:
    """Mean of ln(cosh(pred - target)).

    For |x| >= 1 uses ln cosh x = |x| + ln(1 + e^(-2|x|)) - ln 2, which
    never overflows and degrades gracefully to |x| - ln 2. Below 1 that
    form loses relative precision to cancellation, so the identity
    ln cosh x = ln(1 + 2 sinh(x/2)^2) is used instead; it stays accurate
    to a few ulps down to x = 0 (and is exactly 0 there).
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape or pred.ndim != 1 or pred.size < 1:
        raise InputError(
            f"loss needs two equal-length vectors, got {pred.shape} and {target.shape}"
        )
    d = np.abs(pred - target)
    out = np.empty_like(d)
    small = d < 1.0
    out[small] = np.log1p(2.0 * np.sinh(0.5 * d[small]) ** 2)
    big = ~small
    out[big] = d[big] + np.log1p(np.exp(-2.0 * d[big])) - _LN2
    return float(out.mean())


def backward(
    params: ModelParams,
    cache: ForwardCache,
    batch: np.ndarray,
    target: np.ndarray,
) -> ModelParams:
    """Exact gradient of logcosh_loss(forward(batch), target) in the
    parameters, by backpropagation through time.

    The loss derivative per element is tanh(pred - target) / B; everything
    after that is the chain rule through the cached activations.
    """
    batch = np.asarray(batch, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    n, b, h_size = cache.gates_i.shape
    if batch.shape != (b, n):
        raise InputError(f"batch shape {batch.shape} does not match cache ({b}, {n})")
    if target.shape != (b,):
        raise InputError(f"target shape {target.shape} does not match batch size {b}")
    if h_size != params.hidden_size or cache.a1.shape[1] != params.w1.shape[1]:
        raise InputError("cache does not match the given parameters")

    d_pred = np.tanh(cache.pred - target) / b  # (B,)

    g_w3 = cache.d2.T @ d_pred
    g_b3 = np.asarray(d_pred.sum())
    d_d2 = d_pred[:, None] * params.w3[None, :]
    d_a2 = d_d2 * cache.mask2 * (cache.a2 > 0.0)
    g_w2 = cache.d1.T @ d_a2
    g_b2 = d_a2.sum(axis=0)
    d_d1 = d_a2 @ params.w2.T
    d_a1 = d_d1 * cache.mask1 * (cache.a1 > 0.0)
    g_w1 = cache.hiddens[n].T @ d_a1
    g_b1 = d_a1.sum(axis=0)

    d_h = d_a1 @ params.w1.T  # gradient flowing into the final hidden state
    d_c = np.zeros((b, h_size))

    # Fused accumulators, same i/f/g/o slice order as forward.
    w_h = np.concatenate([params.w_hi, params.w_hf, params.w_hg, params.w_ho], axis=1)
    g_w_x = np.zeros(4 * h_size)
    g_w_h = np.zeros((h_size, 4 * h_size))
    g_bias = np.zeros(4 * h_size)
    dz = np.empty((b, 4 * h_size))

    for t in range(n - 1, -1, -1):
        i, f = cache.gates_i[t], cache.gates_f[t]
        g, o = cache.gates_g[t], cache.gates_o[t]
        tc = cache.tanh_cells[t]
        c_prev = cache.cells[t]
        h_prev = cache.hiddens[t]
        x = batch[:, t]

        d_o = d_h * tc
        d_c = d_c + d_h * o * (1.0 - tc * tc)

        dz[:, :h_size] = d_c * g * i * (1.0 - i)
        dz[:, h_size : 2 * h_size] = d_c * c_prev * f * (1.0 - f)
        dz[:, 2 * h_size : 3 * h_size] = d_c * i * (1.0 - g * g)
        dz[:, 3 * h_size :] = d_o * o * (1.0 - o)

        g_w_x += x @ dz
        g_w_h += h_prev.T @ dz
        g_bias += dz.sum(axis=0)

        d_h = dz @ w_h.T
        d_c = d_c * f

    return ModelParams(
        w_xi=g_w_x[:h_size].copy(),
        w_xf=g_w_x[h_size : 2 * h_size].copy(),
        w_xg=g_w_x[2 * h_size : 3 * h_size].copy(),
        w_xo=g_w_x[3 * h_size :].copy(),
        w_hi=g_w_h[:, :h_size].copy(),
        w_hf=g_w_h[:, h_size : 2 * h_size].copy(),
        w_hg=g_w_h[:, 2 * h_size : 3 * h_size].copy(),
        w_ho=g_w_h[:, 3 * h_size :].copy(),
        b_i=g_bias[:h_size].copy(),
        b_f=g_bias[h_size : 2 * h_size].copy(),
        b_g=g_bias[2 * h_size : 3 * h_size].copy(),
        b_o=g_bias[3 * h_size :].copy(),
        w1=g_w1,
        b1=g_b1,
        w2=g_w2,
        b2=g_b2,
        w3=g_w3,
        b3=g_b3,
    )


def adam_step(
    params: ModelParams,
    grads: ModelParams,
    state: AdamState,
    hyper: Hyperparams,
) -> tuple[ModelParams, AdamState]:
    """One bias-corrected Adam update; returns new params and state."""
    new_params = {}
    new_m = {}
    new_v = {}
    t = state.t + 1
    bc1 = 1.0 - hyper.beta1**t
    bc2 = 1.0 - hyper.beta2**t
    for (name, p), (_, g), (_, m), (_, v) in zip(
        params.items(), grads.items(), state.m.items(), state.v.items()
    ):
        if p.shape != g.shape:
            raise InputError(f"gradient shape mismatch for {name}")
        if not np.isfinite(g).all():
            raise NumericError(f"non-finite gradient for {name}")
        m_new = hyper.beta1 * m + (1.0 - hyper.beta1) * g
        v_new = hyper.beta2 * v + (1.0 - hyper.beta2) * g * g
        m_hat = m_new / bc1
        v_hat = v_new / bc2
        new_params[name] = p - hyper.learning_rate * m_hat / (np.sqrt(v_hat) + hyper.epsilon)
        new_m[name] = m_new
        new_v[name] = v_new
    return ModelParams(**new_params), AdamState(ModelParams(**new_m), ModelParams(**new_v), t)


def numeric_gradients(
    params: ModelParams,
    batch: np.ndarray,
    target: np.ndarray,
    epsilon: float = 1e-5,
) -> ModelParams:
    """Central-difference gradient of the deterministic (no-dropout) loss.

    Slow by construction; exists as the independent reference that
    grad_check and the test suite compare backward() against.
    """
    work = params.copy()

    def loss_at() -> float:
        pred, _ = forward(work, batch, training=False)
        return logcosh_loss(pred, target)

    grads = {}
    for name, arr in work.items():
        g = np.zeros_like(arr)
        for idx in np.ndindex(arr.shape):
            orig = arr[idx]
            arr[idx] = orig + epsilon
            loss_plus = loss_at()
            arr[idx] = orig - epsilon
            loss_minus = loss_at()
            arr[idx] = orig
            g[idx] = (loss_plus - loss_minus) / (2.0 * epsilon)
        grads[name] = g
    return ModelParams(**grads)


def max_relative_error(a: ModelParams, b: ModelParams) -> float:
    """max over parameters of |a - b| / max(|a|, |b|, 1e-12)."""
    worst = 0.0
    for (_, x), (_, y) in zip(a.items(), b.items()):
        denom = np.maximum(np.maximum(np.abs(x), np.abs(y)), 1e-12)
        err = np.abs(x - y) / denom
        if err.size:
            worst = max(worst, float(err.max()))
    return worst


def grad_check(
    params: ModelParams,
    batch: np.ndarray,
    target: np.ndarray,
    epsilon: float = 1e-5,
) -> float:
    """Worst-case relative disagreement between analytic and numeric gradients.

    Dropout is disabled on both paths, so the comparison is deterministic.
    """
    _, cache = forward(params, batch, training=False)
    analytic = backward(params, cache, batch, np.asarray(target, dtype=np.float64))
    numeric = numeric_gradients(params, batch, target, epsilon)
    return max_relative_error(analytic, numeric)


def save_checkpoint(
    file: str | Path,
    params: ModelParams,
    state: AdamState,
    hyper: Hyperparams,
) -> None:
    """Single-file .npz checkpoint. Keys: format_version, hyper (JSON),
    adam_t, and per-array entries param_<name>, m_<name>, v_<name>.
    Arrays round-trip bit-exactly.
    """
    payload: dict[str, np.ndarray] = {
        "format_version": np.int64(_CHECKPOINT_VERSION),
        "hyper": np.array(json.dumps(asdict(hyper), sort_keys=True)),
        "adam_t": np.int64(state.t),
    }
    for name, arr in params.items():
        payload[f"param_{name}"] = arr
    for name, arr in state.m.items():
        payload[f"m_{name}"] = arr
    for name, arr in state.v.items():
        payload[f"v_{name}"] = arr
    np.savez(Path(file), **payload)


def load_checkpoint(file: str | Path) -> tuple[ModelParams, AdamState, Hyperparams]:
    path = Path(file)
    try:
        with np.load(path, allow_pickle=False) as data:
            version = int(data["format_version"])
            if version != _CHECKPOINT_VERSION:
                raise InputError(f"unsupported checkpoint version {version} in {path}")
            hyper = Hyperparams(**json.loads(str(data["hyper"])))
            names = [f.name for f in fields(ModelParams)]
            params = ModelParams(**{n: data[f"param_{n}"] for n in names})
            m = ModelParams(**{n: data[f"m_{n}"] for n in names})
            v = ModelParams(**{n: data[f"v_{n}"] for n in names})
            state = AdamState(m=m, v=v, t=int(data["adam_t"]))
    except (OSError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read checkpoint {path}: {exc}") from exc
    return params, state, hyper
