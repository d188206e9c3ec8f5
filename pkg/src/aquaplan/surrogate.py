"""Surrogate models for expensive objectives.

Two interchangeable families, both exposing ``predict(x) -> (mean, var)``:

* a Gaussian process with a squared-exponential kernel, fit by exact
  Cholesky inference with the lengthscale chosen by log-marginal-likelihood
  grid search, and
* a small feed-forward network whose predictive variance comes from
  Monte Carlo dropout.

The GP is deterministic by construction.  The network is deterministic
per seed: weight initialisation and training-time dropout masks are drawn
from an explicit torch generator, and the dropout masks used for the
variance passes are drawn from a numpy generator stored with the model,
so repeated ``predict`` calls agree bitwise.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError
from scipy.spatial.distance import cdist

from .errors import DomainError, FitError, StateError, TrainingError

_SNAPSHOT_VERSION = 1

__all__ = [
    "GpModel",
    "MlpModel",
    "gp_fit",
    "gp_predict",
    "mlp_fit",
    "mlp_predict",
    "split_train_test",
    "model_to_json",
    "model_from_json",
]

_LENGTHSCALES = np.logspace(np.log10(0.01), np.log10(10.0), 20)
_JITTERS = (0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)
_VAR_FLOOR = -1e-10


def _as_2d(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise DomainError("x must be a 1-D or 2-D array")
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")
    return x


def _as_1d(y, n):
    y = np.asarray(y, dtype=float).ravel()
    if y.size != n:
        raise DomainError("x and y lengths differ")
    if not np.all(np.isfinite(y)):
        raise DomainError("y must be finite")
    return y


def _canonical_order(x, y):
    # column-major lexicographic sort, y as final tiebreak, so that any
    # permutation of the same training set factors identically
    keys = [y] + [x[:, j] for j in range(x.shape[1] - 1, -1, -1)]
    order = np.lexsort(keys)
    return x[order], y[order]


def _sq_kernel(xa, xb, lengthscale, signal_var):
    return signal_var * np.exp(-cdist(xa, xb, "sqeuclidean") / (2.0 * lengthscale**2))


@dataclass
class GpModel:
    """Fitted squared-exponential GP with exact Cholesky inference."""

    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    lengthscale: float
    signal_var: float
    noise_var: float
    jitter: float
    y_mean: float
    chol: tuple = field(repr=False, default=None)
    alpha: np.ndarray = field(repr=False, default=None)

    def predict(self, xq):
        return gp_predict(self, xq)


def _factor(gram, noise_var):
    """Cholesky with escalating jitter; returns (chol, jitter_used)."""
    n = gram.shape[0]
    for jitter in _JITTERS:
        try:
            chol = cho_factor(gram + (noise_var + jitter) * np.eye(n), lower=True)
            return chol, jitter
        except LinAlgError:
            continue
    raise FitError("kernel matrix is not positive definite even with jitter 1e-4")


def _log_marginal(chol, centered):
    alpha = cho_solve(chol, centered)
    logdet = 2.0 * np.sum(np.log(np.diag(chol[0])))
    n = centered.size
    return -0.5 * centered @ alpha - 0.5 * logdet - 0.5 * n * np.log(2.0 * np.pi)


def gp_fit(x, y, noise_var=1e-6, lengthscales=None):
    """Fit the GP; lengthscale picked by marginal-likelihood grid search."""
    x = _as_2d(x)
    y = _as_1d(y, x.shape[0])
    if noise_var < 0:
        raise DomainError("noise_var must be >= 0")
    if x.shape[0] < 1:
        raise DomainError("need at least one training point")
    x, y = _canonical_order(x, y)
    if noise_var == 0.0 and x.shape[0] > 1:
        dup = np.all(np.diff(x, axis=0) == 0.0, axis=1)
        if np.any(dup):
            raise FitError("duplicate inputs with zero noise make the kernel singular")

    y_mean = float(np.mean(y))
    centered = y - y_mean
    var_y = float(np.var(y))
    signal_var = var_y if var_y > 1e-12 else 1.0

    grid = _LENGTHSCALES if lengthscales is None else np.asarray(lengthscales, float)
    best = None
    for ls in grid:
        gram = _sq_kernel(x, x, ls, signal_var)
        try:
            chol, jitter = _factor(gram, noise_var)
        except FitError:
            continue
        lml = _log_marginal(chol, centered)
        if best is None or lml > best[0]:
            best = (lml, float(ls), chol, jitter)
    if best is None:
        raise FitError("no lengthscale produced a positive-definite kernel")
    _, lengthscale, chol, jitter = best
    alpha = cho_solve(chol, centered)
    return GpModel(x=x, y=y, lengthscale=lengthscale, signal_var=signal_var,
                   noise_var=float(noise_var), jitter=jitter, y_mean=y_mean,
                   chol=chol, alpha=alpha)


def gp_predict(model: GpModel, xq):
    """Posterior mean and variance (variance includes the noise term)."""
    xq = _as_2d(xq)
    if xq.shape[1] != model.x.shape[1]:
        raise DomainError("query dimension does not match training data")
    if model.chol is None or model.alpha is None:
        raise StateError("model has no factorization; fit it or load a snapshot")
    ks = _sq_kernel(model.x, xq, model.lengthscale, model.signal_var)
    mean = model.y_mean + ks.T @ model.alpha
    from scipy.linalg import solve_triangular

    v = solve_triangular(model.chol[0], ks, lower=True)
    var = model.signal_var + model.noise_var + model.jitter - np.sum(v**2, axis=0)
    bad = var < _VAR_FLOOR
    if np.any(bad):
        raise FitError(f"predictive variance {var[bad].min():.3e} below tolerance")
    return mean, np.maximum(var, 0.0)


def _refactor(model: GpModel):
    gram = _sq_kernel(model.x, model.x, model.lengthscale, model.signal_var)
    n = gram.shape[0]
    try:
        model.chol = cho_factor(gram + (model.noise_var + model.jitter) * np.eye(n),
                                lower=True)
    except LinAlgError as exc:
        raise FitError("stored model no longer factors") from exc
    model.alpha = cho_solve(model.chol, model.y - model.y_mean)


@dataclass
class MlpModel:
    """Trained dropout network: weights at rest as numpy arrays."""

    weights: list = field(repr=False)
    biases: list = field(repr=False)
    x_mean: np.ndarray = field(repr=False)
    x_scale: np.ndarray = field(repr=False)
    y_mean: float
    y_scale: float
    dropout: float
    mc_passes: int
    mask_seed: int
    initial_loss: float
    final_loss: float

    def predict(self, xq):
        return mlp_predict(self, xq)


def _standardize(arr):
    mean = arr.mean(axis=0)
    scale = arr.std(axis=0)
    scale = np.where(scale < 1e-12, 1.0, scale)
    return (arr - mean) / scale, mean, scale


def mlp_fit(x, y, seed=0, hidden=64, dropout=0.5, lr=0.01, epochs=200,
            mc_passes=32):
    """Train the two-hidden-layer dropout network on standardized data."""
    import torch

    x = _as_2d(x)
    y = _as_1d(y, x.shape[0])
    if x.shape[0] < 8:
        raise DomainError("need at least 8 training points")
    if not 0.0 <= dropout < 1.0:
        raise DomainError("dropout must lie in [0, 1)")
    xs, x_mean, x_scale = _standardize(x)
    y_std = float(np.std(y))
    y_scale = y_std if y_std > 1e-12 else 1.0
    y_mean = float(np.mean(y))
    ys = (y - y_mean) / y_scale

    gen = torch.Generator().manual_seed(int(seed))
    sizes = [(hidden, x.shape[1]), (hidden, hidden), (1, hidden)]
    weights, biases = [], []
    for out_f, in_f in sizes:
        bound = 1.0 / np.sqrt(in_f)
        w = torch.empty(out_f, in_f, dtype=torch.float64)
        b = torch.empty(out_f, dtype=torch.float64)
        w.uniform_(-bound, bound, generator=gen)
        b.uniform_(-bound, bound, generator=gen)
        w.requires_grad_(True)
        b.requires_grad_(True)
        weights.append(w)
        biases.append(b)

    xt = torch.from_numpy(xs)
    yt = torch.from_numpy(ys)
    keep = 1.0 - dropout
    opt = torch.optim.Adam(weights + biases, lr=lr)
    initial_loss = None
    loss_val = float("nan")
    for _ in range(epochs):
        h = torch.relu(xt @ weights[0].T + biases[0])
        if dropout > 0.0:
            # functional dropout has no generator argument, so masks are drawn by hand
            m = (torch.rand(h.shape, generator=gen, dtype=torch.float64) < keep)
            h = h * m / keep
        h = torch.relu(h @ weights[1].T + biases[1])
        if dropout > 0.0:
            m = (torch.rand(h.shape, generator=gen, dtype=torch.float64) < keep)
            h = h * m / keep
        out = (h @ weights[2].T + biases[2]).squeeze(-1)
        loss = torch.mean((out - yt) ** 2)
        loss_val = float(loss.detach())
        if initial_loss is None:
            initial_loss = loss_val
        if not np.isfinite(loss_val):
            raise TrainingError(f"loss became non-finite ({loss_val})")
        opt.zero_grad()
        loss.backward()
        opt.step()

    return MlpModel(
        weights=[w.detach().numpy() for w in weights],
        biases=[b.detach().numpy() for b in biases],
        x_mean=x_mean, x_scale=x_scale, y_mean=y_mean, y_scale=y_scale,
        dropout=dropout, mc_passes=mc_passes, mask_seed=int(seed) + 1,
        initial_loss=initial_loss, final_loss=loss_val,
    )


def _mlp_forward(model: MlpModel, xs, rng=None):
    keep = 1.0 - model.dropout
    h = np.maximum(xs @ model.weights[0].T + model.biases[0], 0.0)
    if rng is not None and model.dropout > 0.0:
        h = h * (rng.random(h.shape) < keep) / keep
    h = np.maximum(h @ model.weights[1].T + model.biases[1], 0.0)
    if rng is not None and model.dropout > 0.0:
        h = h * (rng.random(h.shape) < keep) / keep
    return (h @ model.weights[2].T + model.biases[2]).ravel()


def mlp_predict(model: MlpModel, xq):
    """Deterministic mean (dropout off) and MC-dropout sample variance."""
    xq = _as_2d(xq)
    if xq.shape[1] != model.x_mean.size:
        raise DomainError("query dimension does not match training data")
    xs = (xq - model.x_mean) / model.x_scale
    mean = model.y_mean + model.y_scale * _mlp_forward(model, xs)
    rng = np.random.default_rng(model.mask_seed)
    draws = np.stack([_mlp_forward(model, xs, rng) for _ in range(model.mc_passes)])
    var = model.y_scale**2 * np.var(draws, axis=0, ddof=1)
    return mean, var


def split_train_test(x, y, test_fraction=0.2, seed=0):
    """Seeded random split; returns (x_train, y_train, x_test, y_test)."""
    x = _as_2d(x)
    y = _as_1d(y, x.shape[0])
    if not 0.0 <= test_fraction < 1.0:
        raise DomainError("test_fraction must lie in [0, 1)")
    n = x.shape[0]
    order = np.random.default_rng(seed).permutation(n)
    n_test = int(np.floor(n * test_fraction))
    test, train = order[:n_test], order[n_test:]
    return x[train], y[train], x[test], y[test]


def model_to_json(model):
    """Serialize either surrogate family to a JSON snapshot string."""
    if isinstance(model, GpModel):
        payload = {
            "version": _SNAPSHOT_VERSION,
            "kind": "gp",
            "x": model.x.tolist(),
            "y": model.y.tolist(),
            "lengthscale": model.lengthscale,
            "signal_var": model.signal_var,
            "noise_var": model.noise_var,
            "jitter": model.jitter,
            "y_mean": model.y_mean,
        }
    elif isinstance(model, MlpModel):
        payload = {
            "version": _SNAPSHOT_VERSION,
            "kind": "mlp",
            "weights": [w.tolist() for w in model.weights],
            "biases": [b.tolist() for b in model.biases],
            "x_mean": model.x_mean.tolist(),
            "x_scale": model.x_scale.tolist(),
            "y_mean": model.y_mean,
            "y_scale": model.y_scale,
            "dropout": model.dropout,
            "mc_passes": model.mc_passes,
            "mask_seed": model.mask_seed,
            "initial_loss": model.initial_loss,
            "final_loss": model.final_loss,
        }
    else:
        raise DomainError(f"cannot serialize {type(model).__name__}")
    return json.dumps(payload)


def model_from_json(text):
    """Rebuild a surrogate from :func:`model_to_json` output."""
    payload = json.loads(text)
    if payload.get("version") != _SNAPSHOT_VERSION:
        raise DomainError(f"unsupported snapshot version {payload.get('version')!r}")
    kind = payload.get("kind")
    if kind == "gp":
        model = GpModel(
            x=np.asarray(payload["x"], float),
            y=np.asarray(payload["y"], float),
            lengthscale=payload["lengthscale"],
            signal_var=payload["signal_var"],
            noise_var=payload["noise_var"],
            jitter=payload["jitter"],
            y_mean=payload["y_mean"],
        )
        _refactor(model)
        return model
    if kind == "mlp":
        return MlpModel(
            weights=[np.asarray(w, float) for w in payload["weights"]],
            biases=[np.asarray(b, float) for b in payload["biases"]],
            x_mean=np.asarray(payload["x_mean"], float),
            x_scale=np.asarray(payload["x_scale"], float),
            y_mean=payload["y_mean"],
            y_scale=payload["y_scale"],
            dropout=payload["dropout"],
            mc_passes=payload["mc_passes"],
            mask_seed=payload["mask_seed"],
            initial_loss=payload["initial_loss"],
            final_loss=payload["final_loss"],
        )
    raise DomainError(f"unknown snapshot kind {kind!r}")
