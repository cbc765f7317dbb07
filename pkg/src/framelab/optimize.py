"""Smoothed objectives and projected gradient ascent over P(M, N) and E(M, N).

The frame functionals are nonsmooth where inner products, volumes or
singular values vanish.  Each objective has a smoothed surrogate with
parameter ``eps``; :func:`maximize` anneals ``eps`` through a decreasing
schedule, running Armijo line-search ascent within each stage.

Gradients follow the convention ``grad f = 2 df/d(conj Phi)``: for real
frames this is the ordinary gradient, for complex frames the real and
imaginary parts are the partial derivatives with respect to the real and
imaginary parts of the entries.
"""

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import measures
from .constructors import parseval_retract
from .core import Frame, as_array, field_of, gram, subset_blocks, welch_constant
from .errors import InvalidShape, PreconditionFailed, ZeroVector

DEFAULT_EPS_SCHEDULE = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
_ROUNDOFF = 1e-15


class ObjectiveKind(enum.Enum):
    TOTAL_COHERENCE = "tc"
    TOTAL_VOLUME = "vk"
    TOTAL_COMP_VOLUME = "cvk"
    NUCLEAR_ENERGY = "ne"
    NEG_EAD = "neg_ead"
    NEG_GRAM_VARIANCE = "neg_gram_variance"


class Manifold(enum.Enum):
    PARSEVAL = "parseval"
    EQUAL_NORM = "equal_norm"


class Status(enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    LINE_SEARCH_FAILED = "line_search_failed"


@dataclass(frozen=True)
class Objective:
    kind: ObjectiveKind
    k: int = None
    smoothing_eps: float = 1e-2

    def __post_init__(self):
        object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        if not self.smoothing_eps > 0:
            raise ValueError("smoothing_eps must be positive")
        if self.kind in _K_KINDS and self.k is None:
            raise ValueError(f"{self.kind.value} needs k")

    def with_eps(self, eps):
        return replace(self, smoothing_eps=eps)

    def check_shape(self, n, m):
        k = self.k
        if self.kind is ObjectiveKind.TOTAL_VOLUME and not 1 <= k <= min(n, m):
            raise InvalidShape(f"V_k needs 1 <= k <= N, got k={k}, N={n}")
        if self.kind is ObjectiveKind.TOTAL_COMP_VOLUME and not n <= k <= m:
            raise InvalidShape(f"CV_k needs N <= k <= M, got k={k}, N={n}, M={m}")
        if self.kind is ObjectiveKind.NUCLEAR_ENERGY and not 1 <= k <= m:
            raise InvalidShape(f"NE_k needs 1 <= k <= M, got k={k}, M={m}")
        if self.kind in (ObjectiveKind.NEG_EAD,) and not n < m:
            raise InvalidShape("EAD needs N < M")


_K_KINDS = (ObjectiveKind.TOTAL_VOLUME, ObjectiveKind.TOTAL_COMP_VOLUME, ObjectiveKind.NUCLEAR_ENERGY)


@dataclass(frozen=True)
class OptimizerConfig:
    manifold: Manifold = Manifold.PARSEVAL
    max_iters: int = 500
    step_init: float = 0.1
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    grad_tol: float = 1e-9
    eps_schedule: tuple = DEFAULT_EPS_SCHEDULE
    max_backtracks: int = 60
    seed: int = 0
    deterministic: bool = True

    def __post_init__(self):
        object.__setattr__(self, "manifold", Manifold(self.manifold))
        if self.max_iters < 1 or not self.grad_tol > 0:
            raise ValueError("need max_iters >= 1 and grad_tol > 0")
        if not (0 < self.backtrack_factor < 1 and 0 < self.armijo_c < 1):
            raise ValueError("backtrack_factor and armijo_c must lie in (0, 1)")
        eps = tuple(float(e) for e in self.eps_schedule)
        if not eps or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps_schedule must be positive and strictly decreasing")
        object.__setattr__(self, "eps_schedule", eps)


@dataclass
class IterationRecord:
    iter: int
    eps: float
    f_smooth: float
    f_true: float
    grad_norm: float
    step: float


@dataclass
class Trace:
    records: list = field(default_factory=list)
    frame: Frame = None
    status: Status = Status.MAX_ITERS
    best_true: float = None


def smooth_abs(z, eps):
    """``sqrt(|z|^2 + eps^2) - eps`` and its derivative ``conj(z) / sqrt(|z|^2 + eps^2)``."""
    r = np.sqrt(np.abs(z) ** 2 + eps * eps)
    return r - eps, np.conj(z) / r


# -- smoothed values and gradients -----------------------------------------

def _pair_weights(g, eps):
    """Smoothed magnitudes ``a`` and ``G / r`` on the off-diagonal; zero on the diagonal."""
    m = g.shape[0]
    off = ~np.eye(m, dtype=bool)
    r = np.sqrt(np.abs(g) ** 2 + eps * eps)
    a = np.where(off, r - eps, 0.0)
    unit = np.where(off, g / r, 0.0)
    return a, unit, off


def _tc(a, eps, want_grad):
    g = gram(a)
    mag, unit, _ = _pair_weights(g, eps)
    val = float(mag.sum())
    return val, (2 * a @ unit if want_grad else None)


def _spread(a, eps, want_grad, centre):
    """Smoothed EAD (``centre='welch'``) or Gram variance (``centre='mean'``)."""
    n, m = a.shape
    g = gram(a)
    mag, unit, off = _pair_weights(g, eps)
    diag = g.diagonal().real - n / m
    if centre == "welch":
        c = welch_constant(m, n)
    else:
        c = mag[off].mean() if m > 1 else 0.0
    dev = np.where(off, mag - c, 0.0)
    val = float(np.sum(diag ** 2) + np.sum(dev ** 2))
    if not want_grad:
        return val, None
    # d/dc of the mean-centred variance vanishes, so one weight formula serves both
    w = 2 * dev * unit + np.diag(2 * diag)
    return val, 2 * a @ w


def _stack(a, idx):
    return np.moveaxis(a[:, idx], 1, 0)  # (S, N, k)


def _blocks_reduce(a, k, fn, want_grad, cap):
    n, m = a.shape
    total = 0.0
    grad = np.zeros_like(a) if want_grad else None
    for idx in subset_blocks(m, k, cap):
        f = _stack(a, idx)
        vals, grads = fn(f, want_grad)
        total += float(np.sum(vals))
        if want_grad:
            # scatter per-subset column gradients back onto the frame columns
            np.add.at(grad.T, idx.reshape(-1), np.swapaxes(grads, 1, 2).reshape(-1, n))
    return total, grad


def _smoothed_volume(eps):
    def fn(f, want_grad):
        gk = np.conj(np.swapaxes(f, 1, 2)) @ f
        gk = gk + eps * np.eye(gk.shape[-1])
        sign, logdet = np.linalg.slogdet(gk)
        vals = np.exp(0.5 * logdet.real)
        if not want_grad:
            return vals, None
        return vals, vals[:, None, None] * (f @ np.linalg.inv(gk))
    return fn


def _smoothed_comp_volume(eps):
    def fn(f, want_grad):
        b = f @ np.conj(np.swapaxes(f, 1, 2))
        b = b + eps * np.eye(b.shape[-1])
        sign, logdet = np.linalg.slogdet(b)
        vals = np.exp(0.5 * logdet.real)
        if not want_grad:
            return vals, None
        return vals, vals[:, None, None] * (np.linalg.inv(b) @ f)
    return fn


def _smoothed_nuclear(eps):
    def fn(f, want_grad):
        if not want_grad:
            s = np.linalg.svd(f, compute_uv=False)
            return np.sum(np.sqrt(s * s + eps * eps), axis=1), None
        u, s, vh = np.linalg.svd(f, full_matrices=False)
        r = np.sqrt(s * s + eps * eps)
        return np.sum(r, axis=1), (u * (s / r)[:, None, :]) @ vh
    return fn


def _evaluate(a, objective, want_grad, cap=None):
    eps = objective.smoothing_eps
    kind = objective.kind
    if kind is ObjectiveKind.TOTAL_COHERENCE:
        return _tc(a, eps, want_grad)
    if kind is ObjectiveKind.NEG_EAD:
        val, grad = _spread(a, eps, want_grad, "welch")
        return -val, (None if grad is None else -grad)
    if kind is ObjectiveKind.NEG_GRAM_VARIANCE:
        val, grad = _spread(a, eps, want_grad, "mean")
        return -val, (None if grad is None else -grad)
    builders = {
        ObjectiveKind.TOTAL_VOLUME: _smoothed_volume,
        ObjectiveKind.TOTAL_COMP_VOLUME: _smoothed_comp_volume,
        ObjectiveKind.NUCLEAR_ENERGY: _smoothed_nuclear,
    }
    return _blocks_reduce(a, objective.k, builders[kind](eps), want_grad, cap)


def true_value(frame, objective, cap=None):
    """Exact (unsmoothed) value of the objective."""
    a = as_array(frame)
    kind, k = objective.kind, objective.k
    if kind is ObjectiveKind.TOTAL_COHERENCE:
        return measures.total_coherence(a)
    if kind is ObjectiveKind.TOTAL_VOLUME:
        return measures.total_volume(a, k, cap)
    if kind is ObjectiveKind.TOTAL_COMP_VOLUME:
        return measures.total_comp_volume(a, k, cap)
    if kind is ObjectiveKind.NUCLEAR_ENERGY:
        return measures.nuclear_energy(a, k, cap)
    if kind is ObjectiveKind.NEG_EAD:
        return -measures.equiangular_distance(a)
    return -measures.gram_variance(a)[0]


def objective_eval(frame, objective, cap=None):
    """Return ``(smoothed, true_value)``."""
    a = as_array(frame)
    objective.check_shape(*a.shape)
    smoothed, _ = _evaluate(a, objective, False, cap)
    return smoothed, true_value(a, objective, cap)


def objective_grad(frame, objective, cap=None):
    """Euclidean gradient of the smoothed objective, same shape as the frame."""
    a = as_array(frame)
    objective.check_shape(*a.shape)
    grad = _evaluate(a, objective, True, cap)[1]
    return grad.real if not np.iscomplexobj(a) else grad


def bound(objective, m, n):
    """Closed-form upper bound on the true objective over P(M, N), or None."""
    kind, k = objective.kind, objective.k
    if kind is ObjectiveKind.TOTAL_COHERENCE and 0 < n < m:
        return math.sqrt(n * (m - n) * (m - 1))
    if kind is ObjectiveKind.TOTAL_VOLUME:
        return math.sqrt(math.comb(m, k) * math.comb(n, k))
    if kind is ObjectiveKind.TOTAL_COMP_VOLUME:
        return math.sqrt(math.comb(m, k) * math.comb(m - n, m - k))
    if kind in (ObjectiveKind.NEG_EAD, ObjectiveKind.NEG_GRAM_VARIANCE):
        return 0.0
    return None


# -- manifold geometry ------------------------------------------------------

def retract(frame, manifold):
    """Map an arbitrary matrix back to P(M, N) (polar factor) or E(M, N) (column rescale)."""
    a = as_array(frame)
    manifold = Manifold(manifold)
    if manifold is Manifold.PARSEVAL:
        out = parseval_retract(a)
    else:
        n, m = a.shape
        norms = np.linalg.norm(a, axis=0)
        if np.any(norms <= 1e-300):
            raise ZeroVector("cannot rescale a zero column onto the sphere")
        out = a / norms * math.sqrt(n / m)
    return out if not isinstance(frame, Frame) else Frame(out, frame.field)


def project_tangent(a, x, manifold):
    if manifold is Manifold.PARSEVAL:
        s = x @ a.conj().T
        return x - 0.5 * (s + s.conj().T) @ a
    radial = np.sum((np.conj(a) * x).real, axis=0) / np.sum(np.abs(a) ** 2, axis=0)
    return x - a * radial


def manifold_residual(a, manifold):
    n, m = a.shape
    if manifold is Manifold.PARSEVAL:
        return float(np.linalg.norm(a @ a.conj().T - np.eye(n)))
    return float(np.max(np.abs(np.linalg.norm(a, axis=0) - math.sqrt(n / m))))


def maximize(start, objective, config=OptimizerConfig(), cap=None):
    """Projected gradient ascent with Armijo backtracking and eps annealing.

    Each stage of ``config.eps_schedule`` runs until the Riemannian gradient
    norm drops below ``grad_tol``, ``max_iters`` steps pass, or the line
    search fails after ``max_backtracks`` halvings.  The smoothed objective
    never decreases within a stage.
    """
    fld = field_of(start)
    a = np.array(as_array(start), dtype=fld.dtype)
    n, m = a.shape
    objective.check_shape(n, m)
    manifold = config.manifold
    if manifold_residual(a, manifold) > 1e-8:
        raise PreconditionFailed(f"start frame is not on the {manifold.value} manifold")
    trace = Trace()
    it = 0
    status = Status.MAX_ITERS
    for eps in config.eps_schedule:
        obj = objective.with_eps(eps)
        f, grad = _evaluate(a, obj, True, cap)
        step = config.step_init
        status = Status.MAX_ITERS
        for _ in range(config.max_iters):
            if not np.iscomplexobj(a):
                grad = grad.real
            d = project_tangent(a, grad, manifold)
            gnorm = float(np.linalg.norm(d))
            trace.records.append(IterationRecord(it, eps, f, true_value(a, objective, cap), gnorm, step))
            it += 1
            if gnorm < config.grad_tol:
                status = Status.CONVERGED
                break
            accepted = stalled = False
            for _ in range(config.max_backtracks):
                demand = config.armijo_c * step * gnorm * gnorm
                if demand < _ROUNDOFF * max(1.0, abs(f)):
                    # no representable increase is left to demand
                    stalled = True
                    break
                try:
                    cand = retract(a + step * d, manifold)
                    f_new = _evaluate(cand, obj, False, cap)[0]
                except (ZeroVector, np.linalg.LinAlgError, ArithmeticError):
                    f_new = -np.inf
                if f_new >= f + demand:
                    accepted = True
                    break
                step *= config.backtrack_factor
            if stalled:
                status = Status.CONVERGED
                break
            if not accepted:
                status = Status.LINE_SEARCH_FAILED
                break
            a = cand
            f, grad = _evaluate(a, obj, True, cap)
            step = min(step / config.backtrack_factor, 1e3)
    trace.frame = Frame(a, fld)
    trace.status = status
    trace.best_true = true_value(a, objective, cap)
    trace.records.append(IterationRecord(it, config.eps_schedule[-1], f, trace.best_true,
                                         float("nan"), float("nan")))
    return trace


def gradcheck(frame, objective, h=1e-6, cap=None):
    """Largest normwise relative error between analytic and central-difference gradients."""
    a = np.array(as_array(frame))
    objective.check_shape(*a.shape)
    analytic = objective_grad(a, objective, cap)
    directions = [1.0] + ([1j] if np.iscomplexobj(a) else [])
    numeric = np.zeros_like(analytic)
    for unit in directions:
        for idx in np.ndindex(a.shape):
            plus, minus = a.copy(), a.copy()
            plus[idx] += h * unit
            minus[idx] -= h * unit
            fd = (_evaluate(plus, objective, False, cap)[0]
                  - _evaluate(minus, objective, False, cap)[0]) / (2 * h)
            numeric[idx] += fd * unit
    scale = max(float(np.max(np.abs(numeric))), 1e-12)
    return float(np.max(np.abs(analytic - numeric)) / scale)


def multistart(objective, m, n, seeds, config=OptimizerConfig(), field="real", cap=None, jobs=1):
    """Run :func:`maximize` from random feasible starts; traces in seed order."""
    args = [(objective, m, n, int(s), config, field, cap) for s in seeds]
    if jobs and jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, args))
    return [_run_one(arg) for arg in args]


def _run_one(arg):
    from .constructors import random_equal_norm, random_parseval
    objective, m, n, seed, config, field, cap = arg
    make = random_parseval if config.manifold is Manifold.PARSEVAL else random_equal_norm
    return maximize(make(m, n, seed, field), objective, replace(config, seed=seed), cap)
