"""Multi-user MISO downlink through a BD-RIS and sum-rate maximisation.

The receiver ``k`` sees ``h_k = h_RI,k Theta H_IT`` (no direct link) and has
SINR ``|h_k w_k|^2 / (sum_{i != k} |h_k w_i|^2 + sigma^2)``.

The precoder update is weighted MMSE, with the transmit power constraint
handled by a Lagrange multiplier. The RIS is parametrised directly by its
free susceptance components, so every iterate respects the circuit graph and
no projection step is needed. :func:`optimize` offers two schemes:

* ``joint`` (default): a WMMSE pass, then L-BFGS on the components and the
  precoder direction together, then a final WMMSE pass.
* ``alternating``: WMMSE passes interleaved with gradient ascent on the
  components (Armijo backtracking, Barzilai-Borwein trial steps).

Only non-decreasing updates are accepted, so the recorded sum-rate trace is
monotone. Internally the channels are scaled by ``sqrt(P_T)/sigma`` and the
components by ``Z0`` so that every quantity is O(1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy.optimize

from .circuit import (
    Z0,
    PatternError,
    SusceptancePattern,
    assemble_susceptance,
    extract_components,
    scattering_from_susceptance,
)

__all__ = [
    "SystemConfig",
    "ChannelRealization",
    "OptimizerOptions",
    "OptimizationResult",
    "dbm_to_watt",
    "watt_to_dbm",
    "sample_rayleigh",
    "effective_channels",
    "sinr",
    "sum_rate",
    "optimize",
    "rate_gradient",
    "gradient_check",
    "DEFAULT_PATH_GAIN",
]

_LOG2E = 1.0 / math.log(2.0)

# Per-link power gain used for both hops unless configured otherwise. With
# P_T = 10 dBm, sigma^2 = -80 dBm, M = 4, N = 16 and Theta = I this puts the
# median single-user MRT SNR at about 20 dB.
DEFAULT_PATH_GAIN = 10 ** (-4.35)


def dbm_to_watt(p_dbm: float) -> float:
    return 10 ** ((p_dbm - 30) / 10)


def watt_to_dbm(p_w: float) -> float:
    return 10 * math.log10(p_w) + 30


@dataclass(frozen=True)
class SystemConfig:
    """Downlink parameters. Powers are in watts; use :meth:`from_dbm`."""

    M: int = 4
    K: int = 4
    N: int = 16
    P_T: float = dbm_to_watt(10.0)
    noise: float = dbm_to_watt(-80.0)
    path_gain_it: float = DEFAULT_PATH_GAIN
    path_gain_ri: float = DEFAULT_PATH_GAIN
    seed: int = 0

    def __post_init__(self):
        if min(self.M, self.K, self.N) < 1:
            raise ValueError("M, K and N must be >= 1")
        if not (self.P_T > 0 and self.noise > 0):
            raise ValueError("transmit power and noise power must be positive")
        if self.path_gain_it < 0 or self.path_gain_ri < 0:
            raise ValueError("path gains must be non-negative")

    @classmethod
    def from_dbm(cls, *, pt_dbm: float = 10.0, noise_dbm: float = -80.0, **kw) -> "SystemConfig":
        return cls(P_T=dbm_to_watt(pt_dbm), noise=dbm_to_watt(noise_dbm), **kw)


@dataclass(frozen=True)
class ChannelRealization:
    H_it: np.ndarray  # N x M, transmitter to RIS
    h_ri: np.ndarray  # K x N, row k is RIS to receiver k


def _cn(rng, shape, gain):
    return np.sqrt(gain / 2) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_rayleigh(config: SystemConfig, rng: Optional[np.random.Generator] = None) -> ChannelRealization:
    """Draw i.i.d. CN(0, g) channels; ``rng`` defaults to one seeded by ``config.seed``."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    H = _cn(rng, (config.N, config.M), config.path_gain_it)
    h = _cn(rng, (config.K, config.N), config.path_gain_ri)
    return ChannelRealization(H, h)


def effective_channels(ch: ChannelRealization, theta) -> np.ndarray:
    """Stack of ``h_k = h_RI,k Theta H_IT`` as a K x M array."""
    theta = np.asarray(theta)
    n = ch.h_ri.shape[1]
    if theta.shape != (n, n) or ch.H_it.shape[0] != n:
        raise ValueError(
            f"dimension mismatch: Theta {theta.shape}, H_IT {ch.H_it.shape}, h_RI {ch.h_ri.shape}"
        )
    return ch.h_ri @ theta @ ch.H_it


def sinr(h, W, noise: float) -> np.ndarray:
    if noise <= 0:
        raise ValueError("noise power must be positive")
    P = np.abs(np.asarray(h) @ np.asarray(W)) ** 2
    signal = np.diag(P).copy()
    return signal / (P.sum(axis=1) - signal + noise)


def sum_rate(h, W, noise: float) -> float:
    return float(np.sum(np.log2(1.0 + sinr(h, W, noise))))


# ---------------------------------------------------------------------------
# Options / results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizerOptions:
    """Optimizer settings.

    ``method="joint"`` (default) runs quasi-Newton ascent on the RIS
    components and the precoder direction together, between two WMMSE
    precoder passes; ``tol`` is then the relative sum-rate change per
    quasi-Newton iteration. ``method="alternating"`` alternates WMMSE and
    Armijo gradient steps on the RIS; ``tol`` applies per outer round.
    """

    method: str = "joint"
    tol: float = 1e-8
    max_iter: int = 1500
    restarts: int = 3  # total starts: B = 0 first, then random draws
    init_scale: float = 0.02  # siemens, half-width of random component draws
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    max_backtracks: int = 40
    ris_steps: int = 10  # gradient steps per alternating round
    wmmse_steps: int = 10  # precoder updates per WMMSE pass
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("joint", "alternating"):
            raise ValueError(f"unknown optimizer method {self.method!r}")
        if self.restarts < 1 or self.max_iter < 1:
            raise ValueError("restarts and max_iter must be >= 1")

    @classmethod
    def from_file(cls, path) -> "OptimizerOptions":
        """Read options from JSON or ``key = value`` lines (``#`` comments)."""
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = {}
            for line in text.splitlines():
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise ValueError(f"cannot parse option line {line!r}")
                data[key.strip()] = value.strip()
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "OptimizerOptions":
        types = {f.name: f.type for f in fields(cls)}
        unknown = set(data) - set(types)
        if unknown:
            raise ValueError(f"unknown optimizer options: {sorted(unknown)}")
        cast = {"int": int, "float": float, "str": str}
        conv = {k: cast[types[k]](v) for k, v in data.items()}
        return cls(**conv)


@dataclass
class OptimizationResult:
    W: np.ndarray
    B: np.ndarray
    theta: np.ndarray
    components: np.ndarray
    rate_trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

    @property
    def sum_rate(self) -> float:
        return self.rate_trace[-1]


# ---------------------------------------------------------------------------
# Normalised problem
# ---------------------------------------------------------------------------


class _Problem:
    """Sum rate in normalised units: unit noise, unit power, B scaled by Z0."""

    def __init__(self, config, ch, pattern, z0):
        s = math.sqrt(config.P_T / config.noise)
        self.R = ch.h_ri
        self.G = ch.H_it * s
        self.pattern = pattern
        self.basis = pattern.basis
        self.eye = np.eye(pattern.n)
        self.z0 = z0

    def theta(self, u):
        n = self.pattern.n
        Bn = (self.basis @ u).reshape(n, n)
        A = self.eye + 1j * Bn
        return np.linalg.solve(A, self.eye - 1j * Bn)

    def channels(self, theta):
        return self.R @ theta @ self.G

    @staticmethod
    def rate(H, W):
        P = np.abs(H @ W) ** 2
        S = P.sum(axis=1) + 1.0
        return float(np.sum(np.log2(S / (S - np.diag(P)))))

    def rate_u(self, u, GW):
        th = self.theta(u)
        T = self.R @ th @ GW
        P = np.abs(T) ** 2
        S = P.sum(axis=1) + 1.0
        return float(np.sum(np.log2(S / (S - np.diag(P))))), th, T

    def grad_u(self, th, T, W, GW):
        """Gradient of the rate w.r.t. the normalised components at fixed W."""
        P = np.abs(T) ** 2
        S = P.sum(axis=1) + 1.0
        I = S - np.diag(P)
        # Lam[i, k] = conj(T[k, i]) * (1/S_k - 1/I_k) off-diagonal, conj(T[k,k])/S_k on it
        coef = np.repeat((1.0 / S - 1.0 / I)[:, None], P.shape[1], axis=1)
        np.fill_diagonal(coef, 1.0 / S)
        Lam = (np.conj(T) * coef).T
        D = GW @ Lam @ self.R
        Tp = th + self.eye
        E = -0.5j * (Tp @ D @ Tp)
        grad_B = 2.0 * _LOG2E * np.real(E.T)
        return grad_B.reshape(-1) @ self.basis

    def joint(self, z, M, K):
        """Negated rate and gradient in ``z = (u, Re V, Im V)``, ``W = V / ||V||``."""
        p = self.basis.shape[1]
        V = (z[p:p + M * K] + 1j * z[p + M * K:]).reshape(M, K)
        nv = np.linalg.norm(V)
        W = V / nv
        th = self.theta(z[:p])
        GW = self.G @ W
        T = self.R @ th @ GW
        P = np.abs(T) ** 2
        S = P.sum(axis=1) + 1.0
        I = S - np.diag(P)
        f = float(np.sum(np.log2(S / I)))
        gu = self.grad_u(th, T, W, GW)
        coef = np.repeat((1.0 / S - 1.0 / I)[:, None], K, axis=1)
        np.fill_diagonal(coef, 1.0 / S)
        H = self.R @ th @ self.G
        gW = 2.0 * _LOG2E * (H.conj().T @ (coef * T))
        # project out the radial direction of the normalisation
        gV = (gW - W * np.real(np.vdot(W, gW))) / nv
        return -f, -np.concatenate([gu, gV.real.ravel(), gV.imag.ravel()])


def _wmmse_update(H, W):
    """One WMMSE precoder update for unit noise and unit power budget."""
    K, M = H.shape
    T = H @ W
    P = np.abs(T) ** 2
    S = P.sum(axis=1) + 1.0
    I = S - np.diag(P)
    g = np.conj(np.diag(T)) / S  # receive scalars
    w = S / I  # MSE weights
    A = (H.conj().T * (w * np.abs(g) ** 2)) @ H
    V = H.conj().T * (w * np.conj(g))
    lam, U = np.linalg.eigh(A)
    lam = np.maximum(lam, 0.0)
    Y = U.conj().T @ V
    mu = _power_multiplier(lam, np.sum(np.abs(Y) ** 2, axis=1))
    Wn = U @ (Y / (lam + mu)[:, None])
    norm2 = np.sum(np.abs(Wn) ** 2)
    if norm2 > 1.0:
        Wn = Wn / math.sqrt(norm2)
    return Wn


def _power_multiplier(lam, y2, rtol=1e-12):
    """Smallest mu >= 0 with sum(y2 / (lam + mu)^2) <= 1.

    Safeguarded Newton on ``1/sqrt(p(mu))``, which is close to linear in mu.
    """
    keep = y2 > 0
    lam, y2 = lam[keep], y2[keep]
    if y2.size == 0:
        return 0.0
    if lam.min() > 0 and np.sum(y2 / lam**2) <= 1.0:
        return 0.0
    lo = max(math.sqrt(y2.sum()) - lam.max(), 0.0)  # p(lo) >= 1
    hi = math.sqrt(y2.sum())  # p(hi) <= 1
    mu = lo if lo > 0 else 0.5 * hi
    for _ in range(100):
        d = lam + mu
        p = float(np.sum(y2 / d**2))
        if abs(p - 1.0) <= rtol:
            break
        if p > 1.0:
            lo = mu
        else:
            hi = mu
        dp = -2.0 * float(np.sum(y2 / d**3))
        # phi = p^{-1/2} - 1, phi' = -0.5 p^{-3/2} p'
        step = (p ** -0.5 - 1.0) / (-0.5 * p ** -1.5 * dp)
        mu_new = mu - step
        if not lo < mu_new < hi:
            mu_new = 0.5 * (lo + hi)
        if mu_new == mu:
            break
        mu = mu_new
    return mu


def _initial_precoder(H):
    """Regularised zero-forcing direction at full power (MRT if degenerate)."""
    K, M = H.shape
    Hh = H.conj().T
    W = Hh @ np.linalg.solve(H @ Hh + K * np.eye(K), np.eye(K))
    nrm = np.linalg.norm(W)
    if nrm == 0 or not np.isfinite(nrm):
        return np.ones((M, K), dtype=complex) / math.sqrt(M * K)
    return W / nrm


def _precoder_block(prob, H, W, f, steps):
    for _ in range(steps):
        Wn = _wmmse_update(H, W)
        fn = prob.rate(H, Wn)
        if fn < f:
            break
        gain = fn - f
        W, f = Wn, fn
        if gain <= 1e-12 * max(f, 1.0):
            break
    return W, f


def _ris_block(prob, u, W, opts, state):
    """Monotone gradient ascent on the normalised components for fixed W."""
    GW = prob.G @ W
    f, th, T = prob.rate_u(u, GW)
    g = prob.grad_u(th, T, W, GW)
    alpha = state.get("alpha", 0.1 / max(np.linalg.norm(g), 1e-12))
    prev = None
    for _ in range(opts.ris_steps):
        gg = float(g @ g)
        if gg <= 1e-24:
            break
        if prev is not None:
            s, y = u - prev[0], g - prev[1]
            sy = float(s @ y)
            if sy < 0:
                alpha = float(s @ s) / -sy
        for _ in range(opts.max_backtracks):
            un = u + alpha * g
            fn, thn, Tn = prob.rate_u(un, GW)
            if fn >= f + opts.armijo_slope * alpha * gg:
                break
            alpha *= opts.armijo_shrink
        else:
            break
        prev = (u, g)
        u, f, th, T = un, fn, thn, Tn
        g = prob.grad_u(th, T, W, GW)
    state["alpha"] = alpha
    return u, f, th


def _alternating_start(prob, u, opts, W=None):
    th = prob.theta(u)
    H = prob.channels(th)
    if W is None:
        W = _initial_precoder(H)
    f = prob.rate(H, W)
    trace = [f]
    state: dict = {}
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        W, f = _precoder_block(prob, H, W, f, opts.wmmse_steps)
        u, _, th = _ris_block(prob, u, W, opts, state)
        H = prob.channels(th)
        f = prob.rate(H, W)
        trace.append(f)
        if f - trace[-2] <= opts.tol * max(abs(trace[-2]), 1e-12):
            converged = True
            break
    return u, W, trace, it, converged


def _joint_start(prob, u, opts, W=None):
    M, K = prob.G.shape[1], prob.R.shape[0]
    p = u.size
    H = prob.channels(prob.theta(u))
    if W is None:
        W = _initial_precoder(H)
    f = prob.rate(H, W)
    trace = [f]
    W, f = _precoder_block(prob, H, W, f, opts.wmmse_steps)
    trace.append(f)

    lbfgs_trace = []

    def record(intermediate_result):
        lbfgs_trace.append(-intermediate_result.fun)

    res = scipy.optimize.minimize(
        prob.joint,
        np.concatenate([u, W.real.ravel(), W.imag.ravel()]),
        args=(M, K),
        jac=True,
        method="L-BFGS-B",
        callback=record,
        options={"maxiter": opts.max_iter, "ftol": opts.tol, "gtol": 1e-12, "maxcor": 20},
    )
    if -res.fun >= f:
        u = res.x[:p]
        V = (res.x[p:p + M * K] + 1j * res.x[p + M * K:]).reshape(M, K)
        W = V / np.linalg.norm(V)
        for v in lbfgs_trace:
            if v >= trace[-1]:
                trace.append(v)
    H = prob.channels(prob.theta(u))
    W, f = _precoder_block(prob, H, W, prob.rate(H, W), opts.wmmse_steps)
    trace.append(f)
    converged = res.nit < opts.max_iter
    return u, W, trace, res.nit, converged


def optimize(
    config: SystemConfig,
    ch: ChannelRealization,
    pattern: SusceptancePattern,
    opts: OptimizerOptions = OptimizerOptions(),
    *,
    z0: float = Z0,
    init: Sequence = (),
    rng: Optional[np.random.Generator] = None,
) -> OptimizationResult:
    """Maximise the sum rate over the precoder and the pattern-constrained RIS.

    Starts from ``B = 0``, then ``opts.restarts - 1`` random draws. Entries
    of ``init`` are extra starts: a susceptance matrix respecting ``pattern``
    or a ``(B, W)`` pair, e.g. the solution for a sub-pattern, which makes
    the result at least as good as that solution. The best start is
    returned. Non-convergence is reported through ``converged = False``,
    not an exception.
    """
    if pattern.n != config.N or ch.h_ri.shape != (config.K, config.N) or ch.H_it.shape != (config.N, config.M):
        raise PatternError(
            f"pattern order {pattern.n} / channel shapes {ch.H_it.shape}, {ch.h_ri.shape} "
            f"do not match config (M={config.M}, K={config.K}, N={config.N})"
        )
    if rng is None:
        rng = np.random.default_rng(opts.seed)
    prob = _Problem(config, ch, pattern, z0)
    scale = math.sqrt(config.P_T)

    if not np.any(ch.h_ri) or not np.any(ch.H_it):
        u = np.zeros(pattern.size)
        W = _initial_precoder(np.zeros((config.K, config.M))) * scale
        B = assemble_susceptance(pattern, u)
        return OptimizationResult(W, B, np.eye(config.N, dtype=complex), u, [0.0], 0, True)

    starts = [(np.zeros(pattern.size), None)]
    half = opts.init_scale * z0
    for _ in range(opts.restarts - 1):
        starts.append((rng.uniform(-half, half, pattern.size), None))
    for item in init:
        B0, W0 = item if isinstance(item, tuple) else (item, None)
        if W0 is not None:
            W0 = np.asarray(W0, dtype=complex)
            W0 = W0 / np.linalg.norm(W0)
        starts.append((extract_components(B0, pattern) * z0, W0))

    run = _joint_start if opts.method == "joint" else _alternating_start
    best = None
    for u0, W0 in starts:
        u, W, trace, it, conv = run(prob, u0, opts, W0)
        if best is None or trace[-1] > best[2][-1]:
            best = (u, W, trace, it, conv)
    u, W, trace, it, conv = best
    B = assemble_susceptance(pattern, u / z0)
    return OptimizationResult(
        W=W * scale,
        B=B,
        theta=scattering_from_susceptance(B, z0),
        components=u / z0,
        rate_trace=trace,
        iterations=it,
        converged=conv,
    )


# ---------------------------------------------------------------------------
# Gradient validation
# ---------------------------------------------------------------------------


def rate_gradient(config, ch, pattern, B0, W, z0: float = Z0) -> tuple[float, np.ndarray]:
    """Sum rate and its gradient w.r.t. the component vector (siemens), at fixed W."""
    prob = _Problem(config, ch, pattern, z0)
    u = extract_components(B0, pattern) * z0
    GW = prob.G @ (np.asarray(W) / math.sqrt(config.P_T))
    f, th, T = prob.rate_u(u, GW)
    return f, prob.grad_u(th, T, W / math.sqrt(config.P_T), GW) * z0


def gradient_check(config, ch, pattern, B0, W=None, z0: float = Z0, rel_step: float = 1e-6) -> float:
    """Max discrepancy between analytic and central-difference gradients.

    Differences are divided by the largest finite-difference gradient
    magnitude; zero gradients on both sides give 0. ``W`` defaults to the
    regularised zero-forcing precoder at ``Theta(B0)``.
    """
    x0 = extract_components(B0, pattern)
    if W is None:
        H = effective_channels(ch, scattering_from_susceptance(B0, z0))
        W = _initial_precoder(H / math.sqrt(config.noise)) * math.sqrt(config.P_T)
    W = np.asarray(W)
    _, g = rate_gradient(config, ch, pattern, B0, W, z0)

    def f(x):
        th = scattering_from_susceptance(assemble_susceptance(pattern, x), z0)
        return sum_rate(effective_channels(ch, th), W, config.noise)

    fd = np.empty_like(x0)
    for i in range(x0.size):
        h = rel_step * max(abs(x0[i]), 1.0 / z0)
        xp, xm = x0.copy(), x0.copy()
        xp[i] += h
        xm[i] -= h
        fd[i] = (f(xp) - f(xm)) / (2 * h)
    denom = np.max(np.abs(fd))
    err = np.max(np.abs(g - fd)) if g.size else 0.0
    if denom == 0:
        return 0.0 if err == 0 else math.inf
    return float(err / denom)
