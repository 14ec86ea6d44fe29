"""Anisotropic gauges, their polars and Wulff-shape volumes.

A gauge here is a convex, even, 1-homogeneous function H on R^N that is
positive away from the origin, so that c1*|xi| <= H(xi) <= c2*|xi| for some
0 < c1 <= c2.  The polar gauge is

    polar(v) = sup_{xi != 0}  xi . v / H(xi),

and the Wulff shape is the open unit ball of the polar, W = {polar < 1},
with volume kappa_N = |W|.

Supported gauge families:

* ``euclidean``    H(xi) = |xi|
* ``power``        H(xi) = (sum_k |xi_k|^r)^(1/r), 1 <= r <= inf
* ``scaled_axes``  H(xi) = (sum_k (w_k |xi_k|)^r)^(1/r), w_k > 0
* ``sampled``      2-D only; H given on a table of directions, evaluated by
                   piecewise-linear interpolation in the angle.

All operations are pure functions of immutable specs and are safe to call
concurrently.  Reductions use numpy sums (pairwise summation), so results
are deterministic for a fixed input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import integrate

__all__ = [
    "NormSpec",
    "euclidean",
    "power",
    "scaled_axes",
    "sampled_support",
    "eval_norm",
    "eval_polar",
    "polar_spec",
    "grad_norm",
    "wulff_volume",
    "wulff_volume_with_error",
    "linear_bounds",
    "duality_residuals",
    "DualityReport",
    "norm_to_json",
    "norm_from_json",
]

_KINDS = ("euclidean", "power", "scaled_axes", "sampled")


@dataclass(frozen=True)
class NormSpec:
    """Immutable description of a gauge.

    ``r`` may be ``math.inf`` (max norm); the value 1 gives the l1 sum.  The
    closed-form family is kept closed under polarity: the polar of r is the
    dual exponent r/(r-1), with 1 and inf exchanged.
    """

    kind: str
    dim: int
    r: float | None = None
    weights: tuple[float, ...] | None = None
    angles: tuple[float, ...] | None = None
    values: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown gauge kind {self.kind!r}")
        if self.dim < 2:
            raise ValueError("gauge dimension must be >= 2")
        if self.kind in ("power", "scaled_axes"):
            if self.r is None or (not math.isinf(self.r) and self.r < 1.0):
                raise ValueError("power exponent must satisfy r >= 1")
        if self.kind == "scaled_axes":
            if self.weights is None or len(self.weights) != self.dim:
                raise ValueError("scaled_axes needs one weight per axis")
            if any(w <= 0 for w in self.weights):
                raise ValueError("axis weights must be positive")
        if self.kind == "sampled":
            if self.dim != 2:
                raise ValueError("sampled gauges are restricted to dim 2")
            if self.angles is None or self.values is None:
                raise ValueError("sampled gauge needs angles and values")
            ang = np.asarray(self.angles, dtype=float)
            val = np.asarray(self.values, dtype=float)
            if ang.size != val.size or ang.size < 8:
                raise ValueError("sampled gauge needs >= 8 matching samples")
            if np.any(np.diff(ang) <= 0) or ang[0] < 0 or ang[-1] >= 2 * math.pi:
                raise ValueError("angles must be strictly increasing in [0, 2*pi)")
            if np.any(val <= 0) or not np.all(np.isfinite(val)):
                raise ValueError("sampled gauge values must be positive and finite")


def euclidean(dim: int = 2) -> NormSpec:
    return NormSpec("euclidean", dim)


def power(r: float, dim: int = 2) -> NormSpec:
    return NormSpec("power", dim, r=float(r))


def scaled_axes(weights: Iterable[float], r: float = 2.0) -> NormSpec:
    w = tuple(float(x) for x in weights)
    return NormSpec("scaled_axes", len(w), r=float(r), weights=w)


def sampled_support(angles: Iterable[float], values: Iterable[float]) -> NormSpec:
    return NormSpec(
        "sampled",
        2,
        angles=tuple(float(a) for a in angles),
        values=tuple(float(v) for v in values),
    )


def _check_vectors(spec: NormSpec, xi) -> np.ndarray:
    x = np.asarray(xi, dtype=float)
    if x.shape[-1] != spec.dim:
        raise ValueError(f"expected vectors of length {spec.dim}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite input vector")
    return x


def _power_sum(absx: np.ndarray, r: float) -> np.ndarray:
    """(sum |x|^r)^(1/r), max-normalized so large r does not overflow."""
    if math.isinf(r):
        return absx.max(axis=-1)
    if r == 1.0:
        return absx.sum(axis=-1)
    m = absx.max(axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    out = (np.sum((absx / safe) ** r, axis=-1)) ** (1.0 / r)
    return out * np.squeeze(safe, axis=-1) * (np.squeeze(m, axis=-1) > 0)


def eval_norm(spec: NormSpec, xi) -> np.ndarray | float:
    """Gauge value H(xi).  Accepts a single vector or an array (..., dim)."""
    x = _check_vectors(spec, xi)
    ax = np.abs(x)
    if spec.kind == "euclidean":
        out = np.sqrt(np.sum(x * x, axis=-1))
    elif spec.kind == "power":
        out = _power_sum(ax, spec.r)
    elif spec.kind == "scaled_axes":
        w = np.asarray(spec.weights, dtype=float)
        out = _power_sum(ax * w, spec.r)
    else:
        rho = np.sqrt(np.sum(x * x, axis=-1))
        theta = np.mod(np.arctan2(x[..., 1], x[..., 0]), 2 * math.pi)
        tab = np.interp(
            theta,
            np.asarray(spec.angles),
            np.asarray(spec.values),
            period=2 * math.pi,
        )
        out = rho * tab
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def _dual_exponent(r: float) -> float:
    if math.isinf(r):
        return 1.0
    if r == 1.0:
        return math.inf
    return r / (r - 1.0)


def polar_spec(spec: NormSpec) -> NormSpec | None:
    """Closed-form spec of the polar gauge, or None when only numeric."""
    if spec.kind == "euclidean":
        return spec
    if spec.kind == "power":
        return power(_dual_exponent(spec.r), spec.dim)
    if spec.kind == "scaled_axes":
        inv = tuple(1.0 / w for w in spec.weights)
        return scaled_axes(inv, _dual_exponent(spec.r))
    return None


def _golden_max(f, lo: float, hi: float, iters: int = 80) -> float:
    """Golden-section maximum of a unimodal scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    xm = 0.5 * (a + b)
    return max(fc, fd, f(xm))

_POLAR_SWEEP = 4096


def _polar_numeric(spec: NormSpec, v: np.ndarray) -> float:
    """sup over directions of (v . omega)/H(omega), 2-D sweep + refinement."""
    if spec.dim != 2:
        raise ValueError("numeric polar evaluation is implemented for dim 2 only")
    if not np.any(v):
        return 0.0
    theta = np.linspace(0.0, 2 * math.pi, _POLAR_SWEEP, endpoint=False)
    omega = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    ratio = (omega @ v) / eval_norm(spec, omega)
    k = int(np.argmax(ratio))
    step = 2 * math.pi / _POLAR_SWEEP

    def g(t: float) -> float:
        om = np.array([math.cos(t), math.sin(t)])
        return float(om @ v) / float(eval_norm(spec, om))

    return _golden_max(g, theta[k] - step, theta[k] + step)


def eval_polar(spec: NormSpec, v, method: str = "auto") -> np.ndarray | float:
    """Polar gauge value, closed form where available.

    ``method='numeric'`` forces the direction-sweep path (used by the
    bi-polar involution checks); the sweep is 2-D only.
    """
    x = _check_vectors(spec, v)
    dual = polar_spec(spec) if method == "auto" else None
    if dual is not None:
        return eval_norm(dual, x)
    if x.ndim == 1:
        return _polar_numeric(spec, x)
    flat = x.reshape(-1, spec.dim)
    out = np.array([_polar_numeric(spec, row) for row in flat])
    return out.reshape(x.shape[:-1])


def grad_norm(spec: NormSpec, xi) -> np.ndarray:
    """Gradient of H at xi != 0.

    Analytic for the closed-form kinds; central differences (step
    1e-6*|xi|) for sampled gauges.  For non-smooth exponents (r = 1, or
    r = inf with a tied maximum) a point on a coordinate axis gets the
    limiting gradient along that axis; other non-smooth points raise.
    """
    x = _check_vectors(spec, xi)
    if x.ndim != 1:
        raise ValueError("grad_norm expects a single vector")
    if not np.any(x):
        raise ValueError("gauge is not differentiable at the origin")
    if spec.kind == "euclidean":
        return x / np.linalg.norm(x)
    if spec.kind in ("power", "scaled_axes"):
        w = np.ones_like(x) if spec.kind == "power" else np.asarray(spec.weights)
        r = spec.r
        ax = np.abs(x) * w
        nonzero = np.flatnonzero(x)
        if r == 1.0:
            if nonzero.size == 1:
                out = np.zeros_like(x)
                k = nonzero[0]
                out[k] = math.copysign(w[k], x[k])
                return out
            if nonzero.size < x.size:
                raise ValueError("l1-type gauge is not differentiable off the axes "
                                 "when some coordinate vanishes")
            return np.sign(x) * w
        if math.isinf(r):
            top = np.flatnonzero(ax == ax.max())
            if top.size != 1:
                raise ValueError("max-type gauge is not differentiable at a tied maximum")
            out = np.zeros_like(x)
            k = top[0]
            out[k] = math.copysign(w[k], x[k])
            return out
        h = float(_power_sum(ax, r))
        return h ** (1.0 - r) * np.sign(x) * w**r * np.abs(x) ** (r - 1.0)
    # sampled: central differences
    step = 1e-6 * np.linalg.norm(x)
    out = np.zeros_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = step
        out[k] = (eval_norm(spec, x + e) - eval_norm(spec, x - e)) / (2 * step)
    return out


def linear_bounds(spec: NormSpec, sweep: int = 4096) -> tuple[float, float]:
    """Constants (c1, c2) with c1*|xi| <= H(xi) <= c2*|xi|.

    Computed by extremizing H over the Euclidean unit sphere: a direction
    sweep plus golden-section refinement in 2-D, closed forms for the
    isotropic kinds in higher dimension, and a seeded random sweep with
    local polish otherwise.
    """
    if spec.kind == "euclidean":
        return 1.0, 1.0
    if spec.dim == 2:
        theta = np.linspace(0.0, 2 * math.pi, sweep, endpoint=False)
        omega = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        h = np.asarray(eval_norm(spec, omega))
        step = 2 * math.pi / sweep

        def at(t: float) -> float:
            return float(eval_norm(spec, np.array([math.cos(t), math.sin(t)])))

        kmax = int(np.argmax(h))
        kmin = int(np.argmin(h))
        c2 = _golden_max(at, theta[kmax] - step, theta[kmax] + step)
        c1 = -_golden_max(lambda t: -at(t), theta[kmin] - step, theta[kmin] + step)
        return c1, c2
    if spec.kind == "power":
        skew = spec.dim ** (1.0 / spec.r - 0.5) if not math.isinf(spec.r) else spec.dim**-0.5
        return min(1.0, skew), max(1.0, skew)
    # scaled_axes in dim >= 3: exact for r = 2, random sweep otherwise
    w = np.asarray(spec.weights, dtype=float)
    if spec.r == 2.0:
        return float(w.min()), float(w.max())
    rng = np.random.default_rng(0)
    dirs = rng.standard_normal((1 << 14, spec.dim))
    dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)
    h = np.asarray(eval_norm(spec, dirs))
    from scipy.optimize import minimize

    def value(u, sign):
        u = u / np.linalg.norm(u)
        return sign * float(eval_norm(spec, u))

    lo = minimize(value, dirs[np.argmin(h)], args=(1.0,), method="Nelder-Mead")
    hi = minimize(value, dirs[np.argmax(h)], args=(-1.0,), method="Nelder-Mead")
    return float(lo.fun), float(-hi.fun)


def _sampled_polar_table(spec: NormSpec, ntheta: int) -> np.ndarray:
    """Vectorized polar values on a uniform angle grid (sampled kind)."""
    theta = np.linspace(0.0, 2 * math.pi, ntheta, endpoint=False)
    omega = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    phi = np.asarray(spec.angles)
    dirs = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    hvals = np.asarray(eval_norm(spec, dirs))
    return np.max((omega @ dirs.T) / hvals, axis=-1)


def wulff_volume(spec: NormSpec, rel_tol: float = 1e-8, mc_samples: int = 1 << 18,
                 seed: int = 0) -> float:
    value, _ = wulff_volume_with_error(spec, rel_tol=rel_tol, mc_samples=mc_samples,
                                       seed=seed)
    return value


def wulff_volume_with_error(spec: NormSpec, rel_tol: float = 1e-8,
                            mc_samples: int = 1 << 18, seed: int = 0) -> tuple[float, float]:
    """kappa_N = |{polar < 1}| and an error estimate.

    Polar-coordinate quadrature |W| = (1/N) * integral of polar(omega)^-N
    over the unit sphere for N in {2, 3} (error estimate 0 for the adaptive
    paths); Monte Carlo with its standard error for N > 3.
    """
    n = spec.dim
    if n == 2:
        if spec.kind == "sampled":
            # composite midpoint with doubling; the integrand is piecewise
            # smooth so plain refinement converges cleanly
            ntheta, prev = 1 << 10, None
            while ntheta <= (1 << 18):
                pol = _sampled_polar_table(spec, ntheta)
                val = 0.5 * np.mean(pol**-2.0) * 2 * math.pi
                if prev is not None and abs(val - prev) <= rel_tol * abs(val):
                    return float(val), abs(val - prev)
                prev, ntheta = val, ntheta * 2
            return float(prev), float("nan")
        dual = polar_spec(spec)

        def integrand(t: float) -> float:
            om = np.array([math.cos(t), math.sin(t)])
            return 0.5 * float(eval_norm(dual, om)) ** -2.0

        val, err = integrate.quad(integrand, 0.0, 2 * math.pi,
                                  epsabs=0.0, epsrel=rel_tol, limit=200)
        return val, err
    if n == 3:
        dual = polar_spec(spec)
        if dual is None:
            raise ValueError("3-D volumes need a closed-form polar")

        def integrand(t: float, ph: float) -> float:
            om = np.array(
                [math.sin(ph) * math.cos(t), math.sin(ph) * math.sin(t), math.cos(ph)]
            )
            return float(eval_norm(dual, om)) ** -3.0 * math.sin(ph) / 3.0

        val, err = integrate.dblquad(integrand, 0.0, math.pi, 0.0, 2 * math.pi,
                                     epsabs=0.0, epsrel=rel_tol)
        return val, err
    # Monte Carlo fallback: W is contained in the Euclidean ball of radius c2(H)
    _, c2 = linear_bounds(spec)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-c2, c2, size=(mc_samples, n))
    inside = np.asarray(eval_polar(spec, pts)) < 1.0
    frac = inside.mean()
    box = (2.0 * c2) ** n
    stderr = box * math.sqrt(max(frac * (1 - frac), 0.0) / mc_samples)
    return box * frac, stderr


@dataclass(frozen=True)
class DualityReport:
    """Worst-case residuals of the gauge/polar duality identities."""

    grad_polar_unit: float   # max |H(grad polar(xi)) - 1|
    polar_grad_unit: float   # max |polar(grad H(xi)) - 1|
    inversion_sup: float     # max |polar(xi) * grad H(grad polar(xi)) - xi|_inf

    @property
    def worst(self) -> float:
        return max(self.grad_polar_unit, self.polar_grad_unit, self.inversion_sup)


def _grad_polar(spec: NormSpec, xi: np.ndarray) -> np.ndarray:
    dual = polar_spec(spec)
    if dual is not None:
        return grad_norm(dual, xi)
    step = 1e-6 * np.linalg.norm(xi)
    out = np.zeros_like(xi)
    for k in range(xi.size):
        e = np.zeros_like(xi)
        e[k] = step
        out[k] = (eval_polar(spec, xi + e) - eval_polar(spec, xi - e)) / (2 * step)
    return out


def duality_residuals(spec: NormSpec, sample) -> DualityReport:
    """Check H(grad polar) = polar(grad H) = 1 and the inversion identity
    polar(xi) * grad H(grad polar(xi)) = xi over a sample of vectors."""
    a = b = c = 0.0
    for xi in np.asarray(sample, dtype=float).reshape(-1, spec.dim):
        if not np.any(xi):
            raise ValueError("duality residuals need nonzero sample vectors")
        gp = _grad_polar(spec, xi)
        gh = grad_norm(spec, xi)
        a = max(a, abs(float(eval_norm(spec, gp)) - 1.0))
        b = max(b, abs(float(eval_polar(spec, gh)) - 1.0))
        back = float(eval_polar(spec, xi)) * grad_norm(spec, gp)
        c = max(c, float(np.max(np.abs(back - xi))))
    return DualityReport(a, b, c)


def norm_to_json(spec: NormSpec) -> dict:
    if spec.kind == "euclidean":
        return {"kind": "euclidean", "dim": spec.dim}
    if spec.kind == "power":
        return {"kind": "power", "r": spec.r, "dim": spec.dim}
    if spec.kind == "scaled_axes":
        return {"kind": "scaled_axes", "w": list(spec.weights), "r": spec.r,
                "dim": spec.dim}
    return {"kind": "sampled", "angles": list(spec.angles), "values": list(spec.values)}


def norm_from_json(obj: dict) -> NormSpec:
    kind = obj.get("kind")
    if kind == "euclidean":
        return euclidean(int(obj["dim"]))
    if kind == "power":
        r = obj["r"]
        return power(math.inf if r in ("inf", None) else float(r), int(obj["dim"]))
    if kind == "scaled_axes":
        return scaled_axes([float(w) for w in obj["w"]], float(obj["r"]))
    if kind == "sampled":
        return sampled_support(obj["angles"], obj["values"])
    raise ValueError(f"unknown gauge kind in JSON: {kind!r}")
