"""Short-time Fourier transform of the supported windows and its zero set.

The unit-cube window g = chi_[0,1]^d has a closed-form self-transform

    V_gg(t, nu) = integral over [max(0,t), min(1,1+t)] of exp(-2*pi*i*nu*x) dx

(zero when |t| >= 1), which factors coordinate-wise in dimension d.  The
hyperbolic-secant window 2/(e^{2x}+e^{-2x}) is supported for zero-set
queries only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureError

#: Tolerance for testing whether a real number is an integer.
EPS_INT = 1e-9

#: Below this |nu| the 0/0 form of the closed form is replaced by a series.
SMALL_FREQ = 1e-6


class WindowKind(enum.Enum):
    UNIT_CUBE = "unit_cube"
    HYPERBOLIC_SECANT = "hyperbolic_secant"


@dataclass(frozen=True)
class Window:
    """Analysis window: unit cube in dimension d, or the 1D secant example."""

    kind: WindowKind
    d: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"window dimension must be >= 1, got {self.d}")
        if self.kind is WindowKind.HYPERBOLIC_SECANT and self.d != 1:
            raise DomainError("hyperbolic secant window is one-dimensional only")

    @classmethod
    def unit_cube(cls, d: int = 1) -> "Window":
        return cls(WindowKind.UNIT_CUBE, d)

    @classmethod
    def hyperbolic_secant(cls) -> "Window":
        return cls(WindowKind.HYPERBOLIC_SECANT, 1)


def near_integer(x, eps: float = EPS_INT):
    """|x - round(x)| <= eps, elementwise."""
    x = np.asarray(x, dtype=float)
    return np.abs(x - np.round(x)) <= eps


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise DomainError("non-finite input")


def _segment_integral(a: float, b: float, nu: float) -> complex:
    """integral_a^b exp(-2*pi*i*nu*x) dx, stable through nu = 0."""
    if b <= a:
        return 0j
    if abs(nu) < SMALL_FREQ:
        # 6-term Taylor expansion in c = -2*pi*i*nu; remainder ~ (2*pi*nu)^6.
        c = -2j * math.pi * nu
        total = 0j
        ck = 1.0 + 0j
        for k in range(6):
            total += ck * (b ** (k + 1) - a ** (k + 1)) / (k + 1)
            ck *= c / (k + 1)
        return total
    w = 2j * math.pi * nu
    return (np.exp(-w * a) - np.exp(-w * b)) / w


def stft_1d(t: float, nu: float) -> complex:
    """Closed-form V_gg(t, nu) for the unit interval window."""
    _check_finite(t, nu)
    if abs(t) >= 1.0:
        return 0j
    return _segment_integral(max(0.0, t), min(1.0, 1.0 + t), nu)


def stft_nd(d: int, t, nu) -> complex:
    """V_gg for the d-dimensional cube: coordinate-wise product of stft_1d."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if d < 1 or t.shape != (d,) or nu.shape != (d,):
        raise DomainError(f"expected two length-{d} vectors, got {t.shape} and {nu.shape}")
    value = 1 + 0j
    for i in range(d):
        value *= stft_1d(t[i], nu[i])
        if value == 0:
            return 0j
    return value


def in_zero_set(w: Window, t, nu, eps_int: float = EPS_INT) -> bool:
    """Exact analytic membership in the zero set of V_gg for window ``w``.

    Unit cube: true iff max_i |t_i| >= 1 or nu_i*(1 - |t_i|) is a nonzero
    integer for some i.  Hyperbolic secant: true iff t*nu is a nonzero
    integer.  Points within ``eps_int`` of the variety count as members.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    _check_finite(t, nu)
    if t.shape != (w.d,) or nu.shape != (w.d,):
        raise DomainError(f"expected length-{w.d} vectors, got {t.shape} and {nu.shape}")
    if w.kind is WindowKind.HYPERBOLIC_SECANT:
        prod = t[0] * nu[0]
        return bool(near_integer(prod, eps_int) and abs(round(prod)) >= 1)
    if np.max(np.abs(t)) >= 1.0 - eps_int:
        return True
    u = nu * (1.0 - np.abs(t))
    return bool(np.any(near_integer(u, eps_int) & (np.abs(np.round(u)) >= 1)))


def in_zero_set_many(w: Window, diffs: np.ndarray, eps_int: float = EPS_INT) -> np.ndarray:
    """Vectorised ``in_zero_set`` over rows of a (N, 2d) difference array."""
    diffs = np.asarray(diffs, dtype=float)
    d = w.d
    if diffs.ndim != 2 or diffs.shape[1] != 2 * d:
        raise DomainError(f"expected (N, {2 * d}) array, got {diffs.shape}")
    t, nu = diffs[:, :d], diffs[:, d:]
    if w.kind is WindowKind.HYPERBOLIC_SECANT:
        prod = t[:, 0] * nu[:, 0]
        return near_integer(prod, eps_int) & (np.abs(np.round(prod)) >= 1)
    far = np.max(np.abs(t), axis=1) >= 1.0 - eps_int
    u = nu * (1.0 - np.abs(t))
    hit = np.any(near_integer(u, eps_int) & (np.abs(np.round(u)) >= 1), axis=1)
    return far | hit


def _quad_real(func, a, b, tol, **kwargs):
    value, err = quad(func, a, b, epsabs=tol, epsrel=0.0, limit=400, **kwargs)
    if err > max(tol, 1e-14):
        raise QuadratureError(
            f"quadrature error estimate {err:.3e} exceeds tol {tol:.3e}", achieved=err
        )
    return value


def _quad_segment(a: float, b: float, nu: float, tol: float) -> complex:
    """Adaptive quadrature of integral_a^b exp(-2*pi*i*nu*x) dx."""
    if b <= a:
        return 0j
    wvar = 2.0 * math.pi * nu
    if abs(nu) >= 0.5:
        # Oscillatory rule: weight functions cos/sin with unit integrand.
        re = _quad_real(lambda x: 1.0, a, b, tol, weight="cos", wvar=wvar)
        im = -_quad_real(lambda x: 1.0, a, b, tol, weight="sin", wvar=wvar)
        return re + 1j * im
    re = _quad_real(lambda x: math.cos(wvar * x), a, b, tol)
    im = -_quad_real(lambda x: math.sin(wvar * x), a, b, tol)
    return re + 1j * im


def _sech(x: float) -> float:
    # 2/(e^{2x}+e^{-2x}); guard against overflow of exp for large |x|.
    if abs(x) > 300:
        return 0.0
    return 2.0 / (math.exp(2 * x) + math.exp(-2 * x))


def stft_quadrature(w: Window, t, nu, tol: float = 1e-10) -> complex:
    """V_gw(t, nu) by adaptive quadrature of the defining integral.

    Independent oracle for ``stft_1d``/``stft_nd``; absolute error <= tol.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    _check_finite(t, nu)
    if t.shape != (w.d,) or nu.shape != (w.d,):
        raise DomainError(f"expected length-{w.d} vectors, got {t.shape} and {nu.shape}")

    if w.kind is WindowKind.HYPERBOLIC_SECANT:
        ti, vi = t[0], nu[0]
        lo, hi = min(0.0, ti) - 15.0, max(0.0, ti) + 15.0
        om = 2.0 * math.pi * vi

        def integrand(x, part):
            osc = math.cos(om * x) if part == "re" else -math.sin(om * x)
            return _sech(x) * _sech(x - ti) * osc

        re = _quad_real(lambda x: integrand(x, "re"), lo, hi, tol / 2)
        im = _quad_real(lambda x: integrand(x, "im"), lo, hi, tol / 2)
        return re + 1j * im

    # Cube window: the defining integral separates into coordinate factors,
    # each integrated adaptively over the support overlap.
    per_coord_tol = tol / w.d
    value = 1 + 0j
    for i in range(w.d):
        if abs(t[i]) >= 1.0:
            return 0j
        a, b = max(0.0, t[i]), min(1.0, 1.0 + t[i])
        value *= _quad_segment(a, b, nu[i], per_coord_tol)
    return value
