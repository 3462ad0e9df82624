"""Lie-group ODE integration of ``Adot = A @ hat(X^G(t, lambda))``.

The group trajectory is never stored as matrices. Each restart segment solves
the algebra-valued equation

    Zdot = dexpinv_op(Z) @ X^G(t, lambda),   Z(t_i) = 0,

with an adaptive Runge-Kutta method, stopping (by a terminal event on |Z|)
well before the dexpinv singularity at 2*pi. Segments are chained through the
closed-form BCH so that ``A(t) = exp_rot(prefix_i) @ exp_rot(Z_i(t))`` is
available at any time through dense output, without matrix products drifting
off the group.

A skew-product variant co-integrates normal-form coordinates q alongside Z
(q is untouched by the Z restarts), and an Euler-angle chart integrator is
provided as an independent cross-check formulation.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .bch import bch
from .errors import (
    ConfigError,
    DomainError,
    GimbalLockError,
    IntegrationError,
    SingularityError,
)
from .so3 import BallClass, _as_vec3, dexpinv_op, exp_rot, q_map, rot_x, rot_z

__all__ = [
    "EulerTrajectory",
    "ForcingSignal",
    "GroupTrajectory",
    "IntegratorConfig",
    "QTrajectory",
    "SkewProductSystem",
    "ZSegment",
    "integrate_euler",
    "integrate_group",
    "integrate_skew_product",
    "integrate_z_segment",
    "stuart_landau",
]

#: |sin(theta)| below which the Euler chart is considered degenerate
GIMBAL_TOL = 1e-6


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive-integrator settings shared by all formulations.

    ``restart_margin`` is the distance delta from the ball boundary at which a
    Z segment is cut: the terminal event fires at ``|Z| = pi - delta``.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    restart_margin: float = 0.1
    max_step: float = math.inf
    method_order: int = 8

    def __post_init__(self):
        if not (self.rtol > 0.0 and self.atol > 0.0):
            raise ConfigError("rtol and atol must be positive")
        if not (0.0 < self.restart_margin < np.pi / 2):
            raise ConfigError("restart_margin must lie in (0, pi/2)")
        if self.max_step <= 0.0:
            raise ConfigError("max_step must be positive")
        if self.method_order < 1:
            raise ConfigError("method_order must be >= 1")

    @property
    def method(self) -> str:
        return "DOP853" if self.method_order >= 8 else "RK45"


@dataclass
class ForcingSignal:
    """Time/parameter-dependent algebra-valued forcing.

    Attributes
    ----------
    eval : callable (t, lam) -> axis vector
    period : callable (lam) -> minimal forcing period T(lam) > 0
    """

    eval: Callable[[float, float], np.ndarray]
    period: Callable[[float], float]


@dataclass
class SkewProductSystem:
    """Group forcing driven by normal-form coordinates.

    ``x_g(q, lam)`` is the axis-vector forcing, ``x_n(q, lam)`` the
    normal-coordinate vector field on R^dim_q.
    """

    x_g: Callable[[np.ndarray, float], np.ndarray]
    x_n: Callable[[np.ndarray, float], np.ndarray]
    dim_q: int


@dataclass
class ZSegment:
    """One restart segment: dense Z(t) on [t_start, t_end] with Z(t_start) = 0."""

    t_start: float
    t_end: float
    _dense: Callable = field(repr=False)

    def eval(self, t: float) -> np.ndarray:
        y = self._dense(t)
        return np.asarray(y[:3], dtype=float)

    def eval_state(self, t: float) -> np.ndarray:
        return np.asarray(self._dense(t), dtype=float)


def _check_forcing_value(x, t: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (3,) or not np.all(np.isfinite(x)):
        raise DomainError(f"forcing returned a non-finite or misshaped value at t={t!r}")
    return x


def _solve_capped(rhs, t_span, y0, cfg: IntegratorConfig, events):
    """solve_ivp with automatic max_step reduction on dexpinv overshoot.

    The terminal event keeps *accepted* states below |Z| = pi - delta, but
    with mild dynamics the solver's trial steps can grow long enough for
    internal stages to wander past the dexpinv singularity guard at 2*pi.
    Such a stage raises SingularityError; halving the step cap and retrying
    keeps every stage in the valid region without touching the dynamics.
    """
    span = float(t_span[1] - t_span[0])
    cap = cfg.max_step if math.isfinite(cfg.max_step) else span
    while True:
        try:
            return solve_ivp(
                rhs,
                t_span,
                y0,
                method=cfg.method,
                dense_output=True,
                events=events,
                rtol=cfg.rtol,
                atol=cfg.atol,
                max_step=cap,
            )
        except SingularityError:
            cap /= 2.0
            if cap < 1e-9 * span:
                raise IntegrationError(
                    f"step cap collapsed at {cap!r} while avoiding the dexpinv singularity"
                ) from None


def integrate_z_segment(
    signal: ForcingSignal,
    lam: float,
    t_start: float,
    t_max: float,
    config: IntegratorConfig | None = None,
) -> tuple[ZSegment, float]:
    """Solve one Z segment from ``Z(t_start) = 0`` until ``|Z| = pi - delta`` or t_max.

    Returns
    -------
    (ZSegment, float)
        The dense segment and its exit time (== t_max when no restart fired).
    """
    cfg = config or IntegratorConfig()
    cutoff = np.pi - cfg.restart_margin

    def rhs(t, z):
        x = _check_forcing_value(signal.eval(t, lam), t)
        return dexpinv_op(z) @ x

    def boundary(t, z):
        return float(np.linalg.norm(z)) - cutoff

    boundary.terminal = True
    boundary.direction = 1

    sol = _solve_capped(rhs, (t_start, t_max), np.zeros(3), cfg, [boundary])
    if sol.status == -1:
        raise IntegrationError(f"segment solve failed at t={sol.t[-1]!r}: {sol.message}")
    t_exit = float(sol.t[-1])
    return ZSegment(t_start, t_exit, sol.sol), t_exit


@dataclass
class GroupTrajectory:
    """Piecewise Z representation of the group trajectory with A(0) = I.

    ``class_at(t)`` is the ball class of the full product up to t (prefix
    composed with the live segment through BCH); ``eval_Z`` applies the
    hemisphere map around ``ref_dir``; ``eval_A`` exponentiates.
    """

    segments: list[ZSegment]
    prefixes: list[BallClass]
    ref_dir: np.ndarray
    t_end: float
    _starts: list[float] = field(default=None, repr=False)

    def __post_init__(self):
        if self._starts is None:
            self._starts = [seg.t_start for seg in self.segments]

    def _locate(self, t: float) -> int:
        if not (-1e-9 <= t <= self.t_end + 1e-9):
            raise DomainError(f"t={t!r} outside the integrated range [0, {self.t_end!r}]")
        i = bisect.bisect_right(self._starts, t) - 1
        return min(max(i, 0), len(self.segments) - 1)

    def class_at(self, t: float) -> BallClass:
        """Ball class of A(t) (no hemisphere reduction)."""
        i = self._locate(t)
        seg = self.segments[i]
        t_clamped = min(max(t, seg.t_start), seg.t_end)
        return bch(self.prefixes[i].vector, seg.eval(t_clamped))

    def eval_Z(self, t: float) -> np.ndarray:
        """Hemisphere-mapped logarithm of A(t) around ``ref_dir``."""
        return q_map(self.class_at(t), self.ref_dir)

    def eval_A(self, t: float) -> np.ndarray:
        """The rotation A(t)."""
        return exp_rot(self.eval_Z(t))


def _derive_ref(x0: np.ndarray, what: str) -> np.ndarray:
    n = float(np.linalg.norm(x0))
    if n < 1e-12:
        raise DomainError(
            f"cannot derive a reference direction: {what} is zero; pass ref_dir explicitly"
        )
    return x0 / n


def integrate_group(
    signal: ForcingSignal,
    lam: float,
    t_end: float,
    config: IntegratorConfig | None = None,
    ref_dir: np.ndarray | None = None,
) -> GroupTrajectory:
    """Integrate ``Adot = A hat(X^G(t, lam))``, ``A(0) = I`` over [0, t_end].

    Parameters
    ----------
    signal : ForcingSignal
    lam : float
        Bifurcation parameter passed through to the forcing.
    t_end : float
        Final time (> 0).
    config : IntegratorConfig, optional
    ref_dir : array_like, optional
        Unit reference for the hemisphere map; defaults to the direction of
        ``signal.eval(0, 0)`` (the primary rotation at criticality).

    Returns
    -------
    GroupTrajectory
    """
    cfg = config or IntegratorConfig()
    if not t_end > 0.0:
        raise DomainError("t_end must be positive")
    if ref_dir is None:
        ref = _derive_ref(_check_forcing_value(signal.eval(0.0, 0.0), 0.0), "X^G(0, 0)")
    else:
        ref = _as_vec3(ref_dir)

    segments: list[ZSegment] = []
    prefixes: list[BallClass] = [BallClass(np.zeros(3))]
    t = 0.0
    slack = 1e-12 * max(1.0, t_end)
    while t < t_end - slack or not segments:
        seg, t_exit = integrate_z_segment(signal, lam, t, t_end, cfg)
        if t_exit <= t + slack:
            raise IntegrationError(f"integration stalled at t={t!r} (restart made no progress)")
        segments.append(seg)
        if t_exit < t_end:
            prefixes.append(bch(prefixes[-1].vector, seg.eval(t_exit)))
        t = t_exit
    return GroupTrajectory(segments, prefixes[: len(segments)], ref, t_end)


@dataclass
class QTrajectory:
    """Dense normal-form coordinates q(t) shared with a co-integrated GroupTrajectory."""

    segments: list[ZSegment]
    dim_q: int
    t_end: float
    _starts: list[float] = field(default=None, repr=False)

    def __post_init__(self):
        if self._starts is None:
            self._starts = [seg.t_start for seg in self.segments]

    def eval(self, t: float) -> np.ndarray:
        if not (-1e-9 <= t <= self.t_end + 1e-9):
            raise DomainError(f"t={t!r} outside the integrated range [0, {self.t_end!r}]")
        i = min(max(bisect.bisect_right(self._starts, t) - 1, 0), len(self.segments) - 1)
        seg = self.segments[i]
        return seg.eval_state(min(max(t, seg.t_start), seg.t_end))[3:]


def integrate_skew_product(
    system: SkewProductSystem,
    q0: np.ndarray,
    lam: float,
    t_end: float,
    config: IntegratorConfig | None = None,
    ref_dir: np.ndarray | None = None,
) -> tuple[GroupTrajectory, QTrajectory]:
    """Co-integrate the group equation with normal-form coordinates.

    The combined state is ``(Z, q)``; the terminal event restarts only Z, and
    q continues across restarts with its event-time value as the next initial
    condition.
    """
    cfg = config or IntegratorConfig()
    if not t_end > 0.0:
        raise DomainError("t_end must be positive")
    q0 = np.asarray(q0, dtype=float)
    if q0.shape != (system.dim_q,):
        raise DomainError(f"q0 must have shape ({system.dim_q},), got {q0.shape}")
    if ref_dir is None:
        origin = np.zeros(system.dim_q)
        ref = _derive_ref(
            _check_forcing_value(system.x_g(origin, 0.0), 0.0), "X^G at (q=0, lam=0)"
        )
    else:
        ref = _as_vec3(ref_dir)
    cutoff = np.pi - cfg.restart_margin

    def rhs(t, y):
        z, q = y[:3], y[3:]
        x = _check_forcing_value(system.x_g(q, lam), t)
        dz = dexpinv_op(z) @ x
        dq = np.asarray(system.x_n(q, lam), dtype=float)
        return np.concatenate([dz, dq])

    def boundary(t, y):
        return float(np.linalg.norm(y[:3])) - cutoff

    boundary.terminal = True
    boundary.direction = 1

    segments: list[ZSegment] = []
    prefixes: list[BallClass] = [BallClass(np.zeros(3))]
    t = 0.0
    q = q0.copy()
    slack = 1e-12 * max(1.0, t_end)
    while t < t_end - slack or not segments:
        sol = _solve_capped(rhs, (t, t_end), np.concatenate([np.zeros(3), q]), cfg, [boundary])
        if sol.status == -1:
            raise IntegrationError(f"skew-product solve failed at t={sol.t[-1]!r}: {sol.message}")
        t_exit = float(sol.t[-1])
        if t_exit <= t + slack:
            raise IntegrationError(f"integration stalled at t={t!r} (restart made no progress)")
        segments.append(ZSegment(t, t_exit, sol.sol))
        state_end = segments[-1].eval_state(t_exit)
        if t_exit < t_end:
            prefixes.append(bch(prefixes[-1].vector, state_end[:3]))
        q = state_end[3:]
        t = t_exit
    traj = GroupTrajectory(segments, prefixes[: len(segments)], ref, t_end)
    return traj, QTrajectory(segments, system.dim_q, t_end)


def stuart_landau(omega_bif: float) -> Callable[[np.ndarray, float], np.ndarray]:
    """Normal-form vector field ``qdot = (lam + i*omega_bif) q - |q|^2 q`` on R^2.

    From ``q0 = (sqrt(lam), 0)`` the orbit is exactly the circle of radius
    sqrt(lam) traversed with angular rate omega_bif.
    """

    def x_n(q: np.ndarray, lam: float) -> np.ndarray:
        u, v = q
        shrink = lam - (u * u + v * v)
        return np.array([shrink * u - omega_bif * v, omega_bif * u + shrink * v])

    return x_n


@dataclass
class EulerTrajectory:
    """Dense Euler-angle chart solution, normalized so that eval_A(0) = I."""

    t_end: float
    theta0: float
    _dense: Callable = field(repr=False)
    _a0_inv: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self._a0_inv is None:
            self._a0_inv = rot_x(self.theta0).T

    def eval_angles(self, t: float) -> np.ndarray:
        """(phi, theta, psi) at time t."""
        if not (-1e-9 <= t <= self.t_end + 1e-9):
            raise DomainError(f"t={t!r} outside the integrated range [0, {self.t_end!r}]")
        return np.asarray(self._dense(min(max(t, 0.0), self.t_end)), dtype=float)

    def eval_A(self, t: float) -> np.ndarray:
        phi, theta, psi = self.eval_angles(t)
        return self._a0_inv @ rot_z(psi) @ rot_x(theta) @ rot_z(phi)


def integrate_euler(
    signal: ForcingSignal,
    lam: float,
    t_end: float,
    theta0: float,
    config: IntegratorConfig | None = None,
) -> EulerTrajectory:
    """Integrate the same group ODE in the Euler-angle chart A = Rz(psi)Rx(theta)Rz(phi).

    The chart equations (F the forcing axis vector in the moving frame) are

        phi_dot   = Fz - cot(theta) (Fy cos(phi) + Fx sin(phi))
        theta_dot = -Fy sin(phi) + Fx cos(phi)
        psi_dot   = (Fy cos(phi) + Fx sin(phi)) / sin(theta)

    with phi(0) = psi(0) = 0 and theta(0) = theta0 in (0, pi). Evaluation
    with |sin(theta)| < 1e-6 raises GimbalLockError (theta0 = 0 raises
    immediately). This formulation exists as an independent cross-check of
    the Z-equation integrator; it cannot pass through the chart singularity.
    """
    cfg = config or IntegratorConfig()
    if not t_end > 0.0:
        raise DomainError("t_end must be positive")
    if abs(math.sin(theta0)) < GIMBAL_TOL:
        raise GimbalLockError(f"theta0 = {theta0!r} is at the chart singularity")
    if not (0.0 < theta0 < np.pi):
        raise DomainError("theta0 must lie in (0, pi)")

    def rhs(t, y):
        phi, theta, _psi = y
        s = math.sin(theta)
        if abs(s) < GIMBAL_TOL:
            raise GimbalLockError(f"theta reached the chart singularity at t={t!r}")
        fx, fy, fz = _check_forcing_value(signal.eval(t, lam), t)
        m = fy * math.cos(phi) + fx * math.sin(phi)
        return np.array(
            [
                fz - (math.cos(theta) / s) * m,
                -fy * math.sin(phi) + fx * math.cos(phi),
                m / s,
            ]
        )

    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        np.array([0.0, theta0, 0.0]),
        method=cfg.method,
        dense_output=True,
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
    )
    if sol.status == -1:
        raise IntegrationError(f"euler-chart solve failed at t={sol.t[-1]!r}: {sol.message}")
    return EulerTrajectory(t_end, theta0, sol.sol)
