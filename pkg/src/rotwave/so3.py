"""Rotation-group primitives: hat map, exponential and logarithm, hemisphere
reduction, and the tangent maps used by the Lie-group ODE integrator.

Conventions
-----------
Rotations act on column vectors. Elements of the Lie algebra are stored as
their axis vectors: the 3-vector ``v`` stands for the skew matrix ``hat(v)``
with ``hat(e_z) @ e_x = e_y`` (so ``exp_rot(t * e_z)`` is the counterclockwise
rotation about +z). The matrix logarithm lives in the closed ball of radius pi
with antipodal boundary points identified; :class:`BallClass` models one such
equivalence class.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SingularityError

__all__ = [
    "AngleAxis",
    "BallClass",
    "as_rotation",
    "dexp_op",
    "dexpinv_op",
    "exp_rot",
    "hat",
    "hemisphere_sign",
    "log_rot",
    "q_map",
    "rot_x",
    "rot_y",
    "rot_z",
    "vee",
]

#: below this angle the trigonometric coefficient functions switch to their
#: Taylor polynomials (the closed forms lose relative accuracy to cancellation)
SERIES_RADIUS = 1e-4

#: dexpinv is singular at |Z| = 2*pi; refuse evaluation inside this margin
DEXPINV_MARGIN = 1e-6

#: half-width of the band around the equator of the reference hemisphere in
#: which a direction counts as "boundary" for the hemisphere map
HEMI_BAND = 1e-6

_EZ = np.array([0.0, 0.0, 1.0])


def hat(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of the axis vector ``v`` (so ``hat(v) @ w = v x w``)."""
    v = _as_vec3(v)
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`hat`. Raises DomainError if ``m`` is not skew within 1e-10."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise DomainError(f"vee expects a 3x3 matrix, got shape {m.shape}")
    if np.max(np.abs(m + m.T)) > 1e-10:
        raise DomainError("vee: matrix is not skew-symmetric within 1e-10")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def _as_vec3(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError("expected a finite 3-vector")
    return v


def _exp_coeffs(theta: float) -> tuple[float, float]:
    # sin(t)/t and (1 - cos t)/t^2 = 2 sin^2(t/2)/t^2, series-switched
    if theta < SERIES_RADIUS:
        t2 = theta * theta
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0 - t2 * t2 * t2 / 40320.0
    else:
        a = np.sin(theta) / theta
        half = np.sin(0.5 * theta)
        b = 2.0 * half * half / (theta * theta)
    return a, b


def exp_rot(v: np.ndarray) -> np.ndarray:
    """Rotation matrix ``exp(hat(v))`` by the Rodrigues formula.

    Parameters
    ----------
    v : array_like, shape (3,)
        Axis vector; its norm is the rotation angle (any magnitude accepted).

    Returns
    -------
    ndarray, shape (3, 3)
        Proper orthogonal matrix, orthogonal to machine precision.
    """
    v = _as_vec3(v)
    theta = float(np.linalg.norm(v))
    a, b = _exp_coeffs(theta)
    k = hat(v)
    return np.eye(3) + a * k + b * (k @ k)


def rot_x(angle: float) -> np.ndarray:
    """Rotation by ``angle`` about +x."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    """Rotation by ``angle`` about +y."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    """Rotation by ``angle`` about +z."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def as_rotation(m: np.ndarray, drift_tol: float = 1e-12) -> np.ndarray:
    """Validate ``m`` as a rotation matrix, re-orthonormalizing small drift.

    Matrices within ``drift_tol`` of orthogonality pass through unchanged;
    drift up to 1e-3 is repaired by projection onto SO(3) (polar factor);
    anything worse raises DomainError.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise DomainError("rotation must be a finite 3x3 matrix")
    err = max(
        float(np.linalg.norm(m.T @ m - np.eye(3))),
        abs(float(np.linalg.det(m)) - 1.0),
    )
    if err <= drift_tol:
        return m
    if err > 1e-3:
        raise DomainError(f"matrix is not a rotation (orthogonality defect {err:.3e})")
    u, _, vt = np.linalg.svd(m)
    r = u @ vt
    if np.linalg.det(r) < 0:
        r = u @ np.diag([1.0, 1.0, -1.0]) @ vt
    return r


class AngleAxis(NamedTuple):
    """Angle in [0, pi] and unit axis (axis is +z by convention at angle 0)."""

    angle: float
    axis: np.ndarray


@dataclass(frozen=True, eq=False)
class BallClass:
    """A point of the closed radius-pi ball with antipodal boundary points identified.

    The stored ``vector`` is one representative; two instances are the same
    class iff their vectors coincide, or both have norm pi and are negatives
    of each other.
    """

    vector: np.ndarray

    def __post_init__(self):
        v = _as_vec3(self.vector).copy()
        n = float(np.linalg.norm(v))
        if n > np.pi + 1e-12:
            raise DomainError(f"ball-class vector has norm {n:.17g} > pi + 1e-12")
        if n > np.pi:
            v *= np.pi / n  # snap fp overshoot back onto the boundary sphere
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def angle_axis(self) -> AngleAxis:
        n = self.norm
        if n == 0.0:
            return AngleAxis(0.0, _EZ.copy())
        return AngleAxis(n, self.vector / n)

    def isclose(self, other: "BallClass", tol: float = 1e-12) -> bool:
        """Class equality within ``tol`` (antipodal boundary reps compare equal)."""
        d = float(np.linalg.norm(self.vector - other.vector))
        if d <= tol:
            return True
        if min(self.norm, other.norm) >= np.pi - max(tol, 1e-9):
            return float(np.linalg.norm(self.vector + other.vector)) <= tol
        return False

    def __eq__(self, other):
        if not isinstance(other, BallClass):
            return NotImplemented
        return self.isclose(other, tol=0.0)

    def __repr__(self):
        return f"BallClass({np.array2string(self.vector, precision=12)})"


def log_rot(r: np.ndarray) -> BallClass:
    """Matrix logarithm of a rotation, as a ball class.

    Parameters
    ----------
    r : array_like, shape (3, 3)
        Rotation matrix. Small orthogonality drift is repaired first.

    Returns
    -------
    BallClass
        The class [v] with ``exp_rot(v) == r``.

    Notes
    -----
    The angle is recovered as ``atan2(|skew part|, (trace - 1)/2)``, which
    keeps full precision at both ends of [0, pi]. Away from angle pi the
    axis comes from the skew part of ``r``. Within 1e-6 of pi the skew part
    degenerates, so the axis is extracted from the symmetric rank-one matrix
    ``(B - cos^2(t/2) I) / sin^2(t/2)`` ~ ``n n^T`` (B the symmetrized
    half-sum), reading the dominant diagonal first; the representative's
    sign is canonicalized to make its first nonzero component positive.
    """
    r = as_rotation(r)
    c = float(np.clip((np.trace(r) - 1.0) / 2.0, -1.0, 1.0))
    w = vee((r - r.T) / 2.0)  # = sin(angle) * axis
    s = float(np.linalg.norm(w))
    # atan2 stays well conditioned at both ends, where arccos((tr-1)/2)
    # flattens quadratically and loses half the digits
    angle = float(np.arctan2(s, c))
    if angle < np.pi - 1e-6:
        if s < 1e-12:
            return BallClass(w)  # angle ~ 0: w is already the vector to O(angle^3)
        return BallClass(w * (angle / s))
    # near pi: (r + I)/2 ~ n n^T + cos-corrections; symmetrize and normalize
    b = (r + r.T) / 4.0 + np.eye(3) / 2.0
    c2h = (1.0 + c) / 2.0  # cos^2(angle/2)
    s2 = 1.0 - c2h
    cm = (b - c2h * np.eye(3)) / s2
    j = int(np.argmax(np.diag(cm)))
    nj = float(np.sqrt(max(cm[j, j], 0.0)))
    axis = cm[:, j] / nj
    axis /= np.linalg.norm(axis)
    # the rank-one extraction loses the axis sign; below pi it is physical
    # (the two signs are different rotations) and the skew part still holds
    # it: w . axis = sin(angle) * (n . axis)
    d = float(w @ axis)
    if abs(d) > 8.0 * np.finfo(float).eps:
        if d < 0.0:
            axis = -axis
    else:
        # indistinguishable from a half turn: both signs reconstruct r to
        # machine precision, pick the canonical antipodal representative
        for comp in axis:
            if comp != 0.0:
                if comp < 0.0:
                    axis = -axis
                break
    return BallClass(angle * axis)


def _rotation_to_pole(ref: np.ndarray) -> np.ndarray:
    """A rotation sending the unit vector ``ref`` to +z."""
    c = float(ref @ _EZ)
    w = np.cross(ref, _EZ)
    s = float(np.linalg.norm(w))
    if s < 1e-12:
        if c > 0:
            return np.eye(3)
        return np.diag([1.0, -1.0, -1.0])  # half turn about +x
    return exp_rot(np.arctan2(s, c) * w / s)


def _in_north_set(u: np.ndarray, tol: float = 1e-9) -> bool:
    """Deterministic 'northern' rule for unit vectors (used only for tie-breaks)."""
    if u[2] > tol:
        return True
    if u[2] < -tol:
        return False
    if u[1] > tol:
        return True
    if u[1] < -tol:
        return False
    return u[0] < 0.0


def hemisphere_sign(u: np.ndarray, ref: np.ndarray) -> float:
    """+1 if the unit vector ``u`` lies in the closed hemisphere around ``ref``.

    Directions within HEMI_BAND of the equator count as the reference
    hemisphere (+1) except that exact tie-break questions are settled by the
    north-set rule after rotating ``ref`` to the pole.
    """
    c = float(u @ ref)
    if c > HEMI_BAND:
        return 1.0
    if c < -HEMI_BAND:
        return -1.0
    return 1.0 if _in_north_set(_rotation_to_pole(ref) @ u) else -1.0


def q_map(c: BallClass, ref_dir: np.ndarray) -> np.ndarray:
    """Pick the representative of ``c`` on the reference side, unreduced past 2*pi.

    Representatives whose direction lies in the closed hemisphere around
    ``ref_dir`` (with a 1e-6 tolerance band at the equator) are returned as
    stored; clearly-opposite representatives are replaced by their
    2*pi-complement ``(1 - 2*pi/|v|) * v``, which has norm ``2*pi - |v|`` and
    the opposite direction but the same exponential.

    Parameters
    ----------
    c : BallClass
    ref_dir : array_like, shape (3,)
        Unit reference direction (checked to 1e-10).

    Returns
    -------
    ndarray, shape (3,)
        Vector with ``exp_rot(result) == exp_rot(c.vector)``.
    """
    ref = _as_vec3(ref_dir)
    if abs(float(np.linalg.norm(ref)) - 1.0) > 1e-10:
        raise DomainError("q_map reference direction must be a unit vector")
    n = c.norm
    v = np.array(c.vector)
    if n == 0.0:
        return v
    u = v / n
    t = float(u @ ref)
    if t >= -HEMI_BAND:
        if n >= np.pi - 1e-12 and abs(t) <= HEMI_BAND:
            # antipodal class with boundary direction: canonicalize the rep
            if not _in_north_set(_rotation_to_pole(ref) @ u):
                return -v
        return v
    return (1.0 - 2.0 * np.pi / n) * v


def _dexp_coeffs(theta: float) -> tuple[float, float]:
    # (cos t - 1)/t^2 and (t - sin t)/t^3, series-switched
    if theta < SERIES_RADIUS:
        t2 = theta * theta
        ca = -0.5 + t2 / 24.0 - t2 * t2 / 720.0 + t2 * t2 * t2 / 40320.0
        cb = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362880.0
    else:
        ca = (np.cos(theta) - 1.0) / (theta * theta)
        cb = (theta - np.sin(theta)) / (theta * theta * theta)
    return ca, cb


def dexp_op(z: np.ndarray) -> np.ndarray:
    """Right trivialized tangent of exp at ``z``, as a 3x3 matrix on axis vectors.

    ``d/dt exp_rot(Z(t)) = exp_rot(Z) @ hat(dexp_op(Z) @ Zdot)``.
    """
    z = _as_vec3(z)
    theta = float(np.linalg.norm(z))
    ca, cb = _dexp_coeffs(theta)
    k = hat(z)
    return np.eye(3) + ca * k + cb * (k @ k)


def _dexpinv_c2(theta: float) -> float:
    if theta < SERIES_RADIUS:
        t2 = theta * theta
        return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0 + t2 * t2 * t2 / 1209600.0
    return 1.0 / (theta * theta) - np.cos(0.5 * theta) / (
        2.0 * np.sin(0.5 * theta) * theta
    )


def dexpinv_op(z: np.ndarray) -> np.ndarray:
    """Inverse of :func:`dexp_op`: ``Zdot = dexpinv_op(Z) @ X`` solves the group ODE.

    Singular at ``|z| = 2*pi``; evaluation within DEXPINV_MARGIN of the
    singularity raises SingularityError (the integrator restarts segments
    long before reaching it).
    """
    z = _as_vec3(z)
    theta = float(np.linalg.norm(z))
    if theta >= 2.0 * np.pi - DEXPINV_MARGIN:
        raise SingularityError(
            f"dexpinv evaluated at |z| = {theta:.6f}, within {DEXPINV_MARGIN:g} of 2*pi"
        )
    k = hat(z)
    return np.eye(3) + 0.5 * k + _dexpinv_c2(theta) * (k @ k)
