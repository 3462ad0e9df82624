"""Closed-form Baker-Campbell-Hausdorff composition on so(3).

``bch(X, Y)`` returns the ball class [W] with ``exp_rot(W) = exp_rot(X) @
exp_rot(Y)`` for arbitrary axis vectors X, Y (no smallness assumption). The
result is assembled as an explicit linear combination

    W = alpha * X + beta * Y + gamma * (X x Y),

whose coefficients come from the quaternion product: with half-angles
hx = |X|/2, hy = |Y|/2 and cos(ang) the cosine between the axes,

    e  = cos(hx)cos(hy) - sin(hx)sin(hy)cos(ang)   (scalar part)
    a1 = sin(hx)cos(hy),  b1 = cos(hx)sin(hy),  c1 = sin(hx)sin(hy)

so the vector part has norm d1 = |sin(theta_q/2)| and the product angle is
theta_q = 2*atan2(d1, e), folded into [0, pi] for the ball representative.
(The equivalent asin of ``d = 2*d1*|e| = |sin(theta_q)|`` loses half the
significant digits near d = 1, i.e. near quarter-turn products, so the atan2
form is used throughout.) Branch dispatch goes through the product matrix's
trace.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .so3 import BallClass, _as_vec3, exp_rot, log_rot

__all__ = ["BchBranch", "BchBreakdown", "bch", "bch_breakdown", "bch_fold"]

#: branch-dispatch tolerance on cos(theta_prod) and on identity detection
BRANCH_TOL = 1e-10

#: below this vector-part norm the generic-branch division is ill-posed and
#: the (defensive, unreachable in practice) matrix-log fallback is used
FALLBACK_D1 = 1e-12

_ZERO3 = np.zeros(3)


class BchBranch(Enum):
    GENERIC_POSITIVE = "GenericPositive"
    GENERIC_NON_POSITIVE = "GenericNonPositive"
    HALF_TURN_PRODUCT = "HalfTurnProduct"
    IDENTITY_PRODUCT = "IdentityProduct"


@dataclass(frozen=True)
class BchBreakdown:
    """Coefficients and intermediates of one BCH evaluation.

    Unless ``fallback`` is set, the result vector equals
    ``alpha * X + beta * Y + gamma * cross(X, Y)`` exactly (same floating-point
    operations).
    """

    alpha: float
    beta: float
    gamma: float
    branch: BchBranch
    e: float
    a1: float
    b1: float
    c1: float
    d1: float
    d: float
    s: float
    fallback: bool = False


def _bch_full(x: np.ndarray, y: np.ndarray) -> tuple[BallClass, BchBreakdown]:
    x = _as_vec3(x)
    y = _as_vec3(y)
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    hx, hy = 0.5 * nx, 0.5 * ny
    if nx > 0.0 and ny > 0.0:
        cos_ang = float(x @ y) / (nx * ny)
        cos_ang = min(1.0, max(-1.0, cos_ang))
    else:
        cos_ang = 0.0  # unused: the degenerate terms vanish with sin(0)

    e = np.cos(hx) * np.cos(hy) - np.sin(hx) * np.sin(hy) * cos_ang
    a1 = np.sin(hx) * np.cos(hy)
    b1 = np.cos(hx) * np.sin(hy)
    c1 = np.sin(hx) * np.sin(hy)
    sin2_ang = max(1.0 - cos_ang * cos_ang, 0.0)
    d1 = float(
        np.sqrt(max(a1 * a1 + b1 * b1 + 2.0 * a1 * b1 * cos_ang + c1 * c1 * sin2_ang, 0.0))
    )
    d = 2.0 * d1 * abs(e)
    s = 1.0 if e >= 0.0 else -1.0

    h_alpha = a1 / nx if nx > 0.0 else float(np.cos(hy))
    h_beta = b1 / ny if ny > 0.0 else float(np.cos(hx))
    if nx > 0.0 and ny > 0.0:
        h_gamma = c1 / (nx * ny)
    elif ny > 0.0:
        h_gamma = float(np.sin(hy)) / ny
    elif nx > 0.0:
        h_gamma = float(np.sin(hx)) / nx
    else:
        h_gamma = 1.0

    prod = exp_rot(x) @ exp_rot(y)
    cos_theta = float(np.clip((np.trace(prod) - 1.0) / 2.0, -1.0, 1.0))

    # Ball angle of the product from the quaternion pair (d1, e): atan2 is
    # uniformly well conditioned, while asin(d) near d = 1 (quarter-turn
    # products) and arccos near -1 (half-turn products) both lose ~sqrt(eps).
    theta_q = 2.0 * float(np.arctan2(d1, e))
    theta_ball = theta_q if theta_q <= np.pi else 2.0 * np.pi - theta_q

    if float(np.linalg.norm(prod - np.eye(3))) <= BRANCH_TOL:
        br = BchBreakdown(0.0, 0.0, 0.0, BchBranch.IDENTITY_PRODUCT, e, a1, b1, c1, d1, d, s)
        return BallClass(_ZERO3.copy()), br

    if theta_ball >= np.pi - BRANCH_TOL:
        k = np.pi
        branch = BchBranch.HALF_TURN_PRODUCT
    elif cos_theta > BRANCH_TOL:
        if d1 < FALLBACK_D1:
            # defensively delegate to the matrix log; flagged on the breakdown
            cls = log_rot(prod)
            br = BchBreakdown(
                np.nan, np.nan, np.nan, BchBranch.GENERIC_POSITIVE,
                e, a1, b1, c1, d1, d, s, fallback=True,
            )
            return cls, br
        k = s * theta_ball / d1
        branch = BchBranch.GENERIC_POSITIVE
    else:
        k = s * theta_ball / d1
        branch = BchBranch.GENERIC_NON_POSITIVE

    alpha = k * h_alpha
    beta = k * h_beta
    gamma = k * h_gamma
    result = alpha * x + beta * y + gamma * np.cross(x, y)
    br = BchBreakdown(alpha, beta, gamma, branch, e, a1, b1, c1, d1, d, s)
    return BallClass(result), br


def bch(x: np.ndarray, y: np.ndarray) -> BallClass:
    """Ball class of ``exp_rot(x) @ exp_rot(y)``.

    Parameters
    ----------
    x, y : array_like, shape (3,)
        Axis vectors of any magnitude.

    Returns
    -------
    BallClass
        [W] with ``exp_rot(W)`` equal to the product (homomorphism property).
    """
    return _bch_full(x, y)[0]


def bch_breakdown(x: np.ndarray, y: np.ndarray) -> BchBreakdown:
    """Branch, coefficients, and quaternion intermediates of ``bch(x, y)``."""
    return _bch_full(x, y)[1]


def bch_fold(parts: Iterable[np.ndarray] | Sequence[np.ndarray]) -> BallClass:
    """Left fold of :func:`bch` over a sequence of axis vectors.

    ``bch_fold([z1, z2, ..., zn])`` is the class of
    ``exp_rot(z1) @ exp_rot(z2) @ ... @ exp_rot(zn)`` (earliest factor
    leftmost). An empty sequence raises DomainError; a single element is
    reduced into the ball.
    """
    it = iter(parts)
    try:
        first = next(it)
    except StopIteration:
        raise DomainError("bch_fold requires at least one element") from None
    acc = bch(first, _ZERO3)
    for z in it:
        acc = bch(acc.vector, z)
    return acc
