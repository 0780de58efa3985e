"""Majorization-lattice operators: greatest lower bound and component halving."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalInvariant
from .probvec import DEFAULT_TOL, ProbVec, Tolerances, pad_to


@dataclass(frozen=True)
class GlbResult:
    """Greatest lower bound of two distributions, plus their cached prefix sums."""

    meet: ProbVec
    prefix_p: tuple[float, ...]
    prefix_q: tuple[float, ...]


def meet_values(a: np.ndarray, b: np.ndarray, eps_zero: float) -> np.ndarray:
    """First differences of the pointwise minimum of two prefix-sum curves.

    Both inputs must be sorted non-increasingly and of equal length. The
    minimum of two concave sequences is concave, so the differences come out
    non-increasing without any re-sort. Micro-negative differences produced
    by floating-point cancellation are clamped to zero.
    """
    ca = np.cumsum(a)
    cb = np.cumsum(b)
    z = np.diff(np.minimum(ca, cb), prepend=0.0)
    tiny = (z < 0.0) & (z >= -eps_zero)
    z[tiny] = 0.0
    if np.any(z < 0.0):
        raise InternalInvariant("meet produced a component below -eps_zero")
    return z


def glb(p: ProbVec, q: ProbVec, tol: Tolerances = DEFAULT_TOL) -> GlbResult:
    """The unique largest distribution majorized by both p and q.

    Its i-th prefix sum is min(prefix_p[i], prefix_q[i]); unequal lengths are
    zero-padded first. Runs in O(n) after the prefix sums.
    """
    n = max(p.n, q.n)
    a = pad_to(p, n).as_array()
    b = pad_to(q, n).as_array()
    z = meet_values(a, b, tol.eps_zero)
    zvec = ProbVec(tuple(float(v) for v in z), tuple(range(n)))
    return GlbResult(
        meet=zvec,
        prefix_p=tuple(float(v) for v in np.cumsum(a)),
        prefix_q=tuple(float(v) for v in np.cumsum(b)),
    )


def half(p: ProbVec) -> ProbVec:
    """Split every component into two equal halves (length doubles).

    Adds exactly one bit of entropy and preserves sortedness.
    """
    doubled = np.repeat(p.as_array(), 2) / 2.0
    return ProbVec(tuple(float(v) for v in doubled), tuple(range(2 * p.n)))


def half_pow(p: ProbVec, i: int) -> ProbVec:
    """Apply half() i times; i = 0 returns p unchanged."""
    if i < 0:
        raise ValueError(f"exponent must be non-negative, got {i}")
    out = p
    for _ in range(i):
        out = half(out)
    return out
