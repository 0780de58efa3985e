"""Two-marginal coupling with entropy at most one bit above the minimum.

The construction walks indices from n down to 1 in alternating runs
("segments") determined by which marginal's suffix sums dominate. Within a
segment, each component z_j of the meet z = p ∧ q is split greedily into a
part placed on the diagonal cell (j, j) and a remainder carried toward the
next index; at a segment boundary the carried remainders are flushed one
index further. Every output cell is therefore one of at most two pieces of
some z_j, which caps the joint entropy at H(z) + 1 bit and the support size
at 2n, while H(z) itself lower-bounds every coupling's entropy.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InfeasibleSplit, InternalInvariant, LengthMismatch
from .lattice import glb, meet_values
from .probvec import DEFAULT_TOL, ProbVec, Tolerances, entropy, entropy_bits, pad_to


@dataclass(frozen=True)
class InversionPoints:
    """Decreasing index sequence splitting 1..n into dominance segments.

    indices is 1-based: indices[0] = n+1, indices[-1] = 1. Segment s
    (1-based) covers indices[s] .. indices[s-1]-1; odd segments are where
    the first marginal's suffix sums dominate, even segments the reverse.
    swapped records whether the two inputs were exchanged to make the last
    differing component belong to the larger side.
    """

    indices: tuple[int, ...]
    swapped: bool

    @property
    def k(self) -> int:
        return len(self.indices) - 1

    def segment(self, s: int) -> tuple[int, int]:
        """Inclusive 1-based bounds (low, high) of segment s in 1..k."""
        if not 1 <= s <= self.k:
            raise IndexError(f"segment {s} out of range 1..{self.k}")
        return self.indices[s], self.indices[s - 1] - 1


@dataclass(frozen=True)
class SplitResult:
    """Outcome of the greedy split: a diagonal part plus a carried remainder.

    diag_part + sum of the selected slice entries equals the target exactly;
    diag_part + remainder equals the component being split.
    """

    diag_part: float
    remainder: float
    selected: frozenset[int]


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Dense joint distribution whose rows follow p and columns follow q.

    Rows and columns are in sorted (non-increasing marginal) order;
    row_perm/col_perm map sorted positions back to the caller's indices.
    nnz counts entries above eps_zero.
    """

    matrix: np.ndarray
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    nnz: int

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def entropy(self) -> float:
        """Joint Shannon entropy in bits."""
        return entropy_bits(self.matrix.ravel())

    def in_original_order(self) -> np.ndarray:
        """The matrix rearranged back to the callers' indexing."""
        out = np.zeros_like(self.matrix)
        out[np.ix_(list(self.row_perm), list(self.col_perm))] = self.matrix
        return out


class BoundsReport(NamedTuple):
    """Entropy and mutual-information bounds derivable from marginals alone."""

    h_p: float
    h_q: float
    h_glb: float
    mi_upper_improved: float
    mi_upper_classic: float
    joint_lower_classic: float


class DistanceInterval(NamedTuple):
    """Certified interval for the entropic distance 2W - H(p) - H(q)."""

    lower: float
    upper: float
    estimate: float


def _needs_swap(a: np.ndarray, b: np.ndarray, eps_zero: float) -> bool:
    """True if the last differing component of a is smaller than b's."""
    diff = np.flatnonzero(np.abs(a - b) > eps_zero)
    return bool(diff.size) and bool(a[diff[-1]] < b[diff[-1]])


def _inversion_indices(a: np.ndarray, b: np.ndarray, eps_zero: float) -> tuple[int, ...]:
    """Segment boundaries for an already-oriented pair (a dominates at the tail).

    Returns the minimal decreasing 1-based sequence n+1 = i_0 > ... > i_k = 1
    such that suffix sums of a dominate b's throughout odd segments and the
    reverse throughout even segments. A single downward scan with maximal
    extension yields both the sequence and its minimality.
    """
    d = np.cumsum((a - b)[::-1])[::-1]
    n = len(a)
    out = [n + 1]
    i = n
    want_ge = True
    while True:
        if want_ge:
            while i >= 1 and d[i - 1] >= -eps_zero:
                i -= 1
        else:
            while i >= 1 and d[i - 1] <= eps_zero:
                i -= 1
        out.append(i + 1)
        if i == 0:
            return tuple(out)
        want_ge = not want_ge


def inversion_points(p: ProbVec, q: ProbVec, tol: Tolerances = DEFAULT_TOL) -> InversionPoints:
    """Dominance segments of a pair of equal-length distributions.

    The pair is oriented first: if the largest index where the components
    differ has p below q, the roles are exchanged and swapped is set. For
    componentwise-equal inputs there is a single segment, indices (n+1, 1).
    """
    if p.n != q.n:
        raise LengthMismatch(f"lengths differ: {p.n} vs {q.n}; pad first")
    a = p.as_array()
    b = q.as_array()
    swapped = _needs_swap(a, b, tol.eps_zero)
    if swapped:
        a, b = b, a
    return InversionPoints(_inversion_indices(a, b, tol.eps_zero), swapped)


def split(
    z: float,
    x: float,
    residuals: Sequence[float],
    tol: Tolerances = DEFAULT_TOL,
) -> SplitResult:
    """Greedily cover x with a prefix of the residual slice plus part of z.

    Scans the slice in the given order, absorbing entries while the running
    total stays below x, then takes diag_part = x - total out of z. Requires
    every residual to be at most z and x to be at most z plus the slice sum;
    under those hypotheses 0 <= diag_part <= z. An entry is absorbed only
    when it fits below the target with eps_zero to spare: ties and near-ties
    stop the scan, so data with exact decimal structure follows the same
    branch it would under exact arithmetic, and results are deterministic.
    """
    eps = tol.eps_zero
    vals = [float(v) for v in residuals]
    if z <= 0.0:
        raise InfeasibleSplit(f"component to split must be positive, got {z!r}")
    if x < -eps:
        raise InfeasibleSplit(f"target must be non-negative, got {x!r}")
    x = max(x, 0.0)
    for i, v in enumerate(vals):
        if v < -eps:
            raise InfeasibleSplit(f"residual {i} is negative: {v!r}")
        if v > z + eps:
            raise InfeasibleSplit(f"residual {i} exceeds the split component: {v!r} > {z!r}")
    if x > z + math.fsum(vals) + eps:
        raise InfeasibleSplit("target exceeds component plus residual total")
    acc = 0.0
    selected = []
    for i, v in enumerate(vals):
        if acc + v < x - eps:
            selected.append(i)
            acc += v
        else:
            break
    diag = x - acc
    rem = z - diag
    if rem < -tol.eps_sum:
        raise InfeasibleSplit(f"remainder {rem!r} below zero beyond tolerance")
    if rem < 0.0:
        rem = 0.0
    return SplitResult(diag_part=diag, remainder=rem, selected=frozenset(selected))


def _couple_oriented(
    a: np.ndarray,
    b: np.ndarray,
    tol: Tolerances,
    trace: dict | None = None,
    flip_writes: bool = False,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Core construction for an oriented, equal-length, sorted pair (a, b).

    Returns (matrix, row_sums, col_sums, cells_written) where the matrix has
    row sums a and column sums b; with flip_writes the transposed matrix is
    produced directly, sparing the caller an n^2 copy. Every cell is written
    at most once, so the sums and the write count are accumulated on the fly
    instead of re-scanning the dense matrix. When trace is a dict it
    receives "pieces" (component index, written value) for every cell and
    "boundaries" (segment number, parity, low index, matrix copy) after each
    segment's flush.
    """
    n = len(a)
    eps = tol.eps_zero
    idx = _inversion_indices(a, b, eps)
    z = meet_values(a, b, eps)
    m = np.zeros((n, n))
    row_sums = np.zeros(n)
    col_sums = np.zeros(n)
    written = 0
    carried: deque[tuple[int, float]] = deque()
    if trace is not None:
        trace.setdefault("pieces", [])
        trace.setdefault("boundaries", [])
        trace["indices"] = idx
        trace["meet"] = z.copy()

    def write(row: int, col: int, value: float, source: int) -> None:
        nonlocal written
        if flip_writes:
            row, col = col, row
        m[row - 1, col - 1] = value
        row_sums[row - 1] += value
        col_sums[col - 1] += value
        written += 1
        if trace is not None:
            trace["pieces"].append((source, value))

    for s in range(1, len(idx)):
        lo, hi = idx[s], idx[s - 1] - 1
        odd = s % 2 == 1
        marginal = b if odd else a
        for j in range(hi, lo - 1, -1):
            zj = float(z[j - 1])
            if zj <= 0.0:
                continue
            x = float(marginal[j - 1])
            acc = 0.0
            while carried and acc + carried[0][1] < x - eps:
                src, v = carried.popleft()
                if odd:
                    write(src, j, v, src)
                else:
                    write(j, src, v, src)
                acc += v
            diag = x - acc
            if diag > eps:
                write(j, j, diag, j)
            rem = zj - diag
            if rem < -tol.eps_sum:
                raise InternalInvariant(
                    f"carried remainder {rem!r} for component {j} below zero"
                )
            if rem > eps:
                carried.append((j, rem))
        if lo != 1:
            while carried:
                src, v = carried.popleft()
                if odd:
                    write(src, lo - 1, v, src)
                else:
                    write(lo - 1, src, v, src)
        if trace is not None:
            trace["boundaries"].append(
                {"segment": s, "odd": odd, "lo": lo, "matrix": m.copy()}
            )
    leftover = sum(v for _, v in carried)
    if leftover > tol.eps_sum:
        raise InternalInvariant(f"bookkeeping left {leftover!r} mass unplaced")
    return m, row_sums, col_sums, written


def min_entropy_coupling(
    p: ProbVec,
    q: ProbVec,
    tol: Tolerances = DEFAULT_TOL,
    _trace: dict | None = None,
) -> CouplingMatrix:
    """A coupling of p and q with entropy within one bit of the minimum.

    The output matrix is square of side max(p.n, q.n) (inputs are zero-padded
    to a common length), has exact marginals up to eps_sum, support size at
    most 2n, and satisfies H(p ∧ q) <= H(M) <= H(p ∧ q) + 1 bit. Identical
    inputs always produce identical matrices, in O(n^2) time.
    """
    n = max(p.n, q.n)
    pp = pad_to(p, n)
    qq = pad_to(q, n)
    a = pp.as_array()
    b = qq.as_array()
    if not np.any(np.abs(a - b) > tol.eps_zero):
        # componentwise-equal marginals couple on the diagonal
        m = np.diag(a)
        row_sums = a.copy()
        col_sums = a.copy()
        nnz = int((a > tol.eps_zero).sum())
    elif _needs_swap(a, b, tol.eps_zero):
        m, row_sums, col_sums, nnz = _couple_oriented(b, a, tol, _trace, flip_writes=True)
    else:
        m, row_sums, col_sums, nnz = _couple_oriented(a, b, tol, _trace)
    row_dev = float(np.abs(row_sums - a).max())
    col_dev = float(np.abs(col_sums - b).max())
    if max(row_dev, col_dev) > tol.eps_sum:
        raise InternalInvariant(
            f"marginal deviation {max(row_dev, col_dev)!r} exceeds eps_sum"
        )
    if nnz > 2 * n:
        raise InternalInvariant(f"support size {nnz} exceeds 2n = {2 * n}")
    m.flags.writeable = False
    return CouplingMatrix(matrix=m, row_perm=pp.perm, col_perm=qq.perm, nnz=nnz)


def bounds(p: ProbVec, q: ProbVec, tol: Tolerances = DEFAULT_TOL) -> BoundsReport:
    """Marginal-only bounds on joint entropy and mutual information.

    H(p ∧ q) lower-bounds every coupling's entropy and dominates the classic
    bound max(H(p), H(q)); dually H(p) + H(q) - H(p ∧ q) upper-bounds the
    mutual information below the classic min(H(p), H(q)).
    """
    h_p = entropy(p)
    h_q = entropy(q)
    h_glb = entropy(glb(p, q, tol).meet)
    return BoundsReport(
        h_p=h_p,
        h_q=h_q,
        h_glb=h_glb,
        mi_upper_improved=h_p + h_q - h_glb,
        mi_upper_classic=min(h_p, h_q),
        joint_lower_classic=max(h_p, h_q),
    )


def distance_interval(
    p: ProbVec,
    q: ProbVec,
    tol: Tolerances = DEFAULT_TOL,
) -> DistanceInterval:
    """Certified enclosure of the entropic distance 2W(p,q) - H(p) - H(q).

    W is the (intractable) minimum coupling entropy; H(p ∧ q) <= W <= H(M)
    brackets it with a gap of at most one bit, so the interval below has
    width at most 2 and lower + 1 estimates the distance with additive error
    at most 1.
    """
    h_p = entropy(p)
    h_q = entropy(q)
    h_glb = entropy(glb(p, q, tol).meet)
    h_m = min_entropy_coupling(p, q, tol).entropy()
    lower = 2.0 * h_glb - h_p - h_q
    upper = 2.0 * h_m - h_p - h_q
    return DistanceInterval(lower=lower, upper=upper, estimate=lower + 1.0)
