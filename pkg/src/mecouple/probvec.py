"""Validated probability vectors, Shannon entropy, and the majorization order.

Every distribution in this package is kept in non-increasing order together
with the permutation back to the caller's original indexing, so downstream
results can be reported either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadPartition,
    BadTotal,
    Empty,
    NegativeMass,
    ShrinkRequested,
    ValidationError,
)


@dataclass(frozen=True)
class Tolerances:
    """Numeric slack used by validation and comparisons.

    eps_sum bounds how far total mass may drift from 1; eps_zero is the
    magnitude below which a value is treated as exactly zero.
    """

    eps_sum: float = 1e-9
    eps_zero: float = 1e-12

    def __post_init__(self) -> None:
        if not (0.0 < self.eps_zero < self.eps_sum < 1.0):
            raise ValueError(
                "tolerances must satisfy 0 < eps_zero < eps_sum < 1, got "
                f"eps_zero={self.eps_zero!r}, eps_sum={self.eps_sum!r}"
            )


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class ProbVec:
    """A discrete distribution, sorted non-increasingly.

    perm maps each sorted position to the caller's original index; it is a
    bijection on range(n).
    """

    values: tuple[float, ...]
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.perm):
            raise ValidationError("values and perm must have equal length")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValidationError("perm must be a bijection on range(n)")
        if any(v < 0.0 for v in self.values):
            raise NegativeMass("ProbVec components must be non-negative")

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def in_original_order(self) -> np.ndarray:
        """The components rearranged back to the caller's indexing."""
        out = np.empty(self.n)
        out[list(self.perm)] = self.values
        return out


def make_probvec(raw: Sequence[float] | Iterable[float], tol: Tolerances = DEFAULT_TOL) -> ProbVec:
    """Validate a raw vector and sort it non-increasingly.

    Ties keep ascending original index (stable sort), values in
    [-eps_zero, 0) are clamped to zero, and total mass is checked but never
    rescaled: a bad total is the caller's bug to fix.
    """
    arr = np.asarray(list(raw), dtype=float)
    if arr.ndim != 1:
        raise ValidationError("input must be a flat sequence of numbers")
    if arr.size == 0:
        raise Empty("a distribution needs at least one component")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("input contains non-finite entries")
    bad = np.flatnonzero(arr < -tol.eps_zero)
    if bad.size:
        i = int(bad[0])
        raise NegativeMass(f"component {i} is {arr[i]!r}, below -eps_zero")
    total = float(arr.sum())
    if abs(total - 1.0) > tol.eps_sum:
        raise BadTotal(f"total mass {total!r} deviates from 1 beyond eps_sum")
    arr = np.where(arr < 0.0, 0.0, arr)
    order = np.argsort(-arr, kind="stable")
    return ProbVec(
        tuple(float(v) for v in arr[order]),
        tuple(int(i) for i in order),
    )


def pad_to(p: ProbVec, n: int) -> ProbVec:
    """Append zeros up to length n; fresh original indices for the padding."""
    if n < p.n:
        raise ShrinkRequested(f"cannot pad length-{p.n} vector down to {n}")
    if n == p.n:
        return p
    return ProbVec(p.values + (0.0,) * (n - p.n), p.perm + tuple(range(p.n, n)))


def entropy_bits(values: Iterable[float]) -> float:
    """Shannon entropy of a collection of probabilities, in bits.

    Zero components contribute nothing.
    """
    v = np.asarray(list(values), dtype=float)
    v = v[v > 0.0]
    if v.size == 0:
        return 0.0
    return float(-(v * np.log2(v)).sum())


def entropy(p: ProbVec) -> float:
    """Shannon entropy of a distribution, in bits."""
    return entropy_bits(p.values)


def majorizes(a: ProbVec, b: ProbVec, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff a majorizes b: every prefix sum of a dominates b's.

    Unequal lengths are compared after zero-padding the shorter vector.
    Comparisons carry eps_zero slack so analytically equal vectors never
    flip on rounding.
    """
    n = max(a.n, b.n)
    pa = np.cumsum(pad_to(a, n).values)
    pb = np.cumsum(pad_to(b, n).values)
    return bool(np.all(pa >= pb - tol.eps_zero))


def aggregate(
    p: ProbVec,
    partition: Sequence[Iterable[int]],
    tol: Tolerances = DEFAULT_TOL,
) -> ProbVec:
    """Sum components over a partition of the index range and re-sort.

    The partition must consist of disjoint, nonempty blocks of sorted
    positions 0..n-1 that together cover all of them. The result always
    majorizes p.
    """
    blocks = [tuple(block) for block in partition]
    seen: set[int] = set()
    for block in blocks:
        if not block:
            raise BadPartition("empty block")
        for i in block:
            if not isinstance(i, (int, np.integer)):
                raise BadPartition(f"non-integer index {i!r}")
            if not 0 <= i < p.n:
                raise BadPartition(f"index {i} out of range for length {p.n}")
            if i in seen:
                raise BadPartition(f"index {i} appears in more than one block")
            seen.add(int(i))
    if len(seen) != p.n:
        missing = sorted(set(range(p.n)) - seen)
        raise BadPartition(f"indices not covered: {missing}")
    sums = [float(sum(p.values[i] for i in block)) for block in blocks]
    return make_probvec(sums, tol)
