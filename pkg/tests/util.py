"""Shared generators and independent oracles used across the test modules."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from mecouple import ProbVec, make_probvec


def random_probvec(rng: np.random.Generator, n: int) -> ProbVec:
    return make_probvec(rng.dirichlet(np.ones(n)))


def comparable_pair(rng: np.random.Generator, n: int, rounds: int = 3):
    """A pair (lower, upper) with lower majorized by upper.

    lower is an average of permuted copies of upper, i.e. a doubly-stochastic
    image, which can only move it down the majorization order.
    """
    upper = np.sort(rng.dirichlet(np.ones(n)))[::-1]
    avg = np.zeros(n)
    for _ in range(rounds):
        avg += upper[rng.permutation(n)]
    avg /= rounds
    return make_probvec(avg), make_probvec(upper)


def suffix_diffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """d[i-1] = sum(a[i-1:]) - sum(b[i-1:]) for 1-based positions i."""
    return np.cumsum((a - b)[::-1])[::-1]


def brute_inversion_sequences(a: np.ndarray, b: np.ndarray, eps: float = 1e-12):
    """All minimal-length alternating dominance partitions, by exhaustive scan.

    Enumerates every decreasing index sequence n+1 > i_1 > ... > i_k = 1 and
    keeps those whose odd segments satisfy suffix-sum dominance of a over b
    (and even segments the reverse), returning the ones with the fewest
    segments. Independent of the production single-scan computation.
    """
    n = len(a)
    d = suffix_diffs(a, b)

    def segment_ok(lo: int, hi: int, odd: bool) -> bool:
        if odd:
            return all(d[i - 1] >= -eps for i in range(lo, hi + 1))
        return all(d[i - 1] <= eps for i in range(lo, hi + 1))

    for interior_count in range(0, n):
        valid = []
        for combo in combinations(range(2, n + 1), interior_count):
            idx = (n + 1,) + tuple(sorted(combo, reverse=True)) + (1,)
            if all(
                segment_ok(idx[s], idx[s - 1] - 1, s % 2 == 1)
                for s in range(1, len(idx))
            ):
                valid.append(idx)
        if valid:
            return valid
    raise AssertionError("no valid dominance partition found")


def flatten_sorted(matrix: np.ndarray) -> ProbVec:
    """All cells of a joint matrix as one sorted distribution."""
    return make_probvec(matrix.ravel())


def _suffix_table(arr: np.ndarray) -> np.ndarray:
    """table[i] = sum(arr[i-1:]) for 1-based i; table[n+1] = 0."""
    n = len(arr)
    out = np.zeros(n + 2)
    out[1 : n + 1] = np.cumsum(arr[::-1])[::-1]
    return out


def check_meet_segment_identities(a, b, idx, z, atol=1e-12):
    """Segmentwise identities tying the meet z to the oriented pair (a, b).

    Within odd segments the suffix sums of z equal a's and interior
    components coincide with a's (even segments: b). At each boundary the
    single crossover component is fixed by the suffix-sum gap and dominates
    the other marginal's component.
    """
    sa, sb, sz = _suffix_table(a), _suffix_table(b), _suffix_table(z)
    k = len(idx) - 1
    for s in range(1, k + 1):
        lo, hi = idx[s], idx[s - 1] - 1
        odd = s % 2 == 1
        for i in range(lo, hi + 1):
            ref = sa[i] if odd else sb[i]
            assert abs(sz[i] - ref) <= atol, (s, i)
        for i in range(lo, hi):
            ref = a[i - 1] if odd else b[i - 1]
            assert abs(z[i - 1] - ref) <= atol, (s, i)
    for s in range(0, k):
        t = idx[s] - 1
        gap = sa[idx[s]] - sb[idx[s]]
        if s % 2 == 1:
            assert abs(z[t - 1] - (b[t - 1] - gap)) <= atol, s
            assert z[t - 1] >= a[t - 1] - atol, s
        else:
            assert abs(z[t - 1] - (a[t - 1] + gap)) <= atol, s
            assert z[t - 1] >= b[t - 1] - atol, s


def check_boundary_invariants(a, b, z, trace, atol=1e-12):
    """Row/column bookkeeping at every segment boundary of the coupling loop.

    After segment s finishes, all rows and columns from its low index upward
    are exactly satisfied, the flush line one index below holds exactly the
    segment's surplus, and nothing below that line has been touched.
    """
    n = len(a)
    for event in trace["boundaries"]:
        m, lo, odd = event["matrix"], event["lo"], event["odd"]
        rows = m.sum(axis=1)
        cols = m.sum(axis=0)
        for j in range(lo, n + 1):
            assert abs(rows[j - 1] - a[j - 1]) <= atol, (lo, j)
            assert abs(cols[j - 1] - b[j - 1]) <= atol, (lo, j)
        if lo != 1:
            t = lo - 1
            if odd:
                assert abs(cols[t - 1] - (b[t - 1] - z[t - 1])) <= atol
                assert rows[t - 1] <= atol
            else:
                assert abs(rows[t - 1] - (a[t - 1] - z[t - 1])) <= atol
                assert cols[t - 1] <= atol
            assert np.all(m[: t - 1, : t - 1] == 0.0)


def check_piece_partition(z, trace, atol=1e-12, coverage_floor=1e-9):
    """Every meet component is written as at most two cells that sum back to it."""
    groups: dict[int, list[float]] = {}
    for src, val in trace["pieces"]:
        groups.setdefault(src, []).append(val)
    for src, vals in groups.items():
        assert len(vals) <= 2, src
        assert abs(sum(vals) - z[src - 1]) <= atol, src
    for j, zj in enumerate(z, start=1):
        if zj > coverage_floor:
            assert j in groups, j


def check_segment_strips(m: np.ndarray, idx, z, atol=1e-9):
    """Per-segment strips hold <= 2 cells per line summing to z, covering all mass."""
    k = len(idx) - 1
    covered = np.zeros_like(m, dtype=bool)
    for s in range(1, k + 1):
        lo, hi = idx[s], idx[s - 1] - 1
        line_lo = max(lo - 1, 1)
        if s % 2 == 1:
            for i in range(lo, hi + 1):
                line = m[i - 1, line_lo - 1 : hi]
                assert (line > 0).sum() <= 2, (s, i)
                assert abs(line.sum() - z[i - 1]) <= atol, (s, i)
            covered[lo - 1 : hi, line_lo - 1 : hi] = True
        else:
            for j in range(lo, hi + 1):
                line = m[line_lo - 1 : hi, j - 1]
                assert (line > 0).sum() <= 2, (s, j)
                assert abs(line.sum() - z[j - 1]) <= atol, (s, j)
            covered[line_lo - 1 : hi, lo - 1 : hi] = True
    assert np.all(m[~covered] == 0.0)
