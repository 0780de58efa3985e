"""Exact minimum-entropy coupling by exhaustive search, for desk-size instances.

Entropy is concave, and the minimum of a concave function over a polytope is
attained at a vertex. Every vertex of the coupling polytope can be produced
by a greedy fill: pick any cell, assign it the smaller of its row and column
residuals, retire the exhausted index, repeat. (In a vertex's support forest
some row or column is a leaf, and its single cell carries exactly that
minimum, so induction over all cell orders reaches every vertex.) Minimizing
over all greedy fills therefore gives the true optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InstanceTooLarge
from .probvec import DEFAULT_TOL, ProbVec, Tolerances

DEFAULT_SIZE_CAP = 10
_KEY_DIGITS = 12


@dataclass(frozen=True, eq=False)
class VertexCoupling:
    """A coupling whose support is a forest (a basic feasible solution)."""

    matrix: np.ndarray
    support_size: int

    def entropy(self) -> float:
        v = self.matrix[self.matrix > 0.0]
        return float(-(v * np.log2(v)).sum()) if v.size else 0.0


def _check_cap(p: ProbVec, q: ProbVec, cap: int) -> None:
    if p.n + q.n > cap:
        raise InstanceTooLarge(
            f"instance size {p.n}+{q.n} exceeds the enumeration cap {cap}"
        )


def enumerate_vertices(
    p: ProbVec,
    q: ProbVec,
    tol: Tolerances = DEFAULT_TOL,
    cap: int = DEFAULT_SIZE_CAP,
) -> tuple[VertexCoupling, ...]:
    """Every matrix reachable by greedy fills; a superset of the vertices.

    Matrices are deduplicated after rounding to 12 decimal digits, since many
    cell orders regenerate the same fill.
    """
    _check_cap(p, q, cap)
    eps = tol.eps_zero
    n, m = p.n, q.n
    seen: set[frozenset] = set()
    found: dict[tuple, np.ndarray] = {}

    def rec(cells: tuple, key: frozenset, res_p: tuple, res_q: tuple) -> None:
        rows = [i for i in range(n) if res_p[i] > eps]
        cols = [j for j in range(m) if res_q[j] > eps]
        if not rows or not cols:
            final = tuple(sorted(key))
            if final not in found:
                mat = np.zeros((n, m))
                for i, j, v in cells:
                    mat[i, j] = v
                found[final] = mat
            return
        for i in rows:
            for j in cols:
                v = min(res_p[i], res_q[j])
                nxt_key = key | {(i, j, round(v, _KEY_DIGITS))}
                if nxt_key in seen:
                    continue
                seen.add(nxt_key)
                rp = list(res_p)
                rq = list(res_q)
                rp[i] -= v
                rq[j] -= v
                rec(cells + ((i, j, v),), nxt_key, tuple(rp), tuple(rq))

    rec((), frozenset(), tuple(p.values), tuple(q.values))
    out = []
    for key in sorted(found):
        mat = found[key]
        mat.flags.writeable = False
        out.append(VertexCoupling(mat, int((mat > eps).sum())))
    return tuple(out)


def exact_min_entropy(
    p: ProbVec,
    q: ProbVec,
    tol: Tolerances = DEFAULT_TOL,
    cap: int = DEFAULT_SIZE_CAP,
) -> tuple[float, VertexCoupling]:
    """The true minimum coupling entropy in bits, with one attaining matrix.

    Runs a dynamic program over residual-marginal states: the optimal
    completion of a partial greedy fill depends only on the residuals, and
    cell contributions -v log2 v are additive, so states collapse heavily
    compared to enumerating whole fills.
    """
    _check_cap(p, q, cap)
    eps = tol.eps_zero
    n, m = p.n, q.n
    memo: dict[tuple, tuple[float, tuple[int, int] | None]] = {}

    def key_of(res_p, res_q):
        return (
            tuple(round(v, _KEY_DIGITS) for v in res_p),
            tuple(round(v, _KEY_DIGITS) for v in res_q),
        )

    def solve(res_p: tuple, res_q: tuple) -> float:
        rows = [i for i in range(n) if res_p[i] > eps]
        cols = [j for j in range(m) if res_q[j] > eps]
        if not rows or not cols:
            return 0.0
        key = key_of(res_p, res_q)
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        best = math.inf
        choice: tuple[int, int] | None = None
        for i in rows:
            for j in cols:
                v = min(res_p[i], res_q[j])
                rp = list(res_p)
                rq = list(res_q)
                rp[i] -= v
                rq[j] -= v
                h = -v * math.log2(v) + solve(tuple(rp), tuple(rq))
                if h < best:
                    best = h
                    choice = (i, j)
        memo[key] = (best, choice)
        return best

    opt = solve(tuple(p.values), tuple(q.values))

    # replay the stored choices to materialize one optimal fill
    mat = np.zeros((n, m))
    res_p = list(p.values)
    res_q = list(q.values)
    while any(v > eps for v in res_p) and any(v > eps for v in res_q):
        _, choice = memo[key_of(res_p, res_q)]
        if choice is None:
            break
        i, j = choice
        v = min(res_p[i], res_q[j])
        mat[i, j] = v
        res_p[i] -= v
        res_q[j] -= v
    mat.flags.writeable = False
    return opt, VertexCoupling(mat, int((mat > eps).sum()))
