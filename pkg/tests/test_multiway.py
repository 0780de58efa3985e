import numpy as np
import pytest

from mecouple import (
    AxisOutOfRange,
    InstanceTooLarge,
    SparseJoint,
    TooFewMarginals,
    entropy,
    glb,
    half_pow,
    k_min_entropy_coupling,
    majorizes,
    make_probvec,
    marginalize,
    min_entropy_coupling,
    pad_to,
)
from mecouple.multiway import _merge_tree
from mecouple.pairwise import _couple_oriented, _needs_swap
from mecouple.probvec import DEFAULT_TOL
from util import check_piece_partition, random_probvec


def meet_of(ps):
    out = ps[0]
    for other in ps[1:]:
        out = glb(out, other).meet
    return out


class TestExamples:
    def test_two_marginals_match_pairwise_coupling(self):
        rng = np.random.default_rng(40)
        for _ in range(50):
            p = random_probvec(rng, int(rng.integers(2, 9)))
            q = random_probvec(rng, int(rng.integers(2, 9)))
            joint = k_min_entropy_coupling([p, q])
            cm = min_entropy_coupling(p, q)
            original = cm.in_original_order()
            cells = {
                (i, j): original[i, j]
                for i in range(original.shape[0])
                for j in range(original.shape[1])
                if original[i, j] > 0.0
            }
            assert {c: v for v, c in joint.entries} == pytest.approx(cells, abs=1e-15)

    def test_identical_marginals_concentrate_on_the_diagonal(self):
        p = make_probvec([0.1, 0.7, 0.2])
        joint = k_min_entropy_coupling([p, p, p, p])
        got = {c: v for v, c in joint.entries}
        assert got == pytest.approx(
            {(1, 1, 1, 1): 0.7, (2, 2, 2, 2): 0.2, (0, 0, 0, 0): 0.1}, abs=1e-12
        )
        assert joint.entropy() == pytest.approx(entropy(p), abs=1e-12)

    def test_point_mass_marginals_force_structure(self):
        ps = [make_probvec([1.0]), make_probvec([1.0]), make_probvec([0.5, 0.5])]
        joint = k_min_entropy_coupling(ps)
        got = {c: v for v, c in joint.entries}
        assert got == pytest.approx({(0, 0, 0): 0.5, (0, 0, 1): 0.5}, abs=1e-12)
        assert joint.entropy() == pytest.approx(1.0, abs=1e-12)

    def test_too_few(self):
        with pytest.raises(TooFewMarginals):
            k_min_entropy_coupling([make_probvec([1.0])])


class TestMarginalize:
    def test_diagonal_joint(self):
        p = make_probvec([0.5, 0.3, 0.2])
        joint = k_min_entropy_coupling([p, p, p])
        for axis in range(3):
            assert marginalize(axis, joint).values == pytest.approx(p.values, abs=1e-12)

    def test_grouping_sums(self):
        joint = SparseJoint(
            entries=((0.5, (0, 0)), (0.3, (1, 0)), (0.2, (1, 1))),
            k=2,
            dims=(2, 2),
        )
        assert marginalize(0, joint).values == pytest.approx((0.5, 0.5), abs=1e-15)
        assert marginalize(1, joint).values == pytest.approx((0.8, 0.2), abs=1e-15)

    def test_single_entry(self):
        joint = SparseJoint(entries=((1.0, (0, 0, 0)),), k=3, dims=(1, 1, 1))
        for axis in range(3):
            assert marginalize(axis, joint).values == (1.0,)

    def test_axis_out_of_range(self):
        joint = SparseJoint(entries=((1.0, (0, 0)),), k=2, dims=(1, 1))
        with pytest.raises(AxisOutOfRange):
            marginalize(2, joint)
        with pytest.raises(AxisOutOfRange):
            marginalize(-1, joint)


class TestGuarantees:
    @pytest.mark.parametrize("k", [2, 3, 4, 8])
    def test_marginals_and_entropy_bound(self, k):
        rng = np.random.default_rng(41 + k)
        ceil_log_k = (k - 1).bit_length()
        for _ in range(40):
            ps = [random_probvec(rng, int(rng.integers(2, 9))) for _ in range(k)]
            joint = k_min_entropy_coupling(ps)
            n = max(p.n for p in ps)
            for axis, p in enumerate(ps):
                got = marginalize(axis, joint)
                assert np.allclose(
                    pad_to(got, n).values, pad_to(p, n).values, atol=1e-9
                )
            gap = joint.entropy() - entropy(meet_of(ps))
            assert -1e-9 <= gap <= ceil_log_k + 1e-9
            assert len(joint.entries) <= (1 << ceil_log_k) * n
            assert all(v > 0.0 for v, _ in joint.entries)

    def test_dense_tensor_reproduces_marginals(self):
        rng = np.random.default_rng(50)
        ps = [random_probvec(rng, 4) for _ in range(3)]
        joint = k_min_entropy_coupling(ps)
        dense = joint.to_dense()
        assert dense.shape == (4, 4, 4)
        assert dense.sum() == pytest.approx(1.0, abs=1e-9)
        for axis, p in enumerate(ps):
            axes = tuple(a for a in range(3) if a != axis)
            assert np.allclose(
                dense.sum(axis=axes), p.in_original_order(), atol=1e-9
            )

    def test_dense_cap(self):
        rng = np.random.default_rng(51)
        ps = [random_probvec(rng, 4) for _ in range(3)]
        joint = k_min_entropy_coupling(ps)
        with pytest.raises(InstanceTooLarge):
            joint.to_dense(cap=10)

    def test_merge_tree_majorization_chain(self):
        # each node's value vector dominates the halved meet of its leaves
        rng = np.random.default_rng(52)
        for k in (2, 4, 8):
            for _ in range(15):
                ps = [random_probvec(rng, int(rng.integers(2, 9))) for _ in range(k)]
                n = max(p.n for p in ps)
                padded = [pad_to(p, n) for p in ps]
                for level, nodes in enumerate(_merge_tree(ps)):
                    for node in nodes:
                        leaf_meet = meet_of(padded[node.leaf_lo : node.leaf_hi + 1])
                        vec = make_probvec(node.values)
                        assert majorizes(vec, half_pow(leaf_meet, level))

    def test_each_merge_splits_meet_components_in_two(self):
        rng = np.random.default_rng(53)
        for _ in range(25):
            ps = [random_probvec(rng, int(rng.integers(2, 7))) for _ in range(4)]
            levels = _merge_tree(ps)
            for level_nodes in levels[:-1]:
                for left, right in zip(level_nodes[::2], level_nodes[1::2]):
                    n = max(len(left.values), len(right.values))
                    a = pad_to(make_probvec(left.values), n).as_array()
                    b = pad_to(make_probvec(right.values), n).as_array()
                    if _needs_swap(a, b, DEFAULT_TOL.eps_zero):
                        a, b = b, a
                    trace = {}
                    _couple_oriented(a, b, DEFAULT_TOL, trace)
                    check_piece_partition(trace["meet"], trace)
