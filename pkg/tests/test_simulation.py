import math
import random

import pytest

from deamort.algorithms import MoveToRootAlgorithm, SplayAlgorithm, StaticAlgorithm
from deamort.model import ModelTree, Trace, verify_trace
from deamort.optsearch import enumerate_shapes
from deamort.simulation import (
    Simulator,
    VirtualTree,
    WrappedAlgorithm,
    build_initial,
    decode_virtual,
    dump_state,
    heavy_path_decompose,
    simulate_access,
    wrap,
)

DEPTH_MULT, DEPTH_ADD = 13.0, 14.0


def _vt(n, shape="balanced", weights=None):
    return VirtualTree(ModelTree.new_tree(n, shape), weights)


def test_heavy_path_linear_right_single_path():
    vt = _vt(4, "linear-right")
    dec = heavy_path_decompose(vt)
    assert dec["paths"] == [[1, 2, 3, 4]]


def test_heavy_path_tie_goes_left():
    vt = _vt(3, "balanced")
    assert vt.solid[2] == 1


def test_heavy_path_weighted_pulls_right():
    vt = _vt(3, "balanced", weights=[1, 1, 100])
    assert vt.solid[2] == 3


def test_build_single_node():
    sim = build_initial(_vt(1))
    assert sim.pt.n == 1 and sim.pt.root == 1


def test_build_linear_right_one_heavy_path():
    n = 9
    sim = build_initial(_vt(n, "linear-right"))
    # path end n becomes the block root under the virtual root's right slot
    assert sim.pt.root == 1
    assert sim.pt.hgt[sim.pt.root] <= DEPTH_MULT * math.log2(n) + DEPTH_ADD
    assert not sim.depth_bound_violations(DEPTH_MULT, DEPTH_ADD)
    assert not sim.check_state()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8, 10])
def test_build_all_or_random_shapes_depth(n):
    rng = random.Random(n)
    shapes = list(enumerate_shapes(n)) if n <= 6 else [
        _random_parents(n, rng) for _ in range(120)
    ]
    for parents in shapes:
        vt = VirtualTree(ModelTree.new_tree(n, parents))
        sim = build_initial(vt)
        assert not sim.depth_bound_violations(DEPTH_MULT, DEPTH_ADD)
        errs = sim.check_state()
        assert not errs, (n, parents, errs)


def _random_parents(n, rng):
    keys = list(range(1, n + 1))
    rng.shuffle(keys)
    parents = [0] * n
    left = [0] * (n + 1)
    right = [0] * (n + 1)
    root = keys[0]
    for k in keys[1:]:
        v = root
        while True:
            if k < v:
                if left[v]:
                    v = left[v]
                else:
                    left[v] = k
                    parents[k - 1] = -v
                    break
            else:
                if right[v]:
                    v = right[v]
                else:
                    right[v] = k
                    parents[k - 1] = v
                    break
    return parents


def test_build_weighted_depth_bound():
    rng = random.Random(5)
    for trial in range(60):
        n = rng.randint(2, 12)
        parents = _random_parents(n, rng)
        weights = [math.exp(rng.uniform(0, 12)) for _ in range(n)]
        vt = VirtualTree(ModelTree.new_tree(n, parents), weights)
        sim = build_initial(vt)
        assert not sim.depth_bound_violations(DEPTH_MULT, DEPTH_ADD), (n, parents)


def test_exhaustive_small_shapes_full_audit():
    rng = random.Random(0)
    for n in range(1, 7):
        for parents in enumerate_shapes(n):
            for Alg in (SplayAlgorithm, StaticAlgorithm):
                w = wrap(Alg(ModelTree.new_tree(n, parents)))
                t0 = w.tree.copy()
                full = Trace()
                seq = [rng.randint(1, n) for _ in range(2 * n + 2)]
                for k in seq:
                    full.extend(w.access(k))
                    errs = w.sim.check_state()
                    assert not errs, (n, parents, Alg.__name__, errs)
                    assert w.tree.finger == w.tree.root
                    vl, vr, _ = decode_virtual(w.sim)
                    assert vl == w.sim.vt.left and vr == w.sim.vt.right
                    assert w.sim.vt.left == w.inner.tree.left
                    assert w.sim.vt.right == w.inner.tree.right
                    assert not w.sim.depth_bound_violations(DEPTH_MULT, DEPTH_ADD)
                rep = verify_trace(t0, full, seq, boundaries=full.boundaries)
                assert rep.valid, rep.reason


def test_wrapped_mtr_random_audit():
    rng = random.Random(9)
    w = wrap(MoveToRootAlgorithm(ModelTree.new_tree(40, "linear-left")))
    t0 = w.tree.copy()
    full = Trace()
    seq = [rng.randint(1, 40) for _ in range(300)]
    for k in seq:
        full.extend(w.access(k))
    assert not w.sim.check_state()
    assert not w.sim.depth_bound_violations(DEPTH_MULT, DEPTH_ADD)
    assert verify_trace(t0, full, seq, boundaries=full.boundaries).valid


def test_wrap_depth_sweep_medium():
    rng = random.Random(11)
    for n in (16, 64):
        bound = DEPTH_MULT * math.log2(n) + DEPTH_ADD
        w = wrap(SplayAlgorithm(ModelTree.new_tree(n, "linear-right")))
        for _ in range(6 * n):
            w.access(rng.randint(1, n))
            assert w.tree.hgt[w.tree.root] <= bound


def test_wrap_single_key_world():
    w = wrap(SplayAlgorithm(ModelTree.new_tree(1)))
    for _ in range(3):
        tr = w.access(1)
        assert tr.cost == 0


def test_wrap_online_prefix_property():
    s = [3, 1, 7, 5, 3, 2, 6, 4]
    prev = []
    for i in range(1, len(s) + 1):
        w = wrap(SplayAlgorithm(ModelTree.new_tree(7, "balanced")))
        ops = []
        for k in s[:i]:
            ops.extend(w.access(k).ops)
        assert ops[: len(prev)] == prev
        prev = ops


def test_simulate_access_function():
    t = ModelTree.new_tree(5, "balanced")
    vt = VirtualTree(t)
    sim = build_initial(vt)
    inner = StaticAlgorithm(t.copy())
    tr = inner.access(1)
    phys = simulate_access(sim, tr)
    assert phys.cost >= tr.cost
    assert sim.pt.finger == sim.pt.root


def test_weighted_wrap_depth_everywhere():
    rng = random.Random(3)
    n = 32
    weights = [math.exp(rng.uniform(0, 10)) for _ in range(n)]
    w = wrap(SplayAlgorithm(ModelTree.new_tree(n, "linear-right")), weights=weights)
    for _ in range(200):
        w.access(rng.randint(1, n))
        assert not w.sim.depth_bound_violations(DEPTH_MULT, DEPTH_ADD)
    assert not w.sim.check_state()


def test_cost_ratio_plateaus():
    rng = random.Random(7)
    n = 128
    ratios = []
    for m in (5 * n, 10 * n, 20 * n):
        rng2 = random.Random(7)
        w = wrap(SplayAlgorithm(ModelTree.new_tree(n, "balanced")))
        phys = virt = 0
        for _ in range(m):
            k = rng2.randint(1, n)
            inner_cost_before = w.sim.counters.virtual_ops
            phys += w.access(k).cost
        ratios.append(phys / w.sim.counters.virtual_ops)
    assert ratios[1] <= ratios[0] * 1.1
    assert ratios[2] <= ratios[1] * 1.1


def test_cumulative_cost_invariant():
    from deamort.constants import FROZEN

    rng = random.Random(19)
    n = 64
    w = wrap(SplayAlgorithm(ModelTree.new_tree(n, "linear-right")))
    phys = 0
    for _ in range(8 * n):
        phys += w.access(rng.randint(1, n)).cost
        c = w.sim.counters
        assert phys <= FROZEN["C_SIM"] * c.virtual_ops + FROZEN["C_SIM"] * n


def test_lazy_mode_equivalence_and_depth():
    rng = random.Random(13)
    n = 24
    seq = [rng.randint(1, n) for _ in range(150)]
    eager = wrap(SplayAlgorithm(ModelTree.new_tree(n, "balanced")))
    lazy = wrap(SplayAlgorithm(ModelTree.new_tree(n, "balanced")), lazy=True)
    t0 = lazy.tree.copy()
    full = Trace()
    for k in seq:
        eager.access(k)
        full.extend(lazy.access(k))
        assert lazy.sim.vt.left == eager.sim.vt.left
        errs = lazy.sim.check_state()
        assert not errs, errs
    assert verify_trace(t0, full, seq, boundaries=full.boundaries).valid
    # once every region is explored the depth bound applies throughout
    assert not lazy.sim.depth_bound_violations(DEPTH_MULT, DEPTH_ADD)
    assert lazy.sim.counters.restructure_ops > 0


def test_lazy_mode_starts_with_original_tree():
    t = ModelTree.new_tree(15, "balanced")
    lazy = wrap(StaticAlgorithm(t), lazy=True)
    assert lazy.tree.left[1:] == t.left[1:]
    assert lazy.tree.right[1:] == t.right[1:]


def test_dump_state_mentions_annotations():
    w = wrap(SplayAlgorithm(ModelTree.new_tree(7, "balanced")))
    w.access(1)
    text = dump_state(w.sim)
    assert "finger" in text
    assert "[solid]" in text or "[dotted]" in text


def test_illegal_virtual_op_raises():
    from deamort.model import BstOp, IllegalOpError

    sim = build_initial(_vt(3))
    with pytest.raises(IllegalOpError):
        sim.apply_virtual(BstOp.PARENT)  # virtual finger at root
