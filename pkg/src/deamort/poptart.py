"""Stacks implemented inside binary search trees with bounded height.

A pop-tart is a BST region acting as a stack: elements arrive as the parent
of the current stack root (keys strictly decreasing across pushes for the
normal orientation), and after every push or pop the structure may rebalance
with rotations before parking the finger back on its root. The root's
payload-side child is always a single leaf, so the most recent element is
always exposed.

Three variants are provided:

* ``vanilla``   - no rebalancing at all; a linear spine. Keeps every leaf of
  weight w at depth <= 1 + log2(W/w) provided each pushed leaf outweighs the
  whole current stack.
* ``cherry``    - layers of 1..3 nodes along the spine whose side subtrees
  (crumbs) are perfect trees of 2^i leaves. Constant amortized work per
  operation and height O(log n) for unit weights.
* ``chocolate`` - cherry layers extended with a per-layer next node and an
  icing, a vanilla stack of frosted (frozen) former layers maintained so that
  each live successor layer weighs less than the icing beside it. Keeps every
  leaf of weight w at depth <= 6 + 7*log2(W/w) for arbitrary weights.

The structure logic is independent of how the tree is stored: a standalone
engine materializes its own nodes and accounts every finger move and
rotation, while the simulation layer plugs in an engine backed by the shared
model tree. Keys are supplied by the caller in embedded mode and synthesized
(decreasing) in standalone mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

from .model import BstOp, Trace

_P, _L, _R, _U = BstOp.PARENT, BstOp.LEFT, BstOp.RIGHT, BstOp.ROTATE


class PopTartError(ValueError):
    pass


class PopTartEmptyError(PopTartError):
    pass


class KeyOrderError(PopTartError):
    pass


@dataclass
class PopTartLeaf:
    """A pushed stack entry: an id, a positive weight, an opaque payload."""

    id: int
    weight: float = 1.0
    payload: Any = None

    def __post_init__(self) -> None:
        if not self.weight > 0:
            raise PopTartError(f"leaf weight must be positive, got {self.weight}")


@dataclass
class InvariantReport:
    ok: bool
    errors: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.errors.append(msg)


class StandaloneEngine:
    """Self-contained node arena with finger tracking and op accounting.

    Node ids are small ints; id 0 is the absent link. ``side`` selects the
    payload side: 0 puts payloads on the left (normal orientation, pushes in
    decreasing key order), 1 mirrors everything.
    """

    def __init__(self, payload_side_right: bool = False, leaf_score_coef: float = 0.0):
        self.left = [0]
        self.right = [0]
        self.parent = [0]
        self.weight = [0.0]
        self.wsub = [0.0]
        self.key = [0]
        self.is_leaf = [False]
        self.aug = [float("-inf")]  # max over subtree leaves of reldepth + coef*log2(w)
        self.leaf_rec: dict[int, PopTartLeaf] = {}
        self.root = 0
        self.finger = 0
        self.ops: list[BstOp] = []
        self.mirror = payload_side_right
        self.coef = leaf_score_coef
        self._next_key = 0
        self.total_leaf_weight = 0.0
        self.n_leaves = 0

    # payload/stack side accessors
    def pchild(self, v: int) -> int:
        return self.right[v] if self.mirror else self.left[v]

    def schild(self, v: int) -> int:
        return self.left[v] if self.mirror else self.right[v]

    def _set_pchild(self, v: int, c: int) -> None:
        if self.mirror:
            self.right[v] = c
        else:
            self.left[v] = c
        if c:
            self.parent[c] = v

    def _set_schild(self, v: int, c: int) -> None:
        if self.mirror:
            self.left[v] = c
        else:
            self.right[v] = c
        if c:
            self.parent[c] = v

    def _new_node(self, key: int, weight: float, leaf: bool) -> int:
        self.left.append(0)
        self.right.append(0)
        self.parent.append(0)
        self.weight.append(weight)
        self.wsub.append(weight)
        self.key.append(key)
        self.is_leaf.append(leaf)
        self.aug.append(self.coef * math.log2(weight) if leaf else float("-inf"))
        return len(self.left) - 1

    def next_key(self) -> int:
        self._next_key += 1
        k = 2 * self._next_key  # even element keys; payload leaves take the odd neighbor
        return k if self.mirror else -k

    # -- op emission ---------------------------------------------------------

    def _emit(self, op: BstOp) -> None:
        self.ops.append(op)

    def _depth(self, v: int) -> int:
        d = 0
        while self.parent[v]:
            v = self.parent[v]
            d += 1
        return d

    def walk_to(self, v: int) -> None:
        if self.finger == v:
            return
        up: list[int] = [v]
        u = v
        while self.parent[u]:
            u = self.parent[u]
            up.append(u)
        vpath = up[::-1]
        f = self.finger
        fup = [f]
        while self.parent[f]:
            f = self.parent[f]
            fup.append(f)
        fpath = fup[::-1]
        c = 0
        while c < len(fpath) and c < len(vpath) and fpath[c] == vpath[c]:
            c += 1
        for _ in range(len(fpath) - c):
            self._emit(_P)
        for i in range(c - 1, len(vpath) - 1):
            self._emit(_L if self.left[vpath[i]] == vpath[i + 1] else _R)
        self.finger = v

    def rotate_up(self, v: int) -> None:
        """Walk the finger to v and rotate it over its parent."""
        self.walk_to(v)
        p = self.parent[v]
        assert p, "rotate at root"
        g = self.parent[p]
        if self.left[p] == v:
            b = self.right[v]
            self.right[v] = p
            self.left[p] = b
        else:
            b = self.left[v]
            self.left[v] = p
            self.right[p] = b
        if b:
            self.parent[b] = p
        self.parent[p] = v
        self.parent[v] = g
        if g:
            if self.left[g] == p:
                self.left[g] = v
            else:
                self.right[g] = v
        else:
            self.root = v
        self._emit(_U)
        # local weight and slack maintenance; the region root changed identity,
        # so both rotated nodes are refreshed before the early-exit climb
        self.wsub[v] = self.wsub[p]
        self._refresh(p)
        self.aug[v] = self._aug_of(v)
        self._refresh_aug_up(g)

    def _aug_of(self, v: int) -> float:
        a = self.coef * math.log2(self.weight[v]) if self.is_leaf[v] else float("-inf")
        l, r = self.left[v], self.right[v]
        if l and self.aug[l] + 1 > a:
            a = self.aug[l] + 1
        if r and self.aug[r] + 1 > a:
            a = self.aug[r] + 1
        return a

    def _refresh(self, v: int) -> None:
        w = self.weight[v]
        l, r = self.left[v], self.right[v]
        if l:
            w += self.wsub[l]
        if r:
            w += self.wsub[r]
        self.wsub[v] = w
        self.aug[v] = self._aug_of(v)

    def _refresh_aug_up(self, v: int) -> None:
        while v:
            a = self._aug_of(v)
            if self.aug[v] == a:
                return
            self.aug[v] = a
            v = self.parent[v]

    def return_to_root(self) -> None:
        while self.parent[self.finger]:
            self._emit(_P)
            self.finger = self.parent[self.finger]

    # -- push/pop surgery ----------------------------------------------------

    def arrive(self, rec: PopTartLeaf, key: Optional[int]) -> tuple[int, int]:
        """Materialize a pushed element above the root; returns (elem, leaf)."""
        if key is None:
            key = self.next_key()
        elif self.root:
            ok = key > self.key[self.root] if self.mirror else key < self.key[self.root]
            if not ok:
                raise KeyOrderError(
                    f"push key {key} breaks {'increasing' if self.mirror else 'decreasing'} order")
        e = self._new_node(key, 1.0, leaf=False)
        lf = self._new_node(key + (1 if self.mirror else -1), rec.weight, leaf=True)
        self.leaf_rec[lf] = rec
        old = self.root
        self._set_pchild(e, lf)
        if old:
            self._set_schild(e, old)
        self.root = e
        self.parent[e] = 0
        self._refresh(e)
        self.total_leaf_weight += rec.weight
        self.n_leaves += 1
        if old:
            # the finger climbs onto the newly arrived parent
            self._emit(_P)
        self.finger = e
        return e, lf

    def detach_top(self) -> PopTartLeaf:
        """Remove the root element and its payload leaf; finger lands on the
        new stack root (one move) when one remains."""
        top = self.root
        lf = self.pchild(top)
        assert lf and self.is_leaf[lf], "pop-tart root payload is not a leaf"
        rec = self.leaf_rec.pop(lf)
        nxt = self.schild(top)
        if nxt:
            self._emit(_L if self.left[top] == nxt else _R)
            self.parent[nxt] = 0
        self.root = nxt
        self.finger = nxt
        self.total_leaf_weight -= rec.weight
        self.n_leaves -= 1
        return rec

    def take_ops(self) -> list[BstOp]:
        ops, self.ops = self.ops, []
        return ops

    def subtree_weight(self, v: int) -> float:
        return self.wsub[v] if v else 0.0

    def leaf_depth(self, lf: int) -> int:
        return self._depth(lf)

    def max_leaf_slack(self) -> float:
        """max over leaves of depth + coef*log2(w); -inf when empty."""
        return self.aug[self.root] if self.root else float("-inf")

    def in_order_keys(self) -> list[int]:
        out: list[int] = []
        stack: list[int] = []
        v = self.root
        while stack or v:
            while v:
                stack.append(v)
                v = self.left[v]
            v = stack.pop()
            out.append(self.key[v])
            v = self.right[v]
        return out


@dataclass
class _Layer:
    regs: list[int]
    next_node: int = 0
    icing: list[int] = field(default_factory=list)
    icing_base: int = 0
    thaw_debt: bool = False


class _PopTartBase:
    kind = "base"

    def __init__(self, mirror: bool = False, leaf_score_coef: float = 0.0, engine=None):
        self.engine = engine if engine is not None else StandaloneEngine(
            payload_side_right=mirror, leaf_score_coef=leaf_score_coef)
        self.mirror = mirror
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def push(self, leaf: PopTartLeaf, key: Optional[int] = None) -> Trace:
        eng = self.engine
        elem, lf = eng.arrive(leaf, key)
        self._note_arrival(elem, lf)
        self._push_fixup()
        eng.return_to_root()
        self.size += 1
        return Trace(eng.take_ops())

    def pop(self) -> tuple[PopTartLeaf, Trace]:
        if self.size == 0:
            raise PopTartEmptyError("pop from empty stack")
        eng = self.engine
        rec = eng.detach_top()
        self._note_extraction()
        self._pop_restore()
        eng.return_to_root()
        self.size -= 1
        return rec, Trace(eng.take_ops())

    def total_weight(self) -> float:
        return self.engine.total_leaf_weight

    def leaf_depth(self, leaf: "PopTartLeaf | int") -> int:
        """Current depth of a live leaf, by record or by id."""
        want = leaf.id if isinstance(leaf, PopTartLeaf) else leaf
        eng = self.engine
        for node, rec in eng.leaf_rec.items():
            if rec.id == want:
                return eng.leaf_depth(node)
        raise PopTartError(f"no live leaf with id {want}")

    def leaf_depths(self) -> list[tuple[float, int]]:
        """(weight, depth) for every live leaf."""
        eng = self.engine
        return [(eng.weight[lf], eng.leaf_depth(lf)) for lf in eng.leaf_rec]

    def max_leaf_slack(self) -> float:
        return self.engine.max_leaf_slack()

    # hooks
    def _note_arrival(self, elem: int, lf: int) -> None:
        raise NotImplementedError

    def _note_extraction(self) -> None:
        raise NotImplementedError

    def _push_fixup(self) -> None:
        pass

    def _pop_restore(self) -> None:
        pass


class VanillaPopTart(_PopTartBase):
    """No rebalancing; push and pop cost O(1) each."""

    kind = "vanilla"

    def __init__(self, mirror: bool = False):
        super().__init__(mirror, leaf_score_coef=1.0)
        self.elems: list[int] = []

    def _note_arrival(self, elem: int, lf: int) -> None:
        self.elems.insert(0, elem)

    def _note_extraction(self) -> None:
        self.elems.pop(0)

    def check_invariants(self) -> InvariantReport:
        rep = InvariantReport(True)
        eng = self.engine
        _check_inorder(self, rep)
        v = eng.root
        for e in self.elems:
            if v != e:
                rep.fail(f"spine order broken at {e}")
                break
            lf = eng.pchild(v)
            if not (lf and eng.is_leaf[lf]):
                rep.fail(f"element {v} payload is not a leaf")
            v = eng.schild(v)
        return rep

    def dump(self) -> str:
        eng = self.engine
        out: list[str] = []
        for i, e in enumerate(self.elems):
            lf = eng.pchild(e)
            out.append("  " * i + f"elem {eng.key[e]} [icing] ({eng.weight[lf]:g})")
        return "\n".join(out) + ("\n" if out else "")


class CherryPopTart(_PopTartBase):
    """Layered spine with perfect 2^i-leaf crumbs; unit-weight stack."""

    kind = "cherry"

    def __init__(self, mirror: bool = False):
        super().__init__(mirror, leaf_score_coef=0.0)
        self.layers: list[list[int]] = []

    def _note_arrival(self, elem: int, lf: int) -> None:
        if not self.layers:
            self.layers.append([])
        self.layers[0].insert(0, elem)

    def _push_fixup(self) -> None:
        eng = self.engine
        i = 0
        while i < len(self.layers) and len(self.layers[i]) == 4:
            lay = self.layers[i]
            r4 = lay[3]
            eng.rotate_up(r4)  # merges the two lowest nodes into one crumb
            del lay[2:]
            if i + 1 == len(self.layers):
                self.layers.append([])
            self.layers[i + 1].insert(0, r4)
            i += 1

    def _note_extraction(self) -> None:
        self.layers[0].pop(0)

    def _pop_restore(self) -> None:
        eng = self.engine
        i = 0
        while i < len(self.layers) and not self.layers[i]:
            if i + 1 < len(self.layers) and self.layers[i + 1]:
                v = self.layers[i + 1].pop(0)
                c = eng.pchild(v)
                eng.rotate_up(c)  # splits v's crumb into two layer-i nodes
                self.layers[i] = [c, v]
                i += 1
            else:
                break
        while self.layers and not self.layers[-1]:
            self.layers.pop()

    def height(self) -> int:
        eng = self.engine
        return int(eng.aug[eng.root]) if eng.root else 0

    def check_invariants(self) -> InvariantReport:
        rep = InvariantReport(True)
        eng = self.engine
        _check_inorder(self, rep)
        v = eng.root
        for i, lay in enumerate(self.layers):
            if not (1 <= len(lay) <= 3):
                rep.fail(f"layer {i} has {len(lay)} nodes")
            for e in lay:
                if v != e:
                    rep.fail(f"layer {i}: spine order broken at {e}")
                    return rep
                _check_crumb(eng, eng.pchild(e), i, rep, f"layer {i} node {e}")
                v = eng.schild(v)
        if v:
            rep.fail(f"unexpected spine node {v} after last layer")
        return rep

    def dump(self) -> str:
        eng = self.engine
        out: list[str] = []
        for i, lay in enumerate(self.layers):
            for e in lay:
                out.append("  " * i + f"elem {eng.key[e]} [reg {i}]")
                _dump_crumb(eng, eng.pchild(e), i, out, "  " * i + "  ")
        return "\n".join(out) + ("\n" if out else "")


class ChocolatePopTart(_PopTartBase):
    """Layers with next nodes and icings; crazy good for arbitrary weights.

    ``base`` is the original empty-stack leaf. Standalone stacks have none
    (0); an embedded stack may sit on top of an opaque subtree whose weight
    counts as the bottom of the topmost layer's icing.
    """

    kind = "chocolate"

    def __init__(self, mirror: bool = False, engine=None, allow_empty_slots: bool = False):
        super().__init__(mirror, leaf_score_coef=7.0, engine=engine)
        self.layers: list[_Layer] = []
        self.frozen: dict[int, list[_Layer]] = {}
        self.base = 0
        self.allow_empty_slots = allow_empty_slots

    # -- structure bookkeeping ------------------------------------------------

    def _note_arrival(self, elem: int, lf: int) -> None:
        if not self.layers:
            self.layers.append(_Layer(regs=[]))
        self.layers[0].regs.insert(0, elem)

    def push_arrived(self, elem: int) -> None:
        """Embedded entry point: ``elem`` is already the stack root with its
        payload slot in place; run bookkeeping and the rebalance cascade."""
        self._note_arrival(elem, 0)
        self._push_fixup()
        self.size += 1

    def pop_extracted(self) -> None:
        """Embedded entry point: the top element was already rotated out."""
        self._note_extraction()
        self._pop_restore()
        self.size -= 1

    def top_element(self) -> int:
        return self.layers[0].regs[0] if self.layers else 0

    def _layer_top(self, lay: _Layer) -> int:
        if lay.regs:
            return lay.regs[0]
        if lay.next_node:
            return lay.next_node
        return self._icing_root(lay)

    def _icing_root(self, lay: _Layer) -> int:
        if lay.icing:
            return lay.icing[0]
        if lay.icing_base:
            return lay.icing_base
        return self.base if self.layers and lay is self.layers[0] else 0

    def _push_fixup(self) -> None:
        eng = self.engine
        i = 0
        while i < len(self.layers) and len(self.layers[i].regs) == 4:
            lay = self.layers[i]
            r3, r4 = lay.regs[2], lay.regs[3]
            eng.rotate_up(r4)  # r3 and the two crumbs fuse into one crumb under r4
            del lay.regs[2:]
            if lay.next_node:
                eng.rotate_up(lay.next_node)  # carry r4 down into the next layer
                self.layers[i + 1].regs.insert(0, r4)
            else:
                lay.next_node = r4
                self.layers.append(_Layer(regs=[], icing_base=r3))
            # the successor layer must stay lighter than the icing beside it
            nxt = self.layers[i + 1]
            if eng.subtree_weight(self._layer_top(nxt)) >= eng.subtree_weight(self._icing_root(lay)):
                self._frost(i)
                return
            lay.thaw_debt = False
            i += 1

    def _frost(self, i: int) -> None:
        """Freeze the whole suffix below layer i into layer i's icing."""
        lay = self.layers[i]
        nx = lay.next_node
        self.frozen[nx] = self.layers[i + 1:]
        del self.layers[i + 1:]
        lay.next_node = 0
        lay.icing.insert(0, nx)
        lay.thaw_debt = False

    def _note_extraction(self) -> None:
        self.layers[0].regs.pop(0)

    def _pop_restore(self, start: int = 0) -> None:
        eng = self.engine
        i = start
        while i < len(self.layers) and not self.layers[i].regs:
            lay = self.layers[i]
            if lay.next_node:
                nxt = self.layers[i + 1]
                if nxt.regs:
                    # pull one node down a layer, splitting its crumb in two
                    v = nxt.regs.pop(0)
                    eng.rotate_up(v)
                    c = eng.pchild(v)
                    eng.rotate_up(c)
                    lay.regs = [c, v]
                    i += 1
                else:
                    # successor is a lone frozen crumb: defrost it in place
                    assert not nxt.next_node and not nxt.icing and nxt.icing_base
                    nx = lay.next_node
                    c = nxt.icing_base
                    eng.rotate_up(c)
                    lay.regs = [c, nx]
                    lay.next_node = 0
                    self.layers.pop(i + 1)
                    break
            elif lay.icing:
                self._thaw(i)
                break
            elif lay.icing_base:
                break  # legal degenerate last layer: a single bare crumb
            else:
                assert i == len(self.layers) - 1
                self.layers.pop()
                break

    def _thaw(self, i: int) -> None:
        """Pop the top frosted subtree of the last layer's icing back to life."""
        eng = self.engine
        lay = self.layers[i]
        e = lay.icing.pop(0)
        suffix = self.frozen.pop(e)
        first = suffix[0]
        if first.regs:
            v = first.regs.pop(0)
            eng.rotate_up(v)
            c = eng.pchild(v)
            eng.rotate_up(c)
            lay.regs = [c, v]
            lay.next_node = e
            lay.thaw_debt = True
            self.layers[i + 1:] = suffix
            if not first.regs:
                self._pop_restore(i + 1)
        else:
            # frozen at creation: e guards a single bare crumb
            assert len(suffix) == 1 and first.icing_base and not first.next_node
            c = first.icing_base
            eng.rotate_up(c)
            lay.regs = [c, e]

    # -- queries ---------------------------------------------------------------

    def check_invariants(self) -> InvariantReport:
        rep = InvariantReport(True)
        eng = self.engine
        _check_inorder(self, rep)
        if self.layers:
            top = self._layer_top(self.layers[0])
            if hasattr(eng, "root") and eng.root != top:
                rep.fail(f"stack top {top} is not the tree root {eng.root}")
            self._check_layers(self.layers, rep, top, base=0, frozen_head=False)
        return rep

    def _check_layers(
        self, layers: list[_Layer], rep: InvariantReport, top: int, base: int, frozen_head: bool
    ) -> None:
        eng = self.engine
        v = top
        for i, lay in enumerate(layers):
            lvl = base + i
            last = i == len(layers) - 1
            hi = 4 if (frozen_head and i == 0) else 3
            if not last and not lay.next_node:
                rep.fail(f"layer {lvl}: interior layer without a next node")
            if lay.next_node and last:
                rep.fail(f"layer {lvl}: next node on last layer record")
            if lay.next_node:
                if not (1 <= len(lay.regs) <= hi):
                    rep.fail(f"layer {lvl}: {len(lay.regs)} regular nodes")
            else:
                if len(lay.regs) > hi:
                    rep.fail(f"layer {lvl}: {len(lay.regs)} regular nodes")
                if not lay.regs and (lay.icing or not lay.icing_base):
                    rep.fail(f"layer {lvl}: empty layer without a lone crumb icing")
            # spine weld: regs chain, then the next node, then the successor layer
            for e in lay.regs:
                if v != e:
                    rep.fail(f"layer {lvl}: expected reg {e} on the spine, found {v}")
                    return
                _check_crumb(eng, eng.pchild(e), lvl, rep, f"layer {lvl} reg {e}",
                             allow_empty=self.allow_empty_slots)
                v = eng.schild(v)
            if lay.next_node:
                if v != lay.next_node:
                    rep.fail(f"layer {lvl}: next node {lay.next_node} not on the spine")
                    return
                icing_top = eng.schild(lay.next_node)
                v = eng.pchild(lay.next_node)
            else:
                icing_top = v
                v = 0
            # icing: vanilla stack of frosted suffixes over an optional bare
            # crumb (or, for the topmost layer, the original base leaf)
            floor = lay.icing_base
            if not floor and self.layers and lay is self.layers[0]:
                floor = self.base
            w_icing = self._icing_root(lay)
            if (icing_top or w_icing) and icing_top != w_icing:
                rep.fail(f"layer {lvl}: icing root {w_icing} not at spine position {icing_top}")
            below = eng.subtree_weight(floor)
            for e in reversed(lay.icing):
                w = eng.subtree_weight(eng.pchild(e))
                if w < below:
                    rep.fail(f"icing element {e} lighter than the stack below it")
                below += w + eng.weight[e]
            cur = icing_top
            for e in lay.icing:
                if cur != e:
                    rep.fail(f"layer {lvl}: icing element {e} not at position {cur}")
                    break
                self._check_layers(
                    self.frozen[e], rep, eng.pchild(e), base=lvl + 1, frozen_head=True)
                cur = eng.schild(e)
            else:
                if (cur or floor) and cur != floor:
                    rep.fail(f"layer {lvl}: icing floor misplaced")
            if lay.icing_base:
                _check_crumb(eng, lay.icing_base, lvl, rep, f"layer {lvl} icing crumb",
                             allow_empty=self.allow_empty_slots)
            # live successor stays lighter than this icing, unless just thawed
            if lay.next_node and not lay.thaw_debt:
                nxt = layers[i + 1]
                if eng.subtree_weight(self._layer_top(nxt)) >= eng.subtree_weight(self._icing_root(lay)):
                    rep.fail(f"layer {lvl}: successor outweighs the icing")

    def dump(self) -> str:
        out: list[str] = []
        self._dump_layers(self.layers, out, indent=0, base=0)
        return "\n".join(out) + ("\n" if out else "")

    def _dump_layers(self, layers: list[_Layer], out: list[str], indent: int, base: int) -> None:
        eng = self.engine
        for i, lay in enumerate(layers):
            lvl = base + i
            pad = "  " * (indent + i)
            for e in lay.regs:
                out.append(pad + f"elem {eng.key[e]} [reg {lvl}]")
                _dump_crumb(eng, eng.pchild(e), lvl, out, pad + "  ")
            if lay.next_node:
                out.append(pad + f"elem {eng.key[lay.next_node]} [next {lvl}]")
            for e in lay.icing:
                out.append(pad + f"elem {eng.key[e]} [icing] ({eng.subtree_weight(eng.pchild(e)):g})")
                self._dump_layers(self.frozen[e], out, indent + i + 1, base=lvl + 1)
            if lay.icing_base:
                out.append(pad + f"[icing]")
                _dump_crumb(eng, lay.icing_base, lvl, out, pad + "  ")


def _check_inorder(pt: _PopTartBase, rep: InvariantReport) -> None:
    if not hasattr(pt.engine, "in_order_keys"):
        return  # embedded engines validate order through the shared tree
    keys = pt.engine.in_order_keys()
    if keys != sorted(keys):
        rep.fail("symmetric key order broken")


def _is_perfect(eng: StandaloneEngine, v: int) -> bool:
    """A crumb is perfect: every internal node has two children at equal height."""
    h = _crumb_height(eng, v)
    return h >= 0


def _crumb_height(eng: StandaloneEngine, v: int) -> int:
    if not v or eng.is_leaf[v]:
        return 0
    hl = _crumb_height(eng, eng.left[v])
    hr = _crumb_height(eng, eng.right[v])
    if hl < 0 or hr < 0 or hl != hr:
        return -1
    return hl + 1


def _crumb_slots(eng: StandaloneEngine, v: int) -> int:
    # an absent child inside a crumb is an empty payload slot
    if not v or eng.is_leaf[v]:
        return 1
    return _crumb_slots(eng, eng.left[v]) + _crumb_slots(eng, eng.right[v])


def _check_crumb(
    eng: StandaloneEngine, c: int, level: int, rep: InvariantReport, where: str,
    allow_empty: bool = False,
) -> None:
    if not c:
        if not (allow_empty and level == 0):
            rep.fail(f"{where}: missing crumb")
        return
    if _crumb_height(eng, c) < 0:
        rep.fail(f"{where}: crumb not perfectly balanced")
    n = _crumb_slots(eng, c)
    if n != (1 << level):
        rep.fail(f"{where}: crumb has {n} slots, expected {1 << level}")


def _dump_crumb(eng: StandaloneEngine, c: int, level: int, out: list[str], pad: str) -> None:
    if not c:
        return
    if eng.is_leaf[c]:
        out.append(pad + f"leaf {eng.key[c]} ({eng.weight[c]:g})")
        return
    out.append(pad + f"node {eng.key[c]} [crumb {level}]")
    _dump_crumb(eng, eng.left[c], level, out, pad + "  ")
    _dump_crumb(eng, eng.right[c], level, out, pad + "  ")


_KINDS = {"vanilla": VanillaPopTart, "cherry": CherryPopTart, "chocolate": ChocolatePopTart}


def make_poptart(kind: str, mirror: bool = False) -> _PopTartBase:
    try:
        ctor = _KINDS[kind]
    except KeyError:
        raise PopTartError(f"unknown pop-tart kind {kind!r}") from None
    return ctor(mirror=mirror)
