"""Run any BST algorithm on a shadow tree while the real tree stays shallow.

The wrapped algorithm's tree is kept as a virtual shadow: links, per-node
weights, subtree weights, and a solid edge from every non-leaf to its child
with the largest subtree weight (ties go left). Maximal solid chains form
heavy paths. The physical tree represents each heavy path from y down to x
as the path end x with two chocolate stacks as its children: the path nodes
smaller than x on the left, those larger on the right, each element carrying
its off-path subtree (a recursively represented block) in its payload slot.
The path from the virtual root to the virtual finger is held the same way,
upside down, directly under the physical root, which is always the node the
virtual finger is on.

Every virtual operation then becomes a constant number of rotations next to
the physical root plus stack rebalancing, so the physical finger starts and
ends each burst at the physical root and every node's physical depth stays
logarithmic in the weight ratio. Virtual bookkeeping is free; only physical
operations are emitted and counted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .algorithms import OnlineBstAlgorithm
from .model import BstOp, IllegalOpError, ModelTree, Trace
from .poptart import ChocolatePopTart

_P, _L, _R, _U = BstOp.PARENT, BstOp.LEFT, BstOp.RIGHT, BstOp.ROTATE


class VirtualTree:
    """Shadow copy of the wrapped algorithm's tree with weight bookkeeping."""

    __slots__ = ("n", "left", "right", "parent", "root", "finger", "w", "wsub", "solid")

    def __init__(self, tree: ModelTree, weights: Optional[Sequence[float]] = None):
        n = tree.n
        self.n = n
        self.left = tree.left[:]
        self.right = tree.right[:]
        self.parent = tree.parent[:]
        self.root = tree.root
        self.finger = tree.finger
        if weights is None:
            self.w = [0.0] + [1.0] * n
        else:
            if len(weights) != n:
                raise ValueError(f"need {n} weights, got {len(weights)}")
            if any(not wt > 0 for wt in weights):
                raise ValueError("weights must be positive")
            self.w = [0.0] + [float(x) for x in weights]
        self.wsub = [0.0] * (n + 1)
        self.solid = [0] * (n + 1)
        order: list[int] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            if self.left[v]:
                stack.append(self.left[v])
            if self.right[v]:
                stack.append(self.right[v])
        for v in reversed(order):
            self.wsub[v] = self.w[v] + self.wsub[self.left[v]] + self.wsub[self.right[v]]
            self._resolve_solid(v)

    def _resolve_solid(self, v: int) -> None:
        l, r = self.left[v], self.right[v]
        if not l and not r:
            self.solid[v] = 0
        elif self.wsub[l] >= self.wsub[r]:
            self.solid[v] = l
        else:
            self.solid[v] = r

    def total_weight(self) -> float:
        return self.wsub[self.root]

    def apply_move(self, op: BstOp) -> int:
        f = self.finger
        if op == _L:
            t = self.left[f]
        elif op == _R:
            t = self.right[f]
        else:
            t = self.parent[f]
        if not t:
            raise IllegalOpError(op, f, "no such neighbor in the virtual tree")
        self.finger = t
        return t

    def apply_rotation(self) -> int:
        """Rotate the virtual finger over its parent; returns the old parent."""
        x = self.finger
        p = self.parent[x]
        if not p:
            raise IllegalOpError(_U, x, "virtual finger at root")
        g = self.parent[p]
        if self.left[p] == x:
            b = self.right[x]
            self.right[x] = p
            self.left[p] = b
        else:
            b = self.left[x]
            self.left[x] = p
            self.right[p] = b
        if b:
            self.parent[b] = p
        self.parent[p] = x
        self.parent[x] = g
        if g:
            if self.left[g] == p:
                self.left[g] = x
            else:
                self.right[g] = x
        else:
            self.root = x
        self.wsub[x] = self.wsub[p]
        self.wsub[p] = self.w[p] + self.wsub[self.left[p]] + self.wsub[self.right[p]]
        self._resolve_solid(p)
        self._resolve_solid(x)
        if g and self.solid[g] == p:
            self.solid[g] = x
        return p


def heavy_path_decompose(vt: VirtualTree) -> dict:
    """Solid child per node and the heavy paths they induce."""
    paths = []
    seen = [False] * (vt.n + 1)
    stack = [vt.root]
    while stack:
        v = stack.pop()
        if seen[v]:
            continue
        path = []
        u = v
        while u:
            seen[u] = True
            path.append(u)
            for c in (vt.left[u], vt.right[u]):
                if c and c != vt.solid[u]:
                    stack.append(c)
            u = vt.solid[u]
        paths.append(path)
    return {"solid": vt.solid[:], "paths": paths}


@dataclass
class _BlockCtl:
    L: ChocolatePopTart
    R: ChocolatePopTart


class _IdentityKeys:
    def __getitem__(self, v: int) -> int:
        return v


class _BlockRootView:
    def __init__(self, sim: "Simulator"):
        self._sim = sim

    def __getitem__(self, v: int) -> bool:
        return v in self._sim.blocks


class _SimEngine:
    """Controller engine backed by the shared physical tree."""

    def __init__(self, sim: "Simulator", mirror: bool):
        self.sim = sim
        self.mirror = mirror
        self.key = _IdentityKeys()
        self.is_leaf = _BlockRootView(sim)

    @property
    def left(self):
        return self.sim.bleft

    @property
    def right(self):
        return self.sim.bright

    @property
    def parent(self):
        return self.sim.bparent

    @property
    def weight(self):
        return self.sim.w

    def pchild(self, v: int) -> int:
        return self.sim.bright[v] if self.mirror else self.sim.bleft[v]

    def schild(self, v: int) -> int:
        return self.sim.bleft[v] if self.mirror else self.sim.bright[v]

    def subtree_weight(self, v: int) -> float:
        return self.sim.wsub[v] if v else 0.0

    def rotate_up(self, v: int) -> None:
        self.sim._rot_at(v)


@dataclass
class SimCounters:
    physical_ops: int = 0
    virtual_ops: int = 0
    restructure_ops: int = 0
    max_height: int = 0


class Simulator:
    """Physical world for one wrapped algorithm run."""

    def __init__(self, vt: VirtualTree, lazy: bool = False):
        self.vt = vt
        n = vt.n
        self.w = vt.w
        self.wsub = [0.0] * (n + 1)
        self.blocks: dict[int, _BlockCtl] = {}
        self.entry: dict[int, int] = {}
        self.next_bit: dict[int, bool] = {}
        self.raw: set[int] = set()
        self.counters = SimCounters()
        self._ops: list[BstOp] = []
        self._building = True
        self.engN = _SimEngine(self, mirror=False)
        self.engF = _SimEngine(self, mirror=True)
        # the finger-path stacks: left side flipped, right side normal
        self.zL = ChocolatePopTart(mirror=True, engine=self.engF, allow_empty_slots=True)
        self.zR = ChocolatePopTart(mirror=False, engine=self.engN, allow_empty_slots=True)
        self.bleft = [0] * (n + 1)
        self.bright = [0] * (n + 1)
        self.bparent = [0] * (n + 1)
        if vt.finger != vt.root:
            raise ValueError("wrap the algorithm before its first access: the "
                             "initial layout needs the virtual finger on the root")
        f = vt.finger
        if lazy:
            self.bleft = vt.left[:]
            self.bright = vt.right[:]
            self.bparent = vt.parent[:]
            for v in range(1, n + 1):
                self.wsub[v] = vt.wsub[v]
            for c in (vt.left[f], vt.right[f]):
                if c:
                    self._mark_raw(c)
        else:
            for side in (False, True):
                c = vt.right[f] if side else vt.left[f]
                if c:
                    x = self._build_block(c)
                    if side:
                        self.bright[f] = x
                    else:
                        self.bleft[f] = x
                    self.bparent[x] = f
            self.wsub[f] = self.w[f] + self.wsub[self.bleft[f]] + self.wsub[self.bright[f]]
        self.pt = self._finalize_tree(f)
        self._building = False

    # -- construction ---------------------------------------------------------

    def _mark_raw(self, c: int) -> None:
        """Leave subtree c in its original shape until the finger enters it."""
        self.raw.add(c)
        self.blocks[c] = _BlockCtl(
            ChocolatePopTart(engine=self.engN, allow_empty_slots=True),
            ChocolatePopTart(mirror=True, engine=self.engF, allow_empty_slots=True),
        )
        self.entry[c] = c

    def _build_block(self, v: int) -> int:
        """Assemble the block for virtual subtree v; returns its physical root."""
        vt = self.vt
        path = [v]
        while vt.solid[path[-1]]:
            path.append(vt.solid[path[-1]])
        x = path[-1]
        ctl = _BlockCtl(
            ChocolatePopTart(engine=self.engN, allow_empty_slots=True),
            ChocolatePopTart(mirror=True, engine=self.engF, allow_empty_slots=True),
        )
        self.blocks[x] = ctl
        self.entry[x] = v
        self.wsub[x] = self.w[x]
        for i in range(len(path) - 2, -1, -1):
            u = path[i]
            succ = path[i + 1]
            self.next_bit[u] = succ < x
            hang = vt.left[u] if vt.right[u] == succ else vt.right[u]
            hx = self._build_block(hang) if hang else 0
            if u < x:
                old = self.bleft[x]
                self.bleft[u] = hx
                self.bright[u] = old
                self.bleft[x] = u
            else:
                old = self.bright[x]
                self.bright[u] = hx
                self.bleft[u] = old
                self.bright[x] = u
            if hx:
                self.bparent[hx] = u
            if old:
                self.bparent[old] = u
            self.bparent[u] = x
            self.wsub[u] = self.w[u] + self.wsub[hx] + self.wsub[old]
            self.wsub[x] += self.w[u] + self.wsub[hx]
            (ctl.L if u < x else ctl.R).push_arrived(u)
        return x

    def _finalize_tree(self, root: int) -> ModelTree:
        pt = object.__new__(ModelTree)
        pt.n = self.vt.n
        pt.left = self.bleft
        pt.right = self.bright
        pt.parent = self.bparent
        pt.root = root
        pt.finger = root
        pt._track_height = True
        pt.hgt = [0] * (self.vt.n + 1)
        pt._check_structure()
        pt._recompute_heights()
        return pt

    # -- physical op plumbing ---------------------------------------------------

    def _emit_move(self, op: BstOp) -> None:
        self.pt.apply_op(op)
        self._ops.append(op)

    def walk_to(self, v: int) -> None:
        if self._building:
            return
        pt = self.pt
        f = pt.finger
        if f == v:
            return
        # adjacent hops dominate; avoid building full root paths for them
        if pt.parent[f] == v:
            self._emit_move(_P)
            return
        if pt.left[f] == v:
            self._emit_move(_L)
            return
        if pt.right[f] == v:
            self._emit_move(_R)
            return
        up = [v]
        u = v
        while pt.parent[u]:
            u = pt.parent[u]
            up.append(u)
        vpath = up[::-1]
        f = pt.finger
        fup = [f]
        while pt.parent[f]:
            f = pt.parent[f]
            fup.append(f)
        fpath = fup[::-1]
        c = 0
        while c < len(fpath) and c < len(vpath) and fpath[c] == vpath[c]:
            c += 1
        for _ in range(len(fpath) - c):
            self._emit_move(_P)
        for i in range(c - 1, len(vpath) - 1):
            self._emit_move(_L if pt.left[vpath[i]] == vpath[i + 1] else _R)

    def _rot_at(self, v: int) -> None:
        """Rotate node v over its parent, maintaining subtree weights."""
        if self._building:
            self._rot_silent(v)
            return
        self.walk_to(v)
        pt = self.pt
        p = pt.parent[v]
        pt.apply_op(_U)
        self._ops.append(_U)
        self.wsub[v] = self.wsub[p]
        self.wsub[p] = self.w[p] + self.wsub[pt.left[p]] + self.wsub[pt.right[p]]

    def _rot_silent(self, v: int) -> None:
        left, right, parent = self.bleft, self.bright, self.bparent
        p = parent[v]
        g = parent[p]
        if left[p] == v:
            b = right[v]
            right[v] = p
            left[p] = b
        else:
            b = left[v]
            left[v] = p
            right[p] = b
        if b:
            parent[b] = p
        parent[p] = v
        parent[v] = g
        if g:
            if left[g] == p:
                left[g] = v
            else:
                right[g] = v
        self.wsub[v] = self.wsub[p]
        self.wsub[p] = self.w[p] + self.wsub[left[p]] + self.wsub[right[p]]

    # -- virtual op application --------------------------------------------------

    def apply_virtual(self, op: BstOp) -> list[BstOp]:
        """Apply one virtual operation; returns the physical burst, which
        starts and ends with the physical finger on the physical root."""
        self._ops = []
        if op == _L:
            self._vmove_down(False)
        elif op == _R:
            self._vmove_down(True)
        elif op == _P:
            self._vmove_up()
        else:
            self._vrotate()
        self.walk_to(self.pt.root)
        ops = self._ops
        self._ops = []
        self.counters.virtual_ops += 1
        self.counters.physical_ops += len(ops)
        h = self.pt.hgt[self.pt.root]
        if h > self.counters.max_height:
            self.counters.max_height = h
        return ops

    def _vmove_down(self, to_right: bool) -> None:
        vt, pt = self.vt, self.pt
        f = vt.finger
        g = vt.right[f] if to_right else vt.left[f]
        if not g:
            raise IllegalOpError(_R if to_right else _L, f, "no child in the virtual tree")
        move_side = self.zR if to_right else self.zL
        recv_side = self.zL if to_right else self.zR
        prev = vt.parent[f]
        if prev:
            # f joins the path; record which side its successor g lies on
            self.next_bit[prev] = f < g
        wstar = move_side.top_element()
        if wstar:
            xB = move_side.engine.pchild(wstar)
        else:
            xB = pt.right[f] if to_right else pt.left[f]
        if xB in self.raw:
            self._restructure(xB)
            xB = move_side.engine.pchild(wstar) if wstar else (
                pt.right[f] if to_right else pt.left[f])
        if recv_side.size == 0:
            # f's untouched slot becomes the original leaf under the stack
            recv_side.base = pt.left[f] if to_right else pt.right[f]
        self.walk_to(g)
        while pt.parent[g]:
            self._rot_at(g)
        ctl = self.blocks[xB]
        if g == xB:
            del self.blocks[g]
            self.entry.pop(g, None)
        else:
            (ctl.L if g < xB else ctl.R).pop_extracted()
            self.entry[xB] = vt.solid[g]
        recv_side.push_arrived(f)
        vt.finger = g

    def _vmove_up(self) -> None:
        vt, pt = self.vt, self.pt
        f = vt.finger
        p = vt.parent[f]
        if not p:
            raise IllegalOpError(_P, f, "virtual finger at root")
        p_on_left = p < f
        zone_p = self.zL if p_on_left else self.zR
        zone_o = self.zR if p_on_left else self.zL
        assert zone_p.top_element() == p, "path parent must top its stack"
        self._rot_at(p)
        wstar_o = zone_o.top_element()
        if wstar_o:
            self._rot_at(wstar_o)
        self._reblock_isolated(f)
        zone_p.pop_extracted()
        if zone_p.size == 0:
            zone_p.base = 0
        vt.finger = p

    def _reblock_isolated(self, f: int) -> None:
        """f sits with its two subtree blocks as plain children; push it onto
        the stack of its heavier side, forming the block for subtree(f)."""
        vt, pt = self.vt, self.pt
        s = vt.solid[f]
        if not s:
            self.blocks[f] = _BlockCtl(
                ChocolatePopTart(engine=self.engN, allow_empty_slots=True),
                ChocolatePopTart(mirror=True, engine=self.engF, allow_empty_slots=True),
            )
            self.entry[f] = f
            return
        if s == vt.right[f]:
            xT = pt.right[f]
            if xT in self.raw:
                self._restructure(xT)
                xT = pt.right[f]
            self._rot_at(xT)
            self.blocks[xT].L.push_arrived(f)
        else:
            xT = pt.left[f]
            if xT in self.raw:
                self._restructure(xT)
                xT = pt.left[f]
            self._rot_at(xT)
            self.blocks[xT].R.push_arrived(f)
        self.next_bit[f] = self.entry[xT] < xT
        self.entry[xT] = f

    def _vrotate(self) -> None:
        vt, pt = self.vt, self.pt
        f = vt.finger
        p = vt.parent[f]
        if not p:
            raise IllegalOpError(_U, f, "virtual finger at root")
        p_on_left = p < f
        zone_p = self.zL if p_on_left else self.zR
        assert zone_p.top_element() == p, "path parent must top its stack"
        vt.apply_rotation()
        # lift p over f, settle the stack, then sink p into the slot that
        # already holds its own hanging subtree
        self._rot_at(p)
        zone_p.pop_extracted()
        self._rot_at(f)
        u = zone_p.top_element()
        if u:
            self._rot_at(u)
        else:
            zone_p.base = 0
        self._reblock_isolated(p)

    # -- lazy restructuring -------------------------------------------------------

    def _restructure(self, c: int) -> None:
        """Convert a still-original subtree into block form with counted ops."""
        self.raw.discard(c)
        del self.blocks[c]
        self.entry.pop(c, None)
        scratch = _ScratchBuild(self)
        x = scratch.build(c)
        before = len(self._ops)
        self._retarget(c, scratch)
        self.counters.restructure_ops += len(self._ops) - before
        # adopt the scratch bookkeeping
        for key, ctl in scratch.blocks.items():
            ctl.L.engine = self.engN
            ctl.R.engine = self.engF
            self.blocks[key] = ctl
        self.entry.update(scratch.entry)
        self.next_bit.update(scratch.next_bit)

    def _retarget(self, region_root: int, scratch: "_ScratchBuild") -> None:
        """Rotate the physical region into the scratch target shape."""
        pt = self.pt

        def shape(target_root: int) -> None:
            if not target_root or target_root in scratch.opaque:
                return
            want = target_root
            anchor = scratch.tparent[want]
            while pt.parent[want] != anchor:
                self._rot_at(want)
            shape(scratch.tleft[want])
            shape(scratch.tright[want])

        # region hangs from its current parent; scratch parents mirror that
        shape(scratch.troot)

    # -- verification helpers ---------------------------------------------------

    def check_state(self) -> list[str]:
        """Structural audit of the whole physical world."""
        errors = []
        if not self.pt.check_bst():
            errors.append("physical symmetric order broken")
        if self.pt.finger != self.pt.root:
            errors.append("physical finger away from root between accesses")
        for z, name in ((self.zL, "zoneL"), (self.zR, "zoneR")):
            rep = z.check_invariants()
            if not rep.ok:
                errors.extend(f"{name}: {e}" for e in rep.errors)
        for x, ctl in self.blocks.items():
            if x in self.raw:
                continue
            for side, name in ((ctl.L, "L"), (ctl.R, "R")):
                rep = side.check_invariants()
                if not rep.ok:
                    errors.extend(f"block {x}/{name}: {e}" for e in rep.errors)
        return errors

    def depth_bound_violations(self, mult: float, add: float) -> list[int]:
        """Keys whose physical depth exceeds mult*log2(W/w) + add."""
        from math import log2

        W = self.vt.total_weight()
        bad = []
        pt = self.pt
        stack = [(pt.root, 0)]
        while stack:
            v, d = stack.pop()
            if d > mult * log2(W / self.w[v]) + add:
                bad.append(v)
            if pt.left[v]:
                stack.append((pt.left[v], d + 1))
            if pt.right[v]:
                stack.append((pt.right[v], d + 1))
        return bad


class _ScratchBuild:
    """Free-of-charge target computation for lazy restructuring."""

    def __init__(self, sim: Simulator):
        self.sim = sim
        self.tleft: dict[int, int] = {}
        self.tright: dict[int, int] = {}
        self.tparent: dict[int, int] = {}
        self.blocks: dict[int, _BlockCtl] = {}
        self.entry: dict[int, int] = {}
        self.next_bit: dict[int, bool] = {}
        self.opaque: set[int] = set()
        self.troot = 0

    def build(self, c: int) -> int:
        vt = self.sim.vt
        self.troot = self._block(c)
        self.tparent[self.troot] = self.sim.pt.parent[c]
        return self.troot

    def _block(self, v: int) -> int:
        vt = self.sim.vt
        sim = self.sim
        path = [v]
        while vt.solid[path[-1]]:
            path.append(vt.solid[path[-1]])
        x = path[-1]
        eng = _ScratchEngine(self)
        ctl = _BlockCtl(
            ChocolatePopTart(engine=eng, allow_empty_slots=True),
            ChocolatePopTart(mirror=True, engine=_ScratchEngine(self, mirror=True),
                             allow_empty_slots=True),
        )
        self.blocks[x] = ctl
        self.entry[x] = v
        self.tleft[x] = self.tright[x] = 0
        for i in range(len(path) - 2, -1, -1):
            u = path[i]
            succ = path[i + 1]
            self.next_bit[u] = succ < x
            hang = vt.left[u] if vt.right[u] == succ else vt.right[u]
            if hang:
                # leave the hanging subtree in its current physical shape
                self.opaque.add(hang)
                sim._mark_raw(hang)
            if u < x:
                old = self.tleft[x]
                self.tleft[u], self.tright[u] = hang, old
                self.tleft[x] = u
            else:
                old = self.tright[x]
                self.tright[u], self.tleft[u] = hang, old
                self.tright[x] = u
            for ch in (hang, old):
                if ch:
                    self.tparent[ch] = u
            self.tparent[u] = x
            (ctl.L if u < x else ctl.R).push_arrived(u)
        return x


class _ScratchEngine:
    """Engine over the scratch link dicts; rotations are free bookkeeping."""

    def __init__(self, sb: _ScratchBuild, mirror: bool = False):
        self.sb = sb
        self.mirror = mirror
        self.key = _IdentityKeys()

    class _View:
        def __init__(self, d):
            self.d = d

        def __getitem__(self, v):
            return self.d.get(v, 0)

    @property
    def left(self):
        return self._View(self.sb.tleft)

    @property
    def right(self):
        return self._View(self.sb.tright)

    @property
    def parent(self):
        return self._View(self.sb.tparent)

    @property
    def weight(self):
        return self.sb.sim.w

    @property
    def is_leaf(self):
        sb = self.sb

        class _V:
            def __getitem__(self, v):
                return v in sb.opaque

        return _V()

    def pchild(self, v):
        return self.sb.tright.get(v, 0) if self.mirror else self.sb.tleft.get(v, 0)

    def schild(self, v):
        return self.sb.tleft.get(v, 0) if self.mirror else self.sb.tright.get(v, 0)

    def subtree_weight(self, v):
        if not v:
            return 0.0
        if v in self.sb.opaque:
            return self.sb.sim.vt.wsub[v]
        w = self.sb.sim.w[v]
        w += self.subtree_weight(self.pchild(v))
        w += self.subtree_weight(self.schild(v))
        return w

    def rotate_up(self, v):
        tl, tr, tp = self.sb.tleft, self.sb.tright, self.sb.tparent
        p = tp[v]
        g = tp.get(p, 0)
        if tl.get(p, 0) == v:
            b = tr.get(v, 0)
            tr[v] = p
            tl[p] = b
        else:
            b = tl.get(v, 0)
            tl[v] = p
            tr[p] = b
        if b:
            tp[b] = p
        tp[p] = v
        tp[v] = g
        if g:
            if tl.get(g, 0) == p:
                tl[g] = v
            else:
                tr[g] = v
        else:
            self.sb.troot = v


# -- public surface --------------------------------------------------------------


def build_initial(vt: VirtualTree, lazy: bool = False) -> Simulator:
    return Simulator(vt, lazy=lazy)


def simulate_access(sim: Simulator, virtual_ops: Trace) -> Trace:
    """Translate a virtual op list into the physical trace."""
    out = Trace()
    for op in virtual_ops.ops:
        out.ops.extend(sim.apply_virtual(op))
    out.boundaries = [len(out.ops)] if virtual_ops.boundaries else []
    return out


class WrappedAlgorithm(OnlineBstAlgorithm):
    """Runs the inner algorithm on the shadow tree, emitting physical ops."""

    def __init__(self, inner: OnlineBstAlgorithm, weights: Optional[Sequence[float]] = None,
                 lazy: bool = False):
        self.inner = inner
        vt = VirtualTree(inner.tree, weights)
        self.sim = Simulator(vt, lazy=lazy)
        self.tree = self.sim.pt
        self.n = inner.n

    def access_stream(self, key: int) -> Iterator[list[BstOp]]:
        inner_trace = self.inner.access(key)
        for op in inner_trace.ops:
            yield self.sim.apply_virtual(op)

    def access(self, key: int) -> Trace:
        ops: list[BstOp] = []
        for burst in self.access_stream(key):
            ops.extend(burst)
        return Trace(ops, [len(ops)])


def wrap(inner: OnlineBstAlgorithm, weights: Optional[Sequence[float]] = None,
         lazy: bool = False) -> WrappedAlgorithm:
    return WrappedAlgorithm(inner, weights, lazy)


def decode_virtual(sim: Simulator) -> tuple[list[int], list[int], int]:
    """Rebuild the virtual links from the physical tree plus per-node tags.

    Uses only: the physical structure, the hanging-root markers, the per-node
    next-on-path side bits, the per-block entry, and the virtual root key.
    """
    pt = sim.pt
    n = pt.n
    vleft = [0] * (n + 1)
    vright = [0] * (n + 1)

    def region(anchor: int) -> tuple[list[int], list[int]]:
        elems: list[int] = []
        hangs: list[int] = []
        stack = [anchor] if anchor else []
        while stack:
            v = stack.pop()
            if v in sim.blocks:
                hangs.append(v)
                continue
            elems.append(v)
            if pt.left[v]:
                stack.append(pt.left[v])
            if pt.right[v]:
                stack.append(pt.right[v])
        return elems, hangs

    def key_span(b: int) -> tuple[int, int]:
        lo = b
        while pt.left[lo]:
            lo = pt.left[lo]
        hi = b
        while pt.right[hi]:
            hi = pt.right[hi]
        return lo, hi

    def copy_raw(b: int) -> None:
        stack = [b]
        while stack:
            v = stack.pop()
            vleft[v] = pt.left[v]
            vright[v] = pt.right[v]
            for c in (pt.left[v], pt.right[v]):
                if c:
                    stack.append(c)

    def link_region(top: int, end: int) -> None:
        """Reconstruct the path from ``top`` down to ``end`` plus hangings."""
        le, lh = region(pt.left[end])
        re_, rh = region(pt.right[end])
        lq = sorted(le)
        rq = sorted(re_, reverse=True)
        li = ri = 0
        path = []
        cur = top
        while cur != end:
            path.append(cur)
            if li < len(lq) and lq[li] == cur:
                li += 1
            elif ri < len(rq) and rq[ri] == cur:
                ri += 1
            if li == len(lq) and ri == len(rq):
                cur = end
            elif li == len(lq):
                cur = rq[ri]
            elif ri == len(rq):
                cur = lq[li]
            else:
                cur = lq[li] if sim.next_bit[cur] else rq[ri]
        path.append(end)
        for i in range(len(path) - 1):
            u, s = path[i], path[i + 1]
            if s < u:
                vleft[u] = s
            else:
                vright[u] = s
        for b in lh + rh:
            lo, hi = key_span(b)
            cur_i = 0
            while True:
                side_left = hi < path[cur_i]
                if cur_i + 1 < len(path) and (path[cur_i + 1] < path[cur_i]) == side_left:
                    cur_i += 1
                    continue
                break
            holder = path[cur_i]
            if b in sim.raw:
                if hi < holder:
                    vleft[holder] = b
                else:
                    vright[holder] = b
                copy_raw(b)
                continue
            ent = sim.entry.get(b, b)
            if hi < holder:
                vleft[holder] = ent
            else:
                vright[holder] = ent
            link_region(ent, b)

    link_region(sim.vt.root, pt.root)
    return vleft, vright, sim.vt.root


def dump_state(sim: Simulator) -> str:
    """Debug rendering: the finger-path stacks, then every block with its
    entry and the kind of virtual edge it hangs from."""
    vt = sim.vt
    out = [f"finger {sim.pt.root}"]
    for z, name in ((sim.zL, "L"), (sim.zR, "R")):
        txt = z.dump()
        for line in txt.splitlines():
            out.append(f"  [{name}] " + line)
    for x in sorted(sim.blocks):
        ent = sim.entry.get(x, x)
        vp = vt.parent[ent]
        lab = "solid" if vp and vt.solid[vp] == ent else "dotted"
        if x in sim.raw:
            out.append(f"block {x} [{lab}] [raw] ({sim.wsub[x]:g})")
            continue
        out.append(f"block end {x} entry {ent} [{lab}] ({sim.wsub[x]:g})")
        ctl = sim.blocks[x]
        for side, name in ((ctl.L, "L"), (ctl.R, "R")):
            for line in side.dump().splitlines():
                out.append(f"  [{name}] " + line)
    return "\n".join(out) + "\n"
