"""Unit-cost binary search tree machine.

A tree holds the keys 1..n in symmetric order and carries a finger, a
distinguished current node. Exactly four operations exist, each of cost 1:
move the finger to its parent, to its left child, or to its right child, or
rotate the finger's node with its parent. A trace is a recorded operation
list plus access-boundary markers; replaying a trace against an access
sequence checks that every requested key was under the finger inside its
access window.

Keys are dense small integers, so the tree is an arena of parallel arrays
indexed by key. Absent links are 0. This makes operation application O(1)
and copying trivial, which the replay and search tools rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterator, Optional, Sequence, Union


class BstOp(IntEnum):
    """The four unit-cost operations."""

    PARENT = 0
    LEFT = 1
    RIGHT = 2
    ROTATE = 3

    @property
    def token(self) -> str:
        return "PLRU"[self]

    @classmethod
    def from_token(cls, tok: str) -> "BstOp":
        try:
            return _TOKEN_OPS[tok]
        except KeyError:
            raise ValueError(f"unknown op token {tok!r}") from None


_TOKEN_OPS = {"P": BstOp.PARENT, "L": BstOp.LEFT, "R": BstOp.RIGHT, "U": BstOp.ROTATE}

# The boundary marker used in the trace text format.
BOUNDARY_TOKEN = "#"


@dataclass
class Trace:
    """An operation list plus access-boundary positions.

    ``boundaries[i]`` is the number of operations executed at the point where
    the (i+1)-th access is declared complete. Boundaries are non-decreasing
    and at most ``len(ops)``. The cost of a trace is its length.
    """

    ops: list[BstOp] = field(default_factory=list)
    boundaries: list[int] = field(default_factory=list)

    @property
    def cost(self) -> int:
        return len(self.ops)

    def extend(self, other: "Trace") -> None:
        base = len(self.ops)
        self.ops.extend(other.ops)
        self.boundaries.extend(base + b for b in other.boundaries)

    def to_text(self) -> str:
        """Render as whitespace-separated tokens, `#` marking boundaries."""
        out: list[str] = []
        bi = 0
        nb = len(self.boundaries)
        for pos, op in enumerate(self.ops):
            while bi < nb and self.boundaries[bi] == pos:
                out.append(BOUNDARY_TOKEN)
                bi += 1
            out.append(op.token)
        while bi < nb:
            out.append(BOUNDARY_TOKEN)
            bi += 1
        return " ".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Trace":
        ops: list[BstOp] = []
        boundaries: list[int] = []
        for tok in text.split():
            if tok == BOUNDARY_TOKEN:
                boundaries.append(len(ops))
            else:
                ops.append(BstOp.from_token(tok))
        return cls(ops, boundaries)


class IllegalOpError(ValueError):
    """Raised when an operation is not applicable at the current finger."""

    def __init__(self, op: BstOp, finger: int, reason: str):
        self.op = op
        self.finger = finger
        super().__init__(f"illegal {op.token} at finger {finger}: {reason}")


class MalformedTreeError(ValueError):
    """Raised when an explicit shape does not encode a BST over 1..n."""

    def __init__(self, key: int, reason: str):
        self.key = key
        super().__init__(f"bad tree at key {key}: {reason}")


ShapeSpec = Union[str, Sequence[int]]


class ModelTree:
    """Arena of keyed nodes with parent/left/right links and a finger.

    Link arrays are 1-indexed by key; slot 0 is unused and 0 encodes an
    absent link. Mutation happens only through :meth:`apply_op`, so recorded
    traces replay exactly.
    """

    __slots__ = ("n", "left", "right", "parent", "root", "finger", "_track_height", "hgt")

    def __init__(self, parents: Sequence[int], track_height: bool = False):
        """Build from a signed parent array.

        ``parents[k-1]`` is 0 for the root, ``p`` if key k is the right child
        of p and ``-p`` if it is the left child.
        """
        n = len(parents)
        if n < 1:
            raise MalformedTreeError(0, "need at least one key")
        left = [0] * (n + 1)
        right = [0] * (n + 1)
        parent = [0] * (n + 1)
        root = 0
        for k in range(1, n + 1):
            p = parents[k - 1]
            if p == 0:
                if root:
                    raise MalformedTreeError(k, "second root")
                root = k
                continue
            side_left = p < 0
            p = abs(p)
            if not (1 <= p <= n) or p == k:
                raise MalformedTreeError(k, f"parent {p} out of range")
            if side_left:
                if left[p]:
                    raise MalformedTreeError(k, f"key {p} already has a left child")
                left[p] = k
            else:
                if right[p]:
                    raise MalformedTreeError(k, f"key {p} already has a right child")
                right[p] = k
            parent[k] = p
        if not root:
            raise MalformedTreeError(1, "no root")
        self.n = n
        self.left = left
        self.right = right
        self.parent = parent
        self.root = root
        self.finger = root
        self._track_height = track_height
        self.hgt = [0] * (n + 1)
        self._check_structure()
        if track_height:
            self._recompute_heights()

    @classmethod
    def new_tree(cls, n: int, shape: ShapeSpec = "balanced", track_height: bool = False) -> "ModelTree":
        """Build a fresh tree with the finger at the root."""
        if n < 1:
            raise MalformedTreeError(0, "n must be >= 1")
        if isinstance(shape, str):
            if shape == "balanced":
                parents = _balanced_parents(n)
            elif shape == "linear-left":
                # root n, each key's parent is its successor
                parents = [-(k + 1) for k in range(1, n)] + [0]
            elif shape == "linear-right":
                parents = [0] + [k - 1 for k in range(2, n + 1)]
            else:
                raise MalformedTreeError(0, f"unknown shape {shape!r}")
        else:
            parents = list(shape)
            if len(parents) != n:
                raise MalformedTreeError(0, f"parent array has {len(parents)} entries, expected {n}")
        return cls(parents, track_height=track_height)

    # -- structure checks ---------------------------------------------------

    def _check_structure(self) -> None:
        """Validate link consistency, reachability and symmetric order."""
        n = self.n
        seen = 0
        prev = 0
        # iterative in-order walk
        stack: list[int] = []
        v = self.root
        while stack or v:
            while v:
                stack.append(v)
                v = self.left[v]
            v = stack.pop()
            if v != prev + 1:
                raise MalformedTreeError(v, f"symmetric order broken, expected {prev + 1}")
            prev = v
            seen += 1
            if seen > n:
                raise MalformedTreeError(v, "cycle in links")
            v = self.right[v]
        if seen != n:
            raise MalformedTreeError(self.root, f"only {seen} of {n} keys reachable")

    def check_bst(self) -> bool:
        """True iff the symmetric traversal yields 1..n exactly."""
        try:
            self._check_structure()
        except MalformedTreeError:
            return False
        return True

    def in_order(self) -> Iterator[int]:
        stack: list[int] = []
        v = self.root
        while stack or v:
            while v:
                stack.append(v)
                v = self.left[v]
            v = stack.pop()
            yield v
            v = self.right[v]

    # -- operations ---------------------------------------------------------

    def apply_op(self, op: BstOp) -> None:
        f = self.finger
        if op == BstOp.LEFT:
            c = self.left[f]
            if not c:
                raise IllegalOpError(op, f, "no left child")
            self.finger = c
        elif op == BstOp.RIGHT:
            c = self.right[f]
            if not c:
                raise IllegalOpError(op, f, "no right child")
            self.finger = c
        elif op == BstOp.PARENT:
            p = self.parent[f]
            if not p:
                raise IllegalOpError(op, f, "finger at root")
            self.finger = p
        else:
            p = self.parent[f]
            if not p:
                raise IllegalOpError(op, f, "finger at root")
            self._rotate_up(f, p)

    def _rotate_up(self, x: int, p: int) -> None:
        """Rotate the edge (x, p); x takes p's place, order preserved."""
        g = self.parent[p]
        if self.left[p] == x:
            b = self.right[x]
            self.right[x] = p
            self.left[p] = b
            if b:
                self.parent[b] = p
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
        if self._track_height:
            self._update_heights_from(p)

    def apply(self, trace: Trace) -> None:
        for op in trace.ops:
            self.apply_op(op)

    # -- height bookkeeping (optional, used by instrumented runs) -----------

    def _recompute_heights(self) -> None:
        order: list[int] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            if self.left[v]:
                stack.append(self.left[v])
            if self.right[v]:
                stack.append(self.right[v])
        hgt = self.hgt
        for v in reversed(order):
            hl = hgt[self.left[v]] + 1 if self.left[v] else 0
            hr = hgt[self.right[v]] + 1 if self.right[v] else 0
            hgt[v] = hl if hl > hr else hr

    def _update_heights_from(self, v: int) -> None:
        # climb while subtree heights keep changing
        hgt, left, right, parent = self.hgt, self.left, self.right, self.parent
        while v:
            hl = hgt[left[v]] + 1 if left[v] else 0
            hr = hgt[right[v]] + 1 if right[v] else 0
            h = hl if hl > hr else hr
            if hgt[v] == h:
                return
            hgt[v] = h
            v = parent[v]

    # -- queries ------------------------------------------------------------

    def depth(self, k: int) -> int:
        if not (1 <= k <= self.n):
            raise KeyError(f"key {k} not in tree")
        d = 0
        while self.parent[k]:
            k = self.parent[k]
            d += 1
        return d

    def height(self) -> int:
        if self._track_height:
            return self.hgt[self.root]
        best = 0
        stack = [(self.root, 0)]
        while stack:
            v, d = stack.pop()
            if d > best:
                best = d
            if self.left[v]:
                stack.append((self.left[v], d + 1))
            if self.right[v]:
                stack.append((self.right[v], d + 1))
        return best

    def path_from_root(self, k: int) -> list[int]:
        """Root-to-k node list, derived by key comparisons."""
        path = [self.root]
        v = self.root
        while v != k:
            v = self.left[v] if k < v else self.right[v]
            if not v:
                raise KeyError(f"key {k} unreachable")
            path.append(v)
        return path

    def copy(self) -> "ModelTree":
        t = object.__new__(ModelTree)
        t.n = self.n
        t.left = self.left[:]
        t.right = self.right[:]
        t.parent = self.parent[:]
        t.root = self.root
        t.finger = self.finger
        t._track_height = self._track_height
        t.hgt = self.hgt[:]
        return t

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        """Two lines: n, then the signed parent array."""
        parts = []
        for k in range(1, self.n + 1):
            p = self.parent[k]
            if p == 0:
                parts.append("0")
            elif self.left[p] == k:
                parts.append(str(-p))
            else:
                parts.append(str(p))
        return f"{self.n}\n{' '.join(parts)}\n"

    @classmethod
    def from_text(cls, text: str) -> "ModelTree":
        lines = text.splitlines()
        if len(lines) < 2:
            raise MalformedTreeError(0, "tree text needs two lines")
        n = int(lines[0].strip())
        parents = [int(x) for x in lines[1].split()]
        if len(parents) != n:
            raise MalformedTreeError(0, f"expected {n} parent entries, got {len(parents)}")
        return cls(parents)


def _balanced_parents(n: int) -> list[int]:
    parents = [0] * n

    def build(lo: int, hi: int, parent: int, is_left: bool) -> None:
        if lo > hi:
            return
        mid = (lo + hi) // 2
        if parent:
            parents[mid - 1] = -parent if is_left else parent
        build(lo, mid - 1, mid, True)
        build(mid + 1, hi, mid, False)

    build(1, n, 0, False)
    return parents


@dataclass
class VerifyReport:
    """Outcome of replaying a trace against an access sequence."""

    valid: bool
    failure_index: Optional[int]
    per_access_cost: list[int]
    visited_boundaries: list[int]
    reason: str = ""


def verify_trace(
    t0: ModelTree,
    trace: Trace,
    s: Sequence[int],
    boundaries: Optional[Sequence[int]] = None,
) -> VerifyReport:
    """Replay ``trace`` from a copy of ``t0`` and check it realizes ``s``.

    The finger position before any operation counts as a visit, so the empty
    trace realizes an access to the starting finger. With supplied boundaries
    (defaulting to the trace's own), access i must be visited in the window
    between boundary i-1 and boundary i; the windows share their endpoints,
    which lets a repeated key be served at zero cost. Without boundaries,
    first-visit positions are used. Illegality is reported, never raised.

    ``per_access_cost`` splits the trace at the internal boundaries, with the
    last access extending to the end of the trace so costs always sum to the
    trace length. ``visited_boundaries`` records where each key was first
    seen inside its window.
    """
    t = t0.copy()
    visits = [t.finger]
    for i, op in enumerate(trace.ops):
        try:
            t.apply_op(op)
        except IllegalOpError as e:
            return VerifyReport(False, i, [], [], reason=str(e))
        visits.append(t.finger)

    m = len(s)
    if boundaries is None and trace.boundaries and len(trace.boundaries) == m:
        boundaries = trace.boundaries

    if boundaries is not None:
        if len(boundaries) != m:
            return VerifyReport(False, None, [], [], reason=f"{len(boundaries)} boundaries for {m} accesses")
        prev = 0
        first_seen: list[int] = []
        for i, key in enumerate(s):
            b = boundaries[i]
            if b < prev or b > len(trace.ops):
                return VerifyReport(False, None, [], [], reason=f"boundary {b} out of order at access {i}")
            hit = -1
            for pos in range(prev, b + 1):
                if visits[pos] == key:
                    hit = pos
                    break
            if hit < 0:
                return VerifyReport(
                    False, None, [], [], reason=f"key {key} (access {i}) not visited in ops {prev}..{b}")
            first_seen.append(hit)
            prev = b
        costs = _segment_costs(list(boundaries), len(trace.ops))
        return VerifyReport(True, None, costs, first_seen)

    # first-visit mode: greedy subsequence match, repeats may share a position
    pos = 0
    first_seen = []
    for i, key in enumerate(s):
        while pos <= len(trace.ops) and visits[pos] != key:
            pos += 1
        if pos > len(trace.ops):
            return VerifyReport(False, None, [], [], reason=f"key {key} (access {i}) never visited")
        first_seen.append(pos)
    costs = _segment_costs(first_seen, len(trace.ops))
    return VerifyReport(True, None, costs, first_seen)


def _segment_costs(bounds: list[int], total: int) -> list[int]:
    if not bounds:
        return []
    costs = []
    prev = 0
    for b in bounds[:-1]:
        costs.append(b - prev)
        prev = b
    costs.append(total - prev)
    return costs

