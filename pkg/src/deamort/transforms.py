"""Worst-case transforms over depth-bounded online BST algorithms.

Two wrappers are provided. The interleaved transform watches the wrapped op
stream and, whenever a budget of original operations elapses without the
requested key being reached, walks the finger from the root to the key and
back, so every access finishes within 3*c*log2(n) operations while the whole
run stays within three times the original cost.

The online transform bounds the work spent per request instead: each request
triggers at most a fixed multiple of f(n) operations. Unfinished per-key op
streams are suspended, and the affected keys wait in a FIFO queue threaded
through tree nodes: a cell lives inside a tree node (addressed by key, so
rotations cannot disturb it) holding the queued key and the host key of the
next cell, and every queue operation pays the finger walks needed to reach
its cells. Per request the transform runs up to three routines: drain queued
streams within d*f(n) ops, advance the newest key's stream within f(n) ops,
and, if that stream is still unfinished, answer the request with a direct
search and enqueue the key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .algorithms import OnlineBstAlgorithm
from .constants import FROZEN
from .model import BstOp, ModelTree, Trace

_P, _L, _R, _U = BstOp.PARENT, BstOp.LEFT, BstOp.RIGHT, BstOp.ROTATE


class GuaranteeViolation(RuntimeError):
    """A hard worst-case guard tripped; the message names the promise."""


@dataclass
class InterleaveConfig:
    """c such that the input algorithm keeps every physical depth at or
    below c*log2(n). The forced-access trigger and the per-access guard are
    both expressed through it."""

    c: float = FROZEN["INTERLEAVE_C"]

    def budget(self, n: int) -> int:
        return max(1, math.floor(self.c * math.log2(max(n, 2))))

    def per_access_cap(self, n: int) -> float:
        if n <= 1:
            return 0.0
        return 3.0 * self.c * math.log2(n)


class InterleavedAlgorithm(OnlineBstAlgorithm):
    """Forces overdue accesses so no access segment exceeds 3*c*log2(n).

    The wrapped op stream runs as one continuous sequence; each access is
    answered as soon as its key is reached, naturally or by a forced round
    trip from the root, and whatever remains of the stream is carried into
    the next access's segment. The trigger counts only original stream
    operations since the last access completed, and forced walks start only
    where the stream parked the finger on the root, so a forced visit costs
    at most one tree depth each way.
    """

    def __init__(self, inner: OnlineBstAlgorithm, cfg: Optional[InterleaveConfig] = None):
        self.inner = inner
        self.cfg = cfg if cfg is not None else InterleaveConfig()
        self.tree = inner.tree
        self.n = inner.n
        self._since_boundary = 0
        self._segment = 0
        self._boundary_pos: Optional[int] = None
        self._gen: Optional[Iterator[list[BstOp]]] = None
        self._unstarted: list[int] = []
        self.forced_accesses = 0
        self.total_ops = 0
        self.original_ops = 0
        self.max_segment = 0

    def _close_segment(self) -> None:
        if self._segment > self.max_segment:
            self.max_segment = self._segment
        cap = self.cfg.per_access_cap(self.n)
        if self._segment > cap:
            raise GuaranteeViolation(
                f"access segment of {self._segment} ops exceeds 3*c*log2(n) = {cap:.1f}; "
                f"the input algorithm broke its depth pledge c = {self.cfg.c}")
        self._segment = 0
        self._since_boundary = 0

    def access_stream(self, key: int) -> Iterator[list[BstOp]]:
        self._require_key(key)
        t = self.tree
        self._unstarted.append(key)
        yielded = 0
        self._boundary_pos = None
        while True:
            if t.finger == key:
                self._boundary_pos = yielded
                self._close_segment()
                return
            if (t.finger == t.root
                    and self._since_boundary >= self.cfg.budget(self.n)):
                down: list[BstOp] = []
                v = t.root
                while v != key:
                    op = _L if key < v else _R
                    t.apply_op(op)
                    down.append(op)
                    v = t.finger
                self._segment += len(down)
                self.forced_accesses += 1
                self._boundary_pos = yielded + len(down)
                self._close_segment()
                back = [_P] * len(down)
                for op in back:
                    t.apply_op(op)
                self.total_ops += 2 * len(down)
                self._segment += len(back)
                yield down + back
                return
            if self._gen is None:
                if not self._unstarted:
                    # stream fully drained without the finger resting on the
                    # key: the last burst still realized it
                    self._boundary_pos = yielded
                    self._close_segment()
                    return
                self._gen = self.inner.access_stream(self._unstarted.pop(0))
            burst = next(self._gen, None)
            if burst is None:
                self._gen = None
                continue
            self.total_ops += len(burst)
            self.original_ops += len(burst)
            self._segment += len(burst)
            self._since_boundary += len(burst)
            yielded += len(burst)
            yield burst

    def access(self, key: int) -> Trace:
        ops: list[BstOp] = []
        for burst in self.access_stream(key):
            ops.extend(burst)
        b = self._boundary_pos if self._boundary_pos is not None else len(ops)
        return Trace(ops, [b])


def interleave_transform(
    inner: OnlineBstAlgorithm, cfg: Optional[InterleaveConfig] = None
) -> InterleavedAlgorithm:
    return InterleavedAlgorithm(inner, cfg)


class WorkQueue:
    """FIFO of keys threaded through tree nodes, paid for with finger walks."""

    def __init__(self, tree: ModelTree):
        self.tree = tree
        self.cells: dict[int, tuple[int, int]] = {}  # host -> (queued key, next host)
        self.head = 0
        self.tail = 0
        self.max_len = 0

    def __len__(self) -> int:
        return len(self.cells)

    def _free_host(self, want: int) -> int:
        n = self.tree.n
        h = want
        for _ in range(n):
            if h not in self.cells:
                return h
            h = h % n + 1
        raise GuaranteeViolation("queue overflow: every tree node already hosts a cell")

    def _walk(self, key: int) -> list[BstOp]:
        """Round trip root -> key -> root; pure finger moves."""
        t = self.tree
        assert t.finger == t.root, "queue walks start at the root"
        ops: list[BstOp] = []
        v = t.root
        while v != key:
            op = _L if key < v else _R
            t.apply_op(op)
            ops.append(op)
            v = t.finger
        for _ in range(len(ops)):
            t.apply_op(_P)
        return ops + [_P] * len(ops)

    def enqueue(self, key: int) -> list[BstOp]:
        if len(self.cells) >= self.tree.n:
            raise GuaranteeViolation(
                f"queue overflow with {len(self.cells)} cells: the input algorithm "
                "broke its O(n f(n) + k f(n)) total-work guarantee")
        host = self._free_host(key)
        ops: list[BstOp] = []
        if self.tail:
            qk, _ = self.cells[self.tail]
            ops += self._walk(self.tail)  # rewrite the old tail's next pointer
            self.cells[self.tail] = (qk, host)
        ops += self._walk(host)
        self.cells[host] = (key, 0)
        self.tail = host
        if not self.head:
            self.head = host
        if len(self.cells) > self.max_len:
            self.max_len = len(self.cells)
        return ops

    def front(self) -> int:
        if not self.head:
            raise GuaranteeViolation("queue underflow")
        return self.cells[self.head][0]

    def dequeue(self) -> tuple[int, list[BstOp]]:
        if not self.head:
            raise GuaranteeViolation("queue underflow")
        ops = self._walk(self.head)
        key, nxt = self.cells.pop(self.head)
        self.head = nxt
        if not self.head:
            self.tail = 0
        return key, ops


@dataclass
class OnlineCounters:
    actions: dict[str, int] = field(default_factory=dict)
    max_queue: int = 0
    max_access_ops: int = 0
    restarts: int = 0
    total_ops: int = 0


class OnlineWorstCaseAlgorithm(OnlineBstAlgorithm):
    """Caps the work spent on every request at a fixed multiple of f(n)."""

    def __init__(self, inner: OnlineBstAlgorithm,
                 f_bound: Optional[Callable[[int], float]] = None,
                 d: Optional[float] = None,
                 hard_cap: Optional[float] = None):
        self.inner = inner
        self.tree = inner.tree
        self.n = inner.n
        f = f_bound if f_bound is not None else (lambda n: math.log2(max(n, 2)))
        self.f_n = max(1.0, float(f(self.n)))
        self.d = float(d) if d is not None else FROZEN["ONLINE_D"]
        self.queue = WorkQueue(self.tree)
        self.counters = OnlineCounters()
        self._proc: Optional[Iterator[list[BstOp]]] = None  # oldest key's suspended stream
        self._pending_up = 0
        self._cap = hard_cap if hard_cap is not None else FROZEN["ONLINE_K"] * self.f_n

    def _pull(self, gen: Iterator[list[BstOp]], budget: float, chunk: list[BstOp]) -> tuple[int, bool]:
        """Advance a suspended op stream until the budget is spent or it ends."""
        done = 0
        while done < budget:
            burst = next(gen, None)
            if burst is None:
                return done, True
            done += len(burst)
            chunk.extend(burst)
        return done, False

    def access_stream(self, key: int) -> Iterator[list[BstOp]]:
        self._require_key(key)
        t = self.tree
        chunk: list[BstOp] = []
        if self._pending_up:
            back = [_P] * self._pending_up
            self._pending_up = 0
            for op in back:
                t.apply_op(op)
            chunk.extend(back)
        ran = ""
        q = self.queue
        if len(q):
            ran += "A"
            budget = self.d * self.f_n
            spent = 0.0
            while spent < budget and len(q):
                if self._proc is None:
                    self.counters.restarts += 1
                    self._proc = self.inner.access_stream(q.front())
                done, finished = self._pull(self._proc, budget - spent, chunk)
                spent += done
                if finished:
                    self._proc = None
                    _, walk = q.dequeue()
                    chunk.extend(walk)
                    spent += len(walk)
                else:
                    break
        gen: Optional[Iterator[list[BstOp]]] = None
        finished = False
        if not len(q):
            ran += "B"
            gen = self.inner.access_stream(key)
            _, finished = self._pull(gen, self.f_n, chunk)
        if not finished:
            ran += "C"
            chunk.extend(q.enqueue(key))
            assert t.finger == t.root
            v = t.root
            down = 0
            while v != key:
                op = _L if key < v else _R
                t.apply_op(op)
                chunk.append(op)
                v = t.finger
                down += 1
            self._pending_up = down
            if gen is not None:
                self._proc = gen  # the request just enqueued is the oldest
        self.counters.actions[ran] = self.counters.actions.get(ran, 0) + 1
        self.counters.max_queue = max(self.counters.max_queue, q.max_len)
        self.counters.total_ops += len(chunk)
        if len(chunk) > self.counters.max_access_ops:
            self.counters.max_access_ops = len(chunk)
        if len(chunk) > self._cap:
            raise GuaranteeViolation(
                f"request cost {len(chunk)} exceeds K*f(n) = {self._cap:.1f}")
        yield chunk

    def access(self, key: int) -> Trace:
        ops: list[BstOp] = []
        for burst in self.access_stream(key):
            ops.extend(burst)
        return Trace(ops, [len(ops)])


def online_transform(inner: OnlineBstAlgorithm,
                     f_bound: Optional[Callable[[int], float]] = None,
                     d: Optional[float] = None) -> OnlineWorstCaseAlgorithm:
    return OnlineWorstCaseAlgorithm(inner, f_bound, d)
