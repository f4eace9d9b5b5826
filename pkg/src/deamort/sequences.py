"""Deterministic access-sequence generators for experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass

KINDS = ("sequential", "uniform", "zipf", "working-set", "bit-reversal")


@dataclass
class SequenceSpec:
    kind: str
    n: int
    m: int
    seed: int = 0
    alpha: float = 1.0  # zipf skew
    width: int = 8  # working-set window

    def __post_init__(self) -> None:
        base = self.kind.split(":")[0]
        if base not in KINDS:
            raise ValueError(f"unknown sequence kind {self.kind!r}, have {KINDS}")
        if ":" in self.kind:
            arg = self.kind.split(":", 1)[1]
            if base == "zipf":
                self.alpha = float(arg)
            elif base == "working-set":
                self.width = int(arg)
            else:
                raise ValueError(f"kind {base} takes no parameter")
            self.kind = base
        if self.n < 1 or self.m < 0:
            raise ValueError("need n >= 1 and m >= 0")
        if self.kind == "bit-reversal" and self.n & (self.n - 1):
            raise ValueError("bit-reversal needs n to be a power of two")
        if self.kind == "working-set" and self.width < 1:
            raise ValueError("working-set width must be positive")


def _bit_reverse(i: int, bits: int) -> int:
    out = 0
    for _ in range(bits):
        out = (out << 1) | (i & 1)
        i >>= 1
    return out


def gen_sequence(spec: SequenceSpec) -> list[int]:
    """Generate the access sequence; identical spec and seed give identical
    output."""
    n, m = spec.n, spec.m
    rng = random.Random(spec.seed)
    if spec.kind == "sequential":
        return [(i % n) + 1 for i in range(m)]
    if spec.kind == "uniform":
        return [rng.randint(1, n) for _ in range(m)]
    if spec.kind == "zipf":
        weights = [1.0 / (k ** spec.alpha) for k in range(1, n + 1)]
        cum = []
        acc = 0.0
        for w in weights:
            acc += w
            cum.append(acc)
        out = []
        for _ in range(m):
            x = rng.random() * acc
            lo, hi = 0, n - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if cum[mid] < x:
                    lo = mid + 1
                else:
                    hi = mid
            out.append(lo + 1)
        return out
    if spec.kind == "working-set":
        window: list[int] = []
        out = []
        for _ in range(m):
            if window and rng.random() < 0.75:
                # geometric recency preference inside the window
                idx = 0
                while idx < len(window) - 1 and rng.random() < 0.5:
                    idx += 1
                k = window[idx]
            else:
                k = rng.randint(1, n)
            out.append(k)
            if k in window:
                window.remove(k)
            window.insert(0, k)
            del window[spec.width:]
        return out
    # bit-reversal
    bits = max(1, n.bit_length() - 1)
    perm = [_bit_reverse(i, bits) + 1 for i in range(n)]
    return [perm[i % n] for i in range(m)]
