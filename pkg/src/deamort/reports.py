"""Cost reports and their serialization."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Optional

CSV_COLUMNS = ("algo", "n", "m", "total", "worst", "maxdepth")


@dataclass
class CostReport:
    algorithm: str
    chain: str
    n: int
    m: int
    seq_kind: str
    seed: int
    total_ops: int
    per_access_max: int
    per_access_histogram: dict[str, int]
    max_depth_observed: int
    ratio_vs_baseline: float
    baseline_total: int
    ratio_vs_opt: Optional[float] = None
    opt_cost: Optional[int] = None
    action_histogram: Optional[dict[str, int]] = None
    max_queue: Optional[int] = None
    restructure_ops: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CostReport":
        return cls(**json.loads(text))

    def csv_row(self) -> str:
        algo = self.algorithm if self.chain == "none" else f"{self.algorithm}+{self.chain}"
        vals = (algo, self.n, self.m, self.total_ops, self.per_access_max,
                self.max_depth_observed)
        return ",".join(str(v) for v in vals)

    def emit(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return ",".join(CSV_COLUMNS) + "\n" + self.csv_row() + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def cost_histogram(costs: list[int]) -> dict[str, int]:
    """Power-of-two bucketed per-access cost counts."""
    out: dict[str, int] = {}
    for c in costs:
        lo = 1
        while lo * 2 <= max(c, 1):
            lo *= 2
        label = f"{lo}-{2 * lo - 1}" if c > 0 else "0"
        out[label] = out.get(label, 0) + 1
    return out


def compare(reports: list[CostReport]) -> str:
    """Fixed-order csv with a ratio column against the first report."""
    base = reports[0].total_ops or 1
    lines = [",".join(CSV_COLUMNS) + ",ratio_vs_first"]
    for r in reports:
        lines.append(r.csv_row() + f",{r.total_ops / base:.4f}")
    return "\n".join(lines) + "\n"


def plot_data(reports: list[CostReport]) -> str:
    """(n, worst per-access cost) series for external plotting."""
    lines = ["n,worst"]
    for r in sorted(reports, key=lambda r: r.n):
        lines.append(f"{r.n},{r.per_access_max}")
    return "\n".join(lines) + "\n"
