"""Unit-cost BST machine, stack-shaped balanced trees, and worst-case
transforms for self-adjusting search trees."""

from .algorithms import ALGORITHMS, OnlineBstAlgorithm, make_algorithm
from .model import BstOp, IllegalOpError, ModelTree, Trace, VerifyReport, verify_trace
from .poptart import PopTartLeaf, make_poptart
from .simulation import VirtualTree, build_initial, heavy_path_decompose, simulate_access, wrap
from .transforms import (
    GuaranteeViolation,
    InterleaveConfig,
    WorkQueue,
    interleave_transform,
    online_transform,
)

__all__ = [
    "ALGORITHMS",
    "BstOp",
    "GuaranteeViolation",
    "IllegalOpError",
    "InterleaveConfig",
    "ModelTree",
    "OnlineBstAlgorithm",
    "PopTartLeaf",
    "Trace",
    "VerifyReport",
    "VirtualTree",
    "WorkQueue",
    "build_initial",
    "heavy_path_decompose",
    "interleave_transform",
    "make_algorithm",
    "make_poptart",
    "online_transform",
    "simulate_access",
    "verify_trace",
    "wrap",
]
