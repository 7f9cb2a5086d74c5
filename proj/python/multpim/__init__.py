"""Cycle-accurate stateful-logic multiplier and matrix-vector schedules."""

from ._multpim import (
    CostReport,
    CrossbarError,
    baseline_area,
    baseline_latency,
    floatpim_cost,
    fused_mac,
    matvec,
    matvec_oracle,
    multiply,
    multiply_batch,
    predicted_cycles,
    predicted_memristors,
    trace,
)

__all__ = [
    "CostReport",
    "CrossbarError",
    "baseline_area",
    "baseline_latency",
    "floatpim_cost",
    "fused_mac",
    "matvec",
    "matvec_oracle",
    "multiply",
    "multiply_batch",
    "predicted_cycles",
    "predicted_memristors",
    "trace",
]
