"""Shared result types: family tag, per-zero traces, quadrature rules."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._series import HERMITE, LEGENDRE


class Family(enum.Enum):
    HERMITE = "hermite"
    LEGENDRE = "legendre"

    @property
    def code(self) -> int:
        return HERMITE if self is Family.HERMITE else LEGENDRE

    @classmethod
    def parse(cls, value: "Family | str") -> "Family":
        if isinstance(value, Family):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown family {value!r}; expected 'hermite' or 'legendre'") from None


class Termination(enum.Enum):
    CONVERGED = "converged"
    ITER_CAP_EXCEEDED = "iter_cap_exceeded"


@dataclass
class IterationTrace:
    zero_index: int
    initial_guess: float
    iterates: list = field(default_factory=list)
    sweep_steps: int = 0
    termination: Termination = Termination.CONVERGED

    @property
    def iterations(self) -> int:
        return max(len(self.iterates) - 1, 0)


@dataclass
class RuleStats:
    total_iters: int
    sweep_steps: int
    r_evals: int
    positive_zeros: int
    truncation_flags: int = 0
    iter_cap_flags: int = 0
    scheme: str = "modified"
    wall_time_s: float = 0.0

    @property
    def mean_iters(self) -> float:
        return self.total_iters / self.positive_zeros if self.positive_zeros else 0.0


@dataclass
class QuadratureRule:
    """n-point rule; nodes ascending over the whole axis, weights aligned with them.

    ``iters`` holds the Halley step count of each node (mirrored nodes share
    the count of their positive partner; an exact zero node has 0).
    """

    family: Family
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    iters: np.ndarray
    stats: RuleStats
    traces: list | None = None

    def __len__(self) -> int:
        return len(self.nodes)

    def positive_nodes(self) -> np.ndarray:
        return self.nodes[self.nodes > 0]

    def integrate(self, fn) -> float:
        return float(np.dot(self.weights, fn(self.nodes)))


def mirror(positive: np.ndarray, with_zero: bool) -> np.ndarray:
    """Ascending full set from ascending positive values (and an optional 0)."""
    middle = np.zeros(1) if with_zero else np.zeros(0)
    return np.concatenate([-positive[::-1], middle, positive])


def mirror_weights(positive: np.ndarray, zero_weight: float | None) -> np.ndarray:
    middle = np.zeros(0) if zero_weight is None else np.array([zero_weight])
    return np.concatenate([positive[::-1], middle, positive])


def traces_from_buffer(buf: np.ndarray, iters: np.ndarray, sweeps: np.ndarray, flags: np.ndarray,
                       iter_cap_flag: int) -> list[IterationTrace]:
    out = []
    for k in range(len(iters)):
        row = buf[k, : iters[k] + 1]
        out.append(
            IterationTrace(
                zero_index=k,
                initial_guess=float(row[0]),
                iterates=[float(v) for v in row],
                sweep_steps=int(sweeps[k]),
                termination=(
                    Termination.ITER_CAP_EXCEEDED if flags[k] & iter_cap_flag else Termination.CONVERGED
                ),
            )
        )
    return out
