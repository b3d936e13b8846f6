"""Discretisation of scale integrals int_0^inf g(rho) alpha(rho) d rho."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ALPHAS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "1/rho": lambda r: 1.0 / r,
    "1": lambda r: np.ones_like(r),
}


def alpha_function(alpha) -> Callable:
    if callable(alpha):
        return alpha
    try:
        return ALPHAS[alpha]
    except KeyError:
        raise ValueError(f"unknown weight {alpha!r}; known: {sorted(ALPHAS)}") from None


@dataclass(frozen=True)
class ScaleGrid:
    """Log-uniform scale nodes with trapezoid weights in log(rho).

    ``weights[j]`` realises d rho * alpha(rho) at node j, so that
    ``grid.integrate(g(nodes))`` approximates int g(rho) alpha(rho) d rho.
    For alpha = 1/rho the weights are the plain trapezoid weights in
    log(rho), which converge geometrically for integrands analytic in a
    strip around the real log(rho) axis.
    """

    rho_min: float = 1e-12
    rho_max: float = 1e3
    count: int = 400
    alpha: str = "1/rho"
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (0 < self.rho_min < self.rho_max) or self.count < 2:
            raise ValueError("need 0 < rho_min < rho_max and at least two nodes")
        u = np.linspace(math.log(self.rho_min), math.log(self.rho_max), self.count)
        h = u[1] - u[0]
        rho = np.exp(u)
        w = np.full(self.count, h)
        w[[0, -1]] *= 0.5
        w = w * rho * alpha_function(self.alpha)(rho)
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ValueError("weight function must be positive and finite on the grid")
        object.__setattr__(self, "nodes", rho)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.count

    def alpha_at(self, rho):
        return alpha_function(self.alpha)(np.asarray(rho, dtype=float))

    def integrate(self, values, axis: int = 0):
        """Weighted sum over the scale axis, pairwise-summed for reproducibility."""
        v = np.moveaxis(np.asarray(values), axis, 0)
        return np.sum(self.weights.reshape((-1,) + (1,) * (v.ndim - 1)) * v, axis=0)

    def tail(self, R: float):
        """Grid restricted to rho >= R, weights unchanged (for scaling functions)."""
        mask = self.nodes >= R
        return self.nodes[mask], self.weights[mask]

    def describe(self) -> dict:
        return {"rho_min": self.rho_min, "rho_max": self.rho_max, "count": self.count, "alpha": self.alpha}


def log_grid(lo: float, hi: float, count: int) -> np.ndarray:
    return np.exp(np.linspace(math.log(lo), math.log(hi), count))
