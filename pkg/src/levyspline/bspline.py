"""B-spline basis evaluation on private per-atom knot vectors.

Every atom in the model owns its own knot vector of length degree + 2, so
there is no shared knot grid: evaluation runs the Cox-de Boor triangle
directly on the atom's knots. Any 0/0 term from coincident knots is defined
as 0 (standard convention; continuous knot priors make ties measure-zero,
but floating-point ties can still occur).

Support is half-open [xi_1, xi_{k+2}), propagated from the degree-0
indicator through the recursion. A knot vector whose right end coincides
with the domain maximum therefore evaluates to 0 exactly at that point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KnotVector:
    """Non-descending knot sequence of length degree + 2 for one basis function."""

    degree: int
    knots: tuple[float, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree must be non-negative, got {self.degree}")
        knots = tuple(float(t) for t in self.knots)
        if len(knots) != self.degree + 2:
            raise ValueError(
                f"degree {self.degree} needs {self.degree + 2} knots, got {len(knots)}"
            )
        if any(not np.isfinite(t) for t in knots):
            raise ValueError("knots must be finite")
        if any(a > b for a, b in zip(knots, knots[1:])):
            raise ValueError(f"knots must be non-descending, got {knots}")
        object.__setattr__(self, "knots", knots)

    @property
    def support(self) -> tuple[float, float]:
        return self.knots[0], self.knots[-1]


def basis_values(knots, degree: int, x) -> np.ndarray:
    """Vectorized Cox-de Boor triangle on one knot vector.

    `knots` is a non-descending sequence of length degree + 2; `x` is an
    array of evaluation points. Returns B_degree(x; knots).
    """
    t = np.asarray(knots, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    # degree-0 layer: half-open indicators on consecutive knot pairs
    b = [((t[i] <= x) & (x < t[i + 1])).astype(float) for i in range(degree + 1)]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for d in range(1, degree + 1):
            for i in range(degree + 1 - d):
                left_den = t[i + d] - t[i]
                right_den = t[i + d + 1] - t[i + 1]
                acc = np.zeros_like(x)
                # mask by the child supports so 0/0 (and near-degenerate
                # subnormal spans) contribute exactly 0
                if left_den > 0.0:
                    acc += np.where(b[i] != 0.0, (x - t[i]) / left_den * b[i], 0.0)
                if right_den > 0.0:
                    acc += np.where(
                        b[i + 1] != 0.0, (t[i + d + 1] - x) / right_den * b[i + 1], 0.0
                    )
                b[i] = acc
    return b[0]


def eval_basis(kv: KnotVector, x: float) -> float:
    """Evaluate one B-spline basis function at a scalar point."""
    return float(basis_values(kv.knots, kv.degree, x)[0])


def basis_integral(kv: KnotVector) -> float:
    """Exact integral of the basis over its support: (xi_last - xi_first)/(k+1)."""
    lo, hi = kv.support
    return (hi - lo) / (kv.degree + 1)


def eval_mean(state, x) -> np.ndarray:
    """Mean function: intercept plus the sum of coefficient * basis over all atoms.

    `state` is a ModelState (duck-typed: needs .beta0 and .components with
    atoms carrying .knots and .beta). Accepts scalar or array x; returns a
    float for scalar input, an array otherwise.
    """
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.full(xs.shape, state.beta0, dtype=float)
    for comp in state.components.values():
        for atom in comp.atoms:
            out += atom.beta * basis_values(atom.knots.knots, atom.knots.degree, xs)
    return float(out[0]) if scalar else out
