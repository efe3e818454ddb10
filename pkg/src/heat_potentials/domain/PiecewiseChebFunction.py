from __future__ import annotations

from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from heat_potentials.exceptions import DegeneratePiece, InvalidSpec, UnsortedInput


def first_kind_nodes(order: int) -> np.ndarray:
    """Ascending Chebyshev points of the first kind on [-1, 1] (order + 1 of them, endpoints excluded)."""
    return np.sort(chebyshev.chebpts1(order + 1))


def _coefficients_from_values(values: np.ndarray, order: int) -> np.ndarray:
    # Same discrete transform numpy's chebinterpolate applies at first-kind points.
    nodes = first_kind_nodes(order)
    vander = chebyshev.chebvander(nodes, order)
    coeffs = vander.T @ values
    coeffs[0] /= order + 1
    coeffs[1:] /= 0.5 * (order + 1)
    return coeffs


class PiecewiseChebFunction(BaseModel):
    """Piecewise Chebyshev series on x_0 < ... < x_P.

    Piece j covers [x_j, x_{j+1}) and the last piece is closed, so a breakpoint is
    evaluated with the piece on its right. Outside [x_0, x_P] the function is zero
    unless ``extrapolate`` is requested.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    breakpoints: np.ndarray
    coeffs: list[np.ndarray]

    @field_validator("breakpoints", mode="before")
    @classmethod
    def _as_float_array(cls, value):
        return np.atleast_1d(np.asarray(value, dtype=float))

    @field_validator("coeffs", mode="before")
    @classmethod
    def _as_float_arrays(cls, value):
        return [np.atleast_1d(np.asarray(c, dtype=float)) for c in value]

    @model_validator(mode="after")
    def _check_pieces(self) -> PiecewiseChebFunction:
        if self.breakpoints.size < 2:
            raise InvalidSpec("need at least two breakpoints")
        if len(self.coeffs) != self.breakpoints.size - 1:
            raise InvalidSpec(f"{len(self.coeffs)} coefficient sets for {self.breakpoints.size - 1} pieces")
        widths = np.diff(self.breakpoints)
        if np.any(widths < 0):
            raise UnsortedInput("breakpoints must be increasing")
        if np.any(widths == 0):
            raise DegeneratePiece(f"zero-width piece at x={self.breakpoints[np.argmin(widths)]}")
        return self

    @classmethod
    def from_function(
        cls, func: Callable[[np.ndarray], np.ndarray], breakpoints, order: int
    ) -> PiecewiseChebFunction:
        breakpoints = np.asarray(breakpoints, dtype=float)
        nodes = first_kind_nodes(order)
        coeffs = []
        for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
            x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes
            coeffs.append(_coefficients_from_values(np.asarray(func(x), dtype=float), order))
        return cls(breakpoints=breakpoints, coeffs=coeffs)

    @classmethod
    def from_node_values(cls, breakpoints, values: np.ndarray) -> PiecewiseChebFunction:
        """Build from samples at the first-kind nodes of every piece; ``values`` has shape (P, order + 1)."""
        values = np.atleast_2d(np.asarray(values, dtype=float))
        order = values.shape[1] - 1
        return cls(breakpoints=breakpoints, coeffs=[_coefficients_from_values(row, order) for row in values])

    @staticmethod
    def interpolation_nodes(breakpoints, order: int) -> np.ndarray:
        """First-kind nodes of every piece as an array of shape (P, order + 1)."""
        breakpoints = np.asarray(breakpoints, dtype=float)
        lo, hi = breakpoints[:-1, None], breakpoints[1:, None]
        return 0.5 * (lo + hi) + 0.5 * (hi - lo) * first_kind_nodes(order)[None, :]

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def n_pieces(self) -> int:
        return len(self.coeffs)

    @property
    def orders(self) -> list[int]:
        return [c.size - 1 for c in self.coeffs]

    def piece_index(self, x, side: str = "right") -> np.ndarray:
        """Index of the piece used at ``x``; ``side="left"`` picks the piece ending at a breakpoint."""
        idx = np.searchsorted(self.breakpoints, np.asarray(x, dtype=float), side=side) - 1
        return np.clip(idx, 0, self.n_pieces - 1)

    def local_coordinate(self, x, idx) -> np.ndarray:
        lo = self.breakpoints[idx]
        hi = self.breakpoints[idx + 1]
        return 2.0 * (np.asarray(x, dtype=float) - lo) / (hi - lo) - 1.0

    def __call__(self, x, side: str = "right", extrapolate: bool = False) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.zeros_like(x)
        idx = self.piece_index(x, side=side)
        active = np.ones(x.shape, dtype=bool)
        if not extrapolate:
            lo, hi = self.domain
            active = (x >= lo) & (x <= hi)
        for j in np.unique(idx[active]):
            mask = active & (idx == j)
            out[mask] = chebyshev.chebval(self.local_coordinate(x[mask], j), self.coeffs[j])
        return out[0] if scalar else out

    def evaluate_piece(self, j: int, x) -> np.ndarray:
        """Evaluate the polynomial of piece ``j`` at ``x``, extended naturally beyond the piece."""
        return chebyshev.chebval(self.local_coordinate(x, j), self.coeffs[j])

    def derivative(self, m: int = 1) -> PiecewiseChebFunction:
        widths = np.diff(self.breakpoints)
        coeffs = [
            chebyshev.chebder(c, m, scl=2.0 / w) if c.size > m else np.zeros(1) for c, w in zip(self.coeffs, widths)
        ]
        return PiecewiseChebFunction(breakpoints=self.breakpoints, coeffs=coeffs)

    def integral(self, lo: float | None = None, hi: float | None = None) -> float:
        """Definite integral over [lo, hi] intersected with the domain."""
        x0, x1 = self.domain
        lo = x0 if lo is None else max(lo, x0)
        hi = x1 if hi is None else min(hi, x1)
        if hi <= lo:
            return 0.0
        total = 0.0
        for j in range(self.n_pieces):
            a, b = self.breakpoints[j], self.breakpoints[j + 1]
            left, right = max(a, lo), min(b, hi)
            if right <= left:
                continue
            anti = chebyshev.chebint(self.coeffs[j], lbnd=-1)
            ends = self.local_coordinate(np.array([left, right]), j)
            total += 0.5 * (b - a) * float(np.diff(chebyshev.chebval(ends, anti))[0])
        return total

    def restrict(self, lo: float, hi: float) -> PiecewiseChebFunction:
        """Same function on [lo, hi] intersected with the domain; pieces cut at the new ends are re-expanded exactly."""
        x0, x1 = self.domain
        lo, hi = max(lo, x0), min(hi, x1)
        if hi <= lo:
            raise DegeneratePiece(f"empty restriction [{lo}, {hi}]")
        inner = self.breakpoints[(self.breakpoints > lo) & (self.breakpoints < hi)]
        breakpoints = np.concatenate(([lo], inner, [hi]))
        coeffs = []
        for a, b in zip(breakpoints[:-1], breakpoints[1:]):
            j = int(self.piece_index(0.5 * (a + b)))
            order = self.coeffs[j].size - 1
            x = 0.5 * (a + b) + 0.5 * (b - a) * first_kind_nodes(order)
            coeffs.append(_coefficients_from_values(self.evaluate_piece(j, x), order))
        return PiecewiseChebFunction(breakpoints=breakpoints, coeffs=coeffs)

    def affine(self, center: float, half_width: float) -> PiecewiseChebFunction:
        """The function s -> f(center + half_width * s)."""
        return PiecewiseChebFunction(
            breakpoints=(self.breakpoints - center) / half_width, coeffs=[c.copy() for c in self.coeffs]
        )

    def jumps(self) -> tuple[np.ndarray, np.ndarray]:
        """Interior breakpoints and the jumps f(x+) - f(x-) across them."""
        inner = self.breakpoints[1:-1]
        if inner.size == 0:
            return inner, inner
        right = np.array([chebyshev.chebval(-1.0, c) for c in self.coeffs[1:]])
        left = np.array([chebyshev.chebval(1.0, c) for c in self.coeffs[:-1]])
        return inner, right - left
