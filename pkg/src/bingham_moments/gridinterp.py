"""Near-region evaluation by blended two-pass Hermite interpolation.

The partition value Z00 and the five moment ratios are stored on square
lattices over [-d, 0]^2 together with both first partial derivatives; a query
interpolates inside one cell by averaging the two axis-order cubic Hermite
constructions.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, TableStateError

QUANTITIES = ("Z00", "Z20/Z00", "Z02/Z00", "Z40/Z00", "Z04/Z00", "Z22/Z00")


@dataclass(frozen=True)
class HermiteGrid2D:
    """Value/derivative lattice for one quantity on [-extent, 0]^2."""

    spacing: float
    extent: float
    quantity_id: str
    f: np.ndarray = field(repr=False)
    dfdb1: np.ndarray = field(repr=False)
    dfdb2: np.ndarray = field(repr=False)

    def __post_init__(self):
        nodes = int(round(self.extent / self.spacing)) + 1
        if abs(self.extent / self.spacing - (nodes - 1)) > 1e-9:
            raise DomainError(
                f"spacing {self.spacing} does not divide extent {self.extent}")
        for arr in (self.f, self.dfdb1, self.dfdb2):
            if arr.shape != (nodes, nodes):
                raise DomainError(
                    f"grid arrays must be ({nodes}, {nodes}), got {arr.shape}")

    def node_coord(self, i: int) -> float:
        return -self.extent + i * self.spacing


def hermite3(x: float, x1: float, x2: float, f1: float, f2: float,
             d1: float, d2: float) -> float:
    """Cubic Hermite value matching f and f' at both endpoints of [x1, x2]."""
    if not x1 < x2:
        raise DomainError(f"requires x1 < x2, got {x1}, {x2}")
    return kernels.hermite3_kernel(x, x1, x2, f1, f2, d1, d2)


def blended_cell_eval(cell: HermiteGrid2D, i: int, j: int,
                      b1: float, b2: float) -> float:
    """Blended Hermite value inside lattice cell (i, j) of ``cell``."""
    x1 = cell.node_coord(i)
    x2 = cell.node_coord(i + 1)
    y1 = cell.node_coord(j)
    y2 = cell.node_coord(j + 1)
    if not (x1 <= b1 <= x2 and y1 <= b2 <= y2):
        raise DomainError(f"({b1}, {b2}) outside cell [{x1},{x2}]x[{y1},{y2}]")
    F, FX, FY = cell.f, cell.dfdb1, cell.dfdb2
    return kernels.blended_cell_kernel(
        b1, b2, x1, x2, y1, y2,
        F[i, j], F[i + 1, j], F[i, j + 1], F[i + 1, j + 1],
        FX[i, j], FX[i + 1, j], FX[i, j + 1], FX[i + 1, j + 1],
        FY[i, j], FY[i + 1, j], FY[i, j + 1], FY[i + 1, j + 1])


def z_near(quantity: str, b1: float, b2: float, tables) -> float:
    """Interpolated Z00 or moment ratio for -d < b1, b2 <= 0."""
    if tables is None:
        raise TableStateError("precomputed tables are required for near-region queries")
    if quantity not in QUANTITIES:
        raise DomainError(f"unknown quantity {quantity!r}; expected one of {QUANTITIES}")
    d = tables.header.d
    if not (-d < b1 <= 0 and -d < b2 <= 0):
        raise DomainError(
            f"near region requires b in (-{d}, 0], got ({b1}, {b2})")
    if quantity == "Z00":
        g = tables.z00_grid
    else:
        g = tables.ratio_grids[QUANTITIES.index(quantity) - 1]
    return kernels.grid_eval_kernel(g.f, g.dfdb1, g.dfdb2, g.extent, g.spacing,
                                    float(b1), float(b2))
