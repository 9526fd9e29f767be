"""Geometry of the phase-space lattice.

One lattice point per cell of area 2*pi*hbar. All overlap computations work
in the dimensionless coherent-plane coordinate

    beta = (x + i*(lambda^2/hbar)*p) / (lambda*sqrt(2)),

in which the unit cell is the rectangle
[-half_width_x, half_width_x] x [-half_width_p, half_width_p] and lattice
points sit at beta = m*(2*half_width_x) + i*n*(2*half_width_p).

Internally the canonical form lambda = hbar = 1 with b = c*sqrt(2*pi) is
enough for every computation; physical-unit inputs only rescale coordinates
on the way in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError

SQRT2 = math.sqrt(2.0)
SQRT_2PI = math.sqrt(2.0 * math.pi)
TWO_PI = 2.0 * math.pi

_CELL_SLACK = 1e-12


class LatticeIndex(NamedTuple):
    m: int
    n: int


class CellPoint(NamedTuple):
    """A point (X, P) inside the unit cell, in physical units."""
    x_bar: float
    p_bar: float


@dataclass(frozen=True)
class LatticeConfig:
    """Lattice parameters: oscillator width, hbar and position spacing b.

    The dimensionless aspect ratio c = b/(lam*sqrt(2*pi)) controls the cell
    shape; c = 1 is the square lattice. The cell area in (X, P) is always
    2*pi*hbar.
    """

    lam: float = 1.0
    hbar: float = 1.0
    b: float = SQRT_2PI

    def __post_init__(self):
        for name in ("lam", "hbar", "b"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite real, got {v!r}")

    @classmethod
    def from_aspect(cls, c: float) -> "LatticeConfig":
        if not (isinstance(c, (int, float)) and math.isfinite(c) and c > 0):
            raise DomainError(f"aspect ratio must be a positive finite real, got {c!r}")
        return cls(lam=1.0, hbar=1.0, b=c * SQRT_2PI)

    @classmethod
    def from_physical(cls, lam: float, hbar: float, b: float) -> "LatticeConfig":
        return cls(lam=lam, hbar=hbar, b=b)

    # Both half-widths are defined through the same beta maps used for
    # arbitrary points, so cell corners land exactly on them.
    def _beta_re(self, x: float) -> float:
        return x / (self.lam * SQRT2)

    def _beta_im(self, p: float) -> float:
        return self.lam * p / (SQRT2 * self.hbar)

    @property
    def c(self) -> float:
        return self.b / (self.lam * SQRT_2PI)

    @property
    def half_width_x(self) -> float:
        return self._beta_re(self.b / 2.0)

    @property
    def half_width_p(self) -> float:
        return self._beta_im(math.pi * self.hbar / self.b)

    @property
    def cell_area(self) -> float:
        """Cell area in (X, P) coordinates; equals 2*pi*hbar."""
        return self.b * (TWO_PI * self.hbar / self.b)


def alpha_of_phase_point(cfg: LatticeConfig, x: float, p: float) -> complex:
    """Dimensionless coherent-plane coordinate of the phase-space point (x, p)."""
    return complex(cfg._beta_re(x), cfg._beta_im(p))


def lattice_point(cfg: LatticeConfig, idx: LatticeIndex) -> complex:
    """Coherent-plane position of lattice site (m, n).

    Re = m*b/(sqrt(2)*lam), Im = n*pi*sqrt(2)*lam/b; identical to
    alpha_of_phase_point at (m*b, n*2*pi*hbar/b).
    """
    m, n = idx
    return alpha_of_phase_point(cfg, m * cfg.b, n * (TWO_PI * cfg.hbar / cfg.b))


def beta_of_cell_point(cfg: LatticeConfig, pt: CellPoint) -> complex:
    """Coherent-plane coordinate of a point inside the (closed) unit cell."""
    x_bar, p_bar = pt
    x_lim = cfg.b / 2.0
    p_lim = math.pi * cfg.hbar / cfg.b
    if abs(x_bar) > x_lim * (1.0 + _CELL_SLACK) or abs(p_bar) > p_lim * (1.0 + _CELL_SLACK):
        raise DomainError(
            f"point ({x_bar}, {p_bar}) lies outside the unit cell "
            f"[-{x_lim}, {x_lim}] x [-{p_lim}, {p_lim}]")
    return alpha_of_phase_point(cfg, x_bar, p_bar)
