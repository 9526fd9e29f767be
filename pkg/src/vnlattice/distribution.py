"""Cell-averaged probability distributions on the lattice.

Two backends produce p(m, n): a closed form for coherent states (a product
of two erf intervals) and tensor Gauss-Legendre quadrature of the
phase-space density over each unit cell for arbitrary states. The closed
form is the exact value of the cell integral, which makes backend
agreement a strong correctness check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from .errors import DivergenceError, DomainError, PrecisionError
from .lattice import LatticeConfig, LatticeIndex, lattice_point
from .numerics import erf_interval, gauss_legendre
from .states import (CoherentParam, DensityMatrix, FockState, StateSpec,
                     fock_envelope_tail_mass, husimi_centroid, husimi_q)

#: Cell values computed at order and 2*order must agree this closely.
QUAD_AGREEMENT_TOL = 1e-11

#: Default ring growth limit: |m - m0|, |n - n0| <= this.
MAX_WINDOW_EXTENT = 64

_MASS_SLACK = 1e-10


class ClosedFormCell(NamedTuple):
    """Centered erf-interval parameters of one cell for a coherent state."""
    rho_m: float
    sigma_n: float
    half_width_x: float
    half_width_p: float


class LatticeWindow(NamedTuple):
    m_min: int
    m_max: int
    n_min: int
    n_max: int

    def cells(self) -> Iterable[Tuple[int, int]]:
        for m in range(self.m_min, self.m_max + 1):
            for n in range(self.n_min, self.n_max + 1):
                yield (m, n)

    def boundary(self) -> List[Tuple[int, int]]:
        out = []
        for m in range(self.m_min, self.m_max + 1):
            for n in range(self.n_min, self.n_max + 1):
                if m in (self.m_min, self.m_max) or n in (self.n_min, self.n_max):
                    out.append((m, n))
        return out


@dataclass(frozen=True)
class LatticeDistribution:
    """Finite window of cell probabilities with a certified tail bound.

    ``quad_residual`` is the largest order-doubling disagreement seen while
    building (0 for the closed form), used downstream as a per-cell error
    scale.
    """

    window: LatticeWindow
    probs: Dict[Tuple[int, int], float]
    tail_mass_bound: float
    backend: str
    config: LatticeConfig
    quad_order: Optional[int] = None
    quad_residual: float = 0.0

    def total_mass(self) -> float:
        return float(sum(self.probs.values()))

    def entries(self) -> List[Tuple[int, int, float]]:
        return [(m, n, self.probs[(m, n)]) for m, n in sorted(self.probs)]

    def boundary_max(self) -> float:
        return max((self.probs[c] for c in self.window.boundary()), default=0.0)


def _coerce_z(z) -> complex:
    if isinstance(z, CoherentParam):
        return z.z
    return complex(z)


def closed_form_cell(cfg: LatticeConfig, z, idx: LatticeIndex) -> ClosedFormCell:
    zz = _coerce_z(z)
    wx = cfg.half_width_x
    wp = cfg.half_width_p
    m, n = idx
    return ClosedFormCell(m * (2.0 * wx) - zz.real, n * (2.0 * wp) - zz.imag, wx, wp)


def closed_form_prob(cfg: LatticeConfig, z, idx: LatticeIndex) -> float:
    """Exact cell probability for a coherent state: a product of two
    erf intervals of cell width centered on the displaced lattice site."""
    cell = closed_form_cell(cfg, z, idx)
    fx = erf_interval(cell.rho_m - cell.half_width_x, cell.rho_m + cell.half_width_x)
    fp = erf_interval(cell.sigma_n - cell.half_width_p, cell.sigma_n + cell.half_width_p)
    return 0.25 * fx * fp


def _cell_grid(cfg: LatticeConfig, order: int):
    ru = gauss_legendre(order, -cfg.half_width_x, cfg.half_width_x)
    rv = gauss_legendre(order, -cfg.half_width_p, cfg.half_width_p)
    offsets = (ru.nodes[:, None] + 1j * rv.nodes[None, :]).ravel()
    weights = (ru.weights[:, None] * rv.weights[None, :]).ravel()
    return offsets, weights


def _cells_average(cfg: LatticeConfig, state: StateSpec,
                   indices: List[Tuple[int, int]], order: int) -> np.ndarray:
    """Cell averages of the phase-space density for many cells at once."""
    offsets, weights = _cell_grid(cfg, order)
    centers = np.array([lattice_point(cfg, LatticeIndex(m, n)) for m, n in indices])
    grid = centers[:, None] + offsets[None, :]
    q = husimi_q(grid, state)
    return np.clip(q @ weights / math.pi, 0.0, 1.0)


def averaged_prob_quadrature(cfg: LatticeConfig, state: StateSpec,
                             idx: LatticeIndex, order: int = 32) -> float:
    """Cell probability by tensor quadrature of the phase-space density.

    Evaluates at the given order and at twice the order; the two must agree
    within QUAD_AGREEMENT_TOL (the integrand is entire, so disagreement
    signals misconfiguration). Returns the doubled-order value.
    """
    if order < 2:
        raise DomainError(f"quadrature order must be >= 2, got {order}")
    coarse = float(_cells_average(cfg, state, [tuple(idx)], order)[0])
    fine = float(_cells_average(cfg, state, [tuple(idx)], 2 * order)[0])
    if abs(coarse - fine) >= QUAD_AGREEMENT_TOL:
        raise PrecisionError(
            f"cell {tuple(idx)}: order {order} and {2 * order} disagree by "
            f"{abs(coarse - fine):.3e}", coarse=coarse, fine=fine)
    return fine


def unaveraged_q(cfg: LatticeConfig, state: StateSpec, idx: LatticeIndex) -> float:
    """Pointwise phase-space density at the lattice site itself (does not
    sum to 1 over the lattice; the cell averages do)."""
    return husimi_q(lattice_point(cfg, LatticeIndex(*idx)), state)


def orthonormality_integral(cfg: LatticeConfig, a: LatticeIndex, b: LatticeIndex,
                            order: int = 32) -> complex:
    """Cell average of the phase-exact overlap between the displaced-site
    states at indices a and b; equals delta_ab for the exact integral.

    The integrand combines the displacement composition phase with the
    coherent overlap <g|g'> = exp(-|g|^2/2 - |g'|^2/2 + conj(g) g').
    """
    if order < 2:
        raise DomainError(f"quadrature order must be >= 2, got {order}")

    alpha_a = lattice_point(cfg, LatticeIndex(*a))
    alpha_b = lattice_point(cfg, LatticeIndex(*b))

    def value(k: int) -> complex:
        offsets, weights = _cell_grid(cfg, k)
        phase = np.exp(1j * ((alpha_b - alpha_a) * np.conj(offsets)).imag)
        ga = alpha_a + offsets
        gb = alpha_b + offsets
        overlap = np.exp(-0.5 * np.abs(ga) ** 2 - 0.5 * np.abs(gb) ** 2
                         + np.conj(ga) * gb)
        return complex(np.dot(weights, phase * overlap) / math.pi)

    coarse = value(order)
    fine = value(2 * order)
    if abs(coarse - fine) >= QUAD_AGREEMENT_TOL:
        raise PrecisionError(
            f"overlap cell average at orders {order}/{2 * order} disagree by "
            f"{abs(coarse - fine):.3e}", coarse=coarse, fine=fine)
    return fine


def _closed_form_tail(cfg: LatticeConfig, z: complex, window: LatticeWindow):
    """Exact mass outside the window for a coherent state, formed from
    one-sided erf tails so nothing cancels. Also reports which axes should
    grow next (the one with the dominant tail, or both when comparable)."""
    wx = cfg.half_width_x
    wp = cfg.half_width_p
    rho_lo = window.m_min * (2.0 * wx) - z.real
    rho_hi = window.m_max * (2.0 * wx) - z.real
    sig_lo = window.n_min * (2.0 * wp) - z.imag
    sig_hi = window.n_max * (2.0 * wp) - z.imag
    s_m = erf_interval(rho_lo - wx, rho_hi + wx)
    t_m = erf_interval(-math.inf, rho_lo - wx) + erf_interval(rho_hi + wx, math.inf)
    s_n = erf_interval(sig_lo - wp, sig_hi + wp)
    t_n = erf_interval(-math.inf, sig_lo - wp) + erf_interval(sig_hi + wp, math.inf)
    tail = 0.25 * (s_m * t_n + t_m * s_n + t_m * t_n)
    return tail, 2.0 * t_m >= t_n, 2.0 * t_n >= t_m


def _envelope_tail(cfg: LatticeConfig, n_max: int, window: LatticeWindow):
    """Number-state envelope bound on the mass outside the window region,
    plus grow flags for the axis with the smaller origin clearance."""
    wx = cfg.half_width_x
    wp = cfg.half_width_p
    x_cov = min((2 * window.m_max + 1) * wx, -(2 * window.m_min - 1) * wx)
    y_cov = min((2 * window.n_max + 1) * wp, -(2 * window.n_min - 1) * wp)
    d0 = min(x_cov, y_cov)
    tail = fock_envelope_tail_mass(n_max, d0) if d0 > 0.0 else math.inf
    slack = 1e-9 * max(wx, wp)
    return tail, x_cov <= y_cov + slack, y_cov <= x_cov + slack


def build_distribution(cfg: LatticeConfig, state: StateSpec, tail_tol: float,
                       order: int = 32, max_extent: int = MAX_WINDOW_EXTENT) -> LatticeDistribution:
    """Grow a window of cells around the state's centroid until the
    boundary ring carries less than tail_tol/10 and a tail estimate
    certifies the mass outside at <= tail_tol.

    Coherent states use the closed form (exact tails via erf); all other
    states use cell quadrature with a number-state envelope tail bound.
    """
    if not (isinstance(tail_tol, (int, float)) and 0.0 < tail_tol <= 1e-3):
        raise DomainError(f"tail_tol must lie in (0, 1e-3], got {tail_tol!r}")
    if not isinstance(state, (CoherentParam, FockState, DensityMatrix)):
        raise DomainError(f"unsupported state type {type(state).__name__}")

    closed = isinstance(state, CoherentParam)
    centroid = husimi_centroid(state)
    m0 = round(centroid.real / (2.0 * cfg.half_width_x))
    n0 = round(centroid.imag / (2.0 * cfg.half_width_p))

    probs: Dict[Tuple[int, int], float] = {}
    residual = 0.0

    def add_cells(cells: List[Tuple[int, int]]):
        nonlocal residual
        if not cells:
            return
        if closed:
            for c in cells:
                probs[c] = min(max(closed_form_prob(cfg, state, LatticeIndex(*c)), 0.0), 1.0)
            return
        coarse = _cells_average(cfg, state, cells, order)
        fine = _cells_average(cfg, state, cells, 2 * order)
        worst = int(np.argmax(np.abs(coarse - fine)))
        gap = float(abs(coarse[worst] - fine[worst]))
        if gap >= QUAD_AGREEMENT_TOL:
            raise PrecisionError(
                f"cell {cells[worst]}: order {order} and {2 * order} disagree by {gap:.3e}",
                coarse=float(coarse[worst]), fine=float(fine[worst]))
        residual = max(residual, gap)
        for c, p in zip(cells, fine):
            probs[c] = float(p)

    window = LatticeWindow(m0, m0, n0, n0)
    add_cells([(m0, n0)])
    while True:
        ring_mass = sum(probs[c] for c in window.boundary())
        tail, grow_m, grow_n = (_closed_form_tail(cfg, state.z, window) if closed
                                else _envelope_tail(cfg, state.truncation, window))
        if ring_mass < tail_tol / 10.0 and tail <= tail_tol:
            break
        if not (grow_m or grow_n):
            grow_m = grow_n = True
        over_m = grow_m and (window.m_max - m0 >= max_extent)
        over_n = grow_n and (window.n_max - n0 >= max_extent)
        if over_m or over_n:
            raise DivergenceError(
                f"window exceeded extent {max_extent} without certifying tail <= "
                f"{tail_tol} (state too spread, or tolerance too tight)")
        window = LatticeWindow(window.m_min - grow_m, window.m_max + grow_m,
                               window.n_min - grow_n, window.n_max + grow_n)
        add_cells([c for c in window.cells() if c not in probs])

    total = sum(probs.values())
    if total > 1.0 + _MASS_SLACK or total + tail < 1.0 - _MASS_SLACK:
        raise PrecisionError(
            f"window mass {total!r} with tail bound {tail!r} violates normalization")
    return LatticeDistribution(
        window=window, probs=probs, tail_mass_bound=float(tail),
        backend="closed_form" if closed else "quadrature", config=cfg,
        quad_order=None if closed else order, quad_residual=residual)


def distribution_document(dist: LatticeDistribution) -> dict:
    """Plain-dict form of a distribution, entries sorted by (m, n)."""
    cfg = dist.config
    return {
        "config": {"lambda": cfg.lam, "hbar": cfg.hbar, "b": cfg.b, "c": cfg.c},
        "backend": dist.backend,
        "quad_order": dist.quad_order,
        "window": {"m_min": dist.window.m_min, "m_max": dist.window.m_max,
                   "n_min": dist.window.n_min, "n_max": dist.window.n_max},
        "entries": [{"m": m, "n": n, "p": p} for m, n, p in dist.entries()],
        "tail_mass_bound": dist.tail_mass_bound,
    }
