"""Quantum state representations and their coherent-plane amplitudes.

Three interchangeable state forms: a coherent displacement parameter, a
truncated number-basis coefficient vector, and a number-basis density
matrix. All amplitude evaluations accept scalars or numpy arrays of plane
points and are pure, so states can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.special import gammainc, gammaincc, gammainccinv, gammaln

from .errors import DomainError, PrecisionError, UsageError

#: Default number-basis truncation for expansions of displaced states.
DEFAULT_TRUNCATION = 64

#: Plane points with |gamma| above this are assembled in log space. The
#: running product is overflow-free for any radius (its intermediates are
#: overlap magnitudes, all <= 1) and only loses the prefactor to underflow
#: near |gamma| ~ 38.5, so the switch sits well inside that margin.
LOG_SPACE_THRESHOLD = 30.0

#: Required bound on the probability mass dropped by truncation.
TRUNCATION_TAIL_TOL = 1e-14

_NORM_TOL = 1e-10
_HERMITIAN_TOL = 1e-12
_EIGENVALUE_FLOOR = -1e-10


@dataclass(frozen=True)
class CoherentParam:
    """A coherent state, identified by its displacement z."""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError(f"coherent displacement must be finite, got {self.z!r}")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class FockState:
    """A normalized pure state as number-basis coefficients c_0..c_N.

    ``truncation_tail`` records the probability mass discarded when the
    state was produced by truncating an infinite expansion.
    """

    coeffs: np.ndarray
    truncation_tail: float = field(default=0.0, compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size < 1 or not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be a non-empty finite vector")
        norm2 = float(np.sum(np.abs(c) ** 2))
        if abs(norm2 - 1.0) > _NORM_TOL:
            raise DomainError(f"state not normalized: sum |c_n|^2 = {norm2!r}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def truncation(self) -> int:
        return self.coeffs.size - 1


@dataclass(frozen=True)
class DensityMatrix:
    """A mixed state as a number-basis density matrix."""

    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
            raise DomainError("density matrix must be square")
        if not np.all(np.isfinite(rho)):
            raise DomainError("density matrix entries must be finite")
        if np.max(np.abs(rho - rho.conj().T)) > _HERMITIAN_TOL:
            raise DomainError("density matrix must be Hermitian")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > _NORM_TOL:
            raise DomainError(f"density matrix trace must be 1, got {tr!r}")
        evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        if float(np.min(evals)) < _EIGENVALUE_FLOOR:
            raise DomainError(f"density matrix has negative eigenvalue {np.min(evals)!r}")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def truncation(self) -> int:
        return self.dim - 1


StateSpec = Union[CoherentParam, FockState, DensityMatrix]


def _coherent_rows(gammas, n_max: int, force_log=None) -> np.ndarray:
    """Rows of overlaps <gamma|n> = exp(-|g|^2/2) (g*)^n / sqrt(n!).

    Rows with moderate |gamma| use a running product (every intermediate is
    an overlap magnitude, so nothing can overflow); rows beyond
    LOG_SPACE_THRESHOLD are assembled in log space, where the prefactor
    alone would lose range. Shape: (len(gammas), n_max + 1).
    """
    g = np.asarray(gammas, dtype=complex).ravel()
    out = np.empty((g.size, n_max + 1), dtype=complex)
    r = np.abs(g)
    if force_log is None:
        in_log = r > LOG_SPACE_THRESHOLD
    else:
        in_log = np.full(g.shape, bool(force_log))
    plain = ~in_log
    if np.any(plain):
        gp = np.conj(g[plain])
        # Column-major so the per-level recurrence writes contiguously.
        block = np.empty((gp.size, n_max + 1), dtype=complex, order="F")
        block[:, 0] = np.exp(-0.5 * r[plain] ** 2)
        scaled = np.empty(gp.size, dtype=complex)
        for n in range(1, n_max + 1):
            np.multiply(gp, 1.0 / math.sqrt(n), out=scaled)
            np.multiply(block[:, n - 1], scaled, out=block[:, n])
        out[plain] = block
    if np.any(in_log):
        gl = g[in_log]
        rl = r[in_log]
        n = np.arange(n_max + 1)
        safe_r = np.where(rl > 0.0, rl, 1.0)
        log_mag = (-0.5 * rl * rl)[:, None] + np.outer(np.log(safe_r), n) \
            - 0.5 * gammaln(n + 1.0)[None, :]
        block = np.exp(log_mag + 1j * np.outer(-np.angle(gl), n))
        zero = rl == 0.0
        if np.any(zero):
            block[zero, :] = 0.0
            block[zero, 0] = 1.0
        out[in_log] = block
    return out


def coherent_amplitude(gamma, state: FockState):
    """Overlap <gamma|psi> for a number-basis pure state.

    Scalar in, complex out; array in, complex array out.
    """
    if not isinstance(state, FockState):
        raise DomainError("coherent_amplitude expects a FockState")
    g = np.asarray(gamma, dtype=complex)
    amp = _coherent_rows(g.ravel(), state.truncation) @ state.coeffs
    return complex(amp[0]) if g.ndim == 0 else amp.reshape(g.shape)


_CHUNK = 1 << 16


def husimi_q(gamma, state: StateSpec):
    """Phase-space density at gamma: |<gamma|psi>|^2, or <gamma|rho|gamma>.

    For a CoherentParam z this is the analytic Gaussian exp(-|gamma - z|^2).
    Values lie in [0, 1]. Scalar in, float out; array in, array out.
    Large inputs are processed in chunks to bound the overlap-matrix size.
    """
    g = np.asarray(gamma, dtype=complex)
    flat = g.ravel()
    if isinstance(state, CoherentParam):
        q = np.exp(-np.abs(flat - state.z) ** 2)
    elif isinstance(state, FockState):
        q = np.empty(flat.size)
        for i in range(0, flat.size, _CHUNK):
            amp = _coherent_rows(flat[i:i + _CHUNK], state.truncation) @ state.coeffs
            q[i:i + _CHUNK] = np.abs(amp) ** 2
    elif isinstance(state, DensityMatrix):
        q = np.empty(flat.size)
        for i in range(0, flat.size, _CHUNK):
            rows = _coherent_rows(flat[i:i + _CHUNK], state.truncation)
            q[i:i + _CHUNK] = np.real(np.sum((rows @ state.entries) * rows.conj(), axis=1))
    else:
        raise DomainError(f"unsupported state type {type(state).__name__}")
    q = np.clip(q, 0.0, 1.0)
    return float(q[0]) if g.ndim == 0 else q.reshape(g.shape)


def poisson_truncation_tail(z: complex, n_max: int) -> float:
    """Probability mass of a coherent state beyond number level n_max."""
    mu = abs(z) ** 2
    return float(gammainc(n_max + 1, mu))


def fock_expand_coherent(z: complex, n_max: int = DEFAULT_TRUNCATION) -> FockState:
    """Truncated number-basis expansion of the coherent state z.

    Coefficients exp(-|z|^2/2) z^n / sqrt(n!), renormalized after
    truncation. Raises PrecisionError when the discarded Poisson tail
    exceeds TRUNCATION_TAIL_TOL.
    """
    if n_max < 0:
        raise DomainError("truncation must be non-negative")
    tail = poisson_truncation_tail(z, n_max)
    if tail >= TRUNCATION_TAIL_TOL:
        raise PrecisionError(
            f"truncation {n_max} leaves tail {tail:.3e} >= {TRUNCATION_TAIL_TOL} "
            f"for |z| = {abs(z):.3f}")
    coeffs = _coherent_rows([np.conj(z)], n_max)[0]
    coeffs = coeffs / np.linalg.norm(coeffs)
    return FockState(coeffs, truncation_tail=tail)


def make_cat_state(z: complex, sign: int, n_max: int = DEFAULT_TRUNCATION) -> FockState:
    """Normalized superposition of |z> and sign*|-z> in the number basis."""
    if sign not in (+1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    if z == 0 and sign == -1:
        raise DomainError("odd superposition of |0> with itself is the zero vector")
    tail = poisson_truncation_tail(z, n_max)
    if tail >= TRUNCATION_TAIL_TOL:
        raise PrecisionError(
            f"truncation {n_max} leaves tail {tail:.3e} >= {TRUNCATION_TAIL_TOL} "
            f"for |z| = {abs(z):.3f}")
    raw = _coherent_rows([np.conj(z)], n_max)[0] + sign * _coherent_rows([np.conj(-z)], n_max)[0]
    norm = np.linalg.norm(raw)
    if norm < 1e-150:
        raise DomainError("degenerate superposition: vanishing norm")
    return FockState(raw / norm, truncation_tail=tail)


def husimi_centroid(state: StateSpec) -> complex:
    """Mean of the phase-space density: the expectation of the lowering operator."""
    if isinstance(state, CoherentParam):
        return state.z
    if isinstance(state, FockState):
        c = state.coeffs
        n = np.arange(1, c.size)
        return complex(np.sum(np.conj(c[:-1]) * c[1:] * np.sqrt(n)))
    if isinstance(state, DensityMatrix):
        sub = np.diagonal(state.entries, offset=-1)
        n = np.arange(1, state.dim)
        return complex(np.sum(sub * np.sqrt(n)))
    raise DomainError(f"unsupported state type {type(state).__name__}")


def fock_envelope_tail_mass(n_max: int, distance: float) -> float:
    """Upper bound on the plane-integrated density (measure d^2g/pi) beyond
    |gamma| = distance, for any state supported on levels 0..n_max.

    Valid for distance^2 >= n_max, where the per-level envelope peaks at
    the top level; returns inf when the bound does not apply.
    """
    if distance <= 0.0 or distance * distance < n_max:
        return math.inf
    return float((n_max + 1) * gammaincc(n_max + 1, distance * distance))


def fock_tail_radius(n_max: int, tol: float) -> float:
    """A radius at which fock_envelope_tail_mass certifies <= tol.

    Padded slightly past the exact inversion point so the certificate
    survives rounding.
    """
    if not 0 < tol < 1:
        raise DomainError("tolerance must be in (0, 1)")
    x = float(gammainccinv(n_max + 1, tol / (n_max + 1))) * (1.0 + 1e-9)
    return math.sqrt(max(x, float(n_max), 1.0))


def _parse_reals(text: str, count: int, spec: str) -> list:
    parts = text.split(",")
    if len(parts) != count:
        raise UsageError(f"expected {count} comma-separated values in {spec!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"bad number in state spec {spec!r}: {exc}") from None


def load_density_matrix(path: str) -> DensityMatrix:
    """Read a density matrix from a whitespace-separated text file.

    One row per line; entries written like ``0.5``, ``0.25+0.1i`` or
    ``-0.3i``. I/O failures propagate as OSError; malformed content raises
    UsageError; an invalid matrix raises DomainError.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    rows = []
    for ln in lines:
        if not ln:
            continue
        try:
            rows.append([complex(tok.replace("i", "j")) for tok in ln.split()])
        except ValueError as exc:
            raise UsageError(f"bad matrix entry in {path!r}: {exc}") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise UsageError(f"matrix in {path!r} is not square")
    return DensityMatrix(np.array(rows, dtype=complex))


def parse_state_spec(spec: str, n_max: int = DEFAULT_TRUNCATION) -> StateSpec:
    """Parse the state mini-language used by the command line.

    Forms: ``coherent:RE,IM``, ``fock:N``, ``cat:RE,IM,+|-``, ``mixed:PATH``.
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise UsageError(f"state spec {spec!r} has no ':'")
    if kind == "coherent":
        re_z, im_z = _parse_reals(rest, 2, spec)
        return CoherentParam(complex(re_z, im_z))
    if kind == "fock":
        try:
            n = int(rest)
        except ValueError:
            raise UsageError(f"bad level number in {spec!r}") from None
        if n < 0 or n > 1024:
            raise UsageError(f"level number must be in [0, 1024], got {n}")
        coeffs = np.zeros(n + 1, dtype=complex)
        coeffs[n] = 1.0
        return FockState(coeffs)
    if kind == "cat":
        parts = rest.rsplit(",", 1)
        if len(parts) != 2 or parts[1] not in ("+", "-"):
            raise UsageError(f"cat spec must end in ',+' or ',-': {spec!r}")
        re_z, im_z = _parse_reals(parts[0], 2, spec)
        sign = +1 if parts[1] == "+" else -1
        try:
            return make_cat_state(complex(re_z, im_z), sign, n_max)
        except DomainError as exc:
            raise UsageError(str(exc)) from None
    if kind == "mixed":
        if not rest:
            raise UsageError("mixed spec needs a file path")
        return load_density_matrix(rest)
    raise UsageError(f"unknown state kind {kind!r} in {spec!r}")
