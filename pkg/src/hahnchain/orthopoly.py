"""Three-term recurrence machinery for finite families of orthogonal polynomials.

Conventions: a recurrence of size ``N + 1`` carries diagonal coefficients
``b[0..N]`` and squared couplings ``u[1..N]`` (stored zero-based as
``u[0..N-1]``). Monic polynomials obey

    x P_n = P_{n+1} + b_n P_n + u_n P_{n-1},

and the orthonormal ones are ``chi_n = P_n / sqrt(h_n)`` with
``h_n = u_1 u_2 ... u_n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, NegativeWeight, NotAGrid

GRID_RESIDUAL_TOL = 1e-6


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MonicRecurrence:
    b: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        b = _frozen(self.b)
        u = _frozen(self.u)
        if b.ndim != 1 or u.ndim != 1:
            raise ValueError("recurrence coefficients must be one-dimensional")
        if b.size < 2:
            raise ValueError(f"recurrence needs at least 2 sites, got {b.size}")
        if u.size != b.size - 1:
            raise ValueError(f"expected {b.size - 1} values of u, got {u.size}")
        if not np.all(u > 0):
            raise ValueError("squared couplings u_n must be positive")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "u", u)

    @property
    def size(self) -> int:
        return self.b.size

    @property
    def N(self) -> int:
        return self.b.size - 1

    @property
    def J(self) -> np.ndarray:
        return np.sqrt(self.u)

    @classmethod
    def from_jacobi(cls, B, J) -> "MonicRecurrence":
        return cls(np.asarray(B, float), np.asarray(J, float) ** 2)


@dataclass(frozen=True)
class GridFunction:
    """Values ``f(x_s)`` on a strictly increasing grid."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = _frozen(self.grid)
        values = np.array(self.values)
        values.setflags(write=False)
        if grid.shape != values.shape:
            raise ValueError("grid and values must have the same shape")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


def eval_monic(rec: MonicRecurrence, n: int, x):
    """Evaluate ``P_n(x)`` by upward recurrence; ``n = N + 1`` gives the
    characteristic polynomial of the Jacobi matrix."""
    if not 0 <= n <= rec.N + 1:
        raise IndexOutOfRange(f"degree {n} outside 0..{rec.N + 1}")
    x = np.asarray(x, dtype=float)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for k in range(n):
        u_k = rec.u[k - 1] if k > 0 else 0.0
        p, p_prev = (x - rec.b[k]) * p - u_k * p_prev, p
    return p[()] if p.ndim == 0 else p


def orthonormal_table(rec: MonicRecurrence, x, upto: int | None = None) -> np.ndarray:
    """Rows ``chi_0(x) .. chi_upto(x)`` (default ``upto = N``).

    Uses the normalized recurrence
    ``chi_{n+1} = ((x - b_n) chi_n - J_n chi_{n-1}) / J_{n+1}``, which stays
    O(1) on the spectrum where ``P_n`` itself would overflow.
    """
    upto = rec.N if upto is None else upto
    if not 0 <= upto <= rec.N:
        raise IndexOutOfRange(f"degree {upto} outside 0..{rec.N}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    J = rec.J
    out = np.empty((upto + 1, x.size))
    out[0] = 1.0
    prev = np.zeros_like(x)
    for n in range(upto):
        J_n = J[n - 1] if n > 0 else 0.0
        out[n + 1] = ((x - rec.b[n]) * out[n] - J_n * prev) / J[n]
        prev = out[n]
    return out


def orthonormal_table_on_roots(rec: MonicRecurrence, roots) -> np.ndarray:
    """``chi_n(x_s)`` for ``n = 0..N`` at roots of ``P_{N+1}``.

    At a root the recurrence also closes at the far end, so it can be run
    downward from ``n = N``. Forward sweeps lose accuracy where an
    eigenvector decays toward ``n = N``; each column takes the forward values
    up to its largest entry and the rescaled backward values beyond it.
    """
    x = np.atleast_1d(np.asarray(roots, dtype=float))
    fwd = orthonormal_table(rec, x)
    N = rec.N
    if N < 1:
        return fwd
    J = rec.J
    bwd = np.empty_like(fwd)
    bwd[N] = 1.0
    bwd[N - 1] = (x - rec.b[N]) / J[N - 1]
    for n in range(N - 1, 0, -1):
        bwd[n - 1] = ((x - rec.b[n]) * bwd[n] - J[n] * bwd[n + 1]) / J[n - 1]
    out = fwd.copy()
    peak = np.argmax(np.abs(fwd), axis=0)
    for s in range(x.size):
        k = peak[s]
        if k < N:
            out[k + 1:, s] = bwd[k + 1:, s] * (fwd[k, s] / bwd[k, s])
    return out


def eval_orthonormal(rec: MonicRecurrence, n: int, x):
    if not 0 <= n <= rec.N:
        raise IndexOutOfRange(f"degree {n} outside 0..{rec.N}")
    scalar = np.ndim(x) == 0
    row = orthonormal_table(rec, x, upto=n)[n]
    return float(row[0]) if scalar else row


def log_norm_products(rec: MonicRecurrence) -> np.ndarray:
    return np.concatenate(([0.0], np.cumsum(np.log(rec.u))))


def norm_products(rec: MonicRecurrence) -> np.ndarray:
    """``[h_0, ..., h_N]`` with ``h_n = u_1 ... u_n``."""
    return np.exp(log_norm_products(rec))


def root_gap_products(grid) -> np.ndarray:
    """``P'_{N+1}(x_s) = prod_{r != s} (x_s - x_r)`` for a monic polynomial with roots ``grid``."""
    x = np.asarray(grid, dtype=float)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    return np.prod(diff, axis=1)


def _log_root_gaps(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    return np.sum(np.log(np.abs(diff)), axis=1), np.prod(np.sign(diff), axis=1)


def weights_from_characteristic(rec: MonicRecurrence, grid) -> np.ndarray:
    """Christoffel weights ``w_s = h_N / (P_N(x_s) P'_{N+1}(x_s))``.

    Everything is carried in log magnitude plus sign, using
    ``P_N = sqrt(h_N) chi_N`` with ``chi_N`` from
    :func:`orthonormal_table_on_roots`, so the result is safe for large ``N``.

    Raises
    ------
    NotAGrid
        If some ``x_s`` is not (numerically) a root of ``P_{N+1}``.
    NegativeWeight
        If a weight comes out nonpositive.
    """
    x = np.asarray(grid, dtype=float)
    if x.shape != (rec.size,):
        raise NotAGrid(f"expected {rec.size} grid points, got {x.size}")
    if np.any(np.diff(x) <= 0):
        raise NotAGrid("grid must be strictly increasing")
    chi = orthonormal_table(rec, x)
    log_h = log_norm_products(rec)
    log_gap, sign_gap = _log_root_gaps(x)

    # P_{N+1}(x_s) = sqrt(h_N) * ((x - b_N) chi_N - J_N chi_{N-1})
    scaled = (x - rec.b[-1]) * chi[-1] - rec.J[-1] * chi[-2]
    with np.errstate(divide="ignore"):
        log_res = np.log(np.abs(scaled)) + 0.5 * log_h[-1]
    bad = log_res > np.log(GRID_RESIDUAL_TOL) + log_gap
    if np.any(bad):
        s = int(np.flatnonzero(bad)[0])
        raise NotAGrid(f"grid point x_{s} = {x[s]!r} is not a root of the characteristic polynomial")

    chi_N = orthonormal_table_on_roots(rec, x)[-1]
    with np.errstate(divide="ignore"):
        log_w = 0.5 * log_h[-1] - np.log(np.abs(chi_N)) - log_gap
    w = np.sign(chi_N) * sign_gap * np.exp(log_w)
    if np.any(~(w > 0)):
        s = int(np.flatnonzero(~(w > 0))[0])
        raise NegativeWeight(f"weight w_{s} = {w[s]!r} is not positive")
    return w


def divided_difference(f: GridFunction):
    """N-th order divided difference ``sum_s f(x_s) / P'_{N+1}(x_s)``.

    Annihilates polynomials of degree below ``N`` and maps ``x**N`` to 1.
    """
    total = np.sum(f.values / root_gap_products(f.grid))
    return complex(total) if np.iscomplexobj(total) else float(total)
