"""Diagonalization of Jacobi operators and assembly of spectral data."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .chain import JacobiOperator
from .errors import ConvergenceFailure, InvalidSpec
from .hahn_m1 import ordered_spectrum
from .orthopoly import orthonormal_table_on_roots, weights_from_characteristic

_EPS = np.finfo(float).eps
DEGENERACY_TOL = 1e-12


class SpectralMode(str, enum.Enum):
    NUMERIC = "numeric"
    ANALYTIC_GRID = "analytic"


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigenvalues ``x_s`` (ascending), weights ``w_s`` and ``chi_table[n, s] = chi_n(x_s)``."""

    eigenvalues: np.ndarray
    weights: np.ndarray
    chi_table: np.ndarray

    def __post_init__(self):
        for name in ("eigenvalues", "weights", "chi_table"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = self.eigenvalues.size
        if self.weights.shape != (n,) or self.chi_table.shape != (n, n):
            raise ValueError("inconsistent spectral data shapes")
        if np.any(np.diff(self.eigenvalues) <= 0):
            raise ValueError("eigenvalues must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    @property
    def n_sites(self) -> int:
        return self.eigenvalues.size

    @property
    def N(self) -> int:
        return self.eigenvalues.size - 1

    @property
    def eigenvectors(self) -> np.ndarray:
        """Orthogonal matrix with columns ``|x_s>``; entry ``[n, s] = sqrt(w_s) chi_n(x_s)``."""
        return self.chi_table * np.sqrt(self.weights)[None, :]


def _tql2(d: np.ndarray, e: np.ndarray, z: np.ndarray, max_sweeps: int) -> None:
    """Implicit QL with Wilkinson-type shifts, in place.

    ``d`` diagonal, ``e[i]`` couples ``i`` and ``i+1`` (``e[-1]`` must be 0),
    ``z`` accumulates the rotations (start from the identity).
    Follows the EISPACK ``tql2`` organization.
    """
    n = d.size
    f = 0.0
    tst1 = 0.0
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n - 1 and abs(e[m]) > _EPS * tst1:
            m += 1
        if m > l:
            sweeps = 0
            while True:
                sweeps += 1
                if sweeps > max_sweeps:
                    raise ConvergenceFailure(f"QL iteration did not converge for eigenvalue {l}")
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = math.hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                d[l + 2:] -= h
                f += h

                p = d[m]
                c = c2 = c3 = 1.0
                el1 = e[l + 1]
                s = s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = math.hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    zi = z[:, i].copy()
                    zi1 = z[:, i + 1].copy()
                    z[:, i + 1] = s * zi + c * zi1
                    z[:, i] = c * zi - s * zi1
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= _EPS * tst1:
                    break
        d[l] += f
        e[l] = 0.0


def eig_tridiagonal(op: JacobiOperator, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Jacobi operator.

    Returns ascending eigenvalues and an orthogonal matrix whose column ``s``
    is the eigenvector for ``x_s``, signed so its first nonzero component is
    positive (entries below ``1e-14`` of the column maximum count as zero). Output is a deterministic function of the input bits.

    Raises
    ------
    ConvergenceFailure
        When an eigenvalue needs more than ``max_sweeps`` QL sweeps, or two
        eigenvalues are closer than ``1e-12 * ||J||_inf``.
    """
    n = op.n_sites
    d = op.B.astype(float).copy()
    e = np.zeros(n)
    e[:-1] = op.J
    z = np.eye(n)
    _tql2(d, e, z, max_sweeps)

    order = np.argsort(d, kind="stable")
    x = d[order]
    v = z[:, order]
    if n > 1 and np.min(np.diff(x)) < DEGENERACY_TOL * op.inf_norm():
        raise ConvergenceFailure("eigenvalues are numerically degenerate; the operator is not a valid Jacobi matrix")
    scale = np.max(np.abs(v), axis=0)
    for s in range(n):
        nz = np.flatnonzero(np.abs(v[:, s]) > 1e-14 * scale[s])
        if v[nz[0], s] < 0:
            v[:, s] = -v[:, s]
    return x, v


def spectral_data(op: JacobiOperator, mode: SpectralMode | str = SpectralMode.NUMERIC) -> SpectralData:
    """Assemble ``(x_s, w_s, chi_n(x_s))``.

    ``numeric`` diagonalizes with :func:`eig_tridiagonal` and reads
    ``w_s`` off the first eigenvector row. ``analytic`` takes the closed-form
    spectrum of a family chain, Christoffel weights from the characteristic
    polynomial and the orthonormal recurrence.
    """
    mode = SpectralMode(mode)
    if mode is SpectralMode.NUMERIC:
        x, v = eig_tridiagonal(op)
        w = v[0] ** 2
        return SpectralData(x, w, v / np.sqrt(w)[None, :])
    p = op.params
    if p is None:
        raise InvalidSpec("analytic spectral mode needs a family-tagged chain")
    x = ordered_spectrum(p)
    rec = op.recurrence
    w = weights_from_characteristic(rec, x)
    return SpectralData(x, w, orthonormal_table_on_roots(rec, x))
