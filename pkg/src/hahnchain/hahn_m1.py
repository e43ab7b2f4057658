"""Dual -1 Hahn polynomials for odd ``N``.

Monic recurrence
    x P_n = P_{n+1} + (-1)^{n+1} (2 xi + (-1)^N 2 eta) P_n + 4 [n]_xi [N-n+1]_eta P_{n-1},
with ``[m]_mu = m + (1 - (-1)^m) mu``, orthogonal on the alternating grid
``y_s = (-1)^s (2s + 2 xi + 2 eta + 1) + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, InvalidParams
from .orthopoly import MonicRecurrence
from .specfun import hyp, pochhammer

INTEGER_TOL = 1e-9
_RELATION_TOL = 1e-12


def bracket(m: int, mu: float) -> float:
    """``[m]_mu``: ``m`` for even ``m``, ``m + 2 mu`` for odd ``m``."""
    return m + (1 - (-1) ** m) * mu


def is_integral(v: float, tol: float = INTEGER_TOL) -> bool:
    return abs(v - round(v)) <= tol


@dataclass(frozen=True)
class DualM1HahnParams:
    xi: float
    eta: float
    N: int

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise InvalidParams(f"N must be an integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "xi", float(self.xi))
        object.__setattr__(self, "eta", float(self.eta))
        if self.N < 1 or self.N % 2 == 0:
            raise InvalidParams(f"N must be a positive odd integer, got {self.N}")
        if not (self.xi > -0.5 and self.eta > -0.5):
            raise InvalidParams(f"need xi, eta > -1/2, got xi={self.xi}, eta={self.eta}")

    @classmethod
    def asymmetric(cls, N: int, eta: float) -> "DualM1HahnParams":
        return cls(eta + 1.0, eta, N)

    @classmethod
    def symmetric(cls, N: int, eta: float) -> "DualM1HahnParams":
        return cls(eta, eta, N)

    @property
    def delta(self) -> float:
        return (self.xi + self.eta + 1.0) / 2.0

    @property
    def is_asymmetric(self) -> bool:
        return abs(self.xi - self.eta - 1.0) <= _RELATION_TOL

    @property
    def is_symmetric(self) -> bool:
        return abs(self.xi - self.eta) <= _RELATION_TOL


def recurrence_coeffs(p: DualM1HahnParams) -> MonicRecurrence:
    N = p.N
    b = [(-1) ** (n + 1) * (2 * p.xi + (-1) ** N * 2 * p.eta) for n in range(N + 1)]
    u = [4 * bracket(n, p.xi) * bracket(N - n + 1, p.eta) for n in range(1, N + 1)]
    return MonicRecurrence(b, u)


def explicit_eval(p: DualM1HahnParams, n: int, x):
    """Closed-form ``P_n(x; xi, eta, N)`` as a terminating 3F2.

    Agrees with :func:`orthopoly.eval_monic` on :func:`recurrence_coeffs`;
    the ``16**n`` growth limits the useful range to ``N`` of about 15.
    """
    if not 0 <= n <= p.N:
        raise IndexOutOfRange(f"degree {n} outside 0..{p.N}")
    if np.ndim(x) > 0:
        return np.array([explicit_eval(p, n, xv) for xv in np.asarray(x, float).ravel()]).reshape(np.shape(x))
    x = float(x)
    a = (1 - p.N) / 2
    d = p.delta
    if n % 2 == 0:
        m = n // 2
        c = (2 * p.xi + 1) / 2
        pre = 16.0 ** m * pochhammer(a, m) * pochhammer(c, m)
        return pre * hyp([-m, d + x / 4, d - x / 4], [a, c])
    m = (n - 1) // 2
    c = (2 * p.xi + 3) / 2
    pre = 16.0 ** m * pochhammer(a, m) * pochhammer(c, m) * (x + 2 * p.xi - 2 * p.eta)
    return pre * hyp([-m, d + x / 4, d - x / 4], [a, c])


def grid(p: DualM1HahnParams) -> np.ndarray:
    """Orthogonality nodes ``y_0 .. y_N`` in natural (alternating) order."""
    s = np.arange(p.N + 1)
    return (-1.0) ** s * (2 * s + 2 * p.xi + 2 * p.eta + 1) + 1


def grid_order(p: DualM1HahnParams) -> np.ndarray:
    """Permutation taking grid order to ascending order: ``grid(p)[grid_order(p)]`` is sorted."""
    return np.argsort(grid(p), kind="stable")


def ordered_spectrum(p: DualM1HahnParams) -> np.ndarray:
    """Ascending eigenvalues of the Jacobi matrix, for ``xi = eta + 1`` or ``xi = eta``.

    Both cases are two step-4 sublattices; the gap between them is
    ``8 eta + 8`` (asymmetric) or ``8 xi + 4`` (symmetric).
    """
    N = p.N
    s = np.arange(N + 1)
    lower = s <= (N - 1) // 2
    if p.is_asymmetric:
        return np.where(lower, -4 * p.eta + 4 * s - 2 * N - 2, 4 * p.eta + 4 * s - 2 * N + 2).astype(float)
    if p.is_symmetric:
        return np.where(lower, -4 * p.xi + 4 * s - 2 * N, 4 * p.xi + 4 * s - 2 * N).astype(float)
    raise InvalidParams(f"closed-form spectrum needs xi = eta + 1 or xi = eta, got xi={p.xi}, eta={p.eta}")


def chi_last_minus_one(p: DualM1HahnParams, x):
    """Orthonormal ``chi_{N-1}(x)`` for ``xi = eta + 1``.

    ``(-1)^((N-1)/2) 2F1(delta + x/4, delta - x/4; eta + 3/2; 1)`` cut off
    after index ``(N-1)/2``. On the spectrum this is ``(-1)^s`` for the lower
    sublattice and ``(-1)^(s+1)`` for the upper one.
    """
    if not p.is_asymmetric:
        raise InvalidParams(f"chi_(N-1) closed form needs xi = eta + 1, got xi={p.xi}, eta={p.eta}")
    if np.ndim(x) > 0:
        return np.array([chi_last_minus_one(p, xv) for xv in np.asarray(x, float).ravel()]).reshape(np.shape(x))
    half = (p.N - 1) // 2
    d = p.eta + 1.0
    x = float(x)
    return (-1.0) ** half * hyp([d + x / 4, d - x / 4], [(2 * p.eta + 3) / 2], 1.0, term_cap=half)


def appendix_weights_and_norms(p: DualM1HahnParams) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form weights ``w_s`` (grid order) and monic norms ``nu_n``.

    The weights are normalized to unit sum by the constant
    ``k = (eta + 1/2)_{(N+1)/2} / (eta + xi + 1)_{(N+1)/2}``. The odd-``s``
    sign is ``(-1)^((s-1)/2)`` and the odd-``n`` norm branch uses the
    ``(n +- 1)/2`` orders. Reorder with :func:`grid_order` to compare with
    weights on the sorted spectrum.
    """
    N, xi, eta = p.N, p.xi, p.eta
    a = (1 - N) / 2
    k = pochhammer(eta + 0.5, (N + 1) // 2) / pochhammer(eta + xi + 1, (N + 1) // 2)
    top = (N + 3) / 2 + eta + xi

    w = np.empty(N + 1)
    for s in range(N + 1):
        if s % 2 == 0:
            m = s // 2
            num = pochhammer(a, m) * pochhammer(xi + 0.5, m) * pochhammer(eta + xi + 1, m)
            den = math.factorial(m) * pochhammer(eta + 0.5, m) * pochhammer(top, m)
        else:
            m = (s - 1) // 2
            num = pochhammer(a, m) * pochhammer(xi + 0.5, m + 1) * pochhammer(eta + xi + 1, m)
            den = math.factorial(m) * pochhammer(eta + 0.5, m + 1) * pochhammer(top, m)
        w[s] = (-1) ** m * k * num / den

    nu = np.empty(N + 1)
    for n in range(N + 1):
        if n % 2 == 0:
            m = n // 2
            nu[n] = 16.0 ** n * math.factorial(m) * pochhammer(a, m) * pochhammer(xi + 0.5, m) \
                * pochhammer(-N / 2 - eta, m)
        else:
            m = (n - 1) // 2
            nu[n] = -(16.0 ** n) * math.factorial(m) * pochhammer(a, m) * pochhammer(xi + 0.5, m + 1) \
                * pochhammer(-N / 2 - eta, m + 1)
    return w, nu
