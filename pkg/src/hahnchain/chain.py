"""Chain instances and their one-excitation Jacobi operators.

The chain file is UTF-8 JSON::

    {"n_sites": 4, "J": [...N values...], "B": [...N+1 values...],
     "family": "asym-dualm1hahn", "eta": 0.0, "xi": 1.0}

``family``, ``eta`` and ``xi`` are optional metadata.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import InvalidParams, InvalidSpec, ParseError
from .hahn_m1 import DualM1HahnParams, bracket
from .orthopoly import MonicRecurrence


class Family(str, enum.Enum):
    ASYMMETRIC = "asym-dualm1hahn"
    SYMMETRIC = "sym-dualm1hahn"
    CUSTOM = "custom"


@dataclass(frozen=True)
class ChainSpec:
    family: Family
    N: int
    eta: Optional[float] = None
    custom_J: Optional[tuple] = None
    custom_B: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.CUSTOM:
            if self.custom_J is None or self.custom_B is None:
                raise InvalidSpec("custom chain needs both J and B")
            if self.eta is not None:
                raise InvalidSpec("eta is not a parameter of a custom chain")
            object.__setattr__(self, "custom_J", tuple(float(v) for v in self.custom_J))
            object.__setattr__(self, "custom_B", tuple(float(v) for v in self.custom_B))
            if len(self.custom_J) != self.N or len(self.custom_B) != self.N + 1:
                raise InvalidSpec(
                    f"custom chain with N={self.N} needs {self.N} couplings and {self.N + 1} fields"
                )
            if not all(j > 0 for j in self.custom_J):
                raise InvalidSpec("custom couplings must be positive")
            if self.N < 1:
                raise InvalidSpec("a chain needs at least 2 sites")
        else:
            if self.eta is None:
                raise InvalidSpec(f"family {self.family.value} needs eta")
            if self.custom_J is not None or self.custom_B is not None:
                raise InvalidSpec(f"family {self.family.value} does not take custom J/B")
            if isinstance(self.eta, bool) or not isinstance(self.eta, (int, float, np.integer, np.floating)):
                raise InvalidSpec(f"eta must be a number, got {self.eta!r}")
            object.__setattr__(self, "eta", float(self.eta))
            try:
                self.params
            except InvalidParams as exc:
                raise InvalidSpec(str(exc)) from None

    @classmethod
    def asymmetric(cls, N: int, eta: float) -> "ChainSpec":
        return cls(Family.ASYMMETRIC, N, eta)

    @classmethod
    def symmetric(cls, N: int, eta: float) -> "ChainSpec":
        return cls(Family.SYMMETRIC, N, eta)

    @classmethod
    def custom(cls, J, B) -> "ChainSpec":
        return cls(Family.CUSTOM, len(J), None, tuple(J), tuple(B))

    @property
    def xi(self) -> Optional[float]:
        if self.family is Family.ASYMMETRIC:
            return self.eta + 1.0
        if self.family is Family.SYMMETRIC:
            return self.eta
        return None

    @property
    def params(self) -> Optional[DualM1HahnParams]:
        if self.family is Family.CUSTOM:
            return None
        return DualM1HahnParams(self.xi, self.eta, self.N)


@dataclass(frozen=True, eq=False)
class JacobiOperator:
    """Symmetric tridiagonal one-excitation Hamiltonian.

    ``B`` holds the N+1 site fields, ``J`` the N couplings with ``J[i]``
    linking sites ``i`` and ``i+1``.
    """

    B: np.ndarray
    J: np.ndarray
    spec: Optional[ChainSpec] = None

    def __post_init__(self):
        B = np.array(self.B, dtype=float)
        J = np.array(self.J, dtype=float)
        if B.ndim != 1 or J.ndim != 1 or B.size != J.size + 1 or J.size < 1:
            raise InvalidSpec(f"need len(B) == len(J) + 1 >= 2, got {B.size} and {J.size}")
        if not np.all(J > 0):
            raise InvalidSpec("couplings must be positive")
        if not (np.all(np.isfinite(B)) and np.all(np.isfinite(J))):
            raise InvalidSpec("couplings and fields must be finite")
        B.setflags(write=False)
        J.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "J", J)

    @property
    def N(self) -> int:
        return self.J.size

    @property
    def n_sites(self) -> int:
        return self.B.size

    @property
    def family(self) -> Family:
        return self.spec.family if self.spec is not None else Family.CUSTOM

    @property
    def params(self) -> Optional[DualM1HahnParams]:
        return self.spec.params if self.spec is not None else None

    @property
    def b(self) -> np.ndarray:
        return self.B

    @property
    def u(self) -> np.ndarray:
        return self.J ** 2

    @property
    def recurrence(self) -> MonicRecurrence:
        return MonicRecurrence(self.B, self.u)

    def matrix(self) -> np.ndarray:
        return np.diag(self.B) + np.diag(self.J, 1) + np.diag(self.J, -1)

    def inf_norm(self) -> float:
        row = np.abs(self.B).copy()
        row[:-1] += self.J
        row[1:] += self.J
        return float(row.max())

    def __eq__(self, other):
        if not isinstance(other, JacobiOperator):
            return NotImplemented
        return (np.array_equal(self.B, other.B) and np.array_equal(self.J, other.J)
                and self.spec == other.spec)

    __hash__ = None


def build(spec: ChainSpec) -> JacobiOperator:
    """Materialize the Jacobi operator of a chain.

    Family chains use ``J_n = 2 sqrt([n]_xi [N-n+1]_eta)`` and
    ``B_n = (-1)^(n+1) 2 (xi - eta)``.
    """
    if spec.family is Family.CUSTOM:
        return JacobiOperator(spec.custom_B, spec.custom_J, spec)
    p = spec.params
    N = p.N
    J = [2 * np.sqrt(bracket(n, p.xi) * bracket(N - n + 1, p.eta)) for n in range(1, N + 1)]
    B = [(-1) ** (n + 1) * 2 * (p.xi - p.eta) for n in range(N + 1)]
    return JacobiOperator(B, J, spec)


def perturb_coupling(op: JacobiOperator, n: int, factor: float) -> JacobiOperator:
    """Copy of ``op`` with coupling ``J_n`` (1-based) scaled by ``factor``; the result is a custom chain."""
    if not 1 <= n <= op.N:
        raise InvalidSpec(f"coupling index {n} outside 1..{op.N}")
    J = op.J.copy()
    J[n - 1] *= factor
    return build(ChainSpec.custom(J, op.B))


def is_mirror_symmetric(op: JacobiOperator, tol: float = 1e-12) -> bool:
    """``J_n = J_{N-n+1}`` and ``B_n = B_{N-n}`` within ``tol``."""
    return bool(np.all(np.abs(op.J - op.J[::-1]) <= tol) and np.all(np.abs(op.B - op.B[::-1]) <= tol))


def u_product_identity_residual(op: JacobiOperator) -> float:
    """Max relative defect of ``u_{2n-1} u_{2n} = u_{N-2n+1} u_{N-2n}``, ``n = 1..(N-1)/2``."""
    N = op.N
    if N % 2 == 0:
        raise InvalidSpec(f"u-product identity is stated for odd N, got N={N}")
    u = np.concatenate(([np.nan], op.u))  # 1-based
    res = 0.0
    for n in range(1, (N - 1) // 2 + 1):
        left = u[2 * n - 1] * u[2 * n]
        right = u[N - 2 * n + 1] * u[N - 2 * n]
        res = max(res, abs(left - right) / left)
    return res


def to_dict(op: JacobiOperator) -> dict:
    out = {"n_sites": op.n_sites, "J": op.J.tolist(), "B": op.B.tolist()}
    if op.spec is not None:
        out["family"] = op.spec.family.value
        if op.spec.family is not Family.CUSTOM:
            out["eta"] = op.spec.eta
            out["xi"] = op.spec.xi
    return out


def dumps(op: JacobiOperator) -> str:
    return json.dumps(to_dict(op), indent=2) + "\n"


def _float_list(obj, key):
    val = obj.get(key)
    if not isinstance(val, list):
        raise ParseError(f"field {key!r}: expected an array of numbers")
    out = []
    for i, v in enumerate(val):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"field {key!r}[{i}]: expected a number, got {v!r}")
        out.append(float(v))
    return out


def from_dict(obj) -> JacobiOperator:
    """Inverse of :func:`to_dict`.

    Family chains are rebuilt from their parameters and checked against the
    stored arrays; a mismatch demotes the chain to ``custom`` so edited files
    are never silently replaced by the analytic values.
    """
    if not isinstance(obj, dict):
        raise ParseError("chain file must contain a JSON object")
    J = _float_list(obj, "J")
    B = _float_list(obj, "B")
    if len(B) != len(J) + 1:
        raise ParseError(f"field 'B': expected {len(J) + 1} entries (len(J) + 1), got {len(B)}")
    n_sites = obj.get("n_sites")
    if n_sites is not None and n_sites != len(B):
        raise ParseError(f"field 'n_sites': {n_sites!r} does not match len(B) = {len(B)}")

    family = obj.get("family", Family.CUSTOM.value)
    try:
        family = Family(family)
    except ValueError:
        raise ParseError(f"field 'family': unknown family {family!r}") from None

    spec = ChainSpec.custom(J, B)  # validates couplings
    if family is not Family.CUSTOM:
        eta = obj.get("eta")
        if isinstance(eta, bool) or not isinstance(eta, (int, float)):
            raise ParseError(f"field 'eta': family {family.value} needs a numeric eta")
        fam_spec = ChainSpec(family, len(J), float(eta))
        xi = obj.get("xi")
        if xi is not None and xi != fam_spec.xi:
            raise ParseError(f"field 'xi': {xi!r} inconsistent with family {family.value} and eta={eta}")
        analytic = build(fam_spec)
        if np.array_equal(analytic.J, J) and np.array_equal(analytic.B, B):
            spec = fam_spec
    return JacobiOperator(B, J, spec)


def loads(text: str) -> JacobiOperator:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(obj)


def save_chain(op: JacobiOperator, path) -> None:
    Path(path).write_text(dumps(op), encoding="utf-8")


def load_chain(path) -> JacobiOperator:
    return loads(Path(path).read_text(encoding="utf-8"))
