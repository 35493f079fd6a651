"""Operator algebra for a three-qubit Ising chain driven on the middle site.

Everything is expressed in rescaled, dimensionless units: time is measured in
units of the first Ising bond, fields and the energy scale are divided by it.
The chain Hamiltonian is

    H(tau) = sz1*sz2 + k*sz2*sz3 + B(tau).sigma2,

with a static z component and a transverse component rotating at a constant
rate, B(tau) = (b0*cos(theta), b0*sin(theta), bz), theta = omega_rf*tau + theta0.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

ID2 = np.eye(2, dtype=complex)


def pauli(axis: str) -> np.ndarray:
    """Standard 2x2 Pauli matrix for axis 'x', 'y' or 'z'."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected 'x', 'y' or 'z'") from None


def embed3(op1: np.ndarray | None, op2: np.ndarray | None, op3: np.ndarray | None) -> np.ndarray:
    """Kronecker product over sites 1,2,3; ``None`` stands for the identity."""
    a, b, c = (ID2 if o is None else np.asarray(o, dtype=complex) for o in (op1, op2, op3))
    return np.kron(np.kron(a, b), c)


# The eight operators whose expectation values close under the chain dynamics,
# in the frozen index order used by every other module:
#   x1=sx1, x2=sy1 sx2, x3=sy1 sz2, x4=sy1 sy2,
#   x5=sx1 sz3, x6=sy1 sx2 sz3, x7=sy1 sz2 sz3, x8=sy1 sy2 sz3.
_BASIS_AXES = (
    ("x", None, None),
    ("y", "x", None),
    ("y", "z", None),
    ("y", "y", None),
    ("x", None, "z"),
    ("y", "x", "z"),
    ("y", "z", "z"),
    ("y", "y", "z"),
)

_BASIS_CACHE: tuple[np.ndarray, ...] | None = None


def coherence_basis() -> tuple[np.ndarray, ...]:
    """The eight-operator basis O_1..O_8 (read-only arrays, Tr[O_i O_j] = 8 delta_ij)."""
    global _BASIS_CACHE
    if _BASIS_CACHE is None:
        ops = []
        for axes in _BASIS_AXES:
            op = embed3(*(None if a is None else _PAULI[a] for a in axes))
            op.setflags(write=False)
            ops.append(op)
        _BASIS_CACHE = tuple(ops)
    return _BASIS_CACHE


@dataclass(frozen=True)
class ControlParams:
    """Dimensionless controls of the rotating drive.

    k         coupling ratio of the second Ising bond to the first
    omega_hat total energy scale entering the fixed-norm constraint
    b0        amplitude of the rotating transverse field
    bz        static z field
    omega_rf  rotation rate of the transverse field
    theta0    initial phase of the transverse field (radians)
    """

    k: float
    omega_hat: float
    b0: float
    bz: float
    omega_rf: float
    theta0: float

    def theta(self, tau: float) -> float:
        return self.omega_rf * tau + self.theta0

    def field(self, tau: float) -> np.ndarray:
        """Control field (Bx, By, Bz) at rescaled time tau."""
        th = self.theta(tau)
        return np.array([self.b0 * math.cos(th), self.b0 * math.sin(th), self.bz])

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ControlParams":
        return cls(**{f: float(data[f]) for f in ("k", "omega_hat", "b0", "bz", "omega_rf", "theta0")})


def energy_residual(p: ControlParams) -> float:
    """Residual of the fixed-energy condition  b0^2 + bz^2 - (omega_hat^2 - (1 + k^2))."""
    return p.b0**2 + p.bz**2 - (p.omega_hat**2 - (1.0 + p.k**2))


def transverse_amplitude(omega_hat: float, k: float, bz: float = 0.0) -> float:
    """Transverse amplitude b0 >= 0 that puts (bz, b0) on the fixed-energy shell."""
    r = omega_hat**2 - (1.0 + k**2) - bz**2
    if r < 0:
        raise ValueError(
            f"no real transverse amplitude: omega_hat^2={omega_hat**2:.6g} < 1 + k^2 + bz^2={1 + k**2 + bz**2:.6g}"
        )
    return math.sqrt(r)


_ZZ12 = embed3(_PAULI["z"], _PAULI["z"], None)
_ZZ23 = embed3(None, _PAULI["z"], _PAULI["z"])
_X2 = embed3(None, _PAULI["x"], None)
_Y2 = embed3(None, _PAULI["y"], None)
_Z2 = embed3(None, _PAULI["z"], None)
for _op in (_ZZ12, _ZZ23, _X2, _Y2, _Z2):
    _op.setflags(write=False)


def build_hamiltonian(p: ControlParams, tau: float) -> np.ndarray:
    """Chain Hamiltonian sz1*sz2 + k*sz2*sz3 + B(tau).sigma2 as a dense 8x8 matrix."""
    bx, by, bz = p.field(tau)
    return _ZZ12 + p.k * _ZZ23 + bx * _X2 + by * _Y2 + bz * _Z2
