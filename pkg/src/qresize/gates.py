"""Standard gate table (qelib1.inc names) and unitary matrices.

Multi-qubit matrices use the first operand as the most significant index,
so ``cx(a, b)`` has rows ordered ``|a b>``.
"""
from __future__ import annotations

from cmath import exp
from math import cos, pi, sin, sqrt

import numpy as np

# name -> (num_qubits, num_params)
STANDARD_GATES: dict[str, tuple[int, int]] = {
    "U": (1, 3),
    "CX": (2, 0),
    "id": (1, 0),
    "u0": (1, 1),
    "u": (1, 3),
    "u1": (1, 1),
    "u2": (1, 2),
    "u3": (1, 3),
    "p": (1, 1),
    "x": (1, 0),
    "y": (1, 0),
    "z": (1, 0),
    "h": (1, 0),
    "s": (1, 0),
    "sdg": (1, 0),
    "t": (1, 0),
    "tdg": (1, 0),
    "sx": (1, 0),
    "sxdg": (1, 0),
    "rx": (1, 1),
    "ry": (1, 1),
    "rz": (1, 1),
    "cx": (2, 0),
    "cy": (2, 0),
    "cz": (2, 0),
    "ch": (2, 0),
    "csx": (2, 0),
    "swap": (2, 0),
    "crx": (2, 1),
    "cry": (2, 1),
    "crz": (2, 1),
    "cp": (2, 1),
    "cu1": (2, 1),
    "cu3": (2, 3),
    "cu": (2, 4),
    "rxx": (2, 1),
    "rzz": (2, 1),
    "ccx": (3, 0),
    "cswap": (3, 0),
    "c3x": (4, 0),
    "c4x": (5, 0),
}

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2)
_SX = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def _u3(theta, phi, lam):
    return np.array(
        [
            [cos(theta / 2), -exp(1j * lam) * sin(theta / 2)],
            [exp(1j * phi) * sin(theta / 2), exp(1j * (phi + lam)) * cos(theta / 2)],
        ],
        dtype=complex,
    )


def _phase(lam):
    return np.array([[1, 0], [0, exp(1j * lam)]], dtype=complex)


def _rx(theta):
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(theta):
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta):
    return np.array([[exp(-0.5j * theta), 0], [0, exp(0.5j * theta)]], dtype=complex)


def controlled(u: np.ndarray, num_controls: int = 1) -> np.ndarray:
    """Block-diagonal controlled version of ``u``; controls come first."""
    dim = u.shape[0]
    total = dim << num_controls
    out = np.eye(total, dtype=complex)
    out[total - dim:, total - dim:] = u
    return out


_FIXED = {
    "id": _I,
    "x": _X,
    "y": _Y,
    "z": _Z,
    "h": _H,
    "s": _phase(pi / 2),
    "sdg": _phase(-pi / 2),
    "t": _phase(pi / 4),
    "tdg": _phase(-pi / 4),
    "sx": _SX,
    "sxdg": _SX.conj().T,
    "CX": controlled(_X),
    "cx": controlled(_X),
    "cy": controlled(_Y),
    "cz": controlled(_Z),
    "ch": controlled(_H),
    "csx": controlled(_SX),
    "swap": _SWAP,
    "ccx": controlled(_X, 2),
    "cswap": controlled(_SWAP, 1),
    "c3x": controlled(_X, 3),
    "c4x": controlled(_X, 4),
}

_PARAMETRIC = {
    "U": lambda t, p, l: _u3(t, p, l),
    "u": lambda t, p, l: _u3(t, p, l),
    "u3": lambda t, p, l: _u3(t, p, l),
    "u2": lambda p, l: _u3(pi / 2, p, l),
    "u1": _phase,
    "p": _phase,
    "u0": lambda _: _I,
    "rx": _rx,
    "ry": _ry,
    "rz": _rz,
    "crx": lambda t: controlled(_rx(t)),
    "cry": lambda t: controlled(_ry(t)),
    "crz": lambda t: controlled(_rz(t)),
    "cp": lambda l: controlled(_phase(l)),
    "cu1": lambda l: controlled(_phase(l)),
    "cu3": lambda t, p, l: controlled(_u3(t, p, l)),
    "cu": lambda t, p, l, g: controlled(exp(1j * g) * _u3(t, p, l)),
    "rxx": lambda t: cos(t / 2) * np.eye(4) - 1j * sin(t / 2) * np.kron(_X, _X),
    "rzz": lambda t: np.diag(
        [exp(-0.5j * t), exp(0.5j * t), exp(0.5j * t), exp(-0.5j * t)]
    ),
}


def is_standard(name: str) -> bool:
    return name in STANDARD_GATES


def gate_matrix(name: str, params=()) -> np.ndarray:
    """Unitary for a standard gate; raises KeyError for anything else."""
    if name in _FIXED:
        return _FIXED[name]
    return np.asarray(_PARAMETRIC[name](*params), dtype=complex)
