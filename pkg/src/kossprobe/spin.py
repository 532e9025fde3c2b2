"""Fixed-size spin algebra for the electron + impurity system.

Pauli matrices, the Bell basis, the probe-frame rotations and the
column-stacking vectorization helpers used by every other module.

Conventions, used consistently across the package:

* Tensor order: the first factor is the electron spin, the second factor is
  the impurity spin.  All Kronecker products follow this order.
* Computational basis ordering |00>, |01>, |10>, |11>.
* Vectorization is column-stacking, so vec(A rho B) = (B^T kron A) vec(rho).

Every function is pure and every value is immutable after construction, so
everything here is safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-12

IDENTITY_2 = np.eye(2, dtype=complex)

_PAULI = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)

BASIS_LABELS = ("canonical", "rot1", "rot2")


def pauli(index: int) -> np.ndarray:
    """Return the Pauli matrix sigma_index, index in {1, 2, 3}."""
    if index not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {index!r}")
    return _PAULI[index - 1].copy()


def rotation(kind: int) -> np.ndarray:
    """Impurity-frame rotation (1 - i sigma_kind)/sqrt(2), kind in {1, 2}.

    Conjugation by rotation(k) keeps sigma_k fixed and exchanges the other
    two Pauli matrices up to a sign; the computed signs are exposed through
    :func:`pauli_frame` rather than assumed.
    """
    if kind not in (1, 2):
        raise ValueError(f"rotation kind must be 1 or 2, got {kind!r}")
    return (IDENTITY_2 - 1.0j * pauli(kind)) / np.sqrt(2.0)


def bell_states() -> np.ndarray:
    """The four Bell vectors as rows, in the order psi_0, psi_1, psi_2, psi_3."""
    s = 1.0 / np.sqrt(2.0)
    return np.array(
        [
            [s, 0.0, 0.0, s],  # (|00> + |11>)/sqrt(2)
            [0.0, s, s, 0.0],  # (|01> + |10>)/sqrt(2)
            [0.0, s, -s, 0.0],  # (|01> - |10>)/sqrt(2)
            [s, 0.0, 0.0, -s],  # (|00> - |11>)/sqrt(2)
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class SpinBasis:
    """Four orthonormal two-qubit vectors defining one probe frame.

    ``vectors[i]`` is the i-th basis vector; ``impurity_rotation`` is the
    2x2 unitary applied to the impurity factor of the Bell basis (identity
    for the canonical frame).
    """

    label: str
    vectors: np.ndarray
    impurity_rotation: np.ndarray

    def __post_init__(self) -> None:
        self.vectors.setflags(write=False)
        self.impurity_rotation.setflags(write=False)

    @property
    def probe_state(self) -> np.ndarray:
        """The detection state, index 3 of the basis."""
        return self.vectors[3]

    def state_pair(self) -> tuple[np.ndarray, np.ndarray]:
        """The two spin states carried by a scattering eigenstate, in this frame.

        phi0 is the singlet combination, phi1 the normalized sum of the three
        triplet components; both are expressed through this basis's vectors.
        """
        phi0 = self.vectors[2]
        phi1 = (self.vectors[1] + np.sqrt(2.0) * self.vectors[0]) / np.sqrt(3.0)
        return phi0, phi1


def basis(label: str) -> SpinBasis:
    """Build the canonical Bell basis or one of the two rotated probe bases."""
    if label not in BASIS_LABELS:
        raise ValueError(f"unknown basis label {label!r}, expected one of {BASIS_LABELS}")
    if label == "canonical":
        u = IDENTITY_2.copy()
    else:
        u = rotation(1 if label == "rot1" else 2)
    lifted = np.kron(IDENTITY_2, u)
    vectors = bell_states() @ lifted.T
    return SpinBasis(label=label, vectors=vectors, impurity_rotation=u)


@dataclass(frozen=True)
class SpinStatePair:
    """The singlet/triplet spin states of a positive-energy eigenstate."""

    phi0: np.ndarray
    phi1: np.ndarray

    def __post_init__(self) -> None:
        self.phi0.setflags(write=False)
        self.phi1.setflags(write=False)


def spin_state_pair() -> SpinStatePair:
    """phi0 = (|01>-|10>)/sqrt(2) and phi1 = (|00> + (|01>+|10>)/sqrt(2) + |11>)/sqrt(3)."""
    phi0, phi1 = basis("canonical").state_pair()
    return SpinStatePair(phi0=phi0.copy(), phi1=phi1.copy())


def pauli_frame(u: np.ndarray) -> np.ndarray:
    """Real 3x3 matrix O with u^dag sigma_i u = sum_j O[i, j] sigma_j.

    O is the rotation induced on Pauli labels by conjugating with the 2x2
    unitary ``u``; it is orthogonal whenever ``u`` is unitary.
    """
    u = np.asarray(u, dtype=complex)
    o = np.empty((3, 3))
    for i in range(3):
        conj = u.conj().T @ _PAULI[i] @ u
        for j in range(3):
            coeff = 0.5 * np.trace(_PAULI[j] @ conj)
            if abs(coeff.imag) > 1e-12:
                raise ValueError("conjugation left the Pauli span; u is not unitary")
            o[i, j] = coeff.real
    return o


# ---------------------------------------------------------------------------
# structural predicates
# ---------------------------------------------------------------------------


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))) <= tol)


def is_psd(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Positive semidefiniteness of a Hermitian matrix, min eigenvalue >= -tol."""
    a = np.asarray(a)
    if not is_hermitian(a, max(tol, 1e-10)):
        return False
    return bool(np.linalg.eigvalsh(a)[0] >= -tol)


# ---------------------------------------------------------------------------
# vectorization (column-stacking)
# ---------------------------------------------------------------------------


def vec(a: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(a).flatten(order="F")


def unvec(v: np.ndarray, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Inverse of :func:`vec`; square by default."""
    v = np.asarray(v)
    if shape is None:
        dim = int(round(np.sqrt(v.size)))
        shape = (dim, dim)
    return v.reshape(shape, order="F")


def vectorize_superop(map_action, dim: int) -> np.ndarray:
    """Matrix L with vec(map(rho)) = L vec(rho) for a linear map on dim x dim matrices.

    Probes the map with the matrix units; under column stacking a map
    rho -> A rho B vectorizes to kron(B^T, A).
    """
    l = np.empty((dim * dim, dim * dim), dtype=complex)
    for b in range(dim):
        for a in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[a, b] = 1.0
            l[:, a + b * dim] = vec(np.asarray(map_action(unit), dtype=complex))
    return l


# ---------------------------------------------------------------------------
# JSON serialization: nested arrays of [re, im] pairs
# ---------------------------------------------------------------------------


def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(data: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex)
