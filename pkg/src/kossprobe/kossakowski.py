"""The Kossakowski matrix and the dissipator it generates on the impurity spin.

The noisy part of the impurity's Markovian evolution is

    L_D[rho] = sum_ij C_ij ( sigma_j rho sigma_i - {sigma_i sigma_j, rho}/2 ),

with C the real symmetric 3x3 Kossakowski matrix (entropy-increasing case).
C being positive semidefinite is equivalent to the generated semigroup being
completely positive, which is what the estimation pipeline ultimately tests.

This module carries the matrix type with its complete-positivity diagnostics,
the dissipator on the impurity spin and its lift to electron + impurity, the
2x2 compression ``d_tilde`` that the forward model is a quadratic form of,
the Kraus decomposition of the noise term, and the exact Bloch-vector
evolution for diagonal C.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spin import IDENTITY_2, is_hermitian, pauli

PARAM_ORDER = ("c11", "c12", "c13", "c22", "c23", "c33")

_SIGMA = tuple(pauli(i) for i in (1, 2, 3))
_SIGMA_LIFTED = tuple(np.kron(IDENTITY_2, s) for s in _SIGMA)


class NotCompletelyPositiveError(ValueError):
    """Raised when a Kraus form is requested for a non-PSD Kossakowski matrix."""

    def __init__(self, eigenvalue: float):
        self.eigenvalue = float(eigenvalue)
        super().__init__(
            f"Kossakowski matrix is not positive semidefinite "
            f"(eigenvalue {eigenvalue:.6g}); no Kraus form exists"
        )


@dataclass(frozen=True)
class CPReport:
    """Complete-positivity diagnostics: eigenvalue verdict plus the principal minors.

    ``conditions`` maps each nonnegativity condition (three diagonal entries,
    three 2x2 minors, the determinant) to its margin; ``conditions_ok`` holds
    the boolean verdicts at the report's tolerance.  Noisy estimates can
    violate some minors but not others, which is why they are reported
    individually alongside the basis-independent eigenvalue test.
    """

    psd: bool
    min_eigenvalue: float
    eigenvalues: tuple[float, float, float]
    conditions: dict[str, float]
    conditions_ok: dict[str, bool]
    tol: float

    def to_dict(self) -> dict:
        return {
            "psd": self.psd,
            "min_eigenvalue": self.min_eigenvalue,
            "eigenvalues": list(self.eigenvalues),
            "conditions": {
                name: {"margin": self.conditions[name], "ok": self.conditions_ok[name]}
                for name in self.conditions
            },
            "tolerance": self.tol,
        }


@dataclass(frozen=True)
class KossakowskiMatrix:
    """Real symmetric 3x3 noise-parameter matrix, stored by its six free entries."""

    c11: float
    c12: float
    c13: float
    c22: float
    c23: float
    c33: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.c11, self.c12, self.c13],
                [self.c12, self.c22, self.c23],
                [self.c13, self.c23, self.c33],
            ]
        )

    @property
    def vector(self) -> np.ndarray:
        """The six free parameters in the fixed order (c11, c12, c13, c22, c23, c33)."""
        return np.array([self.c11, self.c12, self.c13, self.c22, self.c23, self.c33])

    @classmethod
    def from_vector(cls, v) -> "KossakowskiMatrix":
        v = np.asarray(v, dtype=float)
        if v.shape != (6,):
            raise ValueError(f"expected 6 parameters, got shape {v.shape}")
        return cls(*(float(x) for x in v))

    @classmethod
    def from_matrix(cls, a, tol: float = 1e-12) -> "KossakowskiMatrix":
        a = np.asarray(a, dtype=float)
        if a.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
        if np.max(np.abs(a - a.T)) > tol:
            raise ValueError("matrix is not symmetric within tolerance")
        s = 0.5 * (a + a.T)
        return cls(s[0, 0], s[0, 1], s[0, 2], s[1, 1], s[1, 2], s[2, 2])

    @classmethod
    def diagonal(cls, c1: float, c2: float, c3: float) -> "KossakowskiMatrix":
        return cls(c1, 0.0, 0.0, c2, 0.0, c3)

    @classmethod
    def identity(cls) -> "KossakowskiMatrix":
        return cls.diagonal(1.0, 1.0, 1.0)

    @classmethod
    def zero(cls) -> "KossakowskiMatrix":
        return cls.diagonal(0.0, 0.0, 0.0)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in ascending order."""
        return np.linalg.eigvalsh(self.matrix)

    def is_psd(self, tol: float = 1e-10) -> bool:
        return bool(self.eigenvalues()[0] >= -tol)

    def rotated(self, frame: np.ndarray) -> "KossakowskiMatrix":
        """The same dissipator expressed in a rotated Pauli frame, C -> O^T C O."""
        o = np.asarray(frame, dtype=float)
        return KossakowskiMatrix.from_matrix(o.T @ self.matrix @ o, tol=1e-9)

    def cp_check(self, tol: float = 1e-10) -> CPReport:
        """Eigenvalue PSD verdict plus the seven individual minor conditions."""
        c = self.matrix
        eigs = np.linalg.eigvalsh(c)
        conditions = {
            "c11": self.c11,
            "c22": self.c22,
            "c33": self.c33,
            "minor_12": self.c11 * self.c22 - self.c12**2,
            "minor_13": self.c11 * self.c33 - self.c13**2,
            "minor_23": self.c22 * self.c33 - self.c23**2,
            "det": float(np.linalg.det(c)),
        }
        return CPReport(
            psd=bool(eigs[0] >= -tol),
            min_eigenvalue=float(eigs[0]),
            eigenvalues=tuple(float(e) for e in eigs),
            conditions={k: float(v) for k, v in conditions.items()},
            conditions_ok={k: bool(v >= -tol) for k, v in conditions.items()},
            tol=tol,
        )

    def to_dict(self) -> dict:
        return {name: float(getattr(self, name)) for name in PARAM_ORDER}

    @classmethod
    def from_dict(cls, data: dict) -> "KossakowskiMatrix":
        missing = [name for name in PARAM_ORDER if name not in data]
        if missing:
            raise ValueError(f"missing Kossakowski entries: {missing}")
        return cls(**{name: float(data[name]) for name in PARAM_ORDER})


def as_coupling_matrix(c) -> np.ndarray:
    """Accept a KossakowskiMatrix or any 3x3 array-like and return the array."""
    if isinstance(c, KossakowskiMatrix):
        return c.matrix.astype(complex)
    a = np.asarray(c, dtype=complex)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 coupling matrix, got shape {a.shape}")
    return a


# ---------------------------------------------------------------------------
# dissipator
# ---------------------------------------------------------------------------


def _dissipator(c: np.ndarray, rho: np.ndarray, sigmas) -> np.ndarray:
    out = np.zeros_like(rho)
    for i in range(3):
        for j in range(3):
            cij = c[i, j]
            if cij == 0:
                continue
            sij = sigmas[i] @ sigmas[j]
            out = out + cij * (
                sigmas[j] @ rho @ sigmas[i] - 0.5 * (sij @ rho + rho @ sij)
            )
    return out


def dissipator_spin(c, rho: np.ndarray, validate: bool = True) -> np.ndarray:
    """Apply the dissipator to a 2x2 impurity state; the result is traceless."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 state, got shape {rho.shape}")
    if validate and not is_hermitian(rho, 1e-10):
        raise ValueError("state must be Hermitian")
    return _dissipator(as_coupling_matrix(c), rho, _SIGMA)


def dissipator_lifted(c, rho4: np.ndarray, validate: bool = True) -> np.ndarray:
    """Apply the dissipator on the impurity factor of an electron x impurity state."""
    rho4 = np.asarray(rho4, dtype=complex)
    if rho4.shape != (4, 4):
        raise ValueError(f"expected a 4x4 state, got shape {rho4.shape}")
    if validate and not is_hermitian(rho4, 1e-10):
        raise ValueError("state must be Hermitian")
    return _dissipator(as_coupling_matrix(c), rho4, _SIGMA_LIFTED)


# ---------------------------------------------------------------------------
# the 2x2 compression entering the detection rates
# ---------------------------------------------------------------------------


def d_tilde(c) -> np.ndarray:
    """Closed form of the dissipator compressed between the eigenstate's spin
    states and the detection state.

    For coupling matrix C the entries are

        D[0, 0] = C11
        D[0, 1] = (-i C12 + sqrt(2) C13) / sqrt(3)
        D[1, 0] = (+i C21 + sqrt(2) C31) / sqrt(3)
        D[1, 1] = (C22 + 2 C33 + i sqrt(2) (C23 - C32)) / 3

    obtained by evaluating the defining sandwich directly (the brute-force
    superoperator route in :mod:`kossprobe.oracle` reproduces it to machine
    precision, which the test suite asserts).  For real symmetric C the matrix
    is real-symmetric-Hermitian and PSD whenever C is PSD.
    """
    a = as_coupling_matrix(c)
    s2, s3 = np.sqrt(2.0), np.sqrt(3.0)
    d = np.array(
        [
            [a[0, 0], (-1.0j * a[0, 1] + s2 * a[0, 2]) / s3],
            [
                (1.0j * a[1, 0] + s2 * a[2, 0]) / s3,
                (a[1, 1] + 2.0 * a[2, 2] + 1.0j * s2 * (a[1, 2] - a[2, 1])) / 3.0,
            ],
        ],
        dtype=complex,
    )
    return d


# ---------------------------------------------------------------------------
# Kraus decomposition of the noise term
# ---------------------------------------------------------------------------


def kraus_noise(c, tol: float = 1e-10) -> list[np.ndarray]:
    """Kraus operators W_l with sum_l W_l rho W_l^dag = sum_ij C_ij sigma_j rho sigma_i.

    W_l = sqrt(c_l) sum_j psi_l[j] sigma_j, built from the eigendecomposition
    C = sum_l c_l |psi_l><psi_l|.  Exists exactly when C is PSD; otherwise a
    :class:`NotCompletelyPositiveError` carrying the offending eigenvalue is
    raised.  Eigenvalues are ordered descending, with each eigenvector's first
    nonzero component made positive to fix the sign.
    """
    if isinstance(c, KossakowskiMatrix):
        a = c.matrix
    else:
        a = np.asarray(c, dtype=float)
        if a.shape != (3, 3) or np.max(np.abs(a - a.T)) > 1e-12:
            raise ValueError("Kraus decomposition requires a real symmetric 3x3 matrix")
    eigvals, eigvecs = np.linalg.eigh(a)
    if eigvals[0] < -tol:
        raise NotCompletelyPositiveError(eigvals[0])
    order = np.argsort(-eigvals, kind="stable")
    ops = []
    for l in order:
        val = max(float(eigvals[l]), 0.0)
        vec = eigvecs[:, l].copy()
        nonzero = np.nonzero(np.abs(vec) > 1e-12)[0]
        if nonzero.size and vec[nonzero[0]] < 0:
            vec = -vec
        w = np.sqrt(val) * sum(vec[j] * _SIGMA[j] for j in range(3))
        ops.append(w)
    return ops


# ---------------------------------------------------------------------------
# exact Bloch dynamics for diagonal C
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlochState:
    """A qubit state as its Bloch vector; physical iff the norm is at most 1."""

    r1: float
    r2: float
    r3: float

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.r1**2 + self.r2**2 + self.r3**2))

    @property
    def density_matrix(self) -> np.ndarray:
        return 0.5 * (
            IDENTITY_2 + self.r1 * _SIGMA[0] + self.r2 * _SIGMA[1] + self.r3 * _SIGMA[2]
        )


def bloch_evolve(c: KossakowskiMatrix, state: BlochState, t: float) -> BlochState:
    """Exact semigroup action on the Bloch vector for diagonal C.

    Component k decays as exp(-2 (c_total - c_k) t) with c_total the trace of
    C.  Non-diagonal C is rejected; use the oracle's matrix exponential for
    the general case.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if max(abs(c.c12), abs(c.c13), abs(c.c23)) > 1e-12:
        raise ValueError(
            "bloch_evolve supports diagonal Kossakowski matrices only; "
            "use kossprobe.oracle.exact_qubit_evolution for the general case"
        )
    diag = np.array([c.c11, c.c22, c.c33])
    total = diag.sum()
    decay = np.exp(-2.0 * (total - diag) * t)
    r = np.array([state.r1, state.r2, state.r3]) * decay
    return BlochState(float(r[0]), float(r[1]), float(r[2]))
