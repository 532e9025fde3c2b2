"""Forward model: first-order detection probability rates at the probe point.

A scattering eigenstate evolved for a short time t under the lifted dissipator
is detected at a point x with total spin projected onto a probe frame's last
basis vector.  To first order in t the detection probability per unit time is
the quadratic form

    P/t = <phi(x)| D |phi(x)>,

with phi the two-component spatial amplitude vector (transmitted or reflected
side) and D the compressed dissipator of :func:`kossprobe.kossakowski.d_tilde`
evaluated in the probe frame.  Measuring in the canonical frame and in the two
rotated frames, on both sides, yields six rates that are linear in the six
free entries of the Kossakowski matrix:

    rates = M @ c_vector.

``build_matrix_programmatic`` assembles M column by column from unit coupling
matrices pushed through the forward model, which keeps it free of any
hand-transcribed coefficient.  ``build_matrix_appendix`` assembles the
hand-derived closed-form table for M at the quarter-wave phase; it is kept as
a cross-check target and is known to deviate from the programmatic ground
truth in a handful of entries (see :func:`compare_matrices` and the committed
adjudication report).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kossakowski import as_coupling_matrix, d_tilde
from .scattering import ScatteringCoefficients, probe_amplitudes
from .spin import BASIS_LABELS, SpinBasis, basis, pauli_frame

CHANNELS = ("P0T", "P1T", "P2T", "P0R", "P1R", "P2R")
SIDES = ("transmitted", "reflected")
CANONICAL_PHASE = np.pi / 2.0


def _is_canonical(phase: float, tol: float = 1e-12) -> bool:
    return bool(abs((phase - CANONICAL_PHASE) % (2.0 * np.pi)) <= tol
                or abs((phase - CANONICAL_PHASE) % (2.0 * np.pi) - 2.0 * np.pi) <= tol)


@dataclass(frozen=True)
class ProbeResult:
    """The six probability rates, ordered (P0T, P1T, P2T, P0R, P1R, P2R)."""

    rates: np.ndarray
    g: float
    phase: float

    def __post_init__(self) -> None:
        self.rates.setflags(write=False)

    @property
    def is_canonical_phase(self) -> bool:
        return _is_canonical(self.phase)

    def by_channel(self) -> dict[str, float]:
        return {label: float(r) for label, r in zip(CHANNELS, self.rates)}


@dataclass(frozen=True)
class ProbeMatrix:
    """The 6x6 rate matrix with its determinant and condition number.

    Columns follow the coupling-vector order (c11, c12, c13, c22, c23, c33),
    rows the channel order of :class:`ProbeResult`.
    """

    matrix: np.ndarray
    g: float
    phase: float
    source: str
    det: float
    condition_number: float

    def __post_init__(self) -> None:
        self.matrix.setflags(write=False)

    def to_dict(self) -> dict:
        return {
            "matrix": [[float(x) for x in row] for row in self.matrix],
            "g": self.g,
            "phase": self.phase,
            "source": self.source,
            "det": self.det,
            "condition_number": self.condition_number,
            "rows": list(CHANNELS),
            "columns": ["c11", "c12", "c13", "c22", "c23", "c33"],
        }


def _resolve_basis(b: SpinBasis | str) -> SpinBasis:
    if isinstance(b, SpinBasis):
        return b
    return basis(b)


def probability_rate(
    c,
    coeffs: ScatteringCoefficients,
    probe_basis: SpinBasis | str,
    side: str,
    phase: float = CANONICAL_PHASE,
) -> float:
    """Detection rate P/t for one probe frame and one side of the impurity.

    Rotating the probe frame is equivalent to expressing the Kossakowski
    matrix in the rotated Pauli frame, so the rate is the canonical quadratic
    form evaluated at the frame-rotated coupling matrix.  Transmitted-side
    rates are independent of the probe phase.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    b = _resolve_basis(probe_basis)
    frame = pauli_frame(b.impurity_rotation)
    rotated = frame.T @ as_coupling_matrix(c) @ frame
    w = probe_amplitudes(coeffs, side, phase)
    return float(np.real(w.conj() @ d_tilde(rotated) @ w))


def forward(
    c, coeffs: ScatteringCoefficients, phase: float = CANONICAL_PHASE
) -> ProbeResult:
    """All six rates: three probe frames on the transmitted side, then reflected."""
    bases = [basis(label) for label in BASIS_LABELS]
    rates = np.array(
        [
            probability_rate(c, coeffs, b, side, phase)
            for side in SIDES
            for b in bases
        ]
    )
    return ProbeResult(rates=rates, g=coeffs.g, phase=phase)


def _unit_couplings() -> list[np.ndarray]:
    units = []
    for i, j in ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)):
        e = np.zeros((3, 3))
        e[i, j] = 1.0
        e[j, i] = 1.0
        units.append(e)
    return units


def build_matrix_programmatic(
    coeffs: ScatteringCoefficients, phase: float = CANONICAL_PHASE
) -> ProbeMatrix:
    """Assemble M column by column: column beta is forward() of the beta-th
    symmetric unit coupling matrix (off-diagonal units carry both mirror
    entries, matching the six-parameter vector convention)."""
    columns = [forward(e, coeffs, phase).rates for e in _unit_couplings()]
    m = np.column_stack(columns)
    return ProbeMatrix(
        matrix=m,
        g=coeffs.g,
        phase=phase,
        source="programmatic",
        det=float(np.linalg.det(m)),
        condition_number=float(np.linalg.cond(m)),
    )


def appendix_coefficients(coeffs: ScatteringCoefficients) -> dict[str, float]:
    """The eight closed-form constants of the tabulated quarter-wave matrix."""
    re0, im0 = coeffs.t0.real, coeffs.t0.imag
    re1, im1 = coeffs.t1.real, coeffs.t1.imag
    return {
        "a0": re0,
        "a1": re1,
        "b": 2.0 * (-im0 * re1 + im1 * re0),
        "c": 2.0 * (re0 * re1 + im1 * im0),
        "d0": 2.0 - abs(coeffs.t0) ** 2 + 2.0 * im0,
        "d1": 2.0 - abs(coeffs.t1) ** 2 + 2.0 * im1,
        "e": 2.0 * (im0 * re1 + im1 * re0 + re0 - re1 + im0 - im1),
        "f": 2.0 * (2.0 + re0 * re1 + im1 * im0 - re0 - re1 + im0 + im1),
    }


def build_matrix_appendix(coeffs: ScatteringCoefficients) -> ProbeMatrix:
    """The hand-derived coefficient table for M at the quarter-wave phase.

    Kept verbatim as a cross-validation target for the programmatic
    construction; the two are compared, never silently reconciled.
    """
    k = appendix_coefficients(coeffs)
    a0, a1, b, c = k["a0"], k["a1"], k["b"], k["c"]
    d0, d1, e, f = k["d0"], k["d1"], k["e"], k["f"]
    m = np.array(
        [
            [a0, b, c, a1, 0.0, 2.0 * a1],
            [a0, -c, b, 2.0 * a1, 0.0, a1],
            [2.0 * a1, 0.0, -c, a1, b, a0],
            [d0, e, f, d1, 0.0, 2.0 * d1],
            [d0, -f, e, 2.0 * d1, 0.0, d1],
            [2.0 * d1, 0.0, -f, d1, e, d0],
        ]
    )
    return ProbeMatrix(
        matrix=m,
        g=coeffs.g,
        phase=CANONICAL_PHASE,
        source="appendix",
        det=float(np.linalg.det(m)),
        condition_number=float(np.linalg.cond(m)),
    )


def compare_matrices(
    reference: ProbeMatrix, other: ProbeMatrix, tol: float = 1e-12
) -> dict:
    """Entrywise deviation report between two rate-matrix constructions."""
    diff = np.abs(other.matrix - reference.matrix)
    entries = [
        {
            "row": int(i),
            "col": int(j),
            "reference": float(reference.matrix[i, j]),
            "other": float(other.matrix[i, j]),
            "abs_deviation": float(diff[i, j]),
        }
        for i, j in zip(*np.nonzero(diff > tol))
    ]
    return {
        "reference_source": reference.source,
        "other_source": other.source,
        "g": reference.g,
        "max_abs_deviation": float(diff.max()),
        "deviating_entries": entries,
        "agrees": not entries,
    }


__all__ = [
    "CHANNELS",
    "SIDES",
    "CANONICAL_PHASE",
    "ProbeResult",
    "ProbeMatrix",
    "probability_rate",
    "forward",
    "build_matrix_programmatic",
    "build_matrix_appendix",
    "appendix_coefficients",
    "compare_matrices",
]
