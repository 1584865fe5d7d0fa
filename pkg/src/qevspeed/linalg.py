"""Dense complex linear algebra for operators on small Hilbert spaces.

Everything here targets dimensions <= 8 (one to three qubits), so clarity and
determinism win over asymptotic performance. Matrices are plain complex
``numpy`` arrays; an operator tagged Hermitian must satisfy
``max_ij |M_ij - conj(M_ji)| <= HERM_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigenSolverError

# Absolute tolerance for conjugate symmetry. All model matrices are analytic
# and exactly Hermitian up to rounding, so this can be tight.
HERM_TOL = 1e-10

# Eigenvalues closer than this are flagged degenerate; consumers that need
# eigenvector derivatives must check the flag.
EIG_DEGENERACY_TOL = 1e-9

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def hermitian_deviation(matrix: np.ndarray) -> float:
    """Largest entrywise deviation from conjugate symmetry."""
    m = np.asarray(matrix)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_check(matrix: np.ndarray, tol: float = HERM_TOL) -> bool:
    """True iff ``matrix`` is Hermitian within the absolute tolerance ``tol``."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float) if m.dtype == complex else m)):
        raise ValueError("matrix contains NaN or Inf entries")
    return hermitian_deviation(m) <= tol


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are ascending; column ``k`` of ``eigenvectors`` pairs with
    ``eigenvalues[k]``. Each eigenvector carries a fixed gauge: its
    largest-magnitude component is real and positive, which keeps
    finite-difference eigenvector derivatives well-defined away from
    degeneracies. ``degenerate`` is set when any eigenvalue gap is below
    ``EIG_DEGENERACY_TOL``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degenerate: bool

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    out = np.array(vectors, dtype=complex, copy=True)
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        pivot = out[idx, k]
        out[:, k] *= abs(pivot) / pivot
    return out


def eigh(matrix: np.ndarray, tol: float = HERM_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix with a deterministic gauge.

    Raises ``ValueError`` for non-Hermitian input and ``EigenSolverError``
    when the underlying solver fails to converge.
    """
    m = np.asarray(matrix, dtype=complex)
    if not hermitian_check(m, tol):
        raise ValueError(
            f"matrix is not Hermitian within {tol:.1e} "
            f"(deviation {hermitian_deviation(m):.3e})"
        )
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigenSolverError(f"eigendecomposition did not converge: {exc}") from exc
    degenerate = bool(values.size > 1 and np.min(np.diff(values)) < EIG_DEGENERACY_TOL)
    return EigenSystem(values, _fix_phases(vectors), degenerate)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product trace(adjoint(a) @ b)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with index convention (row a * dim_b + b)."""
    return np.kron(np.asarray(a), np.asarray(b))


def assert_density(rho: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Validate a density operator (Hermitian, unit trace, PSD within tol)."""
    m = np.asarray(rho, dtype=complex)
    if not hermitian_check(m, max(tol, HERM_TOL)):
        raise ValueError("density operator must be Hermitian")
    trace = complex(np.trace(m))
    if abs(trace - 1.0) > tol:
        raise ValueError(f"density operator must have unit trace, got {trace:.6g}")
    smallest = float(np.linalg.eigvalsh(m)[0])
    if smallest < -tol:
        raise ValueError(f"density operator has negative eigenvalue {smallest:.3e}")
    return m
