"""Tight 2x2 complex linear algebra over the Pauli basis.

Conventions used throughout the package: hbar = 1, all times and energies
dimensionless, matrices are plain (2, 2) complex numpy arrays. The helper
types here only wrap decompositions; they never hide the arrays.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonDiagonalizable, NotHermitian, NotPositiveDefinite

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# Absolute Frobenius tolerance; every matrix handled here is O(1).
DEFAULT_HERMITICITY_TOL = 1e-10


def complex2x2(m) -> np.ndarray:
    """Validate and return ``m`` as a (2, 2) complex array with finite entries."""
    out = np.asarray(m, dtype=complex)
    if out.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix entries must be finite")
    return out


@dataclass(frozen=True)
class PauliCoefficients:
    """Expansion coefficients of a matrix over {I, sigma_x, sigma_y, sigma_z}."""

    a0: complex
    ax: complex
    ay: complex
    az: complex

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.ax, self.ay, self.az])


@dataclass(frozen=True)
class EigenSystem2:
    """Eigenpairs of a 2x2 matrix sorted ascending by (Re, Im) of the eigenvalue.

    ``vectors[:, k]`` is the unit-norm eigenvector belonging to
    ``values[k]``; its largest-magnitude component is rotated to be real and
    positive, so repeated calls on the same matrix are bitwise identical.
    """

    values: np.ndarray
    vectors: np.ndarray


def pauli_decompose(m) -> PauliCoefficients:
    """Project onto the Pauli basis: a0 = tr(m)/2, a_j = tr(sigma_j m)/2."""
    m = complex2x2(m)
    a0 = 0.5 * (m[0, 0] + m[1, 1])
    ax = 0.5 * (m[0, 1] + m[1, 0])
    ay = 0.5j * (m[0, 1] - m[1, 0])
    az = 0.5 * (m[0, 0] - m[1, 1])
    return PauliCoefficients(a0, ax, ay, az)


def pauli_compose(c: PauliCoefficients) -> np.ndarray:
    """Rebuild a0*I + ax*sigma_x + ay*sigma_y + az*sigma_z."""
    return c.a0 * IDENTITY + c.ax * SIGMA_X + c.ay * SIGMA_Y + c.az * SIGMA_Z


def hermiticity_residual(m) -> float:
    """Frobenius norm of m - m^dagger; zero exactly when m is Hermitian."""
    m = complex2x2(m)
    return float(np.linalg.norm(m - m.conj().T))


def eigensystem(m, max_vector_condition: float = 1e6) -> EigenSystem2:
    """Eigendecomposition of a diagonalizable 2x2 complex matrix.

    Raises NonDiagonalizable when the eigenvector matrix condition number
    exceeds ``max_vector_condition`` (eigenvectors numerically parallel, as
    at an exceptional point) or when an eigenpair residual fails
    ||m v - e v|| <= 1e-12 ||m||.
    """
    m = complex2x2(m)
    values, vectors = np.linalg.eig(m)
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order]
    for k in range(2):
        v = vectors[:, k]
        v = v / np.linalg.norm(v)
        pivot = v[int(np.argmax(np.abs(v)))]
        vectors[:, k] = v * (abs(pivot) / pivot)
    cond = np.linalg.cond(vectors)
    if not np.isfinite(cond) or cond > max_vector_condition:
        raise NonDiagonalizable(
            f"eigenvector condition number {cond:.3e} exceeds {max_vector_condition:.1e}"
        )
    scale = max(float(np.linalg.norm(m)), 1e-300)
    for k in range(2):
        residual = np.linalg.norm(m @ vectors[:, k] - values[k] * vectors[:, k])
        if residual > 1e-12 * scale:
            raise NonDiagonalizable(
                f"eigenpair residual {residual:.3e} too large relative to ||m|| = {scale:.3e}"
            )
    return EigenSystem2(values=values, vectors=vectors)


def hermitian_sqrt(m, hermiticity_tol: float = DEFAULT_HERMITICITY_TOL) -> np.ndarray:
    """Principal square root of a Hermitian positive-definite 2x2 matrix.

    Diagonalizes m = U D U^dagger and returns U D^(1/2) U^dagger with the
    entrywise-positive root, so the result is again Hermitian positive
    definite. Scalar multiples of the identity are returned directly: their
    eigenbasis is arbitrary and diagonalization adds nothing but noise.
    """
    m = complex2x2(m)
    if hermiticity_residual(m) > hermiticity_tol:
        raise NotHermitian(
            f"hermiticity residual {hermiticity_residual(m):.3e} exceeds {hermiticity_tol:.1e}"
        )
    tr = (m[0, 0] + m[1, 1]).real
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    if det <= 0.0 or tr <= 0.0:
        raise NotPositiveDefinite(f"not positive definite: tr = {tr:.6g}, det = {det:.6g}")
    c = 0.5 * tr
    if np.linalg.norm(m - c * IDENTITY) <= 1e-12 * max(abs(c), 1.0):
        return complex(np.sqrt(c)) * IDENTITY
    sym = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(sym)
    if w[0] <= 0.0:
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.6g} is not positive")
    return (v * np.sqrt(w)) @ v.conj().T
