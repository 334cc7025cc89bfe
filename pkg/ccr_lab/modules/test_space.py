"""
Finite-dimensional model of the test-function space S.

A space is C^d with an antilinear involution J(f) = A·conj(f), a bilinear
two-point kernel K with W2(f, g) = fᵀ·K·g, and optional component labels
for vector-valued fields.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from .checks import CheckRecord

# Relative eigenvalue slack for positivity of the Hermitian form
POSITIVITY_TOLERANCE = 1e-10
# Absolute slack when deciding whether a vector is a fixed point of J
HERMITIAN_TOLERANCE = 1e-10
INVOLUTION_TOLERANCE = 1e-10


def _square_matrix(name: str, value, dim: Optional[int] = None) -> np.ndarray:
    try:
        matrix = np.array(value, dtype=complex)
    except (ValueError, TypeError) as e:
        raise ValueError(f"shape: {name} is not a rectangular numeric array ({e})") from e
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"shape: {name} must be a square matrix, got shape {matrix.shape}")
    if dim is not None and matrix.shape[0] != dim:
        raise ValueError(f"shape: {name} must be {dim}x{dim}, got {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"{name} contains non-finite entries")
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class TestSpace:
    """C^d with conjugation, two-point kernel and component structure."""
    __test__ = False

    two_point: np.ndarray
    involution: Optional[np.ndarray] = None
    components: Optional[Tuple[str, ...]] = None
    tolerance: float = POSITIVITY_TOLERANCE
    name: str = field(default="space")

    def __post_init__(self):
        kernel = _square_matrix("two_point", self.two_point)
        dim = kernel.shape[0]
        if dim < 1:
            raise ValueError("shape: dimension must be positive")
        if self.involution is None:
            involution = np.eye(dim, dtype=complex)
            involution.setflags(write=False)
        else:
            involution = _square_matrix("involution", self.involution, dim)
        components = self.components
        if components is not None:
            components = tuple(str(label) for label in components)
            if len(components) != dim:
                raise ValueError(f"components must label all {dim} basis indices, got {len(components)}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "two_point", kernel)
        object.__setattr__(self, "involution", involution)
        object.__setattr__(self, "components", components)

    @property
    def dim(self) -> int:
        return self.two_point.shape[0]

    def vector(self, f) -> np.ndarray:
        """Coerce f to a complex coefficient vector of this space."""
        f = np.asarray(f, dtype=complex)
        if f.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: expected vector of length {self.dim}, got shape {f.shape}")
        return f

    def basis_vector(self, index: int) -> np.ndarray:
        if not 0 <= index < self.dim:
            raise ValueError(f"invalid index {index} for dimension {self.dim}")
        e = np.zeros(self.dim, dtype=complex)
        e[index] = 1.0
        return e

    # -- conjugation -------------------------------------------------------

    def conjugate(self, f) -> np.ndarray:
        """J(f) = A·conj(f)."""
        return self.involution @ np.conj(self.vector(f))

    def is_hermitian(self, f, tolerance: float = HERMITIAN_TOLERANCE) -> bool:
        f = self.vector(f)
        return np.linalg.norm(self.conjugate(f) - f) <= tolerance * max(1.0, np.linalg.norm(f))

    def require_hermitian(self, *vectors) -> None:
        for f in vectors:
            if not self.is_hermitian(f):
                raise ValueError(f"non-hermitian test vector: conjugate(f) != f for f = {np.round(f, 6)}")

    @cached_property
    def hermitian_basis(self) -> List[np.ndarray]:
        """Real-linear basis of the fixed points of J.

        Candidates (v + J v)/2 for v in {e_k, i·e_k} are kept greedily while they
        stay real-linearly independent, so componentwise conjugation yields the
        standard basis.
        """
        basis: List[np.ndarray] = []
        rows: List[np.ndarray] = []
        for k in range(self.dim):
            e = self.basis_vector(k)
            for seed in (e, 1j * e):
                candidate = (seed + self.conjugate(seed)) / 2
                norm = np.linalg.norm(candidate)
                if norm <= HERMITIAN_TOLERANCE:
                    continue
                candidate = candidate / norm
                row = np.concatenate([candidate.real, candidate.imag])
                if np.linalg.matrix_rank(np.vstack(rows + [row]), tol=1e-10) > len(rows):
                    rows.append(row)
                    basis.append(candidate)
        if len(basis) != self.dim:
            logging.warning(f"{self.name}: fixed set of the involution has real dimension {len(basis)}, expected {self.dim}")
        return basis

    # -- two-point structure -----------------------------------------------

    def two_point_value(self, f, g) -> complex:
        """Bilinear W2(f, g) = fᵀ·K·g."""
        return complex(self.vector(f) @ self.two_point @ self.vector(g))

    @cached_property
    def form_matrix(self) -> np.ndarray:
        """Matrix H with one_particle_form(f, g) = fᴴ·H·g, i.e. H = 2·Aᵀ·K."""
        return 2 * self.involution.T @ self.two_point

    def one_particle_form(self, f, g) -> complex:
        """Sesquilinear ⟨f, g⟩ = 2·W2(J(f), g)."""
        return 2 * self.two_point_value(self.conjugate(f), g)

    def sigma(self, f, g) -> float:
        """Symplectic form 2·Im W2(f, g) on hermitian vectors."""
        self.require_hermitian(f, g)
        return 2 * self.two_point_value(f, g).imag

    def sigma_matrix(self) -> np.ndarray:
        """Real antisymmetric matrix of sigma over the hermitian basis."""
        basis = self.hermitian_basis
        matrix = np.array([[self.sigma(f, g) for g in basis] for f in basis], dtype=float)
        return matrix.reshape(len(basis), len(basis))

    # -- components ----------------------------------------------------------

    @property
    def component_labels(self) -> List[str]:
        """Distinct labels in order of first appearance."""
        labels = self.components or tuple(f"x{k + 1}" for k in range(self.dim))
        return list(dict.fromkeys(labels))

    def component_of(self, index: int) -> str:
        return (self.components or tuple(f"x{k + 1}" for k in range(self.dim)))[index]

    def component_projection(self, f, label: str) -> np.ndarray:
        """Coordinates of f carrying `label`; the rest set to zero."""
        f = self.vector(f)
        if label not in self.component_labels:
            raise ValueError(f"unknown component label {label!r}")
        mask = np.array([self.component_of(k) == label for k in range(self.dim)])
        return np.where(mask, f, 0)

    def describe(self, f, digits: int = 6) -> str:
        f = self.vector(f)
        terms = []
        for k, c in enumerate(np.round(f, digits)):
            if c != 0:
                terms.append(f"({c.real:g}{c.imag:+g}j)·{self.component_of(k)}[{k + 1}]")
        return " + ".join(terms) if terms else "0"

    # -- random vectors for property checks ------------------------------------

    def random_vector(self, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)

    def random_hermitian(self, rng: np.random.Generator) -> np.ndarray:
        basis = self.hermitian_basis
        weights = rng.standard_normal(len(basis))
        return sum((w * b for w, b in zip(weights, basis)), np.zeros(self.dim, dtype=complex))

    # -- invariants ----------------------------------------------------------

    def validate(self) -> List[CheckRecord]:
        """Measure the space invariants; failures are reported, not raised."""
        A = self.involution
        records = [
            CheckRecord.measure(
                "involution",
                np.linalg.norm(A @ np.conj(A) - np.eye(self.dim), 2),
                INVOLUTION_TOLERANCE,
            )
        ]
        H = self.form_matrix
        scale = max(np.linalg.norm(H, 2), 1.0)
        records.append(CheckRecord.measure("form_hermitian", np.linalg.norm(H - H.conj().T, 2) / scale, self.tolerance))
        eigenvalues = np.linalg.eigvalsh((H + H.conj().T) / 2)
        lam_scale = max(np.max(np.abs(eigenvalues)), np.finfo(float).tiny)
        positivity_defect = max(0.0, -float(eigenvalues.min())) / lam_scale
        records.append(
            CheckRecord.measure(
                "form_positive",
                positivity_defect,
                self.tolerance,
                detail=f"eigenvalues {np.array2string(eigenvalues, precision=6)}",
            )
        )
        return records


def space_from_matrices(
    w2_real: Sequence[Sequence[float]],
    w2_imag: Sequence[Sequence[float]],
    involution_real: Optional[Sequence[Sequence[float]]] = None,
    involution_imag: Optional[Sequence[Sequence[float]]] = None,
    components: Optional[Sequence[str]] = None,
    tolerance: float = POSITIVITY_TOLERANCE,
    name: str = "space",
) -> TestSpace:
    """Build a space from real/imaginary matrix parts as stored in run configurations."""
    real = _square_matrix("w2_real", w2_real).real
    imag = _square_matrix("w2_imag", w2_imag).real
    if real.shape != imag.shape:
        raise ValueError(f"shape: w2_real {real.shape} and w2_imag {imag.shape} differ")
    involution = None
    if involution_real is not None or involution_imag is not None:
        inv_real = np.array(involution_real if involution_real is not None else np.zeros_like(real), dtype=float)
        inv_imag = np.array(involution_imag if involution_imag is not None else np.zeros_like(inv_real), dtype=float)
        if inv_real.shape != inv_imag.shape:
            raise ValueError(f"shape: involution_real {inv_real.shape} and involution_imag {inv_imag.shape} differ")
        involution = inv_real + 1j * inv_imag
    return TestSpace(
        two_point=real + 1j * imag,
        involution=involution,
        components=tuple(components) if components is not None else None,
        tolerance=tolerance,
        name=name,
    )
