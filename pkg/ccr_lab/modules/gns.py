"""
Truncated GNS space D_1/D_0 built from the Gram matrix of degree-≤N monomials.

Represented operators are compressions P_N A P_N computed from exact Wightman
data, so Hermiticity survives truncation; identities that need room above the
truncation degree are probed on the image of lower-degree monomials only.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence
import logging
import math

import numpy as np
from scipy.linalg import orth, subspace_angles

from .tensor_algebra import TensorPoly, bch_log, monomial_count
from .test_space import TestSpace
from .wightman_functional import GramMatrix, WightmanFunctional

DEFAULT_CUT = 1e-10
RADICAL_TOLERANCE = 1e-10
# U_f U_g = exp(WEYL_PHASE_SIGN · iσ(f,g)/2) U_{f+g} when [Φ(f), Φ(g)] = iσ(f,g)
WEYL_PHASE_SIGN = -1


@dataclass(frozen=True, eq=False)
class RepresentedOperator:
    matrix: np.ndarray
    label: str

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def unitarity_defect(self) -> float:
        size = self.matrix.shape[0]
        return float(np.linalg.norm(self.matrix.conj().T @ self.matrix - np.eye(size), 2))

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2)) if self.matrix.size else 0.0


@dataclass(frozen=True)
class GeneratorReport:
    delta: float
    defect: float
    defect_half: float
    order: Optional[float]


def _real_coordinates(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Columns [Re v; Im v] so that complex vectors can be compared real-linearly."""
    return np.array([np.concatenate([v.real, v.imag]) for v in vectors]).T


def _real_null_space(columns: np.ndarray, tolerance: float) -> np.ndarray:
    """Real coefficient vectors c with ‖columns·c‖ ≤ tolerance·scale."""
    stacked = np.vstack([columns.real, columns.imag])
    _, singular, vh = np.linalg.svd(stacked)
    scale = max(float(singular.max(initial=0.0)), 1.0)
    rank = int(np.sum(singular > tolerance * scale))
    return vh[rank:].T


def subspace_distance(first: Sequence[np.ndarray], second: Sequence[np.ndarray]) -> float:
    """Largest principal angle between two real spans; π/2 when dimensions differ."""
    if len(first) == 0 and len(second) == 0:
        return 0.0
    if len(first) == 0 or len(second) == 0:
        return math.pi / 2
    a, b = orth(_real_coordinates(first)), orth(_real_coordinates(second))
    if a.shape[1] != b.shape[1]:
        return math.pi / 2
    return float(np.max(subspace_angles(a, b)))


def inclusion_defect(inner: Sequence[np.ndarray], outer: Sequence[np.ndarray]) -> float:
    """Largest distance of a unit vector of span(inner) from span(outer)."""
    if len(inner) == 0:
        return 0.0
    a = orth(_real_coordinates(inner))
    if len(outer) == 0:
        return 1.0
    b = orth(_real_coordinates(outer))
    return float(np.linalg.norm(a - b @ (b.T @ a), 2))


def sigma_radical(space: TestSpace) -> List[np.ndarray]:
    """Hermitian directions f with σ(g, f) = 0 for every hermitian g."""
    basis = space.hermitian_basis
    if not basis:
        return []
    # absolute cut against the form, so that σ ≡ 0 yields the whole hermitian span
    scale = max(float(np.linalg.norm(space.form_matrix, 2)), 1.0)
    _, singular, vh = np.linalg.svd(space.sigma_matrix())
    coefficients = vh[int(np.sum(singular > RADICAL_TOLERANCE * scale)):].T
    basis_matrix = np.array(basis).T
    return [basis_matrix @ c for c in coefficients.T]


class GnsSpace:
    """Orthonormalized quotient of the degree-≤N monomials with represented fields."""

    def __init__(self, functional: WightmanFunctional, degree: int, tolerance: float,
                 gram: GramMatrix, transform: np.ndarray, embedding: np.ndarray):
        self.functional = functional
        self.space = functional.space
        self.degree = degree
        self.tolerance = tolerance
        self.gram = gram
        # rows: orthonormal basis vectors written in monomial coordinates
        self.transform = transform
        # columns: q(m_b) in orthonormal coordinates
        self.embedding = embedding
        self.basis_fields = np.array([
            self._compress(functional.field_matrix(functional.space.basis_vector(i), degree))
            for i in range(functional.space.dim)
        ])
        for array in (self.transform, self.embedding, self.basis_fields):
            array.setflags(write=False)

    @property
    def rank(self) -> int:
        return self.transform.shape[0]

    def _compress(self, elements: np.ndarray) -> np.ndarray:
        return self.transform @ elements @ self.transform.conj().T

    def orthonormality_defect(self) -> float:
        return float(np.linalg.norm(self._compress(self.gram.matrix) - np.eye(self.rank), 2))

    def coordinates(self, u: TensorPoly) -> np.ndarray:
        """q(u) in orthonormal coordinates."""
        return self.embedding @ u.truncate(self.degree).coefficients()

    @property
    def vacuum(self) -> np.ndarray:
        return self.embedding[:, 0]

    def image_basis(self, probe_degree: int) -> np.ndarray:
        """Orthonormal columns spanning q(degree-≤P monomials)."""
        if not 0 <= probe_degree <= self.degree:
            raise ValueError(f"probe degree {probe_degree} out of range 0..{self.degree}")
        columns = self.embedding[:, :monomial_count(self.space.dim, probe_degree)]
        # singular values are square roots of Gram eigenvalues; same cut as build_gns
        return orth(columns, rcond=math.sqrt(self.tolerance))

    # -- represented operators -----------------------------------------------------

    def represent_field(self, h) -> RepresentedOperator:
        """Φ_N(h) = P_N Φ(h) P_N, linear in h."""
        h = self.space.vector(h)
        return RepresentedOperator(np.tensordot(h, self.basis_fields, axes=1), "field")

    def weyl_operator(self, h, t: float) -> RepresentedOperator:
        """exp(i·t·Φ_N(h)) through the Hermitian eigendecomposition of Φ_N(h)."""
        self.space.require_hermitian(h)
        field = self.represent_field(h).matrix
        eigenvalues, vectors = np.linalg.eigh((field + field.conj().T) / 2)
        return RepresentedOperator((vectors * np.exp(1j * t * eigenvalues)) @ vectors.conj().T, "weyl")

    def vacuum_expectation(self, h, t: float) -> complex:
        vacuum = self.vacuum
        return complex(vacuum.conj() @ self.weyl_operator(h, t).matrix @ vacuum)

    def generator_check(self, h, delta: float) -> GeneratorReport:
        """Central difference of U_{th} at t = 0 against iΦ_N(h) on q(degree ≤ N-1)."""
        if delta <= 0:
            raise ValueError(f"step must be positive, got {delta}")
        self.space.require_hermitian(h)
        generator = 1j * self.represent_field(h).matrix
        probe = self.image_basis(max(self.degree - 1, 0))

        def defect(step: float) -> float:
            difference = (self.weyl_operator(h, step).matrix - self.weyl_operator(h, -step).matrix) / (2 * step)
            return float(np.linalg.norm((difference - generator) @ probe, 2))

        coarse, fine = defect(delta), defect(delta / 2)
        order = math.log2(coarse / fine) if coarse > 0 and fine > 0 else None
        return GeneratorReport(delta, coarse, fine, order)

    def commutator_defect(self, f, h) -> float:
        """‖([Φ_N(f), Φ_N(h)] - iσ(f,h)) restricted to q(degree ≤ N-2)‖."""
        sigma = self.space.sigma(f, h)
        if self.degree < 2:
            raise ValueError("commutator defect needs truncation degree >= 2")
        a, b = self.represent_field(f).matrix, self.represent_field(h).matrix
        defect = a @ b - b @ a - 1j * sigma * np.eye(self.rank)
        return float(np.linalg.norm(defect @ self.image_basis(self.degree - 2), 2))

    def weyl_defect(self, f, h, probe_degree: int, phase_sign: int = WEYL_PHASE_SIGN) -> float:
        """‖(U_f U_h - e^{±iσ(f,h)/2} U_{f+h}) restricted to q(degree ≤ P)‖."""
        if not 0 <= probe_degree <= self.degree - 2:
            raise ValueError(f"probe degree {probe_degree} out of range 0..{self.degree - 2}")
        sigma = self.space.sigma(f, h)
        f, h = self.space.vector(f), self.space.vector(h)
        product_ = self.weyl_operator(f, 1.0).matrix @ self.weyl_operator(h, 1.0).matrix
        phase = np.exp(phase_sign * 0.5j * sigma)
        defect = product_ - phase * self.weyl_operator(f + h, 1.0).matrix
        return float(np.linalg.norm(defect @ self.image_basis(probe_degree), 2))

    def adjoint_defect(self, f) -> float:
        """‖Φ_N(f)ᴴ - Φ_N(J f)‖ for any f."""
        field = self.represent_field(f).matrix
        return float(np.linalg.norm(field.conj().T - self.represent_field(self.space.conjugate(f)).matrix, 2))

    def component_sum_defect(self, f) -> float:
        """‖Σ_j Φ_N(f^{(j)}) - Φ_N(f)‖ over the component labels."""
        parts = sum(self.represent_field(self.space.component_projection(f, label)).matrix
                    for label in self.space.component_labels)
        return float(np.linalg.norm(parts - self.represent_field(f).matrix, 2))

    def bch_quotient_defect(self, f, h, probe_degree: int, bch_degree: int = 3) -> float:
        """Matrix elements of log(e^{if⊗} e^{ih⊗}) against i(f+h) - iσ(f,h)/2 between degree-≤P monomials.

        Every BCH term with more than one bracket lies in D_0, so the difference vanishes.
        """
        sigma = self.space.sigma(f, h)
        f, h = self.space.vector(f), self.space.vector(h)
        w = bch_log(self.space, 1j * f, 1j * h, 1.0, bch_degree)
        reduced = TensorPoly(self.space, (np.array(-0.5j * sigma), 1j * (f + h)))
        functional = self.functional
        difference = functional.element_matrix(w, probe_degree) - functional.element_matrix(reduced, probe_degree)
        return float(np.max(np.abs(difference), initial=0.0))

    # -- radicals -------------------------------------------------------------------

    def field_radical(self) -> List[np.ndarray]:
        """Hermitian directions f whose represented field vanishes."""
        basis = self.space.hermitian_basis
        if not basis:
            return []
        columns = np.array([self.represent_field(b).matrix.ravel() for b in basis]).T
        coefficients = _real_null_space(columns, self.tolerance)
        basis_matrix = np.array(basis).T
        return [basis_matrix @ c for c in coefficients.T]

    def central_fields(self) -> List[np.ndarray]:
        """Hermitian directions whose field commutes with every field on q(degree ≤ N-2)."""
        basis = self.space.hermitian_basis
        if not basis or self.degree < 2:
            return []
        probe = self.image_basis(self.degree - 2)
        fields = [self.represent_field(b).matrix for b in basis]
        columns = np.array([
            np.concatenate([((a @ b - b @ a) @ probe).ravel() for b in fields])
            for a in fields
        ]).T
        coefficients = _real_null_space(columns, RADICAL_TOLERANCE)
        basis_matrix = np.array(basis).T
        return [basis_matrix @ c for c in coefficients.T]


def build_gns(functional: WightmanFunctional, degree: int, tolerance: float = DEFAULT_CUT) -> GnsSpace:
    """Eigendecompose the Gram matrix, drop λ ≤ ε·λ_max, transform = Λ^{-1/2}·Vᴴ."""
    if tolerance <= 0:
        raise ValueError("null-space cut must be positive")
    gram = functional.gram(degree)
    eigenvalues, vectors = np.linalg.eigh((gram.matrix + gram.matrix.conj().T) / 2)
    largest = float(eigenvalues[-1])
    if largest <= 0:
        raise ValueError("degenerate functional: the Gram matrix has no positive eigenvalue")
    kept = eigenvalues > tolerance * largest
    kept_values, kept_vectors = eigenvalues[kept], vectors[:, kept]
    transform = (kept_vectors / np.sqrt(kept_values)).conj().T
    embedding = (kept_vectors * np.sqrt(kept_values)).conj().T
    logging.info(f"{functional.space.name}: GNS space of degree {degree} has rank {kept.sum()} of {len(eigenvalues)}")
    return GnsSpace(functional, degree, tolerance, gram, transform, embedding)
