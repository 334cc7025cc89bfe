"""
Segal-quantized Fock representation over the one-particle space S/N(Φ).

Independent of the GNS construction: the one-particle form is
orthonormalized directly and fields are built from creation and
annihilation matrices on the truncated occupation-number basis.
"""
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import os

import numpy as np
from dotenv import load_dotenv

from .gns import GnsSpace
from .test_space import TestSpace
from .wightman_functional import CapacityError, pairing_count

load_dotenv()

MAX_FOCK_DIM = int(os.getenv("CCR_LAB_MAX_FOCK_DIM", 4096))
RANK_TOLERANCE = 1e-10


def occupation_states(modes: int, max_particles: int) -> List[Tuple[int, ...]]:
    """Occupation tuples with total ≤ N, ordered by total particle number."""
    states = []
    for n in range(max_particles + 1):
        for occupied in combinations_with_replacement(range(modes), n):
            states.append(tuple(occupied.count(k) for k in range(modes)))
    return states


@dataclass(frozen=True, eq=False)
class FockOperator:
    matrix: np.ndarray
    label: str

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))


@dataclass(frozen=True, eq=False)
class IntertwinerReport:
    matrix: np.ndarray
    isometry_defect: float
    intertwining_defects: Dict[str, float]

    @property
    def intertwining_defect(self) -> float:
        return max(self.intertwining_defects.values(), default=0.0)


class FockSpace:
    """Truncated symmetric Fock space over p orthonormal one-particle modes."""

    def __init__(self, space: TestSpace, degree: int, tolerance: float = RANK_TOLERANCE):
        if degree < 0:
            raise ValueError(f"degree must be non-negative, got {degree}")
        self.space = space
        self.degree = degree
        form = space.form_matrix
        eigenvalues, vectors = np.linalg.eigh((form + form.conj().T) / 2)
        largest = max(float(eigenvalues[-1]), 0.0)
        kept = eigenvalues > tolerance * largest if largest > 0 else np.zeros(len(eigenvalues), dtype=bool)
        # v(f) = embedding @ f with ⟨v(f), v(g)⟩ = one_particle_form(f, g)
        self.embedding = np.sqrt(eigenvalues[kept])[:, None] * vectors[:, kept].conj().T
        self.states = occupation_states(self.rank, degree)
        if len(self.states) > MAX_FOCK_DIM:
            raise CapacityError(f"Fock dimension {len(self.states)} exceeds the cap of {MAX_FOCK_DIM}")
        self.index = {state: i for i, state in enumerate(self.states)}
        self.particle_numbers = np.array([sum(state) for state in self.states])
        self.raising = [self._mode_creation(k) for k in range(self.rank)]
        logging.info(f"{space.name}: Fock space with {self.rank} modes, degree {degree}, dimension {self.dim}")

    @property
    def rank(self) -> int:
        return self.embedding.shape[0]

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def vacuum(self) -> np.ndarray:
        vacuum = np.zeros(self.dim, dtype=complex)
        vacuum[0] = 1.0
        return vacuum

    def _mode_creation(self, mode: int) -> np.ndarray:
        matrix = np.zeros((self.dim, self.dim), dtype=complex)
        for i, state in enumerate(self.states):
            if sum(state) == self.degree:
                continue
            raised = state[:mode] + (state[mode] + 1,) + state[mode + 1:]
            matrix[self.index[raised], i] = np.sqrt(state[mode] + 1)
        return matrix

    def embed(self, f) -> np.ndarray:
        return self.embedding @ self.space.vector(f)

    def creation(self, x: np.ndarray) -> FockOperator:
        """a†(x) = Σ_k x_k a†_k, cut at the top particle number."""
        matrix = sum((x_k * raising for x_k, raising in zip(x, self.raising)), np.zeros((self.dim, self.dim), dtype=complex))
        return FockOperator(matrix, "creation")

    def annihilation(self, y: np.ndarray) -> FockOperator:
        """a(y) = Σ_k conj(y_k) a_k, antilinear in y."""
        return FockOperator(self.creation(y).matrix.conj().T, "annihilation")

    def segal_field(self, f) -> FockOperator:
        """Φ_F(f) = (a†(v(f)) + a(v(J f))) / √2.

        This is the normalization for which ⟨Ω, Φ_F(f) Φ_F(g) Ω⟩ = W2(f, g)
        and [Φ_F(f), Φ_F(g)] = iσ(f, g) on hermitian arguments.
        """
        f = self.space.vector(f)
        raising = self.creation(self.embed(f)).matrix
        lowering = self.annihilation(self.embed(self.space.conjugate(f))).matrix
        return FockOperator((raising + lowering) / np.sqrt(2), "segal_field")

    def number_grading_defect(self, f) -> float:
        """Largest entry of Φ_F(f) linking particle numbers that differ by other than one."""
        matrix = self.segal_field(f).matrix
        gap = np.abs(self.particle_numbers[:, None] - self.particle_numbers[None, :])
        return float(np.max(np.abs(matrix[gap != 1]), initial=0.0))

    def vacuum_characteristic(self, f, t: float) -> complex:
        """⟨Ω, exp(i·t·Φ_F(f)) Ω⟩ by eigendecomposition."""
        self.space.require_hermitian(f)
        field = self.segal_field(f).matrix
        eigenvalues, vectors = np.linalg.eigh((field + field.conj().T) / 2)
        weights = np.abs(vectors[0, :]) ** 2
        return complex(np.sum(weights * np.exp(1j * t * eigenvalues)))

    def intertwiner(self, gns: GnsSpace, probes: Optional[Sequence[np.ndarray]] = None) -> IntertwinerReport:
        """Map q(f_1⊗…⊗f_n) ↦ Φ_F(f_1)…Φ_F(f_n)Ω written in the GNS orthonormal basis."""
        if gns.space is not self.space:
            raise ValueError("space mismatch: GNS and Fock spaces are built over different test spaces")
        if gns.degree != self.degree:
            raise ValueError(f"degree mismatch: GNS degree {gns.degree}, Fock degree {self.degree}")
        d = self.space.dim
        fields = [self.segal_field(self.space.basis_vector(i)).matrix for i in range(d)]
        images = [self.vacuum[:, None]]
        for _ in range(self.degree):
            images.append(np.hstack([field @ images[-1] for field in fields]))
        monomial_images = np.hstack(images)
        matrix = monomial_images @ gns.transform.conj().T

        protected = gns.image_basis(max(self.degree - 1, 0))
        isometry = protected.conj().T @ (matrix.conj().T @ matrix - np.eye(gns.rank)) @ protected
        probes = probes if probes is not None else [self.space.basis_vector(i) for i in range(d)]
        safe = gns.image_basis(max(self.degree - 2, 0))
        defects = {}
        for h in probes:
            h = self.space.vector(h)
            mismatch = matrix @ gns.represent_field(h).matrix - self.segal_field(h).matrix @ matrix
            defects[self.space.describe(h)] = float(np.linalg.norm(mismatch @ safe, 2))
        return IntertwinerReport(matrix, float(np.linalg.norm(isometry, 2)), defects)


def build_fock(space: TestSpace, degree: int) -> FockSpace:
    return FockSpace(space, degree)


def moment_series(space: TestSpace, f, t: float, max_order: int = 200, cutoff: float = 1e-18) -> complex:
    """Σ_k (it)^k W_k(f, ..., f) / k! with W_{2m}(f, ..., f) = (2m-1)!! W2(f, f)^m."""
    space.require_hermitian(f)
    w2 = space.two_point_value(f, f)
    total = 0j
    for k in range(0, max_order + 1, 2):
        term = (1j * t) ** k * w2 ** (k // 2) * (pairing_count(k) / factorial(k))
        total += term
        if k > 2 and abs(term) < cutoff:
            break
    return total
