"""
Quasi-free (generalised free field) Wightman functionals generated from W2.

W_n vanishes for odd n; for even n it is the sum over perfect matchings of
{1..n} of products of W2 evaluated on matched pairs, earlier argument first.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Sequence, Tuple
import logging
import os
import threading

import numpy as np
from dotenv import load_dotenv
from scipy.special import factorial2

from .tensor_algebra import TensorPoly, monomial_basis, monomial_count, star, tensor_mul
from .test_space import TestSpace

load_dotenv()

MAX_MONOMIALS = int(os.getenv("CCR_LAB_MAX_MONOMIALS", 4096))
MAX_WICK_ORDER = int(os.getenv("CCR_LAB_MAX_WICK_ORDER", 16))
MAX_TENSOR_ENTRIES = int(os.getenv("CCR_LAB_MAX_TENSOR_ENTRIES", 4194304))
# Matching tables up to this order are kept in memory; larger orders are streamed
CACHED_MATCHING_ORDER = 12

Matching = Tuple[Tuple[int, int], ...]


class CapacityError(ValueError):
    """A desk-scale resource cap was exceeded."""


def pairing_count(n: int) -> int:
    """(n-1)!!, the number of perfect matchings of n points."""
    if n < 0 or n % 2:
        raise ValueError(f"pairing count needs a non-negative even order, got {n}")
    if n == 0:
        return 1
    return int(factorial2(n - 1, exact=True))


def iter_matchings(n: int) -> Iterator[Matching]:
    """Perfect matchings of range(n); the first point pairs with each later point in turn."""
    if n < 0 or n % 2:
        raise ValueError(f"perfect matchings need a non-negative even order, got {n}")
    if n > MAX_WICK_ORDER:
        raise CapacityError(f"Wick order {n} exceeds the cap of {MAX_WICK_ORDER}")

    def _match(points: Tuple[int, ...]) -> Iterator[Matching]:
        if not points:
            yield ()
            return
        first, rest = points[0], points[1:]
        for i, partner in enumerate(rest):
            for tail in _match(rest[:i] + rest[i + 1:]):
                yield ((first, partner),) + tail

    return _match(tuple(range(n)))


@lru_cache(maxsize=None)
def perfect_matchings(n: int) -> Tuple[Matching, ...]:
    return tuple(iter_matchings(n))


def _matchings(n: int):
    return perfect_matchings(n) if n <= CACHED_MATCHING_ORDER else iter_matchings(n)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """G[a][b] = ⟨m_a, m_b⟩_W over the degree-≤N monomials."""
    degree: int
    basis: List[Tuple[int, ...]]
    matrix: np.ndarray

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)

    def positivity_defect(self) -> float:
        """max(0, -λ_min) / λ_max."""
        eigenvalues = self.eigenvalues
        return max(0.0, -float(eigenvalues[0])) / max(float(eigenvalues[-1]), np.finfo(float).tiny)


class WightmanFunctional:
    """Wick-generated Wightman functional over a TestSpace.

    Dense Wick tensors are memoized on first use under a lock; a built tensor
    is read-only and never replaced.
    """

    def __init__(self, space: TestSpace):
        self.space = space
        self._wick_tensors: Dict[int, np.ndarray] = {0: np.array(1.0, dtype=complex)}
        self._wick_lock = threading.RLock()
        self._identity_involution = np.allclose(space.involution, np.eye(space.dim), rtol=0, atol=0)

    # -- n-point values ------------------------------------------------------------

    def n_point(self, indices: Sequence[int]) -> complex:
        """W_n(e_{i_1}, ..., e_{i_n}) by explicit Wick sum."""
        indices = tuple(indices)
        if any(not 0 <= i < self.space.dim for i in indices):
            raise ValueError(f"invalid index in {indices} for dimension {self.space.dim}")
        n = len(indices)
        if n % 2:
            return 0j
        K = self.space.two_point
        total = 0j
        for matching in _matchings(n):
            term = 1 + 0j
            for a, b in matching:
                term *= K[indices[a], indices[b]]
            total += term
        return total

    def smeared_n_point(self, vectors: Sequence[np.ndarray]) -> complex:
        """W_n(f_1, ..., f_n) for arbitrary vector arguments."""
        n = len(vectors)
        if n % 2:
            return 0j
        if n == 0:
            return 1 + 0j
        V = np.array([self.space.vector(f) for f in vectors]).T
        pair_values = V.T @ self.space.two_point @ V
        total = 0j
        for matching in _matchings(n):
            term = 1 + 0j
            for a, b in matching:
                term *= pair_values[a, b]
            total += term
        return total

    def wick_tensor(self, n: int) -> np.ndarray:
        """Dense Ω_n with Ω_n[i_1..i_n] = W_n(e_{i_1}, ..., e_{i_n}).

        Built by contracting the first slot against each later slot:
        Ω_n = Σ_q K(slot 1, slot q) ⊗ Ω_{n-2}(remaining slots).
        """
        d = self.space.dim
        if d ** n > MAX_TENSOR_ENTRIES:
            raise CapacityError(f"Wick tensor of order {n} needs {d ** n} entries, cap is {MAX_TENSOR_ENTRIES}")
        if n % 2:
            return np.zeros((d,) * n, dtype=complex)
        with self._wick_lock:
            if n not in self._wick_tensors:
                lower = self.wick_tensor(n - 2)
                paired = np.multiply.outer(self.space.two_point, lower)
                tensor = np.zeros((d,) * n, dtype=complex)
                for q in range(1, n):
                    tensor += np.moveaxis(paired, 1, q)
                tensor.setflags(write=False)
                self._wick_tensors[n] = tensor
                logging.info(f"{self.space.name}: built Wick tensor of order {n} ({d ** n} entries)")
            return self._wick_tensors[n]

    def evaluate(self, u: TensorPoly) -> complex:
        """W(u) = Σ_n W_n(u_n)."""
        if u.space is not self.space:
            raise ValueError("space mismatch: element does not belong to this functional's space")
        return complex(sum(np.sum(self.wick_tensor(n) * level) for n, level in enumerate(u.levels) if n % 2 == 0))

    def inner_w(self, u: TensorPoly, v: TensorPoly) -> complex:
        """⟨u, v⟩_W = W(u* ⊗ v)."""
        if u.space is not self.space or v.space is not self.space:
            raise ValueError("space mismatch: elements do not belong to this functional's space")
        return self.evaluate(tensor_mul(star(u), v, u.max_degree + v.max_degree))

    # -- matrix elements over the monomial basis -----------------------------------------

    def _check_capacity(self, max_degree: int) -> int:
        if max_degree < 0:
            raise ValueError(f"degree must be non-negative, got {max_degree}")
        count = monomial_count(self.space.dim, max_degree)
        if count > MAX_MONOMIALS:
            raise CapacityError(f"{count} monomials at degree {max_degree} exceed the cap of {MAX_MONOMIALS}")
        return count

    def _starred_block(self, tensor: np.ndarray, left: int) -> np.ndarray:
        """Contract the first `left` slots with the starred monomials J(e_{i_left})⊗...⊗J(e_{i_1})."""
        if not self._identity_involution:
            A = self.space.involution
            for axis in range(left):
                tensor = np.moveaxis(np.tensordot(A, tensor, axes=([0], [axis])), 0, axis)
        order = tuple(reversed(range(left))) + tuple(range(left, tensor.ndim))
        return tensor.transpose(order)

    def element_matrix(self, x: TensorPoly, max_degree: int) -> np.ndarray:
        """Matrix of ⟨m_a, x ⊗ m_b⟩_W over the degree-≤N monomials."""
        if x.space is not self.space:
            raise ValueError("space mismatch: element does not belong to this functional's space")
        count = self._check_capacity(max_degree)
        d = self.space.dim
        offsets = [monomial_count(d, n - 1) if n > 0 else 0 for n in range(max_degree + 2)]
        matrix = np.zeros((count, count), dtype=complex)
        for r, coefficients in enumerate(x.levels):
            if not np.any(coefficients):
                continue
            for j, k in product(range(max_degree + 1), repeat=2):
                n = j + r + k
                if n % 2:
                    continue
                block = np.tensordot(self.wick_tensor(n), coefficients, axes=(list(range(j, j + r)), list(range(r))))
                block = self._starred_block(block, j).reshape(d ** j, d ** k)
                matrix[offsets[j]:offsets[j + 1], offsets[k]:offsets[k + 1]] += block
        return matrix

    def gram(self, max_degree: int) -> GramMatrix:
        matrix = self.element_matrix(TensorPoly.one(self.space, 0), max_degree)
        logging.info(f"{self.space.name}: Gram matrix of degree {max_degree} has size {matrix.shape[0]}")
        return GramMatrix(max_degree, monomial_basis(self.space, max_degree), matrix)

    def field_matrix(self, h, max_degree: int) -> np.ndarray:
        """Matrix of ⟨m_a, h ⊗ m_b⟩_W; needs Wightman data up to degree 2N+1."""
        return self.element_matrix(TensorPoly.from_vector(self.space, h), max_degree)

    def ccr_defect_matrix(self, f, g, max_degree: int) -> np.ndarray:
        """Matrix of ⟨m_a, C(f,g) m_b⟩_W with C(f,g) = [f⊗, g⊗] - iσ(f,g)."""
        sigma = self.space.sigma(f, g)
        f, g = self.space.vector(f), self.space.vector(g)
        levels = (
            np.array(-1j * sigma),
            np.zeros(self.space.dim, dtype=complex),
            np.multiply.outer(f, g) - np.multiply.outer(g, f),
        )
        return self.element_matrix(TensorPoly(self.space, levels), max_degree)
