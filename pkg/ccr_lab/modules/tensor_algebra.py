"""
Degree-truncated tensor algebra over a TestSpace.

An element keeps one dense coefficient tensor of shape (d,)*n per degree
n = 0..N. Products that would exceed the truncation degree are dropped and
counted in `dropped`.
"""
from dataclasses import dataclass
from itertools import product
from math import factorial
from typing import List, Sequence, Tuple
import logging

import numpy as np

from .test_space import TestSpace


def monomial_count(dim: int, max_degree: int) -> int:
    return sum(dim ** n for n in range(max_degree + 1))


def monomial_basis(space: TestSpace, max_degree: int) -> List[Tuple[int, ...]]:
    """All multi-indices of length 0..N, degree first, lexicographic inside a degree.

    Indices are 0-based; the order matches C-order flattening of the level tensors.
    """
    if max_degree < 0:
        raise ValueError(f"degree must be non-negative, got {max_degree}")
    return [idx for n in range(max_degree + 1) for idx in product(range(space.dim), repeat=n)]


def _apply_on_axes(matrix: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    """Apply `matrix` to every slot of `tensor`."""
    for axis in range(tensor.ndim):
        tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis)
    return tensor


@dataclass(frozen=True, eq=False)
class TensorPoly:
    """Truncated element (u_0, u_1, ..., u_N) of the tensor algebra."""
    space: TestSpace
    levels: Tuple[np.ndarray, ...]
    dropped: int = 0

    def __post_init__(self):
        if len(self.levels) == 0:
            raise ValueError("a tensor polynomial needs at least the scalar level")
        d = self.space.dim
        frozen = []
        for n, level in enumerate(self.levels):
            level = np.array(level, dtype=complex)
            if level.shape != (d,) * n:
                raise ValueError(f"level {n} must have shape {(d,) * n}, got {level.shape}")
            if not np.all(np.isfinite(level)):
                raise ValueError(f"level {n} has non-finite coefficients")
            level.setflags(write=False)
            frozen.append(level)
        object.__setattr__(self, "levels", tuple(frozen))

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zeros(cls, space: TestSpace, max_degree: int) -> "TensorPoly":
        if max_degree < 0:
            raise ValueError(f"degree must be non-negative, got {max_degree}")
        return cls(space, tuple(np.zeros((space.dim,) * n, dtype=complex) for n in range(max_degree + 1)))

    @classmethod
    def scalar(cls, space: TestSpace, value: complex, max_degree: int) -> "TensorPoly":
        levels = list(cls.zeros(space, max_degree).levels)
        levels[0] = np.array(value, dtype=complex)
        return cls(space, tuple(levels))

    @classmethod
    def one(cls, space: TestSpace, max_degree: int) -> "TensorPoly":
        return cls.scalar(space, 1.0, max_degree)

    @classmethod
    def from_vector(cls, space: TestSpace, h, max_degree: int = 1) -> "TensorPoly":
        """h placed at degree 1."""
        if max_degree < 1:
            raise ValueError("a degree-1 element needs max_degree >= 1")
        levels = list(cls.zeros(space, max_degree).levels)
        levels[1] = space.vector(h)
        return cls(space, tuple(levels))

    @classmethod
    def monomial(cls, space: TestSpace, index: Sequence[int], max_degree: int = None) -> "TensorPoly":
        index = tuple(index)
        if any(not 0 <= i < space.dim for i in index):
            raise ValueError(f"invalid multi-index {index} for dimension {space.dim}")
        max_degree = len(index) if max_degree is None else max_degree
        if len(index) > max_degree:
            raise ValueError(f"multi-index {index} exceeds degree {max_degree}")
        levels = [np.array(level) for level in cls.zeros(space, max_degree).levels]
        levels[len(index)][index] = 1.0
        return cls(space, tuple(levels))

    @classmethod
    def from_coefficients(cls, space: TestSpace, coefficients, max_degree: int) -> "TensorPoly":
        """Inverse of `coefficients()`: a flat vector in monomial order."""
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != (monomial_count(space.dim, max_degree),):
            raise ValueError(f"expected {monomial_count(space.dim, max_degree)} coefficients, got {coefficients.shape}")
        levels, start = [], 0
        for n in range(max_degree + 1):
            size = space.dim ** n
            levels.append(coefficients[start:start + size].reshape((space.dim,) * n))
            start += size
        return cls(space, tuple(levels))

    # -- accessors -------------------------------------------------------------

    @property
    def max_degree(self) -> int:
        return len(self.levels) - 1

    @property
    def spilled(self) -> bool:
        return self.dropped > 0

    def level(self, n: int) -> np.ndarray:
        if n <= self.max_degree:
            return self.levels[n]
        return np.zeros((self.space.dim,) * n, dtype=complex)

    def coefficients(self) -> np.ndarray:
        return np.concatenate([level.ravel() for level in self.levels])

    def truncate(self, max_degree: int) -> "TensorPoly":
        """Pad with zero levels or cut the top levels (cut coefficients are counted)."""
        levels = tuple(self.level(n) for n in range(max_degree + 1))
        cut = sum(int(np.count_nonzero(level)) for level in self.levels[max_degree + 1:])
        return TensorPoly(self.space, levels, self.dropped + cut)

    def allclose(self, other: "TensorPoly", atol: float = 1e-12) -> bool:
        top = max(self.max_degree, other.max_degree)
        return all(np.allclose(self.level(n), other.level(n), rtol=0, atol=atol) for n in range(top + 1))

    def distance(self, other: "TensorPoly") -> float:
        """Largest coefficient difference."""
        top = max(self.max_degree, other.max_degree)
        return max(float(np.max(np.abs(self.level(n) - other.level(n)), initial=0.0)) for n in range(top + 1))

    # -- linear structure --------------------------------------------------------

    def _check_space(self, other: "TensorPoly") -> None:
        if other.space is not self.space:
            raise ValueError("space mismatch: tensor polynomials belong to different test spaces")

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        self._check_space(other)
        top = max(self.max_degree, other.max_degree)
        levels = tuple(self.level(n) + other.level(n) for n in range(top + 1))
        return TensorPoly(self.space, levels, self.dropped + other.dropped)

    def __neg__(self) -> "TensorPoly":
        return self * -1

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        return self + (-other)

    def __mul__(self, scalar: complex) -> "TensorPoly":
        return TensorPoly(self.space, tuple(scalar * level for level in self.levels), self.dropped)

    __rmul__ = __mul__

    def __matmul__(self, other: "TensorPoly") -> "TensorPoly":
        return tensor_mul(self, other, max(self.max_degree, other.max_degree))


def tensor_mul(u: TensorPoly, v: TensorPoly, max_degree: int) -> TensorPoly:
    """w_n = Σ_k u_k ⊗ v_{n-k}, truncated at `max_degree`."""
    u._check_space(v)
    if max_degree < 0:
        raise ValueError(f"degree must be non-negative, got {max_degree}")
    d = u.space.dim
    levels = []
    for n in range(max_degree + 1):
        w = np.zeros((d,) * n, dtype=complex)
        for k in range(max(0, n - v.max_degree), min(n, u.max_degree) + 1):
            w = w + np.multiply.outer(u.levels[k], v.levels[n - k])
        levels.append(w)
    nonzero_u = [int(np.count_nonzero(level)) for level in u.levels]
    nonzero_v = [int(np.count_nonzero(level)) for level in v.levels]
    dropped = sum(
        nu * nv
        for j, nu in enumerate(nonzero_u)
        for k, nv in enumerate(nonzero_v)
        if j + k > max_degree
    )
    return TensorPoly(u.space, tuple(levels), u.dropped + v.dropped + dropped)


def commutator(u: TensorPoly, v: TensorPoly, max_degree: int) -> TensorPoly:
    return tensor_mul(u, v, max_degree) - tensor_mul(v, u, max_degree)


def star(u: TensorPoly) -> TensorPoly:
    """Conjugation: reverse every multi-index, apply J slotwise, conjugate coefficients."""
    A = u.space.involution
    levels = []
    for n, level in enumerate(u.levels):
        reversed_level = np.conj(level).transpose(tuple(reversed(range(n))))
        levels.append(_apply_on_axes(A, reversed_level))
    return TensorPoly(u.space, tuple(levels), u.dropped)


def field_action(h, u: TensorPoly) -> TensorPoly:
    """h ⊗ (u_n) = (0, h·u_0, h ⊗ u_1, ...); the top level of u spills over."""
    h = u.space.vector(h)
    levels = [np.zeros((), dtype=complex)]
    levels += [np.multiply.outer(h, u.levels[n - 1]) for n in range(1, u.max_degree + 1)]
    spill = int(np.count_nonzero(h)) * int(np.count_nonzero(u.levels[-1]))
    if spill:
        logging.warning(f"field action dropped {spill} coefficients above degree {u.max_degree}")
    return TensorPoly(u.space, tuple(levels), u.dropped + spill)


@dataclass(frozen=True)
class FormalSeries:
    """Σ a_k x^k; `polynomial` is False for truncations of infinite series."""
    coeffs: Tuple[complex, ...]
    polynomial: bool = True

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("a formal series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def exponential(cls, order: int, scale: complex = 1.0) -> "FormalSeries":
        return cls(tuple(scale ** k / factorial(k) for k in range(order + 1)), polynomial=False)

    @classmethod
    def log1p(cls, order: int) -> "FormalSeries":
        return cls((0.0,) + tuple((-1) ** (k + 1) / k for k in range(1, order + 1)), polynomial=False)

    @classmethod
    def identity(cls) -> "FormalSeries":
        return cls((0.0, 1.0))


def apply_series(series: FormalSeries, u: TensorPoly, max_degree: int) -> TensorPoly:
    """Σ_k a_k u^{⊗k} truncated at `max_degree`.

    With u_0 = 0 the power u^{⊗k} starts at degree k, so terms beyond
    k = max_degree never contribute.
    """
    has_scalar = complex(u.levels[0]) != 0
    if has_scalar and (not series.polynomial or series.degree > max_degree):
        raise ValueError("series needs a vanishing scalar part unless it is a polynomial of degree <= N")
    if not has_scalar and not series.polynomial and series.degree < max_degree:
        raise ValueError(f"series truncated at order {series.degree} below degree {max_degree}")
    last = series.degree if has_scalar else min(series.degree, max_degree)
    power = TensorPoly.one(u.space, max_degree)
    result = power * series.coeffs[0]
    for k in range(1, last + 1):
        power = tensor_mul(power, u, max_degree)
        if series.coeffs[k] != 0:
            result = result + power * series.coeffs[k]
    return result


def exp_field(space: TestSpace, h, t: complex, max_degree: int) -> TensorPoly:
    """Σ_{k ≤ N} t^k h^{⊗k} / k!."""
    h = space.vector(h)
    levels = [np.array(1.0, dtype=complex)]
    power = np.array(1.0, dtype=complex)
    for k in range(1, max_degree + 1):
        power = np.multiply.outer(t * h, power) / k
        levels.append(power)
    return TensorPoly(space, tuple(levels))


def exp_series(w: TensorPoly, max_degree: int) -> TensorPoly:
    return apply_series(FormalSeries.exponential(max_degree), w, max_degree)


def bch_log(space: TestSpace, f, g, t: complex, max_degree: int) -> TensorPoly:
    """w with e^{t f⊗} e^{t g⊗} = e^{w⊗} at truncation N, via log(1 + x) of the product."""
    product_ = tensor_mul(exp_field(space, f, t, max_degree), exp_field(space, g, t, max_degree), max_degree)
    excess = product_ - TensorPoly.one(space, max_degree)
    return apply_series(FormalSeries.log1p(max_degree), excess, max_degree)
