from itertools import product

import numpy as np

from ccr_lab.modules.checks import CheckRecord
from ccr_lab.modules.suite import Suite, SuiteContext
from ccr_lab.modules.tensor_algebra import TensorPoly, monomial_count
from ccr_lab.modules.wightman_functional import iter_matchings, pairing_count

PAIRING_ORDERS = (2, 4, 6, 8)
ROUNDOFF = 1e-12


def _random_poly(context: SuiteContext, rng: np.random.Generator, degree: int) -> TensorPoly:
    count = monomial_count(context.space.dim, degree)
    return TensorPoly.from_coefficients(
        context.space, rng.standard_normal(count) + 1j * rng.standard_normal(count), degree,
    )


def _checks(context: SuiteContext):
    space, functional = context.space, context.functional
    rng = context.rng()
    N = context.degree

    gram = functional.gram(N)
    scale = max(float(np.max(np.abs(gram.matrix))), 1.0)
    yield CheckRecord.measure("gram_hermitian", gram.hermiticity_defect() / scale, ROUNDOFF)
    yield CheckRecord.measure(
        "gram_positive", gram.positivity_defect(), space.tolerance,
        detail=f"lambda_min {gram.eigenvalues[0]:.3e}, lambda_max {gram.eigenvalues[-1]:.3e}",
    )

    for n in PAIRING_ORDERS:
        enumerated = sum(1 for _ in iter_matchings(n))
        yield CheckRecord.measure(
            f"pairing_count_{n}", abs(pairing_count(n) - enumerated), 0.0,
            detail=f"(n-1)!! = {pairing_count(n)}, enumerated {enumerated}",
        )

    odd = 0.0
    for n in (1, 3, 5, 7):
        indices = rng.integers(0, space.dim, size=n)
        odd = max(odd, abs(functional.n_point(indices)))
    yield CheckRecord.measure("odd_n_point_zero", odd, 0.0)

    order = 4
    tensor = functional.wick_tensor(order)
    mismatch = max(abs(tensor[idx] - functional.n_point(idx)) for idx in product(range(space.dim), repeat=order))
    yield CheckRecord.measure("wick_tensor_matches_n_point", mismatch, ROUNDOFF, detail=f"order {order}")

    degree = min(N, 2)
    u, v = _random_poly(context, rng, degree), _random_poly(context, rng, degree)
    yield CheckRecord.measure(
        "inner_hermitian", abs(functional.inner_w(u, v) - np.conj(functional.inner_w(v, u))), 1e-10,
    )

    f, g = context.field_pair()
    defect_degree = max(N - 1, 0)
    ccr = functional.ccr_defect_matrix(f, g, defect_degree)
    yield CheckRecord.measure(
        "ccr_defect_vanishes", float(np.max(np.abs(ccr), initial=0.0)), 1e-10,
        detail=f"matrix elements between degree <= {defect_degree} monomials",
    )


suite = Suite("gram", "Wick functional, Gram matrix positivity and the CCR defect at the Wightman level", _checks)
