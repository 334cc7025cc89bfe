import numpy as np

from ccr_lab.modules.checks import CheckRecord
from ccr_lab.modules.suite import Suite, SuiteContext
from ccr_lab.modules.tensor_algebra import (
    FormalSeries,
    TensorPoly,
    apply_series,
    bch_log,
    commutator,
    exp_field,
    exp_series,
    field_action,
    monomial_count,
    star,
    tensor_mul,
)

ROUNDOFF = 1e-12


def dynkin_degree_three(space, f, g) -> TensorPoly:
    """(1/12)([f,[f,g]] + [g,[g,f]]) as a degree-3 tensor polynomial."""
    F, G = TensorPoly.from_vector(space, f, 3), TensorPoly.from_vector(space, g, 3)
    return (commutator(F, commutator(F, G, 3), 3) + commutator(G, commutator(G, F, 3), 3)) * (1 / 12)


def _random_poly(space, rng, degree) -> TensorPoly:
    count = monomial_count(space.dim, degree)
    return TensorPoly.from_coefficients(space, rng.standard_normal(count) + 1j * rng.standard_normal(count), degree)


def _checks(context: SuiteContext):
    space = context.space
    rng = context.rng()
    N = max(context.degree, 1)

    f, g = context.unit_hermitian(rng), context.unit_hermitian(rng)
    w = bch_log(space, f, g, 1.0, N)
    product_ = tensor_mul(exp_field(space, f, 1.0, N), exp_field(space, g, 1.0, N), N)
    yield CheckRecord.measure("bch_closure", exp_series(w, N).distance(product_), 1e-10, detail=f"N={N}")
    yield CheckRecord.measure("bch_scalar_zero", abs(complex(w.level(0))), ROUNDOFF)
    yield CheckRecord.measure("bch_degree_one", float(np.max(np.abs(w.level(1) - (f + g)))), ROUNDOFF)

    w3 = bch_log(space, f, g, 1.0, 3)
    bracket = 0.5 * (np.multiply.outer(f, g) - np.multiply.outer(g, f))
    yield CheckRecord.measure("bch_degree_two", float(np.max(np.abs(w3.level(2) - bracket))), ROUNDOFF)
    dynkin = dynkin_degree_three(space, f, g)
    yield CheckRecord.measure("bch_degree_three_dynkin", float(np.max(np.abs(w3.level(3) - dynkin.level(3)))), ROUNDOFF)

    h, t = context.unit_hermitian(rng), complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    excess = exp_field(space, h, t, N) - TensorPoly.one(space, N)
    recovered = apply_series(FormalSeries.log1p(N), excess, N)
    yield CheckRecord.measure("log_exp_round_trip", recovered.distance(TensorPoly.from_vector(space, t * h, N)), ROUNDOFF)

    degree = min(N, 5)
    u, v = _random_poly(space, rng, degree), _random_poly(space, rng, degree)
    yield CheckRecord.measure(
        "star_anti_homomorphism",
        star(tensor_mul(u, v, degree)).distance(tensor_mul(star(v), star(u), degree)), 1e-10,
    )
    yield CheckRecord.measure("star_involutive", star(star(u)).distance(u), ROUNDOFF)

    x = space.random_vector(rng)
    lower = u.truncate(degree - 1).truncate(degree)
    yield CheckRecord.measure(
        "field_action_is_product",
        field_action(x, lower).distance(tensor_mul(TensorPoly.from_vector(space, x, degree), lower, degree)), ROUNDOFF,
    )
    yield CheckRecord.measure(
        "star_field_action",
        star(field_action(x, lower)).distance(
            tensor_mul(star(lower), TensorPoly.from_vector(space, space.conjugate(x), degree), degree)
        ),
        ROUNDOFF,
    )

    yield CheckRecord.measure(
        "exp_star_conjugate",
        star(exp_field(space, x, 1j, N)).distance(exp_field(space, space.conjugate(x), -1j, N)), ROUNDOFF,
    )
    phase = exp_field(space, h, 1j, N)
    yield CheckRecord.measure(
        "exp_unitarity_identity", tensor_mul(star(phase), phase, N).distance(TensorPoly.one(space, N)), 1e-10,
    )


suite = Suite("bch", "tensor algebra: exponentials, logarithm series, conjugation and BCH closure", _checks)
