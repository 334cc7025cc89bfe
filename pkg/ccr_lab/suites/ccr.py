from itertools import combinations_with_replacement

import numpy as np

from ccr_lab.modules.checks import CheckRecord
from ccr_lab.modules.suite import Suite, SuiteContext

GENERATOR_STEP = 1e-3
# accepted window around the second-order slope of the central difference
ORDER_SLACK = 0.1
# relative to the operator norm
ROUNDOFF = 1e-10


def _scaled_hermiticity(operator) -> float:
    return operator.hermiticity_defect() / max(operator.norm(), 1.0)


def _checks(context: SuiteContext):
    context.require_degree(2, "ccr")
    space = context.space
    rng = context.rng()
    gns = context.gns()
    basis = space.hermitian_basis

    yield CheckRecord.measure("gns_orthonormal", gns.orthonormality_defect(), 1e-10, detail=f"rank {gns.rank}")
    yield CheckRecord.assertion(
        "vacuum_cyclic", gns.image_basis(gns.degree).shape[1] == gns.rank,
        detail="monomial images span the truncated space",
    )

    hermiticity = max(_scaled_hermiticity(gns.represent_field(b)) for b in basis)
    yield CheckRecord.measure("field_hermitian", hermiticity, ROUNDOFF)

    unitarity = max(gns.weyl_operator(b, 1.0).unitarity_defect() for b in basis)
    yield CheckRecord.measure("weyl_unitary", unitarity, 1e-10)

    h = context.unit_hermitian(rng)
    s, t = rng.uniform(-1, 1, size=2)
    group = gns.weyl_operator(h, s).matrix @ gns.weyl_operator(h, t).matrix - gns.weyl_operator(h, s + t).matrix
    yield CheckRecord.measure("weyl_group_law", float(np.linalg.norm(group, 2)), 1e-10)

    report = gns.generator_check(h, GENERATOR_STEP)
    slope_defect = abs(report.order - 2.0) if report.order is not None else 0.0
    yield CheckRecord.measure(
        "generator_order", slope_defect, ORDER_SLACK,
        detail=f"defect {report.defect:.3e} at step {report.delta:g}, {report.defect_half:.3e} at half step",
    )

    commutators = {
        (i, j): gns.commutator_defect(f, g)
        for (i, f), (j, g) in combinations_with_replacement(list(enumerate(basis)), 2)
    }
    worst = max(commutators, key=commutators.get)
    yield CheckRecord.measure(
        "commutator_defect", commutators[worst], 1e-10,
        detail=f"{len(commutators)} hermitian pairs, worst ({worst[0] + 1}, {worst[1] + 1})",
    )

    f = space.random_vector(rng)
    yield CheckRecord.measure("field_adjoint", gns.adjoint_defect(f) / max(gns.represent_field(f).norm(), 1.0), ROUNDOFF)
    yield CheckRecord.measure(
        "component_sum", gns.component_sum_defect(f), ROUNDOFF,
        detail=f"labels {', '.join(space.component_labels)}",
    )


suite = Suite("ccr", "represented fields, Weyl unitaries and the commutation relations on the GNS space", _checks)
