import logging
import math

from ccr_lab.modules.checks import CheckRecord
from ccr_lab.modules.gns import inclusion_defect, sigma_radical, subspace_distance
from ccr_lab.modules.suite import Suite, SuiteContext

ANGLE_THRESHOLD = 1e-8
MIN_DEGREE = 4


def _checks(context: SuiteContext):
    context.require_degree(2, "radical")
    if context.degree < MIN_DEGREE:
        logging.warning(f"radical suite at N={context.degree}; irreducibility can fail artificially below N={MIN_DEGREE}")
    gns = context.gns()
    symplectic = sigma_radical(context.space)
    fields = gns.field_radical()
    central = gns.central_fields()
    sizes = f"field radical {len(fields)}, sigma radical {len(symplectic)}, central {len(central)}"

    yield CheckRecord.measure("field_radical_in_sigma_radical", inclusion_defect(fields, symplectic), ANGLE_THRESHOLD, detail=sizes)
    yield CheckRecord.measure("central_fields_span_sigma_radical", subspace_distance(central, symplectic), ANGLE_THRESHOLD, detail=sizes)

    # Every central field outside the field radical makes the represented fields reducible
    reducible = len(central) > len(fields)
    angle = subspace_distance(fields, symplectic)
    if reducible:
        yield CheckRecord.measure(
            "radical_equality", angle, math.inf,
            detail=f"reducible: {len(central) - len(fields)} nonzero central direction(s), {sizes}",
        )
    else:
        yield CheckRecord.measure("radical_equality", angle, ANGLE_THRESHOLD, detail=sizes)
    yield CheckRecord.assertion(
        "radical_equality_iff_irreducible", (angle <= ANGLE_THRESHOLD) != reducible,
        detail=f"principal angle {angle:.3e}",
    )


suite = Suite("radical", "symplectic radical against the kernel of the represented field map", _checks)
