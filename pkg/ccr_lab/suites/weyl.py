from typing import Dict
import logging
import math

import numpy as np

from ccr_lab.modules.checks import CheckRecord
from ccr_lab.modules.gns import GnsSpace
from ccr_lab.modules.suite import Suite, SuiteContext
from ccr_lab.modules.wightman_functional import CapacityError

SMALL_FIELD_SCALE = 0.1
SMALL_FIELD_DEGREE = 6
SMALL_FIELD_THRESHOLD = 1e-6
# roundoff allowed between consecutive defects of the sweep
TREND_SLACK = 1e-12
VACUUM_THRESHOLD = 1e-3


def sweep_spaces(context: SuiteContext) -> Dict[int, GnsSpace]:
    """GNS spaces for the sweep degrees that fit under the capacity caps."""
    spaces = {}
    for degree in sorted(set(context.config.weyl_degrees)):
        if degree < 2:
            logging.warning(f"Skipping Weyl sweep degree {degree}: needs at least 2")
            continue
        try:
            spaces[degree] = context.gns(degree)
        except CapacityError as e:
            logging.warning(f"Skipping Weyl sweep degree {degree}: {e}")
    if not spaces:
        raise ValueError("no Weyl sweep degree fits under the capacity caps")
    return spaces


def _checks(context: SuiteContext):
    space = context.space
    f, h = context.field_pair()
    spaces = sweep_spaces(context)

    defects = []
    for degree, gns in spaces.items():
        defect = gns.weyl_defect(f, h, 0)
        defects.append(defect)
        yield CheckRecord.measure(f"weyl_defect_N{degree}", defect, math.inf, detail="vacuum probe, trend record")

    increase = max((later - earlier for earlier, later in zip(defects, defects[1:])), default=0.0)
    yield CheckRecord.measure(
        "weyl_non_increasing", max(increase, 0.0), TREND_SLACK,
        detail="degrees " + ", ".join(str(n) for n in spaces),
    )

    if SMALL_FIELD_DEGREE in spaces:
        yield CheckRecord.measure(
            "weyl_small_field",
            spaces[SMALL_FIELD_DEGREE].weyl_defect(SMALL_FIELD_SCALE * f, SMALL_FIELD_SCALE * h, 0),
            SMALL_FIELD_THRESHOLD,
            detail=f"fields scaled by {SMALL_FIELD_SCALE} at N={SMALL_FIELD_DEGREE}",
        )
    else:
        logging.warning(f"Skipping small-field Weyl check: degree {SMALL_FIELD_DEGREE} is not in the sweep")

    if context.degree >= 2:
        probe = min(context.config.probe_degree, context.degree - 2)
        yield CheckRecord.measure(
            f"weyl_defect_P{probe}", context.gns().weyl_defect(f, h, probe), math.inf,
            detail=f"degree <= {probe} probe at N={context.degree}, trend record",
        )
    else:
        logging.warning(f"Skipping probe-degree Weyl record: N={context.degree} leaves no protected degree")

    top = spaces[max(spaces)]
    yield CheckRecord.measure(
        "weyl_defect_literal_phase", top.weyl_defect(f, h, 0, phase_sign=+1), math.inf,
        detail=f"opposite phase sign at N={top.degree}, diagnostic only",
    )

    expected = np.exp(-0.5 * space.two_point_value(f, f))
    yield CheckRecord.measure(
        "vacuum_expectation", abs(top.vacuum_expectation(f, 1.0) - expected), VACUUM_THRESHOLD,
        detail=f"exp(-W2(f,f)/2) = {expected.real:.12f} at N={top.degree}",
    )

    probe = min(context.config.probe_degree, context.degree)
    yield CheckRecord.measure(
        "bch_quotient", context.gns().bch_quotient_defect(f, h, probe), 1e-10,
        detail=f"degree <= {probe} monomials",
    )


suite = Suite("weyl", "Weyl relations across truncation degrees and the vacuum characteristic function", _checks)
