from itertools import combinations_with_replacement, product

import numpy as np

from ccr_lab.modules.checks import CheckRecord
from ccr_lab.modules.fock import moment_series
from ccr_lab.modules.suite import Suite, SuiteContext

ORACLE_THRESHOLD = 1e-8
# Fock truncation used for the characteristic function
CHARACTERISTIC_DEGREE = 8
CHARACTERISTIC_TIMES = (0.5, 1.0)
CHARACTERISTIC_THRESHOLD = 1e-6


def _checks(context: SuiteContext):
    context.require_degree(2, "fock-compare")
    space = context.space
    rng = context.rng()
    fock = context.fock()
    gns = context.gns()
    N = context.degree

    isometry = 0.0
    for _ in range(20):
        f, g = space.random_vector(rng), space.random_vector(rng)
        scale = max(np.linalg.norm(f) * np.linalg.norm(g), 1.0)
        isometry = max(isometry, abs(np.vdot(fock.embed(f), fock.embed(g)) - space.one_particle_form(f, g)) / scale)
    yield CheckRecord.measure("embedding_isometry", isometry, 1e-10, detail=f"{fock.rank} one-particle modes")

    report = fock.intertwiner(gns)
    yield CheckRecord.measure("intertwiner_isometry", report.isometry_defect, ORACLE_THRESHOLD, detail=f"degrees <= {N - 1}")
    worst = max(report.intertwining_defects, key=report.intertwining_defects.get)
    yield CheckRecord.measure(
        "intertwiner_fields", report.intertwining_defect, ORACLE_THRESHOLD,
        detail=f"degrees <= {N - 2}, worst probe {worst}",
    )

    grading = max(fock.number_grading_defect(space.basis_vector(i)) for i in range(space.dim))
    yield CheckRecord.measure("number_grading", grading, 0.0)

    vacuum = fock.vacuum
    fields = [fock.segal_field(space.basis_vector(i)).matrix for i in range(space.dim)]
    two_point = max(
        abs(vacuum.conj() @ fields[i] @ fields[j] @ vacuum - space.two_point[i, j])
        for i, j in product(range(space.dim), repeat=2)
    )
    yield CheckRecord.measure("segal_two_point", two_point, 1e-12)

    protected = np.diag((fock.particle_numbers <= N - 2).astype(float))
    ccr = 0.0
    for f, g in combinations_with_replacement(space.hermitian_basis, 2):
        a, b = fock.segal_field(f).matrix, fock.segal_field(g).matrix
        defect = (a @ b - b @ a - 1j * space.sigma(f, g) * np.eye(fock.dim)) @ protected
        ccr = max(ccr, float(np.linalg.norm(defect, 2)))
    yield CheckRecord.measure("segal_commutator", ccr, 1e-10)

    h = space.hermitian_basis[0]
    wide = context.fock(max(N, CHARACTERISTIC_DEGREE))
    for t in CHARACTERISTIC_TIMES:
        oracle = moment_series(space, h, t)
        yield CheckRecord.measure(
            f"vacuum_characteristic_t{t:g}", abs(wide.vacuum_characteristic(h, t) - oracle), CHARACTERISTIC_THRESHOLD,
            detail=f"moment series {oracle.real:.12f} at N={wide.degree}",
        )


suite = Suite("fock-compare", "Segal-quantized Fock representation as an independent oracle for the GNS construction", _checks)
