from itertools import combinations

import numpy as np

from ccr_lab.modules.checks import CheckRecord
from ccr_lab.modules.suite import Suite, SuiteContext

RANDOM_SAMPLES = 1000
ROUNDOFF = 1e-12


def _checks(context: SuiteContext):
    space = context.space
    rng = context.rng()
    yield from space.validate()

    basis = space.hermitian_basis
    yield CheckRecord.assertion(
        "hermitian_basis_rank", len(basis) == space.dim,
        detail=f"{len(basis)} real directions for dimension {space.dim}",
    )
    fixed = max(float(np.linalg.norm(space.conjugate(b) - b)) for b in basis) if basis else 0.0
    yield CheckRecord.measure("hermitian_basis_fixed", fixed, ROUNDOFF)

    antisymmetry = max(
        (abs(space.sigma(f, g) + space.sigma(g, f)) for f, g in combinations(basis, 2)),
        default=0.0,
    )
    yield CheckRecord.measure("sigma_antisymmetric", antisymmetry, ROUNDOFF)

    mismatch = 0.0
    for f, g in combinations(basis, 2):
        mismatch = max(mismatch, abs(space.sigma(f, g) - space.one_particle_form(f, g).imag))
    yield CheckRecord.measure("sigma_matches_form", mismatch, ROUNDOFF)

    antilinear, involutive = 0.0, 0.0
    for _ in range(20):
        f = space.random_vector(rng)
        alpha = complex(*rng.standard_normal(2))
        antilinear = max(antilinear, float(np.linalg.norm(space.conjugate(alpha * f) - np.conj(alpha) * space.conjugate(f))))
        involutive = max(involutive, float(np.linalg.norm(space.conjugate(space.conjugate(f)) - f)))
    yield CheckRecord.measure("conjugate_antilinear", antilinear, 1e-10)
    yield CheckRecord.measure("conjugate_involutive", involutive, 1e-10)

    scale = max(float(np.linalg.norm(space.form_matrix, 2)), np.finfo(float).tiny)
    lowest = min(space.one_particle_form(f, f).real / max(np.vdot(f, f).real, 1.0)
                 for f in (space.random_vector(rng) for _ in range(RANDOM_SAMPLES)))
    yield CheckRecord.measure("form_random_positive", max(0.0, -lowest) / scale, space.tolerance)


suite = Suite("validate", "test-space invariants, conjugation and symplectic form", _checks)
