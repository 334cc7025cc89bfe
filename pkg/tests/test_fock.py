import math

import numpy as np
import pytest

from ccr_lab.modules import fock
from ccr_lab.modules.fock import build_fock, moment_series, occupation_states
from ccr_lab.modules.gns import build_gns
from ccr_lab.modules.test_space import TestSpace
from ccr_lab.modules.wightman_functional import CapacityError, WightmanFunctional


def test_occupation_states_counts():
    assert occupation_states(1, 3) == [(0,), (1,), (2,), (3,)]
    assert len(occupation_states(2, 2)) == 6
    assert occupation_states(0, 4) == [()]
    assert [sum(state) for state in occupation_states(3, 2)] == sorted(sum(state) for state in occupation_states(3, 2))


def test_build_fock_dimensions(cfg1_space):
    space = build_fock(cfg1_space, 3)
    assert space.rank == 1
    assert space.dim == 4
    assert build_fock(cfg1_space, 0).dim == 1
    empty = build_fock(TestSpace(np.zeros((2, 2))), 3)
    assert empty.rank == 0
    assert empty.dim == 1


def test_negative_degree_rejected(cfg1_space):
    with pytest.raises(ValueError, match="non-negative"):
        build_fock(cfg1_space, -1)


def test_capacity_cap(cfg1_space, monkeypatch):
    monkeypatch.setattr(fock, "MAX_FOCK_DIM", 3)
    with pytest.raises(CapacityError, match="Fock dimension"):
        build_fock(cfg1_space, 3)


def test_embedding_is_isometric(block_space):
    space = build_fock(block_space, 2)
    rng = np.random.default_rng(3)
    for _ in range(5):
        f, g = block_space.random_vector(rng), block_space.random_vector(rng)
        assert np.vdot(space.embed(f), space.embed(g)) == pytest.approx(block_space.one_particle_form(f, g), abs=1e-12)


def test_segal_field_examples(cfg1_space):
    space = build_fock(cfg1_space, 2)
    assert np.count_nonzero(space.segal_field(np.zeros(2)).matrix) == 0
    e1, e2 = cfg1_space.basis_vector(0), cfg1_space.basis_vector(1)
    field = space.segal_field(e1).matrix
    vacuum = space.vacuum
    assert vacuum.conj() @ field @ field @ vacuum == pytest.approx(0.5)
    other = space.segal_field(e2).matrix
    commutator = field @ other - other @ field
    assert vacuum.conj() @ commutator @ vacuum == pytest.approx(1j)
    assert space.segal_field(e1).hermiticity_defect() <= 1e-14


def test_segal_two_point_matches_w2(block_space):
    space = build_fock(block_space, 2)
    rng = np.random.default_rng(4)
    for _ in range(5):
        f, g = block_space.random_vector(rng), block_space.random_vector(rng)
        value = space.vacuum.conj() @ space.segal_field(f).matrix @ space.segal_field(g).matrix @ space.vacuum
        assert value == pytest.approx(block_space.two_point_value(f, g), abs=1e-12)


def test_number_grading(cfg1_space, block_space):
    assert build_fock(cfg1_space, 4).number_grading_defect([0.3, -1.2]) == 0.0
    assert build_fock(block_space, 3).number_grading_defect([1, 1j, 2]) == 0.0


def test_intertwiner_trivial_degree(cfg1_functional, cfg1_space):
    report = build_fock(cfg1_space, 0).intertwiner(build_gns(cfg1_functional, 0))
    np.testing.assert_allclose(report.matrix, [[1]])
    assert report.isometry_defect <= 1e-12


def test_intertwiner_scalar_isometry(scalar_functional, scalar_space):
    report = build_fock(scalar_space, 3).intertwiner(build_gns(scalar_functional, 3))
    assert report.isometry_defect <= 1e-8
    assert report.intertwining_defect <= 1e-8


def test_intertwiner_cfg1(cfg1_functional, cfg1_space):
    report = build_fock(cfg1_space, 4).intertwiner(build_gns(cfg1_functional, 4))
    assert report.isometry_defect <= 1e-8
    assert set(report.intertwining_defects) == {cfg1_space.describe(e) for e in np.eye(2)}
    assert report.intertwining_defect <= 1e-8


def test_intertwiner_mismatches(cfg1_functional, cfg1_space):
    gns = build_gns(cfg1_functional, 2)
    with pytest.raises(ValueError, match="degree mismatch"):
        build_fock(cfg1_space, 3).intertwiner(gns)
    with pytest.raises(ValueError, match="space mismatch"):
        build_fock(TestSpace(cfg1_space.two_point), 2).intertwiner(gns)


def test_vacuum_characteristic(scalar_space, cfg1_space):
    space = build_fock(scalar_space, 8)
    assert space.vacuum_characteristic([1.0], 0.0) == pytest.approx(1.0)
    for t in (0.5, 1.0):
        value = space.vacuum_characteristic([1.0], t)
        assert abs(value - moment_series(scalar_space, [1.0], t)) <= 1e-6
        assert abs(value) <= 1 + 1e-12
    with pytest.raises(ValueError, match="non-hermitian"):
        build_fock(cfg1_space, 2).vacuum_characteristic([1j, 0], 1.0)


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 2.0])
def test_moment_series_is_gaussian(scalar_space, t):
    assert moment_series(scalar_space, [1.0], t) == pytest.approx(math.exp(-t * t / 4), abs=1e-12)


def test_fock_and_gns_agree_on_vacuum_expectation(scalar_space):
    gns = build_gns(WightmanFunctional(scalar_space), 6)
    value = build_fock(scalar_space, 6).vacuum_characteristic([1.0], 1.0)
    assert abs(value - gns.vacuum_expectation([1.0], 1.0)) <= 1e-8
