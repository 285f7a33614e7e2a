"""
同伦模块测试
"""
import pytest

from src.core import linalg
from src.core.cochain import Cochain, SupportClass, coboundary
from src.core.errors import BumpError, ComplexMismatchError, SupportError
from src.core.homotopy import (TimeBump, e_i, extend_e, fiber_integrate_i, homotopy_P, homotopy_Q, p_defect,
                               pullback_pi, q_defect, restrict_s, verify_base_slice_independence,
                               verify_p_identity, verify_q_identity, verify_sc_isomorphism, verify_slice_maps,
                               verify_tc_isomorphism)
from src.core.mesh import TimeAxis, build_product, build_sigma
from src.generators.random_cochains import RandomCochainGenerator

SPACETIMES = [
    (TimeAxis(6, 1), "circle(3)"),
    (TimeAxis(6, 1), "path(4, both)"),
    (TimeAxis(5, 1, 2), "torus2(3,3)"),
]


def _spacetime(time, descriptor):
    return build_product(time, build_sigma(descriptor))


@pytest.fixture(scope="module", params=SPACETIMES, ids=[d for _, d in SPACETIMES])
def spacetime(request):
    return _spacetime(*request.param)


class TestTimeBump:

    def test_default_sits_after_base_slice(self):
        time = TimeAxis(8, 2)
        assert TimeBump.default(time).weights == ((4, linalg.ONE),)

    def test_prefix(self):
        time = TimeAxis(6, 1)
        bump = TimeBump(time, ((1, "1/2"), (3, "1/2")))
        assert bump.prefix() == [linalg.to_q(x) for x in (0, 0, "1/2", "1/2", 1, 1)]

    def test_weights_must_sum_to_one(self):
        with pytest.raises(BumpError):
            TimeBump(TimeAxis(6, 1), ((2, "1/2"),))

    def test_collar_edge_rejected(self):
        with pytest.raises(BumpError):
            TimeBump.single(TimeAxis(8, 2), 0)

    def test_out_of_range(self):
        with pytest.raises(BumpError):
            TimeBump.single(TimeAxis(6, 1), 5)


class TestSliceMaps:

    def test_s_pi_is_identity(self, spacetime):
        gen = RandomCochainGenerator(1)
        for k in range(spacetime.sigma.dimension + 1):
            phi = gen.cochain(spacetime.sigma, k, SupportClass.COMPACT)
            assert restrict_s(spacetime, pullback_pi(spacetime, phi)) == phi

    def test_i_e_is_identity(self, spacetime):
        gen = RandomCochainGenerator(2)
        bump = TimeBump.default(spacetime.time)
        for k in range(spacetime.sigma.dimension + 1):
            psi = gen.cochain(spacetime.sigma, k)
            assert fiber_integrate_i(spacetime, extend_e(spacetime, psi, bump)) == psi

    def test_pullback_support(self, spacetime):
        phi = RandomCochainGenerator(3).cochain(spacetime.sigma, 0, SupportClass.COMPACT)
        assert pullback_pi(spacetime, phi).support is SupportClass.SC

    def test_extend_support(self, spacetime):
        psi = RandomCochainGenerator(4).cochain(spacetime.sigma, 0)
        assert extend_e(spacetime, psi, TimeBump.default(spacetime.time)).support is SupportClass.TC

    def test_wrong_home(self, spacetime):
        with pytest.raises(ComplexMismatchError):
            pullback_pi(spacetime, Cochain(spacetime, 0, {}))

    def test_bump_on_other_axis(self, spacetime):
        other = TimeBump.single(TimeAxis(9, 1), 3)
        with pytest.raises(BumpError):
            extend_e(spacetime, Cochain(spacetime.sigma, 0, {}), other)

    def test_verify_slice_maps(self, spacetime):
        assert verify_slice_maps(spacetime, TimeBump.default(spacetime.time), samples=5).passed


class TestHomotopies:

    def test_p_requires_spatially_compact(self, spacetime):
        c = RandomCochainGenerator(5).cochain(spacetime, 1, SupportClass.TC)
        with pytest.raises(SupportError):
            homotopy_P(spacetime, c)

    def test_q_requires_timelike_compact(self, spacetime):
        c = RandomCochainGenerator(6).cochain(spacetime, 1, SupportClass.SC)
        with pytest.raises(SupportError):
            homotopy_Q(spacetime, c, TimeBump.default(spacetime.time))

    def test_degree_zero_maps_vanish(self, spacetime):
        gen = RandomCochainGenerator(12)
        bump = TimeBump.default(spacetime.time)
        sc = gen.cochain(spacetime, 0, SupportClass.SC)
        tc = gen.cochain(spacetime, 0, SupportClass.TC)
        for image in (homotopy_P(spacetime, sc), homotopy_Q(spacetime, tc, bump), fiber_integrate_i(spacetime, tc)):
            assert image.degree == -1
            assert image.is_zero()
        assert coboundary(homotopy_P(spacetime, sc)) == Cochain(spacetime, 0, {})
        assert e_i(spacetime, tc, bump).is_zero()

    def test_extension_sign_follows_dimension(self):
        M = _spacetime(TimeAxis(6, 1), "circle(3)")
        bump = TimeBump.default(M.time)
        unit = Cochain(M.sigma, 0, {j: 1 for j in range(M.sigma.count(0))})
        e = extend_e(M, unit, bump)
        n = M.time.base_slice
        assert all(e[M.index(1, 2, n, j)] == -linalg.ONE for j in range(M.sigma.count(0)))
        assert fiber_integrate_i(M, e) == unit

    def test_p_identity_by_degree(self, spacetime):
        gen = RandomCochainGenerator(7)
        for k in range(spacetime.dimension + 1):
            for _ in range(5):
                assert p_defect(spacetime, gen.cochain(spacetime, k, SupportClass.SC)).is_zero()

    def test_q_identity_by_degree(self, spacetime):
        gen = RandomCochainGenerator(8)
        bump = TimeBump.default(spacetime.time)
        for k in range(spacetime.dimension + 1):
            for _ in range(5):
                assert q_defect(spacetime, gen.cochain(spacetime, k, SupportClass.TC), bump).is_zero()

    def test_p_vanishes_on_base_slice(self, spacetime):
        c = RandomCochainGenerator(9).cochain(spacetime, 1, SupportClass.SC)
        Pc = homotopy_P(spacetime, c)
        n0 = spacetime.time.base_slice
        assert restrict_s(spacetime, Pc, n0).is_zero()

    def test_closed_sc_cochain_is_homotopic_to_pullback(self, spacetime):
        # dc = 0, k = 1 ⇒ dPc = c − π*s*c
        gen = RandomCochainGenerator(10)
        phi = gen.cochain(spacetime, 0, SupportClass.SC)
        c = coboundary(phi)
        difference = c - pullback_pi(spacetime, restrict_s(spacetime, c))
        assert coboundary(homotopy_P(spacetime, c)) == difference

    def test_q_with_spread_bump(self):
        M = _spacetime(TimeAxis(7, 1), "circle(3)")
        bump = TimeBump(M.time, ((2, "1/3"), (3, "2/3")))
        assert verify_q_identity(M, bump, samples=5).passed

    def test_verifiers(self, spacetime):
        assert verify_p_identity(spacetime, samples=5).passed
        assert verify_q_identity(spacetime, TimeBump.default(spacetime.time), samples=5).passed


class TestIsomorphisms:

    def test_sc_isomorphism(self, spacetime):
        result = verify_sc_isomorphism(spacetime)
        assert result.passed, result.witness
        assert result.details['sc_dims'][:spacetime.dimension] == result.details['sigma_compact_dims'][:spacetime.dimension]

    def test_tc_isomorphism(self, spacetime):
        result = verify_tc_isomorphism(spacetime, TimeBump.default(spacetime.time))
        assert result.passed, result.witness

    def test_base_slice_independence(self, spacetime):
        assert verify_base_slice_independence(spacetime).passed

    def test_einstein_static_universe(self):
        M = _spacetime(TimeAxis(6, 1), "sphere3")
        result = verify_sc_isomorphism(M)
        assert result.passed
        assert result.details['sc_dims'] == [1, 0, 0, 1, 0]
