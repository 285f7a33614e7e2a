"""
上链模块测试
"""
import pytest

from src.core import linalg
from src.core.cochain import (Cochain, SupportClass, allowed_cells, coboundary, constant_unit, cup, decompose_types,
                              dump_cochain, indicator, integrate, load_cochain, pairing, pairing_allowed,
                              pairing_functional, support_project)
from src.core.errors import ComplexMismatchError, DegreeError, SupportError
from src.core.mesh import TimeAxis, build_product, build_sigma
from src.generators.random_cochains import RandomCochainGenerator

F, TC, SC, C = SupportClass.FREE, SupportClass.TC, SupportClass.SC, SupportClass.COMPACT


@pytest.fixture(scope="module")
def torus():
    return build_sigma("torus2(3,3)")


@pytest.fixture(scope="module")
def cylinder():
    return build_product(TimeAxis(5, 1), build_sigma("circle(3)"))


@pytest.fixture(scope="module")
def strip():
    return build_product(TimeAxis(5, 1), build_sigma("path(4, both)"))


class TestSupportClass:

    def test_meet_table(self):
        assert TC.meet(SC) is C
        assert F.meet(TC) is TC
        assert F.meet(F) is F
        assert C.meet(F) is C

    def test_join_table(self):
        assert TC.join(SC) is F
        assert C.join(SC) is SC
        assert C.join(C) is C

    def test_parse(self):
        assert SupportClass.parse("compact") is C
        with pytest.raises(ValueError):
            SupportClass.parse("spatial")


class TestCochain:

    def test_rejects_value_on_excluded_cell(self, strip):
        end_vertex = min(strip.excluded(0, spatial=True))
        with pytest.raises(SupportError):
            indicator(strip, 0, end_vertex, SC)

    def test_degree_bounds(self, torus):
        with pytest.raises(DegreeError):
            Cochain(torus, 3, {})
        with pytest.raises(DegreeError):
            Cochain(torus, 0, {99: 1})
        with pytest.raises(DegreeError):
            Cochain(torus, -2, {})

    def test_degree_minus_one_is_zero_group(self, torus):
        empty = Cochain(torus, -1, {})
        assert empty.is_zero()
        with pytest.raises(DegreeError):
            Cochain(torus, -1, {0: 1})

    def test_zeros_are_dropped(self, torus):
        assert Cochain(torus, 0, {0: 0, 1: 2}).values == {1: linalg.to_q(2)}

    def test_sum_support_is_join(self, strip):
        gen = RandomCochainGenerator(5)
        a = gen.cochain(strip, 1, TC)
        b = gen.cochain(strip, 1, SC)
        assert (a + b).support is F

    def test_mismatched_homes(self, torus, cylinder):
        with pytest.raises(ComplexMismatchError):
            constant_unit(torus) + constant_unit(cylinder)

    def test_support_project(self, strip):
        full = Cochain(strip, 0, {i: 1 for i in range(strip.count(0))})
        projected = support_project(full, C)
        assert set(projected.values) == set(allowed_cells(strip, 0, C))

    def test_text_format(self, cylinder):
        c = RandomCochainGenerator(9).cochain(cylinder, 1, TC)
        assert load_cochain(dump_cochain(c), cylinder) == c


class TestCoboundary:

    @pytest.mark.parametrize("support", list(SupportClass))
    def test_dd_zero(self, strip, support):
        gen = RandomCochainGenerator(11)
        for k in range(strip.dimension - 1):
            c = gen.cochain(strip, k, support)
            assert coboundary(coboundary(c)).is_zero()

    def test_top_degree_has_no_coboundary(self, torus):
        with pytest.raises(DegreeError):
            coboundary(Cochain(torus, 2, {}))

    def test_coboundary_from_degree_minus_one(self, strip):
        image = coboundary(Cochain(strip, -1, {}, SC))
        assert image.degree == 0 and image.is_zero()
        assert image.support is SC

    def test_support_preserved(self, strip):
        c = RandomCochainGenerator(2).cochain(strip, 0, C)
        assert coboundary(c).support is C

    def test_constant_is_closed(self, torus):
        assert coboundary(constant_unit(torus)).is_zero()


class TestCup:

    @pytest.mark.parametrize("p", [0, 1])
    def test_leibniz_on_sigma(self, torus, p):
        gen = RandomCochainGenerator(13 + p)
        for _ in range(5):
            a = gen.cochain(torus, p)
            b = gen.cochain(torus, 1 - p)
            left = coboundary(cup(a, b))
            sign = 1 if p % 2 == 0 else -1
            right = cup(coboundary(a), b) + cup(a, coboundary(b)).scaled(sign)
            assert left == right

    @pytest.mark.parametrize("p,q", [(0, 0), (0, 1), (1, 0), (1, 1)])
    def test_leibniz_on_product(self, cylinder, p, q):
        gen = RandomCochainGenerator(17 + 2 * p + q)
        for _ in range(4):
            a = gen.cochain(cylinder, p)
            b = gen.cochain(cylinder, q)
            left = coboundary(cup(a, b))
            sign = 1 if p % 2 == 0 else -1
            right = cup(coboundary(a), b) + cup(a, coboundary(b)).scaled(sign)
            assert left == right

    def test_unit(self, cylinder):
        a = RandomCochainGenerator(3).cochain(cylinder, 1)
        assert cup(constant_unit(cylinder), a) == a
        assert cup(a, constant_unit(cylinder)) == a

    def test_support_is_meet(self, strip):
        gen = RandomCochainGenerator(4)
        assert cup(gen.cochain(strip, 0, TC), gen.cochain(strip, 1, SC)).support is C

    def test_degree_overflow(self, torus):
        a = RandomCochainGenerator(1).cochain(torus, 2)
        with pytest.raises(DegreeError):
            cup(a, a)


class TestIntegrationAndPairing:

    def test_stokes_for_compact_cochains(self, strip):
        gen = RandomCochainGenerator(21)
        for _ in range(5):
            c = gen.cochain(strip, strip.dimension - 1, C)
            assert integrate(coboundary(c)) == 0

    def test_stokes_on_closed_sigma(self, torus):
        c = RandomCochainGenerator(22).cochain(torus, 1)
        assert integrate(coboundary(c)) == 0

    def test_integrate_wrong_degree(self, torus):
        with pytest.raises(DegreeError):
            integrate(constant_unit(torus))

    def test_pairing_allowed(self, cylinder, torus):
        assert pairing_allowed(cylinder, SC, TC)
        assert pairing_allowed(cylinder, C, F)
        assert not pairing_allowed(cylinder, SC, SC)
        assert pairing_allowed(torus, SC, F)
        assert not pairing_allowed(torus, F, F)

    def test_pairing_rejects_infinite_support(self, cylinder):
        gen = RandomCochainGenerator(6)
        with pytest.raises(SupportError):
            pairing(gen.cochain(cylinder, 1, SC), gen.cochain(cylinder, 1, SC))

    def test_pairing_is_integral_of_cup(self, cylinder):
        gen = RandomCochainGenerator(7)
        a = gen.cochain(cylinder, 1, SC)
        b = gen.cochain(cylinder, 1, TC)
        assert pairing(a, b) == integrate(cup(a, b))

    @pytest.mark.parametrize("side", ['left', 'right'])
    def test_pairing_functional(self, cylinder, side):
        gen = RandomCochainGenerator(8)
        fixed = gen.cochain(cylinder, 1, C)
        for _ in range(3):
            other = gen.cochain(cylinder, 1)
            w = pairing_functional(fixed, side)
            expected = pairing(fixed, other) if side == 'left' else pairing(other, fixed)
            assert linalg.vec_dot(w, other.values) == expected

    def test_decompose_types(self, cylinder):
        c = RandomCochainGenerator(10).cochain(cylinder, 1)
        first, second = decompose_types(c)
        assert first + second == c
        assert all(i < cylinder.type1_count(1) for i in first.values)
