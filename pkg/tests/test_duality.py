"""
对偶模块测试
"""
import pytest

from src.core import linalg
from src.core.cochain import SupportClass
from src.core.cohomology import cohomology_basis
from src.core.duality import (pairing_matrix, verify_classical_duality, verify_compatibility_lemma,
                              verify_graded_symmetry, verify_sc_tc_duality)
from src.core.errors import ComplexMismatchError, DegreeError, SupportError
from src.core.homotopy import TimeBump
from src.core.mesh import TimeAxis, build_product, build_sigma


@pytest.fixture(scope="module")
def cylinder():
    return build_product(TimeAxis(6, 1), build_sigma("circle(3)"))


@pytest.fixture(scope="module")
def strip():
    return build_product(TimeAxis(6, 1), build_sigma("path(4, both)"))


class TestClassicalDuality:

    @pytest.mark.parametrize("descriptor", ["circle(3)", "torus2(3,3)", "sphere2", "path(4, both)", "disk(5)"])
    def test_nondegenerate(self, descriptor):
        result = verify_classical_duality(build_sigma(descriptor))
        assert result.passed, result.witness

    def test_circle_pairing_is_unimodular(self):
        result = verify_classical_duality(build_sigma("circle(3)"))
        assert result.details['dims'] == [[1, 1], [1, 1]]
        assert all(d in ("1", "-1") for d in result.details['determinants'])


class TestSpacetimeDuality:

    def test_sc_tc_cylinder(self, cylinder):
        result = verify_sc_tc_duality(cylinder)
        assert result.passed, result.witness
        assert result.details['dims'] == [[1, 1], [1, 1], [0, 0]]

    def test_sc_tc_strip(self, strip):
        assert verify_sc_tc_duality(strip).passed

    def test_graded_symmetry(self, cylinder, strip):
        assert verify_graded_symmetry(cylinder).passed
        assert verify_graded_symmetry(strip).passed

    def test_pairing_matrix_shape(self, cylinder):
        A = cohomology_basis(cylinder, 1, SupportClass.SC)
        B = cohomology_basis(cylinder, 1, SupportClass.TC)
        matrix = pairing_matrix(A, B)
        assert len(matrix) == A.dim and len(matrix[0]) == B.dim
        assert linalg.det(matrix) != 0

    def test_pairing_matrix_rejects_degrees(self, cylinder):
        A = cohomology_basis(cylinder, 1, SupportClass.SC)
        B = cohomology_basis(cylinder, 2, SupportClass.TC)
        with pytest.raises(DegreeError):
            pairing_matrix(A, B)

    def test_pairing_matrix_rejects_supports(self, cylinder):
        A = cohomology_basis(cylinder, 1, SupportClass.SC)
        with pytest.raises(SupportError):
            pairing_matrix(A, A)

    def test_pairing_matrix_rejects_other_complex(self, cylinder, strip):
        A = cohomology_basis(cylinder, 1, SupportClass.SC)
        B = cohomology_basis(strip, 1, SupportClass.TC)
        with pytest.raises(ComplexMismatchError):
            pairing_matrix(A, B)


class TestCompatibilityLemma:

    def test_cylinder(self, cylinder):
        result = verify_compatibility_lemma(cylinder, TimeBump.default(cylinder.time), samples=6)
        assert result.passed, result.witness
        assert result.details['bumps'] == 2

    def test_strip(self, strip):
        assert verify_compatibility_lemma(strip, TimeBump.single(strip.time, 2), samples=6).passed
