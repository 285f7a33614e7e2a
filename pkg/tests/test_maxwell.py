"""
Maxwell 模块测试

小窗口 ring 上只断言结构性质；cylinder 与 strip 窗口上断言
参数化是双射、配对矩阵 V 可逆。
"""
from types import SimpleNamespace

import pytest

from src.core import linalg, maxwell
from src.core.cochain import Cochain, SupportClass, indicator
from src.core.errors import DegreeError, OffShellError, SupportError
from src.core.lorentz import LorentzStructure, build_metric, deep_cells
from src.core.maxwell import (GaugePartition, build_observables, evaluation_matrix, faraday_solution_space,
                              faraday_sources, lorenz_fix, negative_control, observation_window,
                              potential_solution_space, potential_sources, random_on_shell, sc_solution_spaces, verify_faraday_optimality,
                              verify_faraday_parametrization, verify_lorenz_fix, verify_potential_optimality,
                              verify_potential_parametrization)
from src.core.mesh import TimeAxis, build_product, build_sigma
from src.core.suite_runner import FixtureContext
from src.utils.config import parse_config

Q = linalg.to_q


@pytest.fixture(scope="module")
def ring():
    sigma = build_sigma("circle(4)")
    return LorentzStructure(build_product(TimeAxis(12, 1), sigma), build_metric(sigma))


@pytest.fixture(scope="module")
def window(ring):
    return observation_window(ring, 2, 1)


class TestObservationWindow:

    def test_offset_and_length(self, ring, window):
        assert window.offset == 2
        assert window.spacetime.time.n_slices == 8
        assert window.spacetime.sigma is ring.spacetime.sigma

    def test_embed_then_restrict(self, window):
        vec = {i: Q(i + 1) for i in range(0, window.spacetime.count(1), 3)}
        assert window.restrict(1, window.embed(1, vec)) == vec

    def test_restrict_drops_outer_slices(self, ring, window):
        M = ring.spacetime
        first = {M.index(0, 1, 0, 0): linalg.ONE}
        assert window.restrict(0, first) == {}

    @pytest.mark.parametrize("margin,collar", [(0, 1), (5, 1), (2, 4)])
    def test_too_short(self, ring, margin, collar):
        with pytest.raises(SupportError):
            observation_window(ring, margin, collar)


class TestGaugePartition:

    def test_default(self):
        partition = GaugePartition.default(TimeAxis(12, 1))
        assert (partition.start, partition.stop) == (4, 8)

    def test_profile(self):
        partition = GaugePartition(TimeAxis(12, 1), 4, 8)
        assert partition.future(2) == 0
        assert partition.future(6) == Q("1/2")
        assert partition.future(10) == 1
        assert all(partition.future(n) + partition.past(n) == 1 for n in range(12))

    @pytest.mark.parametrize("start,stop", [(0, 5), (5, 5), (6, 4), (3, 11)])
    def test_must_sit_between_collars(self, start, stop):
        with pytest.raises(SupportError):
            GaugePartition(TimeAxis(12, 1), start, stop)

    def test_multiply_splits_vector(self, ring):
        M = ring.spacetime
        partition = GaugePartition.default(M.time)
        vec = {i: Q(1) for i in range(M.count(1))}
        parts = linalg.vec_add(partition.multiply(M, 1, vec, 'future'), partition.multiply(M, 1, vec, 'past'))
        assert parts == vec


class TestLorenzGauge:

    def test_fix_on_shell_potential(self, ring):
        result = verify_lorenz_fix(ring, 1, GaugePartition.default(ring.spacetime.time))
        assert result.check == 'lorenz_gauge'
        assert result.passed, result.witness
        assert result.details['rows_checked'] > 0

    def test_random_on_shell_degree(self, ring):
        A = random_on_shell(ring, 1)
        assert A.degree == 1 and A.home is ring.spacetime

    def test_off_shell_rejected(self, ring):
        M = ring.spacetime
        cells = deep_cells(M, 1, 2)
        A = indicator(M, 1, cells[len(cells) // 2])
        with pytest.raises(OffShellError):
            lorenz_fix(ring, A, GaugePartition.default(M.time))

    def test_degree_zero_rejected(self, ring):
        with pytest.raises(DegreeError):
            lorenz_fix(ring, Cochain(ring.spacetime, 0, {}), GaugePartition.default(ring.spacetime.time))

    def test_foreign_potential_rejected(self, ring):
        other = build_product(TimeAxis(12, 1), build_sigma("circle(5)"))
        with pytest.raises(SupportError):
            lorenz_fix(ring, Cochain(other, 1, {}), GaugePartition.default(other.time))


class TestSpaces:

    @pytest.mark.parametrize("k", [0, 2])
    def test_potential_degree_range(self, window, k):
        with pytest.raises(DegreeError):
            potential_solution_space(window, k)

    def test_faraday_degree_range(self, window):
        with pytest.raises(DegreeError):
            faraday_solution_space(window, 3)
        with pytest.raises(DegreeError):
            faraday_sources(window, -1)

    def test_unknown_flavor(self, window):
        with pytest.raises(ValueError):
            build_observables(window, 1, 'yang_mills')

    def test_observables_are_gauge_invariant(self, window):
        observables = build_observables(window, 1, 'potential')
        assert observables.gauge_invariant
        assert observables.basis.support is SupportClass.COMPACT

    def test_evaluation_matrix_shape(self, window):
        observables = build_observables(window, 1, 'potential')
        solutions = potential_solution_space(window, 1)
        V = evaluation_matrix(window.local, observables, solutions)
        assert len(V) == observables.dim
        assert all(len(row) == solutions.dim for row in V)


class TestNegativeControl:

    def test_dependent_row_is_detected(self):
        V = [[Q(1), Q(0)], [Q(0), Q(1)]]
        control = negative_control(V, [Q(1), Q(1)])
        assert control == {'rank': 2, 'rows': 3, 'detected': True}

    def test_independent_row_is_not_detected(self):
        control = negative_control([[Q(1), Q(0)]], [Q(0), Q(1)])
        assert not control['detected']

    def test_no_columns_proves_nothing(self):
        # 0 个解时任何行都“秩亏损”，不能算作检测到
        control = negative_control([], [])
        assert not control['detected']


class TestOptimality:

    def test_potential_structure(self, window):
        result = verify_potential_optimality(window, 1)
        assert result.check == 'potential_optimality'
        assert result.details['negative_control']['detected']
        assert result.details['representative_independent']
        assert result.details['gauge_invariant']

    @pytest.mark.parametrize("k", [1, 2])
    def test_faraday_structure(self, window, k):
        result = verify_faraday_optimality(window, k)
        assert result.check == 'faraday_optimality'
        assert result.details['negative_control']['detected']

    def test_parametrization_reports(self, window):
        assert verify_potential_parametrization(window, 1).check == 'potential_parametrization'
        assert verify_faraday_parametrization(window, 1).check == 'faraday_parametrization'

    @pytest.mark.parametrize("flavor", ['potential', 'faraday'])
    def test_sc_solution_spaces(self, window, flavor):
        result = sc_solution_spaces(window, 1, flavor)
        assert result.check == 'sc_solution_spaces'
        assert result.details['flavor'] == flavor
        assert result.details['parametrization'] in ('bijective', 'degenerate', 'leaves_spatial_support')

    def test_sc_unknown_flavor(self, window):
        with pytest.raises(ValueError):
            sc_solution_spaces(window, 1, 'scalar')

    def test_sc_equals_free_on_closed_sigma(self, window):
        # Σ 无空间端时 SC 与 Free 的解空间相同
        free = faraday_solution_space(window, 1)
        sc = faraday_solution_space(window, 1, SupportClass.SC)
        assert free.dim == sc.dim


DYNAMICS = """
[fixtures.cylinder_dyn]
sigma = "circle(4)"
slices = 16
collar = 2
"""


@pytest.fixture(scope="module")
def dynamics():
    """与套件运行器同样构造的观测窗口：Σ 闭合"""
    config = parse_config(DYNAMICS, "dynamics.toml")
    return FixtureContext(config.fixtures['cylinder_dyn'], config).window


@pytest.fixture(scope="module")
def strip():
    sigma = build_sigma("path(8, both)")
    structure = LorentzStructure(build_product(TimeAxis(12, 2), sigma), build_metric(sigma))
    return observation_window(structure, 2, 2)


class TestBijectivity:

    @pytest.mark.parametrize("verify", [verify_potential_parametrization, verify_faraday_parametrization])
    def test_parametrization_is_bijective(self, dynamics, verify):
        result = verify(dynamics, 1)
        assert result.passed, result.witness
        assert result.details['source_dim'] == result.details['target_dim'] > 0
        assert len(result.matrices['P']) == result.details['target_dim']

    @pytest.mark.parametrize("verify", [verify_potential_optimality, verify_faraday_optimality])
    def test_evaluation_matrix_is_invertible(self, dynamics, verify):
        result = verify(dynamics, 1)
        assert result.passed, result.witness
        assert result.details['observables'] == result.details['solutions'] > 0
        assert result.details['determinant'] not in (None, '0')
        assert result.details['negative_control']['detected']

    @pytest.mark.parametrize("flavor", ['potential', 'faraday'])
    def test_sc_parametrization_is_bijective(self, dynamics, flavor):
        result = sc_solution_spaces(dynamics, 1, flavor)
        assert result.passed
        assert result.details['parametrization'] == 'bijective'
        assert result.details['sc_dim'] == result.details['compact_source_dim']

    def test_sources_agree_on_closed_sigma(self, dynamics):
        tc = potential_sources(dynamics, 1, SupportClass.TC)
        compact = potential_sources(dynamics, 1, SupportClass.COMPACT)
        assert tc.dim == compact.dim > 0
        assert tc.representatives == compact.representatives
        assert compact.label == "E_A"

    def test_sources_need_temporal_support(self, dynamics):
        with pytest.raises(SupportError):
            potential_sources(dynamics, 1, SupportClass.SC)

    def test_degenerate_parametrization_fails(self, dynamics, monkeypatch):
        def _degenerate(window, k, target=None, support=SupportClass.TC):
            n = target.dim
            return [[linalg.ZERO] * n for _ in range(n)], SimpleNamespace(dim=n), target

        monkeypatch.setattr(maxwell, 'potential_parametrization', _degenerate)
        result = sc_solution_spaces(dynamics, 1, 'potential')
        assert result.details['sc_dim'] == result.details['compact_source_dim'] > 0
        assert result.details['parametrization'] == 'degenerate'
        assert not result.passed


class TestSpatialEnds:

    def test_interior_rows_skip_end_collar(self, strip):
        L, O = strip.local, strip.spacetime
        ends = O.excluded(1, spatial=True)
        rows = L.interior_rows('delta_d', 1, spatial=True)
        assert ends
        assert not rows & ends
        assert L.interior_rows('delta_d', 1) & ends

    def test_compact_observables_survive(self, strip):
        observables = build_observables(strip, 1, 'potential')
        assert observables.dim > 0
        assert observables.gauge_invariant

    def test_potential_optimality(self, strip):
        result = verify_potential_optimality(strip, 1)
        assert result.passed, result.witness
        assert result.details['observables'] == result.details['solutions'] > 0

    def test_sc_parametrization_is_bijective(self, strip):
        result = sc_solution_spaces(strip, 1, 'potential')
        assert result.details['parametrization'] == 'bijective'
        assert result.details['sc_dim'] == result.details['compact_source_dim'] > 0
        assert result.passed

    def test_relative_window_is_shared(self, strip):
        assert strip.relative is strip.relative
        assert strip.relative.structure.relative and strip.relative.local.relative
        assert strip.relative.offset == strip.offset

    def test_trivial_observable_avoids_ends(self, strip):
        trivial = maxwell._trivial_observable(strip, 1, 'potential')
        assert trivial
        assert not set(trivial) & strip.spacetime.excluded(1, spatial=True)
