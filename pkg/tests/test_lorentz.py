"""
Lorentz 结构与 Green 算子测试
"""
import pytest

from src.core import linalg
from src.core.cochain import Cochain, coboundary
from src.core.errors import ComplexMismatchError, DegreeError, SolverError, SupportError
from src.core.lorentz import (LorentzStructure, band_cells, build_metric, causal_propagator, deep_cells,
                              green_advanced, green_retarded, verify_green, verify_green_float, verify_metric)
from src.core.mesh import TimeAxis, build_product, build_sigma
from src.generators.random_cochains import RandomCochainGenerator


def _structure(descriptor, slices=10, collar=1, scheme='uniform', dt=None):
    sigma = build_sigma(descriptor)
    return LorentzStructure(build_product(TimeAxis(slices, collar), sigma), build_metric(sigma, scheme, dt))


@pytest.fixture(scope="module")
def ring():
    return _structure("circle(4)")


@pytest.fixture(scope="module")
def strip():
    return _structure("path(5, both)", scheme='valence', dt="1/3")


class TestMetric:

    def test_uniform_weights(self):
        metric = build_metric(build_sigma("circle(3)"))
        assert metric.dt == linalg.to_q("1/2")
        assert all(w == 1 for row in metric.weights for w in row)

    def test_valence_weights(self):
        metric = build_metric(build_sigma("path(3, none)"), 'valence')
        # 端点只属于一条边，中点属于两条
        assert metric.weights[0] == (linalg.to_q("1/2"), linalg.to_q("1/3"), linalg.to_q("1/2"))
        assert metric.weights[1] == (1, 1)

    def test_bad_scheme(self):
        with pytest.raises(SolverError):
            build_metric(build_sigma("circle(3)"), 'lumped')

    def test_non_positive_dt(self):
        with pytest.raises(SolverError):
            build_metric(build_sigma("circle(3)"), dt="0")

    def test_weights_must_match_sigma(self):
        sigma = build_sigma("circle(3)")
        other = build_metric(build_sigma("torus2(3,3)"))
        with pytest.raises(ComplexMismatchError):
            LorentzStructure(build_product(TimeAxis(6, 1), sigma), other)

    def test_mass_signature(self, ring):
        M = ring.spacetime
        for k in range(M.dimension + 1):
            for idx, v in enumerate(ring.mass(k)):
                assert (v > 0) == (M.cell(k, idx)[0] == 1)

    @pytest.mark.parametrize("fixture", ["ring", "strip"])
    def test_verify_metric(self, fixture, request):
        assert verify_metric(request.getfixturevalue(fixture), samples=4).passed


class TestOperators:

    def test_codifferential_adjoint(self, strip):
        gen = RandomCochainGenerator(1)
        M = strip.spacetime
        for k in range(1, M.dimension + 1):
            alpha, beta = gen.cochain(M, k), gen.cochain(M, k - 1)
            assert strip.metric_pairing(strip.codifferential(alpha), beta) == \
                strip.metric_pairing(alpha, coboundary(beta))

    def test_box_is_symmetric(self, ring):
        gen = RandomCochainGenerator(2)
        M = ring.spacetime
        for k in range(M.dimension + 1):
            u, v = gen.cochain(M, k), gen.cochain(M, k)
            assert ring.metric_pairing(ring.box(u), v) == ring.metric_pairing(u, ring.box(v))

    def test_delta_delta_is_zero(self, ring):
        c = RandomCochainGenerator(3).cochain(ring.spacetime, 2)
        assert ring.codifferential(ring.codifferential(c)).is_zero()

    def test_delta_degree_zero(self, ring):
        with pytest.raises(DegreeError):
            ring.operator('delta', 0)
        with pytest.raises(DegreeError):
            ring.codifferential(Cochain(ring.spacetime, 0, {}))

    def test_unknown_operator(self, ring):
        with pytest.raises(ValueError):
            ring.operator('laplace', 1)

    def test_metric_pairing_degree_mismatch(self, ring):
        gen = RandomCochainGenerator(4)
        with pytest.raises(DegreeError):
            ring.metric_pairing(gen.cochain(ring.spacetime, 0), gen.cochain(ring.spacetime, 1))

    def test_interior_rows_avoid_window_ends(self, ring):
        M = ring.spacetime
        rows = ring.interior_rows('box', 0)
        assert rows
        for r in rows:
            assert 0 < M.lower_key(0, r) < M.time.n_slices - 1

    def test_stencil_radius(self, ring):
        assert ring.stencil_radius('box', 0) == 1
        assert ring.stencil_radius('d', 0) <= 1


class TestGreenSolver:

    def test_retarded_solution_vanishes_before_source(self, ring):
        M = ring.spacetime
        solver = ring.solver(1)
        start = 5
        f = RandomCochainGenerator(5).cochain(M, 1, cells=band_cells(M, 1, start, start + 1)).values
        u = solver.retarded_vector(f)
        assert all(M.lower_key(1, c) > start for c in u)

    def test_advanced_solution_vanishes_after_source(self, ring):
        M = ring.spacetime
        solver = ring.solver(1)
        f = RandomCochainGenerator(6).cochain(M, 1, cells=band_cells(M, 1, 3, 4)).values
        u = solver.advanced_vector(f)
        assert all(M.upper_key(1, c) < 4 for c in u)

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_box_of_green_is_source(self, ring, k):
        M = ring.spacetime
        solver = ring.solver(k)
        f = RandomCochainGenerator(7 + k).cochain(M, k, cells=deep_cells(M, k, 2)).values
        assert not solver.residual(solver.retarded_vector(f), f)
        assert not solver.residual(solver.advanced_vector(f), f)

    def test_source_in_past_collar_rejected(self, ring):
        solver = ring.solver(0)
        with pytest.raises(SupportError):
            solver.retarded_vector({0: linalg.ONE})

    def test_source_in_future_collar_rejected(self, ring):
        solver = ring.solver(0)
        last = ring.spacetime.count(0) - 1
        with pytest.raises(SupportError):
            solver.advanced_vector({last: linalg.ONE})

    def test_cochain_wrappers(self, ring):
        M = ring.spacetime
        f = RandomCochainGenerator(8).cochain(M, 1, cells=deep_cells(M, 1, 2))
        plus, minus = green_retarded(ring, f), green_advanced(ring, f)
        assert causal_propagator(ring, f) == plus - minus

    def test_wrong_degree_input(self, ring):
        f = Cochain(ring.spacetime, 0, {})
        with pytest.raises(ComplexMismatchError):
            ring.solver(1).retarded(f)

    def test_solver_is_cached(self, ring):
        assert ring.solver(1) is ring.solver(1)

    def test_float_mode_refuses_cochains(self, ring):
        f = Cochain(ring.spacetime, 0, {})
        with pytest.raises(SolverError):
            ring.solver(0, exact=False).retarded(f)


class TestGreenVerification:

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_ring(self, ring, k):
        results = verify_green(ring, k, samples=2, margin=2, kernel_depth=3)
        names = [r.check for r in results]
        assert names == ['green_box_inverse', 'green_cone', 'green_left_inverse', 'green_adjoint',
                         'green_commutes', 'green_kernel']
        failed = [(r.check, r.witness) for r in results if not r.passed]
        assert not failed
        kernel = results[-1].details
        assert kernel['box_image_dim'] > 0
        assert kernel['kernel_dim'] == kernel['box_image_dim']

    @pytest.mark.parametrize("depth", [1, 2])
    def test_shallow_kernel_certificate_rejected(self, ring, depth):
        # 深度 < 3 时 □C_W 放不进 C_V，秩相等是空话
        with pytest.raises(SolverError):
            verify_green(ring, 0, samples=1, margin=2, kernel_depth=depth)

    def test_strip_with_valence_weights(self, strip):
        results = verify_green(strip, 1, samples=2, margin=2)
        assert all(r.passed for r in results), [(r.check, r.witness) for r in results if not r.passed]

    def test_window_too_short(self):
        structure = _structure("circle(3)", slices=5)
        with pytest.raises(SolverError):
            verify_green(structure, 0, margin=3)

    def test_float_mode(self, ring):
        result = verify_green_float(ring, 1, samples=2)
        assert result.check == 'green_float_residual'
        assert result.passed


class TestRelativeStructure:

    @pytest.fixture(scope="class")
    def relative(self, strip):
        return strip.as_relative()

    def test_cached_and_flagged(self, strip, relative):
        assert relative.relative and not strip.relative
        assert strip.as_relative() is relative
        assert relative.as_relative() is relative
        assert strip.collar(1) == frozenset()
        assert relative.collar(1) == strip.spacetime.excluded(1, spatial=True)

    @pytest.mark.parametrize("k", [0, 1])
    def test_collar_rows_and_columns_vanish(self, relative, k):
        d = relative.operator('d', k)
        rows, cols = relative.collar(k + 1), relative.collar(k)
        assert cols
        assert not any(r in rows for r, row in d.items() if row)
        assert not any(c in cols for row in d.values() for c in row)
        delta = relative.operator('delta', k + 1)
        assert not any(r in cols for r, row in delta.items() if row)
        assert not any(c in rows for row in delta.values() for c in row)

    def test_relative_complex(self, relative):
        M = relative.spacetime
        values = RandomCochainGenerator(12).cochain(M, 2).values
        assert not linalg.apply(relative.operator('delta', 1), linalg.apply(relative.operator('delta', 2), values))
        values = RandomCochainGenerator(13).cochain(M, 0).values
        assert not linalg.apply(relative.operator('d', 1), linalg.apply(relative.operator('d', 0), values))

    def test_interior_rows_drop_spatial_ends(self, strip, relative):
        ends = strip.spacetime.excluded(0, spatial=True)
        plain = strip.interior_rows('delta', 1)
        cut = strip.interior_rows('delta', 1, spatial=True)
        assert cut == plain - ends
        assert plain & ends
        assert relative.interior_rows('delta', 1) == relative.interior_rows('delta', 1, spatial=True)

    def test_solver_rejects_collar_source(self, relative):
        cell = min(c for c in deep_cells(relative.spacetime, 1, 2) if c in relative.collar(1))
        with pytest.raises(SupportError):
            relative.solver(1).retarded_vector({cell: linalg.ONE})
        with pytest.raises(SupportError):
            relative.solver(1).advanced_vector({cell: linalg.ONE})

    def test_solution_vanishes_on_collar(self, relative):
        M = relative.spacetime
        deep = [c for c in deep_cells(M, 1, 2) if c not in relative.collar(1)]
        u = relative.solver(1).retarded_vector({deep[len(deep) // 2]: linalg.ONE})
        assert u
        assert not any(c in relative.collar(1) for c in u)
