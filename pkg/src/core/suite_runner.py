"""
套件运行模块

把配置里的夹具分发给各个验证器，收集 CheckResult，组装成 RunReport。
夹具级任务在进程池里并行（DEC_WORKERS > 1 时），报告按套件顺序和夹具顺序组装，
与并行度无关。
"""
import asyncio
import time
from concurrent.futures import ProcessPoolExecutor
from functools import cached_property
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from src.core.cochain import SupportClass
from src.core.cohomology import alternating_cell_count, betti_profile, euler_characteristic
from src.core.duality import (verify_classical_duality, verify_compatibility_lemma, verify_graded_symmetry,
                              verify_sc_tc_duality)
from src.core.errors import ConfigError, DecError
from src.core.homotopy import (TimeBump, verify_base_slice_independence, verify_p_identity, verify_q_identity,
                               verify_sc_isomorphism, verify_slice_maps, verify_tc_isomorphism)
from src.core.lorentz import LorentzStructure, build_metric, verify_green, verify_green_float, verify_metric
from src.core.maxwell import (GaugePartition, ObservationWindow, observation_window, sc_solution_spaces,
                              verify_faraday_optimality, verify_faraday_parametrization, verify_lorenz_fix,
                              verify_potential_optimality, verify_potential_parametrization)
from src.core.mesh import Complex, TimeAxis, build_product, build_sigma, verify_complex
from src.core.report import CheckResult, RunReport, SuiteReport, check, failed_check
from src.core.resource_guard import ResourceGuard
from src.utils.config import SELECTORS, SUITES, FixtureSpec, RunConfig, worker_count
from src.utils.log import get_logger

logger = get_logger(__name__)

# (检查名, 惰性求值的检查)
Job = Tuple[str, Callable[[], object]]
# (检查结果, 资源保护触发次数)
FixtureResult = Tuple[List[CheckResult], int]


class FixtureContext:
    """一个夹具的全部派生对象，按需构造并缓存"""

    def __init__(self, spec: FixtureSpec, config: RunConfig):
        self.spec = spec
        self.config = config

    @cached_property
    def sigma(self):
        return build_sigma(self.spec.sigma)

    @cached_property
    def time(self) -> TimeAxis:
        spec = self.spec
        return TimeAxis(int(spec.slices), spec.collar, spec.base_slice)

    @cached_property
    def spacetime(self):
        return build_product(self.time, self.sigma)

    @property
    def home(self) -> Complex:
        return self.spacetime if self.spec.is_spacetime else self.sigma

    def rebuild(self) -> Complex:
        sigma = build_sigma(self.spec.sigma)
        return build_product(self.time, sigma) if self.spec.is_spacetime else sigma

    @cached_property
    def bump(self) -> TimeBump:
        if self.spec.bump_edge is not None:
            return TimeBump.single(self.time, int(self.spec.bump_edge))
        return TimeBump.default(self.time)

    @cached_property
    def structure(self) -> LorentzStructure:
        metric = build_metric(self.sigma, self.config.metric['scheme'], self.config.metric['dt'])
        return LorentzStructure(self.spacetime, metric)

    @cached_property
    def margin(self) -> int:
        """夹具 margin > [window] margin > 锥半径 × 领子宽度，截到观测窗口仍可容纳的范围"""
        if self.spec.margin is not None:
            return int(self.spec.margin)
        if self.config.window['margin'] is not None:
            return int(self.config.window['margin'])
        radius = self.structure.solver(1).cone_radius
        collar = int(self.config.window['observation_collar'])
        upper = max(2, (self.time.n_slices - 2 * collar - 1) // 2)
        return min(max(2, radius * self.time.collar_width), upper)

    @cached_property
    def window(self) -> ObservationWindow:
        return observation_window(self.structure, self.margin, int(self.config.window['observation_collar']))

    def degrees(self, default: Tuple[int, ...]) -> Tuple[int, ...]:
        return self.spec.degrees or default


class SuiteRunner:
    """验证套件运行器"""

    def __init__(self, config: RunConfig, exact: bool = True, workers: Optional[int] = None):
        self.config = config
        self.exact = exact
        self.workers = workers or worker_count()
        self.engine = config.engine
        self.contexts: Dict[str, FixtureContext] = {
            name: FixtureContext(spec, config) for name, spec in config.fixtures.items()}
        self.counter = 0
        self.failed = 0
        self.guard_trips = 0

    # ------------------------------------------------------------ 入口

    def run(self, selector: str) -> RunReport:
        return asyncio.run(self.run_async(selector))

    async def run_async(self, selector: str) -> RunReport:
        if selector not in SELECTORS:
            raise ConfigError(f"未知的套件选择器: {selector}，可选 {', '.join(SELECTORS)}")
        suites = SUITES if selector == 'all' else (selector,)
        start = time.perf_counter()
        logger.info(f"📡 开始运行 {selector}（{self.config.path}），并行度 {self.workers}，"
                    f"模式 {'exact' if self.exact else 'float'}")
        reports: List[SuiteReport] = []
        pool = ProcessPoolExecutor(max_workers=self.workers) if self.workers > 1 else None
        try:
            for suite in suites:
                batches = await self._run_suite(suite, pool)
                checks = []
                for batch, trips in batches:
                    checks.extend(batch)
                    self.guard_trips += trips
                self.counter += len(checks)
                self.failed += sum(not c.passed for c in checks)
                reports.append(SuiteReport(suite=suite, passed=all(c.passed for c in checks), checks=checks))
                logger.info(f"📊 套件 {suite}: {len(checks)} 项，失败 {sum(not c.passed for c in checks)}")
        finally:
            if pool is not None:
                pool.shutdown()
        passed = all(r.passed for r in reports)
        elapsed = time.perf_counter() - start
        logger.info(f"✅ 运行结束: {self.counter} 项检查，失败 {self.failed}，"
                    f"资源保护触发 {self.guard_trips} 次，耗时 {elapsed:.2f} 秒")
        return RunReport(config=self.config.path, selector=selector, exact=self.exact, passed=passed, suites=reports)

    # ------------------------------------------------------------ 夹具级执行

    async def _run_suite(self, suite: str, pool: Optional[ProcessPoolExecutor]) -> List[FixtureResult]:
        fixtures = self.config.fixtures_for(suite)
        if pool is None:
            return [self._run_fixture(suite, spec) for spec in fixtures]
        loop = asyncio.get_running_loop()
        tasks = [loop.run_in_executor(pool, _fixture_task, self.config, self.exact, suite, spec.name)
                 for spec in fixtures]
        return list(await asyncio.gather(*tasks))

    def _run_fixture(self, suite: str, spec: FixtureSpec) -> FixtureResult:
        """(检查结果, 资源保护触发次数)；计数由调用方汇总"""
        ctx = self.contexts[spec.name]
        guard = ResourceGuard(self.config.guard)
        out: List[CheckResult] = []
        trips = 0
        jobs = getattr(self, f'_{suite}_jobs')(ctx)
        while True:
            try:
                name, job = next(jobs)
            except StopIteration:
                break
            except DecError as exc:
                out.append(failed_check(f'{suite}_setup', spec.name, exc))
                break
            out.extend(self._execute(name, spec.name, job))
            stop, reason = guard.step(f"{spec.name}/{name}")
            if stop:
                trips += 1
                out.append(check('resource_guard', False, spec.name, {'steps': guard.counter},
                                 witness={'reason': reason, 'after': name}))
                break
        logger.debug(f"🛡️ {spec.name}: {guard.get_stats()}")
        return out, trips

    def _execute(self, name: str, fixture: str, job: Callable[[], object]) -> List[CheckResult]:
        try:
            result = job()
        except DecError as exc:
            logger.warning(f"❌ {fixture}/{name}: {exc.message}")
            return [failed_check(name, fixture, exc)]
        except (ArithmeticError, ValueError) as exc:
            logger.error(f"❌ {fixture}/{name}: {type(exc).__name__}: {exc}")
            return [failed_check(name, fixture, exc)]
        results = [item.model_copy(update={'fixture': fixture})
                   for item in (result if isinstance(result, list) else [result])]
        for item in results:
            if not item.passed:
                logger.warning(f"⚠️ {fixture}/{item.check} 未通过: {item.witness}")
        return results

    # ------------------------------------------------------------ 各套件

    def _mesh_jobs(self, ctx: FixtureContext) -> Iterator[Job]:
        yield 'complex_invariants', lambda: verify_complex(ctx.home, ctx.rebuild())

    def _betti_jobs(self, ctx: FixtureContext) -> Iterator[Job]:
        X = ctx.home
        supports = [SupportClass.FREE, SupportClass.COMPACT]
        if ctx.spec.is_spacetime:
            supports += [SupportClass.SC, SupportClass.TC]
        yield 'betti_profile', lambda: _betti_check(X, supports, ctx.spec.expected_betti)
        if ctx.spec.is_spacetime:
            yield 'metric_nondegeneracy', lambda: verify_metric(ctx.structure)

    def _homotopy_jobs(self, ctx: FixtureContext) -> Iterator[Job]:
        M, bump = ctx.spacetime, ctx.bump
        seed = self.engine['seed']
        samples = self.engine['homotopy_samples']
        yield 'slice_maps', lambda: verify_slice_maps(M, bump, self.engine['slice_samples'], seed + 1)
        yield 'p_identity', lambda: verify_p_identity(M, samples, seed + 2)
        yield 'q_identity', lambda: verify_q_identity(M, bump, samples, seed + 3)
        yield 'sc_isomorphism', lambda: verify_sc_isomorphism(M)
        yield 'tc_isomorphism', lambda: verify_tc_isomorphism(M, bump)
        yield 'base_slice_independence', lambda: verify_base_slice_independence(M)

    def _duality_jobs(self, ctx: FixtureContext) -> Iterator[Job]:
        if not ctx.spec.is_spacetime:
            yield 'classical_duality', lambda: verify_classical_duality(ctx.sigma)
            return
        M = ctx.spacetime
        yield 'classical_duality', lambda: verify_classical_duality(M.sigma)
        yield 'sc_tc_duality', lambda: verify_sc_tc_duality(M)
        yield 'graded_symmetry', lambda: verify_graded_symmetry(M)
        yield 'compatibility_lemma', lambda: verify_compatibility_lemma(
            M, ctx.bump, self.engine['compat_samples'], self.engine['seed'] + 4)

    def _green_jobs(self, ctx: FixtureContext) -> Iterator[Job]:
        m = ctx.spacetime.dimension
        margin = ctx.margin
        for k in ctx.degrees(tuple(range(m + 1))):
            if self.exact:
                yield f'green_{k}', lambda k=k: verify_green(
                    ctx.structure, k, self.engine['green_samples'], self.engine['seed'] + 5, margin,
                    self.engine['kernel_depth'])
            else:
                yield f'green_float_{k}', lambda k=k: verify_green_float(
                    ctx.structure, k, self.engine['green_samples'], self.engine['seed'] + 5, margin)

    def _maxwell_jobs(self, ctx: FixtureContext) -> Iterator[Job]:
        partition = GaugePartition.default(ctx.time)
        seed = self.engine['seed']
        free = not ctx.sigma.spatial_end[0]
        for k in ctx.spec.field_degrees or (1,):
            yield f'lorenz_gauge_{k}', lambda k=k: _lorenz_batch(
                ctx, k, partition, self.engine['lorenz_samples'], seed + 6)
            if free:
                yield f'potential_parametrization_{k}', lambda k=k: verify_potential_parametrization(ctx.window, k)
            yield f'potential_optimality_{k}', lambda k=k: verify_potential_optimality(ctx.window, k, seed + 7)
            yield f'sc_solution_spaces_{k}', lambda k=k: sc_solution_spaces(ctx.window, k, 'potential')

    def _faraday_jobs(self, ctx: FixtureContext) -> Iterator[Job]:
        seed = self.engine['seed']
        free = not ctx.sigma.spatial_end[0]
        for k in ctx.spec.field_degrees or (1,):
            if free:
                yield f'faraday_parametrization_{k}', lambda k=k: verify_faraday_parametrization(ctx.window, k)
            yield f'faraday_optimality_{k}', lambda k=k: verify_faraday_optimality(ctx.window, k, seed + 8)
            yield f'sc_solution_spaces_{k}', lambda k=k: sc_solution_spaces(ctx.window, k, 'faraday')


def _betti_check(X: Complex, supports: List[SupportClass], expected: Dict[str, Tuple[int, ...]]) -> CheckResult:
    """各支撑类的 Betti 数与配置里的期望值逐项相等，且 Euler 示性数与交错胞腔数一致"""
    profiles, mismatched, unexpected = {}, [], []
    for support in supports:
        profile = betti_profile(X, support)
        profiles[support.value] = list(profile)
        if euler_characteristic(profile) != alternating_cell_count(X, support):
            mismatched.append(support.value)
        if support.value in expected and tuple(profile) != tuple(expected[support.value]):
            unexpected.append(support.value)
    logger.info(f"🧮 {X.name}: Betti {profiles}")
    witness = None
    if unexpected:
        support = unexpected[0]
        witness = {'support': support, 'expected': list(expected[support]), 'actual': profiles[support]}
    elif mismatched:
        witness = {'support': mismatched[0]}
    return check('betti_profile', not (mismatched or unexpected), X.name,
                 {'profiles': profiles, 'expected': {k: list(v) for k, v in expected.items()}}, witness=witness)


def _lorenz_batch(ctx: FixtureContext, k: int, partition: GaugePartition, samples: int, seed: int) -> CheckResult:
    """多个随机在壳势上的 Lorenz 规范固定，汇总成一项"""
    results = [verify_lorenz_fix(ctx.structure, k, partition, ctx.margin, seed + s) for s in range(samples)]
    failures = [r for r in results if not r.passed]
    details = {**results[0].details, 'samples': samples, 'failures': len(failures)} if results else {}
    return check('lorenz_gauge', not failures, ctx.spec.name, details,
                 witness=failures[0].witness if failures else None)


def run_suites(config: RunConfig, selector: str, exact: bool = True) -> RunReport:
    return SuiteRunner(config, exact).run(selector)


def _fixture_task(config: RunConfig, exact: bool, suite: str, name: str) -> FixtureResult:
    """进程池里的一个夹具任务：子进程自建运行器，只把结果送回"""
    runner = SuiteRunner(config, exact, workers=1)
    return runner._run_fixture(suite, config.fixtures[name])
