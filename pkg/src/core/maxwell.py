"""
Maxwell 模块：势模型与 Faraday 模型的解空间、可观测量空间及其配对

所有空间都在观测窗口 O（全窗口两端各去掉 margin 个时间片）上计算；
Green 算子始终在全窗口上求解，再限制回 O。
"""
from dataclasses import dataclass
from functools import cached_property, partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.core import linalg
from src.core.cochain import Cochain, SupportClass, allowed_cells
from src.core.cohomology import QuotientBasis, coboundary_columns, sdm_rows, witness_vector
from src.core.errors import (ChainMapError, DegreeError, IdentityError, NotACocycleError, OffShellError,
                             SupportError)
from src.core.linalg import Dense, Vector
from src.core.lorentz import LorentzStructure, deep_cells, observation_cells
from src.core.mesh import ProductSpacetime, TimeAxis
from src.core.report import CheckResult, check
from src.generators.random_cochains import RandomCochainGenerator
from src.utils.log import get_logger

logger = get_logger(__name__)

FLAVORS = ('potential', 'faraday')


# ---------------------------------------------------------------- 观测窗口

@dataclass
class ObservationWindow:
    """全窗口 structure 中时间片 [offset, offset + N_O) 构成的子窗口"""
    structure: LorentzStructure
    local: LorentzStructure
    offset: int

    @property
    def spacetime(self) -> ProductSpacetime:
        return self.local.spacetime

    def embed(self, k: int, vec: Vector) -> Vector:
        O, M = self.local.spacetime, self.structure.spacetime
        return {O.shift_index(k, i, M, self.offset): v for i, v in vec.items()}

    def restrict(self, k: int, vec: Vector) -> Vector:
        O, M = self.local.spacetime, self.structure.spacetime
        out = {}
        for idx, v in vec.items():
            kind, n, j = M.cell(k, idx)
            local_n = n - self.offset
            limit = O.time.n_slices if kind == 1 else O.time.n_edges
            if 0 <= local_n < limit:
                out[O.index(k, kind, local_n, j)] = v
        return out

    @cached_property
    def relative(self) -> 'ObservationWindow':
        """同一窗口相对空间端领子的版本，用于类空紧支撑的理论"""
        return ObservationWindow(self.structure.as_relative(), self.local.as_relative(), self.offset)


def observation_window(structure: LorentzStructure, margin: int, collar: int) -> ObservationWindow:
    M = structure.spacetime
    slices = M.time.n_slices - 2 * margin
    if margin < 1 or slices <= 2 * collar:
        raise SupportError(f"{M.name}: 观测窗口太短（margin={margin}, collar={collar}）",
                           {'margin': margin, 'collar': collar, 'slices': slices})
    O = ProductSpacetime(TimeAxis(slices, collar), M.sigma)
    return ObservationWindow(structure, LorentzStructure(O, structure.metric, structure.relative), margin)


# ---------------------------------------------------------------- 规范固定

@dataclass(frozen=True)
class GaugePartition:
    """f₊ + f₋ = 1：f₊ 在 start 之前为 0，在 stop 之后为 1，中间线性"""
    time: TimeAxis
    start: int
    stop: int

    def __post_init__(self):
        t = self.time
        if not (t.collar_width <= self.start < self.stop <= t.n_slices - 1 - t.collar_width):
            raise SupportError(f"规范划分 [{self.start}, {self.stop}] 必须落在时间领子之间",
                               {'start': self.start, 'stop': self.stop})

    @classmethod
    def default(cls, time: TimeAxis) -> 'GaugePartition':
        return cls(time, max(time.collar_width, time.n_slices // 3),
                   min(time.n_slices - 1 - time.collar_width, 2 * time.n_slices // 3))

    def future(self, n: int) -> Any:
        if n <= self.start:
            return linalg.ZERO
        if n >= self.stop:
            return linalg.ONE
        return linalg.to_q(n - self.start) / linalg.to_q(self.stop - self.start)

    def past(self, n: int) -> Any:
        return linalg.ONE - self.future(n)

    def multiply(self, M: ProductSpacetime, k: int, vec: Vector, side: str) -> Vector:
        """逐胞腔乘以 f₊ 或 f₋；时间边取下端点的值"""
        weight = self.future if side == 'future' else self.past
        out = {}
        for idx, v in vec.items():
            w = weight(M.lower_key(k, idx))
            if w:
                out[idx] = w * v
        return out


def _first_residual(op, vec: Vector, rows) -> Optional[Tuple[int, Any]]:
    image = linalg.apply(op, vec)
    bad = sorted(r for r in image if r in rows)
    return (bad[0], image[bad[0]]) if bad else None


def lorenz_fix(structure: LorentzStructure, A: Cochain, partition: GaugePartition, margin: int = 2) -> Cochain:
    """χ = −δ(G₊(f₊A) + G₋(f₋A))，使 δ(A + dχ) = 0

    A 必须在观测带（两端各去掉 margin 个时间片）的内部行上满足 δdA = 0。
    """
    M, k = structure.spacetime, A.degree
    if A.home is not M:
        raise SupportError("势不在该时空窗口上")
    if k < 1:
        raise DegreeError("Lorenz 规范需要次数 ≥ 1 的势")
    band = set(observation_cells(M, k, margin)) & structure.interior_rows('delta_d', k)
    hit = _first_residual(structure.operator('delta_d', k), A.values, band)
    if hit is not None:
        raise OffShellError("势不满足 δdA = 0", {'row': hit[0], 'value': linalg.fmt_q(hit[1])})
    solver = structure.solver(k)
    u = linalg.vec_add(solver.retarded_vector(partition.multiply(M, k, A.values, 'future')),
                       solver.advanced_vector(partition.multiply(M, k, A.values, 'past')))
    chi = linalg.vec_scale(linalg.apply(structure.operator('delta', k), u), -linalg.ONE)
    return Cochain(M, k - 1, chi, SupportClass.FREE)


def random_on_shell(structure: LorentzStructure, k: int, margin: int = 2, seed: int = 31) -> Cochain:
    """A = Gδζ + dρ，ζ 为深内部的随机 (k+1)-上链，ρ 为随机 (k−1)-上链"""
    M = structure.spacetime
    gen = RandomCochainGenerator(seed)
    values: Vector = {}
    if k + 1 <= M.dimension:
        zeta = gen.cochain(M, k + 1, SupportClass.FREE, cells=deep_cells(M, k + 1, margin)).values
        values = structure.solver(k).causal_vector(linalg.apply(structure.operator('delta', k + 1), zeta))
    rho = gen.cochain(M, k - 1).values
    values = linalg.vec_add(values, linalg.apply(structure.operator('d', k - 1), rho))
    return Cochain(M, k, values, SupportClass.FREE)


def verify_lorenz_fix(structure: LorentzStructure, k: int, partition: GaugePartition,
                      margin: int = 2, seed: int = 31) -> CheckResult:
    M = structure.spacetime
    A = random_on_shell(structure, k, margin, seed)
    chi = lorenz_fix(structure, A, partition, margin)
    fixed = linalg.vec_add(A.values, linalg.apply(structure.operator('d', k - 1), chi.values))
    rows = set(observation_cells(M, k - 1, margin)) & structure.interior_rows('delta', k)
    hit = _first_residual(structure.operator('delta', k), fixed, rows)
    return check('lorenz_gauge', hit is None, M.name,
                 {'degree': k, 'partition': [partition.start, partition.stop], 'rows_checked': len(rows)},
                 witness=None if hit is None else {'row': hit[0], 'value': linalg.fmt_q(hit[1])})


# ---------------------------------------------------------------- 空间

@dataclass
class SolutionSpace:
    flavor: str
    degree: int
    basis: QuotientBasis

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass
class ObservableSpace:
    flavor: str
    degree: int
    basis: QuotientBasis
    gauge_invariant: bool = True

    @property
    def dim(self) -> int:
        return self.basis.dim


def _rows_of(op, rows: Sequence[int]) -> List[Vector]:
    return [dict(op.get(r, {})) for r in sorted(rows)]


def _image_inside(ops: Sequence[Tuple[Any, Sequence[int], int]], target: Sequence[int]) -> List[Vector]:
    """Σ op_i(x_i) 中落在 target 上的那部分像

    ops: [(矩阵, 允许的输入列, 拼接偏移)]；返回 span{Σ op_i x_i} ∩ C_target 的一组生成元。
    """
    target_set = set(target)
    rows: Dict[int, Vector] = {}
    columns: List[int] = []
    for op, cols, offset in ops:
        columns.extend(offset + c for c in cols)
        transposed = op.transpose()
        for c in cols:
            for r, v in transposed.get(c, {}).items():
                if r not in target_set:
                    rows.setdefault(r, {})[offset + c] = v
    width = max((offset + op.shape[1] for op, _, offset in ops), default=0)
    kernel = linalg.nullspace(list(rows.values()), width, columns)
    images = []
    for x in kernel:
        image: Vector = {}
        for op, _, offset in ops:
            part = {i - offset: v for i, v in x.items() if offset <= i < offset + op.shape[1]}
            image = linalg.vec_add(image, linalg.apply(op, part))
        if image:
            images.append(image)
    return images


def potential_solution_space(window: ObservationWindow, k: int,
                             support: SupportClass = SupportClass.FREE) -> SolutionSpace:
    """{A : δdA = 0 于内部行} / d C^{k−1}，支撑类作用于 A 与规范参数"""
    L, O = window.local, window.spacetime
    if k < 1 or k >= O.dimension:
        raise DegreeError(f"势模型要求 1 ≤ k ≤ {O.dimension - 1}: {k}")
    constraints = _rows_of(L.operator('delta_d', k), L.interior_rows('delta_d', k, spatial=True))
    generators = [g for g in coboundary_columns(O, k - 1, allowed_cells(O, k - 1, support)) if g]
    basis = QuotientBasis.from_operators(O, k, support, O.count(k), allowed_cells(O, k, support),
                                         constraints, generators, label=f"S_A[{support.value}]")
    return SolutionSpace('potential', k, basis)


def faraday_solution_space(window: ObservationWindow, k: int,
                           support: SupportClass = SupportClass.FREE) -> SolutionSpace:
    """{F : dF = 0，δF = 0 于内部行}，F 限制在 support 允许的胞腔上"""
    L, O = window.local, window.spacetime
    if k < 0 or k > O.dimension:
        raise DegreeError(f"Faraday 模型的次数越界: {k}")
    constraints: List[Vector] = []
    if k < O.dimension:
        constraints += sdm_rows(O.coboundary_matrix(k))
    if k >= 1:
        constraints += _rows_of(L.operator('delta', k), L.interior_rows('delta', k, spatial=True))
    basis = QuotientBasis.from_operators(O, k, support, O.count(k), allowed_cells(O, k, support),
                                         constraints, [], label=f"S_F[{support.value}]")
    return SolutionSpace('faraday', k, basis)


def potential_sources(window: ObservationWindow, k: int,
                      support: SupportClass = SupportClass.COMPACT) -> QuotientBasis:
    """(ker δ ∩ C_support) / (δd C_R ∩ C_support)，C_R 为 δd 内部行上的上链

    support=TC 给出参数化的源空间，support=Compact 给出可观测量 E_A；
    Σ 无空间端时两者相同。相对窗口上 δ 只在领子之外取方程。
    """
    L, O = window.local, window.spacetime
    if k < 1 or k >= O.dimension:
        raise DegreeError(f"势模型要求 1 ≤ k ≤ {O.dimension - 1}: {k}")
    if not support.temporal:
        raise SupportError(f"源必须在时间领子上为零，收到 {support.value}")
    cells = allowed_cells(O, k, support)
    constraints = sdm_rows(L.operator('delta', k))
    interior = sorted(L.interior_rows('delta_d', k, spatial=True))
    generators = _image_inside([(L.operator('delta_d', k), interior, 0)], cells)
    label = "E_A" if support is SupportClass.COMPACT else f"Ω_δ[{support.value}]"
    return QuotientBasis.from_operators(O, k, support, O.count(k), cells, constraints, generators, label=label)


def build_observables(window: ObservationWindow, k: int, flavor: str = 'potential') -> ObservableSpace:
    """紧支撑的可观测量空间，并验证规范不变性"""
    L, O = window.local, window.spacetime
    compact = allowed_cells(O, k, SupportClass.COMPACT)
    if flavor == 'potential':
        basis = potential_sources(window, k, SupportClass.COMPACT)
        gauge = all(not linalg.apply_transpose(O.coboundary_matrix(k - 1), _weighted(L, k, rep))
                    for rep in basis.representatives)
    elif flavor == 'faraday':
        ops = []
        offset = 0
        if k < O.dimension:
            ops.append((L.operator('delta', k + 1), list(range(O.count(k + 1))), 0))
            offset = O.count(k + 1)
        if k >= 1:
            ops.append((O.coboundary_matrix(k - 1), sorted(L.interior_rows('delta', k, spatial=True)), offset))
        generators = _image_inside(ops, compact)
        basis = QuotientBasis.from_operators(O, k, SupportClass.COMPACT, O.count(k), compact,
                                             [], generators, label="E_F")
        gauge = True
    else:
        raise ValueError(f"未知模型: {flavor}，可选 {', '.join(FLAVORS)}")
    logger.info(f"🔍 {O.name}: {basis.label}^{k} dim={basis.dim}")
    return ObservableSpace(flavor, k, basis, gauge)


def _weighted(L: LorentzStructure, k: int, vec: Vector) -> Vector:
    mass = L.mass(k)
    return {i: mass[i] * v for i, v in vec.items()}


# ---------------------------------------------------------------- 配对与最优性

def evaluation_matrix(L: LorentzStructure, observables: ObservableSpace, solutions: SolutionSpace) -> Dense:
    """V_ij = (α_i, S_j)_M，先验证两侧与分母的配对为零"""
    E, S, k = observables.basis, solutions.basis, observables.degree
    for i, rep in enumerate(E.representatives):
        for b_idx, b in enumerate(S.boundary_rows):
            value = L.pair_vectors(k, rep, b)
            if value:
                raise IdentityError(f"可观测量 {i} 在规范方向 {b_idx} 上非零",
                                    {'observable': i, 'gauge': b_idx, 'value': linalg.fmt_q(value)})
    for b_idx, b in enumerate(E.boundary_rows):
        for j, rep in enumerate(S.representatives):
            value = L.pair_vectors(k, b, rep)
            if value:
                raise IdentityError(f"平凡可观测量 {b_idx} 在解 {j} 上非零",
                                    {'trivial': b_idx, 'solution': j, 'value': linalg.fmt_q(value)})
    return [[L.pair_vectors(k, a, s) for s in S.representatives] for a in E.representatives]


def negative_control(V: Dense, extra_row: Sequence[Any]) -> Dict[str, Any]:
    """追加一个平凡可观测量的行后，矩阵必须行秩亏损；没有列时什么也证明不了"""
    augmented = [list(r) for r in V] + [list(extra_row)]
    rank = linalg.dense_rank(augmented) if extra_row else 0
    return {'rank': rank, 'rows': len(augmented), 'detected': bool(extra_row) and rank < len(augmented)}


def _trivial_observable(window: ObservationWindow, k: int, flavor: str) -> Optional[Vector]:
    """内部某个胞腔 c 上的 δd e_c（势）或 δ e_c / d e_c（Faraday）"""
    L, O = window.local, window.spacetime
    compact = set(allowed_cells(O, k, SupportClass.COMPACT))
    if flavor == 'potential':
        candidates = [(L.operator('delta_d', k), c) for c in sorted(L.interior_rows('delta_d', k, spatial=True))]
    elif k < O.dimension:
        candidates = [(L.operator('delta', k + 1), c) for c in range(O.count(k + 1))]
    else:
        candidates = [(O.coboundary_matrix(k - 1), c) for c in sorted(L.interior_rows('delta', k, spatial=True))]
    for op, c in candidates:
        image = linalg.apply(op, {c: linalg.ONE})
        if image and all(i in compact for i in image):
            return image
    return None


def _optimality(window: ObservationWindow, k: int, flavor: str, seed: int) -> CheckResult:
    L, O = window.local, window.spacetime
    observables = build_observables(window, k, flavor)
    solutions = potential_solution_space(window, k) if flavor == 'potential' else faraday_solution_space(window, k)
    V = evaluation_matrix(L, observables, solutions)
    rows, cols = observables.dim, solutions.dim
    square = rows == cols
    determinant = linalg.det(V) if square else None
    nondegenerate = square and (rows == 0 or determinant != linalg.ZERO)
    trivial = _trivial_observable(window, k, flavor)
    control = {'detected': False, 'reason': '没有可用的内部胞腔'}
    if trivial is not None:
        control = negative_control(V, [L.pair_vectors(k, trivial, s) for s in solutions.basis.representatives])
    # 换代表元（加规范方向）后 V 不变
    stable = True
    if flavor == 'potential' and cols:
        gen = RandomCochainGenerator(seed)
        shifted = [linalg.vec_add(s, linalg.apply(O.coboundary_matrix(k - 1), gen.cochain(O, k - 1).values))
                   for s in solutions.basis.representatives]
        stable = [[L.pair_vectors(k, a, s) for s in shifted] for a in observables.basis.representatives] == V
    passed = nondegenerate and control['detected'] and stable and observables.gauge_invariant
    details = {'degree': k, 'observables': rows, 'solutions': cols,
               'determinant': linalg.fmt_q(determinant) if determinant is not None else None,
               'negative_control': control, 'representative_independent': stable,
               'gauge_invariant': observables.gauge_invariant}
    witness = None
    if not nondegenerate:
        witness = {'rows': rows, 'cols': cols, 'kernel': witness_vector(V) if square else None}
    logger.info(f"🧮 {O.name}: {flavor} k={k} V 为 {rows}×{cols}，非退化={nondegenerate}")
    return check(f'{flavor}_optimality', passed, O.name, details, {'V': V}, witness)


def verify_potential_optimality(window: ObservationWindow, k: int, seed: int = 37) -> CheckResult:
    return _optimality(window, k, 'potential', seed)


def verify_faraday_optimality(window: ObservationWindow, k: int, seed: int = 41) -> CheckResult:
    return _optimality(window, k, 'faraday', seed)


# ---------------------------------------------------------------- 参数化

def _induced_vectors(source: QuotientBasis, image_of: Callable[[Vector], Vector], target: QuotientBasis) -> Dense:
    """向量版的诱导映射：代表元的像取坐标，分母的像必须是零类"""
    columns = []
    for i, rep in enumerate(source.representatives):
        try:
            columns.append(target.coordinates(image_of(rep)))
        except (NotACocycleError, SupportError) as exc:
            raise ChainMapError(f"代表元 {i} 的像不在 {target.label} 中",
                                {'representative': i, 'cause': exc.witness}) from exc
    for b_idx, b in enumerate(source.boundary_rows):
        try:
            coords = target.coordinates(image_of(b))
        except (NotACocycleError, SupportError) as exc:
            raise ChainMapError(f"分母 {b_idx} 的像不在 {target.label} 中",
                                {'boundary': b_idx, 'cause': exc.witness}) from exc
        if any(coords):
            raise ChainMapError(f"分母 {b_idx} 的像不是零类", {'boundary': b_idx})
    return [[columns[j][i] for j in range(source.dim)] for i in range(target.dim)]


def _bijective(matrix: Dense, rows: int, cols: int) -> bool:
    return rows == cols and (rows == 0 or linalg.det(matrix) != linalg.ZERO)


def _causal_image(window: ObservationWindow, k: int) -> Callable[[Vector], Vector]:
    solver = window.structure.solver(k)

    def _image(vec: Vector) -> Vector:
        return window.restrict(k, solver.causal_vector(window.embed(k, vec)))

    return _image


def potential_parametrization(window: ObservationWindow, k: int, target: Optional[SolutionSpace] = None,
                              support: SupportClass = SupportClass.TC) -> Tuple[Dense, QuotientBasis, SolutionSpace]:
    """[ω] ↦ [Gω|_O]，ω ∈ ker δ ∩ C_support(O)，G 在全窗口上求解"""
    source = potential_sources(window, k, support)
    target = target or potential_solution_space(window, k)
    return _induced_vectors(source, _causal_image(window, k), target.basis), source, target


def faraday_sources(window: ObservationWindow, k: int,
                    support: SupportClass = SupportClass.COMPACT) -> Tuple[QuotientBasis, int]:
    """(Z_F 的商空间基, α 分量的长度)：dα = 0，δβ = 0，分母为 (dω, δω)

    α、β、ω 都限制在 support 允许的胞腔上；support 必须在时间领子上为零。
    """
    L, O = window.local, window.spacetime
    m = O.dimension
    if k < 0 or k > m:
        raise DegreeError(f"Faraday 模型的次数越界: {k}")
    if not support.temporal:
        raise SupportError(f"源必须在时间领子上为零，收到 {support.value}")
    n_up = O.count(k + 1) if k < m else 0
    n_down = O.count(k - 1) if k >= 1 else 0
    up_cells = allowed_cells(O, k + 1, support) if k < m else []
    down_cells = allowed_cells(O, k - 1, support) if k >= 1 else []
    allowed = list(up_cells) + [n_up + j for j in down_cells]
    constraints: List[Vector] = []
    if k + 1 < m:
        constraints += sdm_rows(O.coboundary_matrix(k + 1))
    if k - 1 >= 1:
        constraints += [{n_up + j: v for j, v in r.items()} for r in sdm_rows(L.operator('delta', k - 1))]
    inside = set(allowed)
    up_set, down_set = set(up_cells), set(down_cells)
    generators = []
    omega_cells = allowed_cells(O, k, support)
    outside_rows: List[Vector] = []
    if k < m:
        outside_rows += [dict(r) for i, r in O.coboundary_matrix(k).items() if i not in up_set]
    if k >= 1:
        outside_rows += [dict(r) for i, r in L.operator('delta', k).items() if i not in down_set]
    for omega in linalg.nullspace(outside_rows, O.count(k), omega_cells):
        up = linalg.apply(O.coboundary_matrix(k), omega) if k < m else {}
        down = linalg.apply(L.operator('delta', k), omega) if k >= 1 else {}
        combined = {**up, **{n_up + j: v for j, v in down.items()}}
        if combined and all(i in inside for i in combined):
            generators.append(combined)
    label = "Z_F" if support is SupportClass.COMPACT else f"Z_F[{support.value}]"
    source = QuotientBasis.from_operators(O, k, support, n_up + n_down, allowed, constraints, generators, label=label)
    return source, n_up


def _faraday_image(window: ObservationWindow, k: int, n_up: int) -> Callable[[Vector], Vector]:
    m = window.spacetime.dimension
    structure = window.structure
    solver = structure.solver(k)

    def _image(vec: Vector) -> Vector:
        alpha = window.embed(k + 1, {i: v for i, v in vec.items() if i < n_up}) if k < m else {}
        beta = window.embed(k - 1, {i - n_up: v for i, v in vec.items() if i >= n_up}) if k >= 1 else {}
        source_vec: Vector = {}
        if alpha:
            source_vec = linalg.apply(structure.operator('delta', k + 1), alpha)
        if beta:
            source_vec = linalg.vec_add(source_vec, linalg.apply(structure.operator('d', k - 1), beta))
        return window.restrict(k, solver.causal_vector(source_vec))

    return _image


def faraday_parametrization(window: ObservationWindow, k: int, target: Optional[SolutionSpace] = None,
                            support: SupportClass = SupportClass.TC) -> Tuple[Dense, QuotientBasis, SolutionSpace]:
    """[α ⊕ β] ↦ [G(δα + dβ)|_O]，G 在全窗口上求解"""
    source, n_up = faraday_sources(window, k, support)
    target = target or faraday_solution_space(window, k)
    return _induced_vectors(source, _faraday_image(window, k, n_up), target.basis), source, target


def _parametrization_check(name: str, window: ObservationWindow, k: int, build) -> CheckResult:
    O = window.spacetime
    try:
        matrix, source, target = build(window, k)
    except ChainMapError as exc:
        return check(name, False, O.name, {'degree': k}, witness=exc.to_dict())
    ok = _bijective(matrix, target.dim, source.dim)
    return check(name, ok, O.name,
                 {'degree': k, 'source_dim': source.dim, 'target_dim': target.dim}, {'P': matrix},
                 None if ok else {'kernel': witness_vector(matrix) if source.dim == target.dim else None})


def verify_potential_parametrization(window: ObservationWindow, k: int) -> CheckResult:
    return _parametrization_check('potential_parametrization', window, k, potential_parametrization)


def verify_faraday_parametrization(window: ObservationWindow, k: int) -> CheckResult:
    return _parametrization_check('faraday_parametrization', window, k, faraday_parametrization)


def sc_solution_spaces(window: ObservationWindow, k: int, flavor: str = 'potential') -> CheckResult:
    """类空紧支撑的解空间由紧支撑源经 G 双射地参数化

    在相对空间端领子的窗口上计算：δ、d 与 G 都在领子上取零。
    """
    rel = window.relative
    O = rel.spacetime
    if flavor == 'potential':
        sc = potential_solution_space(rel, k, SupportClass.SC)
        build = partial(potential_parametrization, target=sc, support=SupportClass.COMPACT)
    elif flavor == 'faraday':
        sc = faraday_solution_space(rel, k, SupportClass.SC)
        build = partial(faraday_parametrization, target=sc, support=SupportClass.COMPACT)
    else:
        raise ValueError(f"未知模型: {flavor}，可选 {', '.join(FLAVORS)}")
    source_dim: Optional[int] = None
    try:
        matrix, source, _ = build(rel, k)
        source_dim = source.dim
        status = 'bijective' if _bijective(matrix, sc.dim, source.dim) else 'degenerate'
    except ChainMapError:
        status = 'leaves_spatial_support'
    passed = status == 'bijective'
    logger.info(f"🔍 {O.name}: {sc.basis.label}^{k} dim={sc.dim}，紧支撑源 dim={source_dim}，参数化 {status}")
    return check('sc_solution_spaces', passed, O.name,
                 {'degree': k, 'flavor': flavor, 'sc_dim': sc.dim, 'compact_source_dim': source_dim,
                  'parametrization': status})
