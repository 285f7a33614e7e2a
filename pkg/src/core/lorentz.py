"""
Lorentz 结构模块

对角质量矩阵（type-1 为 dt·w，type-2 为 −w/dt）给出不定内积；
δ = M⁻¹dᵀM，□ = dδ + δd。Green 算子通过按时间键逐片推进的块求解得到，
块逆按局部签名缓存。
"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from sympy.polys.matrices.sdm import SDM

from src.core import linalg
from src.core.cochain import Cochain, SupportClass
from src.core.errors import ComplexMismatchError, DegreeError, SolverError, SupportError
from src.core.linalg import Vector
from src.core.mesh import CellComplex, ProductSpacetime, TimeAxis
from src.core.report import CheckResult, check
from src.generators.random_cochains import RandomCochainGenerator
from src.utils.log import get_logger

logger = get_logger(__name__)

WEIGHT_SCHEMES = ('uniform', 'valence')
OPERATOR_SHIFT = {'d': 1, 'delta': -1, 'box': 0, 'delta_d': 0}
# 把窗口嵌入延长时空时的时间平移量
EXTENSION = 2
# 秩证书的最小深度：更浅的带上 □C_W ∩ C_V 为零
MIN_KERNEL_DEPTH = 3


@dataclass(frozen=True)
class MetricData:
    """时间步长 dt 与 Σ 上各次数胞腔的正对偶体积权重"""
    dt: Any
    weights: Tuple[Tuple[Any, ...], ...]
    scheme: str = 'uniform'

    def __post_init__(self):
        if self.dt <= linalg.ZERO:
            raise SolverError(f"时间步长必须为正: {linalg.fmt_q(self.dt)}")
        for k, row in enumerate(self.weights):
            for j, w in enumerate(row):
                if w <= linalg.ZERO:
                    raise SolverError(f"权重必须为正: 次数 {k} 胞腔 {j}", {'degree': k, 'cell': j})


def build_metric(sigma: CellComplex, scheme: str = 'uniform', dt: Any = None) -> MetricData:
    """uniform: 全部权重为 1；valence: w(σ) = 1 / (1 + σ 的上面数)"""
    if scheme not in WEIGHT_SCHEMES:
        raise SolverError(f"未知的权重方案: {scheme}，可选 {', '.join(WEIGHT_SCHEMES)}")
    step = linalg.to_q(dt if dt is not None else "1/2")
    weights = []
    for k in range(sigma.dimension + 1):
        if scheme == 'uniform':
            weights.append(tuple(linalg.ONE for _ in range(sigma.count(k))))
            continue
        valence = [0] * sigma.count(k)
        if k < sigma.dimension:
            for faces in sigma.faces[k + 1]:
                for f in faces:
                    valence[f] += 1
        weights.append(tuple(linalg.ONE / linalg.to_q(1 + v) for v in valence))
    return MetricData(step, tuple(weights), scheme)


class LorentzStructure:
    """时空窗口上的质量矩阵与由其导出的算子

    relative=True 时是相对空间端领子的版本：上链在领子胞腔上为零，
    d 与 δ 的输出都投影掉领子胞腔（δ 为 d 在这些上链上的伴随），
    Σ 有端点时它就是类空紧支撑的封闭理论。
    """

    def __init__(self, spacetime: ProductSpacetime, metric: MetricData, relative: bool = False):
        if len(metric.weights) != spacetime.sigma.dimension + 1:
            raise ComplexMismatchError(f"度量权重的次数与 {spacetime.sigma.name} 不匹配")
        self.spacetime = spacetime
        self.metric = metric
        self.relative = relative
        self._mass: Dict[int, List[Any]] = {}
        self._operators: Dict[Tuple[str, int], SDM] = {}
        self._interior: Dict[Tuple[str, int, bool], FrozenSet[int]] = {}
        self._solvers: Dict[Tuple[int, bool], 'GreenSolver'] = {}
        self._extended: Optional['LorentzStructure'] = None
        self._relative: Optional['LorentzStructure'] = None

    @property
    def name(self) -> str:
        return self.spacetime.name

    def collar(self, k: int) -> FrozenSet[int]:
        """相对版本中取零的 k-胞腔（空间端领子）；普通版本为空"""
        return self.spacetime.excluded(k, spatial=True) if self.relative else frozenset()

    def as_relative(self) -> 'LorentzStructure':
        if self.relative:
            return self
        if self._relative is None:
            self._relative = LorentzStructure(self.spacetime, self.metric, relative=True)
        return self._relative

    # ------------------------------------------------------------ 质量矩阵

    def mass(self, k: int) -> List[Any]:
        if k not in self._mass:
            M, dt, w = self.spacetime, self.metric.dt, self.metric.weights
            diag = []
            for _, kind, _, j in M.iter_cells(k):
                diag.append(dt * w[k][j] if kind == 1 else -w[k - 1][j] / dt)
            self._mass[k] = diag
        return self._mass[k]

    def signature(self, k: int, idx: int) -> int:
        return 1 if self.spacetime.cell(k, idx)[0] == 1 else -1

    def metric_pairing(self, a: Cochain, b: Cochain) -> Any:
        """(a, b)_M = Σ M_k[i] a_i b_i"""
        if a.home is not self.spacetime or b.home is not self.spacetime:
            raise ComplexMismatchError("度量配对的上链不在该时空窗口上")
        if a.degree != b.degree:
            raise DegreeError(f"度量配对要求同次数: {a.degree} vs {b.degree}")
        return self.pair_vectors(a.degree, a.values, b.values)

    def pair_vectors(self, k: int, u: Vector, v: Vector) -> Any:
        mass = self.mass(k)
        total = linalg.ZERO
        small, large = (u, v) if len(u) <= len(v) else (v, u)
        for i, x in small.items():
            y = large.get(i)
            if y:
                total += mass[i] * x * y
        return total

    # ------------------------------------------------------------ 算子

    def _zero(self, rows: int, cols: int) -> SDM:
        return SDM({}, (rows, cols), linalg.QQ)

    def operator(self, name: str, k: int) -> SDM:
        """name ∈ {d, delta, box, delta_d}，作用在 k 次上链上"""
        if name not in OPERATOR_SHIFT:
            raise ValueError(f"未知算子: {name}")
        key = (name, k)
        if key not in self._operators:
            self._operators[key] = getattr(self, f'_build_{name}')(k)
        return self._operators[key]

    def _project(self, op: SDM, out_degree: int, in_degree: int) -> SDM:
        if not self.relative:
            return op
        rows, cols = self.collar(out_degree), self.collar(in_degree)
        entries = [(r, c, v) for r, row in op.items() if r not in rows for c, v in row.items() if c not in cols]
        return linalg.matrix_from_entries(entries, op.shape)

    def _build_d(self, k: int) -> SDM:
        return self._project(self.spacetime.coboundary_matrix(k), k + 1, k)

    def _build_delta(self, k: int) -> SDM:
        M = self.spacetime
        if k < 1 or k > M.dimension:
            raise DegreeError(f"δ 不作用在 {k} 次上链上")
        upper, lower = self.mass(k), self.mass(k - 1)
        transposed = M.coboundary_matrix(k - 1).transpose()
        entries = [(j, i, v * upper[i] / lower[j]) for j, r in transposed.items() for i, v in r.items()]
        return self._project(linalg.matrix_from_entries(entries, (M.count(k - 1), M.count(k))), k - 1, k)

    def _build_delta_d(self, k: int) -> SDM:
        n = self.spacetime.count(k)
        if k >= self.spacetime.dimension:
            return self._zero(n, n)
        return self.operator('delta', k + 1).matmul(self.operator('d', k))

    def _build_box(self, k: int) -> SDM:
        result = self.operator('delta_d', k)
        if k >= 1:
            result = result.add(self.operator('d', k - 1).matmul(self.operator('delta', k)))
        return result

    def codifferential(self, c: Cochain) -> Cochain:
        if c.degree == 0:
            raise DegreeError("0 次上链没有余微分")
        return Cochain(self.spacetime, c.degree - 1, linalg.apply(self.operator('delta', c.degree), c.values))

    def box(self, c: Cochain) -> Cochain:
        return Cochain(self.spacetime, c.degree, linalg.apply(self.operator('box', c.degree), c.values))

    # ------------------------------------------------------------ 内部行

    @property
    def extended(self) -> 'LorentzStructure':
        """两端各多 EXTENSION 个时间片的同一时空"""
        if self._extended is None:
            M = self.spacetime
            longer = ProductSpacetime(TimeAxis(M.time.n_slices + 2 * EXTENSION, 1), M.sigma)
            self._extended = LorentzStructure(longer, self.metric, self.relative)
        return self._extended

    def interior_rows(self, name: str, k: int, spatial: bool = False) -> FrozenSet[int]:
        """算子在窗口内的行与延长时空中对应行完全一致的那些行

        spatial=True 时再去掉落在空间端领子上的行：Σ 越过端点延伸后，
        δ 与 δd 恰好在这些行上多出窗口外的列或改变质量，非领子行不受影响。
        相对版本的领子行恒为零行，总是去掉。
        """
        key = (name, k, spatial or self.relative)
        if key not in self._interior:
            M = self.spacetime
            out_degree = k + OPERATOR_SHIFT[name]
            rows = set(self._time_interior(name, k))
            if spatial or self.relative:
                rows -= M.excluded(out_degree, spatial=True)
            self._interior[key] = frozenset(rows)
            logger.debug(f"🔍 {M.name}: {name}_{k} 内部行 {len(rows)}/{M.count(out_degree)}"
                         f"{'（去掉空间端）' if spatial or self.relative else ''}")
        return self._interior[key]

    def _time_interior(self, name: str, k: int) -> List[int]:
        M, E = self.spacetime, self.extended.spacetime
        out_degree = k + OPERATOR_SHIFT[name]
        window_op, long_op = self.operator(name, k), self.extended.operator(name, k)
        rows = []
        for r in range(M.count(out_degree)):
            mapped = {M.shift_index(k, c, E, EXTENSION): v for c, v in window_op.get(r, {}).items()}
            if mapped == dict(long_op.get(M.shift_index(out_degree, r, E, EXTENSION), {})):
                rows.append(r)
        return rows

    def stencil_radius(self, name: str, k: int) -> int:
        """内部行与其非零列之间 Σ 距离的最大值"""
        M = self.spacetime
        out_degree = k + OPERATOR_SHIFT[name]
        op = self.operator(name, k)
        radius = 0
        for r in self.interior_rows(name, k):
            for c in op.get(r, {}):
                radius = max(radius, M.cell_distance(out_degree, r, k, c))
        return radius

    def solver(self, k: int, exact: bool = True) -> 'GreenSolver':
        key = (k, exact)
        if key not in self._solvers:
            self._solvers[key] = GreenSolver(self, k, exact)
        return self._solvers[key]


# ---------------------------------------------------------------- Green 求解

@dataclass
class _Step:
    key: int
    rows: List[int]
    cols: List[int]
    inverse: Dict[int, Dict[int, Any]]


@dataclass
class _Plan:
    direction: int
    steps: List[_Step] = field(default_factory=list)
    unenforced: List[int] = field(default_factory=list)
    spread: int = 0


class GreenSolver:
    """□_k 的推迟 / 超前求解器

    推迟：按下时间键推进，键 0、1 上的未知量取零，第 n 个键的内部行确定键 n+1 的胞腔；
    超前：按上时间键反向推进，键 N−1、N−2 取零。
    """

    def __init__(self, structure: LorentzStructure, k: int, exact: bool = True):
        M = structure.spacetime
        if k < 0 or k > M.dimension:
            raise DegreeError(f"□ 不作用在 {k} 次上链上")
        self.structure = structure
        self.spacetime = M
        self.degree = k
        self.exact = exact
        self.matrix = structure.operator('box', k)
        self.interior = structure.interior_rows('box', k)
        self._inverses: Dict[Tuple, Dict[int, Dict[int, Any]]] = {}
        self.forward = self._plan(+1)
        self.backward = self._plan(-1)
        self.stencil = structure.stencil_radius('box', k)
        self.cone_radius = self.stencil + max(self.forward.spread, self.backward.spread)
        if not exact:
            self._float_rows = {r: {c: float(v) for c, v in row.items()} for r, row in self.matrix.items()}
        logger.info(f"🔧 {M.name}: □_{k} 求解器就绪，"
                    f"{len(self.forward.steps)} 步，锥半径 {self.cone_radius}，模式 {'exact' if exact else 'float'}")

    def key(self, idx: int, direction: int) -> int:
        if direction > 0:
            return self.spacetime.lower_key(self.degree, idx)
        return self.spacetime.upper_key(self.degree, idx)

    def _plan(self, direction: int) -> _Plan:
        M, k = self.spacetime, self.degree
        last = M.time.n_slices - 1
        rows_by_key: Dict[int, List[int]] = {}
        cells_by_key: Dict[int, List[int]] = {}
        collar = self.structure.collar(k)
        for idx in range(M.count(k)):
            if idx in collar:
                continue
            key = self.key(idx, direction)
            cells_by_key.setdefault(key, []).append(idx)
            if idx in self.interior:
                rows_by_key.setdefault(key, []).append(idx)
        plan = _Plan(direction)
        keys = range(1, last) if direction > 0 else range(last - 1, 0, -1)
        covered = set(keys)
        for key, rows in rows_by_key.items():
            if key not in covered:
                plan.unenforced.extend(rows)
        for n in keys:
            rows = rows_by_key.get(n, [])
            cols = cells_by_key.get(n + direction, [])
            for r in rows:
                for c in self.matrix.get(r, {}):
                    gap = (self.key(c, direction) - n) * direction
                    if gap > 1 or gap < -1:
                        raise SolverError(f"□_{k} 第 {r} 行跨越超过一个时间键", {'row': r, 'column': c})
            if len(rows) != len(cols):
                raise SolverError(f"时间键 {n} 处的块不是方阵: {len(rows)} 行 × {len(cols)} 列",
                                  {'key': n, 'rows': len(rows), 'cols': len(cols), 'direction': direction})
            inverse = self._block_inverse(n, rows, cols)
            plan.steps.append(_Step(n, rows, cols, inverse))
            for a, entries in inverse.items():
                for b in entries:
                    plan.spread = max(plan.spread, M.cell_distance(k, cols[a], k, rows[b]))
        return plan

    def _block_inverse(self, key: int, rows: List[int], cols: List[int]) -> Dict[int, Dict[int, Any]]:
        local = {c: b for b, c in enumerate(cols)}
        block = [[linalg.ZERO] * len(cols) for _ in rows]
        for a, r in enumerate(rows):
            for c, v in self.matrix.get(r, {}).items():
                if c in local:
                    block[a][local[c]] = v
        signature = tuple(tuple(r) for r in block)
        if signature not in self._inverses:
            if block and linalg.det(block) == linalg.ZERO:
                raise SolverError(f"时间键 {key} 处的块奇异", {'key': key, 'size': len(rows)})
            inv = linalg.inverse(block) if block else []
            self._inverses[signature] = {a: {b: v for b, v in enumerate(r) if v} for a, r in enumerate(inv)}
        return self._inverses[signature]

    # ------------------------------------------------------------ 推进

    def _march(self, f: Vector, plan: _Plan) -> Vector:
        rows_table = self.matrix if self.exact else self._float_rows
        zero = linalg.ZERO if self.exact else 0.0
        u: Dict[int, Any] = {}
        for step in plan.steps:
            rhs = []
            for r in step.rows:
                s = f.get(r, zero)
                for c, v in rows_table.get(r, {}).items():
                    x = u.get(c)
                    if x:
                        s -= v * x
                rhs.append(s)
            for a, entries in step.inverse.items():
                s = zero
                for b, v in entries.items():
                    if rhs[b]:
                        s += (v if self.exact else float(v)) * rhs[b]
                if s:
                    u[step.cols[a]] = s
        return u

    def _check_collar(self, f: Vector) -> None:
        collar = self.structure.collar(self.degree)
        hit = sorted(i for i, v in f.items() if v and i in collar)
        if hit:
            raise SupportError("相对 Green 算子要求源在空间端领子上为零", {'cell': hit[0]})

    def check_retarded_source(self, f: Vector) -> None:
        c = self.spacetime.time.collar_width
        for idx, v in f.items():
            if v and self.spacetime.lower_key(self.degree, idx) < c:
                raise SupportError("推迟 Green 算子要求源在过去领子上为零",
                                   {'cell': idx, 'key': self.spacetime.lower_key(self.degree, idx)})

    def check_advanced_source(self, f: Vector) -> None:
        t = self.spacetime.time
        for idx, v in f.items():
            if v and self.spacetime.upper_key(self.degree, idx) > t.n_slices - 1 - t.collar_width:
                raise SupportError("超前 Green 算子要求源在未来领子上为零",
                                   {'cell': idx, 'key': self.spacetime.upper_key(self.degree, idx)})

    def retarded_vector(self, f: Vector) -> Vector:
        self.check_retarded_source(f)
        self._check_collar(f)
        return self._march(f, self.forward)

    def advanced_vector(self, f: Vector) -> Vector:
        self.check_advanced_source(f)
        self._check_collar(f)
        return self._march(f, self.backward)

    def causal_vector(self, f: Vector) -> Vector:
        plus, minus = self.retarded_vector(f), self.advanced_vector(f)
        if not self.exact:
            out = dict(plus)
            for i, v in minus.items():
                out[i] = out.get(i, 0.0) - v
            return out
        return linalg.vec_sub(plus, minus)

    def _as_cochain(self, values: Vector) -> Cochain:
        if not self.exact:
            raise SolverError("float 模式的结果不能包装为精确上链")
        support = SupportClass.SC if self.structure.relative else SupportClass.FREE
        return Cochain(self.spacetime, self.degree, values, support)

    def _check_input(self, f: Cochain) -> None:
        if f.home is not self.spacetime or f.degree != self.degree:
            raise ComplexMismatchError(f"源不是 {self.spacetime.name} 上的 {self.degree} 次上链")

    def retarded(self, f: Cochain) -> Cochain:
        self._check_input(f)
        return self._as_cochain(self.retarded_vector(f.values))

    def advanced(self, f: Cochain) -> Cochain:
        self._check_input(f)
        return self._as_cochain(self.advanced_vector(f.values))

    def causal(self, f: Cochain) -> Cochain:
        self._check_input(f)
        return self._as_cochain(self.causal_vector(f.values))

    # ------------------------------------------------------------ 残差与因果锥

    def residual(self, u: Vector, f: Vector) -> Vector:
        """(□u − f) 在内部行上的分量"""
        out: Dict[int, Any] = {}
        box_u = linalg.apply(self.matrix, u) if self.exact else self._apply_float(u)
        for r in self.interior:
            value = box_u.get(r, 0) - f.get(r, 0)
            if value:
                out[r] = value
        return out

    def _apply_float(self, u: Vector) -> Dict[int, float]:
        out = {}
        for r, row in self._float_rows.items():
            s = sum(v * u[c] for c, v in row.items() if c in u)
            if s:
                out[r] = s
        return out

    def cone_violations(self, source: Vector, solution: Vector, direction: int) -> List[Dict[str, int]]:
        """解的每个支撑胞腔都必须落在某个源胞腔的离散因果锥内"""
        M, k = self.spacetime, self.degree
        sources = [(s, self.key(s, direction)) for s in source]
        out = []
        for c in solution:
            key_c = self.key(c, direction)
            inside = False
            for s, key_s in sources:
                gap = (key_c - key_s) * direction
                if gap >= 1 and M.cell_distance(k, c, k, s) <= self.cone_radius * gap:
                    inside = True
                    break
            if not inside:
                out.append({'cell': c, 'key': key_c})
        return out


def green_retarded(structure: LorentzStructure, f: Cochain) -> Cochain:
    return structure.solver(f.degree).retarded(f)


def green_advanced(structure: LorentzStructure, f: Cochain) -> Cochain:
    return structure.solver(f.degree).advanced(f)


def causal_propagator(structure: LorentzStructure, f: Cochain) -> Cochain:
    """G = G₊ − G₋，源必须在两端时间领子上都为零"""
    return structure.solver(f.degree).causal(f)


# ---------------------------------------------------------------- 验证

def band_cells(M: ProductSpacetime, k: int, lo: int, hi: int) -> List[int]:
    """下时间键 ≥ lo 且上时间键 ≤ hi 的 k-胞腔"""
    return [idx for idx in range(M.count(k)) if M.lower_key(k, idx) >= lo and M.upper_key(k, idx) <= hi]


def deep_cells(M: ProductSpacetime, k: int, margin: int) -> List[int]:
    t = M.time
    return band_cells(M, k, t.collar_width + margin, t.n_slices - 1 - t.collar_width - margin)


def observation_cells(M: ProductSpacetime, k: int, margin: int) -> List[int]:
    return band_cells(M, k, margin, M.time.n_slices - 1 - margin)


def _restrict(vec: Vector, cells) -> Vector:
    keep = set(cells)
    return {i: v for i, v in vec.items() if i in keep}


def verify_metric(structure: LorentzStructure, samples: int = 10, seed: int = 23) -> CheckResult:
    """质量矩阵非退化、符号正确，且 (δα, β)_M = (α, dβ)_M"""
    M = structure.spacetime
    failures: List[Dict[str, Any]] = []
    for k in range(M.dimension + 1):
        for idx, v in enumerate(structure.mass(k)):
            if v == linalg.ZERO or (v > linalg.ZERO) != (structure.signature(k, idx) > 0):
                failures.append({'degree': k, 'cell': idx, 'mass': linalg.fmt_q(v)})
                break
    gen = RandomCochainGenerator(seed)
    for k in range(1, M.dimension + 1):
        for _ in range(samples):
            alpha, beta = gen.cochain(M, k), gen.cochain(M, k - 1)
            lhs = structure.pair_vectors(k - 1, linalg.apply(structure.operator('delta', k), alpha.values), beta.values)
            rhs = structure.pair_vectors(k, alpha.values, linalg.apply(structure.operator('d', k - 1), beta.values))
            if lhs != rhs:
                failures.append({'degree': k, 'lhs': linalg.fmt_q(lhs), 'rhs': linalg.fmt_q(rhs)})
                break
    return check('metric_nondegeneracy', not failures, M.name,
                 {'dt': linalg.fmt_q(structure.metric.dt), 'scheme': structure.metric.scheme},
                 witness=failures[0] if failures else None)


def verify_green(structure: LorentzStructure, k: int, samples: int = 4, seed: int = 29,
                 margin: int = 2, kernel_depth: int = 0) -> List[CheckResult]:
    """Green 算子的全部精确性质

    kernel_depth > 0 时再给出 ker G 的秩证书，深度必须 ≥ 3；□ 的像为空时证书判为失败。
    """
    M = structure.spacetime
    solver = structure.solver(k)
    deep = deep_cells(M, k, margin)
    if not deep:
        raise SolverError(f"{M.name}: 时间窗口太短，没有深内部的 {k}-胞腔", {'margin': margin})
    gen = RandomCochainGenerator(seed + k)

    def _random_deep(degree: int, cells: List[int]) -> Vector:
        return gen.cochain(M, degree, SupportClass.FREE, cells=cells).values

    sources = [{deep[len(deep) // 2]: linalg.ONE}] + [_random_deep(k, deep) for _ in range(samples)]
    details = {'degree': k, 'sources': len(sources), 'cone_radius': solver.cone_radius}
    results: List[CheckResult] = []

    # □G±f = f 与因果锥
    bad_residual, bad_cone = None, None
    for s_idx, f in enumerate(sources):
        for direction, solve in ((1, solver.retarded_vector), (-1, solver.advanced_vector)):
            u = solve(f)
            res = solver.residual(u, f)
            if res and bad_residual is None:
                row = min(res)
                bad_residual = {'source': s_idx, 'direction': direction, 'row': row, 'value': linalg.fmt_q(res[row])}
            outside = solver.cone_violations(f, u, direction)
            if outside and bad_cone is None:
                bad_cone = {'source': s_idx, 'direction': direction, **outside[0]}
    results.append(check('green_box_inverse', bad_residual is None, M.name, details, witness=bad_residual))
    results.append(check('green_cone', bad_cone is None, M.name, details, witness=bad_cone))

    # G±□θ = θ
    bad_left = None
    for s_idx in range(samples):
        theta = _random_deep(k, deep)
        box_theta = linalg.apply(solver.matrix, theta)
        for direction, solve in ((1, solver.retarded_vector), (-1, solver.advanced_vector)):
            diff = linalg.vec_sub(solve(box_theta), theta)
            if diff and bad_left is None:
                bad_left = {'sample': s_idx, 'direction': direction, 'cell': min(diff)}
    results.append(check('green_left_inverse', bad_left is None, M.name, details, witness=bad_left))

    # (G₋α, β) = (α, G₊β)，(Gα, β) = −(α, Gβ)
    bad_adjoint = None
    for s_idx in range(samples):
        alpha, beta = _random_deep(k, deep), _random_deep(k, deep)
        lhs = structure.pair_vectors(k, solver.advanced_vector(alpha), beta)
        rhs = structure.pair_vectors(k, alpha, solver.retarded_vector(beta))
        skew_l = structure.pair_vectors(k, solver.causal_vector(alpha), beta)
        skew_r = structure.pair_vectors(k, alpha, solver.causal_vector(beta))
        if (lhs != rhs or skew_l != -skew_r) and bad_adjoint is None:
            bad_adjoint = {'sample': s_idx, 'advanced_retarded': [linalg.fmt_q(lhs), linalg.fmt_q(rhs)],
                           'causal': [linalg.fmt_q(skew_l), linalg.fmt_q(skew_r)]}
    results.append(check('green_adjoint', bad_adjoint is None, M.name, details, witness=bad_adjoint))

    # dG = Gd，δG = Gδ（只在观测窗口内比较）
    bad_commute = None
    compared = []
    for name, target in (('d', k + 1), ('delta', k - 1)):
        if target < 0 or target > M.dimension:
            continue
        compared.append(name)
        op = structure.operator(name, k)
        other = structure.solver(target)
        window = observation_cells(M, target, margin)
        for s_idx in range(samples):
            f = _random_deep(k, deep)
            lhs = _restrict(linalg.apply(op, solver.causal_vector(f)), window)
            rhs = _restrict(other.causal_vector(linalg.apply(op, f)), window)
            diff = linalg.vec_sub(lhs, rhs)
            if diff and bad_commute is None:
                bad_commute = {'operator': name, 'sample': s_idx, 'cell': min(diff)}
    results.append(check('green_commutes', bad_commute is None, M.name,
                         {**details, 'operators': compared}, witness=bad_commute))

    if kernel_depth > 0:
        results.append(_kernel_certificate(structure, k, margin, kernel_depth))
    logger.info(f"🧪 {M.name}: □_{k} Green 验证 {sum(r.passed for r in results)}/{len(results)} 通过")
    return results


def _kernel_certificate(structure: LorentzStructure, k: int, margin: int, depth: int) -> CheckResult:
    """dim ker(G|C_V) 与 dim(□C_W ∩ C_V) 相等，且后者确实被 G 消灭

    V 为下时间键在 [a, b] 的胞腔，W 为下键 ≥ a+1 且上键 ≤ b 的胞腔。
    深度小于 3 时 □C_W ∩ C_V 恒为零，秩相等不说明任何事，直接拒绝。
    """
    M = structure.spacetime
    solver = structure.solver(k)
    t = M.time
    a = t.collar_width + margin
    if depth < MIN_KERNEL_DEPTH:
        raise SolverError(f"秩证书的深度至少为 {MIN_KERNEL_DEPTH}: {depth}", {'depth': depth})
    b = a + depth - 1
    if b + 1 > t.n_slices - 1 - t.collar_width - margin:
        raise SolverError(f"{M.name}: 秩证书的深度 {depth} 超出时间窗口", {'depth': depth})
    V = [idx for idx in range(M.count(k)) if a <= M.lower_key(k, idx) <= b]
    v_set = set(V)
    W = band_cells(M, k, a + 1, b)
    n = M.count(k)
    images_of_units = [solver.causal_vector({v: linalg.ONE}) for v in V]
    kernel_dim = len(V) - linalg.rank(images_of_units, n)
    columns = solver.matrix.transpose()
    w_set = set(W)
    touched: Dict[int, Vector] = {}
    for w in W:
        for r, value in columns.get(w, {}).items():
            if r not in v_set:
                touched.setdefault(r, {})[w] = value
    x_basis = linalg.nullspace(list(touched.values()), n, W) if W else []
    images = [linalg.apply(solver.matrix, x) for x in x_basis]
    image_dim = linalg.rank(images, n)
    killed = all(not solver.causal_vector(img) for img in images)
    details = {'degree': k, 'V': len(V), 'W': len(w_set), 'kernel_dim': kernel_dim, 'box_image_dim': image_dim}
    passed = killed and kernel_dim == image_dim and image_dim > 0
    return check('green_kernel', passed, M.name, details,
                 witness=None if passed else {'killed': killed, **details})


def verify_green_float(structure: LorentzStructure, k: int, samples: int = 4, seed: int = 29,
                       margin: int = 2, tolerance: float = 1e-9) -> CheckResult:
    """浮点模式：只报告内部行上的最大残差"""
    M = structure.spacetime
    solver = structure.solver(k, exact=False)
    gen = RandomCochainGenerator(seed + k)
    deep = deep_cells(M, k, margin)
    worst = 0.0
    for _ in range(samples):
        f = {i: float(v) for i, v in gen.cochain(M, k, SupportClass.FREE, cells=deep).values.items()}
        for solve in (solver.retarded_vector, solver.advanced_vector):
            res = solver.residual(solve(f), f)
            worst = max([worst] + [abs(v) for v in res.values()])
    return check('green_float_residual', worst <= tolerance, M.name,
                 {'degree': k, 'max_residual': f"{worst:.3e}", 'tolerance': tolerance})
