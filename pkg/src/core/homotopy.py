"""
时间片映射与链同伦模块

π*、s*、i、e 以及链同伦 P（类空紧支撑）和 Q（类时紧支撑），
连同两条同构定理的精确验证。
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from src.core import linalg
from src.core.cochain import Cochain, SupportClass, coboundary
from src.core.cohomology import cohomology_basis, induced_map
from src.core.errors import BumpError, ChainMapError, ComplexMismatchError, DegreeError, SupportError
from src.core.mesh import ProductSpacetime, TimeAxis
from src.core.report import CheckResult, check
from src.generators.random_cochains import RandomCochainGenerator
from src.utils.log import get_logger

logger = get_logger(__name__)


def _parity(k: int) -> Any:
    return linalg.ONE if k % 2 == 0 else -linalg.ONE


@dataclass(frozen=True)
class TimeBump:
    """时间轴上的 1-上链 a：支撑避开时间领子，系数和为 1"""
    time: TimeAxis
    weights: Tuple[Tuple[int, Any], ...]

    def __post_init__(self):
        cleaned = tuple(sorted((int(n), linalg.to_q(v)) for n, v in self.weights if v))
        object.__setattr__(self, 'weights', cleaned)
        for n, _ in cleaned:
            if not 0 <= n < self.time.n_edges:
                raise BumpError(f"鼓包边 {n} 超出时间轴", {'edge': n})
            if self.time.collar_edge(n):
                raise BumpError(f"鼓包边 {n} 落在时间领子上", {'edge': n})
        total = sum((v for _, v in cleaned), linalg.ZERO)
        if total != linalg.ONE:
            raise BumpError(f"鼓包系数和为 {linalg.fmt_q(total)}，应为 1")

    @classmethod
    def single(cls, time: TimeAxis, edge: int) -> 'TimeBump':
        return cls(time, ((edge, linalg.ONE),))

    @classmethod
    def default(cls, time: TimeAxis) -> 'TimeBump':
        """紧接基准时间片之后的那条边"""
        return cls.single(time, time.base_slice)

    def value(self, n: int) -> Any:
        for m, v in self.weights:
            if m == n:
                return v
        return linalg.ZERO

    def prefix(self) -> List[Any]:
        """A_n = Σ_{m<n} a_m，n = 0..N−1"""
        out, acc = [], linalg.ZERO
        table = dict(self.weights)
        for n in range(self.time.n_slices):
            out.append(acc)
            acc += table.get(n, linalg.ZERO)
        return out


def _check_home(M: ProductSpacetime, c: Cochain, on_sigma: bool) -> None:
    home = M.sigma if on_sigma else M
    if c.home is not home:
        raise ComplexMismatchError(f"上链属于 {c.home.name}，期望 {home.name}")


def _type2_columns(M: ProductSpacetime, c: Cochain) -> Dict[int, Dict[int, Any]]:
    """type-2 系数按 Σ 胞腔分组：σ → {时间边 n: 值}"""
    split = M.type1_count(c.degree)
    grouped: Dict[int, Dict[int, Any]] = {}
    for idx, v in c.values.items():
        if idx >= split:
            _, n, j = M.cell(c.degree, idx)
            grouped.setdefault(j, {})[n] = v
    return grouped


def pullback_pi(M: ProductSpacetime, phi: Cochain) -> Cochain:
    """π*φ：在每个时间片上复制 φ（type-1）"""
    _check_home(M, phi, on_sigma=True)
    k = phi.degree
    values = {M.index(k, 1, n, j): v for n in range(M.time.n_slices) for j, v in phi.values.items()}
    support = SupportClass.SC if phi.support.spatial else SupportClass.FREE
    return Cochain(M, k, values, support)


def restrict_s(M: ProductSpacetime, c: Cochain, base_slice: Optional[int] = None) -> Cochain:
    """s*c：基准时间片上的 type-1 系数，type-2 部分丢弃"""
    _check_home(M, c, on_sigma=False)
    n0 = M.time.base_slice if base_slice is None else base_slice
    k = c.degree
    if k > M.sigma.dimension:
        raise DegreeError(f"Σ 上没有 {k} 次上链")
    values = {}
    for idx, v in c.values.items():
        kind, n, j = M.cell(k, idx)
        if kind == 1 and n == n0:
            values[j] = v
    support = SupportClass.COMPACT if c.support.spatial else SupportClass.FREE
    return Cochain(M.sigma, k, values, support)


def homotopy_P(M: ProductSpacetime, c: Cochain) -> Cochain:
    """P_k = (−1)^{k+1} · 从基准时间片起的带符号前缀和，作用于 type-2 部分；k = 0 时为零映射"""
    _check_home(M, c, on_sigma=False)
    if not c.support.spatial:
        raise SupportError(f"P 只作用于 SC 上链，收到 {c.support.value}")
    k = c.degree
    if k == 0:
        return Cochain(M, -1, {}, SupportClass.SC)
    n0, N = M.time.base_slice, M.time.n_slices
    sign = _parity(k + 1)
    values = {}
    for j, column in _type2_columns(M, c).items():
        acc = linalg.ZERO
        for n in range(n0 + 1, N):
            acc += column.get(n - 1, linalg.ZERO)
            if acc:
                values[M.index(k - 1, 1, n, j)] = sign * acc
        acc = linalg.ZERO
        for n in range(n0 - 1, -1, -1):
            acc += column.get(n, linalg.ZERO)
            if acc:
                values[M.index(k - 1, 1, n, j)] = -sign * acc
    return Cochain(M, k - 1, values, SupportClass.SC)


def fiber_integrate_i(M: ProductSpacetime, c: Cochain) -> Cochain:
    """i_k = (−1)^{m+k} · 每个 Σ 胞腔上 type-2 系数对全部时间边求和；k = 0 时为零映射"""
    _check_home(M, c, on_sigma=False)
    if not c.support.temporal:
        raise SupportError(f"i 只作用于 TC 上链，收到 {c.support.value}")
    k = c.degree
    support = SupportClass.COMPACT if c.support.spatial else SupportClass.FREE
    if k == 0:
        return Cochain(M.sigma, -1, {}, support)
    sign = _parity(M.dimension + k)
    values = {}
    for j, column in _type2_columns(M, c).items():
        total = sum(column.values(), linalg.ZERO)
        if total:
            values[j] = sign * total
    return Cochain(M.sigma, k - 1, values, support)


def extend_e(M: ProductSpacetime, psi: Cochain, bump: TimeBump) -> Cochain:
    """e_q(ψ) = (−1)^{m+q} a_n ψ(σ) 放在 (时间边 n, σ) 上

    符号与 i 的 (−1)^{m+k} 成对出现，保证 ie = id，并使 e 与 d 交换。
    代价是 m + q 为奇数时 e 带一个负号：例如 1+1 维时空里 e(1) = −a，
    而不是鼓包 a 本身。H_tc 的同构不受影响，只是生成元差一个符号。
    """
    _check_home(M, psi, on_sigma=True)
    if bump.time != M.time:
        raise BumpError("鼓包与时空的时间轴不一致")
    q = psi.degree + 1
    sign = _parity(M.dimension + q)
    values = {}
    for n, a in bump.weights:
        for j, v in psi.values.items():
            values[M.index(q, 2, n, j)] = sign * a * v
    support = SupportClass.COMPACT if psi.support.spatial else SupportClass.TC
    return Cochain(M, q, values, support)


def homotopy_Q(M: ProductSpacetime, c: Cochain, bump: TimeBump) -> Cochain:
    """Q_k = (−1)^{k+1} · [T_n(b) − (Σb)·A_n]，T_n、A_n 为从过去端起的前缀和"""
    _check_home(M, c, on_sigma=False)
    if not c.support.temporal:
        raise SupportError(f"Q 只作用于 TC 上链，收到 {c.support.value}")
    k = c.degree
    if k == 0:
        return Cochain(M, -1, {}, SupportClass.from_flags(True, c.support.spatial))
    sign = _parity(k + 1)
    bump_prefix = bump.prefix()
    values = {}
    for j, column in _type2_columns(M, c).items():
        total = sum(column.values(), linalg.ZERO)
        acc = linalg.ZERO
        for n in range(M.time.n_slices):
            v = acc - total * bump_prefix[n]
            if v:
                values[M.index(k - 1, 1, n, j)] = sign * v
            acc += column.get(n, linalg.ZERO)
    support = SupportClass.from_flags(True, c.support.spatial)
    return Cochain(M, k - 1, values, support)


# ---------------------------------------------------------------- 复合映射

def pi_s(M: ProductSpacetime, c: Cochain) -> Cochain:
    if c.degree > M.sigma.dimension:
        return Cochain(M, c.degree, {}, SupportClass.SC)
    return pullback_pi(M, restrict_s(M, c))


def e_i(M: ProductSpacetime, c: Cochain, bump: TimeBump) -> Cochain:
    return extend_e(M, fiber_integrate_i(M, c), bump)


def _d_or_zero(c: Cochain) -> Optional[Cochain]:
    return coboundary(c) if c.degree < c.home.dimension else None


def p_defect(M: ProductSpacetime, c: Cochain) -> Cochain:
    """dP − Pd − (−1)^k(π*s* − id)，恒为零"""
    k = c.degree
    lhs = coboundary(homotopy_P(M, c))
    dc = _d_or_zero(c)
    if dc is not None:
        lhs = lhs - homotopy_P(M, dc)
    rhs = (pi_s(M, c) - c).scaled(_parity(k))
    return lhs - rhs


def q_defect(M: ProductSpacetime, c: Cochain, bump: TimeBump) -> Cochain:
    """dQ − Qd − (−1)^k(ei − id)，恒为零"""
    k = c.degree
    lhs = coboundary(homotopy_Q(M, c, bump))
    dc = _d_or_zero(c)
    if dc is not None:
        lhs = lhs - homotopy_Q(M, dc, bump)
    rhs = (e_i(M, c, bump) - c).scaled(_parity(k))
    return lhs - rhs


# ---------------------------------------------------------------- 验证

def verify_p_identity(M: ProductSpacetime, samples: int = 100, seed: int = 7) -> CheckResult:
    gen = RandomCochainGenerator(seed)
    failures, witness = 0, None
    for k in range(M.dimension + 1):
        for _ in range(samples):
            c = gen.cochain(M, k, SupportClass.SC)
            defect = p_defect(M, c)
            if not defect.is_zero():
                failures += 1
                witness = witness or {'degree': k, 'input': c.to_witness(), 'defect': defect.to_witness()}
    logger.info(f"🧪 {M.name}: P 恒等式 {samples}×{M.dimension + 1} 个样本，失败 {failures}")
    return check('homotopy_P_identity', failures == 0, M.name,
                 {'samples_per_degree': samples, 'failures': failures}, witness=witness)


def verify_q_identity(M: ProductSpacetime, bump: TimeBump, samples: int = 100, seed: int = 11) -> CheckResult:
    gen = RandomCochainGenerator(seed)
    failures, witness = 0, None
    for k in range(M.dimension + 1):
        for _ in range(samples):
            c = gen.cochain(M, k, SupportClass.TC)
            defect = q_defect(M, c, bump)
            if not defect.is_zero():
                failures += 1
                witness = witness or {'degree': k, 'input': c.to_witness(), 'defect': defect.to_witness()}
    logger.info(f"🧪 {M.name}: Q 恒等式 {samples}×{M.dimension + 1} 个样本，失败 {failures}")
    return check('homotopy_Q_identity', failures == 0, M.name,
                 {'samples_per_degree': samples, 'failures': failures}, witness=witness)


def verify_slice_maps(M: ProductSpacetime, bump: TimeBump, samples: int = 20, seed: int = 3) -> CheckResult:
    """s*π* = id、ie = id，以及 π*、s*、i、e 与 d 交换"""
    gen = RandomCochainGenerator(seed)
    sigma = M.sigma
    failures: List[Dict[str, Any]] = []
    for _ in range(samples):
        for k in range(sigma.dimension + 1):
            phi = gen.cochain(sigma, k, SupportClass.COMPACT)
            if restrict_s(M, pullback_pi(M, phi)) != phi:
                failures.append({'identity': 's*pi*=id', 'degree': k})
            if fiber_integrate_i(M, extend_e(M, phi, bump)) != phi:
                failures.append({'identity': 'ie=id', 'degree': k})
            if k < sigma.dimension:
                if coboundary(pullback_pi(M, phi)) != pullback_pi(M, coboundary(phi)):
                    failures.append({'identity': 'd pi* = pi* d', 'degree': k})
                if coboundary(extend_e(M, phi, bump)) != extend_e(M, coboundary(phi), bump):
                    failures.append({'identity': 'd e = e d', 'degree': k})
        for k in range(M.dimension):
            c = gen.cochain(M, k, SupportClass.SC)
            if k + 1 <= sigma.dimension and restrict_s(M, coboundary(c)) != coboundary(restrict_s(M, c)):
                failures.append({'identity': 'd s* = s* d', 'degree': k})
            t = gen.cochain(M, k, SupportClass.TC)
            if k >= 1 and fiber_integrate_i(M, coboundary(t)) != coboundary(fiber_integrate_i(M, t)):
                failures.append({'identity': 'd i = i d', 'degree': k})
    return check('slice_maps', not failures, M.name, {'samples': samples, 'failures': len(failures)},
                 witness=failures[0] if failures else None)


def _mutually_inverse(forward: List[List[Any]], backward: List[List[Any]], n_src: int, n_dst: int) -> bool:
    if n_src != n_dst:
        return False
    return (linalg.is_identity(linalg.mat_mul(backward, forward, n_dst) if n_src else [])
            and linalg.is_identity(linalg.mat_mul(forward, backward, n_src) if n_src else []))


def verify_sc_isomorphism(M: ProductSpacetime) -> CheckResult:
    """H_sc(M) ≅ H_c(Σ)：π* 与 s* 的诱导矩阵互逆"""
    sigma = M.sigma
    sc_dims, c_dims = [], []
    matrices: Dict[str, Any] = {}
    passed, witness = True, None
    for k in range(M.dimension + 1):
        h_sc = cohomology_basis(M, k, SupportClass.SC)
        sc_dims.append(h_sc.dim)
        if k > sigma.dimension:
            c_dims.append(0)
            if h_sc.dim:
                passed, witness = False, witness or {'degree': k, 'reason': 'Σ 没有该次数但 H_sc 非零'}
            continue
        h_c = cohomology_basis(sigma, k, SupportClass.COMPACT)
        c_dims.append(h_c.dim)
        try:
            pi_mat = induced_map(lambda phi: pullback_pi(M, phi), h_c, h_sc)
            s_mat = induced_map(lambda c: restrict_s(M, c), h_sc, h_c)
        except ChainMapError as exc:
            passed, witness = False, witness or {'degree': k, **exc.to_dict()}
            continue
        matrices[f'pi_{k}'], matrices[f's_{k}'] = pi_mat, s_mat
        if not _mutually_inverse(pi_mat, s_mat, h_c.dim, h_sc.dim):
            passed, witness = False, witness or {'degree': k, 'reason': '诱导矩阵不互逆'}
    logger.info(f"🔍 {M.name}: H_sc = {tuple(sc_dims)}, H_c(Σ) = {tuple(c_dims)}")
    return check('sc_isomorphism', passed, M.name,
                 {'sc_dims': sc_dims, 'sigma_compact_dims': c_dims}, matrices, witness)


def verify_tc_isomorphism(M: ProductSpacetime, bump: TimeBump) -> CheckResult:
    """H_tc^k(M) ≅ H^{k−1}(Σ)：i 与 e 的诱导矩阵互逆"""
    sigma = M.sigma
    tc_dims, free_dims = [], []
    matrices: Dict[str, Any] = {}
    passed, witness = True, None
    for k in range(M.dimension + 1):
        h_tc = cohomology_basis(M, k, SupportClass.TC)
        tc_dims.append(h_tc.dim)
        if k == 0:
            free_dims.append(0)
            if h_tc.dim:
                passed, witness = False, witness or {'degree': 0, 'reason': 'H_tc^0 应为零'}
            continue
        h_free = cohomology_basis(sigma, k - 1, SupportClass.FREE)
        free_dims.append(h_free.dim)
        try:
            i_mat = induced_map(lambda c: fiber_integrate_i(M, c), h_tc, h_free)
            e_mat = induced_map(lambda psi: extend_e(M, psi, bump), h_free, h_tc)
        except ChainMapError as exc:
            passed, witness = False, witness or {'degree': k, **exc.to_dict()}
            continue
        matrices[f'i_{k}'], matrices[f'e_{k}'] = i_mat, e_mat
        if not _mutually_inverse(e_mat, i_mat, h_free.dim, h_tc.dim):
            passed, witness = False, witness or {'degree': k, 'reason': '诱导矩阵不互逆'}
    logger.info(f"🔍 {M.name}: H_tc = {tuple(tc_dims)}, H(Σ) 平移 = {tuple(free_dims)}")
    return check('tc_isomorphism', passed, M.name,
                 {'tc_dims': tc_dims, 'sigma_free_dims_shifted': free_dims}, matrices, witness)


def verify_base_slice_independence(M: ProductSpacetime) -> CheckResult:
    """对每个可用基准时间片重算 s* 的诱导矩阵并比较"""
    sigma, t = M.sigma, M.time
    slices = list(range(t.collar_width, t.n_slices - t.collar_width))
    differing: List[Dict[str, int]] = []
    for k in range(sigma.dimension + 1):
        h_sc = cohomology_basis(M, k, SupportClass.SC)
        h_c = cohomology_basis(sigma, k, SupportClass.COMPACT)
        reference = None
        for n0 in slices:
            mat = induced_map(lambda c, n0=n0: restrict_s(M, c, n0), h_sc, h_c)
            if reference is None:
                reference = mat
            elif mat != reference:
                differing.append({'degree': k, 'base_slice': n0})
    return check('base_slice_independence', not differing, M.name,
                 {'base_slices': slices, 'differing': len(differing)},
                 witness=differing[0] if differing else None)
