"""
对偶模块：上同调配对矩阵与非退化性证书
"""
from typing import Any, Dict, List, Optional

from src.core import linalg
from src.core.cochain import SupportClass, pairing, pairing_allowed, pairing_functional
from src.core.cohomology import QuotientBasis, cohomology_basis, witness_vector
from src.core.errors import ComplexMismatchError, DegreeError, IdentityError, SupportError
from src.core.homotopy import TimeBump, extend_e, pullback_pi
from src.core.linalg import Dense, Vector
from src.core.mesh import Complex, ProductSpacetime
from src.core.report import CheckResult, check
from src.generators.random_cochains import RandomCochainGenerator
from src.utils.log import get_logger

logger = get_logger(__name__)


def _check_well_defined(fixed: QuotientBasis, other: QuotientBasis, side: str) -> List[Vector]:
    """fixed 的每个代表元与 other 的每个上边缘配对必须为零"""
    functionals = []
    for i in range(fixed.dim):
        w = pairing_functional(fixed.representative(i), side)
        for b_idx, b in enumerate(other.boundary_rows):
            value = linalg.vec_dot(w, b)
            if value:
                raise IdentityError(
                    f"配对不良定义: {fixed.summary()} 的代表元 {i} 与 {other.summary()} 的上边缘 {b_idx} 配对非零",
                    {'representative': i, 'boundary': b_idx, 'side': side, 'value': linalg.fmt_q(value)})
        functionals.append(w)
    return functionals


def pairing_matrix(A: QuotientBasis, B: QuotientBasis) -> Dense:
    """H_A^p × H_B^q 上的配对矩阵 [⟨α_i, β_j⟩]

    先在两侧验证与上边缘配对为零，保证结果与代表元的选取无关。
    """
    home = A.home
    if home is not B.home:
        raise ComplexMismatchError(f"配对的两个商空间不在同一复形上: {home.name} vs {B.home.name}")
    if A.degree + B.degree != home.dimension:
        raise DegreeError(f"配对次数 {A.degree}+{B.degree} 不等于维数 {home.dimension}")
    if not pairing_allowed(home, A.support, B.support):
        raise SupportError(f"支撑组合 ({A.support.value}, {B.support.value}) 不能保证配对有限")
    left = _check_well_defined(A, B, 'left')
    _check_well_defined(B, A, 'right')
    return [[linalg.vec_dot(left[i], B.representatives[j]) for j in range(B.dim)] for i in range(A.dim)]


def _nondegenerate(matrix: Dense, rows: int, cols: int) -> bool:
    if rows != cols:
        return False
    return rows == 0 or linalg.det(matrix) != linalg.ZERO


def _pairing_report(X: Complex, pairs, name: str) -> CheckResult:
    """pairs: [(次数 k, 左商空间, 右商空间)]，逐次数检查方阵且行列式非零"""
    matrices: Dict[str, Dense] = {}
    dims, dets = [], []
    passed, witness = True, None
    for k, A, B in pairs:
        dims.append([A.dim, B.dim])
        try:
            mat = pairing_matrix(A, B)
        except IdentityError as exc:
            passed, witness = False, witness or {'degree': k, **exc.to_dict()}
            dets.append(None)
            continue
        matrices[f'pairing_{k}'] = mat
        ok = _nondegenerate(mat, A.dim, B.dim)
        dets.append(linalg.fmt_q(linalg.det(mat)) if A.dim == B.dim else None)
        if not ok:
            passed = False
            witness = witness or {'degree': k, 'rows': A.dim, 'cols': B.dim, 'kernel': witness_vector(mat)}
    logger.info(f"🔍 {X.name}: {name} 维数 {dims}")
    return check(name, passed, X.name, {'dims': dims, 'determinants': dets}, matrices, witness)


def verify_classical_duality(X: Complex) -> CheckResult:
    """H_c^k(X) × H^{d−k}(X) → Q 对每个 k 非退化"""
    d = X.dimension
    pairs = [(k, cohomology_basis(X, k, SupportClass.COMPACT), cohomology_basis(X, d - k, SupportClass.FREE))
             for k in range(d + 1)]
    return _pairing_report(X, pairs, 'classical_duality')


def verify_sc_tc_duality(M: ProductSpacetime) -> CheckResult:
    """H_sc^k(M) × H_tc^{m−k}(M) → Q 对每个 k 非退化"""
    m = M.dimension
    pairs = [(k, cohomology_basis(M, k, SupportClass.SC), cohomology_basis(M, m - k, SupportClass.TC))
             for k in range(m + 1)]
    return _pairing_report(M, pairs, 'sc_tc_duality')


def verify_graded_symmetry(M: ProductSpacetime) -> CheckResult:
    """⟨β, α⟩ = (−1)^{k(m−k)} ⟨α, β⟩，α ∈ H_sc^k，β ∈ H_tc^{m−k}"""
    m = M.dimension
    mismatched: List[int] = []
    for k in range(m + 1):
        h_sc = cohomology_basis(M, k, SupportClass.SC)
        h_tc = cohomology_basis(M, m - k, SupportClass.TC)
        forward = pairing_matrix(h_sc, h_tc)
        backward = pairing_matrix(h_tc, h_sc)
        sign = linalg.ONE if (k * (m - k)) % 2 == 0 else -linalg.ONE
        expected = [[sign * forward[i][j] for i in range(h_sc.dim)] for j in range(h_tc.dim)]
        if backward != expected:
            mismatched.append(k)
    return check('graded_symmetry', not mismatched, M.name, {'mismatched_degrees': mismatched},
                 witness={'degree': mismatched[0]} if mismatched else None)


def _second_bump(M: ProductSpacetime, bump: TimeBump) -> Optional[TimeBump]:
    used = {n for n, _ in bump.weights}
    for n in M.time.interior_edges():
        if n not in used:
            return TimeBump.single(M.time, n)
    return None


def verify_compatibility_lemma(M: ProductSpacetime, bump: TimeBump, samples: int = 50,
                               seed: int = 17) -> CheckResult:
    """⟨π*φ, eψ⟩_M = ⟨φ, ψ⟩_Σ，φ 为 Σ 上紧支撑上闭链，ψ 为 Σ 上上闭链

    在上同调基的全部代表元对与随机闭上链对上检验，再换一个鼓包重复。
    """
    sigma = M.sigma
    d = sigma.dimension
    compact = [cohomology_basis(sigma, k, SupportClass.COMPACT) for k in range(d + 1)]
    free = [cohomology_basis(sigma, d - k, SupportClass.FREE) for k in range(d + 1)]
    other = _second_bump(M, bump)
    bumps = [bump] + ([other] if other is not None else [])
    failures: List[Dict[str, Any]] = []
    compared = 0

    def _compare(phi, psi, label: str) -> None:
        nonlocal compared
        expected = pairing(phi, psi)
        for b in bumps:
            compared += 1
            got = pairing(pullback_pi(M, phi), extend_e(M, psi, b))
            if got != expected:
                failures.append({'case': label, 'degree': phi.degree, 'bump': [n for n, _ in b.weights],
                                 'spacetime': linalg.fmt_q(got), 'sigma': linalg.fmt_q(expected)})

    for k in range(d + 1):
        for i in range(compact[k].dim):
            for j in range(free[k].dim):
                _compare(compact[k].representative(i), free[k].representative(j), f'basis({i},{j})')
    gen = RandomCochainGenerator(seed)
    for s in range(samples):
        k = s % (d + 1)
        _compare(gen.closed_cochain(compact[k]), gen.closed_cochain(free[k]), f'random{s}')
    logger.info(f"🧪 {M.name}: 相容性引理比较 {compared} 次，失败 {len(failures)}")
    return check('compatibility_lemma', not failures, M.name,
                 {'comparisons': compared, 'bumps': len(bumps), 'failures': len(failures)},
                 witness=failures[0] if failures else None)
