"""
上同调模块：商空间基、Betti 数与上同调诱导映射
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, List, Optional, Sequence, Tuple

from sympy.polys.matrices.sdm import SDM

from src.core import linalg
from src.core.cochain import Cochain, SupportClass, allowed_cells
from src.core.errors import ChainMapError, InclusionError, NotACocycleError, SupportError
from src.core.linalg import Dense, Vector
from src.core.mesh import Complex
from src.utils.log import get_logger

logger = get_logger(__name__)

# 按 (复形, 次数, 支撑类) 缓存；长批次里只保留最近的条目
CACHE_SIZE = 256


@dataclass(eq=False)
class QuotientBasis:
    """ker / im 的商空间基

    representatives 是约化行最简形的代表元，pivots 是它们的主元列；
    boundary_rows 是分母（像空间）的行最简基。代表元在分母主元列上为零，
    因此 coordinates 只需一次约化加读主元。
    """
    home: Complex
    degree: int
    support: SupportClass
    ambient: int
    allowed: frozenset
    representatives: List[Vector]
    pivots: List[int]
    boundary_rows: List[Vector]
    boundary_pivots: List[int]
    label: str = ""

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def representative(self, i: int) -> Cochain:
        return Cochain(self.home, self.degree, self.representatives[i], self.support)

    def representative_cochains(self) -> List[Cochain]:
        return [self.representative(i) for i in range(self.dim)]

    def boundary_cochains(self) -> List[Cochain]:
        return [Cochain(self.home, self.degree, b, self.support) for b in self.boundary_rows]

    def normal_form(self, vec: Vector) -> Vector:
        return linalg.reduce_vector(vec, self.boundary_rows, self.boundary_pivots)

    def coordinates(self, c: Any) -> List[Any]:
        """上闭链的类坐标；不是上闭链时抛出 NotACocycleError"""
        vec = c.values if isinstance(c, Cochain) else c
        outside = [i for i in vec if i not in self.allowed]
        if outside:
            raise SupportError(f"{self.label or '商空间'}: 向量在不允许的胞腔 {outside[0]} 上非零",
                               {'cell': outside[0]})
        nf = self.normal_form(vec)
        coords = [nf.get(p, linalg.ZERO) for p in self.pivots]
        residual = linalg.vec_sub(nf, linalg.combine(self.representatives, coords))
        if residual:
            cell = min(residual)
            raise NotACocycleError(
                f"{self.label or '商空间'}: 输入不在核空间中",
                {'cell': cell, 'residual': linalg.fmt_q(residual[cell])})
        return coords

    def is_trivial(self, c: Any) -> bool:
        return not any(self.coordinates(c))

    def summary(self) -> str:
        return f"{self.label or 'H'}^{self.degree}_{self.support.value} dim={self.dim}"

    @classmethod
    def from_operators(cls, home: Complex, degree: int, support: SupportClass, ambient: int,
                       allowed: Sequence[int], constraints: Sequence[Vector],
                       generators: Sequence[Vector], label: str = "") -> 'QuotientBasis':
        """ker(constraints 在 allowed 列上) / span(generators)，并先验证 generators ⊆ ker"""
        allowed_set = frozenset(allowed)
        constraint_matrix = linalg.matrix_from_rows(list(constraints), ambient)
        for g_idx, g in enumerate(generators):
            stray = [i for i in g if i not in allowed_set]
            if stray:
                raise InclusionError(f"{label}: 第 {g_idx} 个生成元落在不允许的胞腔 {stray[0]} 上",
                                     {'generator': g_idx, 'cell': stray[0]})
            image = linalg.apply(constraint_matrix, g)
            if image:
                row = min(image)
                raise InclusionError(f"{label}: 第 {g_idx} 个生成元不在核空间中",
                                     {'generator': g_idx, 'row': row, 'value': linalg.fmt_q(image[row])})
        kernel = linalg.nullspace(constraints, ambient, sorted(allowed_set))
        boundary_rows, boundary_pivots = linalg.rref_rows(list(generators), ambient)
        reduced = linalg.reduce_rows(kernel, boundary_rows, boundary_pivots, ambient)
        reps, pivots = linalg.rref_rows(reduced, ambient)
        logger.debug(f"🧮 {label} 次数 {degree}: ker={len(kernel)}, im={len(boundary_rows)}, dim={len(reps)}")
        return cls(home, degree, support, ambient, allowed_set, reps, pivots,
                   boundary_rows, boundary_pivots, label)


def sdm_rows(matrix: SDM) -> List[Vector]:
    return [dict(matrix.get(i, {})) for i in range(matrix.shape[0])]


def coboundary_columns(X: Complex, k: int, cells: Sequence[int]) -> List[Vector]:
    """d e_j（j 为 k-胞腔）作为 (k+1)-上链的向量"""
    transposed = X.coboundary_matrix(k).transpose()
    return [dict(transposed.get(j, {})) for j in cells]


@lru_cache(maxsize=CACHE_SIZE)
def cohomology_basis(X: Complex, k: int, support: SupportClass) -> QuotientBasis:
    """H^k(X; support) 的基，带精确的坐标泛函"""
    if k < 0 or k > X.dimension:
        raise ValueError(f"次数 {k} 超出 [0, {X.dimension}]")
    allowed = allowed_cells(X, k, support)
    constraints = sdm_rows(X.coboundary_matrix(k)) if k < X.dimension else []
    generators = [g for g in coboundary_columns(X, k - 1, allowed_cells(X, k - 1, support)) if g] if k >= 1 else []
    return QuotientBasis.from_operators(X, k, support, X.count(k), allowed, constraints, generators,
                                        label=f"H({X.name})")


@lru_cache(maxsize=CACHE_SIZE)
def _restricted_rank(X: Complex, k: int, support: SupportClass) -> int:
    """d_k 限制在 support 允许的列上的秩"""
    if k < 0 or k >= X.dimension:
        return 0
    rows, _ = linalg.restrict_columns(sdm_rows(X.coboundary_matrix(k)), allowed_cells(X, k, support))
    return linalg.rank(rows, len(allowed_cells(X, k, support)))


def betti_profile(X: Complex, support: SupportClass) -> Tuple[int, ...]:
    """各次数的上同调维数（只用秩，不构造代表元）"""
    out = []
    for k in range(X.dimension + 1):
        free = len(allowed_cells(X, k, support))
        out.append(free - _restricted_rank(X, k, support) - _restricted_rank(X, k - 1, support))
    return tuple(out)


def alternating_cell_count(X: Complex, support: SupportClass) -> int:
    return sum((-1) ** k * len(allowed_cells(X, k, support)) for k in range(X.dimension + 1))


def euler_characteristic(profile: Sequence[int]) -> int:
    return sum((-1) ** k * b for k, b in enumerate(profile))


LinearMap = Callable[[Cochain], Cochain]


def induced_map(L: LinearMap, src: QuotientBasis, dst: QuotientBasis) -> Dense:
    """L 在上同调上的矩阵（列是 src 代表元的像坐标）

    先验证 L 把代表元送到上闭链、把上边缘送到上边缘，失败时抛出带证据的 ChainMapError。
    """
    columns = []
    for i in range(src.dim):
        image = L(src.representative(i))
        _check_target(image, dst)
        try:
            columns.append(dst.coordinates(image))
        except (NotACocycleError, SupportError) as exc:
            raise ChainMapError(f"代表元 {i} 的像不是 {dst.summary()} 中的上闭链",
                                {'representative': i, 'image': image.to_witness(), 'cause': exc.witness}) from exc
    for b_idx, b in enumerate(src.boundary_cochains()):
        image = L(b)
        _check_target(image, dst)
        try:
            coords = dst.coordinates(image)
        except (NotACocycleError, SupportError) as exc:
            raise ChainMapError(f"上边缘 {b_idx} 的像不是上闭链",
                                {'boundary': b_idx, 'image': image.to_witness(), 'cause': exc.witness}) from exc
        if any(coords):
            raise ChainMapError(f"上边缘 {b_idx} 的像不是上边缘",
                                {'boundary': b_idx, 'coordinates': [linalg.fmt_q(x) for x in coords]})
    return [[columns[j][i] for j in range(src.dim)] for i in range(dst.dim)]


def _check_target(image: Cochain, dst: QuotientBasis) -> None:
    if image.home is not dst.home or image.degree != dst.degree:
        raise ChainMapError(f"映射的像落在 {image.home.name} 的 {image.degree} 次上链，"
                            f"而目标是 {dst.home.name} 的 {dst.degree} 次")


def quotient_dims(A: SDM, B: SDM) -> int:
    """dim ker A − rank B，先验证 im B ⊆ ker A"""
    n = A.shape[1]
    if B.shape[0] != n:
        raise ValueError(f"矩阵形状不匹配: A {A.shape}, B {B.shape}")
    product = A.matmul(B) if A and B else {}
    if product:
        row = min(product)
        col = min(product[row])
        raise InclusionError("im B 不包含在 ker A 中",
                             {'column': col, 'row': row, 'value': linalg.fmt_q(product[row][col])})
    return (n - linalg.matrix_rank(A)) - linalg.matrix_rank(B)


def identity_map(c: Cochain) -> Cochain:
    return c


def zero_map_to(home: Complex, degree: int, support: SupportClass) -> LinearMap:
    def _zero(_: Cochain) -> Cochain:
        return Cochain(home, degree, {}, support)
    return _zero


def witness_vector(matrix: Dense) -> Optional[List[str]]:
    vec = linalg.kernel_witness(matrix)
    return None if vec is None else [linalg.fmt_q(x) for x in vec]
