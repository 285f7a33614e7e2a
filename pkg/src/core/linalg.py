"""
精确有理数稀疏线性代数

向量用 {下标: QQ} 的稀疏字典表示，矩阵用 sympy 的 SDM（行字典的字典）。
所有消元都走 SDM.rref / SDM.nullspace，主元选择固定为最小列号优先。
"""
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import SDM

Vector = Dict[int, Any]
Dense = List[List[Any]]

ZERO = QQ(0)
ONE = QQ(1)


def to_q(value: Any) -> Any:
    """把 int / Fraction / "p/q" 字符串转换为 QQ 元素"""
    if isinstance(value, str):
        text = value.strip()
        if '/' in text:
            num, den = text.split('/', 1)
            return QQ(int(num), int(den))
        return QQ(int(text))
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, bool):
        raise TypeError('布尔值不是有理数')
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def fmt_q(value: Any) -> str:
    """QQ 元素格式化为 "p/q"（分母为 1 时只写 "p"）"""
    value = to_q(value)
    num, den = int(QQ.numer(value)), int(QQ.denom(value))
    return str(num) if den == 1 else f"{num}/{den}"


def fmt_dense(matrix: Dense) -> List[List[str]]:
    return [[fmt_q(x) for x in row] for row in matrix]


# ---------------------------------------------------------------- 向量运算

def clean(vec: Vector) -> Vector:
    return {i: v for i, v in vec.items() if v}


def vec_add(u: Vector, v: Vector, scale: Any = ONE) -> Vector:
    """返回 u + scale·v"""
    out = dict(u)
    if not scale:
        return out
    for i, x in v.items():
        y = out.get(i, ZERO) + scale * x
        if y:
            out[i] = y
        else:
            out.pop(i, None)
    return out


def vec_sub(u: Vector, v: Vector) -> Vector:
    return vec_add(u, v, -ONE)


def vec_scale(v: Vector, scale: Any) -> Vector:
    if not scale:
        return {}
    return {i: scale * x for i, x in v.items()}


def vec_dot(u: Vector, v: Vector) -> Any:
    if len(u) > len(v):
        u, v = v, u
    total = ZERO
    for i, x in u.items():
        y = v.get(i)
        if y:
            total += x * y
    return total


def unit(index: int, value: Any = ONE) -> Vector:
    return {index: value}


def combine(vectors: Sequence[Vector], coefficients: Sequence[Any]) -> Vector:
    out: Vector = {}
    for vec, c in zip(vectors, coefficients):
        if c:
            out = vec_add(out, vec, c)
    return out


# ---------------------------------------------------------------- 稀疏矩阵

def matrix_from_rows(rows: Sequence[Vector], ncols: int) -> SDM:
    data = {i: dict(row) for i, row in enumerate(rows) if row}
    return SDM(data, (len(rows), ncols), QQ)


def matrix_from_entries(entries: Iterable[Tuple[int, int, Any]], shape: Tuple[int, int]) -> SDM:
    """由 (行, 列, 值) 三元组累加构造 SDM，相同位置的值相加"""
    data: Dict[int, Dict[int, Any]] = {}
    for i, j, v in entries:
        bucket = data.setdefault(i, {})
        bucket[j] = bucket.get(j, ZERO) + v
    for i in list(data):
        data[i] = {j: v for j, v in data[i].items() if v}
        if not data[i]:
            del data[i]
    return SDM(data, shape, QQ)


def row(matrix: SDM, i: int) -> Vector:
    return dict(matrix.get(i, {}))


def apply(matrix: SDM, vec: Vector) -> Vector:
    """矩阵作用于列向量"""
    out: Vector = {}
    if not vec:
        return out
    for i, r in matrix.items():
        s = ZERO
        if len(r) <= len(vec):
            for j, a in r.items():
                x = vec.get(j)
                if x:
                    s += a * x
        else:
            for j, x in vec.items():
                a = r.get(j)
                if a:
                    s += a * x
        if s:
            out[i] = s
    return out


def apply_transpose(matrix: SDM, vec: Vector) -> Vector:
    """转置矩阵作用于列向量（vec 以行下标为键）"""
    out: Vector = {}
    for i, x in vec.items():
        r = matrix.get(i)
        if not r or not x:
            continue
        for j, a in r.items():
            y = out.get(j, ZERO) + a * x
            if y:
                out[j] = y
            else:
                out.pop(j, None)
    return out


def restrict_columns(rows: Sequence[Vector], columns: Sequence[int]) -> Tuple[List[Vector], Dict[int, int]]:
    """把行向量限制到给定列集合并重新编号"""
    local = {c: k for k, c in enumerate(columns)}
    restricted = []
    for r in rows:
        restricted.append({local[j]: v for j, v in r.items() if j in local})
    return restricted, local


def rref_rows(rows: Sequence[Vector], ncols: int) -> Tuple[List[Vector], List[int]]:
    """行最简形：返回非零行和主元列"""
    nonzero = [r for r in rows if r]
    if not nonzero:
        return [], []
    reduced, pivots = matrix_from_rows(nonzero, ncols).rref()
    out_rows = [dict(reduced[i]) for i in sorted(reduced)]
    return out_rows, list(pivots)


def rank(rows: Sequence[Vector], ncols: int) -> int:
    return len(rref_rows(rows, ncols)[1])


def matrix_rank(matrix: SDM) -> int:
    if not matrix:
        return 0
    return len(matrix.rref()[1])


def nullspace(rows: Sequence[Vector], ncols: int, columns: Optional[Sequence[int]] = None) -> List[Vector]:
    """约束行 rows 在给定列子空间上的零空间基，结果用全局列号表示

    不在 columns 中的列视为被强制为零。
    """
    if columns is None:
        columns = list(range(ncols))
    columns = sorted(columns)
    local_rows, _ = restrict_columns(rows, columns)
    local_rows = [r for r in local_rows if r]
    if not local_rows:
        return [{c: ONE} for c in columns]
    kernel, _ = matrix_from_rows(local_rows, len(columns)).nullspace()
    return [{columns[j]: v for j, v in kernel[i].items()} for i in sorted(kernel)]


def reduce_vector(vec: Vector, basis: Sequence[Vector], pivots: Sequence[int]) -> Vector:
    """用行最简基消去 vec 在主元列上的分量（单遍即可，因为基是约化的）"""
    out = dict(vec)
    for b, p in zip(basis, pivots):
        c = out.get(p)
        if c:
            out = vec_add(out, b, -c)
    return out


def reduce_rows(rows: Sequence[Vector], basis: Sequence[Vector], pivots: Sequence[int], ncols: int) -> List[Vector]:
    """批量约化 NF(Z) = Z − Z[:, P]·B，用稀疏矩阵乘法完成"""
    if not basis or not rows:
        return [dict(r) for r in rows]
    pivot_pos = {p: k for k, p in enumerate(pivots)}
    coeff = matrix_from_rows([{pivot_pos[j]: v for j, v in r.items() if j in pivot_pos} for r in rows], len(pivots))
    correction = coeff.matmul(matrix_from_rows(basis, ncols))
    out = []
    for i, r in enumerate(rows):
        out.append(vec_sub(r, dict(correction.get(i, {}))))
    return out


# ---------------------------------------------------------------- 稠密小矩阵

def dense_to_sdm(matrix: Dense, ncols: Optional[int] = None) -> SDM:
    nrows = len(matrix)
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    data = {}
    for i, r in enumerate(matrix):
        entries = {j: v for j, v in enumerate(r) if v}
        if entries:
            data[i] = entries
    return SDM(data, (nrows, ncols), QQ)


def dense_rank(matrix: Dense) -> int:
    if not matrix or not matrix[0]:
        return 0
    return matrix_rank(dense_to_sdm(matrix))


def det(matrix: Dense) -> Any:
    if not matrix:
        return ONE
    return dense_to_sdm(matrix).det()


def inverse(matrix: Dense) -> Dense:
    n = len(matrix)
    if n == 0:
        return []
    inv = dense_to_sdm(matrix).inv()
    return [[inv.get(i, {}).get(j, ZERO) for j in range(n)] for i in range(n)]


def mat_mul(a: Dense, b: Dense, inner: Optional[int] = None) -> Dense:
    rows = len(a)
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(inner)), ZERO) for j in range(cols)] for i in range(rows)]


def transpose(a: Dense, ncols: Optional[int] = None) -> Dense:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def identity(n: int) -> Dense:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def is_identity(a: Dense) -> bool:
    return a == identity(len(a)) and all(len(r) == len(a) for r in a)


def kernel_witness(matrix: Dense) -> Optional[List[Any]]:
    """奇异方阵的一个非零核向量（作为证据），满秩时返回 None"""
    if not matrix or not matrix[0]:
        return None
    ncols = len(matrix[0])
    kernel = nullspace([{j: v for j, v in enumerate(r) if v} for r in matrix], ncols)
    if not kernel:
        return None
    return [kernel[0].get(j, ZERO) for j in range(ncols)]
