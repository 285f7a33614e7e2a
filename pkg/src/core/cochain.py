"""
上链模块：四种支撑类上的有理系数上链、上边缘、杯积、积分与配对
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Tuple

from src.core import linalg
from src.core.errors import ComplexMismatchError, DegreeError, SupportError
from src.core.linalg import Vector
from src.core.mesh import Complex


class SupportClass(str, Enum):
    """支撑类：TC 在时间领子上为零，SC 在 Time × 空间端上为零，Compact 两者都要求"""
    FREE = 'Free'
    TC = 'TC'
    SC = 'SC'
    COMPACT = 'Compact'

    @property
    def temporal(self) -> bool:
        return self in (SupportClass.TC, SupportClass.COMPACT)

    @property
    def spatial(self) -> bool:
        return self in (SupportClass.SC, SupportClass.COMPACT)

    @classmethod
    def from_flags(cls, temporal: bool, spatial: bool) -> 'SupportClass':
        if temporal and spatial:
            return cls.COMPACT
        if temporal:
            return cls.TC
        if spatial:
            return cls.SC
        return cls.FREE

    @classmethod
    def parse(cls, text: str) -> 'SupportClass':
        for member in cls:
            if member.value.lower() == str(text).strip().lower():
                return member
        raise ValueError(f"未知的支撑类: {text!r}")

    def meet(self, other: 'SupportClass') -> 'SupportClass':
        """两个消失条件同时成立（杯积的支撑）"""
        return SupportClass.from_flags(self.temporal or other.temporal, self.spatial or other.spatial)

    def join(self, other: 'SupportClass') -> 'SupportClass':
        """和的支撑：只保留两者共有的消失条件"""
        return SupportClass.from_flags(self.temporal and other.temporal, self.spatial and other.spatial)


def excluded_cells(home: Complex, degree: int, support: SupportClass):
    return home.excluded(degree, temporal=support.temporal, spatial=support.spatial)


def allowed_cells(home: Complex, degree: int, support: SupportClass) -> List[int]:
    banned = excluded_cells(home, degree, support)
    return [i for i in range(home.count(degree)) if i not in banned]


@dataclass(frozen=True, eq=False)
class Cochain:
    """复形 home 上的 degree 次上链，values 只存非零系数；degree = −1 是零群"""
    home: Complex
    degree: int
    values: Dict[int, Any] = field(default_factory=dict)
    support: SupportClass = SupportClass.FREE

    def __post_init__(self):
        if self.degree < -1 or self.degree > self.home.dimension:
            raise DegreeError(f"上链次数 {self.degree} 超出 [-1, {self.home.dimension}]")
        size = self.home.count(self.degree)
        cleaned = {}
        for i, v in self.values.items():
            if not 0 <= i < size:
                raise DegreeError(f"胞腔下标 {i} 超出 {self.degree} 次胞腔数 {size}")
            if v:
                cleaned[i] = linalg.to_q(v)
        object.__setattr__(self, 'values', cleaned)
        banned = excluded_cells(self.home, self.degree, self.support)
        for i in cleaned:
            if i in banned:
                raise SupportError(
                    f"{self.support.value} 上链在被排除的胞腔 {i} 上非零",
                    {'degree': self.degree, 'cell': i, 'value': linalg.fmt_q(cleaned[i])})

    def __getitem__(self, idx: int) -> Any:
        return self.values.get(idx, linalg.ZERO)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.home is other.home and self.degree == other.degree and self.values == other.values

    __hash__ = None

    def _check_same(self, other: 'Cochain') -> None:
        if self.home is not other.home:
            raise ComplexMismatchError(f"上链不在同一个复形上: {self.home.name} vs {other.home.name}")
        if self.degree != other.degree:
            raise DegreeError(f"上链次数不一致: {self.degree} vs {other.degree}")

    def __add__(self, other: 'Cochain') -> 'Cochain':
        self._check_same(other)
        return Cochain(self.home, self.degree, linalg.vec_add(self.values, other.values),
                       self.support.join(other.support))

    def __sub__(self, other: 'Cochain') -> 'Cochain':
        self._check_same(other)
        return Cochain(self.home, self.degree, linalg.vec_sub(self.values, other.values),
                       self.support.join(other.support))

    def __neg__(self) -> 'Cochain':
        return self.scaled(-1)

    def scaled(self, factor: Any) -> 'Cochain':
        return Cochain(self.home, self.degree, linalg.vec_scale(self.values, linalg.to_q(factor)), self.support)

    def with_support(self, support: SupportClass) -> 'Cochain':
        return Cochain(self.home, self.degree, self.values, support)

    def is_zero(self) -> bool:
        return not self.values

    def to_witness(self) -> Dict[str, Any]:
        return {'degree': self.degree, 'support': self.support.value,
                'values': {str(i): linalg.fmt_q(v) for i, v in sorted(self.values.items())}}


def zero(home: Complex, degree: int, support: SupportClass = SupportClass.FREE) -> Cochain:
    return Cochain(home, degree, {}, support)


def indicator(home: Complex, degree: int, idx: int, support: SupportClass = SupportClass.FREE) -> Cochain:
    return Cochain(home, degree, {idx: linalg.ONE}, support)


def constant_unit(home: Complex) -> Cochain:
    """常值 1 的 0-上链（杯积单位元）"""
    return Cochain(home, 0, {i: linalg.ONE for i in range(home.count(0))})


def from_vector(home: Complex, degree: int, values: Vector, support: SupportClass = SupportClass.FREE) -> Cochain:
    return Cochain(home, degree, values, support)


def coboundary(c: Cochain) -> Cochain:
    """(dc)(σ) = Σ_i (−1)^i c(∂_i σ)；支撑类不变"""
    if c.degree >= c.home.dimension:
        raise DegreeError(f"顶次上链没有上边缘: degree={c.degree}")
    if c.degree < 0:
        return Cochain(c.home, 0, {}, c.support)
    values = linalg.apply(c.home.coboundary_matrix(c.degree), c.values)
    return Cochain(c.home, c.degree + 1, values, c.support)


def cup(a: Cochain, b: Cochain) -> Cochain:
    """Alexander–Whitney 杯积"""
    if a.home is not b.home:
        raise ComplexMismatchError(f"杯积的两个上链不在同一复形上: {a.home.name} vs {b.home.name}")
    p, q = a.degree, b.degree
    k = p + q
    if k > a.home.dimension:
        raise DegreeError(f"杯积次数 {p}+{q} 超过维数 {a.home.dimension}")
    out: Vector = {}
    if a.values and b.values:
        for idx in range(a.home.count(k)):
            s = linalg.ZERO
            for sign, ai, bi in a.home.cup_terms(k, idx, p):
                x = a.values.get(ai)
                if x:
                    y = b.values.get(bi)
                    if y:
                        s += x * y if sign > 0 else -(x * y)
            if s:
                out[idx] = s
    return Cochain(a.home, k, out, a.support.meet(b.support))


def integrate(c: Cochain) -> Any:
    """沿基本类的带符号求和"""
    if c.degree != c.home.dimension:
        raise DegreeError(f"只能积分顶次上链: degree={c.degree}, dim={c.home.dimension}")
    total = linalg.ZERO
    for idx, sign in c.home.fundamental_class():
        v = c.values.get(idx)
        if v:
            total += v if sign > 0 else -v
    return total


def pairing_allowed(home: Complex, left: SupportClass, right: SupportClass) -> bool:
    """⟨·,·⟩ 良定义的支撑组合；Σ 上 SC 与 Compact 等价"""
    met = left.meet(right)
    if home.is_product:
        return met is SupportClass.COMPACT
    return met.spatial


def _check_pairing(a_home: Complex, b_home: Complex, p: int, q: int,
                   sa: SupportClass, sb: SupportClass) -> None:
    if a_home is not b_home:
        raise ComplexMismatchError(f"配对的两个上链不在同一复形上: {a_home.name} vs {b_home.name}")
    if p + q != a_home.dimension:
        raise DegreeError(f"配对次数 {p}+{q} 不等于维数 {a_home.dimension}")
    if not pairing_allowed(a_home, sa, sb):
        raise SupportError(f"支撑组合 ({sa.value}, {sb.value}) 不能保证配对有限")


def pairing(a: Cochain, b: Cochain) -> Any:
    """⟨a, b⟩ = ∫ a ∪ b"""
    _check_pairing(a.home, b.home, a.degree, b.degree, a.support, b.support)
    home, p = a.home, a.degree
    total = linalg.ZERO
    for top, orient in home.fundamental_class():
        for sign, ai, bi in home.cup_terms(home.dimension, top, p):
            x = a.values.get(ai)
            if x:
                y = b.values.get(bi)
                if y:
                    total += x * y if sign * orient > 0 else -(x * y)
    return total


def pairing_functional(fixed: Cochain, side: str = 'left') -> Vector:
    """固定一侧后的线性泛函 w，使得 ⟨fixed, x⟩ = w·x（side='left'）或 ⟨x, fixed⟩ = w·x"""
    home = fixed.home
    m = home.dimension
    p = fixed.degree if side == 'left' else m - fixed.degree
    out: Vector = {}
    for top, orient in home.fundamental_class():
        for sign, ai, bi in home.cup_terms(m, top, p):
            if side == 'left':
                x, target = fixed.values.get(ai), bi
            else:
                x, target = fixed.values.get(bi), ai
            if x:
                y = out.get(target, linalg.ZERO) + (x if sign * orient > 0 else -x)
                if y:
                    out[target] = y
                else:
                    out.pop(target, None)
    return out


def decompose_types(c: Cochain) -> Tuple[Cochain, Cochain]:
    """乘积上链拆成 type-1 与 type-2 部分"""
    if not c.home.is_product:
        raise ComplexMismatchError(f"{c.home.name} 不是乘积时空，无法按类型分解")
    split = c.home.type1_count(c.degree)
    first = {i: v for i, v in c.values.items() if i < split}
    second = {i: v for i, v in c.values.items() if i >= split}
    return Cochain(c.home, c.degree, first, c.support), Cochain(c.home, c.degree, second, c.support)


def support_project(c: Cochain, support: SupportClass) -> Cochain:
    banned = excluded_cells(c.home, c.degree, support)
    return Cochain(c.home, c.degree, {i: v for i, v in c.values.items() if i not in banned}, support)


# ---------------------------------------------------------------- 文本格式

def dump_cochain(c: Cochain) -> str:
    lines = [f"# cochain {c.home.name} degree {c.degree} support {c.support.value}"]
    for i, v in sorted(c.values.items()):
        lines.append(f"{i} {linalg.fmt_q(v)}")
    return "\n".join(lines) + "\n"


def load_cochain(text: str, home: Complex) -> Cochain:
    header, *body = [line for line in text.splitlines() if line.strip()]
    parts = header.split()
    if len(parts) != 7 or parts[:2] != ['#', 'cochain'] or parts[3] != 'degree' or parts[5] != 'support':
        raise ValueError(f"上链文件头格式不正确: {header!r}")
    if parts[2] != home.name:
        raise ComplexMismatchError(f"上链属于 {parts[2]}，而不是 {home.name}")
    values = {}
    for line in body:
        idx, value = line.split()
        values[int(idx)] = linalg.to_q(value)
    return Cochain(home, int(parts[4]), values, SupportClass.parse(parts[6]))


def cochains_from_vectors(home: Complex, degree: int, vectors: Iterable[Vector],
                          support: SupportClass = SupportClass.FREE) -> List[Cochain]:
    return [Cochain(home, degree, v, support) for v in vectors]
