"""
随机上链生成器
"""
import random
from typing import List, Optional

from src.core import linalg
from src.core.cochain import Cochain, SupportClass, allowed_cells, coboundary
from src.core.mesh import Complex


class RandomCochainGenerator:
    """带种子的随机上链生成器 - 用于恒等式验证"""

    def __init__(self, seed: int = 20240601, density: float = 0.35, span: int = 3):
        self.rng = random.Random(seed)
        self.density = density
        self.span = span
        self.counter = 0

    def _coefficient(self) -> int:
        value = 0
        while value == 0:
            value = self.rng.randint(-self.span, self.span)
        return value

    def cochain(self, home: Complex, degree: int, support: SupportClass = SupportClass.FREE,
                cells: Optional[List[int]] = None) -> Cochain:
        """在允许的胞腔上随机取小整数系数（至少一个非零）"""
        self.counter += 1
        pool = allowed_cells(home, degree, support) if cells is None else list(cells)
        if not pool:
            return Cochain(home, degree, {}, support)
        values = {i: linalg.to_q(self._coefficient()) for i in pool if self.rng.random() < self.density}
        if not values:
            values[self.rng.choice(pool)] = linalg.to_q(self._coefficient())
        return Cochain(home, degree, values, support)

    def coboundary_sample(self, home: Complex, degree: int, support: SupportClass) -> Cochain:
        """随机 (degree−1)-上链的上边缘"""
        if degree == 0:
            return Cochain(home, 0, {}, support)
        return coboundary(self.cochain(home, degree - 1, support))

    def closed_cochain(self, basis, with_boundary: bool = True) -> Cochain:
        """商空间代表元的随机组合加上随机上边缘"""
        self.counter += 1
        coefficients = [linalg.to_q(self.rng.randint(-self.span, self.span)) for _ in range(basis.dim)]
        values = linalg.combine(basis.representatives, coefficients)
        closed = Cochain(basis.home, basis.degree, values, basis.support)
        if with_boundary and basis.degree >= 1:
            closed = closed + self.coboundary_sample(basis.home, basis.degree, basis.support)
        return closed

    def coefficients(self, size: int) -> List[int]:
        return [self.rng.randint(-self.span, self.span) for _ in range(size)]
