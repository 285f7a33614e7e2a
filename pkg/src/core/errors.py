"""
异常定义模块
"""
from typing import Any, Dict, Optional


class DecError(Exception):
    """所有引擎异常的基类"""

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {'error': type(self).__name__, 'message': self.message}
        if self.witness is not None:
            payload['witness'] = self.witness
        return payload


# mesh
class DescriptorError(DecError):
    """无法识别或参数过小的曲面描述符"""


class ComplexError(DecError):
    """复形构造失败（不可定向、非流形等）"""


# cochain
class DegreeError(DecError):
    """上链次数越界"""


class SupportError(DecError):
    """支撑类约束被违反"""


class ComplexMismatchError(DecError):
    """两个上链不在同一个复形上"""


# cohomology
class InclusionError(DecError):
    """im B ⊄ ker A"""


class ChainMapError(DecError):
    """线性映射不是链映射"""


class NotACocycleError(DecError):
    """输入不是给定支撑类的上闭链"""


# homotopy
class BumpError(DecError):
    """时间鼓包不合法（总和不为 1 或落在时间领子上）"""


# homotopy / duality 证书
class IdentityError(DecError):
    """恒等式验证失败"""


# lorentz
class SolverError(DecError):
    """Green 求解器构造或求解失败"""


# maxwell
class OffShellError(DecError):
    """输入不满足场方程"""


# cli
class ConfigError(DecError):
    """配置文件解析或校验失败"""
