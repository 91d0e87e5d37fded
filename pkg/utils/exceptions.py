"""
工具包异常定义。

所有异常都继承自 ValueError，调用方可以像处理普通输入错误一样捕获；
需要区分原因时再捕获具体子类。报告型操作（校验、验证）不抛出数学失败，
只有输入形状或前置条件问题才抛出。
"""
from typing import Optional, Sequence


class KernelToolkitError(ValueError):
    """工具包异常基类"""


class DimensionError(KernelToolkitError):
    """矩阵/向量维度不匹配"""


class PositivityError(KernelToolkitError):
    """矩阵或核不满足(−*)-正定性"""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(f"{message} (最小特征值 {min_eigenvalue:.3e})")
        self.min_eigenvalue = float(min_eigenvalue)


class PairingError(KernelToolkitError):
    """配对矩阵奇异或不满足对偶性"""

    def __init__(self, message: str, smallest_singular_value: float):
        super().__init__(f"{message} (最小奇异值 {smallest_singular_value:.3e})")
        self.smallest_singular_value = float(smallest_singular_value)


class IncompleteKernelError(KernelToolkitError):
    """核的分块表不完整"""

    def __init__(self, missing: Sequence):
        shown = ", ".join(str(m) for m in list(missing)[:5])
        more = "" if len(missing) <= 5 else f" 等 {len(missing)} 项"
        super().__init__(f"核缺少分块: {shown}{more}")
        self.missing = list(missing)


class BundleMismatchError(KernelToolkitError):
    """态射的源/目标丛与给定对象不一致"""


class NotAMorphismError(KernelToolkitError):
    """映射不满足态射的有界性条件"""

    def __init__(self, message: str, residual: float = float("inf")):
        super().__init__(message)
        self.residual = float(residual)


class PreconditionError(KernelToolkitError):
    """定理验证的前置条件不成立"""

    def __init__(self, check: str, residual: Optional[float] = None, message: str = ""):
        text = f"前置条件不成立: {check}"
        if residual is not None:
            text += f" (残差 {residual:.3e})"
        if message:
            text += f" - {message}"
        super().__init__(text)
        self.check = check
        self.residual = residual


class ScenarioError(KernelToolkitError):
    """场景文件解析错误，location 指出出错的字段"""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
