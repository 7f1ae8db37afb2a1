"""
revmap 异常类型

CLI 按异常类型映射退出码：参数错误 2，资源上限 3，验收检查失败 4。
"""


class RevmapError(Exception):
    """revmap 所有异常的基类"""


class ParameterError(RevmapError, ValueError):
    """参数不合法（奇偶性、范围、素性、尺寸不一致等）"""


class FieldMismatchError(ParameterError):
    """两个域元素不属于同一个 𝔽_p"""


class ResourceCapError(RevmapError):
    """请求的计算量超过配置上限"""


class AcceptanceCheckError(RevmapError):
    """--check 模式下有检查未通过"""

    def __init__(self, failed):
        self.failed = list(failed)
        names = ", ".join(check["name"] for check in self.failed)
        super().__init__(f"验收检查未通过: {names}")
