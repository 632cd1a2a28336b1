"""
错误类型模块
所有计算模块共用的异常层次, 每个异常携带稳定的错误名称 (code) 和可选的见证数据
"""
from typing import Any, Optional


class TopologyError(Exception):
    """所有领域错误的基类"""

    code = "error"

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> dict:
        """转换为可序列化的字典"""
        payload = {"code": self.code, "message": self.message}
        if self.witness is not None:
            payload["witness"] = self.witness
        return payload


class InvalidArgumentError(TopologyError):
    code = "invalid-argument"


class CorruptInputError(TopologyError):
    code = "corrupt-input"


class ContractViolationError(TopologyError):
    code = "contract-violation"


class IncompleteAtTruncationError(TopologyError):
    code = "incomplete-at-truncation"


class UnreliableAtTruncationError(TopologyError):
    code = "unreliable-at-truncation"


class PreconditionUnverifiedError(TopologyError):
    code = "precondition-unverified"


class UnsupportedOracleError(TopologyError):
    code = "unsupported-oracle"


class SchemaError(TopologyError):
    """输入文档的结构错误, 定位到文件和字段路径"""

    code = "schema-error"

    def __init__(self, message: str, path: str = "$", source: Optional[str] = None,
                 witness: Optional[Any] = None):
        location = f"{source}:{path}" if source else path
        super().__init__(f"{location}: {message}", witness)
        self.path = path
        self.source = source


class HypothesesNotMetError(TopologyError):
    """定理的前提不成立 (不是反例)"""

    code = "hypotheses-not-met"
