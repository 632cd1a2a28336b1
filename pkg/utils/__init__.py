"""
工具模块
单纯集合, 同调, 范畴对象与各验证流程
"""

from .errors import (
    TopologyError,
    InvalidArgumentError,
    CorruptInputError,
    ContractViolationError,
    IncompleteAtTruncationError,
    UnreliableAtTruncationError,
    PreconditionUnverifiedError,
    UnsupportedOracleError,
    SchemaError,
    HypothesesNotMetError,
)

from .helpers import (
    DataCache,
    cache_manager,
    cached_function,
    format_group,
    handle_error,
    parallel_map,
    show_warning_message,
)

__all__ = [
    'TopologyError',
    'InvalidArgumentError',
    'CorruptInputError',
    'ContractViolationError',
    'IncompleteAtTruncationError',
    'UnreliableAtTruncationError',
    'PreconditionUnverifiedError',
    'UnsupportedOracleError',
    'SchemaError',
    'HypothesesNotMetError',
    'DataCache',
    'cache_manager',
    'cached_function',
    'format_group',
    'handle_error',
    'parallel_map',
    'show_warning_message',
]
