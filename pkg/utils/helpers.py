"""
通用工具函数模块
提供项目中常用的辅助函数: 内容指纹缓存, 保序并行映射, 标签序列化, 错误处理
"""
import hashlib
import json
import logging
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from functools import wraps
from typing import Any, Callable, Iterable, List, Optional

from config import CACHE_CONFIG, EXIT_CODES, PARALLEL_CONFIG
from utils.errors import (
    IncompleteAtTruncationError,
    TopologyError,
    UnreliableAtTruncationError,
)

logger = logging.getLogger(__name__)


# ==================== 标签处理函数 ====================
def label_to_json(label: Any) -> Any:
    """把单形标签 (嵌套元组) 转为JSON值"""
    if isinstance(label, tuple):
        return [label_to_json(item) for item in label]
    if isinstance(label, frozenset):
        return sorted((label_to_json(item) for item in label), key=canonical_json)
    return label


def label_from_json(value: Any) -> Any:
    """把JSON值还原为可哈希的标签"""
    if isinstance(value, list):
        return tuple(label_from_json(item) for item in value)
    return value


def canonical_json(value: Any) -> str:
    """规范JSON字符串 (排序键, 无空白), 用作确定性排序键和指纹输入"""
    return json.dumps(label_to_json(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def fingerprint_of(payload: Any) -> str:
    """计算内容指纹"""
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


# ==================== 缓存装饰器 ====================
class DataCache:
    """数据缓存装饰器类

    缓存键由函数名和参数的内容指纹组成; 带 fingerprint() 方法的对象按内容计键.
    """

    def __init__(self, max_size: int = 128, ttl: int = 3600, enabled: bool = True):
        """
        初始化缓存

        Args:
            max_size: 最大缓存数量
            ttl: 缓存生存时间(秒)
            enabled: 是否启用
        """
        self.max_size = max_size
        self.ttl = ttl
        self.enabled = enabled
        self._cache = {}
        self._timestamps = {}
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0

    def __call__(self, func):
        """装饰器实现"""
        @wraps(func)
        def wrapped(*args, **kwargs):
            if not self.enabled:
                return func(*args, **kwargs)
            cache_key = self._generate_key(func.__name__, args, kwargs)

            with self._lock:
                if cache_key in self._cache:
                    timestamp = self._timestamps.get(cache_key, 0)
                    if time.time() - timestamp < self.ttl:
                        self._hits += 1
                        return self._cache[cache_key]
                self._misses += 1

            result = func(*args, **kwargs)
            with self._lock:
                self._cache[cache_key] = result
                self._timestamps[cache_key] = time.time()
                self._cleanup()

            return result

        return wrapped

    def _generate_key(self, func_name: str, args: tuple, kwargs: dict) -> str:
        """生成缓存键"""
        parts = [func_name]
        for arg in list(args) + [kwargs[k] for k in sorted(kwargs)]:
            marker = getattr(arg, "fingerprint", None)
            parts.append(marker() if callable(marker) else repr(arg))
        key_str = ":".join(parts) + ":" + ",".join(sorted(kwargs))
        return hashlib.md5(key_str.encode()).hexdigest()

    def _cleanup(self):
        """清理过期缓存"""
        current_time = time.time()
        expired_keys = [
            k for k, t in self._timestamps.items()
            if current_time - t > self.ttl
        ]

        for k in expired_keys:
            self._cache.pop(k, None)
            self._timestamps.pop(k, None)

        while len(self._cache) > self.max_size:
            oldest_key = min(self._timestamps.items(), key=lambda x: x[1])[0]
            self._cache.pop(oldest_key, None)
            self._timestamps.pop(oldest_key, None)

    def clear(self):
        """清空缓存"""
        with self._lock:
            self._cache.clear()
            self._timestamps.clear()
            self._hits = 0
            self._misses = 0

    def get_stats(self) -> dict:
        """获取缓存统计信息"""
        return {
            "size": len(self._cache),
            "max_size": self.max_size,
            "ttl": self.ttl,
            "hits": self._hits,
            "misses": self._misses,
            "usage_percent": len(self._cache) / self.max_size * 100
        }


# 全局缓存实例
cache_manager = DataCache(
    max_size=CACHE_CONFIG["max_size"],
    ttl=CACHE_CONFIG["ttl"],
    enabled=CACHE_CONFIG["enabled"],
)


def cached_function(func):
    """缓存装饰器快捷方式"""
    return cache_manager(func)


# ==================== 并行处理函数 ====================
def parallel_map(func: Callable, items: Iterable, workers: Optional[int] = None) -> List:
    """保序并行映射

    Args:
        func: 作用于每个元素的纯函数
        items: 输入序列
        workers: 线程数, 缺省取 PARALLEL_CONFIG

    Returns:
        与输入顺序一致的结果列表, 与线程数无关
    """
    items = list(items)
    workers = workers or PARALLEL_CONFIG["max_workers"]
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def set_default_workers(workers: int):
    """设置默认线程数 (命令行 --threads)"""
    PARALLEL_CONFIG["max_workers"] = max(1, int(workers))


# ==================== 格式化函数 ====================
def format_group(rank: int, torsion: Iterable[int]) -> str:
    """格式化有限生成阿贝尔群

    Args:
        rank: 自由秩
        torsion: 不变因子

    Returns:
        例如 "Z + Z/2", 平凡群为 "0"
    """
    parts = ["Z"] * rank + [f"Z/{d}" for d in torsion]
    return " + ".join(parts) if parts else "0"


# ==================== 错误处理函数 ====================
def exit_code_for(exc: BaseException) -> int:
    """异常到退出码的映射"""
    if isinstance(exc, (IncompleteAtTruncationError, UnreliableAtTruncationError)):
        return EXIT_CODES["incomplete-at-truncation"]
    return EXIT_CODES["input-error"]


def handle_error(func):
    """错误处理装饰器: 把领域错误转换为退出码并写到标准错误"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TopologyError as e:
            logger.warning("命令失败: %s", e.to_dict())
            print(f"❌ {e.code}: {e.message}", file=sys.stderr)
            return exit_code_for(e)
        except (OSError, ValueError) as e:
            print(f"❌ input-error: {e}", file=sys.stderr)
            return EXIT_CODES["input-error"]
    return wrapper


def show_warning_message(message: str):
    """显示警告消息"""
    print(f"⚠️ {message}", file=sys.stderr)
