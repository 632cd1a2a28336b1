"""
项目配置文件
统一管理所有配置参数和路径设置
"""
import os
from pathlib import Path

# ==================== 项目路径配置 ====================
BASE_DIR = Path(__file__).parent
ASSETS_DIR = BASE_DIR / "assets"
FIXTURES_DIR = ASSETS_DIR / "fixtures"
SCHEMAS_DIR = ASSETS_DIR / "schemas"
COMPONENTS_DIR = BASE_DIR / "components"
UTILS_DIR = BASE_DIR / "utils"
COMMANDS_DIR = BASE_DIR / "commands"

REPORT_SCHEMA_PATH = SCHEMAS_DIR / "report.schema.json"

# ==================== 默认截断配置 ====================
DEFAULTS = {
    "trunc": 4,        # 单纯集合存储到的维数 N
    "range": 2,        # 同调比较的最高次数, 必须小于 N
    "n_max": 3,        # 纤维化检验的最高层
    "stages": 4,       # 伸缩塔的阶段数
}

# ==================== 退出码配置 ====================
EXIT_CODES = {
    "confirmed": 0,
    "success": 0,
    "refuted": 1,
    "hypotheses-not-met": 2,
    "not-checkable": 3,
    "incomplete-at-truncation": 3,
    "input-error": 4,
}

# ==================== 命令路由配置 ====================
COMMANDS = {
    "homology": {
        "module": "commands.sset_commands",
        "handler": "run_homology",
        "kinds": ["sset", "category", "monoid"],
        "title": "整数同调",
    },
    "check-fibration": {
        "module": "commands.sset_commands",
        "handler": "run_check_fibration",
        "kinds": ["category", "action"],
        "title": "纤维化检验",
    },
    "validate-site": {
        "module": "commands.site_commands",
        "handler": "run_validate_site",
        "kinds": ["site", "presheaf"],
        "title": "拓扑公理检验",
    },
    "stalk": {
        "module": "commands.site_commands",
        "handler": "run_stalk",
        "kinds": ["presheaf"],
        "title": "茎计算",
    },
    "sheafify": {
        "module": "commands.site_commands",
        "handler": "run_sheafify",
        "kinds": ["presheaf"],
        "title": "层化",
    },
    "hocolim": {
        "module": "commands.verify_commands",
        "handler": "run_hocolim",
        "kinds": ["diagram"],
        "title": "同伦余极限",
    },
    "verify theorem-b": {
        "module": "commands.verify_commands",
        "handler": "run_theorem_b",
        "kinds": ["action"],
        "title": "定理 B 验证",
    },
    "verify puppe": {
        "module": "commands.verify_commands",
        "handler": "run_puppe",
        "kinds": ["diagram"],
        "title": "Puppe 验证",
    },
    "verify group-completion": {
        "module": "commands.verify_commands",
        "handler": "run_group_completion",
        "kinds": ["monoid"],
        "title": "群完备化验证",
    },
}

DOCUMENT_KINDS = ("sset", "category", "action", "monoid", "site", "presheaf", "diagram", "suite")

ORACLE_NAMES = ("groupoid-cover", "fibration-pullback", "known-answer")

# ==================== Smith标准形配置 ====================
SNF_CONFIG = {
    "pivot": "min_abs",                                  # 最小绝对值主元
    "verify": os.environ.get("QB_SNF_VERIFY", "0") == "1",  # 测试模式下逐次验证 U·A·V = D
}

# ==================== 缓存配置 ====================
CACHE_CONFIG = {
    "max_size": 256,
    "ttl": 1800,  # 30分钟
    "enabled": True
}

# ==================== 并行配置 ====================
PARALLEL_CONFIG = {
    "max_workers": int(os.environ.get("QB_THREADS", "1")),
}

# ==================== 日志配置 ====================
LOGGING_CONFIG = {
    "level": os.environ.get("QB_LOG_LEVEL", "WARNING"),
    "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
}

# ==================== 报告配置 ====================
REPORT_CONFIG = {
    "schema_version": "1.0",
    "sort_keys": True,
    "indent": 2,
}

# ==================== 枚举上限配置 ====================
ENUMERATION_LIMITS = {
    "max_maps": 200000,        # simplex_maps 单次枚举的映射数上限
    "max_matching": 100000,    # 层化时单个覆盖筛上的匹配族数上限
    "max_simplices": 500000,   # 单层单形数上限
}

# ==================== 辅助函数 ====================
def get_fixture_path(filename: str) -> Path:
    """获取示例输入文件的完整路径"""
    return FIXTURES_DIR / filename


def check_assets() -> dict:
    """检查所有资源文件是否存在"""
    return {
        "fixtures": FIXTURES_DIR.exists(),
        "schemas": SCHEMAS_DIR.exists(),
        "report_schema": REPORT_SCHEMA_PATH.exists(),
    }


def validate_config() -> bool:
    """验证配置是否完整"""
    required_paths = [ASSETS_DIR, FIXTURES_DIR, SCHEMAS_DIR, UTILS_DIR, COMMANDS_DIR]
    if not all(path.exists() for path in required_paths):
        return False
    return 0 <= DEFAULTS["range"] < DEFAULTS["trunc"]
