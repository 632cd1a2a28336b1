"""
Quillen 定理 B 计算验证工具 - 命令行入口
============================================
读取 JSON 输入文档, 分派到各子命令, 输出文本或 JSON 报告.
退出码: 0 成立/成功, 1 反驳, 2 前提不成立, 3 无法检验/截断不足, 4 输入错误.
"""
import argparse
import copy
import importlib
import logging
import sys
from pathlib import Path
from typing import List, Optional

sys.path.insert(0, str(Path(__file__).parent))

from components.report import CommandResult, emit, records_frame
from config import COMMANDS, EXIT_CODES, LOGGING_CONFIG, ORACLE_NAMES, validate_config
from utils.documents import InputDocument, parse_input
from utils.errors import InvalidArgumentError, TopologyError
from utils.helpers import cache_manager, exit_code_for, handle_error, set_default_workers, show_warning_message
from utils.verdicts import Verdict

logger = logging.getLogger("quillen_b")


# ==================== 参数解析 ====================
class CommandLineParser(argparse.ArgumentParser):
    """参数错误按输入错误退出"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"❌ input-error: {message}", file=sys.stderr)
        sys.exit(EXIT_CODES["input-error"])


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="输入文档 (JSON)")
    common.add_argument("--trunc", type=int, help="截断维数 N (覆盖文档中的值)")
    common.add_argument("--range", dest="n_range", type=int, help="同调比较的最高次数 (必须小于 N)")
    common.add_argument("--oracle", help=f"{' | '.join(ORACLE_NAMES[:2])} | known-answer:FILE")
    common.add_argument("--report", type=Path, help="把 JSON 报告写到文件")
    common.add_argument("--json", action="store_true", help="标准输出只写 JSON 报告")
    common.add_argument("--threads", type=int, help="并行线程数")
    common.add_argument("--verbose", "-v", action="count", default=0, help="降低日志级别")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = CommandLineParser(prog="quillen-b", description="Quillen 定理 B 的有限截断计算验证")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("homology", parents=[common], help="整数同调")
    fib = sub.add_parser("check-fibration", parents=[common], help="Kan / 平凡纤维化检验")
    fib.add_argument("--kind", dest="fibration_kind", choices=["kan", "trivial"], default="kan")
    fib.add_argument("--n-max", dest="n_max", type=int)
    for name in ("validate-site", "stalk", "sheafify", "hocolim", "suite"):
        sub.add_parser(name, parents=[common], help=COMMANDS.get(name, {}).get("title", "回归套件"))
    verify = sub.add_parser("verify", help="定理验证").add_subparsers(dest="theorem", required=True)
    verify.add_parser("theorem-b", parents=[common])
    verify.add_parser("puppe", parents=[common])
    completion = verify.add_parser("group-completion", parents=[common])
    completion.add_argument("--stages", type=int, help="伸缩塔阶段数")
    return parser


def command_key(args) -> str:
    return f"verify {args.theorem}" if args.command == "verify" else args.command


# ==================== 命令分派 ====================
def run_command(key: str, doc: InputDocument, args) -> CommandResult:
    route = COMMANDS.get(key)
    if route is None:
        raise InvalidArgumentError(f"unknown command {key!r}")
    if doc.kind not in route["kinds"]:
        raise InvalidArgumentError(f"{key} expects one of {', '.join(route['kinds'])}, got a {doc.kind} document")
    handler = getattr(importlib.import_module(route["module"]), route["handler"])
    logger.info("运行 %s (%s)", key, doc.source)
    return handler(doc, args)


def run_suite(doc: InputDocument, args) -> CommandResult:
    """逐个运行套件中的用例, 比较退出码与期望值"""
    rows = []
    for case in doc.obj:
        case_args = copy.copy(args)
        case_args.oracle = case.oracle
        try:
            code = run_command(case.command, parse_input(case.input), case_args).exit_code
        except TopologyError as exc:
            logger.warning("用例 %s 出错: %s", case.input.name, exc.to_dict())
            code = exit_code_for(exc)
        rows.append({"command": case.command, "input": case.input.name, "exit_code": code,
                     "expected": case.expect, "ok": case.expect is None or case.expect == code})
    verdict = Verdict.SUCCESS if all(r["ok"] for r in rows) else Verdict.REFUTED
    result = CommandResult("suite", verdict, {"cases": rows})
    result.add_table("📋 回归套件", records_frame(rows, columns=["command", "input", "exit_code", "expected", "ok"]))
    return result


def configure_logging(verbose: int):
    """日志只写标准错误"""
    level = logging.getLevelName(LOGGING_CONFIG["level"])
    if verbose:
        level = logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOGGING_CONFIG["format"], stream=sys.stderr, force=True)


@handle_error
def execute(args) -> int:
    doc = parse_input(args.input).with_overrides(args.trunc, args.n_range)
    key = command_key(args)
    if key == "suite":
        if doc.kind != "suite":
            raise InvalidArgumentError("suite expects a suite document")
        result = run_suite(doc, args)
    else:
        result = run_command(key, doc, args)
    document = {"name": doc.name, "kind": doc.kind, "file": Path(args.input).name,
                "trunc": doc.trunc, "range": doc.range}
    emit(result, document, as_json=args.json, report_path=args.report)
    return result.exit_code


# ==================== 主函数 ====================
def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    if args.threads:
        set_default_workers(args.threads)
    if not validate_config():
        show_warning_message("资源目录缺失或默认截断配置不一致")
    code = execute(args)
    logger.debug("缓存统计: %s", cache_manager.get_stats())
    return code


if __name__ == "__main__":
    sys.exit(main())
