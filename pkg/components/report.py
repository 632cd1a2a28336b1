"""
报告组件
命令结果的统一载体, pandas 表格形式的文本输出, 以及带 schema_version 的确定性 JSON 报告
"""
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import pandas as pd

from config import REPORT_CONFIG
from utils.helpers import label_to_json
from utils.homology import AbelianGroupPresentation
from utils.verdicts import Verdict


@dataclass
class CommandResult:
    """一个命令的结论, 机器可读的结果, 以及给人看的文本块"""
    command: str
    verdict: Verdict
    result: dict
    blocks: List[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def add_text(self, text: str):
        self.blocks.append(text)

    def add_table(self, title: str, table: pd.DataFrame):
        self.blocks.append(f"{title}\n{render_table(table)}")


# ==================== 表格 ====================
def render_table(table: pd.DataFrame) -> str:
    if table.empty:
        return "(empty)"
    return table.to_string(index=False)


def homology_frame(groups: Sequence[AbelianGroupPresentation]) -> pd.DataFrame:
    """每个次数一行: 群, 秩, 挠系数"""
    return pd.DataFrame(
        [{"degree": H.degree, "group": H.describe(), "rank": H.rank,
          "torsion": ", ".join(str(d) for d in H.torsion) or "-"} for H in groups],
        columns=["degree", "group", "rank", "torsion"],
    )


def homology_lines(groups: Sequence[AbelianGroupPresentation]) -> str:
    return "\n".join(f"H_{H.degree} = {H.describe()}" for H in groups)


def comparison_frame(fiber: Sequence[str], oracle: Sequence[str], agree: Sequence[bool]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"degree": k, "fiber": a, "oracle": b, "agree": "yes" if ok else "no"}
         for k, (a, b, ok) in enumerate(zip(fiber, oracle, agree))],
        columns=["degree", "fiber", "oracle", "agree"],
    )


def records_frame(rows: Iterable[dict], columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    rows = [{k: _cell(v) for k, v in row.items()} for row in rows]
    return pd.DataFrame(rows, columns=list(columns) if columns else None)


def _cell(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(label_to_json(value), ensure_ascii=False, sort_keys=True)
    return str(value)


# ==================== JSON 报告 ====================
def report_payload(result: CommandResult, document: Optional[dict] = None) -> dict:
    """报告顶层: schema_version, 命令, 输入, 结论, 退出码, 结果; 不含时间戳"""
    payload = {
        "schema_version": REPORT_CONFIG["schema_version"],
        "command": result.command,
        "verdict": result.verdict.value,
        "exit_code": result.exit_code,
        "result": result.result,
    }
    if document is not None:
        payload["input"] = document
    return payload


def dumps_report(payload: dict) -> str:
    return json.dumps(label_to_json(payload), sort_keys=REPORT_CONFIG["sort_keys"],
                      indent=REPORT_CONFIG["indent"], ensure_ascii=False)


def write_report(payload: dict, path: Path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_report(payload) + "\n", encoding="utf-8")


def render_text(result: CommandResult) -> str:
    header = f"{result.verdict.icon} {result.command}: {result.verdict.value}"
    return "\n\n".join([header] + result.blocks)


def emit(result: CommandResult, document: Optional[dict] = None, as_json: bool = False,
         report_path: Optional[Path] = None, stream=None):
    """--json 时标准输出只有 JSON 报告, 否则为文本; --report 另写 JSON 文件"""
    stream = stream or sys.stdout
    payload = report_payload(result, document)
    if report_path is not None:
        write_report(payload, report_path)
    if as_json:
        stream.write(dumps_report(payload) + "\n")
    else:
        stream.write(render_text(result) + "\n")
    return payload
