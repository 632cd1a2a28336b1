"""
报告结论模块
验证流程的总体结论及其到退出码的映射
"""
from enum import Enum
from typing import Iterable

from config import EXIT_CODES
from utils.homology import Answer


# ==================== 结论枚举 ====================
class Verdict(Enum):
    """报告的总体结论"""
    CONFIRMED = "confirmed"
    REFUTED = "refuted"
    HYPOTHESES_NOT_MET = "hypotheses-not-met"
    NOT_CHECKABLE = "not-checkable"
    INCOMPLETE = "incomplete-at-truncation"
    SUCCESS = "success"

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.value]

    @property
    def icon(self) -> str:
        return VERDICT_ICONS[self]


VERDICT_ICONS = {
    Verdict.CONFIRMED: "✅",
    Verdict.SUCCESS: "✅",
    Verdict.REFUTED: "❌",
    Verdict.HYPOTHESES_NOT_MET: "⚠️",
    Verdict.NOT_CHECKABLE: "❔",
    Verdict.INCOMPLETE: "⏳",
}


def from_answer(answer: Answer) -> Verdict:
    """比较结果 -> 结论 (前提检验不走这里)"""
    return {
        Answer.YES: Verdict.CONFIRMED,
        Answer.NO: Verdict.REFUTED,
        Answer.INCOMPLETE: Verdict.INCOMPLETE,
        Answer.NOT_CHECKABLE: Verdict.NOT_CHECKABLE,
    }[answer]


def hypothesis_verdict(answer: Answer) -> Verdict:
    """前提检验失败不构成反例"""
    if answer is Answer.NO:
        return Verdict.HYPOTHESES_NOT_MET
    return from_answer(answer)


def worst(verdicts: Iterable[Verdict]) -> Verdict:
    """多个结论合并: 取退出码最大者 (套件汇总用)"""
    verdicts = list(verdicts)
    if not verdicts:
        return Verdict.SUCCESS
    return max(verdicts, key=lambda v: (v.exit_code, v.value))
