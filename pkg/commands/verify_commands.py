"""
验证命令
hocolim 以及 verify theorem-b / puppe / group-completion
"""
import logging
from typing import Optional, Tuple

from components.report import CommandResult, comparison_frame, homology_frame, homology_lines, records_frame
from utils.documents import ActionSetup, DiagramSetup, InputDocument, MonoidSetup, load_known_answer
from utils.errors import InvalidArgumentError
from utils.group_completion import GroupCompletionReport, group_completion_verify
from utils.harness import TheoremBReport, hocolim, puppe_check, theorem_b_verify
from utils.homology import homology_groups
from utils.verdicts import Verdict

logger = logging.getLogger(__name__)


def resolve_oracle(args, default: str, known: Optional[dict]) -> Tuple[str, Optional[dict]]:
    """--oracle known-answer:FILE 读取答案表; 不带文件时使用文档内联的表"""
    raw = getattr(args, "oracle", None) or default
    if raw.startswith("known-answer"):
        _, _, path = raw.partition(":")
        if path:
            known = load_known_answer(path)
        if known is None:
            raise InvalidArgumentError("known-answer needs a table: use --oracle known-answer:FILE")
        return "known-answer", known
    return raw, known


def _setup(doc: InputDocument, kind):
    if not isinstance(doc.obj, kind):
        raise InvalidArgumentError(f"this command does not apply to {doc.kind} documents")
    return doc.obj


# ==================== 同伦余极限 ====================
def run_hocolim(doc: InputDocument, args) -> CommandResult:
    setup = _setup(doc, DiagramSetup)
    H = hocolim(setup.diagram)
    groups = homology_groups(H, doc.range)
    result = CommandResult("hocolim", Verdict.SUCCESS, {
        "diagram": setup.diagram.name,
        "counts": list(H.counts()),
        "homology": [g.to_dict() for g in groups],
    })
    result.add_text(homology_lines(groups))
    result.add_table("📊 hocolim 的同调", homology_frame(groups))
    return result


# ==================== 定理 B 与 Puppe ====================
def display_theorem_report(result: CommandResult, report: TheoremBReport):
    """纤维与预言机的逐次比较, 以及前提检验"""
    if report.comparison:
        result.add_table("🔍 纤维 vs 同伦纤维",
                         comparison_frame(report.fiber_homology, report.oracle_homology, report.comparison))
    checks = []
    if report.fibration is not None:
        checks.append({"check": "π fibration", "result": report.fibration.result.value})
    if report.acts_by is not None:
        checks.append({"check": "acts by equivalences", "result": report.acts_by.answer.value})
    if report.comparison_map is not None:
        checks.append({"check": "comparison map", "result": report.comparison_map.answer.value})
    if checks:
        result.add_table("🧪 前提与比较映射", records_frame(checks, columns=["check", "result"]))
    if report.witness is not None:
        result.add_text(f"witness: {report.witness}")
    for note in report.notes:
        result.add_text(f"note: {note}")


def run_theorem_b(doc: InputDocument, args) -> CommandResult:
    setup = _setup(doc, ActionSetup)
    oracle, known = resolve_oracle(args, "groupoid-cover", setup.known)
    report = theorem_b_verify(setup.setup, setup.point, doc.spec, oracle=oracle, known=known, trunc=doc.trunc)
    logger.info("定理 B (%s): %s", setup.point, report.verdict.value)
    result = CommandResult("verify theorem-b", report.verdict, report.to_dict())
    display_theorem_report(result, report)
    return result


def run_puppe(doc: InputDocument, args) -> CommandResult:
    setup = _setup(doc, DiagramSetup)
    if setup.over is None:
        raise InvalidArgumentError("a Puppe document needs an 'over' diagram and a transformation")
    oracle, known = resolve_oracle(args, "fibration-pullback", setup.known)
    report = puppe_check(setup.diagram, setup.over, setup.transformation, setup.point, doc.spec,
                         oracle=oracle, known=known)
    result = CommandResult("verify puppe", report.verdict, report.to_dict())
    display_theorem_report(result, report)
    return result


# ==================== 群完备化 ====================
def display_group_completion(result: CommandResult, report: GroupCompletionReport):
    loc = report.localized
    if loc is not None:
        result.add_table("🧵 线程", records_frame(
            [{"degree": t.degree, "groups": " -> ".join(t.groups), "stable_from": t.stable_from,
              "stabilized": t.stabilized} for t in loc.threads],
            columns=["degree", "groups", "stable_from", "stabilized"],
        ))
        lines = [f"H_{k} = {g if g is not None else '?'} (per component)" for k, g in sorted(loc.degrees.items())]
        lines.append(f"π_0 completion = {loc.component_group}; H_0 = {loc.h0()}")
        if loc.window is not None:
            lines.append(f"stable window {loc.window}: H_0 rank {loc.h0_window_rank}, "
                         f"components {loc.window_components}")
        result.add_text("\n".join(lines))
    if report.acts_by is not None:
        result.add_text(f"acts by equivalences: {report.acts_by.answer.value}")
    if report.acyclic is not None:
        result.add_text(f"B(M_M) acyclic: {'yes' if report.acyclic else 'no'}")
    if report.witness is not None:
        result.add_text(f"witness: {report.witness}")
    for note in report.notes:
        result.add_text(f"note: {note}")


def run_group_completion(doc: InputDocument, args) -> CommandResult:
    setup = _setup(doc, MonoidSetup)
    _, expected = resolve_oracle(args, "known-answer" if setup.expected else "none", setup.expected)
    stages = getattr(args, "stages", None) or setup.stages
    report = group_completion_verify(setup.monoid, doc.spec, expected=expected, word=setup.word, stages=stages)
    result = CommandResult("verify group-completion", report.verdict, report.to_dict())
    display_group_completion(result, report)
    return result
