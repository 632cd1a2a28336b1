"""
单纯集合命令
homology 与 check-fibration 两个子命令
"""
import logging

from components.report import CommandResult, homology_frame, homology_lines, records_frame
from config import DEFAULTS
from utils.categories import FiniteCategory, FiniteFunctor
from utils.documents import ActionSetup, InputDocument, MonoidSetup
from utils.errors import InvalidArgumentError
from utils.fibration import check_fibration, map_to_point
from utils.homology import homology_groups
from utils.sset import TruncatedSSet
from utils.verdicts import from_answer, Verdict

logger = logging.getLogger(__name__)


def _underlying_space(doc: InputDocument) -> TruncatedSSet:
    obj = doc.obj
    if isinstance(obj, TruncatedSSet):
        return obj
    if isinstance(obj, FiniteCategory):
        return obj.nerve(doc.trunc)
    if isinstance(obj, MonoidSetup):
        return obj.monoid.space
    raise InvalidArgumentError(f"homology does not apply to {doc.kind} documents")


def run_homology(doc: InputDocument, args) -> CommandResult:
    """整数同调 H_0..H_range"""
    X = _underlying_space(doc)
    groups = homology_groups(X, doc.range)
    logger.debug("同调 %s: %s", X.name, [H.describe() for H in groups])
    result = CommandResult(
        "homology",
        Verdict.SUCCESS,
        {
            "object": X.name,
            "trunc": doc.trunc,
            "range": doc.range,
            "counts": list(X.counts()),
            "nondegenerate": list(X.nondegenerate_counts()),
            "homology": [H.to_dict() for H in groups],
        },
    )
    result.add_text(homology_lines(groups))
    result.add_table("📊 同调群", homology_frame(groups))
    return result


def display_lifting_table(result: CommandResult, verdict):
    rows = [row.to_dict() for row in verdict.table]
    if rows:
        result.add_table("🧩 提升检验", records_frame(rows))


def run_check_fibration(doc: InputDocument, args) -> CommandResult:
    """范畴文档: BC -> 点; 作用文档: π: X -> ob(C) (或函子的神经映射)"""
    obj = doc.obj
    if isinstance(obj, FiniteCategory):
        f = map_to_point(obj.nerve(doc.trunc))
    elif isinstance(obj, ActionSetup):
        setup = obj.setup
        f = setup.nerve_map(doc.trunc) if isinstance(setup, FiniteFunctor) else setup.proj
    else:
        raise InvalidArgumentError(f"check-fibration does not apply to {doc.kind} documents")
    kind = getattr(args, "fibration_kind", None) or "kan"
    n_max = getattr(args, "n_max", None)
    if n_max is None:
        n_max = min(DEFAULTS["n_max"], doc.trunc - 1)
    verdict = check_fibration(f, kind, n_max)
    result = CommandResult("check-fibration", from_answer(verdict.result), {"map": f.name, **verdict.to_dict()})
    result.add_text(f"{kind} fibration through level {n_max}: {verdict.result.value}")
    if verdict.witness is not None:
        result.add_text(f"witness: {verdict.witness}")
    display_lifting_table(result, verdict)
    return result
