"""
景与预层命令
validate-site, stalk, sheafify 三个子命令
"""
import logging

from components.report import CommandResult, records_frame
from utils.documents import InputDocument, PresheafSetup
from utils.errors import InvalidArgumentError
from utils.helpers import label_to_json
from utils.homology import homology_groups
from utils.site import (
    FiniteSite,
    SPresheaf,
    is_local_equivalence,
    is_simplicial_sheaf,
    sheafify_spresheaf,
    stalk,
    validate_site,
)
from utils.verdicts import Verdict, from_answer

logger = logging.getLogger(__name__)


def _presheaf(doc: InputDocument) -> PresheafSetup:
    if not isinstance(doc.obj, PresheafSetup):
        raise InvalidArgumentError(f"{doc.kind} documents carry no presheaf")
    return doc.obj


def run_validate_site(doc: InputDocument, args) -> CommandResult:
    """拓扑公理; 预层文档另外报告是否为层"""
    obj = doc.obj
    site = obj if isinstance(obj, FiniteSite) else _presheaf(doc).presheaf.site
    report = validate_site(site)
    payload = report.to_dict()
    verdict = Verdict.CONFIRMED if report.valid else Verdict.REFUTED
    result = CommandResult("validate-site", verdict, payload)
    result.add_table("🧭 拓扑公理", records_frame(
        [{"axiom": a["axiom"], "passed": a["passed"], "witness": a.get("witness", "-")} for a in payload["axioms"]],
        columns=["axiom", "passed", "witness"],
    ))
    if isinstance(obj, PresheafSetup):
        sheaf = is_simplicial_sheaf(obj.presheaf)
        payload["is_sheaf"] = sheaf
        result.add_text(f"{obj.presheaf.name} is a sheaf: {'yes' if sheaf else 'no'}")
    return result


def run_stalk(doc: InputDocument, args) -> CommandResult:
    """每个点上的茎及其同调; 文档带映射时给出逐茎等价判定"""
    setup = _presheaf(doc)
    if not setup.points:
        raise InvalidArgumentError("the presheaf document declares no points")
    rows, stalks = [], []
    for p in setup.points:
        S = stalk(setup.presheaf, p)
        groups = homology_groups(S, doc.range)
        stalks.append({"point": p.name, "counts": list(S.counts()),
                       "vertices": [label_to_json(v) for v in S.simplices[0]],
                       "homology": [H.describe() for H in groups]})
        rows.append({"point": p.name, "vertices": S.size(0),
                     **{f"H_{H.degree}": H.describe() for H in groups}})
    payload = {"presheaf": setup.presheaf.name, "stalks": stalks}
    verdict = Verdict.SUCCESS
    if setup.map is not None:
        ev = is_local_equivalence(setup.map, setup.points, doc.range)
        payload["local_equivalence"] = ev.to_dict()
        verdict = from_answer(ev.answer)
    result = CommandResult("stalk", verdict, payload)
    result.add_table("🌾 茎", records_frame(rows))
    if setup.map is not None:
        result.add_text(f"stalkwise h-range equivalence: {payload['local_equivalence']['answer']}")
    return result


def _unit_bijective(X: SPresheaf) -> bool:
    return all(c.is_isomorphism() for c in sheafify_spresheaf(X).unit.components)


def run_sheafify(doc: InputDocument, args) -> CommandResult:
    """两次加构造; 报告单位是否为同构以及层化的幂等性"""
    setup = _presheaf(doc)
    P = setup.presheaf
    done = sheafify_spresheaf(P)
    C = P.site.category
    unit_iso = all(c.is_isomorphism() for c in done.unit.components)
    idempotent = _unit_bijective(done.sheaf)
    sheaf = is_simplicial_sheaf(P)
    logger.info("层化 %s: 单位同构 %s, 幂等 %s", P.name, unit_iso, idempotent)
    payload = {
        "presheaf": P.name,
        "is_sheaf": sheaf,
        "unit_bijective": unit_iso,
        "idempotent": idempotent,
        "values": {str(o): list(done.sheaf.values[c].counts()) for c, o in enumerate(C.objects)},
    }
    verdict = Verdict.SUCCESS if idempotent and unit_iso == sheaf else Verdict.REFUTED
    result = CommandResult("sheafify", verdict, payload)
    result.add_table("🧵 层化", records_frame(
        [{"object": o, "before": P.values[c].size(0), "after": done.sheaf.values[c].size(0)}
         for c, o in enumerate(C.objects)],
        columns=["object", "before", "after"],
    ))
    result.add_text(f"unit bijective: {'yes' if unit_iso else 'no'}; idempotent: {'yes' if idempotent else 'no'}")
    return result
