"""输入文档解析测试"""
import json

import pytest

from utils.categories import FiniteFunctor
from utils.documents import ActionSetup, MonoidSetup, load_document, load_known_answer, parse_input
from utils.errors import CorruptInputError, InvalidArgumentError, SchemaError
from utils.internal_category import InternalAction
from utils.site import SPresheafMap
from utils.sset import TruncatedSSet


def test_standard_boundary(fixture_path):
    doc = parse_input(fixture_path("boundary_delta2.json"))
    assert (doc.kind, doc.trunc, doc.range) == ("sset", 3, 2)
    assert isinstance(doc.obj, TruncatedSSet)
    assert doc.obj.nondegenerate_counts()[:2] == (3, 3)


def test_range_at_truncation_is_rejected(fixture_path):
    with pytest.raises(InvalidArgumentError, match="range must be below truncation"):
        parse_input(fixture_path("bad_range.json"))


def test_overrides_are_checked(fixture_path):
    doc = parse_input(fixture_path("boundary_delta2.json"))
    assert doc.with_overrides(trunc=4).trunc == 4
    assert doc.with_overrides(n_range=1).range == 1
    with pytest.raises(InvalidArgumentError):
        doc.with_overrides(n_range=3)


def test_nonassociative_table_fails_at_load(fixture_path):
    with pytest.raises(CorruptInputError):
        parse_input(fixture_path("nonassociative_monoid.json"))


def test_missing_file(tmp_path):
    with pytest.raises(InvalidArgumentError):
        parse_input(tmp_path / "absent.json")


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"kind\": ", encoding="utf-8")
    with pytest.raises(SchemaError) as info:
        parse_input(path)
    assert info.value.path == "$"
    assert info.value.source == str(path)


@pytest.mark.parametrize("payload, path", [
    ([], "$"),
    ({"kind": "widget", "body": {}}, "$.kind"),
    ({"kind": "sset", "trunc": 0, "body": {}}, "$.trunc"),
    ({"kind": "sset", "trunc": 3, "range": 1}, "$.body"),
    ({"kind": "sset", "trunc": 3, "range": 1, "body": {"standard": "simplex", "discrete": ["a"]}}, "$.body"),
    ({"kind": "monoid", "trunc": 3, "range": 1, "body": {"group": "dihedral", "n": 3}}, "$.body.group"),
])
def test_schema_errors_carry_a_path(payload, path):
    with pytest.raises(SchemaError) as info:
        load_document(payload, source="inline")
    assert info.value.path == path
    assert str(info.value).startswith(f"inline:{path}")


def test_unknown_label_is_a_schema_error():
    payload = {
        "kind": "action", "trunc": 3, "range": 1,
        "body": {
            "functor": {
                "source": {"builtin": "terminal"},
                "target": {"builtin": "cyclic", "n": 2},
                "objects": {"*": "nowhere"},
                "morphisms": {},
            },
            "point": "*",
        },
    }
    doc = load_document(payload)
    with pytest.raises(SchemaError, match="unknown label"):
        doc.obj


def test_functor_fills_in_identities(fixture_path):
    setup = parse_input(fixture_path("arrow_to_bz2.json")).obj
    assert isinstance(setup, ActionSetup)
    f = setup.setup
    assert isinstance(f, FiniteFunctor)
    D, C = f.source, f.target
    assert f.mor_map[D.morphism_index((0, 1))] == 1
    assert all(C.is_identity(f.mor_map[e]) for e in D.identities)
    assert setup.point == "*"


def test_set_action_document(fixture_path):
    setup = parse_input(fixture_path("z2_set_action.json")).obj
    assert isinstance(setup.setup, InternalAction)
    assert setup.setup.total.size(0) == 2


def test_known_answer_from_file(fixture_path):
    setup = parse_input(fixture_path("block_sum_s3.json")).obj
    assert isinstance(setup, MonoidSetup)
    assert setup.expected == load_known_answer(fixture_path("block_sum_s3.known.json"))
    assert setup.expected["degrees"]["1"] == "Z/2"


def test_known_answer_file_needs_degrees(tmp_path):
    path = tmp_path / "known.json"
    path.write_text(json.dumps({"degrees": ["Z"]}), encoding="utf-8")
    with pytest.raises(SchemaError):
        load_known_answer(path)


def test_presheaf_with_map(fixture_path):
    setup = parse_input(fixture_path("presheaf_local_map.json")).obj
    assert isinstance(setup.map, SPresheafMap)
    assert [p.name for p in setup.points] == ["pU"]
    assert setup.presheaf.at("X").size(0) == 2


def test_suite_resolves_inputs(fixture_path):
    cases = parse_input(fixture_path("suite.json")).obj
    assert len(cases) == 8
    assert all(case.input.exists() for case in cases)
    assert cases[-1].expect == 4
