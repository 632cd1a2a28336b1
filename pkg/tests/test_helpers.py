"""通用工具测试"""
from utils.errors import IncompleteAtTruncationError, InvalidArgumentError, SchemaError
from utils.helpers import (
    DataCache,
    canonical_json,
    exit_code_for,
    format_group,
    handle_error,
    label_from_json,
    label_to_json,
    parallel_map,
)


class Keyed:
    def __init__(self, key):
        self.key = key

    def fingerprint(self):
        return self.key


def test_cache_keys_by_content():
    cache = DataCache(max_size=4)
    calls = []

    @cache
    def size(obj):
        calls.append(obj.key)
        return len(obj.key)

    assert size(Keyed("abc")) == 3
    assert size(Keyed("abc")) == 3
    assert calls == ["abc"]
    stats = cache.get_stats()
    assert (stats["hits"], stats["misses"]) == (1, 1)
    cache.clear()
    assert cache.get_stats()["size"] == 0


def test_cache_evicts_oldest():
    cache = DataCache(max_size=2)
    square = cache(lambda n: n * n)
    for n in range(5):
        square(n)
    assert cache.get_stats()["size"] == 2


def test_disabled_cache_always_calls():
    calls = []
    twice = DataCache(enabled=False)(lambda n: calls.append(n) or 2 * n)
    twice(1)
    twice(1)
    assert calls == [1, 1]


def test_parallel_map_keeps_order():
    items = list(range(20))
    assert parallel_map(lambda n: n * n, items, workers=4) == [n * n for n in items]
    assert parallel_map(str, [], workers=4) == []


def test_labels_survive_json():
    label = (1, ("a", 2), "*")
    assert label_to_json(label) == [1, ["a", 2], "*"]
    assert label_from_json(label_to_json(label)) == label
    assert canonical_json({"b": 1, "a": (0, 1)}) == '{"a":[0,1],"b":1}'


def test_format_group():
    assert format_group(0, []) == "0"
    assert format_group(2, [2, 6]) == "Z + Z + Z/2 + Z/6"


def test_exit_codes_for_errors():
    assert exit_code_for(IncompleteAtTruncationError("past the cap")) == 3
    assert exit_code_for(SchemaError("bad", "$.body")) == 4


def test_handle_error_reports_on_stderr(capsys):
    @handle_error
    def broken():
        raise InvalidArgumentError("range must be below truncation")

    assert broken() == 4
    assert "❌ invalid-argument: range must be below truncation" in capsys.readouterr().err
