"""测试中共用的小范畴"""
from utils.categories import from_tables


def iso_category():
    """两个对象之间的一对互逆态射"""
    return from_tables(
        ["a", "b"],
        [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b"), ("g", "b", "a")],
        lambda g, f: {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("f", "1a"): "f", ("1b", "f"): "f",
                      ("g", "1b"): "g", ("1a", "g"): "g", ("g", "f"): "1a", ("f", "g"): "1b"}.get((g, f)),
        {"a": "1a", "b": "1b"},
        name="iso",
    )
