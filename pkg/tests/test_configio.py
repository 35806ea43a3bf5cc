import pytest
from hypothesis import given, strategies as st

from fairinfluence.configio import (
    format_kv,
    kv_float,
    kv_float_list,
    kv_int,
    kv_list,
    kv_str,
    parse_kv_text,
    read_kv,
    write_kv,
)
from fairinfluence.errors import ConfigError


def test_parse_basic():
    kv = parse_kv_text("a=1\n# comment\n\nb=two words\nc=1,2,3\n")
    assert kv == {"a": "1", "b": "two words", "c": "1,2,3"}


def test_parse_strips_whitespace():
    kv = parse_kv_text("  key  =  value  \n")
    assert kv == {"key": "value"}


def test_parse_duplicate_key_reports_line():
    with pytest.raises(ConfigError, match=r"(?s)duplicate.*a"):
        parse_kv_text("a=1\na=2\n", source="dup.cfg")


def test_parse_missing_equals_reports_source_and_line():
    with pytest.raises(ConfigError, match=r"broken.cfg:2"):
        parse_kv_text("a=1\nnonsense\n", source="broken.cfg")


def test_read_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        read_kv(tmp_path / "missing.cfg")


def test_write_read_roundtrip(tmp_path):
    path = tmp_path / "x.cfg"
    write_kv(path, {"alpha": "0.5", "names": "a,b"})
    assert read_kv(path) == {"alpha": "0.5", "names": "a,b"}


def test_typed_getters():
    kv = {"i": "3", "f": "0.25", "lst": "x,y", "flst": "1,2.5"}
    assert kv_int(kv, "i") == 3
    assert kv_float(kv, "f") == 0.25
    assert kv_list(kv, "lst") == ["x", "y"]
    assert kv_float_list(kv, "flst") == [1.0, 2.5]
    assert kv_str(kv, "nope", "fallback") == "fallback"
    assert kv_int(kv, "nope", 7) == 7


def test_typed_getters_name_the_key():
    with pytest.raises(ConfigError, match="i"):
        kv_int({"i": "not-a-number"}, "i")
    with pytest.raises(ConfigError, match="missing"):
        kv_str({}, "missing")


@given(
    st.dictionaries(
        st.from_regex(r"[a-z][a-z0-9_]{0,10}", fullmatch=True),
        st.from_regex(r"[A-Za-z0-9_.,: -]{1,20}", fullmatch=True).map(str.strip).filter(bool),
        max_size=8,
    )
)
def test_format_parse_roundtrip(mapping):
    assert parse_kv_text(format_kv(mapping)) == mapping
