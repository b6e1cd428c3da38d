from __future__ import annotations

import math

from vcselemu.analysis import format_records, format_table, format_value


def test_format_value() -> None:
    assert format_value(True) == "yes"
    assert format_value(math.nan) == "-"
    assert format_value(math.inf) == "inf"
    assert format_value(-math.inf) == "-inf"
    assert format_value(0.123456789) == "0.123457"
    assert format_value(7) == "7"
    assert format_value("w_fc") == "w_fc"


def test_table_alignment() -> None:
    rows = [
        {"block": "w_fc", "mean_nmse": 0.25},
        {"block": "w_rec_bwd", "mean_nmse": 0.043},
    ]
    lines = format_table(rows).splitlines()
    assert lines[0] == "block      mean_nmse"
    assert lines[1] == "---------  ---------"
    assert lines[2] == "w_fc            0.25"
    assert lines[3] == "w_rec_bwd      0.043"


def test_table_union_of_columns() -> None:
    text = format_table([{"a": 1}, {"b": 2}])
    assert text.splitlines()[0].split() == ["a", "b"]


def test_records_keep_full_precision() -> None:
    text = format_records([{"regime": "1.40V", "nmse": 0.1 + 0.2}], ["regime", "nmse"])
    assert text == "regime\tnmse\n1.40V\t0.30000000000000004\n"
