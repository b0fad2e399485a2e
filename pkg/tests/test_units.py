import pytest
from hypothesis import given
import hypothesis.strategies as st

from dlcost.units import QuantityError, format_quantity, parse_count, parse_quantity


@pytest.mark.parametrize("text,expected", [
    ("25Gbps", 3.125e9),
    ("10GB/s", 1.0e10),
    ("1TB/s", 1e12),
    ("100Gbps", 1.25e10),
    ("10GB", 1.0e10),     # rate suffix optional on bandwidths
    ("25 Gbps", 3.125e9),
    ("1.5kB/s", 1.5e3),
])
def test_parse_bandwidth(text, expected):
    assert parse_quantity(text, "bandwidth") == expected


@pytest.mark.parametrize("text,expected", [
    ("11TFLOPs", 1.1e13),
    ("15TFLOPs", 1.5e13),
    ("8T", 8e12),
    ("330.7GFLOPs", 330.7e9),
    ("1.1e13FLOPs", 1.1e13),
])
def test_parse_flops_rate(text, expected):
    assert parse_quantity(text, "flops_rate") == expected


@pytest.mark.parametrize("text,expected", [
    ("204MB", 2.04e8),
    ("0MB", 0.0),
    ("239.45GB", 2.3945e11),
    ("22KB", 2.2e4),
    ("46kB", 4.6e4),
    ("16Gb", 2e9),        # bits divided by 8
    ("728MB", 7.28e8),
])
def test_parse_bytes(text, expected):
    assert parse_quantity(text, "bytes") == expected


@pytest.mark.parametrize("text,expected", [
    ("1.56T", 1.56e12),
    ("105.8G", 105.8e9),
    ("2.5TFLOPs", 2.5e12),
])
def test_parse_count(text, expected):
    assert parse_count(text) == expected


@pytest.mark.parametrize("kind,text", [
    ("bytes", "10GB/s"),        # rate suffix forbidden on sizes
    ("bytes", "10Gbps"),
    ("bytes", "10"),            # unit required
    ("bytes", "10GiB"),         # no binary prefixes
    ("bytes", "-1GB"),
    ("bandwidth", "fast"),
    ("bandwidth", "0GB/s"),     # bandwidths strictly positive
    ("bandwidth", "10G"),       # bits-or-bytes ambiguous
    ("bandwidth", "10TFLOPs"),
    ("flops_rate", "10GB/s"),
    ("flops_rate", "0TFLOPs"),
    ("flops_rate", "12"),
])
def test_rejects_malformed(kind, text):
    with pytest.raises(QuantityError):
        parse_quantity(text, kind)


def test_rejects_unknown_kind():
    with pytest.raises(QuantityError):
        parse_quantity("10GB", "volume")


def test_count_rejects_rates():
    with pytest.raises(QuantityError):
        parse_count("11TFLOPs/s")
    with pytest.raises(QuantityError):
        parse_count("330700000000")


@given(st.floats(min_value=1e-6, max_value=1e18, allow_nan=False, allow_infinity=False),
       st.sampled_from(["bytes", "bandwidth", "flops_rate"]))
def test_format_parse_roundtrip_exact(value, kind):
    assert parse_quantity(format_quantity(value, kind), kind) == value


def test_format_zero_bytes():
    assert parse_quantity(format_quantity(0.0, "bytes"), "bytes") == 0.0
    with pytest.raises(QuantityError):
        format_quantity(0.0, "bandwidth")
