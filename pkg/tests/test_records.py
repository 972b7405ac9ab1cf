import json

import pytest
from hypothesis import given, strategies as hst

from unitalbound.verify.records import (
    BOUND_FIELDS,
    BoundRecord,
    CampaignConfig,
    CheckRecord,
    ConfigError,
    emit,
    load_csv,
    load_json,
    read_config_file,
    render,
)

HEADER = "trial,n,q,channel_kind,d_alpha,d_alphabeta,bound,margin_ab,margin_a,beta_trace,seed"

finite = hst.floats(allow_nan=False, allow_infinity=False, width=64)
bound_records = hst.builds(
    BoundRecord,
    trial=hst.integers(0, 10**6),
    n=hst.integers(2, 64),
    q=finite,
    channel_kind=hst.sampled_from(["unitary", "premeasurement", "mixed-unitary", "composed"]),
    d_alpha=finite,
    d_alphabeta=finite,
    bound=finite,
    margin_ab=finite,
    margin_a=finite,
    beta_trace=finite,
    seed=hst.integers(0, 2**64 - 1),
)


def test_header_is_exact():
    assert ",".join(BOUND_FIELDS) == HEADER
    assert render([]) == HEADER + "\n"


def test_one_record_gives_two_lines():
    rec = BoundRecord(0, 2, 0.1, "unitary", 0.0, 0.01, 0.2, 0.19, 0.01, 1.0, 7)
    lines = render([rec]).splitlines()
    assert len(lines) == 2
    assert lines[1] == "0,2,0.10000000000000001,unitary,0,0.01,0.20000000000000001,0.19,0.01,1,7"


def test_empty_json():
    assert json.loads(render([], "json")) == []


def test_unknown_format():
    with pytest.raises(ConfigError):
        render([], "xml")


@given(hst.lists(bound_records, max_size=5))
def test_csv_round_trip_bit_exact(tmp_path_factory, recs):
    path = tmp_path_factory.mktemp("csv") / "out.csv"
    emit(recs, path, "csv")
    assert load_csv(path) == recs


@given(hst.lists(bound_records, max_size=5))
def test_json_round_trip_bit_exact(tmp_path_factory, recs):
    path = tmp_path_factory.mktemp("json") / "out.json"
    emit(recs, path, "json")
    assert load_json(path) == recs


def test_check_record_round_trip(tmp_path):
    recs = [CheckRecord("overlap", 3, 4, -0.125, -0.125, 0.0, 1e-9, True),
            CheckRecord("fidelity", 4, 5, 0.5, 0.4, 0.1, 1e-9, False)]
    emit(recs, tmp_path / "c.csv", "csv", CheckRecord)
    assert load_csv(tmp_path / "c.csv", CheckRecord) == recs
    assert render([], "csv", CheckRecord) == "check,trial,n,value,reference,residual,tol,passed\n"


def test_emit_reports_path(tmp_path):
    bad = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        emit([], bad)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(suite="nope"),
        dict(suite="entropy", n_min=1),
        dict(suite="entropy", n_min=5, n_max=4),
        dict(suite="entropy", n_max=65),
        dict(suite="entropy", trials=0),
        dict(suite="entropy", seed=-1),
        dict(suite="entropy", tol=0.0),
        dict(suite="entropy", tol=float("nan")),
        dict(suite="entropy", format="xml"),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        CampaignConfig(**kwargs)


def test_read_config_file(tmp_path):
    p = tmp_path / "cfg.ini"
    p.write_text("n-min = 3\nn_max = 5\ntrials = 12\nseed = 9\ntol = 1e-8\nout = x.csv\nformat = json\n")
    assert read_config_file(p) == dict(n_min=3, n_max=5, trials=12, seed=9, tol=1e-8,
                                       out_path="x.csv", format="json")


@pytest.mark.parametrize("text", ["color = red\n", "trials = many\n"])
def test_read_config_file_errors(tmp_path, text):
    p = tmp_path / "cfg.ini"
    p.write_text(text)
    with pytest.raises(ConfigError):
        read_config_file(p)
