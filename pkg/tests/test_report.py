import json

import pytest

from conftest import CORPUS
from mondcert.config import Config
from mondcert.errors import ResourceLimitExceeded
from mondcert.germfile import parse_germ_text, read_germ
from mondcert.report import SCHEMA, analyze, decode_dim, dumps, encode_dim, loads, render_text, verify_line

TOP_KEYS = {"schema", "input", "config", "germ", "image", "oracle", "invariants", "unfolding", "verdict",
            "mu_I", "global_check", "consistency", "notes"}


@pytest.fixture(scope="module")
def s1_report():
    return analyze(read_germ(CORPUS / "s1.germ"))


def test_schema_keys(s1_report):
    assert set(s1_report) == TOP_KEYS
    assert s1_report["schema"] == SCHEMA
    for key in ("m_dim", "k_dim", "ae_codim", "ae_codim_mond", "ae_codim_tangent"):
        num = s1_report["invariants"][key]
        assert set(num) == {"value", "route"} and num["route"]


def test_s1_values(s1_report):
    inv = s1_report["invariants"]
    assert inv["ae_codim"]["value"] == 1 and inv["m_dim"]["value"] == 1 and inv["k_dim"]["value"] == 0
    assert s1_report["verdict"] == "CertifiedEquality" and s1_report["mu_I"] == 1
    assert s1_report["oracle"]["value"] == 1 and s1_report["oracle"]["heuristic"] is True
    assert all(v is not False for v in s1_report["consistency"].values())
    assert verify_line(s1_report) == "CertifiedEquality codim=1 mu_I=1"


def test_json_round_trip_is_identity(s1_report):
    text = dumps(s1_report)
    assert dumps(loads(text)) == text
    assert loads(text) == json.loads(text)


def test_reports_are_deterministic():
    a = dumps(analyze(read_germ(CORPUS / "h2.germ")))
    b = dumps(analyze(read_germ(CORPUS / "h2.germ")))
    assert a == b


def test_infinity_is_a_string():
    rep = analyze(read_germ(CORPUS / "negative.germ"))
    assert rep["invariants"]["ae_codim"]["value"] == "inf"
    assert decode_dim("inf") == float("inf") and encode_dim(float("inf")) == "inf"
    assert rep["verdict"] == "NotApplicable"
    assert rep["oracle"]["value"] == "unstable-at-cap"
    assert "inf" in render_text(rep)


def test_global_check_section():
    rep = analyze(read_germ(CORPUS / "nonwh.germ"), Config(order="global-check"))
    gc = rep["global_check"]
    # the local counts see only the origin; the global ones also see the other singular points
    assert gc["m_dim"]["value"] >= rep["invariants"]["m_dim"]["value"]
    assert rep["verdict"] == "CertifiedInequality"


def test_timing_only_on_request():
    gf = read_germ(CORPUS / "crosscap.germ")
    assert "timing" not in analyze(gf)
    assert set(analyze(gf, Config(timing=True))["timing"]) >= {"invariants", "oracle"}


def test_unfolding_from_file_is_used():
    rep = analyze(read_germ(CORPUS / "s1_unfolded.germ"))
    assert rep["unfolding"]["source"] == "file" and rep["unfolding"]["params"] == ["u"]


def test_text_rendering(s1_report):
    text = render_text(s1_report)
    assert text.startswith("germ S1:")
    assert "verdict: CertifiedEquality codim=1 mu_I=1" in text


def test_pair_cap_becomes_resource_limit():
    gf = parse_germ_text("n = 2\nsource = x, y\ntarget = Y1, Y2, Y3\n"
                         "component = x\ncomponent = y^3\ncomponent = x*y + y^5\n")
    with pytest.raises(ResourceLimitExceeded):
        analyze(gf, Config(pair_cap=2))
