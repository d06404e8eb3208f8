import json

import pytest

from ftgfmul.bch_codec import DecodeStatus, build_code
from ftgfmul.errors import ConfigInvalid
from ftgfmul.fault_campaign import (OUTCOMES, CampaignConfig, run_campaign,
                                    run_protected_multiply)
from ftgfmul.gf_core import build_field
from ftgfmul.netlist import Fault
from ftgfmul.pb_multiplier import mul_reference


@pytest.fixture(scope="module")
def setup16():
    ctx = build_field(16)
    return ctx, build_code(16, 3, message_len=16)


def test_fault_free_product(setup16, rng):
    ctx, code = setup16
    for a, b in rng.integers(0, ctx.size, size=(20, 2)):
        A, B = ctx.element(int(a)), ctx.element(int(b))
        prod, out = run_protected_multiply(ctx, code, A, B)
        assert prod == mul_reference(A, B)
        assert out.status is DecodeStatus.NO_ERROR


def test_flips_within_capability_corrected(setup16):
    ctx, code = setup16
    A, B = ctx.element(0x1234), ctx.element(0xBEEF)
    prod, out = run_protected_multiply(ctx, code, A, B, flips=[0, code.parity_len + 3, code.length - 1])
    assert prod == mul_reference(A, B)
    assert out.status is DecodeStatus.CORRECTED


def test_output_gate_fault_corrected():
    ctx = build_field(4)
    code = build_code(4, 1, message_len=4)
    A, B = ctx.element(0b1011), ctx.element(0b0110)
    prod, out = run_protected_multiply(ctx, code, A, B, faults=[Fault("k4.H.o2", "flip")])
    assert prod == mul_reference(A, B)
    assert out.positions == (code.parity_len + 2,)


def test_message_too_short_for_product():
    ctx = build_field(8)
    with pytest.raises(ConfigInvalid):
        run_protected_multiply(ctx, build_code(4, 1, message_len=4), ctx.element(1), ctx.element(1))


def test_zero_weight_campaign():
    rep = run_campaign(CampaignConfig(m=16, t=3, trials=500, seed=1))
    assert rep.tallies["no_error"] == 500
    assert rep.tallies["product_correct"] == 500


def test_weight_t_campaign_on_31_16():
    rep = run_campaign(CampaignConfig(m=5, t=3, message_len=16, trials=10_000, weight=3, seed=2,
                                      chunk_size=1024))
    assert rep.code["n"] == 31 and rep.code["k"] == 16 and rep.code["shortened_by"] == 0
    assert rep.tallies["corrected_exact"] == 10_000
    assert rep.tallies["product_correct"] == 10_000


def test_beyond_t_never_silently_correct():
    rep = run_campaign(CampaignConfig(m=8, t=2, trials=2000, weight=3, seed=3))
    assert rep.tallies["corrected_exact"] == 0
    assert rep.tallies["no_error"] == 0
    assert rep.tallies["miscorrected"] + rep.tallies["uncorrectable"] == 2000
    assert sum(rep.fractions().values()) == pytest.approx(1.0)


def test_determinism_and_worker_independence():
    kw = dict(m=8, t=2, trials=700, weight=2, seed=11, chunk_size=128)
    one = run_campaign(CampaignConfig(**kw)).to_json()
    assert run_campaign(CampaignConfig(**kw)).to_json() == one
    parallel = run_campaign(CampaignConfig(workers=2, **kw)).to_dict()
    serial = json.loads(one)
    for key in ("tallies", "by_weight", "code", "metrics"):
        assert json.loads(json.dumps(parallel[key])) == serial[key]
    assert run_campaign(CampaignConfig(**{**kw, "seed": 12})).to_json() != one


def test_gate_mode_weights_consistent():
    rep = run_campaign(CampaignConfig(m=8, t=2, trials=1500, source="gate", seed=4))
    for w, tally in rep.by_weight.items():
        w = int(w)
        assert sum(tally[k] for k in OUTCOMES) == tally["trials"]
        if w == 0:
            assert tally["no_error"] == tally["trials"]
        elif w <= 2:
            assert tally["corrected_exact"] == tally["trials"]
            assert tally["product_correct"] == tally["trials"]
    assert sum(int(w) > 0 for w in rep.by_weight) >= 1
    assert rep.metrics["multiplier"]["census"]["XOR"] == 0


def test_report_layout(tmp_path):
    out = tmp_path / "rep.json"
    rep = run_campaign(CampaignConfig(m=4, t=1, trials=64, weight=1, seed=5, output=str(out)))
    doc = json.loads(out.read_text())
    assert doc["report_version"] == 1
    assert doc["tallies"]["trials"] == 64
    assert "wall_clock_s" not in doc
    csv_text = (tmp_path / "rep.csv").read_text().splitlines()
    assert csv_text[0].startswith("weight,no_error")
    assert csv_text[-1].startswith("all,")
    assert rep.to_dict()["code"]["m"] == 4
    timed = run_campaign(CampaignConfig(m=4, t=1, trials=8, record_timing=True))
    assert timed.to_dict()["wall_clock_s"] >= 0


@pytest.mark.parametrize("bad", [
    {"m": 8, "t": 2, "trials": 0},
    {"m": 8, "t": 2, "trials": 5, "source": "laser"},
    {"m": 8, "t": 2, "trials": 5, "fault_models": ["melt"]},
    {"m": 8, "t": 2, "trials": 5, "weight": 10_000},
    {"m": 8, "t": 2, "trials": 5, "colour": "red"},
    {"m": 8, "t": 2, "trials": "many"},
    {"m": 8, "t": 2, "trials": 5, "poly": "1FF"},
    {"m": 8, "t": 200, "trials": 5},
])
def test_config_rejected(bad):
    with pytest.raises(ConfigInvalid):
        CampaignConfig.from_dict(bad)


def test_config_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"m": 4, "t": 1, "trials": 10, "fault_models": ["sa0"]}))
    cfg = CampaignConfig.from_file(str(path))
    assert cfg.fault_models == ("sa0",)
    assert CampaignConfig.from_dict(cfg.to_dict()) == cfg
    path.write_text("[1, 2]")
    with pytest.raises(ConfigInvalid):
        CampaignConfig.from_file(str(path))
    with pytest.raises(ConfigInvalid):
        CampaignConfig.from_file(str(tmp_path / "missing.json"))
