import csv
import io
import statistics
from fractions import Fraction

import pytest

import frsc

BTC = 100_000_000


def test_worked_example():
    settlement, after = frsc.apply_block([(2016 * BTC, 2016, 1_000_000)], 2 * BTC, 600_000)
    assert settlement["next_claim"] == BTC
    assert settlement["reward_total"] == 180_000_000
    assert settlement["deposit_total"] == 120_000_000
    assert after == [(201_620_000_000, 2016, 1_000_000)]


def test_genesis_and_windows():
    assert frsc.init_genesis(5_000_000_000, 700_000, [(2016, 1_000_000)]) == [(7_056_000_000_000, 2016, 1_000_000)]
    specs = [(1008, 70_000), (2016, 190_000), (4032, 280_000), (8064, 460_000)]
    assert frsc.effective_lambda(specs) == 5292
    assert frsc.effective_lambda([(3, 500_000), (4, 500_000)]) == Fraction(7, 2)
    assert frsc.parity_fees(35 * BTC, 700_000) == 50 * BTC
    assert frsc.partial_claim(100, 7) == 14


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        frsc.init_genesis(1, 700_000, [(10, 500_000), (20, 600_000)])
    with pytest.raises(ValueError):
        frsc.parity_fees(1, 0)
    with pytest.raises(RuntimeError):
        frsc.parse_scenario("0,1\n")
    with pytest.raises(ValueError):
        frsc.run_exp4([])


def test_scenarios():
    segs = frsc.triangle_wave_scenario(6000)
    assert frsc.parse_scenario(frsc.format_scenario(segs)) == segs
    assert frsc.arrived_fees([(0, 10), (100, 0)], 250.0) == 1000


def test_arrivals():
    draws = frsc.sample_intervals(42, 1 / 600, 100_000)
    assert 588 <= statistics.fmean(draws) <= 612


def test_series_csv():
    text = frsc.run_series(frsc.long_term_scenario(), 700_000, [(2016, 1_000_000)], blocks=200)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 200
    assert rows[0]["next_claim_sat"] == str(35 * BTC)
    assert list(rows[0]) == [
        "height", "found_at_s", "fees_in_mempool_sat", "block_value_sat", "next_claim_sat", "claim_c1_sat", "nu_c1_sat",
    ]
    again = frsc.run_series(frsc.long_term_scenario(), 700_000, [(2016, 1_000_000)], blocks=200)
    assert again == text


def test_exp4_small():
    out = frsc.run_exp4([0, 1_000_000], miners=4, blocks=100, games=10, threads=1)
    rows = list(csv.DictReader(io.StringIO(out["summary_csv"])))
    assert {r["strategy"] for r in rows if r["compliant_fraction"] == "1"} == {"default_compliant"}
    assert out["crossing_ppm"] in (None, 0, 1_000_000)
