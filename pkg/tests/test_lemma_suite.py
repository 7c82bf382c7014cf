import dataclasses
import hashlib
import json
import math

import pytest

from hadarot import lemma_suite
from hadarot.errors import ConfigError
from hadarot.streams import Stream

EXPECTED_NAMES = (
    "product_difference",
    "cos_exp",
    "lipschitz_l1",
    "distance_to_set_lipschitz",
    "spherical_concentration",
    "sphere_gauss_ks",
    "gautschi_and_chi",
    "gauss_bridge_ks",
    "transform_moments",
    "b_fourth_moment",
)


def test_registry_names_and_order():
    assert lemma_suite.VERIFIER_NAMES == EXPECTED_NAMES


def test_full_suite_passes_with_zero_violations(suite_reports):
    assert [r.verifier for r in suite_reports.reports] == list(EXPECTED_NAMES)
    for report in suite_reports.reports:
        assert report.passed, f"{report.verifier} failed: min_slack={report.min_slack}"
        assert report.violations == 0
        assert report.instances > 0
        assert report.min_slack >= 0.0
    assert lemma_suite.suite_passed(suite_reports.reports)


def test_json_rows_are_complete_and_serializable(suite_reports):
    for report in suite_reports.reports:
        row = report.to_json_row()
        assert sorted(row.keys()) == [
            "details",
            "instances",
            "min_slack",
            "pass",
            "verifier",
            "violations",
        ]
        assert row["pass"] is True
        json.dumps(row)  # must not raise


def test_reports_are_frozen(suite_reports):
    with pytest.raises(dataclasses.FrozenInstanceError):
        suite_reports.reports[0].passed = False


def test_single_verifier_run_reproduces_the_full_suite_numbers(suite_reports):
    # selecting a subset must not reseed the surviving verifiers
    sub = lemma_suite.run_all(master_seed=0, only="transform_moments")
    assert len(sub) == 1
    assert sub[0].min_slack == suite_reports.by_name["transform_moments"].min_slack


def test_only_filter_normalizes_hyphens():
    sub = lemma_suite.run_all(only="cos-exp")
    assert [r.verifier for r in sub] == ["cos_exp"]
    assert sub[0].passed


def test_run_all_rejects_bad_arguments():
    with pytest.raises(ConfigError):
        lemma_suite.run_all(only="not_a_verifier")
    with pytest.raises(ConfigError):
        lemma_suite.run_all(allowance_scale=0.0)
    with pytest.raises(ConfigError):
        lemma_suite.run_all(allowance_scale=-1.0)
    with pytest.raises(ConfigError):
        lemma_suite.run_all(allowance_scale=float("nan"))


def test_deterministic_verifiers_are_bitwise_stable():
    a = lemma_suite.verify_cos_exp()
    b = lemma_suite.verify_cos_exp()
    assert a.min_slack == b.min_slack
    assert a.details == b.details
    c = lemma_suite.verify_gautschi_and_chi()
    d = lemma_suite.verify_gautschi_and_chi()
    assert c.min_slack == d.min_slack


def test_seeded_verifiers_are_bitwise_stable():
    a = lemma_suite.verify_transform_moments(Stream(9, 9), d=16, n_samples=2000)
    b = lemma_suite.verify_transform_moments(Stream(9, 9), d=16, n_samples=2000)
    assert a.min_slack == b.min_slack
    assert a.instances == b.instances


def test_allowance_scale_widens_monte_carlo_slack():
    tight = lemma_suite.verify_gauss_bridge_ks(
        Stream(3, 9), dims=(16,), n_samples=4000, allowance_scale=1.0
    )
    wide = lemma_suite.verify_gauss_bridge_ks(
        Stream(3, 9), dims=(16,), n_samples=4000, allowance_scale=2.0
    )
    assert wide.min_slack > tight.min_slack
    # every slack shifts by exactly one extra 2/sqrt(n) allowance
    assert wide.min_slack - tight.min_slack == pytest.approx(
        2.0 / math.sqrt(4000.0), abs=1e-12
    )


def test_sphere_gauss_details_carry_grid_hashes():
    report = lemma_suite.verify_sphere_gauss_ks(Stream(0, 1), dims=(4,), n_samples=3000)
    rows = report.details["per_dimension"]
    assert len(rows) == 1
    row = rows[0]
    assert row["d"] == 4
    assert len(row["grid_hash"]) == 16
    assert int(row["grid_hash"], 16) >= 0
    assert row["ks_monte_carlo"] <= row["bound"]
    assert row["sup_deterministic"] <= row["bound"]


def test_concentration_details_table_is_consistent():
    report = lemma_suite.verify_spherical_concentration(Stream(0, 2), d=64, n_samples=20_000)
    assert report.passed
    table = report.details["table"]
    assert [row["t"] for row in table] == [0.01, 0.02, 0.05, 0.1, 0.15]
    for row in table:
        assert 0.0 <= row["empirical"] <= 1.0
        assert row["bound"] > 0.0


def test_hash_name_matches_sha256_prefix():
    expected = int.from_bytes(hashlib.sha256(b"e1").digest()[:8], "big")
    assert lemma_suite.hash_name("e1") == expected
