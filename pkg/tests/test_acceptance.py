"""Acceptance run at full corpus sizes.

Each test prints one PASS/FAIL line (visible without -s) and then asserts
that every report in its group has zero violations. Equality throughout is
exact table equality.
"""

from __future__ import annotations

import time

import pytest

from awfslab.cli import (
    CorpusConfig,
    adjunction_checks,
    adjunction_corpus,
    agreement_checks,
    agreement_corpus,
    bc_checks,
    bc_corpus,
    frobenius_checks,
    lifting_checks,
    model_checks,
    sanity_checks,
    strong_checks,
)

LIFT_CASES = 200
FROBENIUS_CASES = 200
ADJUNCTION_CASES = 60
AGREEMENT_CASES = 120
BC_CASES = 60
STRONG_CASES = 60


def verdict(capsys, label: str, reports: dict, keys=None) -> list:
    keys = sorted(keys or reports)
    failing = [k for k in keys if not reports[k].ok]
    counts = ", ".join(f"{k}: {len(reports[k])}" for k in keys)
    with capsys.disabled():
        print(f"\n{'PASS' if not failing else 'FAIL'} {label} [{counts}]")
    return failing


def timed(fn, cfg):
    start = time.perf_counter()
    out = fn(cfg)
    return out, time.perf_counter() - start


def test_1_canonical_lifts(capsys):
    reports, _ = timed(lifting_checks, CorpusConfig(cases=LIFT_CASES))
    assert verdict(capsys, f"1 canonical lifts ({LIFT_CASES} cases)", reports) == []


def test_2_frobenius_construction(capsys):
    reports, _ = timed(frobenius_checks, CorpusConfig(cases=FROBENIUS_CASES))
    assert verdict(capsys, f"2 frobenius construction ({FROBENIUS_CASES} cases)", reports) == []


def test_3_adjunction(capsys):
    cfg = CorpusConfig(cases=ADJUNCTION_CASES)
    corpus = adjunction_corpus(cfg)
    assert len(corpus) >= 50
    assert all(len(f.total.objects) <= 3 * len(f.base.objects) for f, _, _ in corpus)
    reports, _ = timed(adjunction_checks, cfg)
    assert verdict(capsys, f"3 pullback left adjoint to pushforward ({len(corpus)} fibrations)", reports) == []


def test_4_filler_agreement(capsys):
    cfg = CorpusConfig(cases=AGREEMENT_CASES)
    assert len(agreement_corpus(cfg)) >= 100
    reports, _ = timed(agreement_checks, cfg)
    assert verdict(capsys, f"4 pushforward filler agreement ({AGREEMENT_CASES} problems)", reports) == []


def test_5_pullback_compatibility(capsys):
    cfg = CorpusConfig(cases=BC_CASES)
    assert len(bc_corpus(cfg)) >= 50
    reports, _ = timed(bc_checks, cfg)
    assert verdict(capsys, f"5 compatibility with pullback ({BC_CASES} squares)", reports) == []


@pytest.fixture(scope="module")
def strong_reports():
    return strong_checks(CorpusConfig(cases=STRONG_CASES))


def test_6a_strong_counit(capsys, strong_reports):
    assert verdict(capsys, f"6a lifted counit ({STRONG_CASES} cases)", strong_reports, ["lifted counit"]) == []


@pytest.mark.xfail(strict=True, reason="the lifted unit equality fails on the interval over a point")
def test_6b_strong_unit(capsys, strong_reports):
    assert verdict(capsys, f"6b lifted unit ({STRONG_CASES} cases)", strong_reports, ["lifted unit"]) == []


def test_7_groupoid_model(capsys):
    reports = model_checks(CorpusConfig())
    assert verdict(capsys, "7 groupoid model fixtures", reports) == []


def test_8_mutants_detected(capsys):
    reports = sanity_checks(CorpusConfig())
    assert verdict(capsys, "8 every mutant detected", reports) == []
