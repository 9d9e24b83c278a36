"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.  The randomized campaigns are property-based at desk
scale; the channel checks are closed-form regressions plus optimizer runs.
"""

import math
import time

import numpy as np
import pytest

from schatten_lab import (
    blockmat,
    channel_lab as ch,
    inequality_lab as iq,
    schatten_core as core,
)

GROSS_EQ_TOL = 1e-12
EQUALITY_TOL = 1e-10
FUZZ_TOL = 1e-8
LEMMA_TOL = 1e-9
FD_TOL = 1e-4


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_1_theorem1_fuzz():
    t0 = time.time()
    spec = iq.FuzzSpec(inequality="thm1", trials=10_000,
                       dims=(1, 2, 3, 4, 5, 6), seed=101)
    records = iq.fuzz_suite(spec)
    elapsed = time.time() - t0
    errors = [r for r in records if r.error is not None]
    violations = [r for r in records
                  if r.error is None and r.margin < -FUZZ_TOL * r.scale]
    worst = min(r.margin / r.scale for r in records if r.error is None)
    ok = (not errors and not violations and len(records)
          == 10_000 * len(iq.DEFAULT_P_GRID) and elapsed < 300.0)
    _report(1, ok,
            f"{len(records)} records, worst margin/scale {worst:.2e}, "
            f"{len(errors)} errors, {elapsed:.0f}s")


def test_criterion_2_equality_cases():
    rng = np.random.default_rng(202)
    worst1 = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        blk = blockmat.sample_positive_block(n, rng)
        for rec in iq.theorem1_records(blk, (1.0, 2.0)):
            worst1 = max(worst1, abs(rec.margin) / rec.scale)
    worst2 = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        blk = blockmat.sample_general_block(n, rng)
        rec = iq.check_theorem2(blk, 2.0)
        worst2 = max(worst2, abs(rec.margin) / rec.scale)
    ok = worst1 <= EQUALITY_TOL and worst2 <= EQUALITY_TOL
    _report(2, ok, f"max |margin|/scale: thm1 {worst1:.2e}, thm2 {worst2:.2e}")


def test_criterion_3_theorem2_fuzz():
    t0 = time.time()
    spec = iq.FuzzSpec(inequality="thm2", trials=10_000, dims=(1, 2, 3, 4),
                       p_grid=(1.0, 1.2, 1.5, 1.8, 2.0, 2.5, 3.5, 6.0, 10.0),
                       seed=303)
    records = iq.fuzz_suite(spec)
    elapsed = time.time() - t0
    errors = [r for r in records if r.error is not None]
    violations = [r for r in records
                  if r.error is None and r.margin < -FUZZ_TOL * r.scale]
    worst = min(r.margin / r.scale for r in records if r.error is None)
    ok = not errors and not violations and len(records) == 10_000 * 9
    _report(3, ok,
            f"{len(records)} records, worst margin/scale {worst:.2e}, "
            f"{elapsed:.0f}s")


def test_criterion_4_gross_exhaustive():
    grid = np.arange(-10.0, 10.0 + 0.25, 0.5)
    p_grid = [round(1.0 + 0.1 * k, 10) for k in range(11)]
    violations = 0
    eq_worst = 0.0
    for p in p_grid:
        for a in grid:
            for b in grid:
                rec = iq.check_gross(float(a), float(b), p)
                if rec.margin < -FUZZ_TOL * rec.scale:
                    violations += 1
                if p == 2.0 or b == 0.0:
                    eq_worst = max(eq_worst, abs(rec.margin) / rec.scale)
    ok = violations == 0 and eq_worst <= GROSS_EQ_TOL
    _report(4, ok,
            f"{len(grid) ** 2 * len(p_grid)} points, {violations} violations, "
            f"equality residue {eq_worst:.2e}")


@pytest.mark.parametrize("family,seed", [("lemma2", 505), ("lemma3", 515),
                                         ("lemma4", 525)])
def test_criterion_5_lemma_fuzz(family, seed):
    spec = iq.FuzzSpec(inequality=family, trials=5000, dims=(2, 3),
                       p_grid=(1.05, 1.3, 1.5, 1.7, 1.95), seed=seed)
    records = iq.fuzz_suite(spec)
    errors = [r for r in records if r.error is not None]
    violations = [r for r in records
                  if r.error is None and r.margin < -LEMMA_TOL * r.scale]
    worst = min(r.margin / r.scale for r in records if r.error is None)
    ok = not errors and not violations and len(records) == 5000 * 5
    _report(5, ok, f"{family}: {len(records)} records, "
                   f"worst margin/scale {worst:.2e}")


def test_criterion_6_lemma5_finite_difference():
    spec = iq.FuzzSpec(inequality="lemma5", trials=1000, dims=(4,),
                       p_grid=(1.2, 1.5, 1.8, 2.0), seed=606)
    records = iq.fuzz_suite(spec)
    unstable = [r for r in records if r.error and "UNSTABLE" in r.error]
    other_errors = [r for r in records if r.error and "UNSTABLE" not in r.error]
    stable = [r for r in records if r.error is None]
    below = [r for r in stable if r.margin < -FD_TOL * r.scale]
    rate = len(unstable) / len(records)
    ok = not below and not other_errors and rate < 0.02
    _report(6, ok,
            f"{len(stable)} stable estimates, {len(below)} below threshold, "
            f"UNSTABLE rate {100 * rate:.2f}%")


def test_criterion_7_depolarizing_nu_regression():
    cfg = ch.OptConfig(restarts=8, max_iters=150, seed=707)
    worst = 0.0
    for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
        chan = ch.depolarizing(lam)
        for p in (1.5, 2.0, 3.0, 5.0, math.inf):
            got = ch.nu_p(chan, p, cfg).value
            want = ch.nu_p_depolarizing(lam, p)
            worst = max(worst, abs(got - want))
    ok = worst <= 1e-6
    _report(7, ok, f"25 (lambda, p) combinations, max |error| {worst:.2e}")


def test_criterion_8_depolarizing_product_multiplicativity():
    cfg = ch.OptConfig(restarts=12, max_iters=150, seed=808)
    rng = np.random.default_rng(2025)
    partners = [
        ("depolarizing(0.3)", ch.depolarizing(0.3)),
        ("depolarizing(0.9)", ch.depolarizing(0.9)),
        ("random unital qubit", ch.random_unital_qubit_channel(rng)),
    ]
    worst_rel_gap = -math.inf
    worst_margin = math.inf
    for _, phi in partners:
        for p in (2.0, 2.5, 3.0, 5.0):
            rec = ch.multiplicativity_gap(ch.depolarizing(0.5), phi, p, cfg)
            worst_rel_gap = max(worst_rel_gap, rec.gap / rec.nu_product)
            margin = ch.depolarizing_product_bound_check(
                phi, 0.5, p, 500, np.random.default_rng(880 + int(2 * p)), cfg)
            worst_margin = min(worst_margin, margin)
    ok = worst_rel_gap <= 1e-5 and worst_margin >= -1e-8
    _report(8, ok,
            f"max gap/nu_product {worst_rel_gap:.2e}, "
            f"min bound margin {worst_margin:.2e}")


def test_criterion_9_werner_holevo_counterexample():
    t0 = time.time()
    wh = ch.werner_holevo(3)
    cfg = ch.OptConfig(restarts=4, seed=909)
    gaps = {}
    for k in range(51):
        p = round(4.5 + 0.01 * k, 2)
        nu_single = ch.nu_p(wh, p, cfg)
        assert nu_single.converged
        gaps[p] = (ch.entangled_lower_bound(wh, wh, p)
                   - nu_single.value ** 2)
    elapsed = time.time() - t0
    signs = [gaps[p] > 0 for p in sorted(gaps)]
    changes = sum(1 for i in range(1, len(signs)) if signs[i] != signs[i - 1])
    first_positive = next((p for p in sorted(gaps) if gaps[p] > 0), None)
    gap_p4 = (ch.entangled_lower_bound(wh, wh, 4.0)
              - ch.nu_p(wh, 4.0, cfg).value ** 2)
    ok = (changes == 1 and first_positive is not None
          and 4.70 <= first_positive <= 4.90 and gap_p4 <= 0.0
          and gaps[5.0] > 0.0 and elapsed < 120.0)
    _report(9, ok,
            f"sign changes {changes}, crossing at p={first_positive}, "
            f"gap(4)={gap_p4:.2e}, gap(5)={gaps[5.0]:.2e}, {elapsed:.0f}s")


def test_criterion_10_oracle_equivalences():
    rng = np.random.default_rng(1010)
    # closed-form 2x2 norm vs the eigenvalue route
    worst_closed = 0.0
    p_choices = (1.0, 1.3, 1.7, 2.0, 2.9, 4.0, 9.0)
    for k in range(10_000):
        g = rng.standard_normal((2, 2))
        m = g @ g.T
        p = p_choices[k % len(p_choices)]
        got = blockmat.two_by_two_norm_closed_form(m, p)
        want = core.schatten_norm(m, p)
        worst_closed = max(worst_closed, abs(got - want) / max(want, 1e-300))

    # split-form identity vs assembled matrix on Hanner pairs
    worst_split = 0.0
    for k in range(1000):
        n = int(rng.integers(1, 4))
        blk = blockmat.sample_hanner_pair(n, rng)
        p = p_choices[k % len(p_choices)]
        rec = iq.check_hanner_form(blk, p)
        worst_split = max(worst_split, abs(rec.margin) / rec.scale)

    # sign averaging vs diagonal extraction
    worst_sign = 0.0
    for n in range(1, 7):
        a = blockmat.complex_gaussian(rng, n, n)
        got = blockmat.sign_average_diagonal(a)
        worst_sign = max(worst_sign,
                         float(np.max(np.abs(got - np.diag(np.diag(a))))))

    ok = worst_closed <= 1e-12 and worst_split <= 1e-9 and worst_sign <= 1e-12
    _report(10, ok,
            f"closed-form {worst_closed:.2e}, split-form {worst_split:.2e}, "
            f"sign-average {worst_sign:.2e}")
