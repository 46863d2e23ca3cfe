"""Acceptance gate: the eleven contract criteria, one printed line each.

Every test prints `ACCEPTANCE <n> <name>: PASS|FAIL (<measurements>)` before
asserting, and the lines are replayed in the terminal summary.  Two criteria
are left red on purpose rather than weakening the checks:

* criterion 3 pins the quadratic inverted-pair closed form at the constant
  (M - 1); direct enumeration of the sum gives (M - 2) for every admissible
  parameter set, so the stated value misses by exactly 1.
* criterion 10 requires the subconvex-normalized envelope to grow strictly
  slower than the convexity-normalized one between M = 100 and M = 3000.
  At this range both envelopes are driven by record values of |L|, and the
  measured growth factors order the other way (about 1.57 vs 1.28).

The failure messages carry the measured numbers.
"""

import math
import time
from pathlib import Path

import numpy as np

from deltasums.characters import character, enumerate_characters
from deltasums.expsums import (
    frak_c,
    frak_c_closed_form,
    frak_k,
    gauss_sum,
    sqrt_cancellation_profile,
    trivial_delta,
    weil_bound_profile,
)
from deltasums.identities import (
    beta_sum_evaluation_check,
    delta_detection_expansion,
    hecke_amplifier_identity,
    make_pipeline_config,
    poisson_r_sum_check,
    voronoi_step_check,
)
from deltasums.lfunctions import (
    burgess_sweep,
    delta_sequence,
    divisor_sequence,
    l_value_dirichlet,
    l_value_twist,
    monotone_envelope,
    write_sweep_csv,
)
from deltasums.modular import divisors, primes_in
from deltasums.transforms import bump_window, decay_check, plateau_window

ARTIFACTS = Path(__file__).resolve().parent / "artifacts"
RESULT_LINES: list[str] = []  # replayed by the conftest terminal summary


def _report(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    RESULT_LINES.append(line)


def test_criterion_01_trivial_delta_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    m = 1500
    for q in range(1, 501):
        for d in range(-1000, 1001):
            got = trivial_delta(m + d, m, q)
            want = 1.0 if d % q == 0 else 0.0
            dev = abs(got - want)
            if dev > worst:
                worst = dev
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 60.0
    _report(1, "trivial_delta_exactness", ok, f"max_dev={worst:.3e} wall={elapsed:.1f}s")
    assert worst < 1e-10
    assert elapsed < 60.0


def test_criterion_02_frak_k_exact_case():
    t0 = time.perf_counter()
    worst = 0.0
    for M in primes_in(5, 100):
        for chi in enumerate_characters(M, "primitive"):
            target = -np.conj(chi.value_table())
            for r in range(1, M):
                dev = abs(frak_k(chi, r, 1, M).value - target[r])
                if dev > worst:
                    worst = dev
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 120.0
    _report(2, "frak_k_exact_case", ok, f"max_dev={worst:.3e} wall={elapsed:.1f}s")
    assert worst < 1e-9
    assert elapsed < 120.0


def test_criterion_03_paired_sum_closed_forms():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst_routed = 0.0  # cases (i), (ii) and the non-quadratic branch of (iii)
    worst_quad_stated = 0.0  # quadratic branch pinned at chi(nbar*r2*beta)*(M-1)
    worst_quad_m2 = 0.0  # the same data against the (M-2) constant
    for M in (5, 7, 11, 13):
        units = list(range(1, M))
        for chi in enumerate_characters(M, "primitive"):
            for r1 in units:
                r1bar = pow(r1, -1, M)
                for r2 in units:
                    alpha = int(rng.integers(1, M))
                    beta = int(rng.integers(1, M))
                    # case (i): M | n
                    got = frak_c(chi, r1, r2, alpha, beta, M).value
                    want = frak_c_closed_form(chi, r1, r2, alpha, beta, M).value
                    worst_routed = max(worst_routed, abs(got - want))
                    # case (ii): n = beta*r1bar - alpha*r2bar, skipping M | n
                    n2 = (beta * r1bar - alpha * pow(r2, -1, M)) % M
                    if n2 != 0:
                        got = frak_c(chi, r1, r2, alpha, beta, n2).value
                        want = frak_c_closed_form(chi, r1, r2, alpha, beta, n2).value
                        worst_routed = max(worst_routed, abs(got - want))
            # case (iii): r1 = nbar*beta, r2 = -nbar*alpha forced by (alpha, beta, n)
            for _ in range(40):
                alpha, beta, n = (int(x) for x in rng.integers(1, M, size=3))
                nbar = pow(n, -1, M)
                r1 = (nbar * beta) % M
                r2 = (-nbar * alpha) % M
                got = frak_c(chi, r1, r2, alpha, beta, n).value
                if chi.is_quadratic:
                    base = chi(nbar * r2 * beta)
                    worst_quad_stated = max(worst_quad_stated, abs(got - base * (M - 1)))
                    worst_quad_m2 = max(worst_quad_m2, abs(got - base * (M - 2)))
                else:
                    want = frak_c_closed_form(chi, r1, r2, alpha, beta, n).value
                    worst_routed = max(worst_routed, abs(got - want))
    elapsed = time.perf_counter() - t0
    worst = max(worst_routed, worst_quad_stated)
    ok = worst < 1e-9 and elapsed < 120.0
    _report(
        3,
        "paired_sum_closed_forms",
        ok,
        f"routed_dev={worst_routed:.3e} quad_stated_dev={worst_quad_stated:.3e} "
        f"quad_m2_dev={worst_quad_m2:.3e} wall={elapsed:.1f}s",
    )
    assert worst < 1e-9, (
        f"stated quadratic value chi(nbar*r2*beta)*(M-1) misses the enumerated sum "
        f"by {worst_quad_stated:.6f}; the same data matches the (M-2) constant "
        f"within {worst_quad_m2:.1e}; cases (i)/(ii)/non-quadratic (iii) agree "
        f"within {worst_routed:.1e}"
    )
    assert elapsed < 120.0


def test_criterion_04_sqrt_cancellation_envelopes():
    t0 = time.perf_counter()
    weil_ratio, weil_p = weil_bound_profile(200)
    k_prof = sqrt_cancellation_profile("frak_k", 101, 500, seed=1)
    c_prof = sqrt_cancellation_profile("frak_c", 101, 500, seed=1)
    elapsed = time.perf_counter() - t0
    ok = weil_ratio <= 1.0 and k_prof.max_ratio <= 10.0 and c_prof.max_ratio <= 10.0 and elapsed < 60.0
    _report(
        4,
        "sqrt_cancellation_envelopes",
        ok,
        f"weil={weil_ratio:.6f}@p={weil_p} frak_k={k_prof.max_ratio:.3f} "
        f"frak_c={c_prof.max_ratio:.3f} wall={elapsed:.1f}s",
    )
    assert weil_ratio <= 1.0
    assert k_prof.max_ratio <= 10.0
    assert c_prof.max_ratio <= 10.0
    assert elapsed < 60.0


def test_criterion_05_gauss_sum_magnitude():
    t0 = time.perf_counter()
    worst = 0.0
    for M in primes_in(5, 500):
        root = math.sqrt(M)
        for chi in enumerate_characters(M, "primitive"):
            dev = abs(abs(gauss_sum(chi)) - root)
            if dev > worst:
                worst = dev
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 60.0
    _report(5, "gauss_sum_magnitude", ok, f"max_dev={worst:.3e} wall={elapsed:.1f}s")
    assert worst < 1e-9
    assert elapsed < 60.0


def test_criterion_06_voronoi_identity():
    t0 = time.perf_counter()
    configs = [(1, 3, 40.0), (1, 4, 50.0), (2, 5, 60.0)]
    worst = {"delta_form": 0.0, "divisor": 0.0}
    for kind, seq in (
        ("delta_form", delta_sequence(6000, cache=None)),
        ("divisor", divisor_sequence(6000)),
    ):
        for a, c, N in configs:
            rep = voronoi_step_check(seq, a, c, N)
            worst[kind] = max(worst[kind], rep.details["relative"])
    elapsed = time.perf_counter() - t0
    hit = max(worst.values())
    ok = hit < 1e-6 and elapsed < 120.0
    _report(
        6,
        "voronoi_identity",
        ok,
        f"delta_form_rel={worst['delta_form']:.3e} divisor_rel={worst['divisor']:.3e} "
        f"wall={elapsed:.1f}s",
    )
    assert hit < 1e-6
    assert elapsed < 120.0


def test_criterion_07_pipeline_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for kind in ("divisor", "delta_form"):
        for M in (11, 101):
            for N in (10.0, 40.0):
                for L in (2, 3):
                    cfg = make_pipeline_config(kind=kind, M=M, N=N, L=L, P=5)
                    worst = max(worst, hecke_amplifier_identity(cfg).residual)
                    count += 1
        for L, P in ((2, 5), (3, 7)):
            cfg = make_pipeline_config(kind=kind, M=101, N=10.0, L=L, P=float(P))
            worst = max(worst, delta_detection_expansion(cfg).residual)
            count += 1
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and count == 20 and elapsed < 180.0
    _report(
        7,
        "pipeline_exactness",
        ok,
        f"configs={count} max_residual={worst:.3e} wall={elapsed:.1f}s",
    )
    assert count == 20
    assert worst < 1e-8
    assert elapsed < 180.0


def test_criterion_08_beta_sum_and_poisson():
    t0 = time.perf_counter()
    checked = 0
    for M in (5, 7):
        for chi in enumerate_characters(M, "primitive"):
            for p in (2, 3):
                for c in divisors(p * M):
                    for alpha in (a for a in range(1, c + 1) if math.gcd(a, c) == 1):
                        for ell in range(M):
                            for r in range(p * M):
                                assert beta_sum_evaluation_check(
                                    chi, c, p, alpha, ell, r, tol=1e-9
                                )
                                checked += 1
    poisson = poisson_r_sum_check(character(11, 1), 11, 3, 1, 2, 30.0)
    elapsed = time.perf_counter() - t0
    ok = poisson.residual < 1e-6 and elapsed < 60.0
    _report(
        8,
        "beta_sum_and_poisson",
        ok,
        f"beta_checks={checked} poisson_residual={poisson.residual:.3e} wall={elapsed:.1f}s",
    )
    assert poisson.residual < 1e-6
    assert elapsed < 60.0


def test_criterion_09_l_value_oracles():
    t0 = time.perf_counter()
    worst_a = 0.0
    for M in (5, 7, 11, 101, 499):
        for chi in enumerate_characters(M, "primitive"):
            dev = abs(
                l_value_dirichlet(chi, "hurwitz_oracle") - l_value_dirichlet(chi, "smoothed")
            )
            if dev > worst_a:
                worst_a = dev
    seq = divisor_sequence(24_000_000)
    worst_b = 0.0
    for M in primes_in(5, 101):
        for chi in enumerate_characters(M, "primitive"):
            dev = abs(
                l_value_twist(seq, chi, "smoothed")
                - l_value_twist(seq, chi, "dirichlet_square")
            )
            if dev > worst_b:
                worst_b = dev
    elapsed = time.perf_counter() - t0
    ok = worst_a < 1e-6 and worst_b < 1e-5 and elapsed < 300.0
    _report(
        9,
        "l_value_oracles",
        ok,
        f"oracle_dev={worst_a:.3e} divisor_square_dev={worst_b:.3e} wall={elapsed:.1f}s",
    )
    assert worst_a < 1e-6
    assert worst_b < 1e-5
    assert elapsed < 300.0


def test_criterion_10_burgess_scaling():
    t0 = time.perf_counter()
    records = burgess_sweep("dirichlet", 3, 3000, chars="quadratic")
    ARTIFACTS.mkdir(exist_ok=True)
    csv_path = ARTIFACTS / "burgess_quadratic_3000.csv"
    write_sweep_csv(records, csv_path)

    ms, env = monotone_envelope(records)
    i100 = int(np.searchsorted(ms, 100, side="right")) - 1
    env_100, env_final = float(env[i100]), float(env[-1])

    conv: dict[int, float] = {}
    for r in records:
        conv[r.M] = max(conv.get(r.M, 0.0), abs(r.l_value) / r.M**0.25)
    cms = np.array(sorted(conv))
    cenv = np.maximum.accumulate(np.array([conv[m] for m in cms]))
    j100 = int(np.searchsorted(cms, 100, side="right")) - 1
    growth_b = env_final / env_100
    growth_c = float(cenv[-1]) / float(cenv[j100])

    elapsed = time.perf_counter() - t0
    bounded = env_final < 10.0 * env_100
    slower = growth_b < growth_c
    ok = bounded and slower and elapsed < 600.0
    _report(
        10,
        "burgess_scaling",
        ok,
        f"rows={len(records)} env100={env_100:.6f} env_final={env_final:.6f} "
        f"growth={growth_b:.4f} convexity_growth={growth_c:.4f} "
        f"csv={csv_path.name} wall={elapsed:.1f}s",
    )
    assert bounded, f"envelope exploded: {env_final:.4f} >= 10 * {env_100:.4f}"
    assert slower, (
        f"subconvex-normalized envelope grew by {growth_b:.4f} between M=100 and "
        f"M=3000, not strictly less than the convexity-normalized growth "
        f"{growth_c:.4f}; at this range both envelopes track record values of "
        f"|L| (|L| records grow roughly like M^0.32 here), so the normalization "
        f"with the larger exponent always shows the larger relative growth"
    )
    assert elapsed < 600.0


def test_criterion_11_transform_decay():
    t0 = time.perf_counter()
    v_rep = decay_check(
        "fourier_dual", 4.0, np.geomspace(1.0, 100.0, 13), window=plateau_window()
    )
    seq = divisor_sequence(6000)
    w_rep = decay_check(
        "voronoi_transform",
        4.0,
        np.geomspace(1.0, 50.0, 9),
        seq=seq,
        sign=-1,
        window=bump_window(),
    )
    resids = [
        voronoi_step_check(seq, 1, 3, 40.0, quad_order=3, panel_scale=s).details["relative"]
        for s in (1.0, 2.0, 4.0, 8.0)
    ]
    ratios = []
    for coarse, fine in zip(resids, resids[1:]):
        if coarse > 1e-7:  # stop rating refinements at the quadrature floor
            ratios.append(coarse / fine)
    elapsed = time.perf_counter() - t0
    ok = (
        v_rep.finite
        and w_rep.finite
        and v_rep.constant > 0.0
        and w_rep.constant > 0.0
        and bool(ratios)
        and all(r >= 4.0 for r in ratios)
        and elapsed < 60.0
    )
    _report(
        11,
        "transform_decay",
        ok,
        f"fourier_C={v_rep.constant:.3e} voronoi_C={w_rep.constant:.3e} "
        f"refinement_ratios={[f'{r:.1f}' for r in ratios]} wall={elapsed:.1f}s",
    )
    assert v_rep.finite and v_rep.constant > 0.0
    assert w_rep.finite and w_rep.constant > 0.0
    assert ratios and all(r >= 4.0 for r in ratios), resids
    assert elapsed < 60.0
