"""Acceptance criteria: oracle- and property-based checks at desk scale.

Each criterion is a self-contained callable returning a
:class:`CriterionResult` with the measured numbers, so the same registry
backs both the pytest acceptance module and the ``verify`` CLI subcommand.
Everything is deterministic (fixed seeds) and runs in seconds.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import dispersion as dsp
from . import evolution as ev
from . import traveling_wave as tw
from .params import PhysicalParams
from .spectral import (
    PeriodicGrid,
    SpectralField,
    apply_cos_h_dx,
    apply_sin_h_dx,
    taylor_cos_h_dx,
    taylor_sin_h_dx,
)

HALF_WIDTH_FACTOR = 2.0 * math.acosh(math.sqrt(2.0))  # half-width * B of c*sech^2(BX/2)


@dataclass(frozen=True)
class CriterionResult:
    cid: str
    title: str
    passed: bool
    details: dict

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.cid}: {self.title}"


def _fit_speed_grid(B: float = 0.5, h: float = 1.0) -> PeriodicGrid:
    return PeriodicGrid(L=80.0, N=512)


def _align_shape_l2(ref_values: np.ndarray, state: ev.EvolutionState) -> float:
    """Relative L2 shape deviation after the best periodic shift.

    Cross-correlates the evolved field with the reference, interpolates the
    correlation peak to sub-grid accuracy, shifts the reference spectrally,
    and returns ||evolved - shifted_ref||_2 / ||ref||_2.
    """
    grid = state.grid
    f0 = np.fft.rfft(ref_values)
    f1 = state.field.coeffs
    corr = np.fft.irfft(f1 * np.conj(f0), n=grid.N)
    j = int(np.argmax(corr))
    ym, y0, yp = corr[(j - 1) % grid.N], corr[j], corr[(j + 1) % grid.N]
    denom = ym - 2.0 * y0 + yp
    off = 0.5 * (ym - yp) / denom if denom != 0.0 else 0.0
    shift = (j + off) * grid.dx
    shifted = np.fft.irfft(f0 * np.exp(-1j * grid.k * shift), n=grid.N)
    return float(np.linalg.norm(state.field.values - shifted) / np.linalg.norm(ref_values))


def _measure_half_width(sol: tw.SeriesSolution) -> float:
    """|X| where the reconstructed profile drops to half its center value."""
    eta0 = abs(float(tw.reconstruct_profile(sol, 0.0)))
    target = 0.5 * eta0

    def f(x):
        return abs(float(tw.reconstruct_profile(sol, x))) - target

    a, b = 1e-6 / sol.B, 6.0 / sol.B
    for _ in range(80):
        mid = 0.5 * (a + b)
        if f(a) * f(mid) <= 0:
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


# --------------------------------------------------------------------------
# Criteria
# --------------------------------------------------------------------------


def criterion_1() -> CriterionResult:
    """Printed shallow recursion reproduces its closed form k/2^(k-1)."""
    B = h = 1.0
    sol = tw.recursion_shallow_printed(B, h, 30)
    k = np.arange(1, 31)
    closed = k * 0.5 ** (k - 1.0)
    # Compare in scaled arithmetic: beta_k against closed * r^(k-1).
    ref = closed * sol.scale ** (k - 1.0)
    rel = float(np.max(np.abs(sol.betas - ref) / np.abs(ref)))
    return CriterionResult(
        cid="1",
        title="printed shallow recursion matches closed form k/2^(k-1) (k<=30, 1e-12)",
        passed=rel <= 1e-12,
        details={"max_rel_gap": rel, "tolerance": 1e-12},
    )


def criterion_2() -> CriterionResult:
    """Printed-pipeline soliton: amplitude, radius, and sech^2 profile."""
    checks = {}
    ok = True
    for B, h in ((1.0, 1.0), (0.8, 1.1)):
        label = f"B={B:g},h={h:g}"
        scale3 = B * B * h**3
        sol = tw.build_solution(B, h, 200, mode=tw.MODE_PAPER_PRINTED, shallow=True)
        a1_rel = abs(sol.a1 - (-2.0 * scale3)) / (2.0 * scale3)
        R = tw.radius_estimate(sol)
        R_rel = abs(R.radius - 2.0 * scale3) / (2.0 * scale3)
        X = np.linspace(-20.0 / B, 20.0 / B, 801)
        eta = tw.reconstruct_profile(sol, X)
        target = (scale3 / 2.0) / np.cosh(B * X / 2.0) ** 2
        profile_err = float(np.max(np.abs(eta - target)))
        atol = 1e-10 * max(1.0, scale3 / 2.0)
        checks[label] = {
            "a1": sol.a1,
            "a1_rel_err": a1_rel,
            "radius": R.radius,
            "radius_rel_err": R_rel,
            "profile_max_abs_err": profile_err,
            "profile_atol": atol,
        }
        ok = ok and a1_rel <= 1e-8 and R_rel <= 0.02 and profile_err <= atol
    return CriterionResult(
        cid="2",
        title="printed shallow pipeline: a1=-2B^2h^3 (1e-8), R=2B^2h^3 (2%), "
        "profile (B^2h^3/2) sech^2(BX/2) (1e-10)",
        passed=ok,
        details=checks,
    )


def criterion_3() -> CriterionResult:
    """Residual oracle arbitration between derived and printed shallow modes."""
    B = h = 1.0
    derived = tw.build_solution(B, h, 60, mode=tw.MODE_STEADY_DERIVED, shallow=True)
    printed = tw.build_solution(B, h, 60, mode=tw.MODE_PAPER_PRINTED, shallow=True)
    rep_d = tw.residual_check(derived, "kdv_steady")
    rep_p = tw.residual_check(printed, "kdv_steady")
    derived_ok = rep_d.sup_abs <= 1e-8 * abs(rep_d.eta0) and rep_d.passed
    printed_fails = (rep_p.sup_rel >= 0.1) and not rep_p.passed
    return CriterionResult(
        cid="3",
        title="steady-equation arbitration: derived shallow residual <= 1e-8 scaled, "
        "printed fails at O(1)",
        passed=derived_ok and printed_fails,
        details={
            "derived_sup_abs": rep_d.sup_abs,
            "derived_bound": 1e-8 * abs(rep_d.eta0),
            "printed_sup_rel": rep_p.sup_rel,
            "discrepancy": "printed-mode shallow soliton (+B^2h^3/2 sech^2) does not "
            "satisfy the steady third-order equation, whose solitary wave is the "
            "depression -B^2h^3/4 sech^2; constant-factor/sign inconsistency of the "
            "printed forms, reported, not hidden",
        },
    )


def criterion_4() -> CriterionResult:
    """Both shallow modes produce sech^2 shapes of the predicted half-width."""
    B, h = 0.7, 1.0
    X = np.linspace(-15.0 / B, 15.0 / B, 1201)
    s = 1.0 / np.cosh(B * X / 2.0) ** 2
    checks = {}
    ok = True
    for mode in tw.MODES:
        sol = tw.build_solution(B, h, 80, mode=mode, shallow=True)
        eta = tw.reconstruct_profile(sol, X)
        c = float(np.dot(eta, s) / np.dot(s, s))
        ss_res = float(np.sum((eta - c * s) ** 2))
        ss_tot = float(np.sum((eta - np.mean(eta)) ** 2))
        r2 = 1.0 - ss_res / ss_tot
        hw = _measure_half_width(sol)
        hw_rel = abs(hw - HALF_WIDTH_FACTOR / B) / (HALF_WIDTH_FACTOR / B)
        checks[mode] = {"r_squared": r2, "half_width": hw, "half_width_rel_err": hw_rel}
        ok = ok and r2 >= 1.0 - 1e-10 and hw_rel <= 1e-3
    return CriterionResult(
        cid="4",
        title="sech^2 shape universality: R^2 >= 1-1e-10, half-width "
        "2*arccosh(sqrt(2))/B to 0.1%",
        passed=ok,
        details=checks,
    )


def criterion_5() -> CriterionResult:
    """Shallow generating-function coefficients are exactly the extremal n."""
    B = h = 1.0
    checks = {}
    ok = True
    for mode in tw.MODES:
        sol = tw.series_solution(B, h, 30, mode=mode, shallow=True)
        report = tw.koebe_diagnostic(sol, 30)
        checks[mode] = {
            "max_abs_deviation": report.max_abs_deviation,
            "radius_scale": report.radius_scale,
            "bieberbach_saturated": report.bieberbach_saturated,
        }
        ok = ok and report.max_abs_deviation <= 1e-12 and report.bieberbach_saturated
    return CriterionResult(
        cid="5",
        title="Koebe diagnostic: normalized shallow coefficients equal n (<=1e-12, n<=30)",
        passed=ok,
        details=checks,
    )


def criterion_6() -> CriterionResult:
    """Acoustic and capillary dispersion limits."""
    acoustic = PhysicalParams(h=1.0, g=9.81, sigma=0.0)
    k = 0.01 / acoustic.h
    acoustic_dev = abs(
        dsp.omega_squared(k, acoustic) / (acoustic.c0**2 * k**2) - 1.0
    )
    capillary = PhysicalParams(h=1.0, g=0.0, rho=1000.0, sigma=0.07)
    ks = np.linspace(0.01, 0.05, 5) / capillary.h
    cap_vals = dsp.omega_squared(ks, capillary) / (
        (capillary.h * capillary.sigma / capillary.rho) * ks**4
    )
    capillary_dev = float(np.max(np.abs(cap_vals - 1.0)))
    return CriterionResult(
        cid="6",
        title="dispersion limits: acoustic (1e-3 at kh=0.01) and capillary (1% at kh<=0.05)",
        passed=acoustic_dev <= 1e-3 and capillary_dev <= 0.01,
        details={"acoustic_rel_dev": float(acoustic_dev), "capillary_rel_dev": capillary_dev},
    )


def criterion_7() -> CriterionResult:
    """Multiplier operators against the nine-term Taylor operator oracle."""
    rng = np.random.default_rng(20260809)
    grid = PeriodicGrid(L=16.0, N=64)
    h = 0.95 * 2.0 / grid.k_max  # whole grid inside k*h <= 2
    worst_sin = worst_cos = 0.0
    for _ in range(100):
        values = rng.standard_normal(grid.N)
        field = SpectralField.from_values(grid, values)
        s_ref = taylor_sin_h_dx(field, h, 9)
        c_ref = taylor_cos_h_dx(field, h, 9)
        s = apply_sin_h_dx(field, h)
        c = apply_cos_h_dx(field, h)
        worst_sin = max(
            worst_sin,
            float(np.max(np.abs(s.values - s_ref.values)) / np.max(np.abs(s.values))),
        )
        worst_cos = max(
            worst_cos,
            float(np.max(np.abs(c.values - c_ref.values)) / np.max(np.abs(c.values))),
        )
    return CriterionResult(
        cid="7",
        title="operator fidelity vs 9-term Taylor oracle (kh<=2, 100 random fields, 1e-8)",
        passed=worst_sin <= 1e-8 and worst_cos <= 1e-8,
        details={"worst_sin_rel": worst_sin, "worst_cos_rel": worst_cos, "kh_max": grid.k_max * h},
    )


def criterion_8() -> CriterionResult:
    """Full derived recursion approaches its shallow limit at order (Bh)^2."""
    h = 1.0
    bhs = np.array([0.2, 0.1, 0.05, 0.025])
    gaps = []
    for bh in bhs:
        B = bh / h
        full = tw.recursion_steady_derived(B, h, 10)
        shal = tw.recursion_shallow_derived(B, h, 10)
        af, ash = full.alphas, shal.alphas
        gaps.append(float(np.max(np.abs(af[1:] - ash[1:]) / np.abs(ash[1:]))))
    slope = float(np.polyfit(np.log(bhs), np.log(gaps), 1)[0])
    return CriterionResult(
        cid="8",
        title="shallow-limit convergence of the full recursion: gap ~ (Bh)^2, slope 2±0.2",
        passed=abs(slope - 2.0) <= 0.2,
        details={"slope": slope, "gaps": [float(g) for g in gaps], "bh_values": list(map(float, bhs))},
    )


def criterion_9() -> CriterionResult:
    """Evolution: exact mean conservation, RK4 order, exact linear phase."""
    params = PhysicalParams(h=1.0, g=9.81)

    # (a) mean (k=0 mode) drift over 1e4 steps at N=512
    grid = PeriodicGrid(L=80.0, N=512)
    xs = grid.x
    vals = 0.05 + 0.02 * np.cos(3 * np.pi * xs / grid.L) + 0.01 * np.sin(5 * np.pi * xs / grid.L)
    state = ev.EvolutionState(
        field=SpectralField.from_values(grid, vals), t=0.0, params=params, dt=5e-3,
        equation="gkdv",
    )
    traj = ev.evolve(state, T=50.0, record_every=500)  # 10^4 steps
    mass_drift = traj.mass_drift_rel

    # (b) RK4 self-convergence order on a nonlinear run
    grid_c = PeriodicGrid(L=80.0, N=256)
    sol = tw.build_solution(0.5, 1.0, 60, mode=tw.MODE_STEADY_DERIVED, shallow=True)
    prof = tw.reconstruct_profile(sol, grid_c.x - grid_c.x0)
    finals = []
    for dt in (0.04, 0.02, 0.01, 0.005):
        st = ev.EvolutionState(
            field=SpectralField.from_values(grid_c, prof), t=0.0, params=params, dt=dt,
            equation="gkdv", filter_on=False,
        )
        finals.append(ev.evolve(st, T=4.0, record_every=10**9).final_state.field.values)
    orders = [
        float(np.log2(np.linalg.norm(finals[i] - finals[i + 1])
                      / np.linalg.norm(finals[i + 1] - finals[i + 2])))
        for i in range(2)
    ]

    # (c) linear-part phase exactness
    grid_l = PeriodicGrid(L=8.0 * np.pi, N=128)
    k0 = grid_l.k[4]
    eta0 = SpectralField.from_values(grid_l, 1e-3 * np.cos(k0 * (grid_l.x - grid_l.x0)))
    st_l = ev.EvolutionState(
        field=eta0, t=0.0, params=params, dt=0.01, equation="gkdv",
        linear_only=True, filter_on=False,
    )
    final = ev.evolve(st_l, T=5.0, record_every=100).final_state
    omega = (params.c0 / params.h) * math.sinh(k0 * params.h)
    expected = eta0.coeffs[4] * np.exp(-1j * omega * final.t)
    phase_err = abs(np.angle(final.field.coeffs[4] / expected))

    ok = (
        mass_drift <= 1e-10
        and all(abs(o - 4.0) <= 0.3 for o in orders)
        and phase_err <= 1e-8
    )
    return CriterionResult(
        cid="9",
        title="evolution: mean drift <= 1e-10 over 1e4 steps, RK4 order 4±0.3, "
        "linear phase exact to 1e-8",
        passed=ok,
        details={"mass_drift_rel": mass_drift, "rk4_orders": orders, "phase_err": float(phase_err)},
    )


def criterion_10() -> CriterionResult:
    """Soliton transits: shallow depression under kdv, full profile under gkdv."""
    B, h = 0.5, 1.0
    params = PhysicalParams(h=h, g=9.81)

    grid = PeriodicGrid(L=80.0, N=512)
    sol = tw.build_solution(B, h, 60, mode=tw.MODE_STEADY_DERIVED, shallow=True)
    prof = tw.reconstruct_profile(sol, grid.x - grid.x0)
    state = ev.EvolutionState(
        field=SpectralField.from_values(grid, prof), t=0.0, params=params, dt=0.02,
        equation="kdv",
    )
    v_pred = params.c0 * (1.0 - (B * h) ** 2 / 6.0)
    traj = ev.evolve(state, T=2.0 * grid.L / v_pred, record_every=50)
    kdv_shape = _align_shape_l2(prof, traj.final_state)
    kdv_speed_rel = abs(traj.measured_speed - v_pred) / v_pred

    grid_g = PeriodicGrid(L=80.0, N=256)
    sol_f = tw.build_solution(B, h, 120, mode=tw.MODE_STEADY_DERIVED, shallow=False)
    prof_f = tw.reconstruct_profile(sol_f, grid_g.x - grid_g.x0, check_tol=1e-5)
    state_g = ev.EvolutionState(
        field=SpectralField.from_values(grid_g, prof_f), t=0.0, params=params, dt=0.02,
        equation="gkdv",
    )
    v_g = params.c0 * math.sin(B * h) / (B * h)
    traj_g = ev.evolve(state_g, T=2.0 * grid_g.L / v_g, record_every=50)
    gkdv_shape = _align_shape_l2(prof_f, traj_g.final_state)

    ok = kdv_shape <= 1e-3 and kdv_speed_rel <= 5e-3 and gkdv_shape <= 0.01
    return CriterionResult(
        cid="10",
        title="soliton transit: kdv shape L2 <= 1e-3 at speed c0(1-(Bh)^2/6) ± 0.5%; "
        "filtered full profile under gkdv <= 1%",
        passed=ok,
        details={
            "kdv_shape_l2": kdv_shape,
            "kdv_speed": traj.measured_speed,
            "kdv_speed_rel_err": kdv_speed_rel,
            "gkdv_shape_l2": gkdv_shape,
            "gkdv_speed": traj_g.measured_speed,
        },
    )


def criterion_11() -> CriterionResult:
    """rhs difference between the full and third-order equations scales as h^2.

    The sweep follows the model's own smallness regime: the amplitude is tied
    to the depth (a = 0.05 h) while the band-limited shape stays fixed.  At
    fixed amplitude the gap is dominated by terms of different h-orders and
    no clean power law exists.
    """
    grid = PeriodicGrid(L=64.0, N=256)
    xs = grid.x
    shape = np.cos(3 * np.pi * xs / grid.L) + 0.4 * np.cos(5 * np.pi * xs / grid.L + 1.0)
    hs = np.array([0.4, 0.2, 0.1, 0.05])
    ratios = []
    for h in hs:
        params = PhysicalParams(h=float(h), g=9.81)
        eta = SpectralField.from_values(grid, 0.05 * h * shape)
        r_g = ev.rhs_gkdv(eta, params)
        r_k = ev.rhs_kdv(eta, params)
        ratios.append(
            float(np.linalg.norm(r_g.values - r_k.values) / np.linalg.norm(r_k.values))
        )
    slope = float(np.polyfit(np.log(hs), np.log(ratios), 1)[0])
    return CriterionResult(
        cid="11",
        title="full-equation rhs approaches the third-order rhs at order h^2 (slope 2±0.2)",
        passed=abs(slope - 2.0) <= 0.2,
        details={"slope": slope, "ratios": ratios, "h_values": list(map(float, hs))},
    )


CRITERIA: list[tuple[str, Callable[[], CriterionResult]]] = [
    ("1", criterion_1),
    ("2", criterion_2),
    ("3", criterion_3),
    ("4", criterion_4),
    ("5", criterion_5),
    ("6", criterion_6),
    ("7", criterion_7),
    ("8", criterion_8),
    ("9", criterion_9),
    ("10", criterion_10),
    ("11", criterion_11),
]

TITLES = {
    "1": "printed shallow recursion matches its closed form",
    "2": "printed pipeline reproduces the stated soliton numbers",
    "3": "residual oracle arbitrates derived vs printed shallow modes",
    "4": "sech^2 shape universality and half-width",
    "5": "Koebe generating-function diagnostic",
    "6": "acoustic and capillary dispersion limits",
    "7": "operator fidelity vs Taylor-truncation oracle",
    "8": "shallow-limit convergence of the full recursion",
    "9": "evolution conservation and accuracy",
    "10": "soliton transit experiments",
    "11": "full-equation to third-order rhs limit",
}


def run_criterion(cid: str) -> CriterionResult:
    for c, fn in CRITERIA:
        if c == cid:
            return fn()
    raise KeyError(f"no criterion with id {cid!r}")


def run_all(ids: list[str] | None = None) -> list[CriterionResult]:
    """Run the requested criteria (all by default), in id order.

    The GKDV_THREADS environment variable caps the worker threads used to
    run independent criteria concurrently; results are always reported in
    registry order, so parallelism cannot change the output.
    """
    wanted = [c for c in CRITERIA if ids is None or c[0] in ids]
    if ids is not None:
        missing = set(ids) - {c for c, _ in CRITERIA}
        if missing:
            raise KeyError(f"unknown criterion ids: {sorted(missing)}")
    threads = max(1, int(os.environ.get("GKDV_THREADS", "1")))
    if threads == 1:
        return [fn() for _, fn in wanted]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn) for _, fn in wanted]
        return [f.result() for f in futures]


def run_tampered_arbitration() -> CriterionResult:
    """Self-check of the arbitration logic: demand the printed-mode shallow
    profile satisfy the steady third-order equation.  This must FAIL, naming
    the documented discrepancy; a pass here would mean the oracle lost its
    discriminating power."""
    printed = tw.build_solution(1.0, 1.0, 60, mode=tw.MODE_PAPER_PRINTED, shallow=True)
    rep = tw.residual_check(printed, "kdv_steady")
    return CriterionResult(
        cid="3-tampered",
        title="tampered expectation: printed-mode profile satisfies the steady "
        "third-order equation",
        passed=rep.passed,  # genuinely False: sup_rel is O(1)
        details={
            "printed_sup_rel": rep.sup_rel,
            "explanation": "the printed soliton +B^2h^3/2 sech^2(BX/2) is not a "
            "solution of the steady third-order equation (its solitary wave is "
            "-B^2h^3/4 sech^2); the documented constant-factor/sign discrepancy",
        },
    )
