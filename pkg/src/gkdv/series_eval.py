"""Power-series evaluation with rational (Pade-type) acceleration.

Truncated coefficient series from the traveling-wave recursion must be
evaluated close to, on, and slightly beyond their convergence boundary: the
derivative-continuity root typically sits *on* the boundary, and residual
scans approach it.  Plain partial sums converge too slowly there (or not at
all), so evaluation switches to Wynn's epsilon algorithm on the tail of the
partial-sum sequence.  The even epsilon columns are values of Pade
approximants built from the same partial sums, which resum

  * geometrically convergent tails far faster than direct summation,
  * boundary points via their Abel limit,
  * mildly divergent points by analytic continuation

and are exact (up to round-off) whenever the underlying function is rational,
which is the case for every shallow-limit coefficient family here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeriesEvaluationError

#: Points with |t| below this are summed directly; the callers guarantee
#: enough terms that the geometric tail is below round-off there.
DIRECT_THRESHOLD = 0.5

#: Hard cap on |t| for accelerated evaluation; beyond this the analytic
#: continuation from a truncated series is not trustworthy.
MAX_ABS_T = 1.3

#: Number of partial sums fed to the epsilon table.
DEFAULT_WINDOW = 61


@dataclass(frozen=True)
class SeriesValue:
    """Value of a truncated power series at one point, with an error estimate."""

    value: float
    error: float
    accelerated: bool
    converged: bool


def partial_sums(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Partial sums S_m(t) = sum_{n=1..m} c_n t^n, shape (npoints, K).

    ``coeffs[j]`` is the coefficient of t**(j+1).
    """
    coeffs = np.asarray(coeffs, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    powers = t[:, None] ** np.arange(1, len(coeffs) + 1)[None, :]
    return np.cumsum(coeffs[None, :] * powers, axis=1)


def wynn_epsilon(sums: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Accelerate partial-sum rows with Wynn's epsilon recursion.

    Parameters
    ----------
    sums : ndarray, shape (npoints, M)
        Trailing partial sums, one sequence per row.

    Returns
    -------
    value, error, converged : ndarrays of shape (npoints,)
        Best even-column estimate per row, the disagreement between the
        closing approximant orders, and whether three consecutive orders
        agreed to 1e-9 relative.
    """
    sums = np.atleast_2d(np.asarray(sums, dtype=float))
    npts, M = sums.shape
    scale = np.maximum(np.max(np.abs(sums), axis=1), 1e-300)

    e_old = np.zeros((npts, M + 1))  # epsilon_{-1}
    e_cur = sums.copy()  # epsilon_0

    # Seed the per-row best estimate with the raw last sum and its sequential
    # difference, so a table artifact can only win by genuinely agreeing
    # better than direct summation did.
    best_val = sums[:, -1].copy()
    best_err = np.abs(sums[:, -1] - sums[:, -2]) if M >= 2 else np.full(npts, np.inf)
    prev_good = best_val.copy()
    prev_agree = np.zeros(npts, dtype=bool)
    converged = np.zeros(npts, dtype=bool)

    for level in range(1, M):
        diff = e_cur[:, 1:] - e_cur[:, :-1]
        # An exactly-zero difference means the sequence terminated at that
        # entry; substitute a tiny denominator so the recursion can continue.
        # The resulting huge entries are screened out of the candidate pool.
        tiny = 1e-300
        safe = np.where(np.abs(diff) < tiny, np.where(diff < 0, -tiny, tiny), diff)
        with np.errstate(over="ignore", invalid="ignore"):
            e_new = e_old[:, 1 : 1 + diff.shape[1]] + 1.0 / safe
        e_old, e_cur = e_cur, e_new
        if level % 2 == 0 and e_cur.shape[1] >= 1:
            cand = e_cur[:, -1]
            # Once a row has converged it is frozen: deeper columns of an
            # exactly-resummed (rational) sequence degenerate into 0/0 noise.
            active = ~converged
            good = active & np.isfinite(cand) & (np.abs(cand) <= 10.0 * scale)
            err = np.abs(cand - prev_good)
            ok = good & (err < best_err)
            best_val = np.where(ok, cand, best_val)
            best_err = np.where(ok, err, best_err)
            tol = 1e-9 * np.maximum(np.abs(cand), 1e-12 * scale)
            agree = good & (err <= tol)
            converged |= agree & prev_agree
            prev_agree = agree & active
            prev_good = np.where(good, cand, prev_good)

    return best_val, best_err, converged


def eval_series(
    coeffs: np.ndarray,
    t,
    window: int = DEFAULT_WINDOW,
    max_abs_t: float = MAX_ABS_T,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate sum_{n>=1} c_n t^n with automatic acceleration.

    Points with |t| <= 0.5 use the direct partial sum (tail below round-off
    for the series lengths used here); points with 0.5 < |t| <= max_abs_t go
    through the epsilon table.

    Returns ``(values, errors, accelerated_mask)`` as arrays shaped like t.

    Raises
    ------
    SeriesEvaluationError
        If any |t| exceeds ``max_abs_t``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    t_in = np.asarray(t, dtype=float)
    scalar = t_in.ndim == 0
    t_arr = np.atleast_1d(t_in)

    over = np.abs(t_arr) > max_abs_t
    if np.any(over):
        bad = float(t_arr[over][0])
        raise SeriesEvaluationError(
            f"evaluation point |t| = {abs(bad):.6g} exceeds the continuation "
            f"limit {max_abs_t}",
            diagnostics={"t": bad, "max_abs_t": max_abs_t},
        )

    sums = partial_sums(coeffs, t_arr)
    values = sums[:, -1].copy()
    # Direct-path error: geometric bound from the last term.
    last_term = np.abs(coeffs[-1] * t_arr ** len(coeffs))
    ratio = np.minimum(np.abs(t_arr), 0.999)
    errors = last_term * ratio / (1.0 - ratio)

    M = min(window, sums.shape[1])
    # Inside the closed unit disk the trailing sums carry the most complete
    # tail information; outside it they diverge and would force catastrophic
    # cancellation, so the leading window (smallest terms) is used instead.
    need_tail = (np.abs(t_arr) > DIRECT_THRESHOLD) & (np.abs(t_arr) <= 1.0)
    need_head = np.abs(t_arr) > 1.0
    for mask, block in ((need_tail, slice(-M, None)), (need_head, slice(0, M))):
        if np.any(mask):
            acc_val, acc_err, _conv = wynn_epsilon(sums[mask, block])
            values[mask] = acc_val
            errors[mask] = acc_err

    need = need_tail | need_head
    if scalar:
        return values[0], errors[0], need[0]
    return values, errors, need


def eval_series_checked(
    coeffs: np.ndarray,
    t,
    rtol: float = 1e-8,
    scale: float | None = None,
    window: int = DEFAULT_WINDOW,
) -> np.ndarray:
    """Like :func:`eval_series` but raises if the error estimate is not below
    ``rtol`` relative to ``scale`` (default: the largest |value|)."""
    values, errors, _ = eval_series(coeffs, t, window=window)
    ref = scale if scale is not None else float(np.max(np.abs(np.atleast_1d(values))))
    ref = max(ref, 1e-300)
    worst = float(np.max(np.atleast_1d(errors)))
    if worst > rtol * ref:
        raise SeriesEvaluationError(
            f"series evaluation error estimate {worst:.3g} exceeds "
            f"{rtol:.1g} * scale ({ref:.3g})",
            diagnostics={"worst_error": worst, "scale": ref, "rtol": rtol},
        )
    return values
