"""Stability criterion, envelope bound, decay classification, order comparison.

For the lagged fractional equation of order 0 < nu < 1 the per-step
criterion |c(t) + nu| <= nu guarantees the envelope bound

    |E(t)| <= H_{nu-1}(t, rho(a))    for all t in N_a,

and the envelope tends to 0, so every solution does too.  The bound is tight:
c = 0 gives E equal to the envelope exactly.  ``bound_check`` verifies the
bound pointwise with slack 1e-12 * (1 + envelope) to absorb float rounding.

Finite traces cannot witness a limit, so decay classification is a windowed
heuristic with fixed thresholds: compared with the initial window and the
global maximum, the last window must drop below 0.5x the initial window's
maximum and 0.1x the global maximum to classify ``tends_to_zero``, and a
last-window maximum above 10x the first sample classifies ``unbounded``.
Algebraic tails n^(nu-1) are slow, so classification runs want n_max >= 2000
(default window n_max / 10); close to nu = 1 no desk-scale horizon can pass
the 0.1x clause (the envelope decays like n^(-0.1) at nu = 0.9).

``tail_stat`` reports the measured algebraic tail exponent: the log-log
slope of |u(n)| over the last window (about nu - 1 for envelope-like traces,
0 for oscillating or constant ones).  It is diagnostic only; no acceptance
claim is made about it.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Sequence

import json
import math

import numpy as np

from .solver import (
    CoefficientLike,
    FirstOrderForm,
    LinearProblem,
    SolutionTrace,
    coefficient_array,
    envelope_sequence,
    mittag_leffler_seq,
    solve_first_order,
    solve_general,
    solve_lagged,
)

__all__ = [
    "BOUND_SLACK",
    "THREADS_ENV_VAR",
    "DecayClass",
    "OrderComparison",
    "ScanCell",
    "StabilityReport",
    "bound_check",
    "compare_orders",
    "criterion_check",
    "decay_classify",
    "default_window",
    "stability_scan",
    "tail_exponent",
    "write_report_json",
    "write_scan_csv",
]

BOUND_SLACK = 1e-12
THREADS_ENV_VAR = "NABLA_FRAC_THREADS"


class DecayClass(str, enum.Enum):
    TENDS_TO_ZERO = "tends_to_zero"
    BOUNDED_NONVANISHING = "bounded_nonvanishing"
    UNBOUNDED = "unbounded"


def _check_unit_order(nu: float) -> None:
    if not math.isfinite(nu) or not 0.0 < nu < 1.0:
        raise ValueError(f"order must lie strictly in (0, 1), got {nu}")


def default_window(trace_len: int) -> int:
    """Default classification window: a tenth of the trace, at least 1."""
    return max(1, trace_len // 10)


def criterion_check(c: CoefficientLike, nu: float) -> np.ndarray:
    """Per-step booleans for |c(t) + nu| <= nu.

    For constant c this is the interval test -2 nu <= c <= 0.  Scalars give a
    single-element result.
    """
    _check_unit_order(nu)
    arr = np.atleast_1d(np.asarray(c, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"coefficients must be scalar or one-dimensional, got shape {arr.shape}")
    return np.abs(arr + nu) <= nu


def decay_classify(trace: Sequence[float] | np.ndarray, window: int) -> DecayClass:
    """Windowed decay classification with fixed thresholds (scale invariant).

    The trace must span at least two windows.  An identically zero trace
    classifies tends_to_zero.
    """
    arr = np.abs(np.asarray(trace, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"trace must be one-dimensional, got shape {arr.shape}")
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if arr.size < 2 * window:
        raise ValueError(f"trace of length {arr.size} is shorter than two windows of {window}")
    global_max = float(arr.max())
    if global_max == 0.0:
        return DecayClass.TENDS_TO_ZERO
    last_max = float(arr[-window:].max())
    head_max = float(arr[:window].max())
    first = float(arr[0]) if arr[0] > 0.0 else global_max
    if last_max > 10.0 * first:
        return DecayClass.UNBOUNDED
    if last_max < 0.5 * head_max and last_max < 0.1 * global_max:
        return DecayClass.TENDS_TO_ZERO
    return DecayClass.BOUNDED_NONVANISHING


def tail_exponent(trace: Sequence[float] | np.ndarray, window: int) -> float:
    """Log-log slope of |u(n)| over the last window; nan when undefined.

    Zero samples and the n = 0 sample are excluded; at least two usable
    points are needed for a slope.
    """
    arr = np.abs(np.asarray(trace, dtype=float))
    if window < 1 or arr.size < window:
        raise ValueError(f"window {window} does not fit a trace of length {arr.size}")
    n = np.arange(arr.size)[-window:]
    v = arr[-window:]
    mask = (v > 0.0) & (n > 0)
    if int(mask.sum()) < 2:
        return float("nan")
    slope = np.polyfit(np.log(n[mask]), np.log(v[mask]), 1)[0]
    return float(slope)


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Criterion, bound, and classification diagnostics for one solve."""

    nu: float
    base: int
    criterion_holds: np.ndarray
    bound_ok: np.ndarray
    decay_class: DecayClass
    tail_stat: float
    values: np.ndarray
    envelope: np.ndarray

    @property
    def criterion_all(self) -> bool:
        return bool(np.all(self.criterion_holds))

    @property
    def bound_all(self) -> bool:
        return bool(np.all(self.bound_ok))


def bound_check(
    c: CoefficientLike, nu: float, n_max: int, base: int = 0, window: int | None = None
) -> StabilityReport:
    """Run the lagged equation and check the envelope bound pointwise.

    bound_ok[n] tests |E(a+n)| <= H_{nu-1}(a+n, rho(a)) + 1e-12 (1 + H).
    When criterion_holds is all true, bound_ok must be all true; the converse
    does not hold (the criterion is sufficient, not necessary).
    """
    _check_unit_order(nu)
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    carr = coefficient_array(c, n_max)
    values = mittag_leffler_seq(carr, nu, n_max, base)
    envelope = envelope_sequence(nu, n_max)
    bound_ok = np.abs(values) <= envelope + BOUND_SLACK * (1.0 + envelope)
    win = default_window(values.size) if window is None else window
    return StabilityReport(
        nu=nu,
        base=base,
        criterion_holds=criterion_check(carr, nu),
        bound_ok=bound_ok,
        decay_class=decay_classify(values, win),
        tail_stat=tail_exponent(values, win),
        values=values,
        envelope=envelope,
    )


@dataclass(frozen=True, eq=False)
class OrderComparison:
    """First-order and fractional solves of the same coefficient, side by side."""

    nu: float
    form: FirstOrderForm
    first_order: SolutionTrace
    fractional: SolutionTrace
    first_order_class: DecayClass
    fractional_class: DecayClass
    first_order_tail: float
    fractional_tail: float

    def verdict(self) -> dict:
        return {
            "kind": "comparison_verdict",
            "nu": self.nu,
            "form": self.form.value,
            "first_order": self.first_order_class.value,
            "fractional": self.fractional_class.value,
            "first_order_tail": _none_if_nan(self.first_order_tail),
            "fractional_tail": _none_if_nan(self.fractional_tail),
        }


def compare_orders(
    c: CoefficientLike,
    nu: float,
    form: FirstOrderForm | str,
    u0: float,
    n_max: int,
    base: int = 0,
    window: int | None = None,
) -> OrderComparison:
    """Solve the first-order equation and its fractional counterpart.

    The counterpart keeps the same right-hand side: ``on_u_lag`` pairs with
    the lagged fractional equation, ``on_u_t`` with the undelayed one
    (p = c).  Decay classes are computed with a shared window.
    """
    _check_unit_order(nu)
    form = FirstOrderForm(form)
    first = solve_first_order(c, form, u0, n_max, base)
    if form is FirstOrderForm.ON_U_LAG:
        frac = solve_lagged(c, nu, u0, n_max, base)
    else:
        frac = solve_general(LinearProblem(nu, base, p=c, q=0.0, g=0.0, u0=u0), n_max)
    win = default_window(len(first)) if window is None else window
    return OrderComparison(
        nu=nu,
        form=form,
        first_order=first,
        fractional=frac,
        first_order_class=decay_classify(first.values, win),
        fractional_class=decay_classify(frac.values, win),
        first_order_tail=tail_exponent(first.values, win),
        fractional_tail=tail_exponent(frac.values, win),
    )


@dataclass(frozen=True)
class ScanCell:
    """One (nu, c) cell of a stability scan."""

    nu: float
    c: float
    decay_class: DecayClass
    tail_stat: float


def _worker_count(max_workers: int | None) -> int:
    if max_workers is not None:
        return max(1, int(max_workers))
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR}={raw!r} is not an integer") from None


def stability_scan(
    nu_grid: Sequence[float],
    c_grid: Sequence[float],
    n_max: int,
    window: int | None = None,
    max_workers: int | None = None,
) -> list[ScanCell]:
    """Classify the constant-coefficient lagged equation over a (nu, c) grid.

    Cells are returned in row-major order (nu outer, c inner) regardless of
    worker count; the cap defaults to the NABLA_FRAC_THREADS env var.
    """
    nus = [float(nu) for nu in nu_grid]
    for nu in nus:
        _check_unit_order(nu)
    cs = [float(c) for c in c_grid]
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    win = default_window(n_max + 1) if window is None else window
    pairs = [(nu, c) for nu in nus for c in cs]

    def cell(pair: tuple[float, float]) -> ScanCell:
        nu, c = pair
        values = mittag_leffler_seq(c, nu, n_max)
        return ScanCell(
            nu=nu,
            c=c,
            decay_class=decay_classify(values, win),
            tail_stat=tail_exponent(values, win),
        )

    workers = _worker_count(max_workers)
    if workers == 1:
        return [cell(pair) for pair in pairs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(cell, pairs))


def write_scan_csv(cells: Sequence[ScanCell], stream: IO[str]) -> None:
    """Write ``nu,c,decay_class,tail_stat`` rows.

    The grid axes print in shortest round-trip form (so a requested nu of 0.3
    reads back as ``0.3``); the tail statistic keeps 17 significant digits.
    Output is deterministic either way.
    """
    stream.write("nu,c,decay_class,tail_stat\n")
    for cell in cells:
        stream.write(
            f"{cell.nu!r},{cell.c!r},{cell.decay_class.value},{cell.tail_stat:.17g}\n"
        )


def _none_if_nan(x: float) -> float | None:
    return None if math.isnan(x) else float(x)


def write_report_json(report: StabilityReport, stream: IO[str]) -> None:
    """Write criterion, bound, and classification arrays as a JSON document."""
    doc = {
        "kind": "stability_report",
        "nu": report.nu,
        "base": report.base,
        "criterion_holds": [bool(b) for b in report.criterion_holds],
        "bound_ok": [bool(b) for b in report.bound_ok],
        "decay_class": report.decay_class.value,
        "tail_stat": _none_if_nan(report.tail_stat),
        "values": [float(v) for v in report.values],
        "envelope": [float(e) for e in report.envelope],
    }
    json.dump(doc, stream, indent=2)
    stream.write("\n")
