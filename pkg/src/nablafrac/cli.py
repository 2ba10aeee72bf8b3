"""Command-line front end: thin, deterministic wrappers over the library.

Exit codes: 0 success, 2 invalid parameters or malformed input, 3 input too
short for the requested operator, 4 singular step while solving.  All numeric
output is written with 17 significant digits, so identical invocations
produce byte-identical files.
"""

from __future__ import annotations

import json
import math

import click

from .grid import (
    DomainTooShortError,
    GridFunction,
    nabla_diff,
    nabla_frac_diff_composed,
    nabla_frac_diff_direct,
    nabla_sum,
    read_grid_csv,
    write_grid_csv,
)
from .monomial import monomial_sequence
from .solver import (
    FirstOrderForm,
    LinearProblem,
    SingularStepError,
    solve_first_order,
    solve_general,
    solve_lagged,
    write_trace_csv,
    write_trace_json,
)
from .stability import compare_orders, stability_scan, write_scan_csv

# coefficient presets: a one-liner for the oscillation-vs-decay comparison
# (c = 2 with --form on_u_t) and for the constant-vs-decay one (c = 0)
COEFFICIENT_PRESETS = {
    "demo-oscillation": 2.0,
    "demo-constant": 0.0,
}


class _DomainExit(click.ClickException):
    exit_code = 3


class _SingularExit(click.ClickException):
    exit_code = 4


def _resolve_coefficients(spec: str, n_max: int, base: int):
    """A coefficient spec is a constant, a preset name, or a grid CSV path."""
    if spec in COEFFICIENT_PRESETS:
        return COEFFICIENT_PRESETS[spec]
    try:
        value = float(spec)
    except ValueError:
        pass
    else:
        if not math.isfinite(value):
            raise click.UsageError(f"coefficient constant must be finite, got {spec}")
        return value
    try:
        stream = open(spec, "r")
    except OSError as exc:
        raise click.UsageError(
            f"coefficient spec {spec!r} is not a number, a preset "
            f"({', '.join(sorted(COEFFICIENT_PRESETS))}), or a readable CSV file: {exc}"
        ) from None
    with stream:
        grid = read_grid_csv(stream)
    if grid.base != base + 1:
        raise click.UsageError(
            f"coefficient CSV must start at index base+1 = {base + 1}, got {grid.base}"
        )
    if len(grid) < n_max:
        raise click.UsageError(
            f"coefficient CSV covers {len(grid)} steps, need n_max = {n_max}"
        )
    return grid.values[:n_max]


def _parse_axis(spec: str, name: str) -> list[float]:
    try:
        if ":" in spec:
            parts = [float(x) for x in spec.split(":")]
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = parts
            if step <= 0:
                raise ValueError("step must be positive")
            count = int(math.floor((stop - start) / step + 1e-9))
            if count < 0:
                raise ValueError("stop lies before start")
            return [round(start + i * step, 12) for i in range(count + 1)]
        return [float(x) for x in spec.split(",")]
    except ValueError as exc:
        raise click.UsageError(f"{name} spec {spec!r}: {exc}") from None


def _check_unit_nu(nu: float, what: str) -> None:
    if not math.isfinite(nu) or not 0.0 < nu < 1.0:
        raise click.UsageError(f"--nu must lie strictly in (0, 1) for {what}, got {nu}")


@click.group()
@click.version_option(package_name="nablafrac")
def main() -> None:
    """Discrete nabla fractional calculus toolkit."""


@main.command("monomial")
@click.option("--mu", type=float, required=True, help="Monomial order.")
@click.option("--n-max", type=int, required=True, help="Largest offset to emit.")
@click.option("--output", "-o", default="-", help="Output path ('-' for stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def monomial_cmd(mu: float, n_max: int, output: str, fmt: str) -> None:
    """Emit the Taylor monomial values at offsets 0..N-MAX as n,value rows."""
    if not math.isfinite(mu):
        raise click.UsageError(f"--mu must be finite, got {mu}")
    if n_max < 0:
        raise click.UsageError(f"--n-max must be >= 0, got {n_max}")
    values = monomial_sequence(mu, n_max)
    with click.open_file(output, "w") as stream:
        if fmt == "json":
            doc = {
                "kind": "monomial_sequence",
                "mu": mu,
                "n": list(range(n_max + 1)),
                "value": [float(v) for v in values],
            }
            json.dump(doc, stream, indent=2)
            stream.write("\n")
        else:
            stream.write("n,value\n")
            for n, v in enumerate(values):
                stream.write(f"{n},{v:.17g}\n")


@main.command("apply")
@click.option(
    "--op",
    type=click.Choice(["sum", "diff-direct", "diff-composed", "nabla"]),
    required=True,
    help="Operator to apply.",
)
@click.option("--nu", type=float, default=None, help="Order (required except for nabla).")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "-o", default="-", help="Output path ('-' for stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def apply_cmd(op: str, nu: float | None, input_path: str, output: str, fmt: str) -> None:
    """Apply a nabla operator to a grid CSV (header index,value).

    The output records the result's first defined index in a '# base=' comment
    line and re-ingests as apply input unchanged.
    """
    if op != "nabla":
        if nu is None:
            raise click.UsageError(f"--nu is required for --op {op}")
        if not math.isfinite(nu) or nu <= 0:
            raise click.UsageError(f"--nu must be positive and finite for apply, got {nu}")
        if op == "diff-direct" and float(nu).is_integer():
            raise click.UsageError(
                f"--op diff-direct needs a non-integer order, got {nu}; "
                "use diff-composed or nabla"
            )
    with open(input_path, "r") as stream:
        try:
            grid = read_grid_csv(stream)
        except ValueError as exc:
            raise click.UsageError(f"{input_path}: {exc}") from None
    try:
        if op == "sum":
            result = nabla_sum(grid, nu)
        elif op == "diff-direct":
            result = nabla_frac_diff_direct(grid, nu)
        elif op == "diff-composed":
            result = nabla_frac_diff_composed(grid, nu)
        else:
            result = nabla_diff(grid)
    except DomainTooShortError as exc:
        raise _DomainExit(str(exc)) from None
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    with click.open_file(output, "w") as stream:
        if fmt == "json":
            doc = {
                "kind": "operator_result",
                "op": op,
                "nu": nu,
                "base": result.base,
                "index": [result.base + i for i in range(len(result))],
                "value": [float(v) for v in result.values],
            }
            json.dump(doc, stream, indent=2)
            stream.write("\n")
        else:
            write_grid_csv(result, stream, record_base=True)


@main.command("solve")
@click.option("--nu", type=float, default=None, help="Fractional order in (0, 1).")
@click.option("--c", "c_spec", required=True, help="Coefficient: constant, preset, or CSV path.")
@click.option("--u0", type=float, default=1.0, show_default=True, help="Initial value u(base).")
@click.option("--n-max", type=int, default=100, show_default=True, help="Number of steps.")
@click.option("--base", type=int, default=0, show_default=True, help="Initial grid point a.")
@click.option(
    "--form",
    type=click.Choice([f.value for f in FirstOrderForm]),
    default=FirstOrderForm.ON_U_LAG.value,
    show_default=True,
    help="Right-hand-side form: coefficient times u(t-1) or times u(t).",
)
@click.option(
    "--order",
    type=click.Choice(["frac", "1"]),
    default="frac",
    show_default=True,
    help="Solve the fractional equation or its first-order comparison.",
)
@click.option("--output", "-o", default="-", help="Output path ('-' for stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def solve_cmd(
    nu: float | None,
    c_spec: str,
    u0: float,
    n_max: int,
    base: int,
    form: str,
    order: str,
    output: str,
    fmt: str,
) -> None:
    """Step a linear initial value problem and emit its trace.

    Rows are n,t,u,residual,envelope where the residual re-applies the
    operator to the computed solution.
    """
    if n_max < 1:
        raise click.UsageError(f"--n-max must be >= 1, got {n_max}")
    coeff = _resolve_coefficients(c_spec, n_max, base)
    try:
        if order == "1":
            trace = solve_first_order(coeff, form, u0, n_max, base)
        else:
            if nu is None:
                raise click.UsageError("--nu is required for the fractional solve")
            _check_unit_nu(nu, "solve")
            if form == FirstOrderForm.ON_U_LAG.value:
                trace = solve_lagged(coeff, nu, u0, n_max, base)
            else:
                trace = solve_general(LinearProblem(nu, base, p=coeff, q=0.0, g=0.0, u0=u0), n_max)
    except SingularStepError as exc:
        raise _SingularExit(str(exc)) from None
    with click.open_file(output, "w") as stream:
        if fmt == "json":
            write_trace_json(
                trace, stream, u0=u0, coefficients=c_spec, form=form, order=order
            )
        else:
            write_trace_csv(trace, stream)


@main.command("compare")
@click.option("--nu", type=float, required=True, help="Fractional order in (0, 1).")
@click.option("--c", "c_spec", required=True, help="Coefficient: constant, preset, or CSV path.")
@click.option("--u0", type=float, default=1.0, show_default=True)
@click.option("--n-max", type=int, default=5000, show_default=True)
@click.option("--base", type=int, default=0, show_default=True)
@click.option(
    "--form",
    type=click.Choice([f.value for f in FirstOrderForm]),
    default=FirstOrderForm.ON_U_LAG.value,
    show_default=True,
)
@click.option("--output", "-o", default="-", help="Two-trace CSV path ('-' for stdout).")
@click.option("--verdict", "-v", "verdict_path", default="-", help="Verdict JSON path.")
def compare_cmd(
    nu: float,
    c_spec: str,
    u0: float,
    n_max: int,
    base: int,
    form: str,
    output: str,
    verdict_path: str,
) -> None:
    """Solve first-order and fractional versions side by side.

    Writes an n,t,u_first_order,u_fractional CSV and a JSON verdict with both
    decay classifications.
    """
    if n_max < 20:
        raise click.UsageError(f"--n-max must be >= 20 for classification, got {n_max}")
    _check_unit_nu(nu, "compare")
    coeff = _resolve_coefficients(c_spec, n_max, base)
    try:
        comparison = compare_orders(coeff, nu, form, u0, n_max, base)
    except SingularStepError as exc:
        raise _SingularExit(str(exc)) from None
    with click.open_file(output, "w") as stream:
        stream.write("n,t,u_first_order,u_fractional\n")
        for n in range(n_max + 1):
            stream.write(
                f"{n},{base + n},{comparison.first_order.values[n]:.17g},"
                f"{comparison.fractional.values[n]:.17g}\n"
            )
    with click.open_file(verdict_path, "w") as stream:
        json.dump(comparison.verdict(), stream, indent=2)
        stream.write("\n")


@main.command("scan")
@click.option(
    "--nu-grid",
    default="0.1:0.9:0.1",
    show_default=True,
    help="Orders: comma list or start:stop:step.",
)
@click.option(
    "--c-grid",
    default="-2:0.5:0.05",
    show_default=True,
    help="Constant coefficients: comma list or start:stop:step.",
)
@click.option("--n-max", type=int, default=2000, show_default=True)
@click.option("--output", "-o", default="-", help="Output path ('-' for stdout).")
def scan_cmd(nu_grid: str, c_grid: str, n_max: int, output: str) -> None:
    """Classify decay over a (nu, c) grid; emits nu,c,decay_class,tail_stat.

    Worker threads are capped by the NABLA_FRAC_THREADS environment variable
    (default 1); the output ordering never depends on it.
    """
    nus = _parse_axis(nu_grid, "--nu-grid")
    cs = _parse_axis(c_grid, "--c-grid")
    for nu in nus:
        _check_unit_nu(nu, "scan")
    if n_max < 20:
        raise click.UsageError(f"--n-max must be >= 20 for classification, got {n_max}")
    try:
        cells = stability_scan(nus, cs, n_max)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    with click.open_file(output, "w") as stream:
        write_scan_csv(cells, stream)


if __name__ == "__main__":
    main()
