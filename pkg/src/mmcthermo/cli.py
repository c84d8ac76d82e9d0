"""Command-line front end: ``mmcthermo {info,sweep,verify,simulate,integrate}``.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
3 I/O error. Output is deterministic for a fixed set of flags.
"""

import argparse
import io
import json
import sys

from . import __version__
from .channel import ChannelParams, mutual_information, mutual_information_small_c
from .core_math import DomainError
from .efficiency import (
    ZeroInformationError,
    energy_per_nat,
    open_grid,
    sweep_g_over_i,
    verify_monotonicity,
    verify_theorem1,
)
from .simulate import (
    empirical_mutual_information,
    mutual_information_standard_error,
    simulate_channel,
)
from .thermo import (
    DEFAULT_TEMPERATURE,
    EnergyContext,
    ReservoirPlan,
    chemical_potential,
    creation_energy_closed,
    creation_energy_quasistatic,
)

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

DEFAULT_C_LOW = 0.01
DEFAULT_C_HIGH = 0.1
DEFAULT_M_LOW = 0.5
DEFAULT_SWEEP_M_LOWS = (0.2, 0.4, 0.5, 0.6, 0.8)
DEFAULT_SWEEP_GRID = 999
DEFAULT_VERIFY_GRID = 10_000
DEFAULT_INTEGRATE_STEPS = (1, 10, 100, 1_000, 10_000, 100_000)

# (c_low, c_high, m_low) instances of the G/I >= kT bound
THEOREM_BATTERY = [
    (c_low, c_low * ratio, m_low)
    for c_low in (1e-6, 1e-4, 1e-3, 1e-2)
    for ratio in (1.01, 2.0, 10.0, 50.0)
    for m_low in (0.1, 0.5, 0.9)
    if c_low * ratio < 1
]
# (c_low, c_high) pairs for the J/p and J/(1-p) monotonicity checks
MONOTONICITY_BATTERY = [
    (c_low, c_low * ratio)
    for c_low in (1e-6, 1e-3, 1e-2, 0.05, 0.3)
    for ratio in (1.01, 1.5, 3.0, 10.0, 100.0, 1000.0)
    if c_low * ratio < 1
]


def fmt(x):
    """Fixed 9-significant-digit rendering used in every CSV/text output."""
    return f"{x:.9g}"


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _context(args):
    unit = args.unit
    if unit is None:
        unit = "joules" if args.temp is not None else "kT"
    temp = DEFAULT_TEMPERATURE if args.temp is None else args.temp
    return EnergyContext(temperature=temp, unit=unit)


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_info(args):
    ctx = _context(args)
    ch = ChannelParams(args.c_low, args.c_high)
    plan = ReservoirPlan(1.0, args.m_low, args.c_low, args.c_high)
    report = energy_per_nat(ctx, plan, args.p_low)
    unit = "kT" if ctx.unit == "kT" else "J"
    values = {
        "c_low": args.c_low,
        "c_high": args.c_high,
        "m_low": args.m_low,
        "p_low": args.p_low,
        f"chemical_potential_{unit}": chemical_potential(ctx, args.c_low, args.c_high),
        "mutual_information_nats": mutual_information(ch, args.p_low),
        "mutual_information_small_c_nats": mutual_information_small_c(ch, args.p_low),
        f"creation_energy_per_molecule_{unit}": creation_energy_closed(ctx, plan),
        f"g_over_i_{unit}_per_nat": report.g_over_i,
        "regime": report.regime,
    }
    if args.format == "json":
        text = _json({"schema_version": SCHEMA_VERSION, "command": "info", **values})
    else:
        text = "".join(f"{k}: {v if isinstance(v, str) else fmt(v)}\n" for k, v in values.items())
    _emit(text, args.out)
    return EXIT_OK


def cmd_sweep(args):
    ctx = _context(args)
    m_lows = args.m_low if args.m_low is not None else list(DEFAULT_SWEEP_M_LOWS)
    rows = sweep_g_over_i(ctx, args.c_low, args.c_high, m_lows, open_grid(args.grid))
    if args.format == "json":
        text = _json({
            "schema_version": SCHEMA_VERSION,
            "command": "sweep",
            "c_low": args.c_low,
            "c_high": args.c_high,
            "rows": [
                {"m_L": r.m_low, "p_L": r.p_low, "g_over_i_kT": r.g_over_i_kT, "regime": r.regime}
                for r in rows
            ],
        })
    else:
        text = _csv(
            ["m_L", "p_L", "g_over_i_kT", "regime"],
            [(r.m_low, r.p_low, r.g_over_i_kT, r.regime) for r in rows],
        )
    _emit(text, args.out)
    return EXIT_OK


def _theorem_entry(ctx, c_low, c_high, m_low, grid, tol):
    entry = {"kind": "theorem1", "c_low": c_low, "c_high": c_high, "m_low": m_low}
    if c_low == c_high:
        entry["status"] = "skipped-degenerate"
        return entry
    check = verify_theorem1(ctx, c_low, c_high, m_low, grid, tol)
    entry.update(
        status="pass" if check.passed else "fail",
        argmin_p_low=check.argmin_p_low,
        min_g_over_i_kT=check.min_g_over_i_kT,
        worst_deviation=abs(check.min_g_over_i_kT - 1.0),
        min_excess_far_kT=check.min_excess_far_kT,
        failures=check.failures,
    )
    return entry


def _monotonicity_entry(c_low, c_high, grid):
    entry = {"kind": "monotonicity", "c_low": c_low, "c_high": c_high}
    if c_low == c_high:
        entry["status"] = "skipped-degenerate"
        return entry
    check = verify_monotonicity(c_low, c_high, grid)
    entry.update(
        status="pass" if check.passed else "fail",
        worst_decreasing_step=check.worst_decreasing_step,
        worst_increasing_step=check.worst_increasing_step,
    )
    return entry


def cmd_verify(args):
    ctx = _context(args)
    theorem_cases = list(THEOREM_BATTERY)
    mono_cases = list(MONOTONICITY_BATTERY)
    if args.c_low is not None or args.c_high is not None:
        c_low = DEFAULT_C_LOW if args.c_low is None else args.c_low
        c_high = DEFAULT_C_HIGH if args.c_high is None else args.c_high
        ChannelParams(c_low, c_high)
        theorem_cases.append((c_low, c_high, args.m_low))
        mono_cases.append((c_low, c_high))
    checks = [_theorem_entry(ctx, *case, args.grid, args.tol) for case in theorem_cases]
    checks += [_monotonicity_entry(*case, args.mono_grid) for case in mono_cases]
    passed = all(c["status"] != "fail" for c in checks)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "grid": args.grid,
        "monotonicity_grid": args.mono_grid,
        "tol": args.tol,
        "passed": passed,
        "counts": {
            s: sum(c["status"] == s for c in checks) for s in ("pass", "fail", "skipped-degenerate")
        },
        "checks": checks,
    }
    _emit(_json(report), args.out)
    return EXIT_OK if passed else EXIT_FAIL


def _theoretical_mi(c_low, c_high, p_low):
    # realised fractions may hit 0; fall back to the table formula there
    if 0 < c_low <= c_high < 1:
        return mutual_information(ChannelParams(c_low, c_high), p_low)
    table = [
        [p_low * (1 - c_low), p_low * c_low],
        [(1 - p_low) * (1 - c_high), (1 - p_low) * c_high],
    ]
    return empirical_mutual_information(table)


def cmd_simulate(args):
    n = int(args.n)
    n_low = round(args.m_low * n)
    n_high = n - n_low
    if n_low < 1 or n_high < 1:
        raise DomainError(f"m_low={args.m_low} with n={n} leaves a reservoir empty")
    rec = simulate_channel(
        n_low, n_high, args.c_low, args.c_high, args.p_low,
        max_uses=args.uses, mode=args.mode, seed=args.seed,
    )
    theory = _theoretical_mi(rec.realized_c_low, rec.realized_c_high, args.p_low)
    if rec.uses:
        empirical = empirical_mutual_information(rec)
        sigma = mutual_information_standard_error(rec)
    else:
        empirical = sigma = None
    predicted_usable = predicted_side = None
    if 0 < args.p_low < 1:
        predicted_usable = min(n_low / args.p_low, n_high / (1 - args.p_low))
        low_t, high_t = n_low / args.p_low, n_high / (1 - args.p_low)
        predicted_side = "low" if low_t < high_t else "high" if high_t < low_t else "tie"
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "record": rec.to_dict(),
        "empirical_mi_nats": empirical,
        "mi_standard_error": sigma,
        "theoretical_mi_nats": theory,
        "within_3_sigma": None if sigma is None else abs(empirical - theory) <= 3 * sigma,
        "predicted_usable_molecules": predicted_usable,
        "predicted_exhausted": predicted_side,
        "observed_exhaustion_use": rec.depleted_at,
    }
    _emit(_json(report), args.out)
    return EXIT_OK


def cmd_integrate(args):
    plan = ReservoirPlan(args.n, args.m_low, args.c_low, args.c_high)
    ctx = EnergyContext()
    closed = creation_energy_closed(ctx, plan)
    rows = []
    for steps in sorted(args.steps):
        if steps < 1:
            raise DomainError(f"steps must be >= 1, got {steps}")
        g = creation_energy_quasistatic(ctx, plan, steps)
        rel = abs(g - closed) / closed if closed > 0 else 0.0
        rows.append((steps, g, closed, rel))
    if args.format == "json":
        text = _json({
            "schema_version": SCHEMA_VERSION,
            "command": "integrate",
            "rows": [
                {"steps": s, "G_quasistatic_kT": g, "G_closed_kT": c, "rel_error": r}
                for s, g, c, r in rows
            ],
        })
    else:
        text = _csv(
            ["steps", "G_quasistatic_kT", "G_closed_kT", "rel_error"],
            [(str(s), g, c, r) for s, g, c, r in rows],
        )
    _emit(text, args.out)
    return EXIT_OK


def _channel_flags(p, c_default=True):
    p.add_argument("--c-low", type=float, default=DEFAULT_C_LOW if c_default else None)
    p.add_argument("--c-high", type=float, default=DEFAULT_C_HIGH if c_default else None)


def _energy_flags(p):
    p.add_argument("--temp", type=float, default=None, help="temperature in K; implies --unit joules")
    p.add_argument("--unit", choices=("kT", "joules"), default=None)


def _output_flags(p, formats=("csv", "json"), default="csv"):
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=formats, default=default)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mmcthermo",
        description="Energy per nat of a two-reservoir molecular communication channel.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="point evaluation of potential, MI, energy and G/I")
    _channel_flags(p)
    p.add_argument("--m-low", type=float, default=DEFAULT_M_LOW)
    p.add_argument("--p-low", type=float, default=DEFAULT_M_LOW)
    _energy_flags(p)
    _output_flags(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("sweep", help="G/I over a p_L grid for several m_L (CSV)")
    _channel_flags(p)
    p.add_argument("--m-low", type=_float_list, default=None, help="comma-separated m_L values")
    p.add_argument("--grid", type=int, default=DEFAULT_SWEEP_GRID, help="interior p_L points")
    _energy_flags(p)
    _output_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check the kT lower bound and the monotonicity lemmas")
    _channel_flags(p, c_default=False)
    p.add_argument("--m-low", type=float, default=DEFAULT_M_LOW)
    p.add_argument("--grid", type=int, default=DEFAULT_VERIFY_GRID)
    p.add_argument("--mono-grid", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-3, help="allowed |min G/I - 1| in kT (strict)")
    _energy_flags(p)
    _output_flags(p, ("json",), "json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo run of the channel (JSON)")
    _channel_flags(p)
    p.add_argument("--n", type=float, default=20_000, help="total molecules in both reservoirs")
    p.add_argument("--m-low", type=float, default=DEFAULT_M_LOW)
    p.add_argument("--p-low", type=float, default=DEFAULT_M_LOW)
    p.add_argument("--uses", type=int, default=None, help="use budget (default: until exhaustion)")
    p.add_argument("--mode", choices=("depleting", "fixed_fraction"), default="depleting")
    p.add_argument("--seed", type=int, default=None)
    _output_flags(p, ("json",), "json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("integrate", help="quasi-static sum versus closed form (CSV)")
    _channel_flags(p)
    p.add_argument("--n", type=float, default=1e6)
    p.add_argument("--m-low", type=float, default=DEFAULT_M_LOW)
    p.add_argument("--steps", type=_int_list, default=list(DEFAULT_INTEGRATE_STEPS))
    _output_flags(p)
    p.set_defaults(func=cmd_integrate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ZeroInformationError as exc:
        print(f"mmcthermo: zero information: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ValueError) as exc:
        print(f"mmcthermo: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"mmcthermo: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
