"""Command-line front end.

State vectors are comma-separated probabilities on the unit ladder.  Verdicts
go to stdout as JSON, figure data as CSV; diagnostics go to stderr.

Exit codes: 0 success, 2 malformed input, 3 a precondition failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from . import activation, charging, discharging, geometry, multicopy, sampling
from .core import DiagonalState, InvalidStateError, PreconditionError, QubitBattery

PARSE_TOL = 1e-9
EXIT_MALFORMED = 2
EXIT_PRECONDITION = 3


class MalformedInput(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _num(x: float) -> Any:
    """12 significant digits, with infinities and nan spelled as strings for strict JSON."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(fmt(x))


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def parse_vector(text: str) -> np.ndarray:
    try:
        values = np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError:
        raise MalformedInput(f"not a comma-separated list of numbers: {text!r}") from None
    if values.size == 0 or not np.all(np.isfinite(values)):
        raise MalformedInput(f"bad probability vector {text!r}")
    if np.any(values < 0):
        raise MalformedInput(f"negative entry in {text!r}")
    total = math.fsum(values.tolist())
    if abs(total - 1.0) > PARSE_TOL:
        raise MalformedInput(f"{text!r} sums to {total!r}, not 1")
    return values / total


def parse_state(text: str) -> DiagonalState:
    return DiagonalState.on_ladder(parse_vector(text))


def parse_battery(text: str, gap: float = 1.0) -> QubitBattery:
    v = parse_vector(text)
    if v.size != 2:
        raise MalformedInput(f"a battery needs two populations, got {v.size}")
    return QubitBattery(v[0], v[1], gap)


def _battery_json(b: QubitBattery) -> dict:
    return {"p0": b.p0, "p1": b.p1}


def _witness_json(w: geometry.Witness, state: DiagonalState) -> dict:
    return {"witness": w.label, "value": geometry.evaluate_witness(w, state)}


def cmd_passivity(args) -> dict:
    state = parse_state(args.state)
    out: dict[str, Any] = {"state": state.probs, "passive": geometry.is_passive(state)}
    if out["passive"]:
        beta = geometry.gibbs_parameter(state)
        out["verdict"] = "gibbs" if beta is not None else "passive"
        out["beta"] = beta
        out["virtual_temperatures"] = geometry.virtual_temperatures(state)
    else:
        out["verdict"] = "active"
        out.update(_witness_json(geometry.detect_active(state), state))
        out["violated"] = [_witness_json(w, state)
                           for w in geometry.facet_witnesses(state.dim)
                           if geometry.evaluate_witness(w, state) < -1e-12]
    return out


def cmd_vertices(args) -> dict:
    vs = geometry.polytope_vertices(args.d)
    return {"d": vs.dimension, "vertices": vs.vertices}


def cmd_decompose(args) -> dict:
    state = parse_state(args.state)
    weights = geometry.vertex_decomposition(state)
    return {"state": state.probs, "weights": weights,
            "reconstruction": geometry.reconstruct(weights)}


def cmd_charge(args) -> dict:
    battery = parse_battery(args.battery)
    charger = parse_state(args.charger)
    result = charging.optimal_charge(battery, charger)
    out = {
        "battery": _battery_json(battery),
        "charger": charger.probs,
        "charging_possible": charging.charging_possible(battery, charger),
        "delta": result.delta,
        "final": _battery_json(result.final),
        "swapped": list(result.swapped),
    }
    if args.oracle:
        oracle = charging.brute_force_charge(battery, charger)
        out["oracle_delta"] = oracle.delta
        out["oracle_agrees"] = oracle.delta == result.delta and oracle.final == result.final
    return out


def cmd_mincopies(args) -> dict:
    battery = parse_battery(args.battery)
    charger = parse_state(args.charger)
    n = multicopy.min_copies_to_charge(battery, charger, args.nmax)
    never = multicopy.thermal_never_charges(battery, charger)
    if n is not None:
        status = "found"
    elif never:
        status = "never"
    else:
        status = "not found within budget"
    return {"battery": _battery_json(battery), "charger": charger.probs, "nmax": args.nmax,
            "min_copies": n, "status": status}


def cmd_activate(args) -> dict:
    battery = parse_battery(args.battery)
    charger = parse_state(args.charger)
    out = {
        "battery": _battery_json(battery),
        "charger": charger.probs,
        "max_excited_population": activation.max_excited_population(battery, charger),
        "activates": activation.activates(battery, charger),
    }
    if charger.dim == 3:
        v = activation.activation_condition_3d(battery, charger)
        out["branches"] = {"I": v.branch_i, "II": v.branch_ii, "both": v.branch_both,
                           "formula_max": v.formula_max, "formula_satisfied": v.formula_satisfied}
    return out


def cmd_bath_bound(args) -> dict:
    p0 = args.p0
    if not 0.0 <= p0 <= 1.0:
        raise MalformedInput(f"p0 must lie in [0, 1], got {p0}")
    battery = QubitBattery(p0, 1.0 - p0, args.gap)
    return {"p0": p0, "gap": args.gap, "beta_max": activation.bath_activation_bound(battery),
            "beta_battery": battery.beta}


def _lorenz_rows(state: DiagonalState, beta: float) -> list[dict]:
    curve = activation.thermo_majorization_curve(state, beta)
    return [{"x": x, "y": y} for x, y in curve.points]


def cmd_lorenz(args) -> dict:
    state = parse_state(args.state)
    return {"state": state.probs, "beta": args.beta, "points": _lorenz_rows(state, args.beta)}


def cmd_discharge(args) -> dict:
    battery = parse_battery(args.battery)
    d = parse_state(args.discharger)
    result = discharging.optimal_discharge(battery, d)
    return {
        "battery": _battery_json(battery),
        "discharger": d.probs,
        "discharging_possible": discharging.discharging_possible(battery, d),
        "shift": result.shift,
        "final": _battery_json(result.final),
        "energy_drop": result.energy_drop,
    }


def fig_pollution(args) -> tuple[list[str], list[list[float]]]:
    """Entropy pollution over a grid of 3-level passive chargers."""
    battery = parse_battery(args.battery)
    rows = []
    for q0, q2 in pollution_grid(args.grid):
        charger = DiagonalState.on_ladder([q0, 1.0 - q0 - q2, q2])
        result = charging.optimal_charge(battery, charger)
        d_e = result.final.energy - battery.energy
        d_s = result.final.entropy - battery.entropy
        pollution = d_s / d_e if d_e > 0 else math.nan
        rows.append([q0, 1.0 - q0 - q2, q2, d_s, d_e, pollution])
    return ["q0", "q1", "q2", "dS", "dE", "pollution"], rows


def pollution_grid(n: int) -> list[tuple[float, float]]:
    """Passive points of the ``n x n`` grid over ``q0 in [1/3, 1]``, ``q2 in [0, 1/3]``.

    Both axes include their endpoints, so the uniform state is a grid point.
    """
    if n < 2:
        raise MalformedInput("grid needs at least 2 points per axis")
    out = []
    for q0 in np.linspace(1 / 3, 1.0, n):
        for q2 in np.linspace(0.0, 1 / 3, n):
            q1 = 1.0 - q0 - q2
            if q0 >= q1 - 1e-12 and q1 >= q2 - 1e-12 and q1 >= 0:
                out.append((float(q0), float(q2)))
    return out


def fig_capacity(args) -> tuple[list[str], list[list[float]]]:
    battery = parse_battery(args.battery)
    q = sampling.fixed_energy_samples(args.d, args.energy, args.n, args.seed, args.workers)
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = -np.sum(np.where(q > 0, q * np.log(q), 0.0), axis=1)
    energy = q @ np.arange(args.d)
    delta = charging.ladder_charge_amounts(battery, q)
    header = [f"q{i}" for i in range(args.d)] + ["S", "E", "delta"]
    rows = np.column_stack([q, ent, energy, delta]).tolist()
    return header, rows


def fig_lorenz(args) -> tuple[list[str], list[list[float]]]:
    battery = parse_battery(args.battery, args.gap)
    half = QubitBattery(0.5, 0.5, args.gap)
    rows = []
    for label, b in (("battery", battery), ("half", half)):
        for x, y in activation.thermo_majorization_curve(b.as_state(), args.beta).points:
            rows.append([label, x, y])
    return ["curve", "x", "y"], rows


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _flatten(v, f"{prefix}.{k}" if prefix else k)
        return out
    if isinstance(obj, list):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}[{i}]")
        return out
    return [(prefix, obj)]


def _default_seed() -> int:
    raw = os.environ.get("PBL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise MalformedInput(f"PBL_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pbl", description=__doc__.splitlines()[0])
    p.add_argument("--csv", action="store_true", help="emit key,value CSV instead of JSON")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("passivity", help="passive / active / Gibbs verdict")
    s.add_argument("state")
    s.set_defaults(func=cmd_passivity)

    s = sub.add_parser("vertices", help="vertices of the d-level passive polytope")
    s.add_argument("d", type=int)
    s.set_defaults(func=cmd_vertices)

    s = sub.add_parser("decompose", help="barycentric weights of a passive state")
    s.add_argument("state")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("charge", help="optimal energy-conserving charging")
    s.add_argument("battery")
    s.add_argument("charger")
    s.add_argument("--oracle", action="store_true", help="cross-check by brute force")
    s.set_defaults(func=cmd_charge)

    s = sub.add_parser("mincopies", help="fewest charger copies that charge")
    s.add_argument("battery")
    s.add_argument("charger")
    s.add_argument("--nmax", type=int, required=True)
    s.set_defaults(func=cmd_mincopies)

    s = sub.add_parser("activate", help="whether a charger can invert the battery")
    s.add_argument("battery")
    s.add_argument("charger")
    s.set_defaults(func=cmd_activate)

    s = sub.add_parser("bath-bound", help="hottest-needed bath inverse temperature for activation")
    s.add_argument("p0", type=float)
    s.add_argument("--gap", type=float, default=1.0)
    s.set_defaults(func=cmd_bath_bound)

    s = sub.add_parser("lorenz", help="thermo-majorization curve of a state")
    s.add_argument("state")
    s.add_argument("--beta", type=float, required=True)
    s.set_defaults(func=cmd_lorenz)

    s = sub.add_parser("discharge", help="optimal discharging with any global unitary")
    s.add_argument("battery")
    s.add_argument("discharger")
    s.set_defaults(func=cmd_discharge)

    fig = sub.add_parser("fig", help="figure data as CSV")
    figs = fig.add_subparsers(dest="figure", required=True)

    f = figs.add_parser("pollution")
    f.add_argument("--battery", required=True)
    f.add_argument("--grid", type=int, default=200)
    f.set_defaults(func=fig_pollution, table=True)

    f = figs.add_parser("capacity")
    f.add_argument("--battery", required=True)
    f.add_argument("--energy", type=float, required=True)
    f.add_argument("--n", type=int, default=100_000)
    f.add_argument("--d", type=int, default=4)
    f.add_argument("--seed", type=int, default=None)
    f.add_argument("--workers", type=int, default=1)
    f.set_defaults(func=fig_capacity, table=True)

    f = figs.add_parser("lorenz")
    f.add_argument("--battery", required=True)
    f.add_argument("--beta", type=float, required=True)
    f.add_argument("--gap", type=float, default=1.0)
    f.set_defaults(func=fig_lorenz, table=True)
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        result = args.func(args)
    except (MalformedInput, InvalidStateError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_MALFORMED
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=stderr)
        return EXIT_PRECONDITION
    if getattr(args, "table", False):
        write_csv(*result, stdout)
    elif args.csv:
        write_csv(["key", "value"], _flatten(_clean(result)), stdout)
    else:
        json.dump(_clean(result), stdout, indent=2)
        stdout.write("\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
