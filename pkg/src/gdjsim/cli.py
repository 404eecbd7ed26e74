"""Command-line front end.

Every command writes plot-ready data (CSV or JSON) whose leading ``#`` lines
record the resolved parameters, so a file can be regenerated from its own
header. Floats are printed with 12 significant digits.

    gdjsim run gd constant00 --shots 4000
    gdjsim query-complexity --n-max 6
    gdjsim panels noise --trials 10000
    gdjsim qkd curve --eta 0.1
    gdjsim qkd simulate --protocol GDJ --d 10000 --eta 1
    gdjsim life-death balanced01
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Iterable, Optional, Sequence

import numpy as np

from . import algorithm, complexity, ensemble, qkd
from .errors import GdjError, InputError
from .oracle import FunctionClass, FunctionSpec
from .statevector import RandomSource

SEED_ENV = "GDJSIM_SEED"


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def render_csv(command: str, params: dict, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(f"# command: {command}\n")
    buf.write(f"# params: {json.dumps(params, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise AssertionError("row width differs from header")
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_json(command: str, params: dict, payload) -> str:
    return json.dumps({"command": command, "params": params, "result": payload},
                      sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args: argparse.Namespace, *names: str) -> dict:
    return {name: getattr(args, name) for name in names}


# commands

def cmd_run(args) -> str:
    fclass = FunctionClass.parse(args.fclass) if args.fclass != "custom" else None
    n = 1 if args.algorithm == "gd" else args.n
    if fclass is None:
        if not (args.fx and args.fy):
            raise InputError("class 'custom' needs --fx and --fy truth tables")
        spec = FunctionSpec(n, None, tuple(int(c) for c in args.fx), tuple(int(c) for c in args.fy))
    else:
        spec = FunctionSpec(n, fclass)
    rng = RandomSource(args.seed)
    runner = algorithm.run_gd if args.algorithm == "gd" else algorithm.run_gdj
    outcome = runner(spec, rng, args.shots, args.force)
    params = {"algorithm": args.algorithm, "class": args.fclass, "n": n, "shots": args.shots,
              "seed": args.seed, "force": args.force}
    if args.format == "json":
        return render_json("run", params, outcome.to_json())

    lines = ["# command: run", f"# params: {json.dumps(params, sort_keys=True)}",
             f"i={outcome.i_bits} j={outcome.j_bits}"]
    if outcome.decoded_class is None:
        lines.append("decoded: none (pattern outside the promise support)")
    else:
        lines.append(f"decoded: {outcome.decoded_class.value} kind={outcome.decoded_kind} "
                     f"f_x={outcome.value_x} f_y={outcome.value_y}")
    if outcome.probability is not None:
        lines.append(f"probability: {fmt(outcome.probability)}")
    if outcome.counts:
        total = sum(outcome.counts.values())
        for pattern, count in outcome.counts.items():
            lines.append(f"{pattern} {count} {fmt(count / total)}")
    return "\n".join(lines) + "\n"


def cmd_query_complexity(args) -> str:
    rows = []
    for n in range(1, args.n_max + 1):
        brute = {}
        for alg in ("DJ", "GDJ"):
            try:
                brute[alg] = complexity.min_deterministic_queries_bruteforce(alg, n)
            except GdjError:
                brute[alg] = None
        rows.append((n,
                     complexity.classical_query_count("DJ", n),
                     complexity.classical_query_count("GDJ", n),
                     complexity.quantum_query_count("DJ"),
                     complexity.quantum_query_count("GDJ"),
                     brute["DJ"], brute["GDJ"],
                     complexity.classical_query_count_text(n)))
    header = ("n", "classical_dj", "classical_gdj", "quantum_dj", "quantum_gdj",
              "bruteforce_dj", "bruteforce_gdj", "classical_gdj_text")
    return render_csv("query-complexity", _params(args, "n_max"), header, rows)


def _panel_noise(args):
    rng = RandomSource(args.seed)
    steps = int(round(1.0 / args.eta_step))
    etas = [round(i * args.eta_step, 12) for i in range(steps + 1)]
    rows = []
    for eta, child in zip(etas, rng.spawn(len(etas))):
        r_dj, r_gdj = child.spawn(2)
        rows.append((eta,
                     ensemble.noise_accuracy("DJA", eta, args.beta, args.gamma),
                     ensemble.noise_accuracy("GDJA", eta, args.beta, args.gamma),
                     ensemble.monte_carlo_noise_accuracy("DJA", args.n, eta, args.trials, r_dj),
                     ensemble.monte_carlo_noise_accuracy("GDJA", args.n, eta, args.trials, r_gdj),
                     args.trials))
    header = ("eta", "a_dja_model", "a_gdja_model", "a_dja_mc", "a_gdja_mc", "trials")
    return header, rows, _params(args, "eta_step", "beta", "gamma", "n", "trials", "seed")


def _panel_infogain(args):
    rows = [(n, ensemble.information_gain("DJA", n), ensemble.information_gain("GDJA", n))
            for n in range(1, args.n_max + 1)]
    return ("n", "i_dja", "i_gdja"), rows, _params(args, "n_max")


def _panel_resources(args):
    rows = []
    for n in range(1, args.n_max + 1):
        q_dj, g_dj = ensemble.resource_counts("DJA", n)
        q_gdj, g_gdj = ensemble.resource_counts("GDJA", n)
        rows.append((n, q_dj, q_gdj, g_dj, g_gdj))
    params = _params(args, "n_max")
    params.update(c_dja=ensemble.GATE_CONST_DJA, c_gdja=ensemble.GATE_CONST_GDJA)
    return ("n", "q_dja", "q_gdja", "g_dja", "g_gdja"), rows, params


def _panel_stddev(args):
    dims = list(range(2, args.dim_max + 1))
    r_dj, r_gdj = RandomSource(args.seed).spawn(2)
    std_dj = ensemble.accuracy_std_vs_dimension("DJA", dims, args.trials, r_dj, args.eta)
    std_gdj = ensemble.accuracy_std_vs_dimension("GDJA", dims, args.trials, r_gdj, args.eta)
    rows = [(d, a, b, ensemble.berry_esseen_bound(d)) for d, a, b in zip(dims, std_dj, std_gdj)]
    params = _params(args, "dim_max", "trials", "eta", "seed")
    params["berry_esseen"] = {"C": ensemble.BERRY_ESSEEN_C, "sigma": 1.0, "rho": 1.0}
    return ("dim", "std_dj", "std_gdj", "berry_esseen"), rows, params


def _classical_gdj_decide(table: Sequence[int]) -> str:
    """Deterministic classical kind decision on a constant/balanced table."""
    first = table[0]
    for v in table[1:len(table) // 2 + 1]:
        if v != first:
            return "balanced"
    return "constant"


def _panel_timing(args):
    rows = []
    for n in range(1, args.n_max + 1):
        table = [0] * (4 ** n)

        def clock(fn):
            start = time.perf_counter()
            for _ in range(args.repeats):
                fn()
            return (time.perf_counter() - start) / args.repeats

        spec = FunctionSpec(n, FunctionClass.CONSTANT11)
        rows.append((n,
                     clock(lambda: _classical_gdj_decide(table)),
                     clock(lambda: algorithm.dj_final_state("balanced", n)),
                     clock(lambda: algorithm.gdj_final_state(spec))))
    return ("n", "t_classical", "t_dj", "t_gdj"), rows, _params(args, "n_max", "repeats")


PANELS = {
    "noise": _panel_noise,
    "infogain": _panel_infogain,
    "resources": _panel_resources,
    "stddev": _panel_stddev,
    "timing": _panel_timing,
}


def cmd_panels(args) -> str:
    header, rows, params = PANELS[args.panel](args)
    return render_csv(f"panels {args.panel}", params, header, rows)


def qkd_curve_rows(eta: float, k_dj: float, k_gdj: float, d_max: int, d_step: int,
                   model: str = "phenomenological") -> list[tuple]:
    """Detection-curve rows on a d grid plus marked rows at the 50% / 90% waypoints."""
    if model == "ideal":
        k_dj, k_gdj = qkd.IDEAL_ALPHA["DJ"], qkd.IDEAL_ALPHA["GDJ"]
    marks: dict[int, list[str]] = {}
    if eta > 0:
        for label, k in (("dj", k_dj), ("gdj", k_gdj)):
            for p in (0.5, 0.9):
                d = int(round(qkd.waypoint_dimension(p, k, eta)))
                marks.setdefault(d, []).append(f"d{int(p * 100)}_{label}")
    grid = set(range(0, d_max + 1, d_step)) | set(marks)
    return [(d, qkd.detection_probability(d, k_dj, eta), qkd.detection_probability(d, k_gdj, eta),
             ";".join(marks.get(d, [])))
            for d in sorted(grid)]


def cmd_qkd(args) -> str:
    if args.mode == "curve":
        rows = qkd_curve_rows(args.eta, args.k_dj, args.k_gdj, args.d_max, args.d_step, args.model)
        params = _params(args, "eta", "k_dj", "k_gdj", "d_max", "d_step", "model")
        return render_csv("qkd curve", params, ("d", "p_dj", "p_gdj", "marker"), rows)

    cfg = qkd.QkdConfig(args.protocol, args.n, args.d, args.eta, args.q0, None,
                        args.test_fraction, args.seed)
    transcript = qkd.run_session(cfg)
    if args.format == "json":
        return render_json("qkd simulate", {"seed": args.seed}, transcript.summary())
    return transcript.to_jsonl()


ROOM = {0: "Death", 1: "Life"}


def cmd_life_death(args) -> str:
    outcome = algorithm.run_gd(FunctionSpec(1, FunctionClass.parse(args.fclass)))
    a, b = outcome.decoded_class.values
    return (f"Room 1: {ROOM[a]}, Room 2: {ROOM[b]}\n"
            f"decoded {outcome.decoded_class.value} from (i, j) = ({outcome.i_bits}, {outcome.j_bits}) "
            f"with probability {fmt(outcome.probability)}\n")


# parser

def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    seed = _default_seed()
    parser = argparse.ArgumentParser(prog="gdjsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_choices=None):
        p.add_argument("--seed", type=int, default=seed,
                       help=f"random seed (default from ${SEED_ENV} or 0)")
        p.add_argument("--out", help="write to this file instead of stdout")
        if fmt_choices:
            p.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])

    classes = [c.value for c in FunctionClass]
    p = sub.add_parser("run", help="run GD or GDJ on one promise function")
    p.add_argument("algorithm", choices=("gd", "gdj"))
    p.add_argument("fclass", metavar="class", choices=classes + ["custom"],
                   help=f"one of {', '.join(classes)}, or custom with --fx/--fy")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--shots", type=int, default=None,
                   help=f"sample this many shots (hardware replay used {algorithm.DEFAULT_SHOTS})")
    p.add_argument("--force", action="store_true", help="accept functions outside the promise")
    p.add_argument("--fx", help="x-register truth table as a bitstring, with class custom")
    p.add_argument("--fy", help="y-register truth table as a bitstring, with class custom")
    common(p, ("text", "json"))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("query-complexity", help="classical vs quantum query counts")
    p.add_argument("--n-max", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_query_complexity)

    p = sub.add_parser("panels", help="ensemble panels: noise, infogain, resources, stddev, timing")
    p.add_argument("panel", choices=sorted(PANELS))
    p.add_argument("--n", type=int, default=ensemble.DEFAULT_NOISE_WIDTH,
                   help="register width for the noisy Monte Carlo")
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--eta-step", type=float, default=0.05)
    p.add_argument("--eta", type=float, default=ensemble.DEFAULT_STD_ETA,
                   help="noise level for the stddev panel")
    p.add_argument("--beta", type=float, default=ensemble.DEFAULT_BETA)
    p.add_argument("--gamma", type=float, default=ensemble.DEFAULT_GAMMA)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--dim-max", type=int, default=50)
    p.add_argument("--repeats", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_panels)

    p = sub.add_parser("qkd", help="detection curves and simulated sessions")
    p.add_argument("mode", choices=("curve", "simulate"))
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--k-dj", type=float, default=qkd.K_DJ)
    p.add_argument("--k-gdj", type=float, default=qkd.K_GDJ)
    p.add_argument("--d-max", type=int, default=40000)
    p.add_argument("--d-step", type=int, default=500)
    p.add_argument("--model", choices=("phenomenological", "ideal"), default="phenomenological")
    p.add_argument("--protocol", choices=qkd.PROTOCOLS, default="GDJ")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--d", type=int, default=1000)
    p.add_argument("--q0", type=float, default=0.0)
    p.add_argument("--test-fraction", type=float, default=1.0)
    common(p, ("jsonl", "json"))
    p.set_defaults(func=cmd_qkd)

    p = sub.add_parser("life-death", help="two-room demo driven by the GD decode")
    p.add_argument("fclass", metavar="class", choices=classes)
    common(p)
    p.set_defaults(func=cmd_life_death)
    return parser


_TRIAL_DEFAULTS = {"noise": 10000, "stddev": 200}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "panels" and args.trials is None:
        args.trials = _TRIAL_DEFAULTS.get(args.panel)
    if args.command == "qkd" and args.eta is None:
        args.eta = qkd.DEFAULT_ETA if args.mode == "curve" else 0.0
    try:
        text = args.func(args)
    except GdjError as exc:
        print(f"gdjsim: error: {exc}", file=sys.stderr)
        return exc.exit_code
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
