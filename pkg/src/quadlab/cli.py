"""Command-line driver for every kernel and the HTTP service.

Subcommands: count, shrink, minsearch, fourterm, orbit, correspond,
transversal, game, replay, serve.  Every run prints a reproducibility header
(parameters, seed, version); numeric output uses 17 significant digits so it
parses back losslessly.  Exit codes: 0 success, 2 validation error, 3
enumeration budget exceeded.
"""

import argparse
import json
import os
import re
import sys

import numpy as np

from . import __version__, counting, lattices
from .errors import BudgetExceededError, ValidationError
from .forms import NAMED_FORMS, form_from_json, named_form
from .games import (Ball, GameKind, alice_avoid_countable, dummy_alice,
                    new_game, play_match, random_bob, read_transcript,
                    replay_transcript, shrinking_bob, StageWindowAlice,
                    spread_family, through_center_family, write_transcript)


def f17(x):
    return format(float(x), ".17g")


def _floats(text):
    return [float(p) for p in str(text).split(",") if p != ""]


def _load_form(args):
    if args.form in NAMED_FORMS:
        f = named_form(args.form)
    else:
        with open(args.form) as fh:
            f = form_from_json(json.load(fh))
    if getattr(args, "shift", None):
        from .forms import InhomogeneousForm
        f = InhomogeneousForm(f.form, _floats(args.shift))
    return f


def _load_lattice(args):
    g = np.array([_floats(row) for row in args.basis.split(";")], dtype=float).T
    w = _floats(args.shift) if args.shift else [0.0, 0.0]
    return lattices.make_affine_lattice(g, w)


def _header(args, seed=None):
    params = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    return {"header": True, "version": __version__, "params": params, "seed": seed}


def _emit(rows, out, header):
    lines = [json.dumps(header)] + [json.dumps(r) for r in rows]
    if out:
        with open(out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)


def cmd_count(args):
    f = _load_form(args)
    lo, hi = _floats(args.interval)
    I = counting.Interval(lo, hi, not args.closed, not args.closed)
    n = counting.count_in_interval(f, I, args.t, args.norm, args.strict, args.threads)
    print(json.dumps(_header(args)), file=sys.stderr)
    print(n)
    return 0


def cmd_shrink(args):
    f = _load_form(args)
    t_list = _floats(args.t_list)
    records = counting.shrinking_target_run(f, args.c, args.kappa, t_list,
                                            args.target, args.norm, args.strict,
                                            args.threads)
    rows = [{"t": f17(r.t), "count": r.count,
             "predicted": None if r.predicted is None else f17(r.predicted),
             "residual": None if r.residual is None else f17(r.residual)}
            for r in records]
    header = _header(args)
    if sum(1 for r in records if r.count > 0) >= 3:
        fit = counting.fit_growth(records)
        header["fit"] = {"exponent": f17(fit.exponent),
                         "coefficient": f17(fit.coefficient),
                         "max_residual": f17(fit.max_residual)}
    _emit(rows, args.out, header)
    return 0


def cmd_minsearch(args):
    if args.family:
        k, a2, a3 = _floats(args.family)
        form = counting.DiagonalPowerForm(int(k), a2, a3)
    else:
        form = _load_form(args).form
    theta = _floats(args.theta) if args.theta else [0.0] * 3
    if args.lo is not None and args.hi is not None:
        rec = counting.min_abs_in_annulus(form, theta, args.lo, args.hi,
                                          args.exclude_axes)
    else:
        rec = counting.min_search_delta(form, theta, args.N)
    print(json.dumps(_header(args)), file=sys.stderr)
    print(json.dumps({"min_abs_value": f17(rec.min_abs_value),
                      "argmin": list(rec.argmin)}))
    return 0


def cmd_fourterm(args):
    params = counting.FourTermParams(args.M, args.alpha, args.beta,
                                     args.theta1, args.theta2, args.delta)
    print(json.dumps(_header(args)), file=sys.stderr)
    print(counting.four_term_count(params))
    return 0


def cmd_orbit(args):
    L = _load_lattice(args)
    v = lattices.choose_v(args.s) if args.s is not None else None
    rows = lattices.orbit_scan(L, args.t_lo, args.t_hi, args.dt, v)
    rows = [{k: (f17(val) if isinstance(val, float) else val) for k, val in r.items()}
            for r in rows]
    _emit(rows, args.out, _header(args))
    return 0


def cmd_correspond(args):
    L = _load_lattice(args)
    rec = lattices.correspondence_scan(L, args.s, args.R, args.T, args.dt)
    out = {"value_gap": f17(rec.value_gap), "orbit_gap": f17(rec.orbit_gap),
           "orbit_gap_time": f17(rec.orbit_gap_time),
           "witness_point": None if rec.witness_point is None else
               [f17(x) for x in rec.witness_point],
           "witness_time": None if rec.witness_time is None else f17(rec.witness_time),
           "witness_pull_distance": None if rec.witness_pull_distance is None else
               f17(rec.witness_pull_distance)}
    print(json.dumps(_header(args)), file=sys.stderr)
    print(json.dumps(out))
    return 0


def cmd_transversal(args):
    v = _floats(args.v)
    rep = lattices.transversality_check_Mv(v)
    print(json.dumps(_header(args)), file=sys.stderr)
    print(json.dumps({"F_condition": rep.F_condition,
                      "Hplus_condition": rep.Hplus_condition,
                      "Hminus_condition": rep.Hminus_condition}))
    return 0


def _build_alice(args, kind):
    if args.alice == "dummy":
        return dummy_alice
    if args.alice == "avoid":
        targets = [[t] if kind.dimension == 1 else [t] * kind.dimension
                   for t in _floats(args.targets)]
        return alice_avoid_countable(targets)
    if args.alice == "stage":
        oracle = {"through-center": through_center_family,
                  "spread": spread_family}[args.oracle]()
        return StageWindowAlice(args.tau, kind.beta, oracle)
    raise ValidationError("strategy", f"unknown alice strategy {args.alice!r}")


def cmd_game(args):
    kind = GameKind(args.kind, args.dim, args.beta, args.alpha, args.beta0)
    ball = Ball(_floats(args.center) if args.center else [0.0] * args.dim,
                args.radius)
    state = new_game(kind, ball)
    alice = _build_alice(args, kind)
    bob = random_bob(args.seed) if args.bob == "random" else shrinking_bob()
    result = play_match(state, alice, bob, args.turns)
    header = _header(args, seed=args.seed)
    rows = result.transcript
    rows[0].update(header)
    summary = {"termination": result.termination,
               "limit_estimate": [f17(x) for x in result.limit_estimate],
               "error_bound": f17(result.error_bound)}
    if args.out:
        write_transcript(rows, args.out)
    else:
        for row in rows:
            print(json.dumps(row))
    print(json.dumps(summary), file=sys.stderr)
    return 0


def cmd_replay(args):
    rows = read_transcript(args.infile)
    state = replay_transcript(rows)
    print(json.dumps({"verified": True, "turns": state.index,
                      "final_ball": state.current_ball.to_json()}))
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app
    app = create_app(args.data_dir, args.workers)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="quadlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    # values like "-0.5,0.5" must parse as arguments, not option names
    number_list = re.compile(r"^-\d+(\.\d*)?(,-?\d+(\.\d*)?)*$|^-\.\d+.*$|^-\d*\.\d+.*$")

    def add(name, fn, configure):
        sp = sub.add_parser(name)
        sp._negative_number_matcher = number_list
        configure(sp)
        sp.set_defaults(func=fn)
        return sp

    def form_opts(sp):
        sp.add_argument("--form", default="q0",
                        help=f"named form ({', '.join(sorted(NAMED_FORMS))}) or JSON file")
        sp.add_argument("--shift", help="comma-separated shift override")
        sp.add_argument("--norm", choices=["euclidean", "sup"], default="euclidean")
        sp.add_argument("--strict", action="store_true", help="use strict norm bound")
        sp.add_argument("--threads", type=int, default=1)

    def c_count(sp):
        form_opts(sp)
        sp.add_argument("--interval", required=True, help="lo,hi")
        sp.add_argument("--closed", action="store_true")
        sp.add_argument("--t", type=float, required=True)
    add("count", cmd_count, c_count)

    def c_shrink(sp):
        form_opts(sp)
        sp.add_argument("--c", type=float, default=0.5)
        sp.add_argument("--kappa", type=float, default=0.0)
        sp.add_argument("--target", type=float, default=0.0)
        sp.add_argument("--t-list", dest="t_list", required=True)
        sp.add_argument("--out")
    add("shrink", cmd_shrink, c_shrink)

    def c_minsearch(sp):
        sp.add_argument("--form", default=None)
        sp.add_argument("--family", help="k,alpha2,alpha3")
        sp.add_argument("--theta")
        sp.add_argument("--N", type=int)
        sp.add_argument("--lo", type=int)
        sp.add_argument("--hi", type=int)
        sp.add_argument("--exclude-axes", dest="exclude_axes", action="store_true")
    add("minsearch", cmd_minsearch, c_minsearch)

    def c_fourterm(sp):
        sp.add_argument("--M", type=int, required=True)
        sp.add_argument("--alpha", type=float, required=True)
        sp.add_argument("--beta", type=float, default=1.0)
        sp.add_argument("--theta1", type=float, default=0.0)
        sp.add_argument("--theta2", type=float, default=0.0)
        sp.add_argument("--delta", type=float, default=0.1)
    add("fourterm", cmd_fourterm, c_fourterm)

    def lattice_opts(sp):
        sp.add_argument("--basis", default="1,0;0,1",
                        help="row-separated basis vectors 'b1x,b1y;b2x,b2y'")
        sp.add_argument("--shift", default=None)

    def c_orbit(sp):
        lattice_opts(sp)
        sp.add_argument("--t-lo", dest="t_lo", type=float, default=-10.0)
        sp.add_argument("--t-hi", dest="t_hi", type=float, default=10.0)
        sp.add_argument("--dt", type=float, default=0.05)
        sp.add_argument("--s", type=float, help="track dist to M_v for choose_v(s)")
        sp.add_argument("--out")
    add("orbit", cmd_orbit, c_orbit)

    def c_correspond(sp):
        lattice_opts(sp)
        sp.add_argument("--s", type=float, required=True)
        sp.add_argument("--R", type=float, default=1e3)
        sp.add_argument("--T", type=float, default=10.0)
        sp.add_argument("--dt", type=float, default=0.01)
    add("correspond", cmd_correspond, c_correspond)

    def c_transversal(sp):
        sp.add_argument("--v", required=True, help="v1,v2")
    add("transversal", cmd_transversal, c_transversal)

    def c_game(sp):
        sp.add_argument("--kind", choices=["classical", "haw", "hpw"], required=True)
        sp.add_argument("--dim", type=int, default=1)
        sp.add_argument("--beta", type=float, required=True)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--beta0", type=float)
        sp.add_argument("--center")
        sp.add_argument("--radius", type=float, default=1.0)
        sp.add_argument("--turns", type=int, default=40)
        sp.add_argument("--alice", choices=["dummy", "avoid", "stage"], default="dummy")
        sp.add_argument("--targets", default="")
        sp.add_argument("--tau", type=float, default=1.0)
        sp.add_argument("--oracle", choices=["through-center", "spread"],
                        default="through-center")
        sp.add_argument("--bob", choices=["random", "shrinking"], default="random")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out")
    add("game", cmd_game, c_game)

    def c_replay(sp):
        sp.add_argument("--in", dest="infile", required=True)
    add("replay", cmd_replay, c_replay)

    def c_serve(sp):
        env = os.environ
        sp.add_argument("--host", default=env.get("QUADLAB_HOST", "127.0.0.1"))
        sp.add_argument("--port", type=int, default=int(env.get("QUADLAB_PORT", 8787)))
        sp.add_argument("--data-dir", dest="data_dir", default=env.get("QUADLAB_DATA_DIR"))
        sp.add_argument("--workers", type=int, default=int(env.get("QUADLAB_WORKERS", 2)))
    add("serve", cmd_serve, c_serve)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as err:
        print(f"budget error: {err}", file=sys.stderr)
        return 3
    except (ValidationError, ValueError) as err:
        print(f"validation error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
