"""Command-line entry point.

Every command writes UTF-8 text: `#` metadata lines first, then either
key=value report lines or a CSV table.  Output depends only on the command,
its flags and the seed.
"""

import argparse
import contextlib
import csv
import sys
import time

import numpy as np

from . import approx, bb84, epr, info, protocol, reconcile

FLOAT_DIGITS = 12


def fmt(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x) + 0.0:.{FLOAT_DIGITS}g}"


class Report:
    def __init__(self, stream, command, args, extra=()):
        self.stream = stream
        self.out(f"# command={command}")
        self.out(f"# seed={args.seed}")
        for key, value in extra:
            self.out(f"# {key}={value}")
        self._csv = csv.writer(stream, lineterminator="\n")

    def out(self, line=""):
        self.stream.write(line + "\n")

    def row(self, values):
        self._csv.writerow([v if isinstance(v, str) else fmt(v) for v in values])


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f


def fmt_complex(z):
    sign = "-" if z.imag < 0 else "+"
    return f"{fmt(z.real)}{sign}{fmt(abs(z.imag))}j"


def _check_xi(xi):
    if not 0 <= xi <= 1:
        raise SystemExit("--xi must lie in [0, 1]")


def _bounds_table(rep, points):
    rep.row(["q", "ir_bound", "incoherent_bound", "six_state_bound"])
    for q in np.linspace(0, 0.5, points):
        six = info.six_state_bound(q) if q < 0.5 else float("nan")
        rep.row([q, info.ir_bound(q), info.incoherent_bound(q), six])


def cmd_bb84(args, stream):
    _check_xi(args.xi)
    rep = Report(stream, "bb84", args, [("xi", fmt(args.xi))])
    if args.bounds:
        _bounds_table(rep, args.points)
        return
    o = bb84.scale_by_fraction(bb84.ir_attack_exact(), args.xi)
    rep.out(f"info_per_bit={o.info_bits:.6f} qber={o.qber:.6f}")
    rep.row(["xi", "info_bits", "qber"])
    base = bb84.ir_attack_exact()
    for xi in np.linspace(0, 1, 11):
        s = bb84.scale_by_fraction(base, xi)
        rep.row([xi, s.info_bits, s.qber])


def cmd_bounds(args, stream):
    rep = Report(stream, "bounds", args)
    _bounds_table(rep, args.points)


HEADER = ["c1", "c2", "c3", "config", "xi", "info_bits", "qber1", "qber2", "qber"]


def _attack_row(c, cfg, xi, pt):
    pt = protocol.scale_point(pt, xi)
    return [*c, cfg.label, xi, pt.info_per_bit, pt.qber1, pt.qber2, pt.qber]


def cmd_sweep(args, stream):
    _check_xi(args.xi)
    rep = Report(stream, "sweep", args, [("steps", args.steps), ("xi", fmt(args.xi))])
    params, rates = protocol.sweep_arrays(args.steps, args.threads)
    rep.row(HEADER)
    for c, row in zip(params, rates):
        for k, cfg in enumerate(protocol.MEASURING_CONFIGS):
            rep.row(_attack_row(c, cfg, args.xi, protocol.AttackPoint.from_rates(*row[k])))


def cmd_gate_eval(args, stream):
    _check_xi(args.xi)
    p = protocol.CanonicalParams(args.c1, args.c2, args.c3)
    best, _ = protocol.best_config(p)
    rep = Report(stream, "gate-eval", args, [("xi", fmt(args.xi)), ("best", best.label)])
    rep.row(HEADER)
    for cfg in protocol.ALL_CONFIGS:
        rep.row(_attack_row(tuple(p), cfg, args.xi, protocol.run_attack(p, cfg)))


def _floats(text, n):
    values = [float(v) for v in text.split(",")]
    if len(values) != n:
        raise SystemExit(f"expected {n} comma-separated numbers")
    return values


def cmd_approx(args, stream):
    start = time.perf_counter()
    if args.alice_fixed:
        alice = approx.AliceParams(*_floats(args.alice_fixed, 4))
        eve, g = approx.inner_maximize(alice, args.inner_restarts, args.seed)
        result = approx.ApproxResult(approx.error_from_g(g), alice, eve, g)
        mode = "inner"
    else:
        result = approx.outer_minimize(args.restarts, args.inner_restarts, args.seed)
        mode = "max-min"
    rep = Report(stream, "approx", args, [("mode", mode), ("restarts", args.restarts), ("inner_restarts", args.inner_restarts)])
    rep.out(f"e_mm={fmt(result.e_mm)}")
    rep.out(f"g={fmt(result.g_value)}")
    rep.out("alice=" + ",".join(fmt(v) for v in result.alice.as_array()))
    rep.out("eve=" + ",".join(fmt(v) for v in result.eve.as_array()))
    state = approx.alice_state(result.alice)
    rep.out("alice_state=" + ",".join(fmt_complex(z) for z in state))
    print(f"wall_time_s={time.perf_counter() - start:.3f}", file=sys.stderr)


def cmd_epr(args, stream):
    rep = Report(stream, "epr", args)
    if args.verify_bell:
        images = [epr.bell_state(a1, a2) for a1 in (0, 1) for a2 in (0, 1)]
        gram = np.array([[np.vdot(x, y) for y in images] for x in images])
        err = float(np.max(np.abs(gram - np.eye(4))))
        for i, label in enumerate(epr.BELL_LABELS):
            rep.out(f"{label} orthonormal={'pass' if np.max(np.abs(gram[i] - np.eye(4)[i])) < 1e-12 else 'FAIL'}")
        if err >= 1e-12:
            raise protocol.InvariantError("Bell images are not orthonormal")
        return
    if args.show_corrections:
        for a1 in (0, 1):
            for a2 in (0, 1):
                m = epr.correction_gate(a1, a2).real
                rows = ";".join(",".join(fmt(v) for v in r) for r in m)
                rep.out(f"E{a1}{a2}=[{rows}]")
        return
    rep.row(["a1", "a2", "eve", "bob", "qber", "eve_info"])
    for a1 in (0, 1):
        for a2 in (0, 1):
            r = epr.run_epr_attack(a1, a2)
            if r.eve_recovered != (a1, a2) or r.bob_recovered != (a1, a2) or r.qber_contrib > 1e-12:
                raise protocol.InvariantError("EPR attack failed to recover the pair")
            rep.row([a1, a2, f"{a1}{a2}", f"{a1}{a2}", "0", "2.0"])


def cmd_reconcile(args, stream):
    p_est = args.p_est if args.p_est is not None else min(max(args.p, 0.01), 0.25)
    extra = [("n", args.n), ("p", fmt(args.p))]
    a = reconcile.random_bits(args.n, args.seed)
    b = reconcile.flip_channel(a, args.p, args.seed + 1)
    floor = info.shannon_reconciliation_bound(args.n, args.p)
    if args.simple:
        rep = Report(stream, "reconcile", args, extra + [("protocol", "simple-xor"), ("rounds", args.rounds)])
        ka, kb, r = reconcile.simple_xor_protocol(a, b, args.rounds, args.seed + 2)
        rep.out(f"initial_errors={int(np.sum(a != b))}")
        for i, n in enumerate(r.round_lengths, 1):
            rep.out(f"round={i} length={n}")
        rep.out(f"residual_errors={r.residual_errors} leaked_bits={r.leaked_bits} final_length={r.final_length}")
        return
    rep = Report(stream, "reconcile", args, extra + [("protocol", "cascade"), ("p_est", fmt(p_est)), ("passes", args.passes)])
    alice = a.copy()
    corrected, r = reconcile.cascade(a, b, p_est, args.passes, args.seed + 2)
    if np.any(a != alice) or r.residual_errors != int(np.sum(a != corrected)):
        raise protocol.InvariantError("reconciliation bookkeeping is inconsistent")
    rep.out(f"initial_errors={int(np.sum(a != b))}")
    rep.out(f"residual_errors={r.residual_errors}")
    rep.out(f"leaked_bits={r.leaked_bits}")
    rep.out(f"passes_run={r.passes}")
    rep.out(f"shannon_floor={fmt(floor)}")
    if args.amplify:
        mask = np.random.default_rng(args.seed + 3).random(args.n) < args.known
        key, known = reconcile.privacy_amplify(a, mask, args.n // 2, args.seed + 4)
        rep.out(f"amplified_length={key.size} known_before={fmt(mask.mean())} known_after={fmt(known.mean())}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--threads", type=int, default=None, help="worker cap (default: all cores)")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="entqkd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bb84", parents=[common], help="intercept-resend on single-qubit BB84")
    p.add_argument("--xi", type=float, default=1.0)
    p.add_argument("--bounds", action="store_true", help="tabulate the analytic bounds instead")
    p.add_argument("--points", type=int, default=51)
    p.set_defaults(func=cmd_bb84)

    p = sub.add_parser("bounds", parents=[common], help="ir, incoherent and six-state bounds")
    p.add_argument("--points", type=int, default=51)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", parents=[common], help="attack outcomes over the (c1,c2,c3) lattice")
    p.add_argument("--steps", type=int, default=33)
    p.add_argument("--xi", type=float, default=1.0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gate-eval", parents=[common], help="all Eve configs for one gate")
    for name in ("--c1", "--c2", "--c3"):
        p.add_argument(name, type=float, required=True)
    p.add_argument("--xi", type=float, default=1.0)
    p.set_defaults(func=cmd_gate_eval)

    p = sub.add_parser("approx", parents=[common], help="best product approximation of a pair state")
    p.add_argument("--restarts", type=int, default=3, help="annealing chains")
    p.add_argument("--inner-restarts", type=int, default=None)
    p.add_argument("--alice-fixed", default=None, metavar="T1,T2,T3,A4", help="only maximize Eve's fit to this state")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("epr", parents=[common], help="Bell-state substitution attack")
    p.add_argument("--verify-bell", action="store_true")
    p.add_argument("--show-corrections", action="store_true")
    p.set_defaults(func=cmd_epr)

    p = sub.add_parser("reconcile", parents=[common], help="noisy channel plus error reconciliation")
    p.add_argument("-n", type=int, default=10000)
    p.add_argument("-p", type=float, default=0.05)
    p.add_argument("--p-est", type=float, default=None)
    p.add_argument("--passes", type=int, default=4)
    p.add_argument("--simple", action="store_true", help="use the XOR compare-and-discard protocol")
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--amplify", action="store_true")
    p.add_argument("--known", type=float, default=0.5, help="fraction of bits Eve knows before amplification")
    p.set_defaults(func=cmd_reconcile)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "inner_restarts", 0) is None:
        args.inner_restarts = 100 if args.alice_fixed else 20
    try:
        with _output(args.out) as stream:
            args.func(args, stream)
    except (protocol.InvariantError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
