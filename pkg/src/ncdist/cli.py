"""Command-line interface.

Exit codes: 0 success / all checks pass, 1 checks ran and failed, 2 invalid
input, 3 domain error (pair not causally related).
"""
import argparse
import json
import logging
import math
import sys
import time

import numpy as np

from ncdist import __version__, causet, io, krein, lorentz, order, spectral
from ncdist.errors import InstanceTooLarge, InvalidInput, NotCausallyRelated, SingularForm
from ncdist.rng import rng_for

log = logging.getLogger("ncdist")

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_DOMAIN = 0, 1, 2, 3


class CheckFailed(Exception):
    """Raised after output is written when a check reported failure."""


# -- helpers ------------------------------------------------------------------


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidInput(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidInput(f"expected comma-separated numbers, got {text!r}") from exc


def _config_echo(args):
    skip = {"output", "config", "func", "timing", "command", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _record(args, result):
    rec = {
        "schema_version": io.SCHEMA_VERSION,
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "result": result,
    }
    return rec


def _emit(args, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(args, result, csv_header=None, csv_rows=None, ok=True, started=None):
    if args.format == "csv" and csv_header is not None:
        _emit(args, io.csv_text(csv_header, csv_rows))
    else:
        rec = _record(args, result)
        if args.timing and started is not None:
            rec["wall_time_s"] = time.perf_counter() - started
        _emit(args, io.dumps(rec))
    if started is not None:
        log.info("%s finished in %.3f s", args.command, time.perf_counter() - started)
    if not ok:
        raise CheckFailed(args.command)


def _region(args):
    if args.region == "diamond":
        return causet.Diamond(args.tau)
    vals = _float_list(args.box or "")
    if len(vals) != 4:
        raise InvalidInput("--box needs t_min,t_max,x_min,x_max")
    return causet.Box(*vals)


# -- commands -----------------------------------------------------------------


def cmd_sprinkle(args):
    started = time.perf_counter()
    cs = causet.sprinkle(_region(args), args.count, args.seed)
    bad = causet.order_violations(cs.relation)
    if bad:
        log.error("sprinkled relation violates %s", bad)
        raise CheckFailed("sprinkle")
    if args.format == "csv":
        _emit(args, io.csv_text(["id", "t", "x"], [(e.id, e.t, e.x) for e in cs.events]))
    else:
        _emit(args, io.dumps(io.causet_to_dict(cs)))
    log.info("sprinkle finished in %.3f s", time.perf_counter() - started)


def cmd_connes_dist(args):
    started = time.perf_counter()
    reference = {}
    if args.triple:
        triple = io.triple_from_dict(_read_json(args.triple))
    elif args.fixture == "two-point":
        triple = spectral.build_two_point_triple(args.m)
        reference = {"closed_form": 1.0 / args.m}
    elif args.fixture == "circle":
        triple = spectral.build_circle_triple(args.n, args.radius)
        gap = min(abs(args.p - args.q), args.n - abs(args.p - args.q))
        reference = {"arc_length": gap * spectral.circle_spacing(args.n, args.radius)}
    else:
        raise InvalidInput("give --triple FILE or --fixture two-point|circle")
    res = spectral.connes_distance(
        triple, args.p, args.q, restarts=args.restarts, max_iter=args.max_iter, seed=args.seed
    )
    out = res.to_dict()
    out["reference"] = reference
    _finish(
        args,
        out,
        ["p", "q", "lower", "upper", "method"],
        [(args.p, args.q, res.lower, res.upper, res.method)],
        started=started,
    )


def _weights_for(cs, source):
    if source == "tau":
        return causet.tau_matrix(cs)
    if source == "links-tau":
        return causet.link_tau_matrix(cs)
    return io.weights_from_dict(cs, _read_json(source))


def cmd_lorentz_dist(args):
    started = time.perf_counter()
    cs = io.causet_from_dict(_read_json(args.causet))
    w = _weights_for(cs, args.weights)
    p, q = cs.index_of(args.p), cs.index_of(args.q)
    res = lorentz.dilatation_distance_monotone(cs, w, p, q)
    ev = cs.events
    res.case_report = {
        "analytic_tau": causet.tau_flat(ev[p], ev[q]),
        "direct_weight": None if math.isnan(w[p, q]) else float(w[p, q]),
        "witness_violations": len(lorentz.dilatation_check(res.witness, cs, w)),
    }
    if args.bruteforce:
        try:
            val, signs, mode = lorentz.dilatation_distance_bruteforce(cs, w, p, q, samples=True, seed=args.seed)
        except InstanceTooLarge as exc:
            raise InvalidInput(str(exc)) from exc
        res.case_report["bruteforce"] = {
            "value": val,
            "signs": list(signs) if signs else [],
            "mode": mode,
            "strict_gap": bool(val < res.value - lorentz.DILATATION_TOL),
        }
    out = res.to_dict(ids=cs.ids)
    _finish(
        args,
        out,
        ["p", "q", "value", "analytic_tau", "path_length"],
        [(args.p, args.q, res.value, res.case_report["analytic_tau"], len(res.dual_path))],
        started=started,
    )


def cmd_cauchy_verify(args):
    started = time.perf_counter()
    if args.model == "continuum":
        model = lorentz.FlatContinuum()
        surface = lorentz.CauchySlice.continuum(args.surface_t)
        pairs = lorentz.sample_causal_pairs_continuum(args.n_pairs, args.seed, args.extent, args.surface_t)
        report = lorentz.verify_cauchy_cases(model, surface, pairs)
        p = (args.surface_t, 0.0)
        q = (args.surface_t + 0.5 * args.extent, 0.0)
        f = lorentz.cauchy_function(model, surface)
        report["equality"] = {"p": list(p), "q": list(q), "abs_df": abs(f(p) - f(q)), "tau": model.d(p, q)}
        report["equality"]["pass"] = abs(report["equality"]["abs_df"] - report["equality"]["tau"]) <= 1e-9
    else:
        cs = io.causet_from_dict(_read_json(args.model))
        model = lorentz.DiscreteModel(cs, _weights_for(cs, args.weights))
        if not args.surface_ids:
            raise InvalidInput("discrete model needs --surface-ids")
        members = [cs.index_of(i) for i in _int_list(args.surface_ids)]
        surface = lorentz.CauchySlice.discrete(members, cs)
        related = [tuple(map(int, ij)) for ij in np.argwhere(cs.relation)]
        if len(related) > args.n_pairs:
            rng = rng_for(args.seed, "cauchy-discrete-pairs")
            pick = np.sort(rng.choice(len(related), size=args.n_pairs, replace=False))
            related = [related[k] for k in pick]
        report = lorentz.verify_cauchy_cases(model, surface, related)
        gaps = [
            lorentz.discrete_surface_gap(model, surface, p, q)
            for p in surface.members
            for q in np.flatnonzero(cs.relation[p])
        ]
        report["equality_gap"] = {
            "pairs": len(gaps),
            "max_gap": max(gaps, default=0.0),
            "mean_gap": float(np.mean(gaps)) if gaps else 0.0,
        }
    ok = all(r[4] for r in report["rows"]) and report.get("equality", {}).get("pass", True)
    rows = [list(r) for r in report["rows"]]
    report["rows"] = rows
    log.info("cauchy-verify summary: %s", report["summary"])
    _finish(
        args,
        report,
        ["pair_id", "case", "lhs", "rhs", "pass"],
        [(k, c, lhs, rhs, "true" if ok_ else "false") for k, c, lhs, rhs, ok_ in rows],
        ok=ok,
        started=started,
    )


def cmd_order_recover(args):
    started = time.perf_counter()
    if args.poset:
        poset = io.poset_from_dict(_read_json(args.poset))
    else:
        poset = order.random_poset(args.random_n, args.seed)
    fam = order.upset_indicators(poset)
    rec = order.order_from_functions(fam)
    ok = bool(np.array_equal(rec, poset.leq))
    out = {
        "poset": io.poset_to_dict(poset),
        "family_size": len(fam.functions),
        "all_isotone": all(order.is_isotone(f, poset) for f in fam.functions),
        "recovered_equals_original": ok,
    }
    _finish(args, out, ok=ok, started=started)


def cmd_istar_check(args):
    started = time.perf_counter()
    if args.cone == "isotone-chain":
        sample = order.isotone_chain_cone(args.dim)
    elif args.cone == "identity":
        sample = order.ConeSample(args.dim, [np.eye(args.dim)])
    else:
        rng = rng_for(args.seed, "istar-generators")
        gens = []
        for _ in range(args.generators):
            x = rng.standard_normal((args.dim, args.dim)) + 1j * rng.standard_normal((args.dim, args.dim))
            gens.append(x + x.conj().T)
        sample = order.ConeSample(args.dim, gens)
    report = order.istar_axioms_check(sample, trials=args.trials, seed=args.seed)
    _finish(args, report, ok=report["all_pass"], started=started)


def _random_gram(rng, dim):
    while True:
        x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        g = x + x.conj().T
        w = np.linalg.eigvalsh(g)
        if np.min(np.abs(w)) > 1e-3 * np.max(np.abs(w)):
            return g


def krein_checks(space, rng, samples=10):
    """Invariant and adjoint checks on one space; returns a report dict."""
    n = space.dim
    rep = krein.invariant_report(space)
    worst_inv = worst_prod = worst_ident = 0.0
    for _ in range(samples):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        scale = max(np.abs(a).max(), np.abs(b).max(), 1.0)
        ax = krein.krein_adjoint(space, a)
        worst_inv = max(worst_inv, np.abs(krein.krein_adjoint(space, ax) - a).max() / scale)
        prod = krein.krein_adjoint(space, a @ b) - krein.krein_adjoint(space, b) @ ax
        worst_prod = max(worst_prod, np.abs(prod).max() / scale**2)
        lhs = space.product(a @ u, v)
        rhs = space.product(u, ax @ v)
        worst_ident = max(worst_ident, abs(lhs - rhs) / max(1.0, abs(lhs)))
    rep["adjoint_involution_error"] = float(worst_inv)
    rep["adjoint_product_error"] = float(worst_prod)
    rep["adjoint_identity_error"] = float(worst_ident)
    rep["pass"] = bool(rep["pass"] and worst_inv <= 1e-9 and worst_prod <= 1e-9 and worst_ident <= 1e-9)
    return rep


def cmd_krein_check(args):
    started = time.perf_counter()
    rng = rng_for(args.seed, "krein-check")
    if args.gram:
        space = io.krein_from_dict(_read_json(args.gram))
    elif args.random_dim:
        space = krein.fundamental_symmetry(_random_gram(rng, args.random_dim))
    else:
        n_plus, n_minus = _int_list(args.canonical)
        space = krein.canonical_space(n_plus, n_minus)
    rep = krein_checks(space, rng)
    if space.signature == (1, 1) and np.array_equal(space.gram, krein.GAMMA0):
        rep["gamma1_krein_selfadjoint"] = krein.is_krein_selfadjoint(space, krein.GAMMA1)
        rep["pass"] = bool(rep["pass"] and rep["gamma1_krein_selfadjoint"])
    rep["space"] = io.krein_to_dict(space)
    _finish(args, rep, ok=rep["pass"], started=started)


def convergence_rows(densities, tau_total, repeats, seed):
    """Link-weighted dilatation distance vs analytic proper time.

    Each sprinkling of density ``rho`` (events per unit area) into the
    diamond of height ``tau_total`` gets two extra events at 20% and 80% of
    the axis, inside the inner 60% of the region; their distance is
    compared against the analytic proper time ``0.6 * tau_total``.
    """
    region = causet.Diamond(tau_total)
    area = 0.5 * tau_total**2
    p_coord, q_coord = (0.2 * tau_total, 0.0), (0.8 * tau_total, 0.0)
    exact = causet.tau_flat(causet.Event(-1, *p_coord), causet.Event(-2, *q_coord))
    rows = []
    for rho in densities:
        count = max(1, int(round(rho * area)))
        values = []
        for rep in range(repeats):
            sub_seed = int(rng_for(seed, "convergence", repr(float(rho)), rep).integers(0, 2**63))
            base = causet.sprinkle(region, count, sub_seed)
            events = list(base.events) + [
                causet.Event(count, *p_coord),
                causet.Event(count + 1, *q_coord),
            ]
            cs = causet.from_events(events)
            res = lorentz.dilatation_distance_monotone(cs, causet.link_tau_matrix(cs), count, count + 1)
            values.append(res.value)
        mean = float(np.mean(values))
        rows.append((float(rho), mean, exact, mean / exact, bool(max(values) <= exact + 1e-9)))
    return rows


def cmd_convergence(args):
    started = time.perf_counter()
    densities = _float_list(args.densities)
    if not densities:
        raise InvalidInput("--densities must list at least one density")
    if any(b < a for a, b in zip(densities, densities[1:])):
        raise InvalidInput("--densities must be ascending")
    if any(d <= 0 for d in densities):
        raise InvalidInput("densities must be positive")
    rows = convergence_rows(densities, args.tau, args.repeats, args.seed)
    ratios = [r[3] for r in rows]
    out = {
        "rows": [list(r) for r in rows],
        "monotone_trend": all(b >= a for a, b in zip(ratios, ratios[1:])),
    }
    header = ["density", "mean_value", "analytic_tau", "ratio", "value_le_tau"]
    csv_rows = [(d, m, t, r, "true" if ok else "false") for d, m, t, r, ok in rows]
    _finish(args, out, header, csv_rows, ok=all(r[4] for r in rows), started=started)


# -- parser -------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root seed (u64)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="output path (default stdout)")
    common.add_argument("--config", help="key = value file; command-line flags override it")
    common.add_argument("--timing", action="store_true", help="include wall time in the record")

    parser = argparse.ArgumentParser(prog="ncdist", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sprinkle", parents=[common], help="sprinkle a causal set")
    p.add_argument("--region", choices=("diamond", "box"), default="diamond")
    p.add_argument("--tau", type=float, default=1.0, help="diamond height")
    p.add_argument("--box", help="t_min,t_max,x_min,x_max")
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_sprinkle)

    p = sub.add_parser("connes-dist", parents=[common], help="spectral distance on a finite triple")
    p.add_argument("--triple", help="triple JSON file")
    p.add_argument("--fixture", choices=("two-point", "circle"))
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-iter", type=int, default=500)
    p.set_defaults(func=cmd_connes_dist)

    p = sub.add_parser("lorentz-dist", parents=[common], help="dilatation distance on a causal set")
    p.add_argument("--causet", required=True)
    p.add_argument("--weights", default="tau", help="tau | links-tau | weights JSON file")
    p.add_argument("--p", type=int, required=True, help="event id")
    p.add_argument("--q", type=int, required=True, help="event id")
    p.add_argument("--bruteforce", action="store_true")
    p.set_defaults(func=cmd_lorentz_dist)

    p = sub.add_parser("cauchy-verify", parents=[common], help="check the Cauchy-surface dilatation")
    p.add_argument("--model", default="continuum", help="continuum | causal set JSON file")
    p.add_argument("--surface-t", type=float, default=0.0)
    p.add_argument("--surface-ids", help="comma-separated event ids (discrete model)")
    p.add_argument("--weights", default="tau")
    p.add_argument("--n-pairs", type=int, default=10000)
    p.add_argument("--extent", type=float, default=1.0, help="height of the sampling diamond")
    p.set_defaults(func=cmd_cauchy_verify)

    p = sub.add_parser("order-recover", parents=[common], help="order recovery from up-set indicators")
    p.add_argument("--poset", help="poset JSON file")
    p.add_argument("--random-n", type=int, default=6)
    p.set_defaults(func=cmd_order_recover)

    p = sub.add_parser("istar-check", parents=[common], help="I*-algebra cone axioms")
    p.add_argument("--cone", choices=("isotone-chain", "identity", "random"), default="isotone-chain")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--generators", type=int, default=4)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=cmd_istar_check)

    p = sub.add_parser("krein-check", parents=[common], help="Krein space invariants")
    p.add_argument("--gram", help="Krein space JSON file")
    p.add_argument("--canonical", default="1,1", help="n_plus,n_minus")
    p.add_argument("--random-dim", type=int)
    p.set_defaults(func=cmd_krein_check)

    p = sub.add_parser("convergence", parents=[common], help="link-weighted distance vs density")
    p.add_argument("--densities", required=True, help="comma-separated, ascending")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--repeats", type=int, default=4)
    p.set_defaults(func=cmd_convergence)
    return parser


def _config_tokens(path):
    """Turn ``key = value`` lines into command-line tokens."""
    tokens = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InvalidInput(f"cannot read config {path}: {exc}") from exc
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"{path}:{num}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() == "true":
            tokens.append(flag)
        elif value.lower() != "false":
            tokens.extend([flag, value])
    return tokens


def _find_config(argv):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        cfg = _find_config(argv)
        if cfg:
            cmd_pos = next((i for i, t in enumerate(argv) if not t.startswith("-")), None)
            if cmd_pos is None:
                raise InvalidInput("--config needs a subcommand")
            argv = argv[: cmd_pos + 1] + _config_tokens(cfg) + argv[cmd_pos + 1 :]
    except InvalidInput as exc:
        print(f"ncdist: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if not 0 <= args.seed < 2**64:
        print("ncdist: error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_INVALID
    try:
        args.func(args)
    except CheckFailed:
        return EXIT_FAIL
    except NotCausallyRelated as exc:
        print(f"ncdist: NotCausallyRelated: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InvalidInput, SingularForm) as exc:
        print(f"ncdist: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
