"""Command-line interface.

Subcommands:

* ``params``       exact complexity parameters of a graph/class pair
* ``learn``        fit one learner on a seeded draw and report exact risk
* ``hardinstance`` generate a hard-instance description file
* ``sweep``        run a config-driven experiment grid to CSV (and
                   optionally plot data and a rendered figure)
* ``oig``          debug view of the canonical pattern-class orientation

Exit codes: 0 success, 2 bad configuration or input file, 3 a search or
enumeration exceeded its resource budget.  The ``CONDAVG_BUDGET``
environment variable overrides the default search budget everywhere.
"""

import argparse
import json
import sys

from .errors import CondavgError, ConfigError, ResourceLimitError
from .graphs import load_graph
from .concepts import load_concept_class
from .hardness import (
    gen_bichromatic_instance,
    gen_shattered_instance,
    perturbed_distribution,
    sample_sign_string,
)
from .harness import (
    _concept_by_index,
    load_config,
    run_sweep,
    write_plot_data,
    write_sweep_csv,
    write_text_atomic,
)
from .learner import choose_k, fit_amplified, fit_erm, fit_neighbor_average
from .measure import LabeledSample, draw_sample, load_distribution, risk
from .oig import PatternClass, canonical_orientation
from .params import compute_param_report
from .rng import mix_seed, philox


def _cmd_params(args) -> int:
    g = load_graph(args.graph)
    cc = load_concept_class(getattr(args, "class"))
    report = compute_param_report(g, cc, args.budget)
    json.dump(report.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_learn(args) -> int:
    g = load_graph(args.graph)
    cc = load_concept_class(getattr(args, "class"))
    d = load_distribution(args.dist)
    if d.n != g.n or cc.n != g.n:
        raise ConfigError("graph, class, and distribution sizes must agree")
    concept = _concept_by_index(cc, args.concept_index)
    sample = draw_sample(d, concept, args.m, args.seed)
    if args.amplify is not None and args.erm:
        raise ConfigError("--amplify and --erm are mutually exclusive")
    if args.amplify is not None:
        k = choose_k(args.amplify)
        model = fit_amplified(g, cc, sample, k)
    elif args.erm:
        half = args.m // 2
        model = fit_erm(
            g,
            cc,
            LabeledSample(sample.items[:half]),
            LabeledSample(sample.items[half:]),
        )
    else:
        model = fit_neighbor_average(g, cc, sample)
    out = {
        "mode": model.mode,
        "m": args.m,
        "seed": args.seed,
        "risk": risk(g, d, concept, model),
    }
    if args.predictions:
        out["predictions"] = list(model.predict_all())
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_hardinstance(args) -> int:
    g = load_graph(args.graph)
    cc = load_concept_class(getattr(args, "class"))
    if args.family == "shattered":
        inst = gen_shattered_instance(g, cc, args.eps, args.budget)
        doc = json.loads(inst.to_json())
        # A seeded example target: one uniform pattern on the shattered set.
        k = len(inst.independent_set)
        bits = philox(mix_seed(args.seed, 1)).integers(0, 2, size=k)
        doc["example_target"] = list(inst.concept_for([int(b) for b in bits]).labels)
    else:
        concept = _concept_by_index(cc, args.concept_index)
        inst = gen_bichromatic_instance(g, concept, args.eps, args.budget)
        doc = json.loads(inst.to_json())
        signs = sample_sign_string(inst.k, mix_seed(args.seed, 2))
        doc["sign_string"] = list(signs)
        doc["perturbed_weights"] = list(perturbed_distribution(inst, signs).weights)
    write_text_atomic(args.out, json.dumps(doc, indent=2) + "\n")
    print(f"wrote {args.family} instance to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    config = load_config(args.config)
    if args.workers is not None:
        config = type(config).from_dict(
            {**json.loads(config.canonical_json()), "workers": args.workers}
        )
    result = run_sweep(config)
    write_sweep_csv(result, args.out)
    written = [args.out]
    if args.plot:
        write_plot_data([result], args.plot)
        written.append(args.plot)
    if args.fig:
        from .plotting import render_risk_curves

        render_risk_curves([result], args.fig)
        written.append(args.fig)
    print(f"wrote {', '.join(written)} ({len(result.records)} records)")
    return 0


def _cmd_oig(args) -> int:
    with open(args.patterns, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid patterns JSON: {exc.msg}") from exc
    rows = doc.get("patterns") if isinstance(doc, dict) else doc
    if not isinstance(rows, list) or not rows:
        raise ConfigError('patterns file must hold {"patterns": [[0, 1, ...], ...]}')
    try:
        pc = PatternClass(len(rows[0]), rows)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    oig, orientation = canonical_orientation(pc)
    doc = {
        "rows": [list(r) for r in pc.rows],
        "max_out_degree": orientation.max_out_degree,
        "out_degrees": list(orientation.out_degrees),
        "edges": [
            {
                "u": list(pc.rows[i]),
                "v": list(pc.rows[j]),
                "coord": coord,
                "head": list(pc.rows[orientation.heads[pos]]),
            }
            for pos, (i, j, coord) in enumerate(oig.edges)
        ],
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="condavg",
        description="Neighborhood-average learning on directed graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="exact complexity parameters of an instance")
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--class", required=True, help="concept class JSON file")
    p.add_argument("--budget", type=int, default=None, help="search node budget")
    p.set_defaults(func=_cmd_params)

    p = sub.add_parser("learn", help="fit a learner on one seeded draw")
    p.add_argument("--graph", required=True)
    p.add_argument("--class", required=True)
    p.add_argument("--dist", required=True, help="distribution JSON file")
    p.add_argument("--concept-index", type=int, default=0)
    p.add_argument("--m", type=int, required=True, help="sample size")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument(
        "--amplify",
        type=float,
        default=None,
        metavar="DELTA",
        help="median-amplified mode at this confidence",
    )
    p.add_argument("--erm", action="store_true", help="ERM-plus-smoothing mode")
    p.add_argument(
        "--predictions", action="store_true", help="include per-vertex predictions"
    )
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("hardinstance", help="generate a hard-instance file")
    p.add_argument("--graph", required=True)
    p.add_argument("--class", required=True)
    p.add_argument(
        "--family", required=True, choices=("shattered", "bichromatic")
    )
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--concept-index", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_hardinstance)

    p = sub.add_parser("sweep", help="run a config-driven experiment grid")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--plot", default=None, help="also write plot data here")
    p.add_argument("--fig", default=None, help="also render a figure here")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oig", help="inspect a pattern-class orientation")
    p.add_argument("--patterns", required=True, help="patterns JSON file")
    p.set_defaults(func=_cmd_oig)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CondavgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
