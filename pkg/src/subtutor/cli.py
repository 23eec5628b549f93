"""Command-line interface.

Subcommands:
  run    -- execute an experiment from a config file (plus override flags)
  synth  -- generate a synthetic corpus/hierarchy into a directory
  link   -- build the ingredient->class assignments cache from a hierarchy

Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import corpus, knowledge, runner, synth
from .errors import ConfigError, DataError


def _add_run_parser(subparsers):
    parser = subparsers.add_parser("run", help="run an experiment")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--dataset")
    parser.add_argument("--vocabulary")
    parser.add_argument("--aliases")
    parser.add_argument("--classes")
    parser.add_argument("--edges")
    parser.add_argument("--assignments")
    parser.add_argument("--embeddings")
    parser.add_argument("--learner", choices=runner.LEARNERS)
    parser.add_argument("--repr", dest="representation",
                        choices=("one_hot", "one_hot_kg", "dense"))
    parser.add_argument("--policy", choices=("random", "balanced"))
    parser.add_argument("--source-weight", type=float, dest="source_weight")
    parser.add_argument("--checkpoints",
                        help="comma list of counts and/or 'all', "
                             "e.g. 100,1000,all")
    parser.add_argument("--runs", type=int, dest="n_runs")
    parser.add_argument("--seed", type=int, dest="base_seed")
    parser.add_argument("--out", dest="out_dir")
    parser.add_argument("--dump-order", action="store_true", default=None,
                        dest="dump_order",
                        help="write each run's emitted example order")


def _add_synth_parser(subparsers):
    parser = subparsers.add_parser("synth",
                                   help="generate a synthetic corpus")
    parser.add_argument("--out", required=True)
    parser.add_argument("--ingredients", type=int,
                        default=synth.DEFAULT_SYNTH["n_ingredients"])
    parser.add_argument("--classes", type=int,
                        default=synth.DEFAULT_SYNTH["n_classes"])
    parser.add_argument("--recipes", type=int,
                        default=synth.DEFAULT_SYNTH["n_recipes"])
    parser.add_argument("--examples", type=int,
                        default=synth.DEFAULT_SYNTH["n_examples"])
    parser.add_argument("--rules", type=int,
                        default=synth.DEFAULT_SYNTH["n_rules"])
    parser.add_argument("--skew", type=float,
                        default=synth.DEFAULT_SYNTH["skew"])
    parser.add_argument("--seed", type=int,
                        default=synth.DEFAULT_SYNTH["seed"])


def _add_link_parser(subparsers):
    parser = subparsers.add_parser(
        "link", help="compute the ingredient->class assignments cache")
    parser.add_argument("--vocabulary", required=True)
    parser.add_argument("--classes", required=True)
    parser.add_argument("--edges", required=True)
    parser.add_argument("--threshold", type=float,
                        default=knowledge.DEFAULT_THRESHOLD)
    parser.add_argument("--max-hops", type=int,
                        default=knowledge.DEFAULT_MAX_HOPS)
    parser.add_argument("--out", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subtutor",
        description="Incremental teaching simulator for ingredient "
                    "substitution")
    parser.add_argument("-v", "--verbose", action="store_true")
    subparsers = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(subparsers)
    _add_synth_parser(subparsers)
    _add_link_parser(subparsers)
    return parser


def _cmd_run(args) -> int:
    config = runner.load_config(args.config) if args.config \
        else runner.ExperimentConfig()
    for key in ("dataset", "vocabulary", "aliases", "classes", "edges",
                "assignments", "embeddings", "learner", "representation",
                "policy", "source_weight", "n_runs", "base_seed", "out_dir",
                "dump_order"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    if args.checkpoints is not None:
        config.checkpoints = runner.parse_checkpoints(args.checkpoints)
    summary = runner.run_experiment(config)
    for record in summary["aggregated"]:
        print(f"{record.split:>10} @{record.examples_seen:>7}: "
              f"hit@1 {record.mean['hit1']:.4f}  "
              f"hit@10 {record.mean['hit10']:.4f}  "
              f"mrr {record.mean['mrr']:.4f}  (n={record.n_runs})")
    print(f"wrote {summary['aggregate']}")
    return 0


def _cmd_synth(args) -> int:
    config = synth.SynthConfig(
        n_ingredients=args.ingredients, n_classes=args.classes,
        n_recipes=args.recipes, n_examples=args.examples,
        n_rules=args.rules, skew=args.skew, seed=args.seed)
    paths = synth.write_synth_files(config, args.out)
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")
    return 0


def _cmd_link(args) -> int:
    vocab = corpus.load_vocabulary(args.vocabulary)
    hierarchy = knowledge.load_hierarchy(args.classes, args.edges)
    assignments = knowledge.link_and_expand(vocab, hierarchy,
                                            args.threshold, args.max_hops)
    knowledge.save_assignments(assignments, args.out)
    classes = {a.class_id for a in assignments}
    ingredients = {a.ingredient for a in assignments}
    print(f"{len(assignments)} assignments over {len(classes)} classes "
          f"for {len(ingredients)} ingredients -> {args.out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    commands = {"run": _cmd_run, "synth": _cmd_synth, "link": _cmd_link}
    try:
        return commands[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - map anything else to code 4
        print(f"runtime error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
