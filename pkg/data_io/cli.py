"""
Command-line front end.

    generate       sample the synthetic task to CSV (and its exact table)
    attack         build poison, queries and attack model; save artifacts
    game           run the game from the config; write the results CSV
    sweep          sweep one parameter; write the results CSV
    oracle         play the exact Bayes-learner game
    verify-theory  run the closed-form checks; write the report CSV
    metrics        evaluate a saved model on a CSV dataset
    modules        list the modules and their features

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from typing import Any, List, Optional, Sequence

from attack import save_attack_model, save_poison, save_queries
from bayes_oracle import TheoremParams, build_band_distribution, run_theory_suite, write_report
from distributions import condition, sample
from game import (
    SWEEP_PARAMETERS,
    OracleGameConfig,
    artifact_seed,
    build_attack,
    experiment_frame,
    results_frame,
    run_experiment,
    run_oracle_experiment,
    sweep,
    write_results,
)
from seeding import derive_seed
from target_models import load_model, metrics

from .csv_io import read_dataset, save_csv
from .experiment import ExperimentConfig, build_game
from .synthetic import generate_synthetic

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
DEFAULT_CONFIG = "config.json"


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="master seed")
    parser.add_argument("--config", default=default, help="JSON config file")
    parser.add_argument("--out", default=default, help="output path")
    parser.add_argument("--threads", type=int, default=default, help="worker threads")
    parser.add_argument("--log-level", default=default,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging level")
    parser.add_argument("--progress", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="show progress bars")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisonsnek",
        description="PoisonSnek 🐍🧪 property inference with poisoning")
    _global_options(parser, suppress=False)
    commands = parser.add_subparsers(dest="command", metavar="command")

    def command(name: str, text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=text, description=text)
        _global_options(sub, suppress=True)
        return sub

    generate = command("generate", "sample the synthetic task to CSV")
    generate.add_argument("--samples", type=int, default=1000, help="rows to draw")
    generate.add_argument("--t", type=float, default=None,
                          help="property fraction of the sample (default: the task's own rate)")
    generate.add_argument("--table", default=None, help="also write the exact pmf table here")

    command("attack", "build and save poison, queries and attack model")
    command("game", "run the game from the configuration")

    sweeper = command("sweep", "sweep one parameter")
    sweeper.add_argument("--param", required=True, choices=sorted(SWEEP_PARAMETERS))
    sweeper.add_argument("--values", required=True, help="comma-separated values")

    oracle = command("oracle", "play the exact Bayes-learner game")
    oracle.add_argument("--trials", type=int, default=100)
    oracle.add_argument("--p", type=float, default=0.1)
    oracle.add_argument("--t0", type=float, default=0.3)
    oracle.add_argument("--t1", type=float, default=0.7)

    command("verify-theory", "run the closed-form checks")
    command("modules", "list the PoisonSnek modules")

    evaluate = command("metrics", "evaluate a saved model on a CSV dataset")
    evaluate.add_argument("--model", required=True, help="model JSON file")
    evaluate.add_argument("--data", required=True, help="CSV with a label column")
    evaluate.add_argument("--label-column", default="label")
    return parser


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    from config_manager import ConfigManager

    if args.config:
        manager = ConfigManager(args.config, strict=True)
    else:
        manager = ConfigManager(DEFAULT_CONFIG)
    return manager.experiment().with_overrides(args.seed, args.threads, args.out)


def _parse_values(text: str) -> List[Any]:
    values: List[Any] = []
    for item in (part.strip() for part in text.split(",")):
        if not item:
            continue
        try:
            number = float(item)
            values.append(int(number) if number.is_integer() and "." not in item else number)
        except ValueError:
            values.append(item)
    return values


def _output(cfg: ExperimentConfig, fallback: str) -> str:
    return cfg.out or fallback


def cmd_generate(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    if cfg.synthetic is None:
        raise ValueError("generate needs a synthetic data source in the config")
    task = generate_synthetic(cfg.synthetic)
    rate = cfg.synthetic.property_rate if args.t is None else args.t
    if task.finite is not None and args.t is None:
        rate = task.finite.property_mass(task.f)
    data = sample(task.mixture(rate), args.samples, derive_seed(cfg.seed, 0))
    path = _output(cfg, "synthetic.csv")
    save_csv(data, path)
    if args.table:
        if task.finite is None:
            raise ValueError("the configured task has continuous features; no exact table")
        task.finite.save_table(args.table)
    print(f"Wrote {len(data)} samples ({task.dim} features, temperature "
          f"{task.temperature:.4f}) to {path}")
    return 0


def cmd_attack(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    game = build_game(cfg)
    artifacts = build_attack(game, artifact_seed(game.seed), progress=args.progress)
    folder = _output(cfg, "artifacts")
    os.makedirs(folder, exist_ok=True)
    save_poison(artifacts.poison, os.path.join(folder, "poison.csv"))
    save_queries(artifacts.queries, os.path.join(folder, "queries.csv"))
    save_attack_model(artifacts.attack_model, os.path.join(folder, "attack_model.json"))
    print(f"Saved {len(artifacts.poison)} poison points, {len(artifacts.queries)} queries "
          f"and the attack model to {folder}")
    return 0


def cmd_game(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    result = run_experiment(build_game(cfg), progress=args.progress)
    path = _output(cfg, "results.csv")
    write_results(experiment_frame("poison_rate", cfg.p, result), path)
    print(f"Attack accuracy {result.accuracy:.3f} [{result.ci_low:.3f}, {result.ci_high:.3f}] "
          f"over {result.trials} trials; results in {path}")
    return 0


def cmd_sweep(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    values = _parse_values(args.values)
    outcome = sweep(build_game(cfg), args.param, values, progress=args.progress)
    path = _output(cfg, "sweep.csv")
    write_results(results_frame(outcome), path)
    for value, accuracy in zip(outcome.values, outcome.accuracies()):
        print(f"{args.param}={value}: accuracy {accuracy:.3f}")
    return 0


def cmd_oracle(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    params = TheoremParams(p=args.p, t0=args.t0, t1=args.t1)
    dist, f = build_band_distribution(params, seed=cfg.seed)
    game = OracleGameConfig(condition(dist, f, 1), condition(dist, f, 0), f, params,
                            trials=args.trials, seed=cfg.seed, workers=cfg.threads)
    result = run_oracle_experiment(game)
    print(f"Oracle game: {result.wins}/{result.trials} wins")
    return 0


def cmd_verify_theory(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    results = run_theory_suite(seed=cfg.seed, workers=cfg.threads or 1)
    path = _output(cfg, "theory_report.csv")
    write_report(results, path)
    failed = [r.check for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed; report in {path}")
    if failed:
        logger.error(f"Failed checks: {', '.join(failed)}")
        return 1
    return 0


def cmd_metrics(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    model = load_model(args.model)
    data, _ = read_dataset(args.data, label_column=args.label_column)
    quality = metrics(model, data)
    text = json.dumps(asdict(quality), indent=2)
    if cfg.out:
        with open(cfg.out, "w") as f:
            f.write(text + "\n")
    print(text)
    return 0


def cmd_modules(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    import attack
    import bayes_oracle
    import data_io
    import distributions
    import game
    import target_models

    for module in (distributions, bayes_oracle, target_models, attack, game, data_io):
        info = module.get_module_info()
        print(f"{info['name']} v{info['version']}: {info['description']}")
        for feature in info["features"]:
            print(f"    - {feature}")
    return 0


COMMANDS = {
    "modules": cmd_modules,
    "generate": cmd_generate,
    "attack": cmd_attack,
    "game": cmd_game,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "verify-theory": cmd_verify_theory,
    "metrics": cmd_metrics,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    try:
        cfg = _load_config(args)
        level = args.log_level or cfg.log_level
        logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT)
        return COMMANDS[args.command](args, cfg)
    except (ValueError, RuntimeError, OSError, KeyError) as exc:
        logger.error(f"{args.command} failed: {exc}")
        print(f"Error: {exc}", file=sys.stderr)
        return 1
