"""Command-line interface.

Subcommands: select, train, predict, evaluate, cv, sweep, report. Options
come from ``--config`` (a key=value text file) overridden by individual
flags; no environment variables are consulted. Exit codes: 0 success,
1 usage/config error, 2 data error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, DataError, InvariantError
from .gbt import TrainParams
from .pipeline import (
    RunConfig,
    emit_report,
    load_report,
    run_cv,
    run_evaluate,
    run_predict,
    run_select,
    run_sweep,
    run_train,
)

# config-file keys -> RunConfig field (lambda is spelled reg_lambda internally)
_CONFIG_KEYS = {
    "input": str,
    "task": str,
    "protocol": str,
    "positive_class": str,
    "folds": int,
    "seed": int,
    "n_features": int,
    "k_min": int,
    "k_max": int,
    "k_step": int,
    "val_fraction": float,
    "global_sweep": bool,
    "out_dir": str,
    "format": str,
    "eta": float,
    "rounds": int,
    "max_depth": int,
    "reg_lambda": float,
    "gamma": float,
    "min_child_weight": float,
}
_KEY_ALIASES = {"lambda": "reg_lambda"}
_TRAIN_KEYS = ("eta", "rounds", "max_depth", "reg_lambda", "gamma", "min_child_weight")


def parse_config_file(path: str | Path) -> dict:
    """Parse a key=value config file ('#' comments, blank lines ignored)."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"no such config file: {path}")
    values: dict = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: line {lineno}: expected key = value")
        key, _, text = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        key = _KEY_ALIASES.get(key, key)
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}: line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(_CONFIG_KEYS[key], text.strip(), f"{path}: line {lineno}")
    return values


def _parse_value(kind, text: str, where: str):
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        text = text[1:-1]
    try:
        if kind is bool:
            lowered = text.lower()
            if lowered in ("true", "1", "yes"):
                return True
            if lowered in ("false", "0", "no"):
                return False
            raise ValueError(text)
        return kind(text)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {text!r} as {kind.__name__}") from None


def build_run_config(values: dict) -> RunConfig:
    """Assemble a RunConfig (plus TrainParams) from a flat key/value mapping."""
    train_kwargs = {k: values.pop(k) for k in list(values) if k in _TRAIN_KEYS}
    try:
        params = TrainParams(**train_kwargs)
        return RunConfig(train_params=params, **values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 instead of argparse's 2
        raise ConfigError(message)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--input", help="feature CSV path")
    parser.add_argument("--task", choices=["binary", "multiclass"])
    parser.add_argument("--protocol", choices=["cv", "holdout"])
    parser.add_argument("--positive-class", dest="positive_class")
    parser.add_argument("--folds", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--n-features", dest="n_features", type=int)
    parser.add_argument("--k-min", dest="k_min", type=int)
    parser.add_argument("--k-max", dest="k_max", type=int)
    parser.add_argument("--k-step", dest="k_step", type=int)
    parser.add_argument("--val-fraction", dest="val_fraction", type=float)
    parser.add_argument("--global-sweep", dest="global_sweep", action="store_true", default=None)
    parser.add_argument("--eta", type=float)
    parser.add_argument("--rounds", type=int)
    parser.add_argument("--max-depth", dest="max_depth", type=int)
    parser.add_argument("--lambda", dest="reg_lambda", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--min-child-weight", dest="min_child_weight", type=float)
    parser.add_argument("--out-dir", dest="out_dir")
    parser.add_argument("--format", choices=["json", "text"])


def _make_parser() -> _Parser:
    parser = _Parser(prog="selboost", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", parents=[], help="rank features by ANOVA F score")
    _common_flags(p)
    p.add_argument("--scores-out", help="write feature,msb,msw,f,rank CSV here")
    p.add_argument("--selection-out", help="write a selection JSON (needs --n-features)")

    p = sub.add_parser("train", help="fit on the full dataset; save model + selection")
    _common_flags(p)

    p = sub.add_parser("predict", help="predict a feature CSV with saved artifacts")
    _common_flags(p)
    p.add_argument("--model", required=True)
    p.add_argument("--selection", required=True)
    p.add_argument("--out", required=True, help="predictions CSV path")

    p = sub.add_parser("evaluate", help="score a labeled CSV with saved artifacts")
    _common_flags(p)
    p.add_argument("--model", required=True)
    p.add_argument("--selection", required=True)

    p = sub.add_parser("cv", help="cross-validation (or holdout) experiment")
    _common_flags(p)

    p = sub.add_parser("sweep", help="feature-count sweep on a validation carve")
    _common_flags(p)

    p = sub.add_parser("report", help="re-render a saved report JSON")
    _common_flags(p)
    p.add_argument("--report", required=True, help="existing report.json")
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        values.update(parse_config_file(args.config))
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return build_run_config(values)


def _require(config: RunConfig, field: str) -> None:
    if getattr(config, field) is None:
        raise ConfigError(f"missing required option --{field.replace('_', '-')}")


def _emit_json(payload: dict, out_dir: str | None, stem: str) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.json").write_text(text, encoding="utf-8")
        print(out / f"{stem}.json")
    else:
        print(text, end="")


def _dispatch(args: argparse.Namespace) -> None:
    if args.command == "predict":
        config = _resolve_config(args)
        _require(config, "input")
        out = run_predict(args.model, args.selection, config.input, args.out)
        print(out)
        return

    if args.command == "evaluate":
        config = _resolve_config(args)
        _require(config, "input")
        result = run_evaluate(
            args.model, args.selection, config.input, positive_class=config.positive_class
        )
        if config.format == "text":
            from .metrics import MetricsReport, reports_table

            columns = []
            for key, value in result["metrics"].items():
                if isinstance(value, list):
                    continue
                columns.append((key, MetricsReport.from_dict(value)))
            print(f"Evaluated {result['n_samples']} samples; "
                  f"positive class {result['positive_class']['name']}")
            print(reports_table(columns), end="")
        else:
            _emit_json(result, config.out_dir, "evaluation")
        return

    if args.command == "report":
        config = _resolve_config(args)
        report = load_report(args.report)
        if config.out_dir:
            print(emit_report(report, config.format, config.out_dir))
        else:
            from .pipeline import render_report_json, render_report_text

            print(
                render_report_text(report)
                if config.format == "text"
                else render_report_json(report),
                end="",
            )
        return

    config = _resolve_config(args)
    _require(config, "input")

    if args.command == "select":
        result = run_select(
            config, scores_out=args.scores_out, selection_out=args.selection_out
        )
        _emit_json(result, config.out_dir, "selection_ranking")
    elif args.command == "train":
        model_path, selection_path = run_train(config)
        print(model_path)
        print(selection_path)
    elif args.command == "sweep":
        result = run_sweep(config)
        _emit_json(result.to_dict(), config.out_dir, "sweep")
    elif args.command == "cv":
        report = run_cv(config)
        if config.out_dir:
            print(emit_report(report, config.format, config.out_dir))
        else:
            from .pipeline import render_report_json, render_report_text

            print(
                render_report_text(report)
                if config.format == "text"
                else render_report_json(report),
                end="",
            )
    else:  # pragma: no cover - argparse guards this
        raise ConfigError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
        _dispatch(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
