"""Command-line entry point.

Subcommands: generate, clean, train, evaluate, report, plot-data, select.
Flag precedence: command line > --config JSON file > AGROYIELD_SEED env
var (seed only) > built-in defaults. Exit codes: 0 success, 1 usage
error, 2 data error, 3 training failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import evaluation, ingest, pipeline, synthgen
from .errors import AgroYieldError, DivergedLoss, MalformedConfig
from .models import load_model, save_model
from .rng import derive_seed
from .schema import Crop, District, parse_crop

log = logging.getLogger("agroyield")

_CONFIG_FIELDS = {
    "seed": int,
    "train_ratio": float,
    "n": int,
    "noise_sigma": float,
    "epochs": int,
    "lr": float,
    "trees": int,
    "batch_size": int,
    "patience": int,
    "model": str,
    "crop": str,
    "responses": str,
}

_DEFAULTS = {
    "seed": 0,
    "train_ratio": 0.8,
    "n": 10000,
    "noise_sigma": 0.05,
    "epochs": None,
    "lr": None,
    "trees": 100,
    "batch_size": 32,
    "patience": 20,
    "model": None,
    "crop": None,
    "responses": None,
}


def load_config(path) -> dict:
    """Parse a JSON config file, validating field names, types and ranges."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise MalformedConfig(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedConfig(
            f"config {path} is not valid JSON at line {exc.lineno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise MalformedConfig(f"config {path} must be a JSON object")
    out = {}
    for key, value in raw.items():
        if key not in _CONFIG_FIELDS:
            raise MalformedConfig(f"config {path}: unknown field {key!r}")
        if value is not None:
            try:
                value = _CONFIG_FIELDS[key](value)
            except (TypeError, ValueError) as exc:
                raise MalformedConfig(
                    f"config {path}: field {key!r}: {exc}") from exc
        out[key] = value
    ratio = out.get("train_ratio")
    if ratio is not None and not 0.0 < ratio < 1.0:
        raise MalformedConfig(
            f"config {path}: train_ratio must be in (0, 1), got {ratio}")
    if out.get("noise_sigma") is not None and out["noise_sigma"] < 0:
        raise MalformedConfig(f"config {path}: noise_sigma must be >= 0")
    return out


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge defaults < env seed < config file < explicit flags."""
    effective = dict(_DEFAULTS)
    env_seed = os.environ.get("AGROYIELD_SEED")
    if env_seed is not None:
        try:
            effective["seed"] = int(env_seed)
        except ValueError as exc:
            raise MalformedConfig(f"AGROYIELD_SEED is not an integer") from exc
    if getattr(args, "config", None):
        file_values = load_config(args.config)
        for key, value in file_values.items():
            if value is not None:
                effective[key] = value
    flag_names = {"seed", "ratio", "n", "noise", "epochs", "lr", "trees",
                  "model", "crop", "responses"}
    rename = {"ratio": "train_ratio", "noise": "noise_sigma"}
    for flag in flag_names:
        value = getattr(args, flag, None)
        if value is not None:
            effective[rename.get(flag, flag)] = value
    if not 0.0 < effective["train_ratio"] < 1.0:
        raise MalformedConfig(
            f"train_ratio must be in (0, 1), got {effective['train_ratio']}")
    log.info("effective config: %s", json.dumps(effective, sort_keys=True))
    return effective


def _hyper(cfg: dict) -> pipeline.Hyperparams:
    return pipeline.Hyperparams(
        epochs=cfg["epochs"], learning_rate=cfg["lr"], trees=cfg["trees"],
        batch_size=cfg["batch_size"], patience=cfg["patience"],
    )


def _load_clean(cfg: dict, path) -> ingest.Dataset:
    return ingest.clean(ingest.load_csv(path))


def _write_text(path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ----------------------------------------------------------- subcommands

def _cmd_generate(args, cfg):
    n = cfg["n"]
    if args.coverage:
        n = len(District) * 10 * len(Crop)  # every (district, year, crop)
    gen_cfg = synthgen.GenConfig(
        n_records=n,
        seed=derive_seed(cfg["seed"], "synthgen"),
        noise_sigma=cfg["noise_sigma"],
    )
    responses = synthgen.load_responses(cfg["responses"])
    dataset = synthgen.generate(gen_cfg, responses)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    ingest.write_csv(dataset, args.out)
    log.info("wrote %d records to %s", len(dataset.records), args.out)
    return 0


def _cmd_clean(args, cfg):
    dataset = ingest.clean(ingest.load_csv(args.data))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ingest.write_csv(dataset, out / "cleaned.csv")
    _write_text(out / "cleaning_log.jsonl", ingest.cleaning_log_jsonl(dataset))
    log.info("kept %d records, logged %d removals",
             len(dataset.records), len(dataset.cleaning_log))
    return 0


def _cmd_train(args, cfg):
    if cfg["model"] is None or cfg["crop"] is None:
        raise MalformedConfig("train requires --model and --crop")
    crop = parse_crop(cfg["crop"])
    dataset = _load_clean(cfg, args.data)
    crop_split = pipeline.prepare_crop_split(
        dataset, crop, cfg["train_ratio"], cfg["seed"])
    model = pipeline.train_variant(cfg["model"], crop_split, cfg["seed"],
                                   _hyper(cfg))
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    save_model(model, args.out)
    history = getattr(model, "history", None)
    if history is not None:
        _write_text(str(args.out) + ".history.csv", history.to_csv())
    log.info("saved %s model for %s to %s", cfg["model"], crop.name, args.out)
    return 0


def _cmd_evaluate(args, cfg):
    dataset = _load_clean(cfg, args.data)
    results = {}
    for path in args.models:
        model = load_model(path)
        if model.crop is None:
            raise MalformedConfig(f"model file {path} carries no crop tag")
        crop_split = pipeline.prepare_crop_split(
            dataset, model.crop, cfg["train_ratio"], cfg["seed"])
        metrics = evaluation.evaluate(model, crop_split.test.records)
        results[str(path)] = {
            "variant": model.variant,
            "crop": model.crop.name,
            "accuracy_pct": metrics.accuracy_pct,
            "error_pct": metrics.error_pct,
            "n_test": metrics.n_test,
        }
    text = json.dumps(results, sort_keys=True, indent=2) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_report(args, cfg):
    dataset = _load_clean(cfg, args.data)
    out = Path(args.out)
    (out / "models").mkdir(parents=True, exist_ok=True)
    rows_by_crop = {}
    for crop in Crop:
        if not any(r.crop is crop for r in dataset.records):
            continue
        crop_split = pipeline.prepare_crop_split(
            dataset, crop, cfg["train_ratio"], cfg["seed"])
        trained = {}
        for variant, _ in evaluation.METHOD_ORDER:
            model = pipeline.train_variant(variant, crop_split, cfg["seed"],
                                           _hyper(cfg))
            trained[variant] = model
            save_model(model, out / "models" / f"{crop.name.lower()}_{variant}.json")
        rows_by_crop[crop] = evaluation.compare(
            trained, crop_split.test.records, cfg["train_ratio"])
        log.info("evaluated %s", crop.name)
    report = evaluation.EvalReport(
        rows_by_crop=rows_by_crop, source=dataset.source,
        seed=cfg["seed"], train_ratio=cfg["train_ratio"])
    _write_text(out / "report.md", evaluation.render_markdown(report))
    _write_text(out / "report.json",
                json.dumps(evaluation.report_to_dict(report), sort_keys=True,
                           indent=2) + "\n")
    return 0


def _cmd_plot_data(args, cfg):
    dataset = _load_clean(cfg, args.data)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    kinds = [args.kind] if args.kind else list(evaluation.PLOT_KINDS)
    for kind in kinds:
        series = evaluation.emit_plot_data(dataset, kind)
        _write_text(out / f"{kind}.csv", evaluation.plot_series_to_csv(series))
    return 0


def _cmd_select(args, cfg):
    per_crop = {}
    for path in args.models:
        model = load_model(path)
        if model.crop is None:
            raise MalformedConfig(f"model file {path} carries no crop tag")
        per_crop[model.crop] = model
    dataset = _load_clean(cfg, args.data)
    if not dataset.records:
        raise MalformedConfig(f"{args.data} has no valid records")
    record = dataset.records[0]
    rec = evaluation.select_crop(per_crop, record)
    doc = {
        "district": record.district.name,
        "year": record.year,
        "predicted_yield_t_ha": {c.name: rec.predicted[c] for c in Crop},
        "selected": rec.selected.name,
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agroyield",
        description="Crop selection and yield prediction pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, data=True):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--ratio", type=float, help="train fraction")
        if data:
            p.add_argument("--data", required=True, help="input CSV")

    p = sub.add_parser("generate", help="write a synthetic dataset CSV")
    common(p, data=False)
    p.add_argument("--n", type=int)
    p.add_argument("--noise", type=float, help="relative noise sigma")
    p.add_argument("--coverage", action="store_true",
                   help="one record per (district, year, crop)")
    p.add_argument("--responses", help="crop-response JSON file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("clean", help="deduplicate and drop invalid records")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_clean)

    p = sub.add_parser("train", help="train one model for one crop")
    common(p)
    p.add_argument("--model", choices=["dnn", "svm", "forest", "logistic"])
    p.add_argument("--crop")
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--trees", type=int)
    p.add_argument("--out", required=True, help="model JSON path")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="evaluate saved models")
    common(p)
    p.add_argument("models", nargs="+", help="model JSON files")
    p.add_argument("--out", help="metrics JSON path (default stdout)")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("report", help="full 4-model x per-crop comparison")
    common(p)
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--trees", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("plot-data", help="emit plot-ready CSV series")
    common(p)
    p.add_argument("--kind", choices=list(evaluation.PLOT_KINDS))
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_plot_data)

    p = sub.add_parser("select", help="recommend the best crop for a record")
    common(p)
    p.add_argument("models", nargs="+", help="six per-crop model files")
    p.add_argument("--out", help="recommendation JSON path (default stdout)")
    p.set_defaults(func=_cmd_select)

    return parser


def run(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s",
                        stream=sys.stderr, force=True)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except DivergedLoss as exc:
        log.error("training failure: %s", exc)
        return 3
    except AgroYieldError as exc:
        log.error("data error: %s", exc)
        return 2
    except OSError as exc:
        log.error("data error: %s", exc)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
