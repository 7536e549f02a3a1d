"""Metrics, four-model comparison tables, crop selection, plot-data export.

Accuracy is reported as the exact complement of the mean absolute
percentage error (accuracy + error = 100). The comparison table keeps
the literal column name "MSE (%)" for layout compatibility with the
published tables even though the value is the MAPE; report footnotes say
so.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ingest, schema
from .errors import (
    EmptyDataset,
    EmptyTestSet,
    LengthMismatch,
    MissingCropModel,
    NearZeroActual,
    UnknownKind,
)
from .models import Model, predict_records
from .schema import Crop, District

NEAR_ZERO_ACTUAL = 1e-9

METHOD_ORDER = (
    ("dnn", "Deep Neural Network(DNN)"),
    ("svm", "Support Vector Machine(SVM)"),
    ("forest", "Random Forest"),
    ("logistic", "Logistic Regression"),
)

TABLE_HEADER = "Method | Training (%) | Testing (%) | Accuracy (%) | MSE (%)"

PLOT_KINDS = ("max_temp", "min_temp", "avg_rainfall", "production", "yield")
_WEATHER_KINDS = ("max_temp", "min_temp", "avg_rainfall")


@dataclass(frozen=True)
class Metrics:
    error_pct: float
    accuracy_pct: float
    n_test: int


@dataclass(frozen=True)
class EvalRow:
    method: str
    training_pct: float
    testing_pct: float
    accuracy_pct: float
    error_pct: float


@dataclass
class EvalReport:
    rows_by_crop: dict          # Crop -> list[EvalRow]
    source: str
    seed: int
    train_ratio: float = 0.8


@dataclass(frozen=True)
class CropRecommendation:
    predicted: dict   # Crop -> t/ha
    selected: Crop


@dataclass
class PlotSeries:
    kind: str
    points: list  # (District, year, Crop | None, value)


def mape(predictions, actuals) -> float:
    """(100 / n) * sum |pred - actual| / |actual|."""
    p = np.asarray(predictions, dtype=float)
    a = np.asarray(actuals, dtype=float)
    if p.shape != a.shape or p.ndim != 1 or p.size == 0:
        raise LengthMismatch(
            f"predictions {p.shape} vs actuals {a.shape}")
    if np.any(np.abs(a) <= NEAR_ZERO_ACTUAL):
        raise NearZeroActual("an actual value is too close to zero")
    return float(100.0 * np.mean(np.abs(p - a) / np.abs(a)))


def evaluate(model: Model, records) -> Metrics:
    if not records:
        raise EmptyTestSet("no test records")
    predictions = predict_records(model, records)
    actuals = ingest.target_vector(records)
    error = mape(predictions, actuals)
    return Metrics(error_pct=error, accuracy_pct=100.0 - error,
                   n_test=len(records))


def compare(models: dict, test_records, train_ratio: float = 0.8) -> list:
    """One EvalRow per method in fixed order for a single crop's test set."""
    training_pct = 100.0 * train_ratio
    rows = []
    for key, label in METHOD_ORDER:
        metrics = evaluate(models[key], test_records)
        rows.append(EvalRow(
            method=label,
            training_pct=training_pct,
            testing_pct=100.0 - training_pct,
            accuracy_pct=metrics.accuracy_pct,
            error_pct=metrics.error_pct,
        ))
    return rows


def _fmt_pct(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return f"{x:g}"


def render_markdown(report: EvalReport) -> str:
    lines = ["# Crop yield model comparison", ""]
    lines.append(f"Source: {report.source}  ")
    lines.append(f"Seed: {report.seed}")
    lines.append("")
    for crop in Crop:
        if crop not in report.rows_by_crop:
            continue
        lines.append(f"## Evaluation measures of {schema.CROP_DISPLAY_NAMES[crop]}")
        lines.append("")
        lines.append(f"| {TABLE_HEADER} |")
        lines.append("| --- | --- | --- | --- | --- |")
        for row in report.rows_by_crop[crop]:
            lines.append(
                f"| {row.method} | {_fmt_pct(row.training_pct)} "
                f"| {_fmt_pct(row.testing_pct)} "
                f"| {row.accuracy_pct:.2f} | {row.error_pct:.2f} |"
            )
        lines.append("")
    lines.append('*The "MSE (%)" column reports the mean absolute percentage '
                 "error; the column name is kept only for table-layout "
                 "compatibility. Accuracy is its exact complement "
                 "(accuracy + error = 100).*")
    lines.append("")
    return "\n".join(lines)


def report_to_dict(report: EvalReport) -> dict:
    return {
        "source": report.source,
        "seed": report.seed,
        "train_ratio": report.train_ratio,
        "crops": {
            crop.name: [
                {
                    "method": r.method,
                    "training_pct": r.training_pct,
                    "testing_pct": r.testing_pct,
                    "accuracy_pct": r.accuracy_pct,
                    "error_pct": r.error_pct,
                }
                for r in rows
            ]
            for crop, rows in report.rows_by_crop.items()
        },
    }


def select_crop(per_crop_models: dict, record: schema.AgroRecord) -> CropRecommendation:
    """Argmax of per-crop predicted yield; ties break in enumeration order."""
    missing = [c.name for c in Crop if c not in per_crop_models]
    if missing:
        raise MissingCropModel(f"no model for crops: {', '.join(missing)}")
    predicted = {}
    for crop in Crop:
        adjusted = schema.AgroRecord(
            district=record.district, year=record.year, crop=crop,
            weather=record.weather, fertilizer=record.fertilizer,
            land_fractions=record.land_fractions,
            soil_fractions=record.soil_fractions,
            soil_props=record.soil_props, area=record.area,
            production=record.production, yield_t_ha=record.yield_t_ha,
        )
        predicted[crop] = float(
            predict_records(per_crop_models[crop], [adjusted])[0])
    selected = max(Crop, key=lambda c: (predicted[c], -c.value))
    return CropRecommendation(predicted=predicted, selected=selected)


def emit_plot_data(dataset: ingest.Dataset, kind: str) -> PlotSeries:
    """Group records into plot-ready points.

    Weather kinds average per (district, year); production sums and yield
    averages per (district, year, crop).
    """
    if kind not in PLOT_KINDS:
        raise UnknownKind(f"unknown plot kind {kind!r}")
    if not dataset.records:
        raise EmptyDataset("no records to plot")
    groups = {}
    for r in dataset.records:
        if kind in _WEATHER_KINDS:
            key = (r.district, r.year, None)
            value = getattr(r.weather, kind)
        elif kind == "production":
            key = (r.district, r.year, r.crop)
            value = r.production
        else:  # yield
            key = (r.district, r.year, r.crop)
            value = r.yield_t_ha
        groups.setdefault(key, []).append(value)

    def sort_key(item):
        (district, year, crop), _ = item
        return (district.value, year, -1 if crop is None else crop.value)

    points = []
    for (district, year, crop), values in sorted(groups.items(), key=sort_key):
        if kind == "production":
            agg = float(sum(values))
        else:
            agg = float(sum(values) / len(values))
        points.append((district, year, crop, agg))
    return PlotSeries(kind=kind, points=points)


def plot_series_to_csv(series: PlotSeries) -> str:
    lines = ["kind,district,year,crop,value"]
    for district, year, crop, value in series.points:
        crop_name = "" if crop is None else crop.name.lower()
        lines.append(
            f"{series.kind},{district.name.lower()},{year},{crop_name},{value!r}")
    return "\n".join(lines) + "\n"
