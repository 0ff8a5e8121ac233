"""Write a run report as JSON, CSV tables and SVG charts."""

import json
import os

from ..metrics import METRICS
from .svg import grouped_bars, scatter_grid

METRIC_TITLES = ("Accuracy", "Precision", "Recall", "Specificity", "F1")
OUTPUT_FILES = (
    "results.json",
    "table2.csv",
    "svm_means.csv",
    "qsvm_means.csv",
    "bars_classical.svg",
    "bars_quantum.svg",
    "pca_subsets.svg",
)


def fmt3(value):
    return f"{value:.3f}"


def to_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def table2_csv(report):
    rows = [
        [c["model"], c["subset"], *(fmt3(c["metrics"][m]) for m in METRICS)]
        for c in report["cells"]
        if c["family"] == "quantum"
    ]
    return _csv(("feature_map", "subset") + METRICS, rows)


def means_csv(report, family):
    rows = [
        [r["model"], *(fmt3(r[m]) for m in METRICS)]
        for r in report["means"]
        if r["family"] == family
    ]
    return _csv(("model",) + METRICS, rows)


def bars_svg(report, family, title):
    means = [r for r in report["means"] if r["family"] == family]
    values = [[r[m] for m in METRICS] for r in means]
    return grouped_bars(title, METRIC_TITLES, [r["model"] for r in means], values)


def pca_svg(report):
    panels = [
        {
            "title": f"Subset {p['subset']} (PC1 {100 * p['explained'][0]:.1f}%, "
            f"PC2 {100 * p['explained'][1]:.1f}%)",
            "coords": p["coords"],
            "labels": p["labels"],
        }
        for p in report["pca"]
    ]
    return scatter_grid(panels, cols=3, title="PCA projection of the balanced subsets")


def emit_reports(report, output_dir):
    """Write every output file; returns their paths.

    Wall-clock timing goes to ``timing.json`` so ``results.json`` and the
    CSVs stay byte-identical across reruns of the same configuration.
    """
    os.makedirs(output_dir, exist_ok=True)
    body = {k: v for k, v in report.items() if k != "timing"}
    outputs = {
        "results.json": to_json(body),
        "table2.csv": table2_csv(report),
        "svm_means.csv": means_csv(report, "classical"),
        "qsvm_means.csv": means_csv(report, "quantum"),
        "bars_classical.svg": bars_svg(report, "classical", "SVM: mean metrics per kernel"),
        "bars_quantum.svg": bars_svg(report, "quantum", "QSVM: mean metrics per feature map"),
        "pca_subsets.svg": pca_svg(report),
    }
    if "timing" in report:
        outputs["timing.json"] = to_json(report["timing"])
    paths = []
    for name, text in outputs.items():
        path = os.path.join(output_dir, name)
        _write(path, text)
        paths.append(path)
    return paths
