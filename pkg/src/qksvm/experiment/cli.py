"""``qksvm`` command line.

Verbs: ``preprocess``, ``subsets``, ``run``, ``grid``, ``pca``. Each reads
an optional JSON config (field names as in ``ExperimentConfig``) and then
applies flag overrides. Exit status: 0 success, 1 invalid input, 2 I/O
failure.
"""

import argparse
import json
import logging
import os
import sys

from ..dataset import dataset_to_json, encode, fit_scaler, load_csv, make_plan, pca_project
from ..errors import QksvmError
from ..metrics import METRICS
from .reports import emit_reports, pca_svg, to_json
from .runner import ExperimentConfig, grid_search, load_dataset, run_experiment

log = logging.getLogger("qksvm")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser():
    parser = argparse.ArgumentParser(prog="qksvm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config")
    common.add_argument("--dataset", dest="dataset_path", help="survey CSV path")
    common.add_argument("--profile", dest="encoding_profile", choices=("paper", "kaggle_numeric"))
    common.add_argument("--seed", dest="master_seed", type=int)
    common.add_argument("--out", dest="output_dir", help="output directory")
    common.add_argument("--subset-count", dest="subset_count", type=int)
    common.add_argument("--test-fraction", dest="test_fraction", type=float)
    common.add_argument("--scaler-scope", dest="scaler_scope", choices=("full", "train-only"))
    common.add_argument("--workers", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("preprocess", parents=[common], help="encode the dataset to JSON")
    sub.add_parser("subsets", parents=[common], help="build balanced subsets and splits")
    run = sub.add_parser("run", parents=[common], help="run the full model x subset study")
    run.add_argument("--sampled", action="store_true", help="estimate quantum kernels from shots")
    run.add_argument("--shots", type=int, help="shots per kernel entry (implies --sampled)")
    run.add_argument("--C", dest="C", type=float)
    grid = sub.add_parser("grid", parents=[common], help="cross-validated C/gamma search")
    grid.add_argument("--C-grid", dest="C_grid", type=_float_list)
    grid.add_argument("--gamma-grid", dest="gamma_grid", type=_float_list)
    grid.add_argument("--folds", dest="cv_folds", type=int)
    sub.add_parser("pca", parents=[common], help="2-D PCA plot of each subset")
    return parser


OVERRIDES = (
    "dataset_path",
    "encoding_profile",
    "master_seed",
    "output_dir",
    "subset_count",
    "test_fraction",
    "scaler_scope",
    "workers",
    "C",
    "C_grid",
    "gamma_grid",
    "cv_folds",
)


def load_config(args):
    doc = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise QksvmError(f"config is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise QksvmError("config must be a JSON object")
    for name in OVERRIDES:
        value = getattr(args, name, None)
        if value is not None:
            doc[name] = value
    config = ExperimentConfig.from_dict(doc)
    if getattr(args, "sampled", False) or getattr(args, "shots", None):
        config = config.with_sampling(args.shots or 8192)
    return config


def _emit(config, name, text):
    os.makedirs(config.output_dir, exist_ok=True)
    path = os.path.join(config.output_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def cmd_preprocess(config):
    records = load_csv(config.dataset_path, config.encoding_profile)
    scaler = fit_scaler([r.age for r in records])
    samples = encode(records, scaler)
    path = _emit(
        config,
        "encoded.json",
        dataset_to_json(samples, scaler, config.encoding_profile, source=config.dataset_path),
    )
    positives = sum(s.label for s in samples)
    print(f"{len(samples)} records ({positives} positive, {len(samples) - positives} negative) -> {path}")


def cmd_subsets(config):
    data = load_dataset(config)
    plan = make_plan(data.y, config.subset_count, config.test_fraction, config.master_seed)
    path = _emit(config, "subsets.json", plan.to_json())
    for i, (subset, (train, test)) in enumerate(zip(plan.subsets, plan.splits), start=1):
        print(f"subset {i}: {len(subset)} samples, train {len(train)}, test {len(test)}")
    print(f"-> {path}")


def cmd_run(config):
    report = run_experiment(config)
    emit_reports(report, config.output_dir)
    print(f"{'model':<18}" + "".join(f"{m:>12}" for m in METRICS))
    for row in report["means"]:
        print(f"{row['model']:<18}" + "".join(f"{row[m]:>12.3f}" for m in METRICS))
    print(f"reports written to {config.output_dir}")


def cmd_grid(config):
    result = grid_search(config)
    path = _emit(config, "grid.json", to_json(result))
    for entry in result["models"]:
        best = entry["best"]
        print(f"{entry['model']:<8} C={best['C']:g} gamma={best['gamma']} mean_acc={best['mean_accuracy']:.4f}")
    print(f"-> {path}")


def cmd_pca(config):
    data = load_dataset(config)
    plan = make_plan(data.y, config.subset_count, config.test_fraction, config.master_seed)
    pca = []
    for i, subset in enumerate(plan.subsets, start=1):
        proj = pca_project(data.X[subset], 2)
        pca.append(
            {
                "subset": i,
                "coords": proj.coords.tolist(),
                "labels": data.y[subset].tolist(),
                "explained": proj.explained.tolist(),
                "components": proj.components.tolist(),
            }
        )
    _emit(config, "pca.json", to_json(pca))
    path = _emit(config, "pca_subsets.svg", pca_svg({"pca": pca}))
    print(f"-> {path}")


COMMANDS = {
    "preprocess": cmd_preprocess,
    "subsets": cmd_subsets,
    "run": cmd_run,
    "grid": cmd_grid,
    "pca": cmd_pca,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args)
        COMMANDS[args.verb](config)
    except OSError as exc:
        print(f"qksvm: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (QksvmError, ValueError) as exc:
        print(f"qksvm: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
