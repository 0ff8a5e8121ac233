"""End-to-end study: subsets x models grid, scoring, averaging, grid search."""

from dataclasses import asdict, dataclass, field, fields, replace
import logging
import time

import numpy as np

from .. import _backend, __version__
from ..dataset import (
    AGE_INDEX,
    encode,
    fit_scaler,
    load_csv,
    make_plan,
    pca_project,
    to_arrays,
)
from ..errors import ValidationError
from ..kernel import (
    DEFAULT_SHOTS,
    Quantum,
    kernel_label,
    resolve_gamma,
    spec_from_dict,
    spec_to_dict,
    train_test_matrices,
    build_gram,
    build_cross,
)
from ..metrics import METRICS, confusion, score
from ..seeding import derive_rng, derive_seed
from ..svm import predict, train

log = logging.getLogger(__name__)

DEFAULT_MODELS = (
    {"kind": "linear"},
    {"kind": "poly", "degree": 3, "coef": 1.0},
    {"kind": "rbf", "gamma": None},
    {"kind": "quantum", "feature_map": {"kind": "Z", "reps": 2}, "mode": "exact"},
    {"kind": "quantum", "feature_map": {"kind": "ZZ", "reps": 2}, "mode": "exact"},
    {"kind": "quantum", "feature_map": {"kind": "PAULI", "reps": 2}, "mode": "exact"},
)
SCALER_SCOPES = ("full", "train-only")


@dataclass
class ExperimentConfig:
    dataset_path: str = None
    encoding_profile: str = "kaggle_numeric"
    master_seed: int = 0
    subset_count: int = 6
    test_fraction: float = 0.2
    scaler_scope: str = "full"
    model_list: list = field(default_factory=lambda: [dict(m) for m in DEFAULT_MODELS])
    C: float = 1.0
    svm_tol: float = 1e-3
    svm_max_passes: int = 10
    output_dir: str = "results"
    workers: int = 1
    C_grid: list = field(default_factory=lambda: [0.1, 1.0, 10.0, 100.0])
    gamma_grid: list = field(default_factory=lambda: [0.01, 0.1, 1.0])
    cv_folds: int = 5

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.model_list:
            raise ValidationError("model_list must not be empty")
        if int(self.subset_count) != self.subset_count or self.subset_count < 1:
            raise ValidationError("subset_count must be a positive integer")
        if self.scaler_scope not in SCALER_SCOPES:
            raise ValidationError(f"scaler_scope must be one of {SCALER_SCOPES}")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValidationError("test_fraction must lie strictly between 0 and 1")
        if not self.C > 0:
            raise ValidationError("C must be positive")
        for desc in self.model_list:
            spec_from_dict(desc, num_features=1)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ValidationError(f"unknown config field(s): {', '.join(unknown)}")
        return cls(**d)

    def to_dict(self):
        return asdict(self)

    def with_sampling(self, shots=DEFAULT_SHOTS):
        """Copy with every quantum model switched to shot-sampled estimation."""
        models = []
        for desc in self.model_list:
            desc = dict(desc)
            if desc.get("kind") == "quantum":
                desc["mode"] = "sampled"
                desc["shots"] = int(shots)
            models.append(desc)
        return replace(self, model_list=models)


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    ages: np.ndarray
    scaler: object


def load_dataset(config):
    if not config.dataset_path:
        raise ValidationError("dataset_path is not set")
    records = load_csv(config.dataset_path, config.encoding_profile)
    ages = np.array([r.age for r in records], dtype=float)
    scaler = fit_scaler(ages)
    X, y = to_arrays(encode(records, scaler))
    return Dataset(X=X, y=y, ages=ages, scaler=scaler)


def _subset_features(data, config, train_idx):
    if config.scaler_scope == "full":
        return data.X, {"mean": data.scaler.mean, "std": data.scaler.std}
    scaler = fit_scaler(data.ages[train_idx])
    X = data.X.copy()
    X[:, AGE_INDEX] = (data.ages - scaler.mean) / scaler.std
    return X, {"mean": scaler.mean, "std": scaler.std}


def _resolve_spec(desc, num_features, X_train, config, subset):
    spec = resolve_gamma(spec_from_dict(desc, num_features), X_train)
    if isinstance(spec, Quantum) and spec.mode == "sampled":
        spec = replace(
            spec, seed=derive_seed(config.master_seed, "shots:" + kernel_label(spec), subset)
        )
    return spec


def _fit_and_score(K_train, K_test, y_train, y_test, config, seed, descriptor=None):
    model = train(
        K_train,
        2 * y_train - 1,
        C=config.C,
        tol=config.svm_tol,
        max_passes=config.svm_max_passes,
        seed=seed,
        kernel=descriptor,
    )
    y_pred = (predict(model, K_test) + 1) // 2
    cm = confusion(y_test, y_pred)
    return model, cm, score(cm)


def run_experiment(config):
    """Train and score every (model, subset) cell; returns the report dict.

    The report is plain JSON-serialisable data. ``timing`` holds wall-clock
    figures and is kept apart from the reproducible part.
    """
    started = time.perf_counter()
    data = load_dataset(config)
    n_features = data.X.shape[1]
    plan = make_plan(data.y, config.subset_count, config.test_fraction, config.master_seed)

    cells, pca, cell_seconds = [], [], {}
    for s, (subset, (train_idx, test_idx)) in enumerate(zip(plan.subsets, plan.splits), start=1):
        X, scaler_params = _subset_features(data, config, train_idx)
        X_train, X_test = X[train_idx], X[test_idx]
        y_train, y_test = data.y[train_idx], data.y[test_idx]
        proj = pca_project(X[subset], 2)
        pca.append(
            {
                "subset": s,
                "coords": proj.coords.tolist(),
                "labels": data.y[subset].tolist(),
                "explained": proj.explained.tolist(),
            }
        )
        for desc in config.model_list:
            t0 = time.perf_counter()
            spec = _resolve_spec(desc, n_features, X_train, config, s)
            label = kernel_label(spec)
            K_train, K_test = train_test_matrices(X_train, X_test, spec, config.workers)
            model, cm, sc = _fit_and_score(
                K_train,
                K_test,
                y_train,
                y_test,
                config,
                derive_seed(config.master_seed, "smo", s),
                spec_to_dict(spec),
            )
            cells.append(
                {
                    "model": label,
                    "family": "quantum" if isinstance(spec, Quantum) else "classical",
                    "subset": s,
                    "metrics": sc.as_dict(),
                    "confusion": cm.to_dict(),
                    "degenerate": list(sc.degenerate),
                    "converged": model.converged,
                    "sweeps": model.sweeps,
                    "n_support": int(model.support_indices.size),
                    "bias": float(model.bias),
                    "kernel": spec_to_dict(spec),
                    "scaler": scaler_params,
                    "n_train": len(train_idx),
                    "n_test": len(test_idx),
                }
            )
            cell_seconds[f"{label}/{s}"] = time.perf_counter() - t0
            log.info("subset %d %-16s acc=%.3f", s, label, sc.accuracy)
            if not model.converged:
                log.warning("subset %d %s: SMO did not converge", s, label)

    report = {
        "cells": cells,
        "means": mean_rows(cells),
        "pca": pca,
        "plan": plan.to_dict(),
        "provenance": {
            # where the files go and how many threads ran do not affect results
            "config": {
                k: v for k, v in config.to_dict().items() if k not in ("output_dir", "workers")
            },
            "qksvm_version": __version__,
            "simulator_backend": _backend.BACKEND,
            "quantum_modes": {
                c["model"]: c["kernel"]["mode"] for c in cells if c["family"] == "quantum"
            },
            "shots": {
                c["model"]: c["kernel"]["shots"]
                for c in cells
                if c["family"] == "quantum" and c["kernel"]["mode"] == "sampled"
            },
            "seeds": {
                "master": config.master_seed,
                "smo": [derive_seed(config.master_seed, "smo", s) for s in range(1, len(plan.subsets) + 1)],
            },
            "age_std_divisor": "N",
            "n_samples": int(data.y.size),
            "n_positive": int(data.y.sum()),
            "n_negative": int((data.y == 0).sum()),
        },
    }
    report["timing"] = {
        "wall_clock_seconds": time.perf_counter() - started,
        "cells": cell_seconds,
    }
    return report


def mean_rows(cells):
    """Per-model arithmetic means of every metric, in first-seen model order."""
    order, grouped = [], {}
    for c in cells:
        if c["model"] not in grouped:
            order.append(c["model"])
            grouped[c["model"]] = []
        grouped[c["model"]].append(c)
    rows = []
    for name in order:
        group = grouped[name]
        row = {"model": name, "family": group[0]["family"], "subsets": len(group)}
        for m in METRICS:
            row[m] = float(sum(c["metrics"][m] for c in group) / len(group))
        rows.append(row)
    return rows


def stratified_folds(y, folds, rng):
    """Split positions 0..len(y)-1 into ``folds`` class-stratified folds."""
    y = np.asarray(y)
    out = [[] for _ in range(folds)]
    for cls in np.unique(y):
        members = rng.permutation(np.flatnonzero(y == cls))
        if members.size < folds:
            raise ValidationError(
                f"class {cls} has {members.size} samples, too few for {folds}-fold stratification"
            )
        for k, idx in enumerate(members):
            out[k % folds].append(int(idx))
    return [sorted(f) for f in out]


def select_hyperparameters(splits, desc, C_grid, gamma_grid, folds=5, seed=0, tol=1e-3, max_passes=10):
    """Cross-validated (C, gamma) choice for one classical kernel descriptor.

    ``splits`` is a list of ``(X_train, y_train)`` with 0/1 labels; folds are
    drawn inside each and accuracy is averaged over all folds of all splits.
    Grids are deduplicated; ties go to the smaller C, then the smaller gamma.
    Kernels without a gamma ignore ``gamma_grid`` and report ``None``.
    """
    C_values = sorted({float(c) for c in C_grid})
    if not C_values:
        raise ValidationError("C_grid must not be empty")
    uses_gamma = str(desc.get("kind", "")).lower() == "rbf"
    if uses_gamma:
        gammas = sorted({float(g) for g in gamma_grid})
        if not gammas:
            raise ValidationError("gamma_grid must not be empty")
    else:
        gammas = [None]

    fold_sets = [
        stratified_folds(y, folds, derive_rng(seed, "cv", k)) for k, (_, y) in enumerate(splits)
    ]
    table = []
    best = None
    for C in C_values:
        for gamma in gammas:
            d = dict(desc)
            if uses_gamma:
                d["gamma"] = gamma
            spec = spec_from_dict(d, num_features=splits[0][0].shape[1])
            accs = []
            for k, ((X, y), fs) in enumerate(zip(splits, fold_sets)):
                for f, val in enumerate(fs):
                    tr = sorted(set(range(len(y))) - set(val))
                    K_tr = build_gram(X[tr], spec)
                    K_val = build_cross(X[val], X[tr], spec)
                    model = train(K_tr, 2 * y[tr] - 1, C=C, tol=tol, max_passes=max_passes,
                                  seed=derive_seed(seed, "cv-smo", k, f))
                    y_hat = (predict(model, K_val) + 1) // 2
                    accs.append(float(np.mean(y_hat == y[val])))
            mean_acc = float(np.mean(accs))
            table.append({"C": C, "gamma": gamma, "mean_accuracy": mean_acc})
            if best is None or mean_acc > best["mean_accuracy"]:
                best = {"C": C, "gamma": gamma, "mean_accuracy": mean_acc}
    return best, table


def grid_search(config, C_grid=None, gamma_grid=None):
    """Best (C, gamma) per classical model by mean validation accuracy."""
    C_grid = config.C_grid if C_grid is None else C_grid
    gamma_grid = config.gamma_grid if gamma_grid is None else gamma_grid
    data = load_dataset(config)
    plan = make_plan(data.y, config.subset_count, config.test_fraction, config.master_seed)
    splits = []
    for train_idx, _ in plan.splits:
        X, _ = _subset_features(data, config, train_idx)
        splits.append((X[train_idx], data.y[train_idx]))
    results = []
    for desc in config.model_list:
        if str(desc.get("kind", "")).lower() == "quantum":
            continue
        best, table = select_hyperparameters(
            splits,
            desc,
            C_grid,
            gamma_grid,
            folds=config.cv_folds,
            seed=derive_seed(config.master_seed, "grid"),
            tol=config.svm_tol,
            max_passes=config.svm_max_passes,
        )
        label = kernel_label(spec_from_dict(desc, num_features=data.X.shape[1]))
        log.info("grid %s: best C=%s gamma=%s acc=%.4f", label, best["C"], best["gamma"], best["mean_accuracy"])
        results.append({"model": label, "best": best, "table": table})
    return {"folds": config.cv_folds, "C_grid": sorted({float(c) for c in C_grid}),
            "gamma_grid": sorted({float(g) for g in gamma_grid}), "models": results}
