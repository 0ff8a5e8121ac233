import csv
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

KAGGLE_HEADER = [
    "GENDER", "AGE", "SMOKING", "YELLOW_FINGERS", "ANXIETY", "PEER_PRESSURE",
    "CHRONIC DISEASE", "FATIGUE ", "ALLERGY ", "WHEEZING", "ALCOHOL CONSUMING",
    "COUGHING", "SHORTNESS OF BREATH", "SWALLOWING DIFFICULTY", "CHEST PAIN", "LUNG_CANCER",
]

ROOT = Path(__file__).resolve().parent.parent


def write_survey(path, n_pos=270, n_neg=39, seed=7, profile="kaggle_numeric"):
    """Write a synthetic survey CSV in the public dataset's column layout.

    Symptom rates differ by class so the classifiers have something to learn.
    """
    rng = np.random.default_rng(seed)
    labels = [1] * n_pos + [0] * n_neg
    rng.shuffle(labels)
    yes, no = ("2", "1") if profile == "kaggle_numeric" else ("Yes", "No")
    lab_yes, lab_no = ("YES", "NO") if profile == "kaggle_numeric" else ("Yes", "No")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(KAGGLE_HEADER)
        for lab in labels:
            p = 0.65 if lab else 0.3
            sym = [yes if rng.random() < p else no for _ in range(13)]
            gender = "M" if rng.random() < 0.5 else "F"
            w.writerow([gender, int(rng.integers(40, 85))] + sym + [lab_yes if lab else lab_no])
    return path


def public_dataset_path():
    """Location of the real 309-record survey CSV, if the user provided it."""
    candidates = [os.environ.get("QKSVM_DATASET"), ROOT / "data" / "survey lung cancer.csv"]
    for c in candidates:
        if c and Path(c).is_file():
            return Path(c)
    return None


@pytest.fixture
def survey_csv(tmp_path):
    return write_survey(tmp_path / "survey.csv")


@pytest.fixture
def small_survey_csv(tmp_path):
    return write_survey(tmp_path / "small.csv", n_pos=40, n_neg=20, seed=3)


# -- acceptance report ------------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.addinivalue_line("markers", "slow: long-running end-to-end check")


def pytest_runtest_logreport(report):
    marker = _markers.get(report.nodeid)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        outcome = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        note = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            note = report.longrepr[2].removeprefix("Skipped: ")
        extra = dict(report.user_properties).get("note", "")
        _criteria[marker] = (outcome, report.duration, note or extra)


_markers = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _markers[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (number, title), (outcome, seconds, note) in sorted(_criteria.items()):
        line = f"criterion {number}: {outcome:<4}  {title}  [{seconds:.1f} s]"
        tr.write_line(line + (f"  ({note})" if note else ""))
