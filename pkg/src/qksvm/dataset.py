"""Lung-cancer survey ingestion, encoding, balanced subsets, splits and PCA.

Feature order of every encoded vector (the column order of the CSV)::

    gender, age, smoking, yellow_fingers, anxiety, peer_pressure,
    chronic_disease, fatigue, allergy, wheezing, alcohol_consuming,
    coughing, shortness_of_breath, swallowing_difficulty, chest_pain

followed in the CSV by the ``lung_cancer`` label column. Binary fields map
yes -> 1, no -> 0; gender maps M -> 1, F -> 0; age is z-scored with the
population standard deviation.
"""

import csv
from dataclasses import dataclass, field
import json
import math

import numpy as np

from .errors import CapacityError, DegenerateScaleError, LoadError, ValidationError
from .seeding import derive_rng, derive_seed

SYMPTOMS = (
    "smoking",
    "yellow_fingers",
    "anxiety",
    "peer_pressure",
    "chronic_disease",
    "fatigue",
    "allergy",
    "wheezing",
    "alcohol_consuming",
    "coughing",
    "shortness_of_breath",
    "swallowing_difficulty",
    "chest_pain",
)
FEATURES = ("gender", "age") + SYMPTOMS
AGE_INDEX = 1
NUM_COLUMNS = len(FEATURES) + 1

# token -> truth value, matched case-insensitively after stripping
PROFILES = {
    "paper": {
        "symptom": {"yes": True, "no": False},
        "label": {"yes": True, "no": False},
        "render": {"symptom": ("No", "Yes"), "label": ("No", "Yes")},
    },
    "kaggle_numeric": {
        "symptom": {"2": True, "1": False},
        "label": {"yes": True, "no": False},
        "render": {"symptom": ("1", "2"), "label": ("NO", "YES")},
    },
}
GENDER = {"m": True, "f": False}


def _profile(name):
    key = str(name).lower()
    if key not in PROFILES:
        raise ValidationError(f"unknown encoding profile {name!r}; expected one of {sorted(PROFILES)}")
    return PROFILES[key]


@dataclass(frozen=True)
class RawRecord:
    gender: str  # "M" or "F"
    age: float
    symptoms: tuple  # 13 booleans in SYMPTOMS order
    label: bool  # True = lung cancer


@dataclass(frozen=True)
class EncodedSample:
    features: tuple
    label: int


def load_csv(path, encoding_profile="kaggle_numeric"):
    """Parse a survey CSV into records; any malformed row is a LoadError."""
    prof = _profile(encoding_profile)
    with open(path, newline="", encoding="utf-8-sig") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise LoadError("file is empty", row=1)
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != NUM_COLUMNS:
            raise LoadError(f"expected {NUM_COLUMNS} fields, found {len(row)}", row=lineno)
        cells = [c.strip() for c in row]
        for name, cell in zip(FEATURES + ("lung_cancer",), cells):
            if not cell:
                raise LoadError(f"missing value for {name}", row=lineno)
        gender = cells[0].lower()
        if gender not in GENDER:
            raise LoadError(f"unknown gender token {cells[0]!r}", row=lineno)
        try:
            age = float(cells[1])
        except ValueError:
            raise LoadError(f"non-numeric age {cells[1]!r}", row=lineno) from None
        if not math.isfinite(age):
            raise LoadError(f"non-finite age {cells[1]!r}", row=lineno)
        symptoms = []
        for name, cell in zip(SYMPTOMS, cells[2:-1]):
            try:
                symptoms.append(prof["symptom"][cell.lower()])
            except KeyError:
                raise LoadError(f"unknown token {cell!r} for {name}", row=lineno) from None
        try:
            label = prof["label"][cells[-1].lower()]
        except KeyError:
            raise LoadError(f"unknown label token {cells[-1]!r}", row=lineno) from None
        records.append(RawRecord(gender.upper(), age, tuple(symptoms), label))
    if not records:
        raise LoadError("no data rows after the header", row=2)
    return records


def record_tokens(record, encoding_profile):
    """Render a record back to CSV tokens in the given dialect."""
    render = _profile(encoding_profile)["render"]
    age = int(record.age) if float(record.age).is_integer() else record.age
    return (
        [record.gender, str(age)]
        + [render["symptom"][int(s)] for s in record.symptoms]
        + [render["label"][int(record.label)]]
    )


@dataclass(frozen=True)
class Scaler:
    mean: float
    std: float

    def __post_init__(self):
        if not self.std > 0:
            raise DegenerateScaleError("scaler std must be positive")

    def transform(self, value):
        return (value - self.mean) / self.std

    def inverse(self, value):
        return value * self.std + self.mean


def fit_scaler(ages):
    """Mean and population (divide-by-N) standard deviation."""
    a = np.asarray(ages, dtype=float)
    if a.size < 2:
        raise DegenerateScaleError("need at least two ages to fit a scaler")
    mean = float(a.mean())
    std = float(a.std())
    if std == 0.0:
        raise DegenerateScaleError("all ages are identical")
    return Scaler(mean, std)


def encode(records, scaler):
    out = []
    for r in records:
        feats = [1.0 if r.gender == "M" else 0.0, scaler.transform(r.age)]
        feats += [1.0 if s else 0.0 for s in r.symptoms]
        out.append(EncodedSample(tuple(feats), 1 if r.label else 0))
    return out


def decode(sample, scaler):
    f = sample.features
    return RawRecord(
        gender="M" if f[0] == 1.0 else "F",
        age=scaler.inverse(f[AGE_INDEX]),
        symptoms=tuple(v == 1.0 for v in f[2:]),
        label=bool(sample.label),
    )


def to_arrays(samples):
    X = np.array([s.features for s in samples], dtype=float).reshape(len(samples), -1)
    y = np.array([s.label for s in samples], dtype=int)
    return X, y


def _labels_of(samples):
    if len(samples) and isinstance(samples[0], EncodedSample):
        return np.array([s.label for s in samples], dtype=int)
    return np.asarray(samples, dtype=int)


@dataclass
class SubsetPlan:
    """Balanced subsets and their stratified train/test splits.

    ``subsets[i]`` is the sorted union of all negatives and the i-th
    positive block; ``splits[i]`` is ``(train, test)`` over those indices.
    """

    seed: int
    negatives: list
    positive_blocks: list
    splits: list = field(default_factory=list)
    test_fraction: float = None

    @property
    def subsets(self):
        return [sorted(self.negatives + block) for block in self.positive_blocks]

    def to_dict(self):
        return {
            "seed": self.seed,
            "test_fraction": self.test_fraction,
            "negatives": self.negatives,
            "positive_blocks": self.positive_blocks,
            "subsets": self.subsets,
            "splits": [{"train": tr, "test": te} for tr, te in self.splits],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def make_subsets(samples, count, seed):
    """Disjoint positive blocks of the negative-class size, each joined with all negatives.

    ``samples`` may be EncodedSamples or a plain 0/1 label sequence.
    """
    y = _labels_of(samples)
    if int(count) != count or count < 1:
        raise ValidationError("subset count must be a positive integer")
    negatives = [int(i) for i in np.flatnonzero(y == 0)]
    positives = np.flatnonzero(y == 1)
    if not negatives:
        raise ValidationError("no negative samples to balance against")
    need = count * len(negatives)
    if need > positives.size:
        raise CapacityError(
            f"{count} subsets of {len(negatives)} positives need {need} positive samples, "
            f"only {positives.size} available"
        )
    rng = derive_rng(seed, "subsets")
    shuffled = rng.permutation(positives)
    blocks = [
        sorted(int(i) for i in shuffled[b * len(negatives) : (b + 1) * len(negatives)])
        for b in range(count)
    ]
    return SubsetPlan(seed=int(seed), negatives=negatives, positive_blocks=blocks)


def stratified_split(subset, labels, test_fraction=0.2, seed=0):
    """Per class, round-half-even(test_fraction * class size) indices go to test."""
    if not 0.0 < test_fraction < 1.0:
        raise ValidationError("test_fraction must lie strictly between 0 and 1")
    y = _labels_of(labels)
    subset = [int(i) for i in subset]
    rng = derive_rng(seed, "split")
    train, test = [], []
    for cls in (0, 1):
        members = np.array([i for i in subset if y[i] == cls], dtype=int)
        k = round(test_fraction * members.size)
        if k < 1 or k >= members.size:
            raise ValidationError(
                f"test_fraction {test_fraction} leaves an empty side for class {cls} "
                f"({members.size} samples, {k} to test)"
            )
        order = rng.permutation(members)
        test += order[:k].tolist()
        train += order[k:].tolist()
    return sorted(train), sorted(test)


def make_plan(samples, count=6, test_fraction=0.2, seed=0):
    """Subsets plus one seeded stratified split per subset."""
    y = _labels_of(samples)
    plan = make_subsets(y, count, seed)
    plan.test_fraction = test_fraction
    plan.splits = [
        stratified_split(sub, y, test_fraction, seed=derive_seed(seed, "split", i))
        for i, sub in enumerate(plan.subsets)
    ]
    return plan


def jacobi_eigh(A, tol=1e-12, max_sweeps=100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` sorted by decreasing eigenvalue,
    eigenvectors as columns. Iterates until the off-diagonal Frobenius norm
    drops below ``tol`` times the matrix norm.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    scale = max(np.linalg.norm(A), np.finfo(float).tiny)
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        # summed directly: sum(A*A) - sum(diag**2) cancels catastrophically
        if np.linalg.norm(A[offdiag]) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta**2 would overflow
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # rotate rows/cols p and q
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = A[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    vals = np.diag(A).copy()
    order = np.argsort(-vals, kind="stable")
    return vals[order], V[:, order]


@dataclass
class PcaResult:
    coords: np.ndarray  # (m, out_dims)
    explained: np.ndarray  # fraction of total variance per component
    components: np.ndarray  # (d, out_dims), orthonormal columns
    eigenvalues: np.ndarray  # (out_dims,)
    mean: np.ndarray


def pca_project(X, out_dims=2):
    X = np.asarray(X, dtype=float)
    m, d = X.shape
    if not 1 <= out_dims <= d:
        raise ValidationError(f"out_dims must be in 1..{d}")
    if m < out_dims:
        raise ValidationError(f"need at least {out_dims} samples")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = Xc.T @ Xc / m
    total = float(np.trace(cov))
    if total <= 0.0:
        raise DegenerateScaleError("all samples are identical")
    vals, vecs = jacobi_eigh(cov)
    vals = np.maximum(vals, 0.0)
    comps = vecs[:, :out_dims].copy()
    for k in range(out_dims):
        if comps[np.argmax(np.abs(comps[:, k])), k] < 0:
            comps[:, k] = -comps[:, k]
    return PcaResult(
        coords=Xc @ comps,
        explained=vals[:out_dims] / total,
        components=comps,
        eigenvalues=vals[:out_dims],
        mean=mean,
    )


def dataset_to_json(samples, scaler, encoding_profile, source=None):
    X, y = to_arrays(samples)
    doc = {
        "profile": str(encoding_profile).lower(),
        "source": source,
        "features": list(FEATURES),
        "scaler": {"mean": scaler.mean, "std": scaler.std, "ddof": 0},
        "X": X.tolist(),
        "y": y.tolist(),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
