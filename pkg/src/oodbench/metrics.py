"""Verification accuracy and robustness aggregation.

Accuracies are fractions in [0, 1] everywhere in this module; callers
format percentages at the presentation layer only.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DivisionByZeroError,
    EmptyInputError,
    IncompleteGridError,
    NoThresholdError,
    PartitionError,
    UndefinedAccuracyError,
)

LEVELS = (1, 2, 3, 4, 5)

VARIATION_KINDS = (
    "age-",
    "age+",
    "mouth-close",
    "mouth-open",
    "eye-close",
    "eye-open",
    "rotation-left",
    "rotation-right",
    "bangs_glasses",
    "makeup",
)

CORRECT = "correct"
INCORRECT = "incorrect"
REJECTED = "rejected"


@dataclass(frozen=True)
class SimilarityOutcome:
    """One compared pair: a similarity score or a rejection, plus label."""

    similarity: float | None
    label: bool

    @property
    def rejected(self) -> bool:
        return self.similarity is None


@dataclass
class AccuracyGrid:
    """Clean accuracy plus one accuracy per (kind, level) cell."""

    acc_clean: float
    cells: dict[str, dict[int, float]] = field(default_factory=dict)

    def kinds(self) -> list[str]:
        return list(self.cells.keys())


@dataclass(frozen=True)
class ApiReport:
    """Rejection-aware scoring: rejected pairs count as failures overall."""

    rr: float
    asa: float
    aa: float


def _split(outcomes) -> tuple[np.ndarray, np.ndarray]:
    sims = [o.similarity for o in outcomes if not o.rejected]
    labels = [o.label for o in outcomes if not o.rejected]
    return np.asarray(sims, dtype=np.float64), np.asarray(labels, dtype=bool)


def best_threshold(outcomes) -> tuple[float, float]:
    """Exhaustive sweep for the decision threshold maximizing accuracy.

    Candidates are midpoints between consecutive distinct similarities
    plus one sentinel below the minimum and one above the maximum; a
    pair is predicted same-identity when similarity >= threshold.  Ties
    resolve to the smallest candidate.
    """
    sims, labels = _split(outcomes)
    if sims.size == 0:
        raise NoThresholdError("cannot sweep a threshold with every pair rejected")
    order = np.argsort(sims, kind="stable")
    s = sims[order]
    lab = labels[order]
    n = s.size
    # accuracy when the first k sorted pairs are predicted different
    same_suffix = np.concatenate([np.cumsum(lab[::-1])[::-1], [0]])
    diff_prefix = np.concatenate([[0], np.cumsum(~lab)])
    correct = same_suffix + diff_prefix
    boundaries = [0] + [k for k in range(1, n) if s[k - 1] < s[k]] + [n]
    best_k = boundaries[0]
    best_correct = correct[boundaries[0]]
    for k in boundaries[1:]:
        if correct[k] > best_correct:
            best_correct = correct[k]
            best_k = k
    if best_k == 0:
        theta = float(s[0] - 1.0)
    elif best_k == n:
        theta = float(s[-1] + 1.0)
    else:
        theta = float((s[best_k - 1] + s[best_k]) / 2.0)
    return theta, float(best_correct) / n


def accuracy_at(outcomes, threshold: float) -> float:
    """Decision accuracy at a fixed threshold, rejected pairs excluded."""
    sims, labels = _split(outcomes)
    if sims.size == 0:
        raise UndefinedAccuracyError("no accepted pairs to score")
    pred = sims >= threshold
    return float((pred == labels).sum()) / sims.size


def _check_complete(grid: AccuracyGrid) -> None:
    if not grid.cells:
        raise IncompleteGridError("grid has no cells")
    for kind, row in grid.cells.items():
        for level in LEVELS:
            if level not in row:
                raise IncompleteGridError(f"grid is missing cell ({kind}, {level})")


def kind_means(grid: AccuracyGrid) -> dict[str, float]:
    _check_complete(grid)
    return {
        kind: sum(row[level] for level in LEVELS) / len(LEVELS)
        for kind, row in grid.cells.items()
    }


def acc_cor(grid: AccuracyGrid) -> float:
    """Mean accuracy over the grid: per-kind level means, then kinds."""
    means = kind_means(grid)
    return sum(means.values()) / len(means)


def rce(grid: AccuracyGrid) -> tuple[float, dict[str, dict[int, float]]]:
    """Relative accuracy drop from clean, overall and per cell."""
    if grid.acc_clean <= 0:
        raise DivisionByZeroError("clean accuracy must be positive")
    overall = (grid.acc_clean - acc_cor(grid)) / grid.acc_clean
    cells = {
        kind: {
            level: (grid.acc_clean - acc) / grid.acc_clean
            for level, acc in row.items()
        }
        for kind, row in grid.cells.items()
    }
    return overall, cells


def acc_var_rve(grid: AccuracyGrid) -> tuple[float, float, dict[str, dict[int, float]]]:
    """Variation-side aggregate: same arithmetic over the variation kinds."""
    mean_acc = acc_cor(grid)
    overall, cells = rce(grid)
    return mean_acc, overall, cells


def category_means(grid: AccuracyGrid, taxonomy: dict[str, tuple[str, ...]]) -> dict[str, float]:
    """Mean of member kind-means per category."""
    means = kind_means(grid)
    membership: dict[str, str] = {}
    for cat, members in taxonomy.items():
        for m in members:
            membership[m] = cat
    out: dict[str, list[float]] = {}
    for kind, value in means.items():
        cat = membership.get(kind)
        if cat is None:
            raise PartitionError(f"kind {kind!r} is missing from the taxonomy")
        out.setdefault(cat, []).append(value)
    return {cat: sum(vals) / len(vals) for cat, vals in out.items()}


def api_metrics(decisions) -> ApiReport:
    """Fold resolved per-pair decisions into rejection-aware rates.

    rr = rejected / total, asa = correct / accepted (0 when everything
    was rejected), aa = correct / total, so aa == (1 - rr) * asa.
    """
    total = len(decisions)
    if total == 0:
        raise EmptyInputError("no decisions to score")
    for d in decisions:
        if d not in (CORRECT, INCORRECT, REJECTED):
            raise EmptyInputError(f"unknown decision {d!r}")
    rejected = sum(1 for d in decisions if d == REJECTED)
    correct = sum(1 for d in decisions if d == CORRECT)
    accepted = total - rejected
    rr = rejected / total
    asa = correct / accepted if accepted else 0.0
    aa = correct / total
    return ApiReport(rr=rr, asa=asa, aa=aa)
