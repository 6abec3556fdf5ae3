"""File-driven evaluation: pairs + embedding files to reports.

A grid cell's embeddings live at ``grid_pattern`` with ``{kind}`` and
``{level}`` expanded.  An image id absent from a cell's file counts as
a rejection: excluded from plain accuracy, scored as a failure in api
mode.  Under the global-best policy the threshold swept on clean data
is reused for every cell.
"""

from dataclasses import dataclass, field
from pathlib import Path

from . import metrics
from .embeddings import EmbeddingSet, cosine_similarity, load_embeddings
from .errors import CoverageError, FormatError, IncompleteGridError, ParseError
from .metrics import VARIATION_KINDS, AccuracyGrid, SimilarityOutcome
from .pairs import PairRecord, parse_pairs
from .params import CATEGORIES, KIND_NAMES
from .report import ApiGridReport, RobustnessReport

MODES = ("corruption", "variation", "api")
POLICIES = ("global-best", "per-cell-best", "fixed")


@dataclass
class EvalConfig:
    pairs_path: str
    clean_embeddings_path: str
    grid_embeddings_pattern: str
    pairs_format: str = "csv"
    threshold_policy: str = "global-best"
    mode: str = "corruption"
    kinds: tuple[str, ...] | None = None
    levels: tuple[int, ...] = (1, 2, 3, 4, 5)
    extra: dict = field(default_factory=dict)


def parse_policy(policy: str) -> tuple[str, float | None]:
    if policy == "global-best":
        return "global-best", None
    if policy == "per-cell-best":
        return "per-cell-best", None
    if policy.startswith("fixed:"):
        try:
            return "fixed", float(policy.split(":", 1)[1])
        except ValueError as exc:
            raise ParseError(f"bad fixed threshold in {policy!r}") from exc
    raise ParseError(f"unknown threshold policy {policy!r}")


def _outcomes(pairs: list[PairRecord], emb: EmbeddingSet) -> list[SimilarityOutcome]:
    out = []
    for p in pairs:
        if p.id_a in emb and p.id_b in emb:
            sim = cosine_similarity(emb.records[p.id_a], emb.records[p.id_b])
            out.append(SimilarityOutcome(similarity=sim, label=p.same))
        else:
            out.append(SimilarityOutcome(similarity=None, label=p.same))
    return out


def _cell_accuracy(outcomes, policy: str, theta: float | None) -> float:
    if policy == "per-cell-best":
        return metrics.best_threshold(outcomes)[1]
    return metrics.accuracy_at(outcomes, theta)


def _api_decisions(outcomes, theta: float) -> list[str]:
    decisions = []
    for o in outcomes:
        if o.rejected:
            decisions.append(metrics.REJECTED)
        elif (o.similarity >= theta) == o.label:
            decisions.append(metrics.CORRECT)
        else:
            decisions.append(metrics.INCORRECT)
    return decisions


def _api_cell(outcomes, policy: str, theta: float | None) -> metrics.ApiReport:
    if policy == "per-cell-best":
        try:
            theta = metrics.best_threshold(outcomes)[0]
        except metrics.NoThresholdError:
            theta = 0.0  # everything rejected; threshold is irrelevant
    return metrics.api_metrics(_api_decisions(outcomes, theta))


def default_kinds(mode: str) -> tuple[str, ...]:
    return VARIATION_KINDS if mode == "variation" else KIND_NAMES


def evaluate(config: EvalConfig):
    """Run one full grid evaluation and build the report object."""
    if config.mode not in MODES:
        raise FormatError(f"unknown mode {config.mode!r}")
    if "{kind}" not in config.grid_embeddings_pattern or "{level}" not in config.grid_embeddings_pattern:
        raise FormatError("grid pattern must contain {kind} and {level} placeholders")
    policy, fixed_theta = parse_policy(config.threshold_policy)
    pairs = parse_pairs(config.pairs_path, config.pairs_format)
    clean = load_embeddings(config.clean_embeddings_path)
    missing = sorted(
        {i for p in pairs for i in (p.id_a, p.id_b) if i not in clean}
    )
    if missing:
        raise CoverageError(f"clean embeddings missing pair ids: {', '.join(missing[:5])}")
    clean_outcomes = _outcomes(pairs, clean)

    if policy == "fixed":
        theta = fixed_theta
        acc_clean = metrics.accuracy_at(clean_outcomes, theta)
    else:
        theta, acc_clean = metrics.best_threshold(clean_outcomes)
        if policy == "per-cell-best":
            theta = None

    kinds = tuple(config.kinds) if config.kinds else default_kinds(config.mode)
    cell_outcomes = {}
    for kind in kinds:
        for level in config.levels:
            path = config.grid_embeddings_pattern.replace("{kind}", kind).replace(
                "{level}", str(level)
            )
            if not Path(path).is_file():
                raise IncompleteGridError(f"missing embeddings for cell ({kind}, {level}): {path}")
            cell_outcomes[(kind, level)] = _outcomes(pairs, load_embeddings(path))

    if config.mode == "api":
        clean_report = _api_cell(clean_outcomes, policy, theta)
        cells: dict[str, dict[int, metrics.ApiReport]] = {}
        for kind in kinds:
            cells[kind] = {
                level: _api_cell(cell_outcomes[(kind, level)], policy, theta)
                for level in config.levels
            }
        kind_means = {
            kind: {
                "rr": sum(c.rr for c in row.values()) / len(row),
                "asa": sum(c.asa for c in row.values()) / len(row),
                "aa": sum(c.aa for c in row.values()) / len(row),
            }
            for kind, row in cells.items()
        }
        averages = {
            key: sum(m[key] for m in kind_means.values()) / len(kind_means)
            for key in ("rr", "asa", "aa")
        }
        return ApiGridReport(
            mode="api",
            policy=config.threshold_policy,
            threshold=theta,
            clean=clean_report,
            cells=cells,
            kind_means=kind_means,
            averages=averages,
        )

    grid = AccuracyGrid(acc_clean=acc_clean)
    for kind in kinds:
        grid.cells[kind] = {
            level: _cell_accuracy(cell_outcomes[(kind, level)], policy, theta)
            for level in config.levels
        }
    acc_mean = metrics.acc_cor(grid)
    relative, rce_cells = metrics.rce(grid)
    kind_means = metrics.kind_means(grid)
    # category roll-up only when every kind belongs to the standard taxonomy
    taxonomy_covers = all(k in KIND_NAMES for k in kinds)
    category_means = (
        metrics.category_means(grid, CATEGORIES)
        if config.mode == "corruption" and taxonomy_covers
        else {}
    )
    return RobustnessReport(
        mode=config.mode,
        policy=config.threshold_policy,
        threshold=theta,
        acc_clean=acc_clean,
        acc_mean=acc_mean,
        relative_error=relative,
        cells=grid.cells,
        rce_cells=rce_cells,
        kind_means=kind_means,
        category_means=category_means,
    )
