"""Detection quality metrics against ground-truth topics.

Two complementary views:

* top-10 F1 versus the number of detected topics (NDT): detections are
  matched to ground truth greedily in rank order, each truth topic
  consumable once, and the curve reports the mean of the ten best F1
  scores among the first NDT detections (fixed denominator 10, so the
  curve is monotone and tops out at 1.0 for ten perfect detections).

* accuracy versus false positives per topic (FPPT): walking the ranked
  list, a detection succeeds when its intersection ratio against some
  still unmatched truth topic exceeds 0.5 strictly; accuracy is successes
  over the truth count and FPPT is false positives so far per success.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .candidates import load_candidates
from .errors import InputError

NIR_SUCCESS_THRESHOLD = 0.5
TOP_K = 10


@dataclass(frozen=True)
class GroundTruth:
    """Annotated hot topics for one collection of n webpages."""

    topics: tuple[frozenset[int], ...]
    n: int

    def __post_init__(self) -> None:
        if not self.topics:
            raise InputError("ground truth must contain at least one topic")
        for topic in self.topics:
            if not topic:
                raise InputError("ground-truth topic must be nonempty")
            if min(topic) < 0 or max(topic) >= self.n:
                raise InputError("ground-truth index out of range")


@dataclass(frozen=True)
class EvaluationReport:
    top10_f1_curve: tuple[tuple[int, float], ...]
    accuracy_fppt_curve: tuple[tuple[int, float], ...]

    def accuracy_at(self, fppt: float) -> float:
        best = 0.0
        for x, y in self.accuracy_fppt_curve:
            if x <= fppt:
                best = max(best, y)
        return best


def _as_set(obj) -> frozenset[int]:
    members = getattr(obj, "members", obj)
    return frozenset(int(m) for m in members)


def f1(detected, truth) -> float:
    """Harmonic mean of precision and recall, 0 when nothing overlaps."""
    d, g = _as_set(detected), _as_set(truth)
    if not d or not g:
        raise InputError("f1 requires nonempty sets")
    hit = len(d & g)
    if hit == 0:
        return 0.0
    precision = hit / len(d)
    recall = hit / len(g)
    return 2.0 * precision * recall / (precision + recall)


def nir(detected, truth) -> float:
    """Intersection ratio |D & G| / |D | G| (success needs > 0.5)."""
    d, g = _as_set(detected), _as_set(truth)
    if not d or not g:
        raise InputError("nir requires nonempty sets")
    return len(d & g) / len(d | g)


def _match_f1_scores(
    detections: Sequence[frozenset[int]], truth: GroundTruth
) -> list[float]:
    """Per-detection F1 after greedy rank-order matching.

    Each truth topic can be matched once; a detection with zero F1 against
    every unmatched topic stays unmatched (scoring 0) instead of wasting a
    truth topic.
    """
    used: set[int] = set()
    scores: list[float] = []
    for det in detections:
        best_f1, best_gi = 0.0, None
        for gi, topic in enumerate(truth.topics):
            if gi in used:
                continue
            score = f1(det, topic)
            if score > best_f1:
                best_f1, best_gi = score, gi
        if best_gi is not None:
            used.add(best_gi)
        scores.append(best_f1)
    return scores


def top10_f1_vs_ndt(
    ranked_detections: Sequence, truth: GroundTruth, max_ndt: int
) -> list[tuple[int, float]]:
    """Curve of mean top-10 F1 for each detection-count cutoff 1..max_ndt."""
    if max_ndt < 1:
        raise InputError("max_ndt must be >= 1")
    detections = [_as_set(d) for d in ranked_detections]
    if not detections:
        raise InputError("no detections to evaluate")
    scores = _match_f1_scores(detections, truth)
    curve: list[tuple[int, float]] = []
    for ndt in range(1, max_ndt + 1):
        window = sorted(scores[:ndt], reverse=True)[:TOP_K]
        curve.append((ndt, sum(window) / TOP_K))
    return curve


def accuracy_vs_fppt(
    ranked_detections: Sequence,
    truth: GroundTruth,
    max_fppt: int | None = None,
) -> list[tuple[int, float]]:
    """Accuracy at integer FPPT budgets, best achievable within each budget.

    A detection is successful when its intersection ratio against the best
    still unmatched truth topic exceeds 0.5 strictly; anything else is a
    false positive. Failed detections consume no truth topic.
    """
    detections = [_as_set(d) for d in ranked_detections]
    if not detections:
        raise InputError("no detections to evaluate")
    used: set[int] = set()
    successes = 0
    false_positives = 0
    points: list[tuple[float, float]] = []
    for det in detections:
        best_nir, best_gi = 0.0, None
        for gi, topic in enumerate(truth.topics):
            if gi in used:
                continue
            score = nir(det, topic)
            if score > best_nir:
                best_nir, best_gi = score, gi
        if best_gi is not None and best_nir > NIR_SUCCESS_THRESHOLD:
            used.add(best_gi)
            successes += 1
        else:
            false_positives += 1
        points.append(
            (false_positives / max(1, successes), successes / len(truth.topics))
        )
    top = max_fppt if max_fppt is not None else int(math.ceil(points[-1][0]))
    curve: list[tuple[int, float]] = []
    for budget in range(top + 1):
        best = 0.0
        for x, y in points:
            if x <= budget:
                best = max(best, y)
        curve.append((budget, best))
    return curve


def evaluate(
    ranked_detections: Sequence,
    truth: GroundTruth,
    max_ndt: int | None = None,
    max_fppt: int | None = None,
) -> EvaluationReport:
    """Bundle both curves into a report."""
    detections = [_as_set(d) for d in ranked_detections]
    ndt_cap = max_ndt if max_ndt is not None else max(len(detections), TOP_K)
    return EvaluationReport(
        top10_f1_curve=tuple(top10_f1_vs_ndt(detections, truth, ndt_cap)),
        accuracy_fppt_curve=tuple(accuracy_vs_fppt(detections, truth, max_fppt)),
    )


def load_ground_truth(path: str | Path, n: int) -> GroundTruth:
    """Ground truth shares the candidate file format."""
    topics = load_candidates(path, n=n)
    return GroundTruth(tuple(t.members for t in topics), n=n)


def write_curve_csv(curve: Iterable[tuple[float, float]], path: str | Path) -> None:
    lines = ["x,y"]
    lines.extend(f"{x!r},{y!r}" for x, y in curve)
    Path(path).write_text("\n".join(lines) + "\n")
