"""Scoring a candidate alignment against a reference alignment."""

from __future__ import annotations

from dataclasses import dataclass

from .alignment import Alignment

__all__ = ["EvalScores", "evaluate", "f_measure"]


def f_measure(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class EvalScores:
    precision: float
    recall: float
    f_measure: float
    tp: int
    fp: int
    fn: int

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "EvalScores":
        precision = tp / (tp + fp) if tp + fp else 1.0
        recall = tp / (tp + fn) if tp + fn else 1.0
        return cls(precision, recall, f_measure(precision, recall), tp, fp, fn)

    def summary(self) -> str:
        return f"P={self.precision:.3f} R={self.recall:.3f} F={self.f_measure:.3f}"


def evaluate(candidate: Alignment, reference: Alignment) -> EvalScores:
    """Set-based precision/recall/F over (source, target, relation) triples.

    Confidences are ignored: a correspondence is correct exactly when the
    reference contains the same pair with the same relation.
    """
    cand = {(c.source.full, c.target.full, c.relation) for c in candidate}
    ref = {(c.source.full, c.target.full, c.relation) for c in reference}
    tp = len(cand & ref)
    return EvalScores.from_counts(tp, len(cand) - tp, len(ref) - tp)
