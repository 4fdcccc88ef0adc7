"""Boolean binary perceptron instances and the misclassification cost.

A problem instance ("mapping") is a set of M input patterns s^l with entries
in {-1, +1}^F together with M targets t^l in {-1, +1}.  A candidate solution
is a weight string w in {-1, +1}^F.  The perceptron output on a pattern is

    sigma(w, s) = sign(sum_k w_k s_k),   sign(x) = 1 for x >= 0, -1 otherwise

and the cost of w is the number of misclassified patterns,

    E(w) = sum_l Theta(-t^l sum_k w_k s^l_k),   Theta(x) = 1 iff x >= 0.

F is restricted to odd values so the field sum_k w_k s_k is never zero; the
sign/Theta conventions at zero are implemented exactly anyway, they are just
unreachable for valid instances.

Mappings come in two kinds: "teacher-separable" instances draw a hidden
teacher string w0 and set t^l = sign(sum_k w0_k s^l_k), which guarantees a
zero-cost solution; "random-output" instances draw the targets independently
of the patterns, and the minimum cost is generally positive (see ach.oracle).

All spins are stored as int8 arrays with values +1/-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

TEACHER_SEPARABLE = "teacher-separable"
RANDOM_OUTPUT = "random-output"


def _check_f(f: int) -> None:
    if f < 1 or f % 2 == 0:
        raise ValueError(f"F must be a positive odd integer, got {f}")


def _as_spins(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.int8)
    if a.size and not np.isin(a, (-1, 1)).all():
        raise ValueError(f"{name} entries must all be +1 or -1")
    return a


def sign_pm(x):
    """sign(x) with the convention sign(0) = +1, as int8."""
    return np.where(np.asarray(x) >= 0, 1, -1).astype(np.int8)


@dataclass(frozen=True)
class Mapping:
    """An input-output mapping: patterns (M, F) and targets (M,), spins int8.

    kind is one of TEACHER_SEPARABLE / RANDOM_OUTPUT; teacher holds the
    generating weight string for teacher-separable instances and is None
    otherwise.
    """

    patterns: np.ndarray
    targets: np.ndarray
    kind: str
    teacher: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.patterns.ndim != 2 or self.targets.ndim != 1:
            raise ValueError("patterns must be (M, F), targets (M,)")
        if self.patterns.shape[0] != self.targets.shape[0]:
            raise ValueError("patterns and targets disagree on M")
        _check_f(self.patterns.shape[1])
        if self.kind == TEACHER_SEPARABLE:
            if self.teacher is None or self.teacher.shape != (self.patterns.shape[1],):
                raise ValueError("teacher-separable mapping needs a teacher of length F")
        elif self.kind != RANDOM_OUTPUT:
            raise ValueError(f"unknown mapping kind {self.kind!r}")

    @property
    def f(self) -> int:
        return int(self.patterns.shape[1])

    @property
    def m(self) -> int:
        return int(self.patterns.shape[0])


def generate_patterns(f: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Draw an (m, f) matrix of iid +-1 spins, each +1 with probability 1/2."""
    _check_f(f)
    if m < 0:
        raise ValueError(f"M must be non-negative, got {m}")
    return (2 * rng.integers(0, 2, size=(m, f)) - 1).astype(np.int8)


def generate_teacher_mapping(f: int, m: int, rng: np.random.Generator):
    """Draw a teacher string, then patterns, and label them by the teacher.

    Returns (mapping, teacher).  Draw order is fixed and documented: the
    teacher is drawn first, then the patterns row-major, all from the single
    passed-in generator.  The construction forces cost(teacher, mapping) = 0.
    """
    _check_f(f)
    teacher = (2 * rng.integers(0, 2, size=f) - 1).astype(np.int8)
    patterns = generate_patterns(f, m, rng)
    targets = sign_pm(patterns.astype(np.int64) @ teacher.astype(np.int64))
    return Mapping(patterns, targets, TEACHER_SEPARABLE, teacher), teacher


def generate_random_mapping(f: int, m: int, rng: np.random.Generator) -> Mapping:
    """Draw patterns, then iid +-1 targets independent of the patterns."""
    patterns = generate_patterns(f, m, rng)
    targets = (2 * rng.integers(0, 2, size=m) - 1).astype(np.int8)
    return Mapping(patterns, targets, RANDOM_OUTPUT)


def perceptron_output(w: np.ndarray, pattern: np.ndarray) -> int:
    """sign(sum_k w_k s_k) with sign(0) = +1; +-1 as a Python int."""
    w = np.asarray(w)
    pattern = np.asarray(pattern)
    if w.shape != pattern.shape or w.ndim != 1:
        raise ValueError(f"length mismatch: w {w.shape} vs pattern {pattern.shape}")
    _check_f(w.shape[0])
    return 1 if int(w.astype(np.int64) @ pattern.astype(np.int64)) >= 0 else -1


def cost(w: np.ndarray, mapping: Mapping) -> int:
    """Number of misclassified patterns, sum_l Theta(-t^l h^l), Theta(0) = 1."""
    w = np.asarray(w)
    if w.shape != (mapping.f,):
        raise ValueError(f"w has length {w.shape}, mapping has F={mapping.f}")
    h = mapping.patterns.astype(np.int64) @ w.astype(np.int64)
    return int(np.count_nonzero(mapping.targets.astype(np.int64) * h <= 0))


def compute_local_fields(w: np.ndarray, mapping: Mapping) -> np.ndarray:
    """Fields h^l = sum_k w_k s^l_k as an (M,) int32 vector.

    Pattern l is correctly classified iff t^l h^l > 0, so the cost is the
    count of l with t^l h^l <= 0; for odd F the product is never zero.
    """
    w = np.asarray(w)
    if w.shape != (mapping.f,):
        raise ValueError(f"w has length {w.shape}, mapping has F={mapping.f}")
    return (mapping.patterns.astype(np.int32) @ w.astype(np.int32)).astype(np.int32)


def cost_from_fields(fields: np.ndarray, mapping: Mapping) -> int:
    return int(np.count_nonzero(mapping.targets.astype(np.int32) * fields <= 0))


def apply_flip(fields: np.ndarray, w: np.ndarray, mapping: Mapping, k: int):
    """Flip w_k in place, update fields in place, return (fields, cost delta).

    Each field moves by -2 * (old w_k) * s^l_k, an O(M) update.  The returned
    delta equals cost(new w) - cost(old w); callers maintaining a cached cost
    add it.  Flipping the same k twice restores both w and fields exactly.
    """
    if not 0 <= k < mapping.f:
        raise IndexError(f"flip index {k} out of range for F={mapping.f}")
    t = mapping.targets.astype(np.int32)
    before = int(np.count_nonzero(t * fields <= 0))
    w_old = int(w[k])
    w[k] = -w_old
    fields -= (2 * w_old) * mapping.patterns[:, k].astype(np.int32)
    after = int(np.count_nonzero(t * fields <= 0))
    return fields, after - before


def mapping_to_json(mapping: Mapping, seed=None) -> dict:
    """JSON-ready dict {F, M, kind, seed, patterns, targets, teacher?}."""
    doc = {
        "F": mapping.f,
        "M": mapping.m,
        "kind": mapping.kind,
        "seed": seed,
        "patterns": mapping.patterns.tolist(),
        "targets": mapping.targets.tolist(),
    }
    if mapping.teacher is not None:
        doc["teacher"] = mapping.teacher.tolist()
    return doc


def mapping_from_json(doc: dict) -> Mapping:
    patterns = _as_spins(np.array(doc["patterns"], dtype=np.int8).reshape(doc["M"], doc["F"]),
                         "patterns")
    targets = _as_spins(doc["targets"], "targets")
    teacher = _as_spins(doc["teacher"], "teacher") if "teacher" in doc else None
    return Mapping(patterns, targets, doc["kind"], teacher)
