"""Topic candidates: multi-granularity groups of webpage indices.

Candidates normally come from an upstream clustering stage. As a built-in
stand-in, cascade_candidates emits the connected components of the graph at
a ladder of edge-weight thresholds, which reproduces the coarse-to-fine
granularity structure the rest of the pipeline expects: low thresholds give
big loose components, high thresholds split them into tight fragments.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import InputError
from .graph import SimilarityGraph


@dataclass
class TopicCandidate:
    """A set of webpage indices, later annotated with a model weight.

    weight is the Poisson deconvolution estimate; interestingness is
    weight * size. Both start unset and are filled by the ranking stage.
    """

    members: frozenset[int]
    weight: float | None = None
    interestingness: float | None = None

    def __post_init__(self) -> None:
        members = frozenset(int(m) for m in self.members)
        if not members:
            raise InputError("candidate must have at least one member")
        if min(members) < 0:
            raise InputError("candidate members must be nonnegative indices")
        self.members = members

    @property
    def size(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


def cascade_candidates(
    g: SimilarityGraph, thresholds: Sequence[float]
) -> list[TopicCandidate]:
    """Connected components at each threshold, singletons dropped.

    For every threshold tau the edges with weight >= tau are kept and each
    resulting component of size >= 2 becomes one candidate. Duplicate member
    sets across thresholds are emitted once. Output order is deterministic:
    by threshold, then by smallest member index.

    Singletons are dropped because a one-webpage topic carries no edges and
    would always sit at zero weight downstream.
    """
    if g.n == 0 or g.adjacency.nnz == 0:
        raise InputError("cascade requires a graph with at least one edge")
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise InputError("at least one threshold is required")
    if any(not (0.0 < t < 1.0) for t in thresholds):
        raise InputError("thresholds must lie strictly inside (0, 1)")
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise InputError("thresholds must be strictly increasing")

    out: list[TopicCandidate] = []
    seen: set[frozenset[int]] = set()
    adj = g.adjacency
    for tau in thresholds:
        kept = adj.multiply(adj >= tau)
        n_comp, labels = connected_components(sp.csr_matrix(kept), directed=False)
        groups: dict[int, list[int]] = {}
        for node, label in enumerate(labels):
            groups.setdefault(int(label), []).append(node)
        components = [m for m in groups.values() if len(m) >= 2]
        components.sort(key=min)
        for members in components:
            key = frozenset(members)
            if key in seen:
                continue
            seen.add(key)
            out.append(TopicCandidate(key))
    return out


def load_candidates(
    source: str | Path | Iterable[str], n: int | None = None
) -> list[TopicCandidate]:
    """Parse candidates from text: one candidate per line.

    Members are whitespace-separated 0-based indices; '#' begins a comment
    line and blank lines are skipped. When n is given every index must be
    below it.
    """
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text().splitlines()
        name = str(source)
    else:
        lines = list(source)
        name = "<candidates>"
    out: list[TopicCandidate] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            members = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise InputError(f"{name}:{lineno}: malformed candidate line") from exc
        if any(m < 0 for m in members):
            raise InputError(f"{name}:{lineno}: negative index")
        if n is not None and any(m >= n for m in members):
            raise InputError(f"{name}:{lineno}: index out of range (n={n})")
        out.append(TopicCandidate(frozenset(members)))
    if not out:
        raise InputError(f"{name}: no candidates")
    return out


def save_candidates(
    candidates: Iterable,
    path: str | Path,
    header: str | Iterable[str] | None = None,
) -> None:
    """Write one member set per line as sorted indices.

    Accepts anything with a .members attribute (candidates, coarse or
    refined topics) or bare sets. header lines are written as comments.
    """
    lines = []
    if header:
        header_lines = header.splitlines() if isinstance(header, str) else header
        lines.extend(f"# {h}" for h in header_lines)
    for cand in candidates:
        members = getattr(cand, "members", cand)
        lines.append(" ".join(str(m) for m in sorted(members)))
    Path(path).write_text("\n".join(lines) + "\n")
