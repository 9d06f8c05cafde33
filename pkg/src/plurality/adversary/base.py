from __future__ import annotations

from ..core import Coloring, GameConfig, Partition
from .aux import AuxGraph

CONDITIONED = "conditioned"
POST_VIOLATION = "post_violation"


class Adversary:
    """Answers queries; subclasses keep whatever state they need.

    ``witness()`` returns a coloring consistent with every answer given so far,
    or None if the strategy cannot name one.
    """

    name = "adversary"
    aux: AuxGraph | None = None

    def __init__(self, config: GameConfig) -> None:
        self.config = config

    def answer(self, query) -> Partition:
        raise NotImplementedError

    def witness(self) -> Coloring | None:
        return None

    @property
    def phase(self) -> str:
        return CONDITIONED


def restricted_growth(query, parts: Partition) -> tuple[int, ...]:
    """Label vector of a partition over the sorted query, e.g. {1,2}|{3} -> (0, 0, 1)."""
    where = {b: i for i, p in enumerate(parts) for b in p}
    labels: dict[int, int] = {}
    out = []
    for b in sorted(query):
        out.append(labels.setdefault(where[b], len(labels)))
    return tuple(out)
