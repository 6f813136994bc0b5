"""Piece-wise linear models of locally efficient sets and their archive.

A set model keeps its nodes sorted strictly increasing in f1 (hence, for
mutually nondominating bi-objective points, strictly decreasing in f2).
Nodes that cannot be placed without breaking that order are quarantined
rather than inserted: they signal a mis-modeled set, not a fatal error.
"""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .util import angle_deg

log = logging.getLogger(__name__)

# Decision vectors closer than this are the same node.
DUPLICATE_TOL = 1e-12


@dataclass(frozen=True)
class SetNode:
    x: np.ndarray
    f: np.ndarray
    node_id: int


class InsertStatus(Enum):
    INSERTED = "inserted"
    DUPLICATE = "duplicate"
    QUARANTINED = "quarantined"


class EfficientSetModel:
    """Ordered approximation of one locally efficient set."""

    def __init__(self, set_id: int):
        self.set_id = set_id
        self.nodes: list[SetNode] = []
        self.quarantine: list[SetNode] = []
        self._f1: list[float] = []
        self._next_node_id = 0
        self.version = 0

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[SetNode]:
        return iter(self.nodes)

    def insert(self, x: np.ndarray, f: np.ndarray) -> InsertStatus:
        """Insert a node keeping f1 strictly increasing and f2 strictly decreasing."""
        x = np.asarray(x, dtype=float).copy()
        f = np.asarray(f, dtype=float).copy()
        pos = bisect.bisect_left(self._f1, float(f[0]))
        for j in (pos - 1, pos):
            if 0 <= j < len(self.nodes):
                if float(np.linalg.norm(self.nodes[j].x - x)) < DUPLICATE_TOL:
                    return InsertStatus.DUPLICATE
        ok = True
        if pos > 0:
            left = self.nodes[pos - 1].f
            ok = ok and left[0] < f[0] and left[1] > f[1]
        if pos < len(self.nodes):
            right = self.nodes[pos].f
            ok = ok and f[0] < right[0] and f[1] > right[1]
        node = SetNode(x, f, self._next_node_id)
        self._next_node_id += 1
        if not ok:
            log.debug("set %d: quarantining node at f=%s (ordering violation)",
                      self.set_id, f.tolist())
            self.quarantine.append(node)
            return InsertStatus.QUARANTINED
        self.nodes.insert(pos, node)
        self._f1.insert(pos, float(f[0]))
        self.version += 1
        return InsertStatus.INSERTED

    def decision_array(self) -> np.ndarray:
        return np.array([n.x for n in self.nodes])

    def objective_array(self) -> np.ndarray:
        return np.array([n.f for n in self.nodes])

    def turn_angle(self, index: int) -> float:
        """Bend of the polyline at a node, in degrees; 0 at the endpoints."""
        if index <= 0 or index >= len(self.nodes) - 1:
            return 0.0
        u = self.nodes[index].x - self.nodes[index - 1].x
        v = self.nodes[index + 1].x - self.nodes[index].x
        return angle_deg(u, v)

    def csv_rows(self):
        for i, n in enumerate(self.nodes):
            yield (self.set_id, i, *n.x.tolist(), float(n.f[0]), float(n.f[1]))


class SetsArchive:
    """All discovered set models plus global nondominated extraction."""

    def __init__(self):
        self.sets: list[EfficientSetModel] = []
        self.next_set_id = 0
        self._front_cache = None
        self._cache_versions: Optional[tuple] = None

    def __len__(self) -> int:
        return len(self.sets)

    def new_set(self) -> EfficientSetModel:
        model = EfficientSetModel(self.next_set_id)
        self.next_set_id += 1
        self.sets.append(model)
        self._front_cache = None
        return model

    def adopt(self, model: EfficientSetModel) -> None:
        """Register a model built elsewhere (set_id must come from new_set)."""
        if all(s.set_id != model.set_id for s in self.sets):
            self.sets.append(model)
        self._front_cache = None

    def get(self, set_id: int) -> EfficientSetModel:
        for s in self.sets:
            if s.set_id == set_id:
                return s
        raise KeyError(set_id)

    def insert_node(self, set_id: int, x: np.ndarray, f: np.ndarray) -> InsertStatus:
        status = self.get(set_id).insert(x, f)
        if status is InsertStatus.INSERTED:
            self._front_cache = None
        return status

    def all_nodes(self):
        """Stacked (F, owners) over every archived node; owners are (set_id, node_id)."""
        fs = []
        owners = []
        for s in self.sets:
            for n in s.nodes:
                fs.append(n.f)
                owners.append((s.set_id, n.node_id))
        if not fs:
            return np.zeros((0, 2)), []
        return np.array(fs), owners

    def nondominated(self):
        """(F_front, owners_front) of the globally nondominated archive nodes."""
        versions = tuple(s.version for s in self.sets)
        if self._front_cache is not None and self._cache_versions == versions:
            return self._front_cache
        F, owners = self.all_nodes()
        if F.shape[0] == 0:
            result = (F, [])
        else:
            mask = kernels.nondominated_mask(F)
            result = (F[mask], [o for o, m in zip(owners, mask) if m])
        self._front_cache = result
        self._cache_versions = versions
        return result

    def find_containing_set(self, x: np.ndarray, f: np.ndarray,
                            sigma_min: float) -> Optional[tuple[int, int]]:
        """Locate a set that already models the point `(x, f)`.

        A point belongs between two consecutive nodes if it sits strictly
        inside their ideal-nadir box in objective space and is closer to
        both nodes than they are to each other in decision space. A point
        within `sigma_min` of any node belongs to that node's set outright,
        regardless of objective values. Returns (set_id, insertion index)
        of the first match in archive order, or None.
        """
        x = np.asarray(x, dtype=float)
        f = np.asarray(f, dtype=float)
        for s in self.sets:
            if not s.nodes:
                continue
            X = s.decision_array()
            F = s.objective_array()
            node_dist = np.linalg.norm(X - x, axis=1)
            near = np.nonzero(node_dist <= sigma_min)[0]
            if near.size:
                return s.set_id, int(near[0])
            if len(s.nodes) < 2:
                continue
            fa, fb = F[:-1], F[1:]
            ideal = np.minimum(fa, fb)
            nadir = np.maximum(fa, fb)
            in_box = np.all(f > ideal, axis=1) & np.all(f < nadir, axis=1)
            if not np.any(in_box):
                continue
            seg_len = np.linalg.norm(X[1:] - X[:-1], axis=1)
            close = (node_dist[:-1] <= seg_len) & (node_dist[1:] <= seg_len)
            hit = np.nonzero(in_box & close)[0]
            if hit.size:
                return s.set_id, int(hit[0]) + 1
        return None
