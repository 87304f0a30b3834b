"""Double thresholding and connectivity tracing (hysteresis).

The default trace is single-threaded by contract; the parallel variant
labels row bands independently and then stitches components across band
boundaries with a serial union-find pass, producing the identical final
edge set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .engine import WorkerConfig, parallel_band_map, plan_bands
from .nms import ThinnedField

LABEL_NONE = 0
LABEL_WEAK = 1
LABEL_STRONG = 2

_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass(frozen=True)
class Thresholds:
    low: float
    high: float

    def __post_init__(self):
        if not (0 <= self.low <= self.high):
            raise ValueError(f"need 0 <= low <= high, got low={self.low}, high={self.high}")


@dataclass(frozen=True)
class EdgeMap:
    width: int
    height: int
    labels: np.ndarray = field(repr=False)  # uint8 in {NONE, WEAK, STRONG}
    final: np.ndarray | None = field(default=None, repr=False)  # bool once traced

    def __post_init__(self):
        shape = (self.height, self.width)
        if self.labels.shape != shape:
            raise ValueError(f"labels have shape {self.labels.shape}, expected {shape}")
        self.labels.flags.writeable = False
        if self.final is not None:
            if self.final.shape != shape:
                raise ValueError(f"final has shape {self.final.shape}, expected {shape}")
            self.final.flags.writeable = False


def double_threshold(thin: ThinnedField, t: Thresholds) -> EdgeMap:
    """Strong where magnitude >= high, Weak where >= low, else None."""
    mag = thin.magnitude
    labels = np.where(
        mag >= t.high, LABEL_STRONG, np.where(mag >= t.low, LABEL_WEAK, LABEL_NONE)
    ).astype(np.uint8)
    return EdgeMap(width=thin.width, height=thin.height, labels=labels)


def trace_edges(edge_map: EdgeMap) -> EdgeMap:
    """Flood from all Strong seeds through 8-connected Weak/Strong pixels."""
    mask = edge_map.labels != LABEL_NONE
    components, _ = ndimage.label(mask, structure=_EIGHT_CONNECTED)
    strong_ids = np.unique(components[edge_map.labels == LABEL_STRONG])
    final = np.isin(components, strong_ids) & mask
    return EdgeMap(width=edge_map.width, height=edge_map.height, labels=edge_map.labels, final=final)


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def trace_edges_parallel(edge_map: EdgeMap, cfg: WorkerConfig) -> EdgeMap:
    """Same final edge set as trace_edges, via per-band labeling plus a
    serial boundary merge."""
    mask = edge_map.labels != LABEL_NONE
    strong = edge_map.labels == LABEL_STRONG
    bands = plan_bands(edge_map.height, cfg)

    def label_band(start: int, end: int):
        local, count = ndimage.label(mask[start:end], structure=_EIGHT_CONNECTED)
        return local, count

    parts = parallel_band_map(edge_map.height, cfg, label_band)

    # re-number band-local components into one global id space (0 = background)
    components = np.zeros(mask.shape, dtype=np.int64)
    offset = 0
    for (start, end), (local, count) in zip(bands, parts):
        block = local.astype(np.int64)
        components[start:end] = np.where(block > 0, block + offset, 0)
        offset += count
    total = offset + 1

    uf = _UnionFind(total)
    for _, end in bands[:-1]:
        top, bottom = components[end - 1], components[end]
        for shift in (-1, 0, 1):
            if shift == 0:
                a, b = top, bottom
            elif shift == 1:
                a, b = top[:-1], bottom[1:]
            else:
                a, b = top[1:], bottom[:-1]
            touching = (a > 0) & (b > 0)
            pairs = np.unique(np.stack([a[touching], b[touching]]), axis=1)
            for pa, pb in pairs.T:
                uf.union(int(pa), int(pb))

    root_of = np.fromiter((uf.find(i) for i in range(total)), dtype=np.int64, count=total)
    strong_root = np.zeros(total, dtype=bool)
    strong_root[root_of[np.unique(components[strong])]] = True
    final = strong_root[root_of[components]] & mask
    return EdgeMap(width=edge_map.width, height=edge_map.height, labels=edge_map.labels, final=final)
