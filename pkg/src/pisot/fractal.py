"""Rauzy fractal point clouds, the GIFS of the subtiles, and PPM rendering."""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels
from .spectral import PerronData, classify, perron_data, project_stable, stable_action
from .words import FixedPointStream, Substitution, ValidationError, periodic_point, prefix_suffix_automaton

MAX_GIFS_POINTS = 10_000_000


class ResourceError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Stepped lines and projected clouds
# ---------------------------------------------------------------------------

@dataclass
class SteppedLine:
    vertices: np.ndarray        # (N+1, d) int64, row k = abelianization of the length-k prefix
    letters: np.ndarray         # (N,) letter indices, step k goes along letters[k]

    def __post_init__(self):
        v = self.vertices
        if v.shape[0] != len(self.letters) + 1 or v[0].any():
            raise ValueError("stepped line must start at the origin with one step per letter")
        steps = np.diff(v, axis=0)
        expected = np.zeros_like(steps)
        expected[np.arange(len(self.letters)), self.letters] = 1
        if not np.array_equal(steps, expected):
            raise ValueError("steps must be the standard basis vectors of the letters")


def stepped_line(stream: FixedPointStream, N: int) -> SteppedLine:
    if N < 0:
        raise ValueError("N must be >= 0")
    codes = stream.codes(N)
    return SteppedLine(_kernels.prefix_counts(codes, stream.sigma.d), codes)


@dataclass
class PointCloud:
    points: np.ndarray          # (n, d-1) float
    labels: np.ndarray          # (n,) int, index into label_names
    label_names: list[str]
    source: str = ""
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def diameter(self) -> float:
        if len(self.points) < 2:
            return 0.0
        return float(np.linalg.norm(self.points.max(axis=0) - self.points.min(axis=0)))

    def max_norm(self) -> float:
        if not len(self.points):
            return 0.0
        return float(np.linalg.norm(self.points, axis=1).max())


def _require_pisot(sigma: Substitution) -> None:
    cls = classify(sigma.matrix)
    if not (cls.pisot and cls.irreducible):
        raise ValidationError(f"substitution is not irreducible Pisot: {cls.reasons}")


def rauzy_cloud(sigma: Substitution, N: int, pd: PerronData | None = None,
                stream: FixedPointStream | None = None) -> PointCloud:
    """Projections of the first N vertices of the stepped line, labelled by the next letter."""
    if N < 1:
        raise ValueError("N must be >= 1")
    _require_pisot(sigma)
    if pd is None:
        pd = perron_data(sigma.matrix)
    if stream is None:
        stream = periodic_point(sigma)
    line = stepped_line(stream, N)
    points = project_stable(pd, line.vertices[:N])
    return PointCloud(points, line.letters.copy(), list(sigma.letters),
                      source=f"rauzy N={N} seed={stream.seed} k={stream.k}",
                      meta={"N": N})


def cloud_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Directed nearest-neighbour distance: max over a of the distance to b."""
    dist, _ = cKDTree(b).query(a)
    return float(dist.max())


# ---------------------------------------------------------------------------
# Graph-directed IFS of the subtiles
# ---------------------------------------------------------------------------

class GifsEdge(NamedTuple):
    source: int                 # tile being described (letter in the middle of the label)
    target: int                 # tile whose contracted copy is used
    translation: np.ndarray
    prefix: str


@dataclass
class GifsSystem:
    letters: tuple[str, ...]
    edges: list[GifsEdge]
    contraction: np.ndarray

    def outgoing(self, i: int) -> list[GifsEdge]:
        return [e for e in self.edges if e.source == i]


def gifs_system(sigma: Substitution, pd: PerronData | None = None) -> GifsSystem:
    """X(i) = union over edges i -(p,i,s)-> j of  M X(j) + proj(l(p))."""
    if pd is None:
        pd = perron_data(sigma.matrix)
    letters = sigma.letters
    edges = []
    for e in prefix_suffix_automaton(sigma):
        shift = project_stable(pd, np.array([e.prefix.count(a) for a in letters]))
        edges.append(GifsEdge(letters.index(e.letter), letters.index(e.source), shift, e.prefix))
    return GifsSystem(letters, edges, stable_action(pd, sigma.matrix))


def _dedup(points: np.ndarray, grid: float) -> np.ndarray:
    if len(points) < 2:
        return points
    keys = np.round(points / grid).astype(np.int64)
    _, idx = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(idx)]


def gifs_step(g: GifsSystem, tiles: list[np.ndarray]) -> list[np.ndarray]:
    S = g.contraction
    new = []
    for i in range(len(g.letters)):
        parts = [tiles[e.target] @ S.T + e.translation for e in g.outgoing(i)]
        new.append(np.concatenate(parts, axis=0))
    return new


def gifs_tiles(g: GifsSystem, depth: int, dedup: float | None = 1e-9) -> list[np.ndarray]:
    """Per-vertex point sets after ``depth`` GIFS steps from the origin."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    dim = g.contraction.shape[0]
    tiles = [np.zeros((1, dim)) for _ in g.letters]
    for _ in range(depth):
        nxt = sum(len(tiles[e.target]) for e in g.edges)
        if nxt > MAX_GIFS_POINTS:
            raise ResourceError(f"GIFS cloud would reach {nxt} points (limit {MAX_GIFS_POINTS})")
        tiles = gifs_step(g, tiles)
        if dedup:
            tiles = [_dedup(t, dedup) for t in tiles]
    return tiles


def gifs_cloud(g: GifsSystem, depth: int, dedup: float | None = 1e-9) -> PointCloud:
    tiles = gifs_tiles(g, depth, dedup)
    points = np.concatenate(tiles, axis=0)
    labels = np.concatenate([np.full(len(t), i, dtype=np.int64) for i, t in enumerate(tiles)])
    return PointCloud(points, labels, list(g.letters), source=f"gifs depth={depth}",
                      meta={"depth": depth})


# ---------------------------------------------------------------------------
# Rasterization
# ---------------------------------------------------------------------------

BACKGROUND = (255, 255, 255)


def palette(n: int) -> np.ndarray:
    """Label k of n gets hue 360*k/n, saturation 0.75, value 0.95."""
    out = np.zeros((max(n, 1), 3), dtype=np.uint8)
    for k in range(n):
        rgb = colorsys.hsv_to_rgb(k / n, 0.75, 0.95)
        out[k] = [math.floor(c * 255 + 0.5) for c in rgb]
    return out


@dataclass
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray          # (height, width, 3) uint8, row 0 at the top

    def to_ppm(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes()

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_ppm())


def _axis_cells(values: np.ndarray, cells: int) -> np.ndarray:
    lo, hi = values.min(), values.max()
    span = hi - lo
    if span <= 0:
        return np.full(len(values), cells // 2, dtype=np.int64)
    lo -= 0.05 * span
    span *= 1.1
    idx = np.floor((values - lo) / span * cells).astype(np.int64)
    return np.clip(idx, 0, cells - 1)


def pixel_coords(points: np.ndarray, width: int, height: int):
    """(rows, cols) of each point; second coordinate grows upward."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] == 0:
        pts = np.zeros((len(pts), 2))
    xs = pts[:, 0]
    ys = pts[:, 1] if pts.shape[1] > 1 else np.zeros(len(pts))
    cols = _axis_cells(xs, width)
    if np.ptp(ys) > 0:
        rows = height - 1 - _axis_cells(ys, height)
    else:
        rows = np.full(len(pts), height // 2, dtype=np.int64)
    return rows, cols


def render_ppm(cloud: PointCloud, width: int = 800, height: int = 800) -> RasterImage:
    if width < 16 or height < 16:
        raise ValueError("image must be at least 16x16")
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:] = BACKGROUND
    if len(cloud):
        rows, cols = pixel_coords(cloud.points, width, height)
        img = _kernels.paint(img, rows, cols, cloud.labels, palette(len(cloud.label_names)))
    return RasterImage(width, height, img)


def interior_heuristic(cloud: PointCloud, gridsize: int = 64) -> bool:
    """Is the grid cell of the origin, with its 8 neighbours, occupied?

    Advisory only: a dense finite cloud around 0 suggests, but does not prove,
    that the origin is an inner point of the tile.
    """
    if gridsize < 8:
        raise ValueError("gridsize must be >= 8")
    if len(cloud) < 2:
        return False
    pts = np.vstack([np.zeros((1, cloud.points.shape[1])), cloud.points])
    rows, cols = pixel_coords(pts, gridsize, gridsize)
    occupied = np.zeros((gridsize, gridsize), dtype=bool)
    occupied[rows[1:], cols[1:]] = True
    r0, c0 = rows[0], cols[0]
    if not (1 <= r0 < gridsize - 1 and 1 <= c0 < gridsize - 1):
        return False
    return bool(occupied[r0 - 1:r0 + 2, c0 - 1:c0 + 2].all())


def label_overlap_fraction(cloud: PointCloud, resolution: int = 512) -> float:
    """Fraction of occupied raster cells that hold points of two or more labels."""
    if not len(cloud):
        return 0.0
    rows, cols = pixel_coords(cloud.points, resolution, resolution)
    cells = rows * resolution + cols
    pairs = np.unique(np.stack([cells, cloud.labels]), axis=1)
    _, per_cell = np.unique(pairs[0], return_counts=True)
    return float((per_cell >= 2).sum() / len(per_cell))
