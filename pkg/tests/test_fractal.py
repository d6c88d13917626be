import hashlib

import numpy as np
import pytest

from pisot import (
    PointCloud,
    gifs_cloud,
    gifs_system,
    interior_heuristic,
    perron_data,
    periodic_point,
    project_stable,
    rauzy_cloud,
    render_ppm,
    stepped_line,
    ValidationError,
)
from pisot.fractal import (
    ResourceError,
    SteppedLine,
    cloud_distance,
    gifs_step,
    gifs_tiles,
    label_overlap_fraction,
    palette,
)

from conftest import FIB, REDUCIBLE5, TAU2, TRIB1, TRIB2


def test_stepped_line_examples():
    assert stepped_line(periodic_point(TRIB1), 0).vertices.tolist() == [[0, 0, 0]]
    line = stepped_line(periodic_point(TRIB1), 3)
    assert line.vertices.tolist() == [[0, 0, 0], [1, 0, 0], [1, 1, 0], [2, 1, 0]]
    line = stepped_line(periodic_point(FIB), 2)
    assert line.vertices.tolist() == [[0, 0], [1, 0], [1, 1]]


def test_stepped_line_rejects_non_canonical():
    with pytest.raises(ValueError):
        SteppedLine(np.array([[0, 0], [2, 0]]), np.array([0]))
    with pytest.raises(ValueError):
        SteppedLine(np.array([[1, 0], [2, 0]]), np.array([0]))


def test_stepped_line_vertices_are_prefix_abelianizations():
    s = periodic_point(TRIB1)
    line = stepped_line(s, 200)
    word = s.prefix(200)
    for k in (0, 1, 17, 200):
        assert line.vertices[k].tolist() == [word[:k].count(a) for a in "abc"]


def test_rauzy_cloud_small_cases():
    c = rauzy_cloud(TRIB1, 1)
    assert len(c) == 1 and np.allclose(c.points, 0) and c.labels.tolist() == [0]
    c = rauzy_cloud(TRIB1, 1000)
    assert np.bincount(c.labels, minlength=3).sum() == 1000
    word = periodic_point(TRIB1).prefix(1000)
    assert [c.label_names[i] for i in c.labels] == list(word)


def test_rauzy_cloud_requires_pisot():
    with pytest.raises(ValidationError):
        rauzy_cloud(REDUCIBLE5, 10)


def test_rauzy_cloud_is_bounded():
    c = rauzy_cloud(TRIB1, 100_000)
    assert c.max_norm() < 1.0        # observed 0.99198 at N = 1e5
    assert np.isfinite(c.points).all()


def test_rauzy_max_norm_non_decreasing():
    c = rauzy_cloud(TRIB1, 20_000)
    norms = np.maximum.accumulate(np.linalg.norm(c.points, axis=1))
    assert (np.diff(norms) >= 0).all()
    assert rauzy_cloud(TRIB1, 5000).max_norm() <= c.max_norm()


def test_gifs_system_fibonacci():
    pd = perron_data(FIB.matrix)
    g = gifs_system(FIB, pd)
    assert len(g.edges) == 3
    shifts = sorted(tuple(np.round(e.translation, 12)) for e in g.edges)
    e1 = tuple(np.round(project_stable(pd, [1, 0]), 12))
    assert shifts == sorted([(0.0,), (0.0,), e1])


def test_gifs_system_tribonacci():
    g = gifs_system(TRIB1)
    assert len(g.edges) == 5
    for i in range(3):
        assert g.outgoing(i)


def test_gifs_depth_zero():
    c = gifs_cloud(gifs_system(TRIB1), 0)
    assert len(c) == 3 and np.allclose(c.points, 0)


def test_gifs_point_count_is_path_count():
    g = gifs_system(TRIB1)
    A = np.zeros((3, 3), dtype=np.int64)
    for e in g.edges:
        A[e.source, e.target] += 1
    for depth in range(7):
        tiles = gifs_tiles(g, depth, dedup=None)
        paths = np.linalg.matrix_power(A, depth) @ np.ones(3, dtype=np.int64)
        assert [len(t) for t in tiles] == paths.tolist()


def test_gifs_self_consistency():
    g = gifs_system(TRIB1)

    def keys(tiles):
        return [set(map(tuple, np.round(t / 1e-9).astype(np.int64))) for t in tiles]

    for n in (3, 6, 8):
        stepped = gifs_step(g, gifs_tiles(g, n))
        direct = gifs_tiles(g, n + 1)
        assert keys(stepped) == keys(direct)


def test_gifs_resource_limit(monkeypatch):
    import pisot.fractal as fr
    monkeypatch.setattr(fr, "MAX_GIFS_POINTS", 100)
    with pytest.raises(ResourceError):
        gifs_cloud(gifs_system(TRIB1), 12, dedup=None)


def test_gifs_points_lie_in_projection_cloud():
    pd = perron_data(TRIB1.matrix)
    g = gifs_cloud(gifs_system(TRIB1, pd), 6)
    r = rauzy_cloud(TRIB1, 100_000, pd)
    assert cloud_distance(g.points, r.points) < 1e-9


def test_palette():
    # hue 0, s 0.75, v 0.95: (0.95, 0.2375, 0.2375) * 255 rounded half up
    assert palette(3).tolist() == [[242, 61, 61], [61, 242, 61], [61, 61, 242]]
    assert palette(1).tolist() == [[242, 61, 61]]


def test_render_empty_and_single_point():
    empty = PointCloud(np.zeros((0, 2)), np.zeros(0, dtype=int), ["x"])
    img = render_ppm(empty, 20, 16)
    assert (img.pixels == 255).all() and img.pixels.shape == (16, 20, 3)
    one = PointCloud(np.array([[0.3, -2.0]]), np.array([0]), ["x"])
    img = render_ppm(one, 20, 16)
    colored = np.argwhere((img.pixels != 255).any(axis=2))
    assert colored.tolist() == [[8, 10]]


def test_render_rejects_tiny_images():
    with pytest.raises(ValueError):
        render_ppm(rauzy_cloud(TRIB1, 10), 8, 32)


def test_render_orientation_and_margin():
    pts = np.array([[0.0, 0.0], [1.0, 1.0]])
    img = render_ppm(PointCloud(pts, np.array([0, 1]), ["a", "b"]), 100, 100)
    colored = {tuple(p) for p in np.argwhere((img.pixels != 255).any(axis=2))}
    # 5% margin each side: x=0 -> column 4, x=1 -> column 95; y grows upward
    assert colored == {(95, 4), (4, 95)}


def test_ppm_bytes():
    img = render_ppm(rauzy_cloud(TRIB1, 50), 16, 16)
    data = img.to_ppm()
    assert data.startswith(b"P6\n16 16\n255\n")
    assert len(data) == len(b"P6\n16 16\n255\n") + 3 * 16 * 16
    assert data == render_ppm(rauzy_cloud(TRIB1, 50), 16, 16).to_ppm()


GOLDEN = {
    "trib1": (TRIB1, "e700b517826dcd4a2fe92d598b9b44380bc9eaf0688bd45f41416e70871d154d"),
    "trib2": (TRIB2, "0ba192e7c77487cd4669b383e649afa0b8c472b16e5d673e497af8bebcecb32b"),
    "tau2": (TAU2, "b42cf50061620f7a6ad9031739ab6f549316b6ee875bccea5c122c7b247b5898"),
}


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_render_checksums(name):
    sigma, digest = GOLDEN[name]
    img = render_ppm(rauzy_cloud(sigma, 5000), 64, 48)
    assert hashlib.sha256(img.to_ppm()).hexdigest() == digest


def test_interior_heuristic():
    assert interior_heuristic(rauzy_cloud(TRIB1, 100_000), 64)
    assert not interior_heuristic(PointCloud(np.zeros((1, 2)), np.zeros(1, dtype=int), ["a"]), 64)
    with pytest.raises(ValueError):
        interior_heuristic(rauzy_cloud(TRIB1, 10), 4)


def test_subtiles_are_empirically_disjoint():
    c = rauzy_cloud(TRIB1, 100_000)
    assert label_overlap_fraction(c, 512) < 0.05
