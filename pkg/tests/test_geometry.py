"""Tessellation, reuse-6 coloring, interference layout and worst-case points."""

import itertools
import math

import numpy as np
import pytest
from shapely.geometry import Polygon as ShapelyPolygon

from comp_coverage.core import SQRT3, ConfigError, NetworkConfig
from comp_coverage.geometry import (
    CR_AREA_N2,
    CR_AREA_N3,
    AnchorCoincidentError,
    ConvexPolygon,
    GeometryError,
    InterferenceLayout,
    Point2D,
    PointOutsideRegionError,
    build_tessellation,
    cochannel_regions,
    color_reuse6,
    distances,
    home_cr,
    home_region,
    interference_layout,
    worst_case_points,
)


def shapely_of(region):
    return ShapelyPolygon([(p.x, p.y) for p in region.polygon.vertices])


def anchor_key(region):
    return frozenset((round(a.x, 6), round(a.y, 6)) for a in region.anchors)


class TestConvexPolygon:
    def test_validation(self):
        with pytest.raises(GeometryError):
            ConvexPolygon((Point2D(0, 0), Point2D(1, 0)))
        with pytest.raises(GeometryError):  # clockwise
            ConvexPolygon((Point2D(0, 0), Point2D(0, 1), Point2D(1, 0)))
        with pytest.raises(GeometryError):  # collinear
            ConvexPolygon((Point2D(0, 0), Point2D(1, 0), Point2D(2, 0)))

    def test_area_and_containment(self):
        tri = ConvexPolygon((Point2D(0, 0), Point2D(2, 0), Point2D(0, 2)))
        assert tri.area == pytest.approx(2.0, rel=1e-14)
        assert tri.contains(Point2D(0.5, 0.5))
        assert tri.contains(Point2D(1, 1))       # on the hypotenuse
        assert not tri.contains(Point2D(1.5, 1.5))


class TestTessellation:
    @pytest.mark.parametrize("n,cr_area", [(2, CR_AREA_N2), (3, CR_AREA_N3)])
    def test_cr_areas(self, n, cr_area):
        d = 700.0
        regions = build_tessellation(NetworkConfig(d=d, n=n), extent=2)
        for r in regions:
            assert r.polygon.area == pytest.approx(cr_area * d * d, rel=1e-9)

    def test_area_identity_per_hexagon(self):
        # one hexagonal cell holds 3 diamonds or 2 triangles
        assert 3.0 * CR_AREA_N2 == pytest.approx(1.5 * SQRT3, rel=1e-15)
        assert 2.0 * CR_AREA_N3 == pytest.approx(1.5 * SQRT3, rel=1e-15)

    def test_bs_spacing(self):
        regions = build_tessellation(NetworkConfig(d=1.0, n=2), extent=1)
        gaps = {round(math.dist((r.anchors[0].x, r.anchors[0].y),
                                (r.anchors[1].x, r.anchors[1].y)), 9)
                for r in regions}
        assert gaps == {round(SQRT3, 9)}

    @pytest.mark.parametrize("n", [2, 3])
    def test_no_overlap_and_no_gaps(self, n):
        d = 1.0
        cfg = NetworkConfig(d=d, n=n)
        regions = build_tessellation(cfg, extent=3)
        polys = [shapely_of(r) for r in regions]
        cr_area = (CR_AREA_N2 if n == 2 else CR_AREA_N3) * d * d
        for i, j in itertools.combinations(range(len(polys)), 2):
            if polys[i].distance(polys[j]) > 1e-12:
                continue
            assert polys[i].intersection(polys[j]).area < 1e-9 * cr_area
        # total area equals count * A_CR (no double counting)
        total = sum(p.area for p in polys)
        assert total == pytest.approx(len(polys) * cr_area, rel=1e-9)
        # interior coverage: every probe point lies in some CR
        rng = np.random.default_rng(7)
        probes = rng.uniform(-1.2 * SQRT3 * d, 1.2 * SQRT3 * d, size=(400, 2))
        for x, y in probes:
            assert any(r.polygon.contains(Point2D(x, y)) for r in regions)

    def test_unsupported_order(self):
        with pytest.raises(ConfigError):
            build_tessellation(NetworkConfig(d=1.0, n=1), extent=2)


class TestColoring:
    @pytest.mark.parametrize("n", [2, 3])
    def test_six_colors_around_every_bs(self, n):
        regions = color_reuse6(build_tessellation(NetworkConfig(d=1.0, n=n), extent=3))
        incident = {}
        for r in regions:
            for a in r.anchors:
                incident.setdefault((round(a.x, 6), round(a.y, 6)), []).append(r.color)
        full = [c for c in incident.values() if len(c) == 6]
        assert len(full) > 10
        for colors in full:
            assert len(set(colors)) == 6

    @pytest.mark.parametrize("n", [2, 3])
    def test_same_color_regions_share_no_anchor(self, n):
        regions = color_reuse6(build_tessellation(NetworkConfig(d=1.0, n=n), extent=3))
        by_color = {}
        for r in regions:
            by_color.setdefault(r.color, []).append(anchor_key(r))
        for keys in by_color.values():
            for a, b in itertools.combinations(keys, 2):
                assert not (a & b)

    def test_coloring_is_periodic(self):
        # translating by two lattice steps along u maps colors onto themselves
        d = 1.0
        regions = color_reuse6(build_tessellation(NetworkConfig(d=d, n=2), extent=4))
        by_key = {anchor_key(r): r.color for r in regions}
        shift = 2 * np.array([1.5, 0.5 * SQRT3]) * d
        checked = 0
        for r in regions:
            moved = frozenset((round(a.x + shift[0], 6), round(a.y + shift[1], 6))
                              for a in r.anchors)
            if moved in by_key:
                assert by_key[moved] == r.color
                checked += 1
        assert checked > 20

    def test_too_small_rejected(self):
        regions = build_tessellation(NetworkConfig(d=1.0, n=2), extent=1)
        # strip the tessellation below one full BS neighborhood
        with pytest.raises(GeometryError):
            color_reuse6(regions[:3])


class TestInterferenceLayout:
    def test_tier_counts(self):
        assert len(interference_layout(NetworkConfig(d=1.0, n=2)).tier1) == 4
        assert len(interference_layout(NetworkConfig(d=1.0, n=3)).tier1) == 3

    def test_nearest_diamond_matches_reference_vertices(self):
        lay = interference_layout(NetworkConfig(d=250.0, n=2))
        want = {(1.0, 0.0), (1.5, round(SQRT3 / 2, 9)), (2.0, 0.0),
                (1.5, round(-SQRT3 / 2, 9))}
        found = []
        for poly in lay.tier1:
            got = {(round(p.x, 9), round(p.y, 9)) for p in poly.vertices}
            found.append(got == want)
        assert any(found)

    def test_polygons_are_d_normalized(self):
        for d in (1.0, 500.0):
            lay = interference_layout(NetworkConfig(d=d, n=3))
            areas = sorted(p.area for p in lay.tier1)
            assert areas[0] == pytest.approx(CR_AREA_N3, rel=1e-9)

    def test_regions_exclude_origin_and_home_anchors(self):
        for n in (2, 3):
            lay = interference_layout(NetworkConfig(d=1.0, n=n))
            home_anchors = {(round(a.x, 6), round(a.y, 6))
                            for a in home_cr(NetworkConfig(d=1.0, n=n)).anchors}
            for poly in lay.tier1 + lay.tier2:
                assert not poly.contains(Point2D(0.0, 0.0))
                verts = {(round(p.x, 6), round(p.y, 6)) for p in poly.vertices}
                # co-channel CRs never share an anchor with the home CR; their
                # anchors are a subset of the polygon vertices
                assert not (verts & home_anchors & verts)

    @pytest.mark.parametrize("n", [2, 3])
    def test_layout_universality(self, n):
        """Co-channel neighborhoods around different BSs and colors agree up
        to a lattice isometry."""
        cfg = NetworkConfig(d=1.0, n=n)
        regions = color_reuse6(build_tessellation(cfg, extent=6))

        def local_polys(home):
            """Raw vertex tuples of nearby co-channel CRs, home-BS-centered."""
            bx, by = home.anchors[0].x, home.anchors[0].y
            out = []
            for r in cochannel_regions(home, regions):
                shifted = [(p.x - bx, p.y - by) for p in r.polygon.vertices]
                if min(math.hypot(x, y) for x, y in shifted) <= 2.2 * SQRT3:
                    out.append(shifted)
            return out

        def canon(polys, k=0, reflect=False):
            c, s = math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)
            out = set()
            for poly in polys:
                pts = []
                for x, y in poly:
                    if reflect:
                        y = -y
                    pts.append((round(c * x - s * y, 6), round(s * x + c * y, 6)))
                out.add(tuple(sorted(pts)))
            return out

        home = home_region(cfg, regions)
        canonical = local_polys(home)
        others = [r for r in regions
                  if r.polygon.min_distance(Point2D(0, 0)) < 2.0
                  and anchor_key(r) != anchor_key(home)][:3]
        assert len(others) == 3
        for other in others:
            target = canon(local_polys(other))
            ok = any(canon(canonical, k, refl) == target
                     for k in range(6) for refl in (False, True))
            assert ok, f"no isometry maps the canonical layout onto color {other.color}"

    def test_json_round_trip(self):
        lay = interference_layout(NetworkConfig(d=1.0, n=2))
        doc = lay.to_dict()
        back = InterferenceLayout.from_dict(doc)
        assert back.n == lay.n
        assert len(back.tier1) == len(lay.tier1)
        assert back.to_dict() == doc


class TestDistances:
    def test_diamond_tip(self):
        cfg = NetworkConfig(d=1.0, n=2)
        cr = home_cr(cfg)
        tip = Point2D(0.5, 0.5 * SQRT3)
        assert distances(tip, cr) == pytest.approx((1.0, 1.0), rel=1e-12)

    def test_triangle_centroid(self):
        cfg = NetworkConfig(d=1.0, n=3)
        assert distances(Point2D(1.0, 0.0), home_cr(cfg)) == pytest.approx(
            (1.0, 1.0, 1.0), rel=1e-12)

    def test_bs_segment_midpoint(self):
        cfg = NetworkConfig(d=1.0, n=2)
        mid = Point2D(0.0, 0.5 * SQRT3)
        assert distances(mid, home_cr(cfg)) == pytest.approx(
            (SQRT3 / 2, SQRT3 / 2), rel=1e-12)

    def test_outside_rejected(self):
        cfg = NetworkConfig(d=1.0, n=2)
        with pytest.raises(PointOutsideRegionError):
            distances(Point2D(5.0, 5.0), home_cr(cfg))

    def test_anchor_rejected(self):
        cfg = NetworkConfig(d=1.0, n=2)
        with pytest.raises(AnchorCoincidentError):
            distances(Point2D(0.0, 0.0), home_cr(cfg))


class TestWorstCasePoints:
    def test_diamond(self):
        pts = worst_case_points(NetworkConfig(d=500.0, n=2))
        assert len(pts) == 2
        for p, rvec in pts:
            assert rvec == (500.0, 500.0)
            assert home_cr(NetworkConfig(d=500.0, n=2)).polygon.contains(p)

    def test_triangle(self):
        pts = worst_case_points(NetworkConfig(d=1006.0, n=3))
        assert len(pts) == 1
        p, rvec = pts[0]
        assert rvec == (1006.0, 1006.0, 1006.0)
        # centroid-to-vertex distance is (BS spacing)/sqrt(3) = d
        for a in home_cr(NetworkConfig(d=1006.0, n=3)).anchors:
            assert math.hypot(p.x - a.x, p.y - a.y) == pytest.approx(1006.0, rel=1e-9)

    def test_unsupported(self):
        with pytest.raises(ConfigError):
            worst_case_points(NetworkConfig(d=1.0, n=1))

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("alpha", [3.0, 3.5, 4.0])
    def test_argmin_grid_search(self, n, alpha):
        """Independent oracle: the path-loss functional sum r_k^(-2 alpha) is
        minimized (over a fine grid) within one cell of the declared points."""
        from comp_coverage.coverage import cr_grid_points

        d = 1.0
        cfg = NetworkConfig(d=d, n=n, alpha=alpha)
        pts = cr_grid_points(cfg, 200)
        anchors = np.array([[a.x, a.y] for a in home_cr(cfg).anchors])
        rr = np.linalg.norm(pts[:, None, :] - anchors[None, :, :], axis=2)
        f = (rr ** (-2.0 * alpha)).sum(axis=1)
        best = pts[np.argmin(f)]
        cell_diameter = SQRT3 * d / 200.0
        dist_to_declared = min(math.hypot(best[0] - p.x, best[1] - p.y)
                               for p, _ in worst_case_points(cfg))
        assert dist_to_declared <= 1.5 * cell_diameter
