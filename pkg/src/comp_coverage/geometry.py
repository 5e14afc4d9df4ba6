"""Hexagonal lattice, cooperation-region tessellation, reuse-6 coloring and
co-channel interference layout.

Canonical frame: the home base station sits at the origin and its six
nearest neighbors are at (+-3d/2, +-sqrt(3)d/2) and (0, +-sqrt(3)d), i.e.
at distance sqrt(3)*d.  Voronoi hexagon vertices then lie at distance d
along the angles 0, 60, ..., 300 degrees.  In this frame the nearest
co-channel diamond of the origin BS (n = 2) has vertices (d, 0),
(3d/2, +-sqrt(3)d/2) and (2d, 0).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .core import SQRT3, ConfigError, NetworkConfig

# lattice basis in units of d (neighbors at 60 degrees of each other)
BASIS_U = (1.5, 0.5 * SQRT3)
BASIS_V = (1.5, -0.5 * SQRT3)

# canonical cooperation-region areas in units of d^2
CR_AREA_N2 = 0.5 * SQRT3       # diamond
CR_AREA_N3 = 0.75 * SQRT3      # equilateral triangle

TIER1_RADIUS = SQRT3           # in units of d
TIER2_RADIUS = 2.0 * SQRT3
_TIER_EPS = 1e-9


class GeometryError(ValueError):
    """Base error for geometry operations."""


class PointOutsideRegionError(GeometryError):
    """The queried point is not inside the cooperation region."""


class AnchorCoincidentError(GeometryError):
    """The queried point coincides with an anchor BS (zero distance)."""


@dataclass(frozen=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"point coordinates must be finite: ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise vertex order."""

    vertices: tuple[Point2D, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        pts = self.as_array()
        n = len(pts)
        scale = max(1.0, float(np.abs(pts).max()))
        for k in range(n):
            a, b, c = pts[k], pts[(k + 1) % n], pts[(k + 2) % n]
            cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if cross <= 1e-12 * scale * scale:
                raise GeometryError("vertices must be strictly convex and counter-clockwise")

    def as_array(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.vertices])

    @property
    def area(self) -> float:
        """Shoelace area (positive for the CCW orientation enforced here)."""
        pts = self.as_array()
        x, y = pts[:, 0], pts[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    @property
    def centroid(self) -> Point2D:
        pts = self.as_array()
        c = pts.mean(axis=0)  # exact for the symmetric CR shapes used here
        return Point2D(float(c[0]), float(c[1]))

    def contains(self, p: Point2D, tol: float = 1e-9) -> bool:
        """Point-in-polygon test; points on the boundary count as inside."""
        pts = self.as_array()
        q = p.as_array()
        scale = max(1.0, float(np.abs(pts).max()))
        n = len(pts)
        for k in range(n):
            a, b = pts[k], pts[(k + 1) % n]
            cross = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
            if cross < -tol * scale * scale:
                return False
        return True

    def min_distance(self, p: Point2D) -> float:
        """Distance from p to the polygon (0 if inside)."""
        if self.contains(p):
            return 0.0
        pts = self.as_array()
        q = p.as_array()
        best = math.inf
        n = len(pts)
        for k in range(n):
            a, b = pts[k], pts[(k + 1) % n]
            ab = b - a
            t = float(np.clip(np.dot(q - a, ab) / np.dot(ab, ab), 0.0, 1.0))
            best = min(best, float(np.linalg.norm(a + t * ab - q)))
        return best

    def scaled(self, factor: float) -> "ConvexPolygon":
        return ConvexPolygon(tuple(Point2D(p.x * factor, p.y * factor) for p in self.vertices))


@dataclass(frozen=True)
class CoopRegion:
    """A cooperation region: its polygon, anchor BS positions and reuse color."""

    polygon: ConvexPolygon
    anchors: tuple[Point2D, ...]
    color: int | None = None

    def __post_init__(self):
        verts = {(round(p.x, 9), round(p.y, 9)) for p in self.polygon.vertices}
        for a in self.anchors:
            if (round(a.x, 9), round(a.y, 9)) not in verts:
                raise GeometryError("every anchor must be a vertex of the CR polygon")


@dataclass(frozen=True)
class InterferenceLayout:
    """Co-channel CRs around a BS, d-normalized and home-BS-centered."""

    n: int
    tier1: tuple[ConvexPolygon, ...]
    tier2: tuple[ConvexPolygon, ...]

    def polygons(self, tiers: int) -> tuple[ConvexPolygon, ...]:
        if tiers == 1:
            return self.tier1
        if tiers == 2:
            return self.tier1 + self.tier2
        raise GeometryError(f"tiers must be 1 or 2, got {tiers}")

    def to_dict(self) -> dict:
        def dump(polys, tier):
            return [{"tier": tier, "vertices": [[p.x, p.y] for p in poly.vertices]}
                    for poly in polys]

        return {"n": self.n, "regions": dump(self.tier1, 1) + dump(self.tier2, 2)}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "InterferenceLayout":
        tiers: dict[int, list[ConvexPolygon]] = {1: [], 2: []}
        for entry in doc["regions"]:
            poly = ConvexPolygon(tuple(Point2D(x, y) for x, y in entry["vertices"]))
            tiers[int(entry["tier"])].append(poly)
        return cls(n=int(doc["n"]), tier1=tuple(tiers[1]), tier2=tuple(tiers[2]))


def _lattice_point(i: int, j: int, d: float) -> np.ndarray:
    return np.array([(BASIS_U[0] * i + BASIS_V[0] * j) * d,
                     (BASIS_U[1] * i + BASIS_V[1] * j) * d])


def _to_lattice(p: np.ndarray, d: float) -> tuple[int, int]:
    """Invert the lattice basis; raises if p is not a lattice point."""
    s = p[0] / (1.5 * d)
    t = p[1] / (0.5 * SQRT3 * d)
    i, j = 0.5 * (s + t), 0.5 * (s - t)
    ii, jj = round(i), round(j)
    if abs(i - ii) > 1e-6 or abs(j - jj) > 1e-6:
        raise GeometryError(f"point {p} is not a BS lattice site")
    return ii, jj


def _ring(i: int, j: int) -> int:
    return (abs(i) + abs(j) + abs(i + j)) // 2


def _snap(p: np.ndarray, d: float) -> Point2D:
    """Snap to the exact coordinate grid of the tessellation.

    Every BS, hexagon vertex and CR corner lies at an integer multiple of
    d/2 in x and of sqrt(3) d / 2 in y; snapping removes float dust so
    that shared edges of adjacent CRs carry identical coordinates.
    """
    return Point2D(round(p[0] / (0.5 * d)) * (0.5 * d),
                   round(p[1] / (0.5 * SQRT3 * d)) * (0.5 * SQRT3 * d))


def _edge_diamond(a: np.ndarray, b: np.ndarray, d: float) -> CoopRegion:
    """Diamond CR of an arbitrary lattice edge a-b (spacing sqrt(3) d)."""
    mid = 0.5 * (a + b)
    u = (b - a) / np.linalg.norm(b - a)
    perp = np.array([-u[1], u[0]])
    p1 = _snap(mid + 0.5 * d * perp, d)
    p2 = _snap(mid - 0.5 * d * perp, d)
    pa, pb = _snap(a, d), _snap(b, d)
    poly = ConvexPolygon((pa, p2, pb, p1))
    return CoopRegion(polygon=poly, anchors=(pa, pb))


def _triangle(pts: list[np.ndarray], d: float) -> CoopRegion:
    """Triangle CR from three BS positions, reordered counter-clockwise."""
    a, b, c = pts
    if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0:
        b, c = c, b
    corners = (_snap(a, d), _snap(b, d), _snap(c, d))
    return CoopRegion(polygon=ConvexPolygon(corners), anchors=corners)


def build_tessellation(cfg: NetworkConfig, extent: int) -> list[CoopRegion]:
    """Tessellate the neighborhood of the origin BS into cooperation regions.

    Generates the BS lattice out to `extent` rings (ring spacing sqrt(3) d)
    and builds one diamond per lattice edge (n = 2) or one triangle per
    lattice face (n = 3).  Each hexagonal cell is covered by exactly three
    diamonds or two triangles, so the CRs tile the interior of the extent
    without gaps or overlap.
    """
    if cfg.n not in (2, 3):
        raise ConfigError(f"tessellation requires cooperation order 2 or 3, got n={cfg.n}")
    if extent < 1:
        raise GeometryError(f"extent must be >= 1 ring, got {extent}")

    sites = {(i, j) for i in range(-2 * extent, 2 * extent + 1)
             for j in range(-2 * extent, 2 * extent + 1) if _ring(i, j) <= extent}
    regions: list[CoopRegion] = []
    if cfg.n == 2:
        # one diamond per lattice edge; directions u, v and w = u - v
        for (i, j) in sorted(sites):
            a = _lattice_point(i, j, cfg.d)
            for (di, dj) in ((1, 0), (0, 1), (1, -1)):
                if (i + di, j + dj) in sites:
                    b = _lattice_point(i + di, j + dj, cfg.d)
                    regions.append(_edge_diamond(a, b, cfg.d))
    else:
        for (i, j) in sorted(sites):
            up = [(i, j), (i + 1, j), (i, j + 1)]
            down = [(i + 1, j), (i, j + 1), (i + 1, j + 1)]
            for tri in (up, down):
                if all(s in sites for s in tri):
                    regions.append(_triangle([_lattice_point(a, b, cfg.d) for a, b in tri], cfg.d))
    return regions


def _region_color(region: CoopRegion, d: float) -> int:
    """Constructive reuse-6 color of a CR, derived from its lattice identity.

    Diamonds: color = 2*orientation + parity, where orientation indexes the
    three edge directions and the parity alternates along that direction.
    Triangles: color = (i - j) mod 3 within the up and down families.
    Colors are reported 1-based.
    """
    coords = [_to_lattice(a.as_array(), d) for a in region.anchors]
    if len(coords) == 2:
        (i1, j1), (i2, j2) = coords
        delta = (i2 - i1, j2 - j1)
        if delta in ((-1, 0), (0, -1), (-1, 1)):
            (i1, j1), delta = (i2, j2), (-delta[0], -delta[1])
        if delta == (1, 0):       # u edge
            orient, parity = 0, i1 % 2
        elif delta == (0, 1):     # v edge
            orient, parity = 1, j1 % 2
        elif delta == (1, -1):    # w edge
            orient, parity = 2, i1 % 2
        else:
            raise GeometryError(f"anchors are not adjacent lattice sites: {coords}")
        return 1 + 2 * orient + parity
    if len(coords) == 3:
        s = set(coords)
        i, j = min(c[0] for c in coords), min(c[1] for c in coords)
        if {(i, j), (i + 1, j), (i, j + 1)} == s:           # up triangle
            return 1 + (i - j) % 3
        if {(i + 1, j), (i, j + 1), (i + 1, j + 1)} == s:   # down triangle
            return 4 + (i - j) % 3
        raise GeometryError(f"anchor sites do not form a lattice face: {coords}")
    raise GeometryError(f"expected 2 or 3 anchors, got {len(coords)}")


def color_reuse6(regions: list[CoopRegion]) -> list[CoopRegion]:
    """Assign the periodic reuse-6 coloring to a tessellation.

    The coloring is constructive (translation classes of the 6-CR motif),
    so it is deterministic; afterwards every interior BS is verified to see
    all 6 colors among its incident CRs, which also guarantees that no two
    same-color CRs share an anchor.
    """
    if not regions:
        raise GeometryError("empty tessellation")
    d = math.dist(
        (regions[0].anchors[0].x, regions[0].anchors[0].y),
        (regions[0].anchors[1].x, regions[0].anchors[1].y),
    ) / SQRT3
    colored = [replace(r, color=_region_color(r, d)) for r in regions]

    incident: dict[tuple[int, int], list[int]] = {}
    for r in colored:
        for a in r.anchors:
            incident.setdefault(_to_lattice(a.as_array(), d), []).append(r.color)
    full = [cols for cols in incident.values() if len(cols) == 6]
    if not full:
        raise GeometryError("tessellation too small to verify the reuse-6 periodicity")
    for cols in full:
        if len(set(cols)) != 6:
            raise GeometryError(f"coloring violates the 6-distinct-colors rule: {cols}")
    return colored


def home_cr(cfg: NetworkConfig) -> CoopRegion:
    """The canonical CR anchored at the origin BS (uncolored).

    n = 2: the diamond of the vertical edge {0, (0, sqrt(3) d)};
    n = 3: the triangle {0, (3d/2, +-sqrt(3)d/2)}.
    """
    if cfg.n == 2:
        return _edge_diamond(np.zeros(2), np.array([0.0, SQRT3 * cfg.d]), cfg.d)
    if cfg.n == 3:
        return _triangle([np.zeros(2), _lattice_point(1, 0, cfg.d),
                      _lattice_point(0, 1, cfg.d)], cfg.d)
    raise ConfigError(f"home CR is defined for cooperation orders 2 and 3, got n={cfg.n}")


def home_region(cfg: NetworkConfig, regions: list[CoopRegion]) -> CoopRegion:
    """Find the canonical home CR inside a tessellation."""
    want = {(round(a.x, 6), round(a.y, 6)) for a in home_cr(cfg).anchors}
    for r in regions:
        got = {(round(a.x, 6), round(a.y, 6)) for a in r.anchors}
        if got == want:
            return r
    raise GeometryError("tessellation does not contain the canonical home CR")


def cochannel_regions(home: CoopRegion, regions: list[CoopRegion]) -> list[CoopRegion]:
    """All CRs sharing the home CR's color, excluding the home CR itself."""
    if home.color is None:
        raise GeometryError("regions must be colored first")
    home_anchor_set = {(round(a.x, 6), round(a.y, 6)) for a in home.anchors}

    def is_home(r):
        return {(round(a.x, 6), round(a.y, 6)) for a in r.anchors} == home_anchor_set

    return [r for r in regions if r.color == home.color and not is_home(r)]


def interference_layout(cfg: NetworkConfig, extent: int = 5) -> InterferenceLayout:
    """Tiered co-channel interference regions as seen by the origin BS.

    Tier membership uses the minimum distance from the home BS to the CR
    polygon: tier 1 up to sqrt(3) d and tier 2 up to 2 sqrt(3) d, both
    inclusive.  Polygons are returned d-normalized in the home-BS frame.
    """
    regions = color_reuse6(build_tessellation(cfg, extent))
    home = home_region(cfg, regions)
    origin = Point2D(0.0, 0.0)
    tier1, tier2 = [], []
    for r in cochannel_regions(home, regions):
        dist = r.polygon.min_distance(origin) / cfg.d
        if dist <= TIER1_RADIUS * (1.0 + _TIER_EPS):
            tier1.append(r.polygon.scaled(1.0 / cfg.d))
        elif dist <= TIER2_RADIUS * (1.0 + _TIER_EPS):
            tier2.append(r.polygon.scaled(1.0 / cfg.d))
    expected = 4 if cfg.n == 2 else 3
    if len(tier1) != expected:
        raise GeometryError(
            f"tier-1 calibration failed: expected {expected} regions, got {len(tier1)}"
        )

    def by_position(poly):
        c = poly.centroid
        return (round(math.hypot(c.x, c.y), 9), round(math.atan2(c.y, c.x), 9))

    return InterferenceLayout(n=cfg.n, tier1=tuple(sorted(tier1, key=by_position)),
                              tier2=tuple(sorted(tier2, key=by_position)))


def distances(p: Point2D, cr: CoopRegion) -> tuple[float, ...]:
    """Euclidean distances from a user at p to the CR's anchor BSs.

    The point must lie inside the CR (boundary included) and must not
    coincide with an anchor, where the path-loss model is singular.
    """
    if not cr.polygon.contains(p):
        raise PointOutsideRegionError(f"point ({p.x}, {p.y}) lies outside the CR")
    out = []
    for a in cr.anchors:
        dist = math.hypot(p.x - a.x, p.y - a.y)
        if dist == 0.0:
            raise AnchorCoincidentError(f"point coincides with anchor BS at ({a.x}, {a.y})")
        out.append(dist)
    return tuple(out)


def worst_case_points(cfg: NetworkConfig) -> list[tuple[Point2D, tuple[float, ...]]]:
    """Locations of minimum coverage in the home CR with their BS distances.

    n = 2: the two diamond side vertices, each at distance d from both
    anchors; n = 3: the triangle centroid, at distance d from all three.
    The distance vectors are returned analytically as exact multiples of d.
    """
    d = cfg.d
    if cfg.n == 2:
        pts = [Point2D(0.5 * d, 0.5 * SQRT3 * d), Point2D(-0.5 * d, 0.5 * SQRT3 * d)]
        return [(p, (d, d)) for p in pts]
    if cfg.n == 3:
        return [(Point2D(d, 0.0), (d, d, d))]
    raise ConfigError(f"worst-case points are defined for n in {{2, 3}}, got n={cfg.n}")
