"""Background mesh, level sets, element classification and cut geometry.

The background mesh is a structured grid of n x n squares on an axis-aligned
box, each split along the same diagonal into two counterclockwise triangles.
A level set φ (φ > 0 in the flow domain Ω, φ < 0 inside the void) is sampled
at the vertices, snapped away from zero, and sampled along every face to tag
elements and faces. Ω_i = Ω ∩ K_i of a cut element is covered by height
cells: strips in which each line of one coordinate direction meets the
exact interface at most once.
"""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable

import numpy as np
from scipy import optimize

from .approximation import uniform_triangle_nodes
from .errors import DegenerateCut, RootFindFailure

SNAP_FACTOR = 1e-10
ROOT_TOLERANCE = 1e-14
INTERFACE_TOLERANCE = 1e-12
PIECE_TOLERANCE = 1e-9  # in face parameter units
FACE_SAMPLES = 15
GRADIENT_STEP = 1e-7
HEIGHT_QUALITY = 0.4
MAX_SUBDIVISION = 6
LATTICE_RESOLUTION = 6

LevelSetFunction = Callable[[np.ndarray], np.ndarray]


# ============================================================================
# Background mesh
# ============================================================================

@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle (x_min, x_max) x (y_min, y_max)."""
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0

    @classmethod
    def from_sequence(cls, values) -> "Box":
        x_min, x_max, y_min, y_max = (float(v) for v in values)
        return cls(x_min, x_max, y_min, y_max)

    def as_list(self) -> list[float]:
        return [self.x_min, self.x_max, self.y_min, self.y_max]


@dataclass(frozen=True, eq=False)
class BackgroundMesh:
    """Structured triangulation of a box.

    Faces are stored as vertex pairs ordered counterclockwise with respect to
    their left element L(f); ``face_elements[f] = (L, R)`` with R = -1 on
    the exterior boundary. ``element_faces[e, j]`` is the face of local edge
    j, which runs from vertex j to vertex (j + 1) % 3 of element e.
    """
    n: int
    box: Box
    vertices: np.ndarray
    elements: np.ndarray
    faces: np.ndarray
    face_elements: np.ndarray
    element_faces: np.ndarray

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def h(self) -> float:
        """Element diameter (cell diagonal)."""
        dx = (self.box.x_max - self.box.x_min) / self.n
        dy = (self.box.y_max - self.box.y_min) / self.n
        return float(np.hypot(dx, dy))

    def element_vertices(self, element: int) -> np.ndarray:
        return self.vertices[self.elements[element]]

    def face_points(self, face: int) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.faces[face]
        return self.vertices[a], self.vertices[b]

    def face_normal(self, face: int) -> np.ndarray:
        """Unit normal outward with respect to L(f)."""
        a, b = self.face_points(face)
        tangent = b - a
        return np.array([tangent[1], -tangent[0]]) / np.linalg.norm(tangent)

    def face_length(self, face: int) -> float:
        a, b = self.face_points(face)
        return float(np.linalg.norm(b - a))

    def is_boundary_face(self, face: int) -> bool:
        return self.face_elements[face, 1] < 0

    def local_face_index(self, element: int, face: int) -> int:
        return int(np.flatnonzero(self.element_faces[element] == face)[0])

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Element containing each point; -1 outside the box."""
        points = np.atleast_2d(points)
        dx = (self.box.x_max - self.box.x_min) / self.n
        dy = (self.box.y_max - self.box.y_min) / self.n
        fx = (points[:, 0] - self.box.x_min) / dx
        fy = (points[:, 1] - self.box.y_min) / dy
        i = np.clip(np.floor(fx).astype(int), 0, self.n - 1)
        j = np.clip(np.floor(fy).astype(int), 0, self.n - 1)
        # lower triangle (v00, v10, v11) where the local x offset dominates
        upper = (fy - j) > (fx - i)
        elements = 2 * (j * self.n + i) + upper.astype(int)
        outside = (fx < 0) | (fx > self.n) | (fy < 0) | (fy > self.n)
        return np.where(outside, -1, elements)


def build_mesh(n: int, box: Box | None = None) -> BackgroundMesh:
    """Build the n x n split-square background mesh (2n² triangles)."""
    if n < 1:
        raise ValueError(f"cells per side must be >= 1, got {n}")
    box = box or Box()
    xs = np.linspace(box.x_min, box.x_max, n + 1)
    ys = np.linspace(box.y_min, box.y_max, n + 1)
    gx, gy = np.meshgrid(xs, ys)
    vertices = np.column_stack((gx.ravel(), gy.ravel()))

    elements = []
    for j in range(n):
        for i in range(n):
            v00 = j * (n + 1) + i
            v10, v01, v11 = v00 + 1, v00 + n + 1, v00 + n + 2
            elements.append((v00, v10, v11))
            elements.append((v00, v11, v01))
    elements = np.array(elements, dtype=int)

    edge_ids: dict[tuple[int, int], int] = {}
    faces, face_elements = [], []
    element_faces = np.empty((len(elements), 3), dtype=int)
    for e, tri in enumerate(elements):
        for j in range(3):
            a, b = int(tri[j]), int(tri[(j + 1) % 3])
            key = (min(a, b), max(a, b))
            if key in edge_ids:
                f = edge_ids[key]
                face_elements[f][1] = e
            else:
                f = len(faces)
                edge_ids[key] = f
                faces.append((a, b))
                face_elements.append([e, -1])
            element_faces[e, j] = f

    return BackgroundMesh(
        n=n,
        box=box,
        vertices=vertices,
        elements=elements,
        faces=np.array(faces, dtype=int),
        face_elements=np.array(face_elements, dtype=int),
        element_faces=element_faces,
    )


# ============================================================================
# Level sets
# ============================================================================

@dataclass(frozen=True, eq=False)
class LevelSet:
    """Signed scalar field: φ > 0 in Ω, φ < 0 in the void, φ = 0 on I.

    ``gradient_evaluator`` is optional; without it gradients come from
    central differences.
    """
    kind: str
    params: dict = field(default_factory=dict)
    evaluator: LevelSetFunction | None = None
    gradient_evaluator: LevelSetFunction | None = None

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.asarray(self.evaluator(points), dtype=float)

    def gradient(self, points: np.ndarray) -> np.ndarray:
        """∇φ at ``points``, shape (n_points, 2)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.gradient_evaluator is not None:
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.asarray(self.gradient_evaluator(points), dtype=float)
        step = GRADIENT_STEP * max(1.0, float(np.max(np.abs(points))))
        columns = []
        for axis in range(2):
            offset = np.zeros(2)
            offset[axis] = step
            columns.append((self(points + offset) - self(points - offset)) / (2.0 * step))
        return np.column_stack(columns)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}


# Registry of level-set presets
_level_sets: dict[str, Callable[..., LevelSet]] = {}


def register_level_set(name: str):
    """Decorator to register a level-set factory under ``name``."""
    def decorator(factory: Callable[..., LevelSet]) -> Callable[..., LevelSet]:
        _level_sets[name] = factory
        return factory
    return decorator


def get_level_set(name: str, **params) -> LevelSet:
    factory = _level_sets.get(name.lower())
    if factory is None:
        available = ", ".join(list_level_sets())
        raise KeyError(f"unknown level set '{name}' (available: {available})")
    return factory(**params)


def list_level_sets() -> list[str]:
    return list(_level_sets.keys())


@register_level_set("circle")
def circle(center=(0.5, 0.5), radius: float = 0.42) -> LevelSet:
    """Circular void: φ = |x − center| − radius."""
    c = np.asarray(center, dtype=float)
    r = float(radius)

    def evaluate(points):
        return np.hypot(points[:, 0] - c[0], points[:, 1] - c[1]) - r

    def gradient(points):
        offset = points - c
        return offset / np.hypot(offset[:, 0], offset[:, 1])[:, None]

    return LevelSet(
        "circle", {"center": [float(c[0]), float(c[1])], "radius": r}, evaluate, gradient
    )


@register_level_set("peanut")
def peanut(r0: float = 0.37, r1: float = 0.17) -> LevelSet:
    """Peanut void: φ = sqrt(x² + y²) − r0 − r1 cos(2 atan2(x, y))."""
    def evaluate(points):
        x, y = points[:, 0], points[:, 1]
        return np.hypot(x, y) - r0 - r1 * np.cos(2.0 * np.arctan2(x, y))

    def gradient(points):
        x, y = points[:, 0], points[:, 1]
        rho = np.hypot(x, y)
        swirl = 2.0 * r1 * np.sin(2.0 * np.arctan2(x, y)) / rho**2
        return np.column_stack((x / rho + swirl * y, y / rho - swirl * x))

    return LevelSet("peanut", {"r0": float(r0), "r1": float(r1)}, evaluate, gradient)


@register_level_set("none")
def no_void() -> LevelSet:
    """No interface: the whole box is active."""
    return LevelSet(
        "none",
        {},
        lambda points: np.ones(len(points)),
        lambda points: np.zeros((len(points), 2)),
    )


@register_level_set("half_plane")
def half_plane(point=(0.5, 0.5), normal=(1.0, 0.0)) -> LevelSet:
    """Straight interface: φ = (x − point)·normal, void on the negative side."""
    x0 = np.asarray(point, dtype=float)
    m = np.asarray(normal, dtype=float)
    m = m / np.linalg.norm(m)

    def evaluate(points):
        return (points - x0) @ m

    return LevelSet(
        "half_plane",
        {"point": [float(x0[0]), float(x0[1])], "normal": [float(m[0]), float(m[1])]},
        evaluate,
        lambda points: np.tile(m, (len(points), 1)),
    )


def snap(values: np.ndarray, h: float) -> np.ndarray:
    """Push near-zero vertex values to +SNAP_FACTOR·h (into Ω)."""
    values = np.array(values, dtype=float)
    values[np.abs(values) < SNAP_FACTOR * h] = SNAP_FACTOR * h
    return values


# ============================================================================
# Classification
# ============================================================================

class ElementKind(IntEnum):
    STANDARD = 0
    VOID = 1
    CUT = 2


class FaceKind(IntEnum):
    ACTIVE = 0
    INACTIVE = 1
    CUT = 2


@dataclass(frozen=True, eq=False)
class ElementClass:
    """Element/face tags plus the active parameter intervals of every face.

    ``face_segments[f]`` lists the active sub-intervals of face f as a
    (k, 2) array of face parameters; ``face_intervals[f]`` is their hull
    (NaN for inactive faces).
    """
    element_kind: np.ndarray
    face_kind: np.ndarray
    vertex_values: np.ndarray
    face_intervals: np.ndarray
    face_segments: tuple[np.ndarray, ...]

    def elements_of(self, kind: ElementKind) -> np.ndarray:
        return np.flatnonzero(self.element_kind == kind)

    @property
    def active_elements(self) -> np.ndarray:
        return np.flatnonzero(self.element_kind != ElementKind.VOID)

    @property
    def active_faces(self) -> np.ndarray:
        return self.face_kind != FaceKind.INACTIVE

    def counts(self) -> dict[str, int]:
        return {kind.name.lower(): int(np.sum(self.element_kind == kind)) for kind in ElementKind}


def _sign_changes(
    ls: LevelSet, a: np.ndarray, b: np.ndarray, grid: np.ndarray, chain: np.ndarray
) -> list[tuple[float, bool]]:
    """Roots of φ on the segment a→b between samples of opposite sign.

    ``chain`` holds φ at the parameters ``grid``; sampled values are reused
    so the bracket signs always match the chain. Each root comes with the
    sign of φ just after it (True when positive).
    """
    known = dict(zip(grid.tolist(), chain.tolist()))

    def along(s: float) -> float:
        value = known.get(s)
        return value if value is not None else float(ls(a + s * (b - a))[0])

    positive = chain > 0.0
    roots = []
    for k in np.flatnonzero(positive[1:] != positive[:-1]):
        try:
            root = optimize.brentq(along, grid[k], grid[k + 1], xtol=ROOT_TOLERANCE)
        except (ValueError, RuntimeError) as e:
            raise RootFindFailure(f"cannot bracket the interface on segment {a} -> {b}: {e}") from e
        roots.append((float(root), bool(positive[k + 1])))
    return roots


def _clean_segments(segments: list[list[float]]) -> np.ndarray:
    """Drop active pieces and void gaps shorter than PIECE_TOLERANCE."""
    kept = [s for s in segments if s[1] - s[0] > PIECE_TOLERANCE]
    merged: list[list[float]] = []
    for s0, s1 in kept:
        if merged and s0 - merged[-1][1] < PIECE_TOLERANCE:
            merged[-1][1] = s1
        else:
            merged.append([s0, s1])
    if merged:
        if merged[0][0] < PIECE_TOLERANCE:
            merged[0][0] = 0.0
        if merged[-1][1] > 1.0 - PIECE_TOLERANCE:
            merged[-1][1] = 1.0
    return np.array(merged, dtype=float).reshape(-1, 2)


def classify(mesh: BackgroundMesh, ls: LevelSet) -> ElementClass:
    """Tag faces Active/Inactive/Cut, then elements Standard/Void/Cut.

    Each face is sampled at its snapped end values and FACE_SAMPLES interior
    points; every sign change is resolved by a root search, so a face may
    carry several active sub-intervals. A snapped vertex counts as active,
    and the measure-zero piece it leaves next to an opposite-sign sample is
    dropped. An element is Standard when all its faces are fully active,
    Void when none is active, and Cut otherwise.

    Raises:
        RootFindFailure: if a face root cannot be bracketed.
    """
    values = snap(ls(mesh.vertices), mesh.h)

    s_samples = np.arange(1, FACE_SAMPLES + 1) / (FACE_SAMPLES + 1)
    a = mesh.vertices[mesh.faces[:, 0]]
    b = mesh.vertices[mesh.faces[:, 1]]
    sample_points = a[:, None, :] + s_samples[None, :, None] * (b - a)[:, None, :]
    sample_values = ls(sample_points.reshape(-1, 2)).reshape(mesh.n_faces, FACE_SAMPLES)

    face_kind = np.empty(mesh.n_faces, dtype=np.int8)
    face_intervals = np.full((mesh.n_faces, 2), np.nan)
    face_segments = []
    grid = np.concatenate(([0.0], s_samples, [1.0]))
    for f in range(mesh.n_faces):
        va, vb = mesh.faces[f]
        chain = np.concatenate(([values[va]], sample_values[f], [values[vb]]))
        breaks, inside = [0.0], [bool(chain[0] > 0.0)]
        for root, positive in _sign_changes(ls, a[f], b[f], grid, chain):
            breaks.append(root)
            inside.append(positive)
        breaks.append(1.0)
        segments = _clean_segments(
            [[breaks[i], breaks[i + 1]] for i in range(len(inside)) if inside[i]]
        )
        face_segments.append(segments)
        if len(segments) == 0:
            face_kind[f] = FaceKind.INACTIVE
            continue
        face_intervals[f] = (segments[0, 0], segments[-1, 1])
        full = len(segments) == 1 and segments[0, 0] == 0.0 and segments[0, 1] == 1.0
        face_kind[f] = FaceKind.ACTIVE if full else FaceKind.CUT

    element_faces = face_kind[mesh.element_faces]
    element_kind = np.full(mesh.n_elements, ElementKind.CUT, dtype=np.int8)
    element_kind[np.all(element_faces == FaceKind.ACTIVE, axis=1)] = ElementKind.STANDARD
    element_kind[np.all(element_faces == FaceKind.INACTIVE, axis=1)] = ElementKind.VOID

    return ElementClass(
        element_kind=element_kind,
        face_kind=face_kind,
        vertex_values=values,
        face_intervals=face_intervals,
        face_segments=tuple(face_segments),
    )


# ============================================================================
# Cut geometry
# ============================================================================

@dataclass(frozen=True, eq=False)
class HeightCell:
    """Strip of a triangle between two values of the base coordinate.

    Inside the strip every line of constant base coordinate crosses I at
    most once, so Ω is the part of the line on one side of a single root.
    ``axis`` is the height direction (0 = x, 1 = y).
    """
    triangle: np.ndarray
    axis: int
    base: tuple[float, float]

    def points(self, b: np.ndarray, h: np.ndarray) -> np.ndarray:
        out = np.empty((len(b), 2))
        out[:, 1 - self.axis] = b
        out[:, self.axis] = h
        return out

    def line_range(self, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Height interval [lo, hi] of the triangle on each line base = b."""
        tb = self.triangle[:, 1 - self.axis]
        th = self.triangle[:, self.axis]
        lo = np.full(len(b), np.inf)
        hi = np.full(len(b), -np.inf)
        for j in range(3):
            k = (j + 1) % 3
            if tb[j] == tb[k]:
                continue
            t = (b - tb[j]) / (tb[k] - tb[j])
            hit = (t >= -INTERFACE_TOLERANCE) & (t <= 1.0 + INTERFACE_TOLERANCE)
            h = th[j] + np.clip(t, 0.0, 1.0) * (th[k] - th[j])
            lo = np.where(hit, np.minimum(lo, h), lo)
            hi = np.where(hit, np.maximum(hi, h), hi)
        return lo, hi

    def active_span(self, ls: LevelSet, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Active part [start, end] of each line and its root (NaN if uncut).

        Lines entirely in the void get start == end.
        """
        lo, hi = self.line_range(b)
        inside_lo = ls(self.points(b, lo)) > 0.0
        inside_hi = ls(self.points(b, hi)) > 0.0
        root = np.full(len(b), np.nan)
        for q in np.flatnonzero(inside_lo != inside_hi):
            def along(h: float, q=q) -> float:
                return float(ls(self.points(b[q:q + 1], np.array([h])))[0])

            try:
                root[q] = optimize.brentq(along, lo[q], hi[q], xtol=ROOT_TOLERANCE)
            except (ValueError, RuntimeError) as e:
                raise RootFindFailure(f"no interface root on the line at {b[q]}: {e}") from e
        start = np.where(inside_lo | ~inside_hi, lo, root)
        end = np.where(inside_hi, hi, np.where(inside_lo, root, lo))
        return start, end, root


@dataclass(frozen=True, eq=False)
class CutElementGeometry:
    """Geometry of Ω_i and I_i for one cut element.

    Ω_i is covered by height cells plus sub-triangles lying wholly in Ω.
    ``interface_points`` sample I_i (``order + 1`` per cell crossing it,
    plus the edge roots), ordered along the principal direction of I_i;
    the same direction parametrizes interface traces over [0, 1].
    """
    element: int
    order: int
    level_set: LevelSet
    cells: tuple[HeightCell, ...]
    full_triangles: tuple[np.ndarray, ...]
    partial_faces: dict[int, np.ndarray]
    interface_points: np.ndarray
    interface_origin: np.ndarray
    interface_axis: np.ndarray
    interface_span: tuple[float, float]

    def interface_params(self, points: np.ndarray) -> np.ndarray:
        """Interface parameter of points on I_i; the samples span [0, 1]."""
        t0, t1 = self.interface_span
        return ((points - self.interface_origin) @ self.interface_axis - t0) / (t1 - t0)


def _triangle_lattice(triangle: np.ndarray) -> np.ndarray:
    ref = uniform_triangle_nodes(LATTICE_RESOLUTION)
    jacobian = np.column_stack((triangle[1] - triangle[0], triangle[2] - triangle[0]))
    return triangle[0] + ref @ jacobian.T


def _edge_roots(ls: LevelSet, triangle: np.ndarray) -> list[np.ndarray]:
    """Points where φ changes sign on the edges of ``triangle``."""
    grid = np.linspace(0.0, 1.0, FACE_SAMPLES + 2)
    roots = []
    for j in range(3):
        a, b = triangle[j], triangle[(j + 1) % 3]
        chain = ls(a + grid[:, None] * (b - a))
        roots.extend(a + s * (b - a) for s, _ in _sign_changes(ls, a, b, grid, chain))
    return roots


def _height_axis(ls: LevelSet, points: np.ndarray) -> int | None:
    """Axis along which φ is strictly monotone over ``points``, if any.

    Monotonicity is required with margin: |∂φ/∂axis| ≥ HEIGHT_QUALITY·|∇φ|
    at every sample. The y axis wins ties.
    """
    gradient = ls.gradient(points)
    norm = np.hypot(gradient[:, 0], gradient[:, 1])
    usable = np.isfinite(norm) & (norm > INTERFACE_TOLERANCE)
    if not np.any(usable):
        return None
    ratio = gradient[usable] / norm[usable, None]
    best, quality = None, HEIGHT_QUALITY
    for axis in (1, 0):
        r = ratio[:, axis]
        if np.all(r > 0.0) or np.all(r < 0.0):
            q = float(np.min(np.abs(r)))
            if q >= quality and (best is None or q > quality):
                best, quality = axis, q
    return best


def _split_cells(triangle: np.ndarray, axis: int, roots: list[np.ndarray]) -> list[HeightCell]:
    """Cut the base range at the vertices and edge roots of ``triangle``."""
    base = 1 - axis
    stops = np.sort(np.concatenate((triangle[:, base], [r[base] for r in roots])))
    extent = stops[-1] - stops[0]
    distinct = [stops[0]]
    for value in stops[1:]:
        if value - distinct[-1] > INTERFACE_TOLERANCE * extent:
            distinct.append(value)
    return [
        HeightCell(triangle, axis, (float(b0), float(b1)))
        for b0, b1 in zip(distinct[:-1], distinct[1:])
    ]


def _decompose(ls: LevelSet, triangle: np.ndarray, depth: int, element: int, cells, full, roots) -> None:
    """Cover Ω ∩ triangle by height cells, subdividing where no axis fits."""
    lattice = _triangle_lattice(triangle)
    edge_roots = _edge_roots(ls, triangle)
    if depth > 0 and not edge_roots:
        phi = ls(lattice)
        if np.all(phi > 0.0):
            full.append(triangle)
            return
        if np.all(phi <= 0.0):
            return
    samples = np.vstack([lattice] + [r[None, :] for r in edge_roots])
    axis = _height_axis(ls, samples)
    if axis is not None:
        cells.extend(_split_cells(triangle, axis, edge_roots))
        roots.extend(edge_roots)
        return
    if depth >= MAX_SUBDIVISION:
        raise DegenerateCut("no monotone direction for the interface after subdivision", element)
    m01 = 0.5 * (triangle[0] + triangle[1])
    m12 = 0.5 * (triangle[1] + triangle[2])
    m20 = 0.5 * (triangle[2] + triangle[0])
    for child in (
        np.array([triangle[0], m01, m20]),
        np.array([m01, triangle[1], m12]),
        np.array([m20, m12, triangle[2]]),
        np.array([m12, m20, m01]),
    ):
        _decompose(ls, child, depth + 1, element, cells, full, roots)


def _interface_samples(ls: LevelSet, cells: list[HeightCell], order: int) -> list[np.ndarray]:
    fractions = (np.arange(order + 1) + 0.5) / (order + 1)
    samples = []
    for cell in cells:
        b0, b1 = cell.base
        b = b0 + (b1 - b0) * fractions
        _, _, root = cell.active_span(ls, b)
        crossing = np.isfinite(root)
        samples.extend(cell.points(b[crossing], root[crossing]))
    return samples


def extract_cut_geometry(
    mesh: BackgroundMesh,
    ls: LevelSet,
    element: int,
    order: int,
    classification: ElementClass,
) -> CutElementGeometry:
    """Height cells, partial faces and interface samples of a cut element.

    The element is split into strips along a direction in which φ is
    monotone. Where no direction works on the whole triangle it is split
    into four children, recursively, down to MAX_SUBDIVISION levels;
    children wholly inside Ω or the void are kept whole or dropped.

    Args:
        mesh: Background mesh.
        ls: Level set defining the interface.
        element: Element tagged Cut.
        order: Interface samples per height cell, minus one.
        classification: Result of :func:`classify` on the same level set.

    Raises:
        DegenerateCut: if no monotone direction is found after subdivision,
            or I_i has no extent inside the element.
    """
    partial_faces = {}
    for j in range(3):
        segments = classification.face_segments[int(mesh.element_faces[element, j])]
        if len(segments):
            partial_faces[j] = segments

    cells: list[HeightCell] = []
    full: list[np.ndarray] = []
    roots: list[np.ndarray] = []
    _decompose(ls, mesh.element_vertices(element), 0, element, cells, full, roots)

    samples = roots + _interface_samples(ls, cells, order)
    if len(samples) < 2:
        raise DegenerateCut("the interface has no extent inside the element", element)
    points = np.array(samples)
    origin = points.mean(axis=0)
    _, _, vt = np.linalg.svd(points - origin)
    axis = vt[0]
    t = (points - origin) @ axis
    if t.max() - t.min() <= INTERFACE_TOLERANCE * mesh.h:
        raise DegenerateCut("the interface has no extent inside the element", element)

    return CutElementGeometry(
        element=element,
        order=order,
        level_set=ls,
        cells=tuple(cells),
        full_triangles=tuple(full),
        partial_faces=partial_faces,
        interface_points=points[np.argsort(t)],
        interface_origin=origin,
        interface_axis=axis,
        interface_span=(float(t.min()), float(t.max())),
    )
