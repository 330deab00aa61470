"""Structured triangulations of axis-aligned rectangles.

Nodes are numbered row-major starting at the lower-left corner (x runs
fastest).  Every grid cell is split along its lower-left to upper-right
diagonal, so the two triangles of cell (i, j) are

    (a, b, c) and (a, c, d)        c = upper-right, a = lower-left,

both counterclockwise, and every interior node is shared by exactly six
triangles.  Nodal-value vectors over this mesh ("fields") are plain
float64 arrays of length ``node_count``; vectors over interior nodes
only use the ordering of ``interior_indices``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Mesh:
    """Uniform triangulation of a rectangle.

    Attributes:
        nodes: (node_count, 2) coordinates.
        triangles: (triangle_count, 3) node indices, counterclockwise.
        boundary_mask: per-node flag, True on the rectangle border.
        interior_indices: global indices of interior nodes, increasing.
        domain: (x0, y0, x1, y1) rectangle bounds.
        nx, ny: cell counts per axis.
    """

    nodes: np.ndarray
    triangles: np.ndarray
    boundary_mask: np.ndarray
    interior_indices: np.ndarray
    domain: tuple[float, float, float, float]
    nx: int
    ny: int

    @property
    def node_count(self) -> int:
        return self.nodes.shape[0]

    @property
    def triangle_count(self) -> int:
        return self.triangles.shape[0]

    @property
    def interior_count(self) -> int:
        return self.interior_indices.shape[0]

    @property
    def boundary_indices(self) -> np.ndarray:
        """Global indices of boundary nodes, increasing."""
        return np.nonzero(self.boundary_mask)[0]


def build_rect_mesh(
    x0: float, y0: float, x1: float, y1: float, nx: int, ny: int
) -> Mesh:
    """Triangulate [x0, x1] x [y0, y1] on an nx-by-ny cell grid.

    Requires nx >= 2 and ny >= 2 so the triangulation has at least one
    interior node; a coarser grid has no interior degrees of freedom and
    cannot carry a boundary-value problem.
    """
    if not (x1 > x0 and y1 > y0):
        raise ValueError(
            f"degenerate rectangle: need x1 > x0 and y1 > y0, "
            f"got ({x0}, {y0}, {x1}, {y1})"
        )
    if nx < 2 or ny < 2:
        raise ValueError(
            f"grid {nx}x{ny} leaves no interior degrees of freedom; "
            "need nx >= 2 and ny >= 2"
        )

    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    nodes = np.column_stack([gx.ravel(), gy.ravel()])

    # Two triangles per cell, cells visited row-major, split along the
    # lower-left -> upper-right diagonal.
    triangles = np.empty((2 * nx * ny, 3), dtype=np.int64)
    t = 0
    for j in range(ny):
        for i in range(nx):
            a = j * (nx + 1) + i
            b = a + 1
            c = a + nx + 2
            d = a + nx + 1
            triangles[t] = (a, b, c)
            triangles[t + 1] = (a, c, d)
            t += 2

    ii, jj = np.meshgrid(np.arange(nx + 1), np.arange(ny + 1), indexing="xy")
    on_border = (ii == 0) | (ii == nx) | (jj == 0) | (jj == ny)
    boundary_mask = on_border.ravel()
    interior_indices = np.nonzero(~boundary_mask)[0]

    return Mesh(
        nodes=nodes,
        triangles=triangles,
        boundary_mask=boundary_mask,
        interior_indices=interior_indices,
        domain=(float(x0), float(y0), float(x1), float(y1)),
        nx=nx,
        ny=ny,
    )


def node_coordinates(mesh: Mesh, i: int) -> tuple[float, float]:
    """Coordinates of node i."""
    if not 0 <= i < mesh.node_count:
        raise IndexError(f"node index {i} out of range [0, {mesh.node_count})")
    x, y = mesh.nodes[i]
    return float(x), float(y)


def signed_areas(mesh: Mesh) -> np.ndarray:
    """Signed area of every triangle (positive for counterclockwise)."""
    p = mesh.nodes[mesh.triangles]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def nodal_values(mesh: Mesh, f: Callable[[float, float], float]) -> np.ndarray:
    """Sample f at every node: the coefficient vector of its interpolant."""
    out = np.empty(mesh.node_count)
    for k in range(mesh.node_count):
        out[k] = f(float(mesh.nodes[k, 0]), float(mesh.nodes[k, 1]))
    return out


def eval_p1(mesh: Mesh, values: np.ndarray, x: float, y: float) -> float:
    """Evaluate the piecewise-linear interpolant of nodal values at (x, y).

    Points are clamped to the closed rectangle, so evaluation a roundoff
    outside the domain is safe.  Values on cell edges are continuous, so
    the cell choice there does not matter.
    """
    if len(values) != mesh.node_count:
        raise ValueError(
            f"field length {len(values)} does not match node count {mesh.node_count}"
        )
    x0, y0, x1, y1 = mesh.domain
    u = (x - x0) / (x1 - x0) * mesh.nx
    v = (y - y0) / (y1 - y0) * mesh.ny
    i = min(max(int(np.floor(u)), 0), mesh.nx - 1)
    j = min(max(int(np.floor(v)), 0), mesh.ny - 1)
    xi = min(max(u - i, 0.0), 1.0)
    eta = min(max(v - j, 0.0), 1.0)

    a = j * (mesh.nx + 1) + i
    b = a + 1
    c = a + mesh.nx + 2
    d = a + mesh.nx + 1
    if xi >= eta:
        # lower triangle (a, b, c)
        return float(
            values[a] * (1.0 - xi) + values[b] * (xi - eta) + values[c] * eta
        )
    # upper triangle (a, c, d)
    return float(
        values[a] * (1.0 - eta) + values[c] * xi + values[d] * (eta - xi)
    )


def p1_interpolant(
    mesh: Mesh, values: np.ndarray
) -> Callable[[float, float], float]:
    """Wrap nodal values as a callable piecewise-linear function of (x, y)."""
    frozen = np.asarray(values, dtype=float).copy()
    if len(frozen) != mesh.node_count:
        raise ValueError(
            f"field length {len(frozen)} does not match node count {mesh.node_count}"
        )

    def fn(x: float, y: float) -> float:
        return eval_p1(mesh, frozen, x, y)

    return fn
