"""Discrete brackets over a triangulated rectangle.

The stiffness matrix A carries the gradient bracket

    A[i, j] = integral of grad(phi_i) . grad(phi_j)

and the mass matrix M the square-sum bracket

    M[i, j] = integral of phi_i * phi_j

for the piecewise-linear nodal basis {phi_i}.  Both are assembled from
closed-form local matrices (P1 gradients are constant per triangle), so
the only quadrature in the package is the degree-2 edge-midpoint rule
used for load vectors.  Entries are accumulated in triangle-index order,
which makes repeated assemblies of the same mesh bit-identical.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.sparse import csr_matrix

from .mesh import Mesh

# Form sum below this multiple of the accumulated roundoff scale is
# treated as zero; anything more negative means broken assembly.
_FORM_CLAMP = 1e-12


class SparseSymMatrix:
    """Sparse symmetric matrix storing each unordered index pair once.

    Entries are kept in canonical order (row <= col, sorted row-major);
    ``apply`` reflects the stored triangle, so symmetry is exact by
    construction rather than by numerical accident.
    """

    def __init__(
        self,
        dimension: int,
        rows: np.ndarray,
        cols: np.ndarray,
        vals: np.ndarray,
    ):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if not (len(rows) == len(cols) == len(vals)):
            raise ValueError("rows, cols, vals must have equal length")
        if len(rows) and (rows.min() < 0 or cols.max() >= dimension):
            raise ValueError("entry index out of range")
        if np.any(rows > cols):
            raise ValueError("entries must satisfy row <= col")
        self.dimension = int(dimension)
        self.rows = rows
        self.cols = cols
        self.vals = vals
        self._csr: csr_matrix | None = None
        self._abs_csr: csr_matrix | None = None

    @classmethod
    def from_pairs(cls, dimension, pairs) -> "SparseSymMatrix":
        """Accumulate (i, j, value) contributions in the order given.

        Contributions to the same unordered pair are summed in encounter
        order; the summed entries are then stored sorted by (row, col).
        """
        acc: dict[tuple[int, int], float] = {}
        for i, j, v in pairs:
            key = (i, j) if i <= j else (j, i)
            acc[key] = acc.get(key, 0.0) + v
        keys = sorted(acc)
        rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        vals = np.fromiter((acc[k] for k in keys), dtype=np.float64, count=len(keys))
        return cls(dimension, rows, cols, vals)

    @classmethod
    def from_dense(cls, a) -> "SparseSymMatrix":
        """Store the upper triangle of a dense symmetric array."""
        a = np.asarray(a, dtype=float)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("matrix must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix must be symmetric")
        rows, cols = np.nonzero(np.triu(a))
        return cls(n, rows, cols, a[rows, cols])

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def _full(self) -> csr_matrix:
        if self._csr is None:
            off = self.rows != self.cols
            r = np.concatenate([self.rows, self.cols[off]])
            c = np.concatenate([self.cols, self.rows[off]])
            v = np.concatenate([self.vals, self.vals[off]])
            self._csr = csr_matrix(
                (v, (r, c)), shape=(self.dimension, self.dimension)
            )
        return self._csr

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Matrix-vector product, reflecting the stored triangle."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(
                f"vector length {x.shape} does not match dimension {self.dimension}"
            )
        return self._full() @ x

    def diagonal(self) -> np.ndarray:
        d = np.zeros(self.dimension)
        on = self.rows == self.cols
        d[self.rows[on]] = self.vals[on]
        return d

    def quad_form(self, x: np.ndarray) -> float:
        """x . (A x)."""
        return float(np.dot(x, self.apply(x)))

    def abs_quad_form(self, x: np.ndarray) -> float:
        """|x| . (|A| |x|): the roundoff scale of quad_form."""
        if self._abs_csr is None:
            full = self._full()
            self._abs_csr = csr_matrix(
                (np.abs(full.data), full.indices, full.indptr),
                shape=full.shape,
            )
        ax = np.abs(np.asarray(x, dtype=float))
        return float(np.dot(ax, self._abs_csr @ ax))

    def entry(self, i: int, j: int) -> float:
        """A[i, j] (zero if the pair is not stored)."""
        if i > j:
            i, j = j, i
        k = np.searchsorted(self.rows * self.dimension + self.cols,
                            i * self.dimension + j)
        if k < self.nnz and self.rows[k] == i and self.cols[k] == j:
            return float(self.vals[k])
        return 0.0

    def restrict(self, indices: np.ndarray) -> "SparseSymMatrix":
        """Principal submatrix on the given (sorted) global indices."""
        indices = np.asarray(indices, dtype=np.int64)
        pos_r = np.searchsorted(indices, self.rows)
        pos_c = np.searchsorted(indices, self.cols)
        pos_r_c = np.minimum(pos_r, len(indices) - 1) if len(indices) else pos_r
        pos_c_c = np.minimum(pos_c, len(indices) - 1) if len(indices) else pos_c
        keep = np.zeros(self.nnz, dtype=bool)
        if len(indices):
            keep = (indices[pos_r_c] == self.rows) & (indices[pos_c_c] == self.cols)
        return SparseSymMatrix(
            len(indices), pos_r_c[keep], pos_c_c[keep], self.vals[keep].copy()
        )

    def toarray(self) -> np.ndarray:
        return self._full().toarray()


def local_stiffness(coords: np.ndarray) -> np.ndarray:
    """Exact 3x3 gradient-bracket matrix of one triangle.

    For vertices P0, P1, P2 the barycentric gradients are constant, so
    K[i, j] = area * grad(lam_i) . grad(lam_j) in closed form.
    """
    p = np.asarray(coords, dtype=float)
    b = np.array([p[1, 1] - p[2, 1], p[2, 1] - p[0, 1], p[0, 1] - p[1, 1]])
    c = np.array([p[2, 0] - p[1, 0], p[0, 0] - p[2, 0], p[1, 0] - p[0, 0]])
    area2 = b[0] * c[1] - b[1] * c[0]  # = 2 * signed area
    if area2 <= 0:
        raise ValueError("triangle is degenerate or clockwise")
    return (np.outer(b, b) + np.outer(c, c)) / (2.0 * area2)


def local_mass(coords: np.ndarray) -> np.ndarray:
    """Exact 3x3 square-sum-bracket matrix of one triangle: (area/12) * (1 + I)."""
    p = np.asarray(coords, dtype=float)
    e1 = p[1] - p[0]
    e2 = p[2] - p[0]
    area = 0.5 * (e1[0] * e2[1] - e1[1] * e2[0])
    if area <= 0:
        raise ValueError("triangle is degenerate or clockwise")
    return (area / 12.0) * (np.ones((3, 3)) + np.eye(3))


def _triangle_geometry(mesh: Mesh):
    """Vectorized per-triangle quantities: vertex coords, b/c vectors, areas."""
    p = mesh.nodes[mesh.triangles]  # (T, 3, 2)
    b = np.stack(
        [p[:, 1, 1] - p[:, 2, 1], p[:, 2, 1] - p[:, 0, 1], p[:, 0, 1] - p[:, 1, 1]],
        axis=1,
    )
    c = np.stack(
        [p[:, 2, 0] - p[:, 1, 0], p[:, 0, 0] - p[:, 2, 0], p[:, 1, 0] - p[:, 0, 0]],
        axis=1,
    )
    area = 0.5 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    return p, b, c, area


def _accumulate(mesh: Mesh, local: np.ndarray) -> SparseSymMatrix:
    """Sum (T, 3, 3) local matrices into global storage, triangle order."""
    acc: dict[tuple[int, int], float] = {}
    tris = mesh.triangles
    for t in range(len(tris)):
        tri = tris[t]
        loc = local[t]
        for a in range(3):
            ia = int(tri[a])
            for bidx in range(a, 3):
                jb = int(tri[bidx])
                key = (ia, jb) if ia <= jb else (jb, ia)
                acc[key] = acc.get(key, 0.0) + float(loc[a, bidx])
    keys = sorted(acc)
    rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
    cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
    vals = np.fromiter((acc[k] for k in keys), dtype=np.float64, count=len(keys))
    return SparseSymMatrix(mesh.node_count, rows, cols, vals)


def assemble_stiffness(mesh: Mesh) -> SparseSymMatrix:
    """Gradient-bracket Gram matrix of the nodal basis."""
    _, b, c, area = _triangle_geometry(mesh)
    if np.any(area <= 0):
        raise ValueError("mesh has a degenerate or clockwise triangle")
    local = (
        b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]
    ) / (4.0 * area)[:, None, None]
    return _accumulate(mesh, local)


def assemble_mass(mesh: Mesh) -> SparseSymMatrix:
    """Square-sum-bracket Gram matrix of the nodal basis."""
    _, _, _, area = _triangle_geometry(mesh)
    if np.any(area <= 0):
        raise ValueError("mesh has a degenerate or clockwise triangle")
    pattern = (np.ones((3, 3)) + np.eye(3)) / 12.0
    local = area[:, None, None] * pattern[None, :, :]
    return _accumulate(mesh, local)


def assemble_load(
    mesh: Mesh, f: Callable[[float, float], float]
) -> np.ndarray:
    """Load vector: component i approximates the integral of f * phi_i.

    Uses the 3-point edge-midpoint rule per triangle (exact whenever
    f * phi_i is quadratic, in particular for piecewise-linear f on the
    same mesh).  Triangles are visited in index order.
    """
    p, _, _, area = _triangle_geometry(mesh)
    mids = 0.5 * (p + np.roll(p, -1, axis=1))  # midpoint m[k] of edge (k, k+1)
    out = np.zeros(mesh.node_count)
    tris = mesh.triangles
    for t in range(len(tris)):
        w = area[t] / 3.0
        fm = np.empty(3)
        for k in range(3):
            x, y = float(mids[t, k, 0]), float(mids[t, k, 1])
            v = f(x, y)
            if not np.isfinite(v):
                raise ValueError(
                    f"source function returned non-finite value {v!r} "
                    f"at quadrature point ({x}, {y})"
                )
            fm[k] = v
        # phi_a is 1/2 on the two edges touching vertex a, 0 opposite
        for a in range(3):
            out[tris[t, a]] += w * 0.5 * (fm[a] + fm[(a + 2) % 3])
    return out


def _form_sqrt(m: SparseSymMatrix, x: np.ndarray) -> float:
    q = m.quad_form(x)
    if q >= 0.0:
        return float(np.sqrt(q))
    scale = max(1.0, m.abs_quad_form(x))
    if q > -_FORM_CLAMP * scale:
        return 0.0
    raise ValueError(
        f"quadratic form {q} is negative beyond roundoff (scale {scale}); "
        "assembly is broken"
    )


def norm_grad(A: SparseSymMatrix, u: np.ndarray) -> float:
    """Gradient seminorm sqrt(u' A u); zero on constants."""
    return _form_sqrt(A, u)


def norm_l2(M: SparseSymMatrix, u: np.ndarray) -> float:
    """Square-sum norm sqrt(u' M u)."""
    return _form_sqrt(M, u)


def norm_w12(A: SparseSymMatrix, M: SparseSymMatrix, u: np.ndarray) -> float:
    """Full norm sqrt(u' A u + u' M u)."""
    qa = A.quad_form(u)
    qm = M.quad_form(u)
    q = qa + qm
    if q >= 0.0:
        return float(np.sqrt(q))
    scale = max(1.0, A.abs_quad_form(u) + M.abs_quad_form(u))
    if q > -_FORM_CLAMP * scale:
        return 0.0
    raise ValueError(
        f"quadratic form {q} is negative beyond roundoff; assembly is broken"
    )


def restrict_interior(mesh: Mesh, u: np.ndarray) -> np.ndarray:
    """Drop boundary components, keeping interior nodes in global order."""
    u = np.asarray(u, dtype=float)
    if len(u) != mesh.node_count:
        raise ValueError(
            f"field length {len(u)} does not match node count {mesh.node_count}"
        )
    return u[mesh.interior_indices].copy()


def extend_by_zero(mesh: Mesh, v: np.ndarray) -> np.ndarray:
    """Embed an interior vector as a field vanishing on every boundary node."""
    v = np.asarray(v, dtype=float)
    if len(v) != mesh.interior_count:
        raise ValueError(
            f"interior field length {len(v)} does not match "
            f"interior count {mesh.interior_count}"
        )
    out = np.zeros(mesh.node_count)
    out[mesh.interior_indices] = v
    return out
