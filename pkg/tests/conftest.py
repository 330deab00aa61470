"""Shared meshes and assembled matrices, built once per session."""

import numpy as np
import pytest

from dirichlet_fem import assemble_mass, assemble_stiffness, build_rect_mesh


def make_triplet(x0, y0, x1, y1, nx, ny):
    mesh = build_rect_mesh(x0, y0, x1, y1, nx, ny)
    return mesh, assemble_stiffness(mesh), assemble_mass(mesh)


@pytest.fixture(scope="session")
def unit4():
    return make_triplet(0.0, 0.0, 1.0, 1.0, 4, 4)


@pytest.fixture(scope="session")
def unit8():
    return make_triplet(0.0, 0.0, 1.0, 1.0, 8, 8)


@pytest.fixture(scope="session")
def unit16():
    return make_triplet(0.0, 0.0, 1.0, 1.0, 16, 16)


@pytest.fixture(scope="session")
def skewed6x5():
    # non-square cells, offset corner: catches axis mixups
    return make_triplet(-1.0, 2.0, 3.0, 4.5, 6, 5)


def random_field(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n)
