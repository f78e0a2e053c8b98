"""Diagonal-correlation (c-space) picture of two-qubit states.

States w_c = ¼(1 + Σ c_i σ^i⊗σ^i) are positive inside the tetrahedron spanned by
the Bell vertices. Partial transposition reflects it into a mirror tetrahedron;
the intersection of both is the octahedron Σ|c_i| ≤ 1 of separable w_c.
"""
import itertools
import logging
from typing import Optional, Sequence, Union

import numpy as np

from config.solver_config import GeometryDefaults
from src.constants import ToleranceConstants
from src.domain.entities import CRegionSample, DensityMatrix, Mesh, Region
from src.domain.value_objects import CVec, HermitianOp
from src.hs_pipeline.distance_solver import DistanceSolver
from src.hs_pipeline.pauli_space import local_normal_form, to_pauli
from src.hs_pipeline.states import (
    BELL_VERTICES,
    is_ppt,
    partial_transpose_B,
    w_c_operator,
    w_c_state,
)
from src.infrastructure.errors import UnknownRegionError, ValidationError

logger = logging.getLogger(__name__)

MIRROR_VERTICES = -BELL_VERTICES

OCTAHEDRON_VERTICES = np.array(
    [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ]
)

CVecLike = Union[CVec, Sequence[float], np.ndarray]


def _as_c(c: CVecLike) -> np.ndarray:
    return (c if isinstance(c, CVec) else CVec(np.asarray(c, dtype=float))).c


def _inside(vertices: np.ndarray, c: np.ndarray) -> bool:
    # Both tetrahedra are {c : 1 + v_k·c ≥ 0 for all vertices v_k}
    return bool(np.all(1.0 + vertices @ c >= -ToleranceConstants.C_SPACE_BOUNDARY))


def classify_c(c: CVecLike) -> CRegionSample:
    """Tetrahedron, mirror and separability membership of a c-space point.

    Separability is Σ|c_i| ≤ 1; inside the tetrahedron it is cross-checked
    against the PPT test of w_c.
    """
    point = _as_c(c)
    in_tetrahedron = _inside(BELL_VERTICES, point)
    in_mirror = _inside(MIRROR_VERTICES, point)
    separable = float(np.abs(point).sum()) <= 1.0 + ToleranceConstants.C_SPACE_BOUNDARY

    if in_tetrahedron:
        ppt = is_ppt(w_c_state(point))
        if ppt != separable:
            logger.warning(
                "PPT test disagrees with the octahedron at c=%s (ppt=%s)",
                tuple(point),
                ppt,
            )

    return CRegionSample(
        c=tuple(float(v) for v in point),
        in_tetrahedron=in_tetrahedron,
        in_mirror=in_mirror,
        separable=separable,
    )


def sample_regions(resolution: int = GeometryDefaults.SAMPLE_RESOLUTION) -> list[CRegionSample]:
    """Classify a regular resolution³ grid over [−1, 1]³ in lexicographic order."""
    if resolution < GeometryDefaults.MIN_RESOLUTION:
        raise ValidationError(
            f"Grid resolution must be at least {GeometryDefaults.MIN_RESOLUTION}"
        )
    axis = np.linspace(-1.0, 1.0, resolution)
    samples = [classify_c(np.array(point)) for point in itertools.product(axis, repeat=3)]
    logger.info(
        "classified %d grid points, %d separable",
        len(samples),
        sum(s.separable for s in samples),
    )
    return samples


def attach_distances(
    samples: Sequence[CRegionSample],
    solver: Optional[DistanceSolver] = None,
    limit: int = GeometryDefaults.DISTANCE_SPOT_CHECKS,
) -> list[CRegionSample]:
    """Fill in D(w_c) for up to ``limit`` evenly spread samples inside the tetrahedron."""
    solver = solver or DistanceSolver()
    states = [k for k, s in enumerate(samples) if s.in_tetrahedron]
    if not states or limit <= 0:
        return list(samples)
    picks = set(np.linspace(0, len(states) - 1, min(limit, len(states))).astype(int).tolist())

    result = list(samples)
    for rank in sorted(picks):
        k = states[rank]
        sample = samples[k]
        report = solver.distance(w_c_state(sample.c))
        result[k] = CRegionSample(
            c=sample.c,
            in_tetrahedron=sample.in_tetrahedron,
            in_mirror=sample.in_mirror,
            separable=sample.separable,
            distance=report.distance,
        )
    return result


def _oriented_faces(vertices: np.ndarray, faces: Sequence[tuple[int, int, int]]) -> tuple:
    """Order each triangle counter-clockwise seen from outside."""
    center = vertices.mean(axis=0)
    oriented = []
    for i, j, k in faces:
        normal = np.cross(vertices[j] - vertices[i], vertices[k] - vertices[i])
        if normal @ (vertices[[i, j, k]].mean(axis=0) - center) < 0:
            j, k = k, j
        oriented.append((int(i), int(j), int(k)))
    return tuple(oriented)


def _tetra_mesh(region: Region, vertices: np.ndarray) -> Mesh:
    faces = [tuple(f) for f in itertools.combinations(range(4), 3)]
    return Mesh(
        region=region,
        vertices=tuple(tuple(float(x) for x in v) for v in vertices),
        faces=_oriented_faces(vertices, faces),
    )


def _octahedron_mesh(region: Region) -> Mesh:
    # one face per octant: (±e_x, ±e_y, ±e_z)
    faces = [
        (0 if sx > 0 else 1, 2 if sy > 0 else 3, 4 if sz > 0 else 5)
        for sx, sy, sz in itertools.product((1, -1), repeat=3)
    ]
    return Mesh(
        region=region,
        vertices=tuple(tuple(float(x) for x in v) for v in OCTAHEDRON_VERTICES),
        faces=_oriented_faces(OCTAHEDRON_VERTICES, faces),
    )


def export_mesh(which: Union[Region, str]) -> Mesh:
    """Triangle mesh of a c-space region.

    The intersection of the tetrahedron with its mirror is the separable
    double pyramid, so both names give the same octahedron.

    Raises:
        UnknownRegionError: If ``which`` names no region
    """
    try:
        region = which if isinstance(which, Region) else Region(str(which).lower())
    except ValueError:
        raise UnknownRegionError(
            f"Unknown region {which!r}; expected one of "
            f"{', '.join(r.value for r in Region)}"
        ) from None

    if region is Region.TETRA:
        return _tetra_mesh(region, BELL_VERTICES)
    if region is Region.MIRROR:
        return _tetra_mesh(region, MIRROR_VERTICES)
    return _octahedron_mesh(region)


def mesh_to_off(mesh: Mesh) -> str:
    """Object File Format text for a triangle mesh."""
    lines = ["OFF", f"{len(mesh.vertices)} {len(mesh.faces)} 0"]
    lines += [" ".join(f"{x:g}" for x in vertex) for vertex in mesh.vertices]
    lines += [f"3 {i} {j} {k}" for i, j, k in mesh.faces]
    return "\n".join(lines) + "\n"


def mirror_point(c: CVecLike) -> np.ndarray:
    """Image of w_c under partial transposition, read back as a c-space point."""
    transposed = partial_transpose_B(w_c_operator(_as_c(c)))
    return 4.0 * np.diag(to_pauli(transposed).c).copy()


def state_to_c(w: Union[DensityMatrix, HermitianOp]) -> np.ndarray:
    """c-space point of a two-qubit state.

    Diagonal correlation matrices are returned as they are, so w_c maps back to
    c. Other states go through the local normal form, which fixes c only up to
    the sign and order changes generated by local rotations.
    """
    op = w.op if isinstance(w, DensityMatrix) else w
    correlation = to_pauli(op).c
    off_diagonal = correlation - np.diag(np.diag(correlation))
    if np.abs(off_diagonal).max() <= ToleranceConstants.HERMITICITY:
        return 4.0 * np.diag(correlation).copy()
    c_diag, _, _ = local_normal_form(op)
    return 4.0 * c_diag
