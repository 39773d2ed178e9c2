"""Bundled example domains for suites, CLI demos, and regression baselines.

Every entry is rebuilt on demand so callers can mutate nothing shared.  The
polyhedron and balanced-body entries are the small hand-checkable bodies used
throughout the test batteries; the affine twins exercise the delegation paths
with fixed, deterministic maps.
"""

from __future__ import annotations

import numpy as np

from .core import AffineMap, CLinearMap
from .domains import (
    AffineImage,
    BalancedConvex,
    ConvexPolyhedron,
    Domain,
    HalfPlaneProduct,
    ModulusFace,
    Polydisc,
    UnitBall,
    load_domain,
)
from .errors import SpecLoadError


def three_face_polyhedron() -> ConvexPolyhedron:
    """|z_1| < 1, |z_2| < 1, |z_1 + z_2| < 1.5 -- a wedge of the bidisc."""
    faces = [
        ModulusFace(np.array([1.0, 0.0], dtype=complex), 0.0, 1.0),
        ModulusFace(np.array([0.0, 1.0], dtype=complex), 0.0, 1.0),
        ModulusFace(np.array([1.0, 1.0], dtype=complex), 0.0, 1.5),
    ]
    return ConvexPolyhedron(faces, dim=2, bounding_radius=float(np.sqrt(2.0)),
                            name="three-face")


def polydisc_as_polyhedron(radii) -> ConvexPolyhedron:
    """The polydisc presented through its modulus faces |z_k| < r_k."""
    radii = np.asarray(radii, dtype=float)
    faces = []
    for k, r in enumerate(radii):
        c = np.zeros(radii.size, dtype=complex)
        c[k] = 1.0
        faces.append(ModulusFace(c, 0.0, float(r)))
    return ConvexPolyhedron(faces, dim=radii.size,
                            bounding_radius=float(np.linalg.norm(radii)),
                            name="polydisc-faces")


def balanced_two_face() -> BalancedConvex:
    """Balanced body with gauge max(|z_1|, |z_1 + z_2| / 1.2)."""
    C = np.array([[1.0, 0.0], [1.0, 1.0]], dtype=complex)
    s = np.array([1.0, 1.2])

    def g(v, _C=C, _s=s):
        v = np.asarray(v, dtype=complex)
        return np.max(np.abs(v @ _C.T) / _s, axis=-1)

    sv = np.linalg.svd(C, compute_uv=False)
    inner = float(1.0 / np.sum(np.linalg.norm(C, axis=1) / s))
    # g(v) < 1 forces ||C v|| < ||s||, so ||v|| < ||s|| / sigma_min(C)
    bounding = float(np.linalg.norm(s) / sv[-1])
    return BalancedConvex(g, 2, bounding, inner,
                          funcs=[{"coeffs": C[0], "scale": 1.0},
                                 {"coeffs": C[1], "scale": 1.2}])


def twin_map(dim: int) -> AffineMap:
    """Fixed invertible affine map per dimension, for affine-image twins."""
    M = np.eye(dim, dtype=complex)
    M[0, 0] = 1.0 + 0.2j
    for k in range(dim - 1):
        M[k, k + 1] = 0.25 + 0.1j
    if dim > 1:
        M[dim - 1, dim - 1] = 0.9
    t = (0.1 - 0.05j) * np.ones(dim, dtype=complex)
    return AffineMap(CLinearMap(M), t)


def affine_twin(d: Domain) -> AffineImage:
    """The domain pushed through the fixed map of its dimension."""
    return AffineImage(d, twin_map(d.dim))


_BUILDERS = {
    "disc": lambda: Polydisc([1.0]),
    "polydisc2": lambda: Polydisc([1.0, 1.0]),
    "ball2": lambda: UnitBall(2),
    "halfplane": lambda: HalfPlaneProduct(1, "upper"),
    "three_face": three_face_polyhedron,
    "balanced": balanced_two_face,
    "sheared_polydisc": lambda: affine_twin(Polydisc([1.0, 1.0])),
    "turned_ball": lambda: affine_twin(UnitBall(2)),
}


def zoo_names() -> list[str]:
    return sorted(_BUILDERS)


def zoo_domain(name: str) -> Domain:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise SpecLoadError(f"unknown zoo domain {name!r}; "
                            f"known: {', '.join(zoo_names())}")


def resolve_domain(arg: str) -> Domain:
    """A zoo name, a JSON file path, or an inline JSON object."""
    if arg in _BUILDERS:
        return zoo_domain(arg)
    return load_domain(arg)
