import json

import numpy as np
import pytest

from invmet import zoo_domain


@pytest.fixture
def polydisc2_file(tmp_path):
    p = tmp_path / "polydisc2.json"
    p.write_text(json.dumps({"kind": "polydisc", "radii": [1.0, 1.0]}))
    return p


@pytest.fixture
def three_face_file(tmp_path):
    spec = {
        "kind": "polyhedron",
        "dim": 2,
        "faces": [
            {"type": "modulus", "coeffs": [1.0, 0.0], "bound": 1.0},
            {"type": "modulus", "coeffs": [0.0, 1.0], "bound": 1.0},
            {"type": "modulus", "coeffs": [1.0, 1.0], "bound": 1.5},
        ],
        "bounding_radius": 1.4142135623730951,
    }
    p = tmp_path / "three_face.json"
    p.write_text(json.dumps(spec))
    return p


@pytest.fixture
def pd2():
    return zoo_domain("polydisc2")


@pytest.fixture
def ball2():
    return zoo_domain("ball2")


@pytest.fixture
def three_face():
    return zoo_domain("three_face")


def assert_inside(domain, points):
    margins = np.array([float(domain.contains(z)) for z in np.atleast_2d(points)])
    assert margins.min() > 0
