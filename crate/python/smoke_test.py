"""Smoke test for the compiled `quadric` extension.

Build first:  maturin develop -m crates/py/Cargo.toml
"""

import json
import math

import quadric


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    t = quadric.TangentModel(4)
    iso = [0.0] * t.dim
    iso[0] = iso[t.m + 1] = math.sqrt(0.5)
    angle, kind = t.canonical_angle(iso)
    assert kind == "A-isotropic" and close(angle, math.pi / 4), (angle, kind)

    evs, mult = quadric.sym_eigen(t.jacobi(iso))
    assert [k for _, k in mult] == [3, 4, 1], mult

    tube = quadric.Tube(3, 0.6)
    h = tube.hypersurface()
    assert h.is_hopf()
    assert h.reeb_parallel_residual() < 1e-11
    want = sorted(v for v, k in tube.expected_shape_spectrum() for _ in range(k))
    for a, b in zip(h.shape_spectrum(), want):
        assert close(a, b), (a, b)
    assert h.classify() == "tube k=3 r=0.600000", h.classify()

    back = quadric.Hypersurface.from_json(h.to_json())
    assert back.classify() == h.classify()

    assert quadric.principal_point(3, 0.9).classify() == "nonexistent-principal"

    report = json.loads(quadric.nonexistence(3, samples=10))
    assert report["summary"]["failed"] == 0, report["summary"]

    try:
        quadric.Tube(2, math.pi / 4)
    except ValueError as e:
        assert "0.785398" in str(e)
    else:
        raise AssertionError("r = pi/4 accepted")

    print(f"quadric {quadric.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
