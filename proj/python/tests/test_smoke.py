import math

import pytest

import ddr_rotrot as ddr


def test_structured_mesh_shapes():
    m = ddr.structured_mesh("cartesian", 4)
    assert m.n_elements == 16
    assert m.n_vertices == 25
    assert m.n_edges == 40
    assert math.isclose(m.h, math.sqrt(2) / 4)
    assert len(m.vertices()) == 25


def test_mesh_text_roundtrip(tmp_path):
    m = ddr.structured_mesh("hexagonal", 3)
    path = tmp_path / "hex.mesh"
    m.save(path)
    assert ddr.load_mesh(path) == m
    assert ddr.parse_mesh(m.to_text()) == m


def test_unknown_family_raises():
    with pytest.raises(ValueError):
        ddr.structured_mesh("voronoi", 4)


@pytest.mark.parametrize(
    "sides,space,k,expected",
    [(3, "V", 1, (7, 6)), (4, "Sigma", 2, (32, 29)), (6, "W", 4, (45, 45)), (5, "V", 4, (35, 26))],
)
def test_local_dof_counts(sides, space, k, expected):
    assert ddr.local_dof_counts(ddr.regular_polygon(sides), k, space) == expected


def test_exactness_both_boundary_conditions():
    m = ddr.structured_mesh("triangular", 2)
    free = ddr.check_exactness(m, 1, "none")
    assert free["passed"] and free["nullity_G"] == 1
    clamped = ddr.check_exactness(m, 1, "homogeneous")
    assert clamped["passed"] and clamped["nullity_G"] == 0
    assert clamped["target_dim_W"] == clamped["dim_W"] - 1


def test_commutation_residuals():
    res = ddr.check_commutation(ddr.structured_mesh("hexagonal", 4), 1)
    assert res
    for r in res:
        assert r["residual"] < (1e-10 if r["polynomial"] else 1e-8), r


def test_stability_positive():
    s = ddr.estimate_stability(ddr.structured_mesh("cartesian", 2), 0)
    assert s["converged"]
    assert s["lambda_P"] > 0 and s["gamma_h"] > 0
    assert 0 < s["norm_lower"] <= s["norm_upper"]


def test_solve_and_rates():
    rows = ddr.convergence_study("cartesian", 1, [4, 8], threads=2)
    assert [r["n"] for r in rows] == [4, 8]
    for r in rows:
        assert r["residual"] < 1e-10
        assert r["divergence"] < 1e-9
    assert rows[1]["ErrURotRot"] < rows[0]["ErrURotRot"] / 3
    single = ddr.solve_benchmark(ddr.structured_mesh("cartesian", 8), 1, threads=1)
    assert single["ErrUL2"] == rows[1]["ErrUL2"]
    csv = ddr.format_csv(rows)
    assert csv.splitlines()[0] == "MeshSize,ErrUL2,ErrURotRot,ErrPL2,ErrPGrad"
    assert len(ddr.format_rates(rows).splitlines()) == 2
