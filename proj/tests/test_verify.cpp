#include "doctest.h"
#include "helpers.hpp"

#include "ddr/verify.hpp"

using namespace ddr;

TEST_CASE("numerical rank") {
  SUBCASE("clear gap") {
    const Eigen::MatrixXd m = Eigen::Vector3d(1.0, 1e-3, 1e-13).asDiagonal();
    const RankInfo r = numerical_rank(m);
    CHECK(r.rank == 2);
    CHECK(r.conclusive);
    CHECK(r.gap == doctest::Approx(1e10));
  }
  SUBCASE("ambiguous gap is inconclusive") {
    const Eigen::MatrixXd m = Eigen::Vector3d(1.0, 1.5e-9, 0.9e-9).asDiagonal();
    const RankInfo r = numerical_rank(m);
    CHECK(r.rank == 2);
    CHECK_FALSE(r.conclusive);
  }
  SUBCASE("full rank and empty") {
    CHECK(numerical_rank(Eigen::Matrix2d::Identity()).rank == 2);
    CHECK(numerical_rank(Eigen::MatrixXd(0, 3)).rank == 0);
    CHECK(numerical_rank(Eigen::MatrixXd::Zero(2, 2)).rank == 0);
  }
}

TEST_CASE("exactness examples") {
  const Mesh cart = build_structured_mesh(MeshFamily::cartesian, 2);
  const ExactnessReport r = check_exactness(cart, 0, BoundaryCondition::none, "cartesian-2");
  CHECK(r.nullity_G == 1);
  CHECK(r.rank_R.rank == r.dim_W);
  CHECK(r.passed());

  const Mesh tri = build_structured_mesh(MeshFamily::triangular, 2);
  const ExactnessReport h = check_exactness(tri, 1, BoundaryCondition::homogeneous);
  CHECK(h.nullity_G == 0);
  CHECK(h.passed());
  // Rotors of fields with vanishing boundary components have zero mean.
  CHECK(h.target_dim_W == h.dim_W - 1);
  CHECK(h.mean_residual < 1e-12);
}

TEST_CASE("exactness sweep and rank bookkeeping") {
  for (int n : {1, 2}) {
    for (const Mesh& m : testing::structured_meshes(n)) {
      for (int k = 0; k <= 2; ++k) {
        for (auto bc : {BoundaryCondition::none, BoundaryCondition::homogeneous}) {
          const ExactnessReport r = check_exactness(m, k, bc);
          CAPTURE(n);
          CAPTURE(k);
          CAPTURE(m.n_elements());
          CHECK(r.passed());
          CHECK(r.nullity_G + r.rank_G.rank == r.dim_V);
          CHECK(r.rank_G.gap >= 10.0);
          CHECK(r.rank_R.gap >= 10.0);
        }
      }
    }
  }
}

TEST_CASE("report formatting") {
  const Mesh m = build_structured_mesh(MeshFamily::cartesian, 1);
  const ExactnessReport r = check_exactness(m, 0, BoundaryCondition::none, "c1");
  const std::string kv = format_key_value(r);
  CHECK(kv.find("nullity_G=1\n") != std::string::npos);
  CHECK(kv.find("passed=true\n") != std::string::npos);
  CHECK(format_table(r).find("PASS") != std::string::npos);
}

TEST_CASE("commutation of polynomial fields") {
  for (int n : {2, 4, 8}) {
    for (int k = 0; k <= 2; ++k) {
      const Mesh m = build_structured_mesh(MeshFamily::hexagonal, n);
      const FieldSuite suite = default_field_suite(k);
      for (const auto& c : check_commutation(m, k, suite)) {
        if (c.polynomial) {
          CAPTURE(c.field);
          CAPTURE(n);
          CHECK(c.residual < 1e-11);
        }
      }
    }
  }
}

TEST_CASE("commutation of trigonometric fields") {
  for (const Mesh& m : testing::structured_meshes(4)) {
    for (int k = 0; k <= 2; ++k) {
      for (const auto& c : check_commutation(m, k, default_field_suite(k))) {
        CAPTURE(c.field);
        CAPTURE(k);
        CHECK(c.residual < 1e-10);
      }
    }
  }
}

TEST_CASE("rotor of curl-free interpolate vanishes") {
  const Mesh m = build_structured_mesh(MeshFamily::triangular, 3);
  FieldSuite suite;
  suite.vectors.push_back({"grad(exp(x) cos(y))",
                           {[](const Point& x) {
                              return Point(std::exp(x.x()) * std::cos(x.y()), -std::exp(x.x()) * std::sin(x.y()));
                            },
                            [](const Point&) { return 0.0; }}});
  for (int k = 0; k <= 2; ++k) CHECK(check_commutation(m, k, suite).front().residual < 1e-11);
}

TEST_CASE("stability surrogates") {
  for (int k = 0; k <= 1; ++k) {
    std::vector<StabilityReport> seq;
    for (int n : {2, 4, 8}) seq.push_back(estimate_poincare(build_structured_mesh(MeshFamily::cartesian, n), k));
    for (const auto& r : seq) {
      CHECK(r.converged);
      CHECK(r.lambda_P > 0.0);
      CHECK(r.gamma_h > 0.0);
      CHECK(r.norm_lower > 0.0);
      CHECK(r.norm_upper >= r.norm_lower);
    }
    CHECK(seq[2].lambda_P / seq[0].lambda_P >= 0.25);
    CHECK(seq[2].gamma_h / seq[0].gamma_h >= 0.25);
    MESSAGE("k=" << k << " lambda_P " << seq[0].lambda_P << " " << seq[1].lambda_P << " " << seq[2].lambda_P
                 << " gamma_h " << seq[0].gamma_h << " " << seq[1].gamma_h << " " << seq[2].gamma_h);
  }
}
