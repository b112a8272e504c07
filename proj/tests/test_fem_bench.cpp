#include <doctest.h>

#include <array>
#include <cmath>
#include <tuple>

#include "uzawa/dual_solvers.hpp"
#include "uzawa/error.hpp"
#include "uzawa/fem_bench.hpp"
#include "uzawa/oracle.hpp"

using namespace uzawa;

namespace {

using Corners = std::array<Point2, 4>;

double max_abs_entry(const SymMatrix& k) {
  double m = 0.0;
  for (double v : k.data()) m = std::max(m, std::abs(v));
  return m;
}

// Element stiffness of an axis-aligned a x b rectangle computed independently:
// closed-form B for bilinear shape functions on the rectangle, integrated with
// a composite Simpson rule (exact here since every integrand is at most
// quadratic in each coordinate).
std::array<std::array<double, 8>, 8> rectangle_stiffness_oracle(double e, double nu, double t,
                                                              double a, double b) {
  const double c = e / (1 - nu * nu);
  const double dmat[3][3] = {{c, c * nu, 0}, {c * nu, c, 0}, {0, 0, c * (1 - nu) / 2}};
  // Corner (xa, ya) in {0, a} x {0, b}, counterclockwise from the origin.
  const double cx[4] = {0, a, a, 0};
  const double cy[4] = {0, 0, b, b};
  auto shape_grad = [&](int n, double x, double y, double& gx, double& gy) {
    const double sx = cx[n] == 0 ? -1.0 : 1.0;
    const double sy = cy[n] == 0 ? -1.0 : 1.0;
    const double fx = cx[n] == 0 ? (a - x) / a : x / a;
    const double fy = cy[n] == 0 ? (b - y) / b : y / b;
    gx = sx / a * fy;
    gy = sy / b * fx;
  };

  std::array<std::array<double, 8>, 8> k{};
  const int cells = 8;
  const double hx = a / cells, hy = b / cells;
  auto simpson_w = [&](int i) { return (i == 0 || i == 2 * cells) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  for (int ix = 0; ix <= 2 * cells; ++ix) {
    for (int iy = 0; iy <= 2 * cells; ++iy) {
      const double x = ix * hx / 2, y = iy * hy / 2;
      const double w = simpson_w(ix) * simpson_w(iy) * (hx / 6) * (hy / 6);
      double bm[3][8] = {};
      for (int n = 0; n < 4; ++n) {
        double gx, gy;
        shape_grad(n, x, y, gx, gy);
        bm[0][2 * n] = gx;
        bm[1][2 * n + 1] = gy;
        bm[2][2 * n] = gy;
        bm[2][2 * n + 1] = gx;
      }
      for (int r = 0; r < 8; ++r) {
        for (int s = 0; s < 8; ++s) {
          double v = 0;
          for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) v += bm[p][r] * dmat[p][q] * bm[q][s];
          }
          k[r][s] += t * w * v;
        }
      }
    }
  }
  return k;
}

}  // namespace

TEST_CASE("q4 element: unit square diagonal entry") {
  const auto ke = q4_element_stiffness(1.0, 0.0, 1.0, Corners{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
  CHECK(ke(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("q4 element matches the Simpson oracle on rectangles") {
  for (auto [a, b, nu] : {std::tuple{1.0, 1.0, 0.0}, std::tuple{2.0, 2.0, 0.3},
                          std::tuple{3.0, 0.5, 0.25}}) {
    const auto ke =
        q4_element_stiffness(200.0, nu, 5.0, Corners{{{0, 0}, {a, 0}, {a, b}, {0, b}}});
    const auto ref = rectangle_stiffness_oracle(200.0, nu, 5.0, a, b);
    const double scale = max_abs_entry(ke);
    for (std::size_t r = 0; r < 8; ++r) {
      for (std::size_t s = 0; s < 8; ++s) CHECK(std::abs(ke(r, s) - ref[r][s]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("q4 element rigid-body modes") {
  const Corners shapes[] = {
      {{{0, 0}, {2, 0}, {2, 2}, {0, 2}}},
      {{{0, 0}, {3, 0.4}, {2.5, 2}, {-0.3, 1.5}}},  // general convex quadrilateral
  };
  for (const Corners& c : shapes) {
    const auto ke = q4_element_stiffness(2.0e5, 0.3, 5.0, c);
    const double scale = max_abs_entry(ke);

    std::array<Vector, 3> modes;
    modes[0] = {1, 0, 1, 0, 1, 0, 1, 0};
    modes[1] = {0, 1, 0, 1, 0, 1, 0, 1};
    modes[2].resize(8);
    for (std::size_t a = 0; a < 4; ++a) {
      modes[2][2 * a] = -c[a].y;
      modes[2][2 * a + 1] = c[a].x;
    }
    for (const Vector& mode : modes) {
      CHECK(norm_inf(matvec(ke, mode)) <= 1e-10 * scale);
    }

    const Vector eig = oracle::jacobi_eigenvalues(ke);
    std::size_t near_zero = 0;
    for (double v : eig) near_zero += v < 1e-9 * eig.back();
    CHECK(near_zero == 3);
    CHECK(eig.front() > -1e-9 * eig.back());
  }
}

TEST_CASE("q4 element rejects degenerate geometry") {
  auto code = [](const Corners& c) {
    try {
      q4_element_stiffness(1.0, 0.3, 1.0, c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  // Clockwise ordering flips the Jacobian sign.
  CHECK(code(Corners{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}) == ErrorCode::DegenerateElement);
  // Collapsed to a line.
  CHECK(code(Corners{{{0, 0}, {1, 0}, {2, 0}, {3, 0}}}) == ErrorCode::DegenerateElement);
}

TEST_CASE("paper_spec") {
  const BenchmarkSpec s = paper_spec(30);
  CHECK(s.nx == 30);
  CHECK(s.ny == 10);
  CHECK(s.width == 60.0);
  CHECK(s.height == 20.0);
  CHECK(s.thickness == 5.0);
  CHECK(s.youngs_modulus == 2.0e5);
  CHECK(s.poisson_ratio == 0.3);
  CHECK(s.top_traction == 0.05);
  CHECK(s.right_traction == 0.5);
  CHECK(paper_spec(3).ny == 1);
  for (std::size_t bad : {std::size_t{4}, std::size_t{0}, std::size_t{31}}) {
    try {
      paper_spec(bad);
      FAIL("expected InvalidMeshRatio");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidMeshRatio);
    }
  }
}

TEST_CASE("BenchmarkSpec validation") {
  BenchmarkSpec s;
  s.poisson_ratio = 0.5;
  CHECK_THROWS_AS(build_benchmark(s), Error);
  s = BenchmarkSpec{};
  s.ny = 0;
  CHECK_THROWS_AS(build_benchmark(s), Error);
  s = BenchmarkSpec{};
  s.thickness = -1.0;
  CHECK_THROWS_AS(build_benchmark(s), Error);
}

TEST_CASE("build_benchmark sizes") {
  const ContactQP qp = build_benchmark(paper_spec(30));
  CHECK(qp.dim() == 660);
  CHECK(qp.ncon() == 30);
  const ContactQP small = build_benchmark(paper_spec(3));
  CHECK(small.dim() == 12);
  CHECK(small.ncon() == 3);
}

TEST_CASE("build_benchmark structure") {
  for (std::size_t nx : {3, 6, 30}) {
    const BenchmarkSpec spec = paper_spec(nx);
    const ContactQP qp = build_benchmark(spec);

    for (std::size_t i = 0; i < qp.dim(); ++i) {
      for (std::size_t j = 0; j < qp.dim(); ++j) CHECK(qp.stiffness(i, j) == qp.stiffness(j, i));
    }
    CHECK_NOTHROW(cholesky_factorize(qp.stiffness));

    // One -1 per row on the vertical DOF of bottom node i + 1; N N^T = I.
    for (std::size_t k = 0; k < qp.ncon(); ++k) {
      std::size_t nonzeros = 0;
      for (std::size_t j = 0; j < qp.dim(); ++j) {
        if (qp.constraint(k, j) != 0.0) {
          ++nonzeros;
          CHECK(qp.constraint(k, j) == -1.0);
          CHECK(j == *free_dof(spec, k + 1, 0, 1));
        }
      }
      CHECK(nonzeros == 1);
      CHECK(qp.gap_offset[k] == 0.0);
      for (std::size_t l = 0; l < qp.ncon(); ++l) {
        CHECK(dot(qp.constraint.row(k), qp.constraint.row(l)) == (k == l ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("node and DOF numbering") {
  const BenchmarkSpec spec = paper_spec(3);  // nx = 3, ny = 1
  CHECK(node_index(spec, 0, 0) == 0);
  CHECK(node_index(spec, 0, 1) == 1);
  CHECK(node_index(spec, 1, 0) == 2);
  CHECK_FALSE(free_dof(spec, 0, 1, 0).has_value());
  CHECK(*free_dof(spec, 1, 0, 0) == 0);
  CHECK(*free_dof(spec, 1, 0, 1) == 1);
  CHECK(*free_dof(spec, 1, 1, 0) == 2);
  CHECK(*free_dof(spec, 3, 1, 1) == 11);
}

TEST_CASE("traction resultants") {
  for (std::size_t nx : {3, 30, 60}) {
    const BenchmarkSpec spec = paper_spec(nx);
    const Vector f = nodal_traction_loads(spec);

    double top = 0.0, right = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i <= spec.nx; ++i) top += f[2 * node_index(spec, i, spec.ny) + 1];
    // The top-right corner carries both loads; separate them by component.
    for (std::size_t j = 0; j <= spec.ny; ++j) right += f[2 * node_index(spec, spec.nx, j)];
    for (double v : f) l1 += std::abs(v);
    CHECK(top == doctest::Approx(-15.0).epsilon(1e-13));   // 0.05 MPa * 60 mm * 5 mm
    CHECK(right == doctest::Approx(50.0).epsilon(1e-13));  // 0.5 MPa * 20 mm * 5 mm
    CHECK(l1 == doctest::Approx(65.0).epsilon(1e-13));

    // The clamped top-left node takes half of one top segment out of p.
    const ContactQP qp = build_benchmark(spec);
    double p1 = 0.0;
    for (double v : qp.load) p1 += std::abs(v);
    const double dx = spec.width / static_cast<double>(spec.nx);
    CHECK(p1 == doctest::Approx(65.0 - 0.5 * 0.05 * dx * 5.0).epsilon(1e-13));
  }
}

TEST_CASE("vertical right-edge load lifts the body off the obstacle") {
  BenchmarkSpec spec = paper_spec(30);
  spec.right_direction = RightEdgeLoad::Vertical;
  const ContactQP qp = build_benchmark(spec);
  SolverConfig cfg;
  cfg.epsilon = 1e-10;
  const SolveResult res = solve(qp, cfg);
  CHECK(res.status == SolveStatus::Converged);
  CHECK(res.iterations == 1);
  CHECK(norm_inf(res.r) == 0.0);
}

TEST_CASE("equilibrium force balance on the benchmark") {
  const ContactQP qp = build_benchmark(paper_spec(30));
  SolverConfig cfg;
  cfg.epsilon = 1e-8;
  const SolveResult res = solve(qp, cfg);
  REQUIRE(res.status == SolveStatus::Converged);
  Vector e1 = matvec(qp.stiffness, res.u);
  const Vector ntr = matvec_transpose(qp.constraint, res.r);
  for (std::size_t i = 0; i < e1.size(); ++i) e1[i] -= qp.load[i] + ntr[i];
  CHECK(norm_inf(e1) <= 1e-8 * norm_inf(qp.load));
}

TEST_CASE("mesh refinement changes the displacement field only slightly") {
  const BenchmarkSpec coarse = paper_spec(30);
  const BenchmarkSpec fine = paper_spec(60);
  SolverConfig cfg;
  cfg.epsilon = 1e-8;
  const SolveResult rc = solve(build_benchmark(coarse), cfg);
  const SolveResult rf = solve(build_benchmark(fine), cfg);
  REQUIRE(rc.status == SolveStatus::Converged);
  REQUIRE(rf.status == SolveStatus::Converged);

  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 1; i <= coarse.nx; ++i) {
    for (std::size_t j = 0; j <= coarse.ny; ++j) {
      for (std::size_t c = 0; c < 2; ++c) {
        const double a = rc.u[*free_dof(coarse, i, j, c)];
        const double b = rf.u[*free_dof(fine, 2 * i, 2 * j, c)];
        diff = std::max(diff, std::abs(a - b));
        scale = std::max(scale, std::abs(a));
      }
    }
  }
  CHECK(diff < 0.05 * scale);
}
