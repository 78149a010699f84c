#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lingdim/geometry/imbalance.hpp"
#include "lingdim/geometry/manifold.hpp"
#include "lingdim/geometry/neighbors.hpp"
#include "lingdim/geometry/twonn.hpp"
#include "sample_gen.hpp"

using namespace lingdim;

namespace {

PointCloudd line(std::initializer_list<double> xs) {
  RowMatrixXd p(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return PointCloudd(p);
}

RowMatrixXd gaussian(Index n, Index d, std::uint64_t seed, double scale = 1.0) {
  testgen::SplitMix64 g(seed);
  RowMatrixXd p(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < d; ++k) p(i, k) = scale * g.normal();
  return p;
}

// Exhaustive scan: every pair distance, stable sort by (distance, index).
struct Oracle {
  std::vector<std::vector<std::pair<double, Index>>> order;

  explicit Oracle(const RowMatrixXd& p) : order(static_cast<std::size_t>(p.rows())) {
    for (Index i = 0; i < p.rows(); ++i) {
      auto& row = order[static_cast<std::size_t>(i)];
      for (Index j = 0; j < p.rows(); ++j) {
        if (j == i) continue;
        double s = 0.0;
        for (Index k = 0; k < p.cols(); ++k) {
          const double diff = p(i, k) - p(j, k);
          s += diff * diff;
        }
        row.emplace_back(s, j);
      }
      std::sort(row.begin(), row.end());
    }
  }
  Index rank(Index i, Index j) const {
    const auto& row = order[static_cast<std::size_t>(i)];
    for (std::size_t r = 0; r < row.size(); ++r)
      if (row[r].second == j) return static_cast<Index>(r + 1);
    return -1;
  }
};

}  // namespace

TEST_CASE("dedupe drops later copies within tolerance") {
  RowMatrixXd p(4, 2);
  p << 0, 0, 1, 1, 0, 0, 2, 5;
  auto r = dedupe(PointCloudd(p), 0.0);
  CHECK(r.cloud.n_points() == 3);
  CHECK(r.removed == std::vector<Index>{2});

  auto same = dedupe(line({0, 1, 3}), 0.0);
  CHECK(same.removed.empty());
  CHECK(same.cloud.points == line({0, 1, 3}).points);

  CHECK_THROWS_AS(dedupe(line({0, 1e-9, 5}), 1e-6), EstimatorInputError);
  auto near = dedupe(line({0, 1e-9, 5, 9}), 1e-6);
  CHECK(near.removed == std::vector<Index>{1});
  CHECK(near.kept == std::vector<Index>{0, 2, 3});
  CHECK_THROWS_AS(dedupe(line({0, 1, 2}), -1.0), ParameterError);
}

TEST_CASE("neighbor ratios on small 1-D clouds") {
  const auto s = neighbor_stats(line({0, 1, 3}));
  CHECK(s.mu(0) == 3.0);
  CHECK(s.mu(1) == 2.0);
  CHECK(s.mu(2) == 1.5);
  CHECK(s.nn1 == std::vector<Index>{1, 0, 1});
  CHECK(s.nn2 == std::vector<Index>{2, 2, 0});

  // Equally spaced: the ends see (c, 2c); the middle point's two neighbours tie.
  const auto eq = neighbor_stats(line({-4.0, -1.5, 1.0}));
  CHECK(eq.mu(0) == 2.0);
  CHECK(eq.mu(1) == 1.0);
  CHECK(eq.mu(2) == 2.0);
}

TEST_CASE("neighbor search rejects bad input") {
  CHECK_THROWS_AS(neighbor_stats(line({0, 1})), EstimatorInputError);
  CHECK_THROWS_AS(neighbor_stats(line({0, 0, 1})), DegenerateGeometryError);
  auto bad = line({0, 1, 2});
  bad.points(1, 0) = std::nan("");
  CHECK_THROWS_AS(neighbor_stats(bad), ValidationError);
}

TEST_CASE("two_nearest and ranks agree with an exhaustive scan") {
  // Shapes picked to cross block boundaries and include near-ties.
  const std::vector<std::pair<Index, Index>> shapes{{3, 1}, {17, 2}, {257, 5}, {600, 64}, {1000, 16}};
  std::uint64_t seed = 11;
  for (auto [n, d] : shapes) {
    RowMatrixXd p = gaussian(n, d, seed++);
    // Quantize a copy so that exact distance ties occur.
    if (n >= 600) p = (p.array() * 4.0).round() / 4.0 + 1e3;
    Oracle o(p);
    ExactNeighborSearch search(p, 64);
    if (p.rows() >= 3 && dedupe_removals(p, 0.0).empty()) {
      const auto s = search.two_nearest();
      for (Index i = 0; i < n; ++i) {
        const auto& row = o.order[static_cast<std::size_t>(i)];
        REQUIRE(s.nn1[i] == row[0].second);
        REQUIRE(s.nn2[i] == row[1].second);
        CHECK(s.delta1(i) == std::sqrt(row[0].first));
        CHECK(s.delta2(i) == std::sqrt(row[1].first));
      }
    }
    std::vector<Index> targets(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) targets[i] = (i * 7 + 3) % n == i ? (i + 1) % n : (i * 7 + 3) % n;
    const auto ranks = search.ranks_of(targets);
    for (Index i = 0; i < n; ++i) REQUIRE(ranks[i] == o.rank(i, targets[i]));
  }
}

TEST_CASE("TwoNN hand example and error cases") {
  TwoNNOptions o;
  o.discard_fraction = 0.0;
  const auto e = twonn_id(line({0, 1, 3}), o);
  CHECK(e.d == doctest::Approx(3.0 / (std::log(3.0) + std::log(2.0) + std::log(1.5))).epsilon(1e-14));
  CHECK(e.d == doctest::Approx(1.3654).epsilon(1e-4));
  CHECK(e.n_used == 3);

  RowMatrixXd square(4, 2);
  square << 0, 0, 1, 0, 0, 1, 1, 1;
  CHECK_THROWS_AS(twonn_id(PointCloudd(square), o), DegenerateGeometryError);
  o.discard_fraction = 1.0;
  CHECK_THROWS_AS(twonn_id(line({0, 1, 3}), o), ParameterError);
  CHECK_THROWS_AS(parse_id_method("ols"), ParameterError);
  CHECK(parse_id_method(to_string(IdMethod::linear_fit)) == IdMethod::linear_fit);
}

TEST_CASE("censored MLE reduces to the plain estimator without discard") {
  Eigen::VectorXd mu(6);
  mu << 1.1, 1.5, 2.0, 1.2, 3.5, 1.05;
  TwoNNOptions o;
  o.discard_fraction = 0.0;
  CHECK(twonn_from_ratios(mu, o).d == doctest::Approx(6.0 / mu.array().log().sum()).epsilon(1e-14));

  // Discarding 1/3: the two largest ratios are censored at the largest kept.
  o.discard_fraction = 1.0 / 3.0;
  const double kept = std::log(1.05) + std::log(1.1) + std::log(1.2) + std::log(1.5);
  const auto e = twonn_from_ratios(mu, o);
  CHECK(e.n_used == 4);
  CHECK(e.d == doctest::Approx(4.0 / (kept + 2.0 * std::log(1.5))).epsilon(1e-14));
}

TEST_CASE("linear fit follows the empirical CDF of a Pareto sample") {
  // Exact quantiles of Pareto(d=3): mu_(i) = (1 - i/(N+1))^(-1/3).
  const int n = 999;
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) mu(i) = std::pow(1.0 - (i + 1.0) / (n + 1.0), -1.0 / 3.0);
  TwoNNOptions o;
  o.method = IdMethod::linear_fit;
  o.keep_cdf = true;
  const auto e = twonn_from_ratios(mu, o);
  CHECK(e.d == doctest::Approx(3.0).epsilon(0.02));
  REQUIRE(e.empirical_cdf.has_value());
  CHECK(e.empirical_cdf->front().first == doctest::Approx(mu.minCoeff()));
  o.method = IdMethod::mle;
  CHECK(twonn_from_ratios(mu, o).d == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("TwoNN recovers hypercube dimension") {
  for (Index d : {1, 2, 3}) {
    ManifoldSpec spec;
    spec.intrinsic_dim = d;
    spec.ambient_dim = 32;
    spec.n_points = 4000;
    spec.seed = 5;
    const double est = estimate_id(sample_manifold(spec)).d;
    CHECK(est == doctest::Approx(static_cast<double>(d)).epsilon(0.1));
  }
}

TEST_CASE("TwoNN is invariant to scale, isometry and point order") {
  ManifoldSpec spec;
  spec.intrinsic_dim = 3;
  spec.ambient_dim = 12;
  spec.n_points = 800;
  spec.seed = 2;
  const auto cloud = sample_manifold(spec);
  const double base = twonn_id(cloud).d;

  PointCloudd scaled(cloud.points * 17.0);
  CHECK(std::abs(twonn_id(scaled).d - base) / base <= 1e-9);

  const auto iso = random_isometry(spec.ambient_dim, 9);
  CHECK(std::abs(twonn_id(iso.apply(cloud)).d - base) / base <= 1e-6);

  std::vector<Index> perm(static_cast<std::size_t>(cloud.n_points()));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(4);
  rng.shuffle(perm);
  CHECK(twonn_id(cloud.subset(perm)).d == base);
}

TEST_CASE("sample_manifold contract") {
  ManifoldSpec spec;
  spec.intrinsic_dim = 1;
  spec.ambient_dim = 3;
  spec.n_points = 5;
  spec.seed = 8;
  const auto a = sample_manifold(spec);
  const auto b = sample_manifold(spec);
  CHECK(a.points == b.points);
  // Collinear: all difference vectors are parallel to the first one.
  const Eigen::RowVectorXd dir = (a.points.row(1) - a.points.row(0)).normalized();
  for (Index i = 2; i < 5; ++i) {
    const Eigen::RowVectorXd v = a.points.row(i) - a.points.row(0);
    CHECK((v - v.dot(dir) * dir).norm() <= 1e-12 * (1.0 + v.norm()));
  }
  spec.intrinsic_dim = 4;
  CHECK_THROWS_AS(sample_manifold(spec), ParameterError);
}

TEST_CASE("information imbalance hand example") {
  const auto r = info_imbalance(line({0, 1, 3, 7}), line({0, 5, 1, 2.2}));
  CHECK(r.delta_ab == 1.25);
  CHECK(r.n_points == 4);
}

TEST_CASE("information imbalance identities") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RowMatrixXd p = gaussian(150 + static_cast<Index>(seed) * 13, 7, seed);
    const auto r = info_imbalance_impl(p, p);
    CHECK(r.delta_ab == 2.0 / static_cast<double>(p.rows()));
    CHECK(r.delta_ba == r.delta_ab);

    // Exact invariance to independent isometries of either side.
    const RowMatrixXd q = gaussian(p.rows(), 4, seed + 100);
    const auto base = info_imbalance_impl(p, q);
    const auto ip = random_isometry(7, seed).apply(PointCloudd(p)).points;
    const auto iq = random_isometry(4, seed + 1).apply(PointCloudd(q)).points;
    const auto moved = info_imbalance_impl(ip, iq);
    CHECK(moved.delta_ab == base.delta_ab);
    CHECK(moved.delta_ba == base.delta_ba);
    CHECK(base.delta_ab >= 0.0);
    CHECK(base.delta_ab <= 2.0);
  }
}

TEST_CASE("information imbalance matches rank oracle") {
  const RowMatrixXd a = gaussian(300, 5, 21);
  const RowMatrixXd b = a.leftCols(2) + 0.3 * gaussian(300, 2, 22);
  Oracle oa(a), ob(b);
  double sum_ab = 0, sum_ba = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    sum_ab += static_cast<double>(ob.rank(i, oa.order[i][0].second));
    sum_ba += static_cast<double>(oa.rank(i, ob.order[i][0].second));
  }
  const auto r = info_imbalance_impl(a, b);
  CHECK(r.delta_ab == doctest::Approx(2.0 * sum_ab / (300.0 * 300.0)).epsilon(1e-15));
  CHECK(r.delta_ba == doctest::Approx(2.0 * sum_ba / (300.0 * 300.0)).epsilon(1e-15));
  // B keeps a projection of A, so A predicts B better than the reverse.
  CHECK(r.delta_ab < r.delta_ba);
}

TEST_CASE("information imbalance pairing checks") {
  auto a = line({0, 1, 3});
  auto b = line({0, 1, 3, 4});
  CHECK_THROWS_AS(info_imbalance(a, b), PairingError);
  a.labels = {"x", "y", "z"};
  auto c = line({5, 1, 2});
  c.labels = {"x", "z", "y"};
  CHECK_THROWS_AS(info_imbalance(a, c), PairingError);
}

TEST_CASE("joint dedupe removes rows duplicated in either space") {
  RowMatrixXd a(5, 1), b(5, 1);
  a << 0, 1, 0, 3, 4;
  b << 0, 1, 2, 1, 5;
  CHECK(joint_dedupe_rows(a, b, 0.0) == std::vector<Index>{0, 1, 4});
  CHECK_THROWS_AS(joint_dedupe_rows(a.topRows(4), b.topRows(4), 0.0), EstimatorInputError);
}
