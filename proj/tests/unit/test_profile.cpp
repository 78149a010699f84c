#include <doctest.h>

#include <algorithm>
#include <set>

#include "lingdim/geometry/manifold.hpp"
#include "lingdim/profile/partition.hpp"
#include "lingdim/profile/peak_span.hpp"
#include "lingdim/profile/profile.hpp"

using namespace lingdim;

namespace {

std::vector<LayerCloud<double>> hypercube_layers(std::vector<Index> dims, Index n, std::uint64_t seed) {
  std::vector<LayerCloud<double>> layers;
  for (std::size_t l = 0; l < dims.size(); ++l) {
    ManifoldSpec spec;
    spec.intrinsic_dim = dims[l];
    spec.ambient_dim = 16;
    spec.n_points = n;
    spec.seed = seed;
    layers.push_back({static_cast<int>(l), sample_manifold(spec)});
  }
  return layers;
}

}  // namespace

TEST_CASE("partition sizes") {
  const auto big = partition(50000, 5, 1);
  REQUIRE(big.n_parts() == 5);
  std::set<Index> all;
  for (const auto& p : big.parts) {
    CHECK(p.size() == 10000);
    all.insert(p.begin(), p.end());
  }
  CHECK(all.size() == 50000);
  CHECK(big.dropped.empty());

  const auto one = partition(10, 1, 3);
  REQUIRE(one.n_parts() == 1);
  auto sorted = one.parts[0];
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<Index>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(sorted != one.parts[0]);

  const auto odd = partition(11, 5, 0);
  for (const auto& p : odd.parts) CHECK(p.size() == 2);
  CHECK(odd.dropped.size() == 1);

  CHECK_THROWS_AS(partition(4, 5, 0), ParameterError);
  CHECK_THROWS_AS(partition(4, 0, 0), ParameterError);
  CHECK(partition(100, 4, 9).parts == partition(100, 4, 9).parts);
  CHECK(partition(100, 4, 9).parts != partition(100, 4, 10).parts);

  const auto c = partition_contiguous(7, 3);
  CHECK(c.parts == std::vector<std::vector<Index>>{{0, 1}, {2, 3}, {4, 5}});
  CHECK(c.dropped == std::vector<Index>{6});
}

TEST_CASE("mean_and_se") {
  auto [m, s] = mean_and_se({1.0, 2.0, 3.0, 4.0});
  CHECK(m == 2.5);
  CHECK(s == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-15));
  auto [m3, s3] = mean_and_se({0.1, 0.1, 0.1, 0.1, 0.1});
  CHECK(m3 == 0.1);
  CHECK(s3 == 0.0);
  auto [m1, s1] = mean_and_se({7.0});
  CHECK(m1 == 7.0);
  CHECK(s1 == 0.0);
}

TEST_CASE("identical layers give a flat profile") {
  auto layers = hypercube_layers({3, 3, 3, 3}, 1000, 4);
  const auto prof = id_profile(layers, partition(1000, 5, 1));
  for (std::size_t l = 1; l < prof.size(); ++l) {
    CHECK(prof.mean[l] == prof.mean[0]);
    CHECK(prof.se[l] == prof.se[0]);
  }
  CHECK(prof.se_defined);

  // Five stacked copies split contiguously: every partition sees the same cloud.
  std::vector<LayerCloud<double>> stacked;
  for (const auto& l : layers) {
    RowMatrixXd p(5000, 16);
    for (int c = 0; c < 5; ++c) p.middleRows(c * 1000, 1000) = l.cloud.points;
    stacked.push_back({l.layer, PointCloudd(p)});
  }
  const auto exact = id_profile(stacked, partition_contiguous(5000, 5));
  for (std::size_t l = 0; l < exact.size(); ++l) CHECK(exact.se[l] == 0.0);
}

TEST_CASE("ID profile rises with hypercube dimension") {
  const auto prof = id_profile(hypercube_layers({1, 2, 3, 4}, 2000, 7), partition(2000, 5, 3));
  CHECK(prof.layers == std::vector<int>{0, 1, 2, 3});
  for (std::size_t l = 1; l < prof.size(); ++l) CHECK(prof.mean[l] > prof.mean[l - 1]);
  CHECK(prof.metric_name == "twonn_id");
}

TEST_CASE("single partition equals the direct metric") {
  auto layers = hypercube_layers({2, 5}, 600, 1);
  const auto prof = id_profile(layers, partition(600, 1, 0));
  CHECK_FALSE(prof.se_defined);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    CHECK(prof.mean[l] == twonn_id(layers[l].cloud).d);
    CHECK(prof.se[l] == 0.0);
  }
}

TEST_CASE("profile alignment and error context") {
  auto layers = hypercube_layers({2, 2}, 300, 1);
  layers[1].cloud = layers[1].cloud.subset(std::vector<Index>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(id_profile(layers, partition(300, 3, 0)), AlignmentError);

  auto dup = hypercube_layers({2, 2, 2}, 30, 1);
  dup[2].cloud.points.row(1) = dup[2].cloud.points.row(0);
  try {
    TwoNNOptions o;
    o.discard_fraction = 0.0;
    id_profile(dup, partition_contiguous(30, 1), o, 0.0);
  } catch (...) {
    FAIL("duplicates are removed before estimation");
  }
  dup[2].cloud.points.setZero();
  try {
    id_profile(dup, partition_contiguous(30, 2));
    FAIL("expected an error");
  } catch (const MetricError& e) {
    CHECK(e.layer() == 2);
    CHECK(e.partition() == 0);
    CHECK(e.kind() == "estimator_input");
  }
}

TEST_CASE("imbalance profiles in both directions") {
  auto a = hypercube_layers({2, 3, 4}, 400, 2);
  const auto [ab, ba] = imbalance_profiles(a, a, partition(400, 4, 0));
  for (std::size_t l = 0; l < ab.size(); ++l) {
    CHECK(ab.mean[l] == 2.0 / 100.0);
    CHECK(ba.mean[l] == 2.0 / 100.0);
  }
  CHECK(ab.metric_name == "info_imbalance_ab");
  CHECK(ba.metric_name == "info_imbalance_ba");
}

TEST_CASE("peak span fixtures") {
  auto s = peak_span({2, 4, 8, 12, 9, 5, 4, 4}, 0, 7);
  CHECK(s.peak_layer == 3);
  CHECK(s.span_start == 2);
  CHECK(s.span_end == 5);
  CHECK_FALSE(s.boundary_peak);

  s = peak_span({0, 1, 2, 3, 2, 1, 0}, 0, 6);
  CHECK(s.peak_layer == 3);
  CHECK(s.span_start == 2);
  CHECK(s.span_end == 4);

  s = peak_span({1, 2, 4, 7, 11, 16, 22}, 0, 6);
  CHECK(s.peak_layer == 6);
  CHECK(s.span_end == 6);
  CHECK(s.boundary_peak);

  CHECK_THROWS_AS(peak_span({1, 2, 3, 2}, 0, 3), ParameterError);
  CHECK_THROWS_AS(peak_span({1, 2, 3, 2, 1, 0}, 4, 2), ParameterError);
}

TEST_CASE("peak span ignores shifts and positive scaling, ties go low") {
  const std::vector<double> v{3, 5, 6, 9, 10, 7, 6, 6.5, 2};
  const auto base = peak_span(v, 0, 8);
  for (double scale : {0.01, 3.0, 1e6}) {
    std::vector<double> w;
    for (double x : v) w.push_back(scale * x - 42.0);
    const auto t = peak_span(w, 0, 8);
    CHECK(t.peak_layer == base.peak_layer);
    CHECK(t.span_start == base.span_start);
    CHECK(t.span_end == base.span_end);
  }
  CHECK(peak_span({0, 4, 1, 4, 1, 0}, 0, 5).peak_layer == 1);
}

TEST_CASE("default search range starts at layer 1") {
  LayerProfile p;
  p.metric_name = "m";
  p.layers = {0, 1, 2, 3, 4, 5, 6};
  p.mean = {99, 1, 2, 5, 2, 1, 0};
  p.se.assign(7, 0.0);
  const auto s = peak_span(p);
  CHECK(s.search_lo == 1);
  CHECK(s.search_hi == 6);
  CHECK(s.peak_layer == 3);
  CHECK(s.search_lo <= s.span_start);
  CHECK(s.span_end <= s.search_hi);
}
