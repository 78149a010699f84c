#include "lingdim/geometry/imbalance.hpp"

namespace lingdim {

namespace {

double directional(const ExactNeighborSearch& from, const ExactNeighborSearch& to) {
  const NeighborStats nn = from.two_nearest();
  const std::vector<Index> ranks = to.ranks_of(nn.nn1);
  double sum = 0.0;
  for (Index r : ranks) sum += static_cast<double>(r);
  const auto n = static_cast<double>(from.size());
  return 2.0 * sum / (n * n);
}

}  // namespace

ImbalanceResult info_imbalance_impl(const RowMatrixXd& a, const RowMatrixXd& b) {
  if (a.rows() != b.rows()) throw PairingError("paired clouds differ in size");
  if (a.rows() < 3) throw EstimatorInputError("information imbalance needs at least 3 points");
  const ExactNeighborSearch sa(a);
  const ExactNeighborSearch sb(b);
  ImbalanceResult out;
  out.n_points = a.rows();
  out.delta_ab = directional(sa, sb);
  out.delta_ba = directional(sb, sa);
  return out;
}

std::vector<Index> joint_dedupe_rows(const RowMatrixXd& a, const RowMatrixXd& b, double tol) {
  if (a.rows() != b.rows()) throw PairingError("paired clouds differ in size");
  const auto close_a = ExactNeighborSearch(a).earlier_within(tol);
  const auto close_b = ExactNeighborSearch(b).earlier_within(tol);
  std::vector<char> kept(close_a.size(), 1);
  std::vector<Index> rows;
  for (std::size_t i = 0; i < close_a.size(); ++i) {
    for (const auto* close : {&close_a[i], &close_b[i]}) {
      for (Index k : *close) {
        if (kept[static_cast<std::size_t>(k)]) kept[i] = 0;
      }
    }
    if (kept[i]) rows.push_back(static_cast<Index>(i));
  }
  if (rows.size() < 3) {
    throw EstimatorInputError("fewer than 3 rows remain after joint deduplication");
  }
  return rows;
}

}  // namespace lingdim
