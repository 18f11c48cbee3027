// Copyright 2026 The qlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qlab/composite.hpp"

#include <algorithm>
#include <sstream>

namespace qlab {

ProductEnsemble product_ensemble(const Ensemble& left, const Ensemble& right) {
  std::vector<PureState> states;
  std::vector<double> probs;
  states.reserve(left.size() * right.size());
  probs.reserve(left.size() * right.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      states.push_back(tensor(left.states()[i], right.states()[j]));
      probs.push_back(left.probs()[i] * right.probs()[j]);
    }
  }
  return {left, right, Ensemble(std::move(states), std::move(probs))};
}

double composite_quantumness(int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw Error("composite_quantumness: dimensions must be >= 1");
  return 2.0 / (static_cast<double>(d1) * d2 + 1.0);
}

double product_fidelity_value(int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw Error("product_fidelity_value: dimensions must be >= 1");
  return (2.0 / (d1 + 1.0)) * (2.0 / (d2 + 1.0));
}

Eigen::VectorXd schmidt_coefficients(const PureState& state, int d1, int d2) {
  if (state.dim() != d1 * d2) throw DimensionMismatch("schmidt_coefficients", d1 * d2, state.dim());
  Matrix m(d1, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) m(i, j) = state.amplitudes()(i * d2 + j);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

int schmidt_rank(const PureState& state, int d1, int d2, double tol) {
  const Eigen::VectorXd s = schmidt_coefficients(state, d1, d2);
  return static_cast<int>((s.array() > tol).count());
}

EntanglementWitness entanglement_witness(const Ensemble& ensemble, int d1, int d2) {
  EntanglementWitness w{0, 0, 0.0};
  for (const auto& s : ensemble.states()) {
    const Eigen::VectorXd coeffs = schmidt_coefficients(s, d1, d2);
    const int rank = static_cast<int>((coeffs.array() > 1e-10).count());
    if (rank > 1) ++w.entangled_states;
    w.max_schmidt_rank = std::max(w.max_schmidt_rank, rank);
    if (coeffs.size() > 1) w.max_second_schmidt = std::max(w.max_second_schmidt, coeffs(1));
  }
  return w;
}

namespace {

std::string failure_message(int dim, double potential) {
  std::ostringstream msg;
  msg << "SIC fiducial search failed in d = " << dim << " (best frame potential " << potential << ")";
  return msg.str();
}

}  // namespace

SearchFailure::SearchFailure(int dim, double best_potential)
    : Error(failure_message(dim, best_potential)), dim_(dim), best_potential_(best_potential) {}

Ensemble sic_ensemble_for(int dim, FiducialSearchConfig cfg) {
  if (dim < 1) throw Error("sic_ensemble_for: dim must be >= 1");
  if (dim == 1) return Ensemble({PureState::basis(1, 0)}, {1.0});
  cfg.dim = dim;
  FiducialSearchResult found = find_fiducial(cfg);
  if (!found.success) throw SearchFailure(dim, found.potential);
  return found.sic->base();
}

QuantumnessGapReport entanglement_gap_experiment(int d1, int d2, const PovmSearchConfig& search,
                                                 FiducialSearchConfig fiducial) {
  if (d1 < 1 || d2 < 1) throw Error("entanglement_gap_experiment: dimensions must be >= 1");
  QuantumnessGapReport report{};
  report.d1 = d1;
  report.d2 = d2;
  report.product_value = product_fidelity_value(d1, d2);
  report.composite_quantumness = composite_quantumness(d1, d2);
  report.gap = report.product_value - report.composite_quantumness;
  report.degenerate = d1 == 1 || d2 == 1;

  const Ensemble left = sic_ensemble_for(d1, fiducial);
  const Ensemble right = sic_ensemble_for(d2, fiducial);
  const Ensemble composite_sic = sic_ensemble_for(d1 * d2, fiducial);
  const ProductEnsemble product = product_ensemble(left, right);

  PovmSearchConfig cfg = search;
  cfg.n_outcomes = std::max(cfg.n_outcomes, d1 * d2);
  report.optimizer_value = accessible_fidelity_search(product.joint, cfg).report.value();

  Rng rng = make_stream(search.seed, 0x9a9ULL);
  const auto left_povm = random_rank_one_povm(d1, d1 * d1, rng);
  const auto right_povm = random_rank_one_povm(d2, d2 * d2, rng);
  std::vector<RankOnePovmElement> product_povm;
  for (const auto& a : left_povm)
    for (const auto& b : right_povm) product_povm.push_back({a.weight * b.weight, tensor(a.direction, b.direction)});
  report.product_povm_fidelity = achievable_fidelity(product.joint, Povm::from_rank_one(product_povm)).value();

  const int dc = d1 * d2;
  const auto composite_povm = random_rank_one_povm(dc, dc * dc, rng);
  report.composite_sic_fidelity = achievable_fidelity(composite_sic, Povm::from_rank_one(composite_povm)).value();
  report.witness = entanglement_witness(composite_sic, d1, d2);
  return report;
}

}  // namespace qlab
