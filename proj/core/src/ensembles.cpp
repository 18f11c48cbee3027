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

#include "qlab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qlab {

namespace {

std::vector<Projector> projectors_of(const std::vector<PureState>& states) {
  std::vector<Projector> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(Projector::onto(s));
  return out;
}

// <psi| X |psi> for Hermitian X is real; the imaginary part is rounding.
double expectation(const PureState& state, const Matrix& x) {
  return (state.amplitudes().adjoint() * x * state.amplitudes())(0, 0).real();
}

}  // namespace

Ensemble::Ensemble(std::vector<PureState> states, std::vector<double> probs, double prob_sum_tol)
    : states_(std::move(states)), probs_(std::move(probs)) {
  if (states_.empty()) throw Error("Ensemble: no states");
  if (states_.size() != probs_.size()) throw Error("Ensemble: states and probabilities differ in length");
  dim_ = states_.front().dim();
  for (const auto& s : states_)
    if (s.dim() != dim_) throw DimensionMismatch("Ensemble", dim_, s.dim());
  for (double p : probs_)
    if (!(p >= 0.0)) throw Error("Ensemble: probabilities must be nonnegative");
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > prob_sum_tol) throw Error("Ensemble: probabilities do not sum to 1");
  projectors_ = projectors_of(states_);
}

Ensemble Ensemble::uniform(std::vector<PureState> states) {
  const double p = 1.0 / static_cast<double>(states.size());
  std::vector<double> probs(states.size(), p);
  return Ensemble(std::move(states), std::move(probs));
}

EnsembleMap::EnsembleMap(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error("EnsembleMap: no terms");
  dim_ = terms_.front().projector.dim();
  for (const auto& t : terms_) {
    if (t.projector.dim() != dim_) throw DimensionMismatch("EnsembleMap", dim_, t.projector.dim());
    if (!(t.weight >= 0.0)) throw Error("EnsembleMap: weights must be nonnegative");
  }
}

Matrix EnsembleMap::apply(const Matrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionMismatch("EnsembleMap::apply", dim_, x.rows());
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& t : terms_) {
    const Matrix& p = t.projector.matrix();
    const Complex overlap = (p.transpose().cwiseProduct(x)).sum();  // tr(P X)
    out += (t.weight * overlap) * p;
  }
  return out;
}

ReconstructionStrategy::ReconstructionStrategy(std::vector<DensityOperator> outputs) : outputs_(std::move(outputs)) {
  if (outputs_.empty()) throw Error("ReconstructionStrategy: no outputs");
}

const char* to_string(FidelityMethod method) {
  switch (method) {
    case FidelityMethod::formula:
      return "formula";
    case FidelityMethod::optimizer:
      return "optimizer";
    case FidelityMethod::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

FidelityReport::FidelityReport(double value, FidelityMethod method, std::optional<double> standard_error, Meta meta)
    : value_(value), method_(method), standard_error_(standard_error), meta_(std::move(meta)) {
  if (!(value_ >= -1e-12 && value_ <= 1.0 + 1e-9)) throw Error("FidelityReport: value outside [0, 1]");
  value_ = std::max(value_, 0.0);
  if (standard_error_.has_value() != (method_ == FidelityMethod::monte_carlo))
    throw Error("FidelityReport: standard error is required exactly for Monte Carlo results");
  if (standard_error_ && !(*standard_error_ >= 0.0)) throw Error("FidelityReport: negative standard error");
}

FidelityReport FidelityReport::formula(double value, Meta meta) {
  return FidelityReport(value, FidelityMethod::formula, std::nullopt, std::move(meta));
}

FidelityReport FidelityReport::optimizer(double value, Meta meta) {
  return FidelityReport(value, FidelityMethod::optimizer, std::nullopt, std::move(meta));
}

FidelityReport FidelityReport::monte_carlo(double value, double standard_error, Meta meta) {
  return FidelityReport(value, FidelityMethod::monte_carlo, standard_error, std::move(meta));
}

HermitianOperator apply_ensemble_map(const EnsembleMap& map, const HermitianOperator& x) {
  if (x.dim() != map.dim()) throw DimensionMismatch("apply_ensemble_map", map.dim(), x.dim());
  return HermitianOperator(map.apply(x.matrix()));
}

EnsembleMap ensemble_map_of(const Ensemble& ensemble) {
  std::vector<EnsembleMap::Term> terms;
  terms.reserve(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) terms.push_back({ensemble.probs()[i], ensemble.projectors()[i]});
  return EnsembleMap(std::move(terms));
}

FidelityReport average_fidelity(const Ensemble& ensemble, const Povm& povm, const ReconstructionStrategy& strategy) {
  if (povm.dim() != ensemble.dim()) throw DimensionMismatch("average_fidelity", ensemble.dim(), povm.dim());
  if (strategy.size() != povm.size())
    throw Error("average_fidelity: strategy has " + std::to_string(strategy.size()) + " outputs for " +
                std::to_string(povm.size()) + " outcomes");
  for (const auto& s : strategy.outputs())
    if (s.dim() != ensemble.dim()) throw DimensionMismatch("average_fidelity", ensemble.dim(), s.dim());

  double total = 0.0;
  for (std::size_t b = 0; b < povm.size(); ++b) {
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      const PureState& psi = ensemble.states()[i];
      total += ensemble.probs()[i] * expectation(psi, povm[b].matrix()) * expectation(psi, strategy[b].matrix());
    }
  }
  return FidelityReport::formula(total, {{"quantity", "average_fidelity"}});
}

FidelityReport achievable_fidelity(const Ensemble& ensemble, const Povm& povm) {
  if (povm.dim() != ensemble.dim()) throw DimensionMismatch("achievable_fidelity", ensemble.dim(), povm.dim());
  const EnsembleMap map = ensemble_map_of(ensemble);
  double total = 0.0;
  for (const auto& e : povm.elements()) total += largest_eigenvalue(apply_ensemble_map(map, e));
  return FidelityReport::formula(total, {{"quantity", "achievable_fidelity"}});
}

ReconstructionStrategy optimal_reconstruction(const Ensemble& ensemble, const Povm& povm) {
  if (povm.dim() != ensemble.dim()) throw DimensionMismatch("optimal_reconstruction", ensemble.dim(), povm.dim());
  const EnsembleMap map = ensemble_map_of(ensemble);
  std::vector<DensityOperator> outputs;
  outputs.reserve(povm.size());
  for (const auto& e : povm.elements()) {
    const Eigenpair top = top_eigenpair(apply_ensemble_map(map, e));
    outputs.push_back(DensityOperator::pure(PureState::normalized(top.vector)));
  }
  return ReconstructionStrategy(std::move(outputs));
}

ReconstructionStrategy projective_reproduction(const Povm& povm) {
  std::vector<DensityOperator> outputs;
  for (const auto& element : rank_one_decomposition(povm)) outputs.push_back(DensityOperator::pure(element.direction));
  return ReconstructionStrategy(std::move(outputs));
}

std::vector<Matrix> hermitian_operator_basis(int dim) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(dim) * dim);
  for (int k = 0; k < dim; ++k) {
    Matrix e = Matrix::Zero(dim, dim);
    e(k, k) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int k = 0; k < dim; ++k) {
    for (int l = k + 1; l < dim; ++l) {
      Matrix sym = Matrix::Zero(dim, dim);
      sym(k, l) = 1.0;
      sym(l, k) = 1.0;
      basis.push_back(std::move(sym));
      Matrix anti = Matrix::Zero(dim, dim);
      anti(k, l) = Complex(0.0, 1.0);
      anti(l, k) = Complex(0.0, -1.0);
      basis.push_back(std::move(anti));
    }
  }
  return basis;
}

MapComparison maps_equal(int dim, const LinearMap& a, const LinearMap& b, int n_probes, Rng& rng, double tol) {
  double residual = 0.0;
  for (const auto& x : hermitian_operator_basis(dim)) residual = std::max(residual, operator_norm(a(x) - b(x)));
  for (int k = 0; k < n_probes; ++k) {
    const Matrix x = random_hermitian(dim, rng).matrix();
    residual = std::max(residual, operator_norm(a(x) - b(x)));
  }
  return {residual < tol, residual};
}

MapComparison maps_equal(const EnsembleMap& a, const EnsembleMap& b, int n_probes, Rng& rng, double tol) {
  if (a.dim() != b.dim()) throw DimensionMismatch("maps_equal", a.dim(), b.dim());
  return maps_equal(
      a.dim(), [&](const Matrix& x) { return a.apply(x); }, [&](const Matrix& x) { return b.apply(x); }, n_probes, rng,
      tol);
}

}  // namespace qlab
