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

#pragma once

// Signal ensembles, their ensemble maps, and intercept-resend fidelities.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlab/operators.hpp"

namespace qlab {

inline constexpr double kProbabilitySumTol = 1e-12;

/// Pure-state signals |psi_i> sent with prior probabilities pi_i.
/// Repeated states are kept as given.
class Ensemble {
 public:
  Ensemble(std::vector<PureState> states, std::vector<double> probs,
           double prob_sum_tol = kProbabilitySumTol);

  static Ensemble uniform(std::vector<PureState> states);

  int dim() const { return dim_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<PureState>& states() const { return states_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<Projector>& projectors() const { return projectors_; }

 private:
  int dim_;
  std::vector<PureState> states_;
  std::vector<double> probs_;
  std::vector<Projector> projectors_;
};

/// X -> sum_k w_k P_k X P_k over rank-1 projectors P_k.
class EnsembleMap {
 public:
  struct Term {
    double weight;
    Projector projector;
  };

  explicit EnsembleMap(std::vector<Term> terms);

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Works on arbitrary (not necessarily Hermitian) operators. Uses
  /// P X P = tr(P X) P, valid for rank-1 P.
  Matrix apply(const Matrix& x) const;

 private:
  int dim_;
  std::vector<Term> terms_;
};

class ReconstructionStrategy {
 public:
  explicit ReconstructionStrategy(std::vector<DensityOperator> outputs);

  std::size_t size() const { return outputs_.size(); }
  const std::vector<DensityOperator>& outputs() const { return outputs_; }
  const DensityOperator& operator[](std::size_t b) const { return outputs_[b]; }

 private:
  std::vector<DensityOperator> outputs_;
};

enum class FidelityMethod { formula, optimizer, monte_carlo };

const char* to_string(FidelityMethod method);

/// A fidelity value with its provenance. Monte Carlo results, and only
/// those, carry a standard error.
class FidelityReport {
 public:
  using Meta = std::map<std::string, std::string>;

  static FidelityReport formula(double value, Meta meta = {});
  static FidelityReport optimizer(double value, Meta meta = {});
  static FidelityReport monte_carlo(double value, double standard_error, Meta meta = {});

  double value() const { return value_; }
  FidelityMethod method() const { return method_; }
  const std::optional<double>& standard_error() const { return standard_error_; }
  const Meta& meta() const { return meta_; }

 private:
  FidelityReport(double value, FidelityMethod method, std::optional<double> standard_error, Meta meta);

  double value_;
  FidelityMethod method_;
  std::optional<double> standard_error_;
  Meta meta_;
};

HermitianOperator apply_ensemble_map(const EnsembleMap& map, const HermitianOperator& x);

EnsembleMap ensemble_map_of(const Ensemble& ensemble);

/// sum_{b,i} pi_i tr(Pi_i E_b) tr(Pi_i sigma_b)
FidelityReport average_fidelity(const Ensemble& ensemble, const Povm& povm, const ReconstructionStrategy& strategy);

/// sum_b lambda_1(Psi(E_b)): the average fidelity maximized over resend
/// strategies for a fixed measurement.
FidelityReport achievable_fidelity(const Ensemble& ensemble, const Povm& povm);

/// Resends the top eigenvector of Psi(E_b) for each outcome b.
ReconstructionStrategy optimal_reconstruction(const Ensemble& ensemble, const Povm& povm);

/// Resends the normalized direction of each rank-1 element. Throws on an
/// element that is not rank-1, including zero elements.
ReconstructionStrategy projective_reproduction(const Povm& povm);

using LinearMap = std::function<Matrix(const Matrix&)>;

struct MapComparison {
  bool equal;
  double residual;  // max operator-norm difference over basis and probes
};

/// Hermitian operator basis of L(H_d): E_kk, E_kl + E_lk, i(E_kl - E_lk).
std::vector<Matrix> hermitian_operator_basis(int dim);

/// Compares two linear maps on the Hermitian basis (decisive for linear
/// maps) and on `n_probes` random Hermitian operators.
MapComparison maps_equal(int dim, const LinearMap& a, const LinearMap& b, int n_probes, Rng& rng,
                         double tol = kStructuralTol);

MapComparison maps_equal(const EnsembleMap& a, const EnsembleMap& b, int n_probes, Rng& rng,
                         double tol = kStructuralTol);

}  // namespace qlab
