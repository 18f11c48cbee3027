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

// Product ensembles on H_{d1} (x) H_{d2} and the gap between the best
// product-signal fidelity and the quantumness of the composite space.

#include "qlab/ensembles.hpp"
#include "qlab/optimization.hpp"

namespace qlab {

struct ProductEnsemble {
  Ensemble left;
  Ensemble right;
  Ensemble joint;  // |psi_i> (x) |chi_j> with probability pi_i rho_j, index i * |right| + j
};

ProductEnsemble product_ensemble(const Ensemble& left, const Ensemble& right);

/// 2 / (d1 d2 + 1).
double composite_quantumness(int d1, int d2);

/// (2 / (d1 + 1)) (2 / (d2 + 1)).
double product_fidelity_value(int d1, int d2);

/// Singular values of the d1 x d2 amplitude matrix, descending.
Eigen::VectorXd schmidt_coefficients(const PureState& state, int d1, int d2);

/// Number of Schmidt coefficients above `tol`.
int schmidt_rank(const PureState& state, int d1, int d2, double tol = 1e-10);

struct EntanglementWitness {
  int entangled_states;
  int max_schmidt_rank;
  double max_second_schmidt;  // largest second Schmidt coefficient found
};

EntanglementWitness entanglement_witness(const Ensemble& ensemble, int d1, int d2);

class SearchFailure : public Error {
 public:
  SearchFailure(int dim, double best_potential);
  int dim() const { return dim_; }
  double best_potential() const { return best_potential_; }

 private:
  int dim_;
  double best_potential_;
};

/// SIC ensemble in `dim`; dim = 1 gives the single state |0>. Throws
/// SearchFailure when the fiducial search fails.
Ensemble sic_ensemble_for(int dim, FiducialSearchConfig cfg);

struct QuantumnessGapReport {
  int d1;
  int d2;
  double product_value;          // (2/(d1+1)) (2/(d2+1))
  double composite_quantumness;  // 2/(d1 d2 + 1)
  double gap;                    // product_value - composite_quantumness
  double optimizer_value;        // search on the product-SIC ensemble
  double product_povm_fidelity;  // product-SIC ensemble under a random product rank-1 POVM
  double composite_sic_fidelity; // composite SIC under a random rank-1 POVM
  EntanglementWitness witness;   // over the composite SIC states
  bool degenerate;               // d1 == 1 or d2 == 1
};

/// Runs the composite-space comparison. `search` configures the optimizer
/// on the product-SIC ensemble (n_outcomes is raised to d1 d2 if smaller);
/// `fiducial` supplies budgets and seed for the SIC searches (dim ignored).
QuantumnessGapReport entanglement_gap_experiment(int d1, int d2, const PovmSearchConfig& search,
                                                 FiducialSearchConfig fiducial = {});

}  // namespace qlab
