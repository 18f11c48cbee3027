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

// SIC ensembles from Weyl-Heisenberg orbits, complete sets of mutually
// unbiased bases, and the identities of the uniform-twirl map
//   Phi(X) = ((tr X) I + X) / (d (d + 1)).

#include <vector>

#include "qlab/ensembles.hpp"
#include "qlab/operators.hpp"

namespace qlab {

inline constexpr double kSicOverlapTol = 1e-9;

struct WeylHeisenbergIndex {
  int dim;
  int shift;  // power of X, X|k> = |k+1 mod d>
  int boost;  // power of Z, Z|k> = w^k |k>, w = exp(2 pi i / d)

  /// Throws unless dim >= 1 and 0 <= shift, boost < dim.
  void validate() const;
};

/// X^shift Z^boost as a dense unitary.
Matrix wh_displacement(const WeylHeisenbergIndex& idx);

/// X^shift Z^boost applied to a vector in O(d).
Vector apply_displacement(const WeylHeisenbergIndex& idx, const Vector& v);

class SicEnsemble {
 public:
  /// Wraps an ensemble of d^2 states with uniform weights. The overlap
  /// residual is recomputed from the states.
  static SicEnsemble from_ensemble(Ensemble base, PureState fiducial);

  const Ensemble& base() const { return base_; }
  const PureState& fiducial() const { return fiducial_; }
  double overlap_residual() const { return overlap_residual_; }
  int dim() const { return base_.dim(); }
  bool certified() const { return overlap_residual_ < kSicOverlapTol; }

 private:
  SicEnsemble(Ensemble base, PureState fiducial, double residual);

  Ensemble base_;
  PureState fiducial_;
  double overlap_residual_;
};

/// max_{i != j} | |<psi_i|psi_j>|^2 - 1/(d+1) |
double sic_overlap_residual(const std::vector<PureState>& states);

/// Orbit {X^a Z^b |fiducial>}, ordered by a * d + b, uniform weights 1/d^2.
/// The result is not required to be a SIC; check overlap_residual().
SicEnsemble sic_from_fiducial(const PureState& fiducial);

/// Real Gram matrix G_ij = tr(P_i P_j).
RealMatrix gram_matrix(const std::vector<Projector>& projectors);

/// Rank from singular values above `rel_tol` times the largest.
int numerical_rank(const RealMatrix& m, double rel_tol = 1e-10);

struct SicCertificate {
  double overlap_residual;
  int gram_rank;
  int expected_rank;
  double phi_map_residual;
  bool map_equals_phi;
  bool passed;  // residual < 1e-9 and full Gram rank
};

SicCertificate verify_sic(const SicEnsemble& sic);

HermitianOperator phi_closed_form(int dim, const HermitianOperator& x);
Matrix phi_closed_form(int dim, const Matrix& x);

/// || Phi(rho) - Delta_lambda(rho) / d ||, lambda = 1/(d+1), where
/// Delta_lambda(rho) = lambda rho + (1 - lambda) I / d.
double depolarizing_consistency(int dim, const DensityOperator& rho);

/// Outcome distribution of the SIC-POVM {Pi_i / d}.
class SicProbabilities {
 public:
  /// Validates nonnegativity, unit sum within 1e-12 and p(i) <= 1/d + 1e-10.
  SicProbabilities(int dim, std::vector<double> probs);

  int dim() const { return dim_; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  int dim_;
  std::vector<double> probs_;
};

/// p(i) = tr(rho Pi_i) / d. Throws unless the SIC is certified.
SicProbabilities sic_probabilities(const SicEnsemble& sic, const DensityOperator& rho);

/// rho = (d+1) sum_i p(i) Pi_i - I. Throws if the result is not a density
/// operator within 1e-8.
DensityOperator reconstruct_density(const SicEnsemble& sic, const SicProbabilities& p);

/// d (d+1) sum_h p(h)^2 - 1, the purity tr(rho^2) of the reconstructed state.
double purity_from_probabilities(int dim, const SicProbabilities& p);

bool is_prime(int n);

class MubCollection {
 public:
  /// Each basis must hold exactly `dim` states of dimension `dim`.
  MubCollection(int dim, std::vector<std::vector<PureState>> bases);

  int dim() const { return dim_; }
  const std::vector<std::vector<PureState>>& bases() const { return bases_; }

 private:
  int dim_;
  std::vector<std::vector<PureState>> bases_;
};

struct MubResiduals {
  double intra;  // max |tr(P^j_i P^j_k) - delta_ik|
  double inter;  // max |tr(P^j_i P^l_k) - 1/d|, j != l
};

MubResiduals mub_residuals(const MubCollection& mubs);

/// d + 1 mutually unbiased bases for prime d. Throws for non-prime d.
MubCollection mub_construct(int dim);

/// All d(d+1) states with uniform weight 1/(d(d+1)).
Ensemble mub_ensemble(const MubCollection& mubs);

/// Checks whether an ensemble of at most d^2 rank-1 states decomposes the
/// uniform-twirl map, and if so whether it is forced to be a SIC.
struct PhiDecompositionReport {
  std::size_t n_states;
  int gram_rank;
  bool impossible;  // fewer than d^2 states or linearly dependent
  double map_residual;
  bool map_equals_phi;
  /// Coefficients c solving sum_i c_i Pi_i = I / d in the state basis;
  /// only filled when the states are linearly independent.
  std::vector<double> forced_weights;
  double weight_residual;   // max |pi_i - 1/d^2| and |c_i - 1/d^2|
  double overlap_residual;  // max_{i != j} |tr(Pi_i Pi_j) - 1/(d+1)|
  bool conclusion_verified;  // map equals Phi and both residuals <= 1e-9
};

PhiDecompositionReport phi_decomposition_check(const Ensemble& candidate);

}  // namespace qlab
