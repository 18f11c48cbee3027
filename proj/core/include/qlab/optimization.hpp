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

// Numerical searches: accessible fidelity over rank-1 POVMs, SIC fiducials
// by frame-potential minimization, and Haar Monte Carlo of the random
// von Neumann intercept-resend strategy.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "qlab/ensembles.hpp"
#include "qlab/structured_states.hpp"

namespace qlab {

struct PovmSearchConfig {
  int n_outcomes = 4;
  int n_restarts = 8;
  int max_iters = 2000;
  double tol = 1e-12;
  std::uint64_t seed = 0;

  /// n_outcomes = d^2, everything else default.
  static PovmSearchConfig defaults_for(int dim, std::uint64_t seed = 0);
  void validate() const;
};

struct TracePoint {
  int restart;
  int iter;
  double value;
};

struct RestartDiagnostics {
  int restart;
  double value;
  int iterations;
  bool converged;
};

struct PovmSearchResult {
  FidelityReport report;  // method = optimizer; a lower bound on the accessible fidelity
  Povm povm;
  std::vector<RankOnePovmElement> elements;
  std::vector<RestartDiagnostics> restarts;
  std::vector<TracePoint> trace;  // accepted iterates, non-decreasing per restart
};

/// Objective sum_b lambda_1(Psi(E_b)) for the POVM built from `vectors` by
/// povm_from_vectors(). When `gradient` is non-null it receives, per vector,
/// the ascent direction 2 dF/d(conj v_b), taking the deterministic top
/// eigenvector of each Psi(E_b) as the subgradient at eigenvalue crossings.
double povm_search_objective(const EnsembleMap& map, std::span<const Vector> vectors,
                             std::vector<Vector>* gradient = nullptr);

/// Multi-restart analytic-gradient ascent over rank-1 POVMs with
/// cfg.n_outcomes elements. Restarts run in parallel with per-restart
/// generators, so the result does not depend on QLAB_THREADS.
PovmSearchResult accessible_fidelity_search(const Ensemble& ensemble, const PovmSearchConfig& cfg);

/// sum_{i != j} (|<psi_i|psi_j>|^2 - 1/(d+1))^2 over ordered pairs.
double frame_potential(std::span<const PureState> states);

struct FiducialSearchConfig {
  int dim = 2;
  int n_restarts = 200;
  int max_iters = 1000;  // residual evaluations per restart
  double grad_tol = 1e-12;
  double potential_tol = 1e-20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FiducialSearchResult {
  bool success;
  PureState fiducial;  // best found; first amplitude real and positive
  std::optional<SicEnsemble> sic;
  double potential;  // frame potential of the fiducial's orbit
  int restarts_used;
  std::string message;
};

/// Minimizes the frame potential of the Weyl-Heisenberg orbit over the
/// fiducial with Levenberg-Marquardt on the d^2 - 1 overlap residuals.
/// Never throws on search failure; check `success`.
FiducialSearchResult find_fiducial(const FiducialSearchConfig& cfg);

struct MonteCarloConfig {
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Mean over Haar-random von Neumann measurements G of
/// sum_{b,i} pi_i (tr Pi_i G_b)^2, with standard error sd / sqrt(n).
FidelityReport haar_average_fidelity(const Ensemble& ensemble, const MonteCarloConfig& cfg);

/// 2 / (d + 1).
double haar_integral_closed_form(int dim);

using ExactRational = boost::rational<boost::multiprecision::cpp_int>;

/// d (d-1)! 2! / (d+1)! in exact integer arithmetic.
ExactRational haar_integral_factorial_form(int dim);

}  // namespace qlab
