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

#include "qlab/optimization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "qlab/parallel.hpp"

namespace qlab {

// ---------------------------------------------------------------------------
// Accessible fidelity search

PovmSearchConfig PovmSearchConfig::defaults_for(int dim, std::uint64_t seed) {
  PovmSearchConfig cfg;
  cfg.n_outcomes = dim * dim;
  cfg.seed = seed;
  return cfg;
}

void PovmSearchConfig::validate() const {
  if (n_outcomes < 1) throw Error("PovmSearchConfig: n_outcomes must be >= 1");
  if (n_restarts < 1) throw Error("PovmSearchConfig: n_restarts must be >= 1");
  if (max_iters < 1) throw Error("PovmSearchConfig: max_iters must be >= 1");
  if (!(tol > 0.0)) throw Error("PovmSearchConfig: tol must be positive");
}

double povm_search_objective(const EnsembleMap& map, std::span<const Vector> vectors, std::vector<Vector>* gradient) {
  const int d = map.dim();
  Matrix frame = Matrix::Zero(d, d);
  for (const auto& v : vectors) frame += v * v.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> frame_eig(frame);
  const Eigen::VectorXd& a = frame_eig.eigenvalues();
  if (!(a.minCoeff() > 1e-14 * std::max(1.0, a.maxCoeff())))
    return -std::numeric_limits<double>::infinity();
  const Matrix& u = frame_eig.eigenvectors();
  const Eigen::VectorXd root = a.cwiseSqrt();
  const Matrix s = u * root.cwiseInverse().asDiagonal() * u.adjoint();  // A^{-1/2}

  double value = 0.0;
  std::vector<Vector> w(vectors.size()), y(vectors.size());
  for (std::size_t b = 0; b < vectors.size(); ++b) {
    w[b] = s * vectors[b];
    const Matrix element = w[b] * w[b].adjoint();
    const Matrix image = map.apply(element);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (image + image.adjoint()));
    value += eig.eigenvalues()(d - 1);
    if (gradient) {
      const Vector top = eig.eigenvectors().col(d - 1);
      const Matrix k = map.apply(top * top.adjoint());  // Psi is self-adjoint
      y[b] = k * w[b];
    }
  }
  if (!gradient) return value;

  // Chain rule through A^{-1/2}: with C = sum_b (v_b y_b^dagger + y_b v_b^dagger),
  // the frame contribution is D = U (U^dagger C U o Delta) U^dagger where
  // Delta_ij is the divided difference of a^{-1/2}.
  Matrix c = Matrix::Zero(d, d);
  for (std::size_t b = 0; b < vectors.size(); ++b) c += vectors[b] * y[b].adjoint() + y[b] * vectors[b].adjoint();
  Matrix c_eig = u.adjoint() * c * u;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c_eig(i, j) *= -1.0 / (root(i) * root(j) * (root(i) + root(j)));
  const Matrix dmat = u * c_eig * u.adjoint();

  gradient->resize(vectors.size());
  for (std::size_t b = 0; b < vectors.size(); ++b) (*gradient)[b] = 2.0 * (s * y[b] + dmat * vectors[b]);
  return value;
}

namespace {

constexpr double kMinStep = 1e-10;
constexpr double kMaxStep = 1.0;

double squared_norm(const std::vector<Vector>& vs) {
  double total = 0.0;
  for (const auto& v : vs) total += v.squaredNorm();
  return total;
}

struct RestartOutcome {
  double value;
  std::vector<Vector> vectors;
  RestartDiagnostics diagnostics;
  std::vector<TracePoint> trace;
};

RestartOutcome ascend(const EnsembleMap& map, const PovmSearchConfig& cfg, int restart) {
  const int d = map.dim();
  Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(restart));
  std::vector<Vector> v(cfg.n_outcomes, Vector(d));
  for (auto& vec : v)
    for (int k = 0; k < d; ++k) vec(k) = complex_gaussian(rng);

  // The objective is invariant under a global rescaling of all vectors.
  auto rescale = [d](std::vector<Vector>& vs) {
    const double factor = std::sqrt(d / squared_norm(vs));
    for (auto& vec : vs) vec *= factor;
  };
  rescale(v);

  std::vector<Vector> grad;
  double value = povm_search_objective(map, v, &grad);
  RestartOutcome out{value, {}, {restart, value, 0, false}, {}};
  out.trace.push_back({restart, 0, value});

  double step = 0.1;
  int iter = 0;
  std::vector<Vector> candidate(v.size());
  std::vector<Vector> candidate_grad;
  while (iter < cfg.max_iters) {
    ++iter;
    const double gnorm = std::sqrt(squared_norm(grad));
    if (!(gnorm > 1e-14)) {
      out.diagnostics.converged = true;
      break;
    }
    const double scale = step * std::sqrt(squared_norm(v)) / gnorm;
    for (std::size_t b = 0; b < v.size(); ++b) candidate[b] = v[b] + scale * grad[b];
    const double trial = povm_search_objective(map, candidate, &candidate_grad);
    if (trial > value) {
      const double gain = trial - value;
      v.swap(candidate);
      grad.swap(candidate_grad);
      // only the gradient direction is used, so it survives the rescaling
      rescale(v);
      value = trial;
      out.trace.push_back({restart, iter, value});
      step = std::min(kMaxStep, step * 1.5);
      if (gain < cfg.tol) {
        out.diagnostics.converged = true;
        break;
      }
    } else {
      step *= 0.5;
      if (step < kMinStep) {
        out.diagnostics.converged = true;
        break;
      }
    }
  }
  out.value = value;
  out.vectors = std::move(v);
  out.diagnostics.value = value;
  out.diagnostics.iterations = iter;
  return out;
}

}  // namespace

PovmSearchResult accessible_fidelity_search(const Ensemble& ensemble, const PovmSearchConfig& cfg) {
  cfg.validate();
  if (cfg.n_outcomes < ensemble.dim())
    throw Error("accessible_fidelity_search: a complete rank-1 POVM needs at least d outcomes");
  const EnsembleMap map = ensemble_map_of(ensemble);

  std::vector<std::optional<RestartOutcome>> outcomes(cfg.n_restarts);
  parallel_for(outcomes.size(), [&](std::size_t r) { outcomes[r] = ascend(map, cfg, static_cast<int>(r)); });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r]->value > outcomes[best]->value) best = r;

  std::vector<RankOnePovmElement> elements = rank_one_povm_from_vectors(outcomes[best]->vectors);
  Povm povm = povm_from_vectors(outcomes[best]->vectors);
  const double value = achievable_fidelity(ensemble, povm).value();

  std::vector<RestartDiagnostics> diagnostics;
  std::vector<TracePoint> trace;
  for (auto& o : outcomes) {
    diagnostics.push_back(o->diagnostics);
    trace.insert(trace.end(), o->trace.begin(), o->trace.end());
  }
  FidelityReport report = FidelityReport::optimizer(
      std::min(value, 1.0 + 1e-9), {{"quantity", "accessible_fidelity"},
                                    {"variant", "analytic-gradient-ascent"},
                                    {"bound", "lower"},
                                    {"n_outcomes", std::to_string(cfg.n_outcomes)},
                                    {"n_restarts", std::to_string(cfg.n_restarts)},
                                    {"best_restart", std::to_string(best)},
                                    {"seed", std::to_string(cfg.seed)}});
  return {std::move(report), std::move(povm), std::move(elements), std::move(diagnostics), std::move(trace)};
}

// ---------------------------------------------------------------------------
// SIC fiducial search

double frame_potential(std::span<const PureState> states) {
  if (states.empty()) return 0.0;
  const double target = 1.0 / (states.front().dim() + 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (i == j) continue;
      const double dev = std::norm(states[i].amplitudes().dot(states[j].amplitudes())) - target;
      total += dev * dev;
    }
  }
  return total;
}

void FiducialSearchConfig::validate() const {
  if (dim < 2) throw Error("FiducialSearchConfig: dim must be >= 2");
  if (n_restarts < 1) throw Error("FiducialSearchConfig: n_restarts must be >= 1");
  if (max_iters < 1) throw Error("FiducialSearchConfig: max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw Error("FiducialSearchConfig: grad_tol must be positive");
  if (!(potential_tol >= 0.0)) throw Error("FiducialSearchConfig: potential_tol must be nonnegative");
}

namespace {

// Gauge-fixed fiducial: y = (1, x_0 + i x_1, x_2 + i x_3, ...), psi = y / |y|.
Vector fiducial_from_params(const Eigen::VectorXd& x, int d) {
  Vector y(d);
  y(0) = 1.0;
  for (int k = 1; k < d; ++k) y(k) = Complex(x(2 * (k - 1)), x(2 * (k - 1) + 1));
  return y / y.norm();
}

// Residuals d (|<psi|D_ab psi>|^2 - 1/(d+1)) over (a, b) != (0, 0); their
// squared norm is the frame potential of the orbit.
struct OrbitResiduals : Eigen::DenseFunctor<double> {
  int d;

  explicit OrbitResiduals(int dim) : DenseFunctor<double>(2 * dim - 2, dim * dim - 1), d(dim) {}

  int operator()(const InputType& x, ValueType& fvec) const {
    const Vector psi = fiducial_from_params(x, d);
    const double target = 1.0 / (d + 1.0);
    int row = 0;
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (a == 0 && b == 0) continue;
        fvec(row++) = d * (std::norm(psi.dot(apply_displacement({d, a, b}, psi))) - target);
      }
    }
    return 0;
  }

  int df(const InputType& x, JacobianType& fjac) const {
    Vector y(d);
    y(0) = 1.0;
    for (int k = 1; k < d; ++k) y(k) = Complex(x(2 * (k - 1)), x(2 * (k - 1) + 1));
    const double ynorm = y.norm();
    const Vector psi = y / ynorm;

    // Tangent vectors dpsi/dx_p = (dy - psi Re<psi, dy>) / |y|.
    std::vector<Vector> tangents;
    tangents.reserve(inputs());
    for (int k = 1; k < d; ++k) {
      for (const Complex unit : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        Vector dy = Vector::Zero(d);
        dy(k) = unit;
        tangents.push_back((dy - psi * psi.dot(dy).real()) / ynorm);
      }
    }

    int row = 0;
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (a == 0 && b == 0) continue;
        const WeylHeisenbergIndex idx{d, a, b};
        const Vector dpsi_image = apply_displacement(idx, psi);
        const Complex c = psi.dot(dpsi_image);
        for (int p = 0; p < inputs(); ++p) {
          const Complex dc = tangents[p].dot(dpsi_image) + psi.dot(apply_displacement(idx, tangents[p]));
          fjac(row, p) = d * 2.0 * (std::conj(c) * dc).real();
        }
        ++row;
      }
    }
    return 0;
  }
};

Vector gauge_fix(const Vector& psi) {
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    const double mag = std::abs(psi(k));
    if (mag > 1e-12) return psi * (std::conj(psi(k)) / mag);
  }
  return psi;
}

struct FiducialAttempt {
  Vector psi;
  double potential;
};

FiducialAttempt run_fiducial_restart(const FiducialSearchConfig& cfg, int restart) {
  const int d = cfg.dim;
  Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(restart));
  Vector start = haar_random_state(d, rng).amplitudes();
  start /= start(0);  // Haar states have a nonzero first amplitude almost surely

  Eigen::VectorXd x(2 * d - 2);
  for (int k = 1; k < d; ++k) {
    x(2 * (k - 1)) = start(k).real();
    x(2 * (k - 1) + 1) = start(k).imag();
  }

  OrbitResiduals functor(d);
  Eigen::LevenbergMarquardt<OrbitResiduals> lm(functor);
  lm.setMaxfev(cfg.max_iters);
  lm.setGtol(cfg.grad_tol);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.minimize(x);

  const Vector psi = gauge_fix(fiducial_from_params(x, d));
  Eigen::VectorXd residuals(functor.values());
  functor(x, residuals);
  return {psi, residuals.squaredNorm()};
}

}  // namespace

FiducialSearchResult find_fiducial(const FiducialSearchConfig& cfg) {
  cfg.validate();
  const unsigned batch = std::max(1u, worker_count());

  std::optional<FiducialAttempt> best;
  int best_index = -1;
  int attempted = 0;
  bool found = false;
  while (attempted < cfg.n_restarts && !found) {
    const int count = std::min<int>(static_cast<int>(batch), cfg.n_restarts - attempted);
    std::vector<std::optional<FiducialAttempt>> attempts(count);
    parallel_for(attempts.size(), [&](std::size_t k) { attempts[k] = run_fiducial_restart(cfg, attempted + static_cast<int>(k)); });
    for (int k = 0; k < count; ++k) {
      const bool success = attempts[k]->potential < cfg.potential_tol;
      if (!best || success || attempts[k]->potential < best->potential) {
        best = attempts[k];
        best_index = attempted + k;
      }
      if (success) {
        found = true;
        break;
      }
    }
    attempted += count;
  }

  PureState fiducial = PureState::normalized(best->psi);
  SicEnsemble orbit = sic_from_fiducial(fiducial);
  const double potential = frame_potential(orbit.base().states());
  const bool success = found && potential < cfg.potential_tol;

  FiducialSearchResult result{success, fiducial, std::nullopt, potential, best_index + 1, {}};
  if (success) {
    result.sic = std::move(orbit);
    result.message = "fiducial found at restart " + std::to_string(best_index);
  } else {
    result.message = "no fiducial below the potential tolerance after " + std::to_string(attempted) + " restarts";
  }
  return result;
}

// ---------------------------------------------------------------------------
// Haar Monte Carlo

void MonteCarloConfig::validate() const {
  if (n_samples < 1) throw Error("MonteCarloConfig: n_samples must be >= 1");
}

namespace {

constexpr std::int64_t kSamplesPerBlock = 4096;

struct BlockSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

}  // namespace

FidelityReport haar_average_fidelity(const Ensemble& ensemble, const MonteCarloConfig& cfg) {
  cfg.validate();
  const int d = ensemble.dim();
  const std::int64_t n_blocks = (cfg.n_samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  std::vector<BlockSums> blocks(static_cast<std::size_t>(n_blocks));

  parallel_for(blocks.size(), [&](std::size_t blk) {
    Rng rng = make_stream(cfg.seed, blk);
    const std::int64_t begin = static_cast<std::int64_t>(blk) * kSamplesPerBlock;
    const std::int64_t end = std::min(cfg.n_samples, begin + kSamplesPerBlock);
    BlockSums sums;
    for (std::int64_t s = begin; s < end; ++s) {
      const Matrix u = haar_random_unitary(d, rng);
      double sample = 0.0;
      for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const Eigen::VectorXd overlaps = (u.adjoint() * ensemble.states()[i].amplitudes()).cwiseAbs2();
        sample += ensemble.probs()[i] * overlaps.squaredNorm();
      }
      sums.sum += sample;
      sums.sum_sq += sample * sample;
    }
    blocks[blk] = sums;
  });

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& b : blocks) {
    sum += b.sum;
    sum_sq += b.sum_sq;
  }
  const auto n = static_cast<double>(cfg.n_samples);
  const double mean = sum / n;
  double standard_error = 0.0;
  if (cfg.n_samples > 1) {
    const double variance = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    standard_error = std::sqrt(variance / n);
  }
  return FidelityReport::monte_carlo(mean, standard_error,
                                     {{"quantity", "haar_average_fidelity"},
                                      {"n_samples", std::to_string(cfg.n_samples)},
                                      {"seed", std::to_string(cfg.seed)}});
}

double haar_integral_closed_form(int dim) {
  if (dim < 1) throw Error("haar_integral_closed_form: dim must be >= 1");
  return 2.0 / (dim + 1.0);
}

ExactRational haar_integral_factorial_form(int dim) {
  if (dim < 1) throw Error("haar_integral_factorial_form: dim must be >= 1");
  using boost::multiprecision::cpp_int;
  cpp_int d_minus_1_factorial = 1;
  for (int k = 2; k <= dim - 1; ++k) d_minus_1_factorial *= k;
  const cpp_int d_plus_1_factorial = d_minus_1_factorial * dim * (dim + 1);
  return ExactRational(cpp_int(dim) * d_minus_1_factorial * 2, d_plus_1_factorial);
}

}  // namespace qlab
