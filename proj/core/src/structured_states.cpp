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

#include "qlab/structured_states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace qlab {

namespace {

constexpr int kMapProbes = 4;
constexpr std::uint64_t kMapProbeSeed = 0x51c0ffeeULL;

Complex root_of_unity(long k, int dim) {
  const long r = ((k % dim) + dim) % dim;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / dim;
  return {std::cos(angle), std::sin(angle)};
}

double overlap(const PureState& a, const PureState& b) { return std::norm(a.amplitudes().dot(b.amplitudes())); }

MapComparison compare_with_phi(const EnsembleMap& map) {
  Rng rng = make_stream(kMapProbeSeed, 0);
  const int d = map.dim();
  return maps_equal(
      d, [&](const Matrix& x) { return map.apply(x); }, [d](const Matrix& x) { return phi_closed_form(d, x); },
      kMapProbes, rng);
}

}  // namespace

void WeylHeisenbergIndex::validate() const {
  if (dim < 1) throw Error("WeylHeisenbergIndex: dim must be positive");
  if (shift < 0 || shift >= dim || boost < 0 || boost >= dim) throw Error("WeylHeisenbergIndex: index out of range");
}

Vector apply_displacement(const WeylHeisenbergIndex& idx, const Vector& v) {
  idx.validate();
  if (v.size() != idx.dim) throw DimensionMismatch("apply_displacement", idx.dim, v.size());
  const int d = idx.dim;
  Vector out(d);
  for (int k = 0; k < d; ++k) out((k + idx.shift) % d) = root_of_unity(static_cast<long>(idx.boost) * k, d) * v(k);
  return out;
}

Matrix wh_displacement(const WeylHeisenbergIndex& idx) {
  idx.validate();
  Matrix out = Matrix::Zero(idx.dim, idx.dim);
  for (int k = 0; k < idx.dim; ++k) out((k + idx.shift) % idx.dim, k) = root_of_unity(static_cast<long>(idx.boost) * k, idx.dim);
  return out;
}

double sic_overlap_residual(const std::vector<PureState>& states) {
  if (states.empty()) return 0.0;
  const double target = 1.0 / (states.front().dim() + 1.0);
  double residual = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      residual = std::max(residual, std::abs(overlap(states[i], states[j]) - target));
  return residual;
}

SicEnsemble::SicEnsemble(Ensemble base, PureState fiducial, double residual)
    : base_(std::move(base)), fiducial_(std::move(fiducial)), overlap_residual_(residual) {}

SicEnsemble SicEnsemble::from_ensemble(Ensemble base, PureState fiducial) {
  const auto d = static_cast<std::size_t>(base.dim());
  if (base.size() != d * d) throw Error("SicEnsemble: expected d^2 states");
  const double uniform = 1.0 / static_cast<double>(d * d);
  for (double p : base.probs())
    if (std::abs(p - uniform) > 1e-15) throw Error("SicEnsemble: probabilities must all equal 1/d^2");
  if (fiducial.dim() != base.dim()) throw DimensionMismatch("SicEnsemble", base.dim(), fiducial.dim());
  const double residual = sic_overlap_residual(base.states());
  return SicEnsemble(std::move(base), std::move(fiducial), residual);
}

SicEnsemble sic_from_fiducial(const PureState& fiducial) {
  const int d = fiducial.dim();
  std::vector<PureState> orbit;
  orbit.reserve(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      orbit.push_back(PureState::normalized(apply_displacement({d, a, b}, fiducial.amplitudes())));
  return SicEnsemble::from_ensemble(Ensemble::uniform(std::move(orbit)), fiducial);
}

RealMatrix gram_matrix(const std::vector<Projector>& projectors) {
  const auto n = static_cast<Eigen::Index>(projectors.size());
  RealMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) g(i, j) = g(j, i) = hs_inner(projectors[i].op(), projectors[j].op());
  return g;
}

int numerical_rank(const RealMatrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = rel_tol * s(0);
  return static_cast<int>((s.array() > cutoff).count());
}

SicCertificate verify_sic(const SicEnsemble& sic) {
  const int d = sic.dim();
  const double residual = sic_overlap_residual(sic.base().states());
  const int rank = numerical_rank(gram_matrix(sic.base().projectors()));
  const MapComparison cmp = compare_with_phi(ensemble_map_of(sic.base()));
  return {residual, rank, d * d, cmp.residual, cmp.equal, residual < kSicOverlapTol && rank == d * d};
}

Matrix phi_closed_form(int dim, const Matrix& x) {
  if (x.rows() != dim || x.cols() != dim) throw DimensionMismatch("phi_closed_form", dim, x.rows());
  Matrix out = x;
  out.diagonal().array() += x.trace();
  return out / (dim * (dim + 1.0));
}

HermitianOperator phi_closed_form(int dim, const HermitianOperator& x) {
  return HermitianOperator(phi_closed_form(dim, x.matrix()));
}

double depolarizing_consistency(int dim, const DensityOperator& rho) {
  if (rho.dim() != dim) throw DimensionMismatch("depolarizing_consistency", dim, rho.dim());
  const double lambda = 1.0 / (dim + 1.0);
  const Matrix identity = Matrix::Identity(dim, dim);
  const Matrix depolarized = lambda * rho.matrix() + (1.0 - lambda) * identity / static_cast<double>(dim);
  return operator_norm(phi_closed_form(dim, rho.matrix()) - depolarized / static_cast<double>(dim));
}

SicProbabilities::SicProbabilities(int dim, std::vector<double> probs) : dim_(dim), probs_(std::move(probs)) {
  if (dim_ < 1) throw Error("SicProbabilities: dim must be positive");
  if (probs_.size() != static_cast<std::size_t>(dim_) * dim_) throw Error("SicProbabilities: expected d^2 entries");
  for (double p : probs_)
    if (!(p >= 0.0) || p > 1.0 / dim_ + 1e-10) throw Error("SicProbabilities: entry outside [0, 1/d]");
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw Error("SicProbabilities: entries do not sum to 1");
}

SicProbabilities sic_probabilities(const SicEnsemble& sic, const DensityOperator& rho) {
  if (!sic.certified()) throw Error("sic_probabilities: SIC ensemble is not certified");
  const int d = sic.dim();
  if (rho.dim() != d) throw DimensionMismatch("sic_probabilities", d, rho.dim());
  std::vector<double> probs;
  probs.reserve(sic.base().size());
  for (const auto& p : sic.base().projectors())
    probs.push_back(std::max(0.0, hs_inner(rho.op(), p.op()) / d));
  return SicProbabilities(d, std::move(probs));
}

DensityOperator reconstruct_density(const SicEnsemble& sic, const SicProbabilities& p) {
  if (!sic.certified()) throw Error("reconstruct_density: SIC ensemble is not certified");
  const int d = sic.dim();
  if (p.dim() != d) throw DimensionMismatch("reconstruct_density", d, p.dim());
  Matrix rho = -Matrix::Identity(d, d);
  for (std::size_t i = 0; i < p.probs().size(); ++i)
    rho += ((d + 1.0) * p.probs()[i]) * sic.base().projectors()[i].matrix();
  try {
    return DensityOperator(HermitianOperator(rho), 1e-8);
  } catch (const Error&) {
    throw Error("reconstruct_density: probabilities are inconsistent with any density operator");
  }
}

double purity_from_probabilities(int dim, const SicProbabilities& p) {
  if (p.dim() != dim) throw DimensionMismatch("purity_from_probabilities", dim, p.dim());
  const double sum_sq = std::inner_product(p.probs().begin(), p.probs().end(), p.probs().begin(), 0.0);
  return dim * (dim + 1.0) * sum_sq - 1.0;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

MubCollection::MubCollection(int dim, std::vector<std::vector<PureState>> bases)
    : dim_(dim), bases_(std::move(bases)) {
  for (const auto& basis : bases_) {
    if (basis.size() != static_cast<std::size_t>(dim_)) throw Error("MubCollection: each basis needs d states");
    for (const auto& s : basis)
      if (s.dim() != dim_) throw DimensionMismatch("MubCollection", dim_, s.dim());
  }
}

MubResiduals mub_residuals(const MubCollection& mubs) {
  const double unbiased = 1.0 / mubs.dim();
  MubResiduals r{0.0, 0.0};
  const auto& bases = mubs.bases();
  for (std::size_t j = 0; j < bases.size(); ++j) {
    for (std::size_t l = j; l < bases.size(); ++l) {
      for (std::size_t i = 0; i < bases[j].size(); ++i) {
        for (std::size_t k = 0; k < bases[l].size(); ++k) {
          const double ov = overlap(bases[j][i], bases[l][k]);
          if (j == l)
            r.intra = std::max(r.intra, std::abs(ov - (i == k ? 1.0 : 0.0)));
          else
            r.inter = std::max(r.inter, std::abs(ov - unbiased));
        }
      }
    }
  }
  return r;
}

MubCollection mub_construct(int dim) {
  if (!is_prime(dim))
    throw Error("mub_construct: d = " + std::to_string(dim) +
                " is not prime; complete sets of mutually unbiased bases are only constructed for prime d");
  std::vector<std::vector<PureState>> bases;
  std::vector<PureState> computational;
  for (int k = 0; k < dim; ++k) computational.push_back(PureState::basis(dim, k));
  bases.push_back(std::move(computational));

  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  if (dim == 2) {
    const Complex i(0.0, 1.0);
    for (const Complex phase : {Complex(1.0), i}) {
      std::vector<PureState> basis;
      for (const double sign : {1.0, -1.0}) {
        Vector v(2);
        v << amp, sign * phase * amp;
        basis.push_back(PureState::normalized(v));
      }
      bases.push_back(std::move(basis));
    }
    return MubCollection(dim, std::move(bases));
  }

  for (int j = 0; j < dim; ++j) {
    std::vector<PureState> basis;
    for (int m = 0; m < dim; ++m) {
      Vector v(dim);
      for (int k = 0; k < dim; ++k) v(k) = amp * root_of_unity(static_cast<long>(j) * k * k + static_cast<long>(m) * k, dim);
      basis.push_back(PureState::normalized(v));
    }
    bases.push_back(std::move(basis));
  }
  return MubCollection(dim, std::move(bases));
}

Ensemble mub_ensemble(const MubCollection& mubs) {
  std::vector<PureState> states;
  for (const auto& basis : mubs.bases()) states.insert(states.end(), basis.begin(), basis.end());
  return Ensemble::uniform(std::move(states));
}

PhiDecompositionReport phi_decomposition_check(const Ensemble& candidate) {
  const int d = candidate.dim();
  const std::size_t full = static_cast<std::size_t>(d) * d;
  if (candidate.size() > full) throw Error("phi_decomposition_check: candidate has more than d^2 states");

  PhiDecompositionReport report{};
  report.n_states = candidate.size();
  const RealMatrix gram = gram_matrix(candidate.projectors());
  report.gram_rank = numerical_rank(gram);
  report.impossible = candidate.size() < full || static_cast<std::size_t>(report.gram_rank) < candidate.size();

  const MapComparison cmp = compare_with_phi(ensemble_map_of(candidate));
  report.map_residual = cmp.residual;
  report.map_equals_phi = cmp.equal;

  const double uniform = 1.0 / static_cast<double>(full);
  report.weight_residual = 0.0;
  for (double p : candidate.probs()) report.weight_residual = std::max(report.weight_residual, std::abs(p - uniform));

  if (!report.impossible) {
    // tr(Pi_k I/d) = 1/d for every k, so the coefficients of I/d in the
    // projector basis solve G c = (1/d) 1.
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(gram.rows(), 1.0 / d);
    const Eigen::VectorXd c = gram.colPivHouseholderQr().solve(rhs);
    report.forced_weights.assign(c.data(), c.data() + c.size());
    for (double ci : report.forced_weights)
      report.weight_residual = std::max(report.weight_residual, std::abs(ci - uniform));
  }

  report.overlap_residual = sic_overlap_residual(candidate.states());
  report.conclusion_verified = report.map_equals_phi && !report.impossible &&
                               report.weight_residual <= kSicOverlapTol && report.overlap_residual <= kSicOverlapTol;
  return report;
}

}  // namespace qlab
