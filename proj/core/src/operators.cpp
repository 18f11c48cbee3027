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

#include "qlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qlab {

namespace {

void require_same_dim(const char* where, int expected, int got) {
  if (expected != got) throw DimensionMismatch(where, expected, got);
}

Matrix ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) g(r, c) = complex_gaussian(rng);
  return g;
}

}  // namespace

DimensionMismatch::DimensionMismatch(const std::string& where, long expected, long got)
    : Error(where + ": dimension mismatch (expected " + std::to_string(expected) + ", got " +
            std::to_string(got) + ")") {}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw Error("PureState: empty amplitude vector");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kUnitNormTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "PureState: amplitudes have norm " << norm;
    throw Error(msg.str());
  }
}

PureState PureState::normalized(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error("PureState: cannot normalize zero vector");
  return PureState(v / norm);
}

PureState PureState::basis(int dim, int k) {
  if (dim < 1 || k < 0 || k >= dim) throw Error("PureState::basis: index out of range");
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return PureState(std::move(v));
}

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error("HermitianOperator: matrix must be square and non-empty");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > kHermitianTol * scale) {
    std::ostringstream msg;
    msg << "HermitianOperator: matrix is not Hermitian (max |m - m^dagger| = " << skew << ")";
    throw Error(msg.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(int dim) { return HermitianOperator(Matrix::Identity(dim, dim)); }

HermitianOperator HermitianOperator::zero(int dim) { return HermitianOperator(Matrix::Zero(dim, dim)); }

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim("HermitianOperator::operator+", a.dim(), b.dim());
  return HermitianOperator(a.m_ + b.m_);
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim("HermitianOperator::operator-", a.dim(), b.dim());
  return HermitianOperator(a.m_ - b.m_);
}

HermitianOperator operator*(double s, const HermitianOperator& a) { return HermitianOperator(s * a.m_); }

Projector::Projector(HermitianOperator op) : op_(std::move(op)) {
  const Matrix& p = op_.matrix();
  const double idempotency = (p * p - p).cwiseAbs().maxCoeff();
  const double trace_error = std::abs(op_.trace() - 1.0);
  if (idempotency > kStructuralTol || trace_error > kStructuralTol)
    throw Error("Projector: operator is not a rank-1 projector");
}

Projector Projector::onto(const PureState& state) { return Projector(HermitianOperator(state.projector_matrix())); }

DensityOperator::DensityOperator(HermitianOperator op, double tol) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1.0) > tol) throw Error("DensityOperator: trace differs from 1");
  if (smallest_eigenvalue(op_) < -tol) throw Error("DensityOperator: operator is not positive semidefinite");
}

DensityOperator DensityOperator::pure(const PureState& state) {
  return DensityOperator(HermitianOperator(state.projector_matrix()));
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(HermitianOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim)));
}

Povm::Povm(std::vector<HermitianOperator> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error("Povm: no elements");
  dim_ = elements_.front().dim();
  for (const auto& e : elements_) require_same_dim("Povm", dim_, e.dim());
}

Povm Povm::from_rank_one(std::span<const RankOnePovmElement> elements) {
  std::vector<HermitianOperator> ops;
  ops.reserve(elements.size());
  for (const auto& e : elements) {
    if (e.weight < 0.0) throw Error("Povm::from_rank_one: negative weight");
    ops.emplace_back(e.weight * e.direction.projector_matrix());
  }
  return Povm(std::move(ops));
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim("hs_inner", a.dim(), b.dim());
  return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum().real();
}

Eigen::VectorXd spectrum(const HermitianOperator& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double largest_eigenvalue(const HermitianOperator& x) { return spectrum(x).maxCoeff(); }

double smallest_eigenvalue(const HermitianOperator& x) { return spectrum(x).minCoeff(); }

Eigenpair top_eigenpair(const HermitianOperator& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix());
  const Eigen::Index top = x.dim() - 1;
  return {solver.eigenvalues()(top), solver.eigenvectors().col(top).normalized()};
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

PureState tensor(const PureState& a, const PureState& b) {
  Vector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i) out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  return PureState::normalized(out);
}

PureState haar_random_state(int dim, Rng& rng) {
  if (dim < 1) throw Error("haar_random_state: dim must be positive");
  return PureState::normalized(ginibre(dim, 1, rng).col(0));
}

Matrix haar_random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw Error("haar_random_unitary: dim must be positive");
  Eigen::HouseholderQR<Matrix> qr(ginibre(dim, dim, rng));
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int k = 0; k < dim; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    q.col(k) *= (mag > 0.0) ? diag / mag : Complex(1.0);
  }
  return q;
}

std::vector<PureState> haar_random_basis(int dim, Rng& rng) {
  const Matrix u = haar_random_unitary(dim, rng);
  std::vector<PureState> basis;
  basis.reserve(dim);
  for (int k = 0; k < dim; ++k) basis.push_back(PureState::normalized(u.col(k)));
  return basis;
}

Povm haar_random_von_neumann(int dim, Rng& rng) {
  std::vector<HermitianOperator> elements;
  for (const auto& s : haar_random_basis(dim, rng)) elements.emplace_back(s.projector_matrix());
  return Povm(std::move(elements));
}

HermitianOperator random_hermitian(int dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  return HermitianOperator(0.5 * (g + g.adjoint()));
}

DensityOperator random_density_operator(int dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(HermitianOperator(rho));
}

namespace {

Matrix inverse_sqrt_frame(std::span<const Vector> vectors) {
  if (vectors.empty()) throw Error("povm_from_vectors: no vectors");
  const Eigen::Index dim = vectors.front().size();
  Matrix frame = Matrix::Zero(dim, dim);
  for (const auto& v : vectors) {
    if (v.size() != dim) throw DimensionMismatch("povm_from_vectors", dim, v.size());
    frame += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(frame);
  const Eigen::VectorXd& a = solver.eigenvalues();
  if (!(a.minCoeff() > 1e-14 * std::max(1.0, a.maxCoeff())))
    throw Error("povm_from_vectors: vectors do not span the space");
  return solver.eigenvectors() * a.cwiseSqrt().cwiseInverse().asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

Povm povm_from_vectors(std::span<const Vector> vectors) {
  const Matrix s = inverse_sqrt_frame(vectors);
  std::vector<HermitianOperator> elements;
  elements.reserve(vectors.size());
  for (const auto& v : vectors) {
    const Vector w = s * v;
    elements.emplace_back(w * w.adjoint());
  }
  return Povm(std::move(elements));
}

std::vector<RankOnePovmElement> rank_one_povm_from_vectors(std::span<const Vector> vectors) {
  const Matrix s = inverse_sqrt_frame(vectors);
  std::vector<RankOnePovmElement> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    const Vector w = s * v;
    const double norm = w.norm();
    if (norm > 0.0)
      out.push_back({norm * norm, PureState::normalized(w)});
    else
      out.push_back({0.0, PureState::basis(static_cast<int>(w.size()), 0)});
  }
  return out;
}

std::vector<RankOnePovmElement> random_rank_one_povm(int dim, int n_outcomes, Rng& rng) {
  if (n_outcomes < dim) throw Error("random_rank_one_povm: need at least dim outcomes");
  std::vector<Vector> vectors;
  vectors.reserve(n_outcomes);
  for (int b = 0; b < n_outcomes; ++b) vectors.push_back(ginibre(dim, 1, rng).col(0));
  return rank_one_povm_from_vectors(vectors);
}

std::vector<RankOnePovmElement> rank_one_decomposition(const Povm& povm, double tol) {
  std::vector<RankOnePovmElement> out;
  out.reserve(povm.size());
  for (std::size_t b = 0; b < povm.size(); ++b) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(povm[b].matrix());
    const Eigen::VectorXd& ev = solver.eigenvalues();
    const int d = povm.dim();
    const double top = ev(d - 1);
    const double second = d > 1 ? std::abs(ev(d - 2)) : 0.0;
    const double bottom = ev(0);
    if (!(top > tol) || second > tol * top || bottom < -tol * std::max(1.0, top))
      throw Error("rank_one_decomposition: element " + std::to_string(b) + " is not rank-1");
    out.push_back({top, PureState::normalized(solver.eigenvectors().col(d - 1))});
  }
  return out;
}

PovmValidation validate_povm(const Povm& povm, double tol) {
  double margin = std::numeric_limits<double>::infinity();
  Matrix total = Matrix::Zero(povm.dim(), povm.dim());
  for (const auto& e : povm.elements()) {
    margin = std::min(margin, smallest_eigenvalue(e));
    total += e.matrix();
  }
  total -= Matrix::Identity(povm.dim(), povm.dim());
  const double residual = operator_norm(total);
  return {margin, residual, margin >= -tol && residual <= tol};
}

}  // namespace qlab
