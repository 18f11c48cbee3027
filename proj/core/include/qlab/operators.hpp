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

// Dense operator algebra on a d-dimensional Hilbert space.

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlab/random.hpp"

namespace qlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kStructuralTol = 1e-10;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& where, long expected, long got);
};

/// Unit vector in C^d. The global phase is stored as given.
class PureState {
 public:
  /// Throws if the Euclidean norm differs from 1 by more than kUnitNormTol.
  explicit PureState(Vector amplitudes);

  /// Normalizes `v`; throws on a zero vector.
  static PureState normalized(const Vector& v);
  static PureState basis(int dim, int k);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Matrix projector_matrix() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Vector amplitudes_;
};

class HermitianOperator {
 public:
  /// Throws unless `m` is square and equals its adjoint entrywise within
  /// kHermitianTol (relative to the largest entry once that exceeds 1).
  /// The stored matrix is exactly self-adjoint.
  explicit HermitianOperator(const Matrix& m);

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  Matrix m_;
};

/// Rank-1 orthogonal projector |psi><psi| (idempotent, unit trace).
class Projector {
 public:
  /// Validates idempotency and unit trace within kStructuralTol.
  explicit Projector(HermitianOperator op);
  static Projector onto(const PureState& state);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

class DensityOperator {
 public:
  /// Validates positivity (min eigenvalue >= -tol) and unit trace within tol.
  explicit DensityOperator(HermitianOperator op, double tol = kStructuralTol);
  static DensityOperator pure(const PureState& state);
  static DensityOperator maximally_mixed(int dim);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOperator op_;
};

/// g |phi><phi|
struct RankOnePovmElement {
  double weight;
  PureState direction;
};

/// A list of Hermitian measurement operators. Positivity and completeness
/// are not enforced on construction; see validate_povm().
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> elements);
  static Povm from_rank_one(std::span<const RankOnePovmElement> elements);

  int dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<HermitianOperator>& elements() const { return elements_; }
  const HermitianOperator& operator[](std::size_t b) const { return elements_[b]; }

 private:
  int dim_;
  std::vector<HermitianOperator> elements_;
};

struct PovmValidation {
  double positivity_margin;      // min eigenvalue over all elements
  double completeness_residual;  // || sum_b E_b - I ||, operator norm
  bool passed;
};

/// tr(a^dagger b).
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/// Eigenvalues in ascending order.
Eigen::VectorXd spectrum(const HermitianOperator& x);

double largest_eigenvalue(const HermitianOperator& x);
double smallest_eigenvalue(const HermitianOperator& x);

struct Eigenpair {
  double value;
  Vector vector;  // unit norm
};

/// Top eigenpair. For a degenerate top eigenvalue the vector is the last
/// column returned by the self-adjoint solver, which is deterministic.
Eigenpair top_eigenpair(const HermitianOperator& x);

/// Largest singular value.
double operator_norm(const Matrix& m);

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
Matrix kron(const Matrix& a, const Matrix& b);
PureState tensor(const PureState& a, const PureState& b);

PureState haar_random_state(int dim, Rng& rng);

/// Haar unitary: QR of a complex Ginibre matrix with the phases of R's
/// diagonal moved into Q.
Matrix haar_random_unitary(int dim, Rng& rng);

/// Complete von Neumann measurement from the columns of a Haar unitary.
Povm haar_random_von_neumann(int dim, Rng& rng);

/// Orthonormal basis drawn from the Haar measure (columns of a Haar unitary).
std::vector<PureState> haar_random_basis(int dim, Rng& rng);

/// (G + G^dagger)/2 with G complex Ginibre.
HermitianOperator random_hermitian(int dim, Rng& rng);

/// Full-rank random density operator G G^dagger / tr(G G^dagger).
DensityOperator random_density_operator(int dim, Rng& rng);

/// E_b = A^{-1/2} v_b v_b^dagger A^{-1/2} with A = sum_b v_b v_b^dagger.
/// Complete by construction whenever A is invertible; throws otherwise.
Povm povm_from_vectors(std::span<const Vector> vectors);

/// Same parameterization, returned as weights and unit directions.
/// Zero vectors give weight-0 elements with direction |0>.
std::vector<RankOnePovmElement> rank_one_povm_from_vectors(std::span<const Vector> vectors);

/// Random rank-1 POVM with `n_outcomes` >= dim elements.
std::vector<RankOnePovmElement> random_rank_one_povm(int dim, int n_outcomes, Rng& rng);

/// Splits every element into weight * projector. Throws if any element has
/// rank other than 1 (relative tolerance `tol` on the second eigenvalue).
std::vector<RankOnePovmElement> rank_one_decomposition(const Povm& povm, double tol = 1e-9);

PovmValidation validate_povm(const Povm& povm, double tol = kStructuralTol);

}  // namespace qlab
