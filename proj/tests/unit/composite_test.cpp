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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qlab/composite.hpp"

namespace qlab {
namespace {

TEST(ProductEnsembleTest, SizesProbabilitiesAndOrdering) {
  const auto p = product_ensemble(testing::sic(2).base(), testing::sic(2).base());
  ASSERT_EQ(p.joint.size(), 16u);
  EXPECT_EQ(p.joint.dim(), 4);
  for (double x : p.joint.probs()) EXPECT_NEAR(x, 1.0 / 16.0, 1e-15);
  const Vector expect = kron(testing::sic(2).base().states()[1].amplitudes(),
                             testing::sic(2).base().states()[2].amplitudes());
  EXPECT_LT((p.joint.states()[1 * 4 + 2].amplitudes() - expect).norm(), 1e-15);
  const Ensemble one({PureState::basis(1, 0)}, {1.0});
  EXPECT_EQ(product_ensemble(one, one).joint.size(), 1u);
}

TEST(ProductEnsembleTest, JointMapFactorizesOnProducts) {
  Rng rng = make_stream(61, 0);
  const auto left = testing::random_ensemble(2, 3, rng);
  const auto right = testing::random_ensemble(3, 2, rng);
  const auto p = product_ensemble(left, right);
  const auto joint = ensemble_map_of(p.joint), ml = ensemble_map_of(left), mr = ensemble_map_of(right);
  EXPECT_LT((joint.apply(Matrix::Identity(6, 6)) - kron(ml.apply(Matrix::Identity(2, 2)),
                                                          mr.apply(Matrix::Identity(3, 3))))
                .norm(),
            1e-12);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_hermitian(2, rng).matrix(), b = random_hermitian(3, rng).matrix();
    EXPECT_LT((joint.apply(kron(a, b)) - kron(ml.apply(a), mr.apply(b))).norm(), 1e-12);
  }
}

TEST(QuantumnessValuesTest, ClosedForms) {
  EXPECT_NEAR(composite_quantumness(2, 2), 0.4, 1e-15);
  EXPECT_NEAR(composite_quantumness(2, 3), 2.0 / 7.0, 1e-15);
  EXPECT_NEAR(product_fidelity_value(2, 2), 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(product_fidelity_value(2, 3), 1.0 / 3.0, 1e-15);
  for (int d = 1; d <= 5; ++d) EXPECT_NEAR(product_fidelity_value(1, d), composite_quantumness(1, d), 1e-15);
}

TEST(QuantumnessValuesTest, ProductExceedsCompositeBeyondTrivialFactors) {
  for (int d1 = 2; d1 <= 6; ++d1)
    for (int d2 = 2; d2 <= 6; ++d2) EXPECT_GT(product_fidelity_value(d1, d2), composite_quantumness(d1, d2));
}

TEST(SchmidtTest, ProductAndBellStates) {
  Rng rng = make_stream(62, 0);
  const auto prod = tensor(haar_random_state(2, rng), haar_random_state(3, rng));
  EXPECT_EQ(schmidt_rank(prod, 2, 3), 1);
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  const PureState b(bell);
  EXPECT_EQ(schmidt_rank(b, 2, 2), 2);
  const auto c = schmidt_coefficients(b, 2, 2);
  EXPECT_NEAR(c(0), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(c(1), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_THROW(schmidt_rank(b, 2, 3), Error);
}

TEST(SchmidtTest, ProductEnsembleHasNoEntangledStates) {
  const auto p = product_ensemble(testing::sic(2).base(), testing::sic(3).base());
  const auto w = entanglement_witness(p.joint, 2, 3);
  EXPECT_EQ(w.entangled_states, 0);
  EXPECT_EQ(w.max_schmidt_rank, 1);
}

TEST(SicEnsembleForTest, DimensionOneAndFailure) {
  const auto one = sic_ensemble_for(1, {});
  EXPECT_EQ(one.size(), 1u);
  FiducialSearchConfig cfg;
  cfg.n_restarts = 2;
  cfg.max_iters = 1;
  try {
    sic_ensemble_for(4, cfg);
    FAIL() << "expected SearchFailure";
  } catch (const SearchFailure& e) {
    EXPECT_EQ(e.dim(), 4);
    EXPECT_GT(e.best_potential(), cfg.potential_tol);
  }
}

TEST(GapExperimentTest, QubitPair) {
  auto search = PovmSearchConfig::defaults_for(4, 5);
  search.n_restarts = 4;
  FiducialSearchConfig fid;
  fid.seed = 5;
  const auto r = entanglement_gap_experiment(2, 2, search, fid);
  EXPECT_FALSE(r.degenerate);
  EXPECT_NEAR(r.product_value, 4.0 / 9.0, 1e-15);
  EXPECT_NEAR(r.composite_quantumness, 0.4, 1e-15);
  EXPECT_NEAR(r.gap, 2.0 / 45.0, 1e-15);
  EXPECT_NEAR(r.product_povm_fidelity, 4.0 / 9.0, 1e-9);
  EXPECT_NEAR(r.composite_sic_fidelity, 0.4, 1e-9);
  EXPECT_GE(r.optimizer_value, 4.0 / 9.0 - 1e-6);
  EXPECT_GE(r.optimizer_value, 0.4 + 0.04);
  EXPECT_GT(r.witness.entangled_states, 0);
  EXPECT_EQ(r.witness.max_schmidt_rank, 2);
}

TEST(GapExperimentTest, DegenerateFactorHasNoGap) {
  auto search = PovmSearchConfig::defaults_for(3, 1);
  search.n_restarts = 2;
  const auto r = entanglement_gap_experiment(1, 3, search);
  EXPECT_TRUE(r.degenerate);
  EXPECT_NEAR(r.gap, 0.0, 1e-15);
  EXPECT_NEAR(r.composite_sic_fidelity, 0.5, 1e-9);
}

}  // namespace
}  // namespace qlab
