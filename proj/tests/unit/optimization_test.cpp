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
#include <cstdlib>
#include <numbers>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qlab/optimization.hpp"

namespace qlab {
namespace {

using testing::random_ensemble;

class ScopedThreads {
 public:
  explicit ScopedThreads(const char* value) {
    if (const char* old = std::getenv("QLAB_THREADS")) old_ = old;
    setenv("QLAB_THREADS", value, 1);
  }
  ~ScopedThreads() {
    if (old_.empty())
      unsetenv("QLAB_THREADS");
    else
      setenv("QLAB_THREADS", old_.c_str(), 1);
  }

 private:
  std::string old_;
};

TEST(PovmObjectiveTest, GradientMatchesFiniteDifferences) {
  Rng rng = make_stream(51, 0);
  for (int d : {2, 3}) {
    const auto e = random_ensemble(d, 4, rng);
    const auto map = ensemble_map_of(e);
    std::vector<Vector> vs;
    for (int b = 0; b < d + 2; ++b) vs.push_back(Vector::NullaryExpr(d, [&] { return complex_gaussian(rng); }));
    std::vector<Vector> grad;
    povm_search_objective(map, vs, &grad);
    ASSERT_EQ(grad.size(), vs.size());
    for (int probe = 0; probe < 5; ++probe) {
      std::vector<Vector> dir;
      double analytic = 0.0;
      for (std::size_t b = 0; b < vs.size(); ++b) {
        dir.push_back(Vector::NullaryExpr(d, [&] { return complex_gaussian(rng); }));
        analytic += grad[b].dot(dir[b]).real();
      }
      const double h = 1e-6;
      std::vector<Vector> plus = vs, minus = vs;
      for (std::size_t b = 0; b < vs.size(); ++b) plus[b] += h * dir[b], minus[b] -= h * dir[b];
      const double numeric = (povm_search_objective(map, plus) - povm_search_objective(map, minus)) / (2 * h);
      EXPECT_NEAR(analytic, numeric, 1e-6 * std::max(1.0, std::abs(numeric)));
    }
  }
}

TEST(PovmObjectiveTest, AgreesWithAchievableFidelity) {
  Rng rng = make_stream(52, 0);
  const auto e = random_ensemble(3, 6, rng);
  std::vector<Vector> vs;
  for (int b = 0; b < 5; ++b) vs.push_back(Vector::NullaryExpr(3, [&] { return complex_gaussian(rng); }));
  EXPECT_NEAR(povm_search_objective(ensemble_map_of(e), vs), achievable_fidelity(e, povm_from_vectors(vs)).value(),
              1e-12);
}

TEST(AccessibleFidelitySearchTest, QubitSicReachesTwoThirds) {
  auto cfg = PovmSearchConfig::defaults_for(2, 7);
  const auto r = accessible_fidelity_search(testing::sic(2).base(), cfg);
  EXPECT_NEAR(r.report.value(), 2.0 / 3.0, 1e-6);
  EXPECT_EQ(r.report.method(), FidelityMethod::optimizer);
  EXPECT_FALSE(r.report.standard_error().has_value());
  EXPECT_EQ(r.report.meta().at("bound"), "lower");
}

TEST(AccessibleFidelitySearchTest, DistinguishableEnsemblesReachOne) {
  const Ensemble single({PureState::basis(3, 1)}, {1.0});
  EXPECT_NEAR(accessible_fidelity_search(single, PovmSearchConfig::defaults_for(3, 1)).report.value(), 1.0, 1e-9);
  const Ensemble orth({PureState::basis(2, 0), PureState::basis(2, 1)}, {0.3, 0.7});
  EXPECT_NEAR(accessible_fidelity_search(orth, PovmSearchConfig::defaults_for(2, 1)).report.value(), 1.0, 1e-9);
}

TEST(AccessibleFidelitySearchTest, AtLeastBruteForceProjectiveOptimum) {
  // Brute force over qubit projective measurements on a 0.5 degree grid.
  Rng rng = make_stream(53, 0);
  const auto e = random_ensemble(2, 3, rng);
  double brute = 0.0;
  const int nt = 360, np = 720;
  for (int i = 0; i <= nt; ++i)
    for (int j = 0; j < np; ++j) {
      const Vector up = oracle::bloch_state(std::numbers::pi * i / nt, 2 * std::numbers::pi * j / np);
      Vector down(2);
      down << -std::conj(up(1)), std::conj(up(0));
      const std::vector<Vector> vs{up, down};
      brute = std::max(brute, povm_search_objective(ensemble_map_of(e), vs));
    }
  const auto r = accessible_fidelity_search(e, PovmSearchConfig::defaults_for(2, 3));
  EXPECT_GE(r.report.value(), brute - 1e-6);
}

TEST(AccessibleFidelitySearchTest, TracesMonotoneAndPovmsValid) {
  Rng rng = make_stream(54, 0);
  for (int d : {2, 3}) {
    const auto e = random_ensemble(d, 5, rng);
    auto cfg = PovmSearchConfig::defaults_for(d, 11);
    cfg.n_restarts = 4;
    const auto r = accessible_fidelity_search(e, cfg);
    EXPECT_TRUE(validate_povm(r.povm, 1e-8).passed);
    EXPECT_NEAR(achievable_fidelity(e, r.povm).value(), r.report.value(), 1e-12);
    ASSERT_FALSE(r.trace.empty());
    for (std::size_t k = 1; k < r.trace.size(); ++k)
      if (r.trace[k].restart == r.trace[k - 1].restart) EXPECT_GE(r.trace[k].value, r.trace[k - 1].value);
    // The optimum over rank-1 POVMs is at least the quantumness bound.
    EXPECT_GE(r.report.value(), 2.0 / (d + 1) - 1e-6);
  }
}

TEST(AccessibleFidelitySearchTest, IndependentOfThreadCount) {
  Rng rng = make_stream(55, 0);
  const auto e = random_ensemble(3, 4, rng);
  auto cfg = PovmSearchConfig::defaults_for(3, 99);
  cfg.n_restarts = 4;
  cfg.max_iters = 200;
  double one, many;
  std::size_t trace_one, trace_many;
  {
    ScopedThreads t("1");
    const auto r = accessible_fidelity_search(e, cfg);
    one = r.report.value(), trace_one = r.trace.size();
  }
  {
    ScopedThreads t("4");
    const auto r = accessible_fidelity_search(e, cfg);
    many = r.report.value(), trace_many = r.trace.size();
  }
  EXPECT_EQ(one, many);
  EXPECT_EQ(trace_one, trace_many);
}

TEST(AccessibleFidelitySearchTest, ConfigValidation) {
  PovmSearchConfig cfg;
  cfg.n_outcomes = 0;
  EXPECT_THROW(cfg.validate(), std::exception);
  cfg = PovmSearchConfig{};
  cfg.n_restarts = 0;
  EXPECT_THROW(cfg.validate(), std::exception);
  EXPECT_THROW(accessible_fidelity_search(testing::sic(3).base(), PovmSearchConfig{.n_outcomes = 2}), std::exception);
}

TEST(FramePotentialTest, KnownValues) {
  const auto& sic = testing::sic(2);
  EXPECT_LT(frame_potential(sic.base().states()), 1e-18);
  // Orbit of |0> in d = 2: of the 12 ordered pairs, 4 have overlap 1 and 8
  // have overlap 0, giving 4 (2/3)^2 + 8 (1/3)^2 = 8/3.
  const auto orbit = sic_from_fiducial(PureState::basis(2, 0));
  EXPECT_NEAR(frame_potential(orbit.base().states()), 8.0 / 3.0, 1e-12);
  const std::vector<PureState> twice{PureState::basis(3, 0), PureState::basis(3, 0)};
  EXPECT_NEAR(frame_potential(twice), 2 * std::pow(1.0 - 0.25, 2), 1e-15);
}

TEST(FramePotentialTest, UnitarilyInvariant) {
  Rng rng = make_stream(56, 0);
  std::vector<PureState> states;
  for (int k = 0; k < 6; ++k) states.push_back(haar_random_state(3, rng));
  const Matrix u = haar_random_unitary(3, rng);
  std::vector<PureState> rotated;
  for (const auto& s : states) rotated.push_back(PureState::normalized(u * s.amplitudes()));
  EXPECT_NEAR(frame_potential(states), frame_potential(rotated), 1e-12);
}

TEST(FindFiducialTest, SucceedsForSmallDimensions) {
  for (int d = 2; d <= 7; ++d) {
    FiducialSearchConfig cfg;
    cfg.dim = d;
    cfg.seed = 3;
    const auto r = find_fiducial(cfg);
    ASSERT_TRUE(r.success) << "d=" << d << " " << r.message;
    ASSERT_TRUE(r.sic.has_value());
    EXPECT_LT(r.potential, 1e-20);
    EXPECT_TRUE(verify_sic(*r.sic).passed);
    EXPECT_GT(r.fiducial.amplitudes()(0).real(), 0.0);
    EXPECT_EQ(r.fiducial.amplitudes()(0).imag(), 0.0);
  }
}

TEST(FindFiducialTest, FailureIsReportedNotThrown) {
  FiducialSearchConfig cfg;
  cfg.dim = 4;
  cfg.n_restarts = 3;
  cfg.max_iters = 1;
  FiducialSearchResult r = [&] { return find_fiducial(cfg); }();
  EXPECT_FALSE(r.success);
  EXPECT_FALSE(r.sic.has_value());
  EXPECT_GT(r.potential, cfg.potential_tol);
  EXPECT_FALSE(r.message.empty());
}

TEST(FindFiducialTest, DeterministicForSeed) {
  FiducialSearchConfig cfg;
  cfg.dim = 5;
  cfg.seed = 17;
  const auto a = find_fiducial(cfg), b = find_fiducial(cfg);
  EXPECT_EQ(a.fiducial.amplitudes(), b.fiducial.amplitudes());
  EXPECT_EQ(a.restarts_used, b.restarts_used);
}

TEST(HaarMonteCarloTest, RandomEnsemblesWithinThreeSigma) {
  Rng rng = make_stream(57, 0);
  for (int d : {2, 3}) {
    const auto e = random_ensemble(d, 4, rng);
    const auto r = haar_average_fidelity(e, {.n_samples = 100000, .seed = 5});
    ASSERT_TRUE(r.standard_error().has_value());
    EXPECT_EQ(r.method(), FidelityMethod::monte_carlo);
    EXPECT_LT(std::abs(r.value() - 2.0 / (d + 1)), 3 * *r.standard_error());
  }
}

TEST(HaarMonteCarloTest, SingleSampleDeterministicAndThreadIndependent) {
  Rng rng = make_stream(58, 0);
  const auto e = random_ensemble(2, 3, rng);
  const auto a = haar_average_fidelity(e, {.n_samples = 1, .seed = 1});
  const auto b = haar_average_fidelity(e, {.n_samples = 1, .seed = 1});
  EXPECT_EQ(a.value(), b.value());
  double one, many;
  {
    ScopedThreads t("1");
    one = haar_average_fidelity(e, {.n_samples = 20000, .seed = 2}).value();
  }
  {
    ScopedThreads t("3");
    many = haar_average_fidelity(e, {.n_samples = 20000, .seed = 2}).value();
  }
  EXPECT_EQ(one, many);
  EXPECT_THROW(haar_average_fidelity(e, {.n_samples = 0, .seed = 1}), std::exception);
}

TEST(HaarIntegralTest, ClosedFormAndFactorialFormAgree) {
  EXPECT_EQ(haar_integral_closed_form(1), 1.0);
  EXPECT_NEAR(haar_integral_closed_form(2), 2.0 / 3.0, 1e-15);
  for (int d = 1; d <= 20; ++d) {
    const auto exact = haar_integral_factorial_form(d);
    const auto ref = oracle::haar_factorial_fraction(d);
    EXPECT_EQ(exact.numerator(), ExactRational::int_type(static_cast<unsigned long long>(ref.num)));
    EXPECT_EQ(exact.denominator(), ExactRational::int_type(static_cast<unsigned long long>(ref.den)));
    EXPECT_EQ(exact, ExactRational(2, d + 1));
    EXPECT_NEAR(haar_integral_closed_form(d), 2.0 / (d + 1), 1e-15);
  }
  EXPECT_EQ(haar_integral_factorial_form(60), ExactRational(2, 61));
  EXPECT_THROW(haar_integral_closed_form(0), std::exception);
}

}  // namespace
}  // namespace qlab
