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

// Independent reference computations for tests. Nothing here calls into the
// code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace qlab::oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// sum_kl conj(a_kl) b_kl by explicit loops.
inline double hs_inner_loops(const CMatrix& a, const CMatrix& b) {
  Complex total = 0.0;
  for (Eigen::Index k = 0; k < a.rows(); ++k)
    for (Eigen::Index l = 0; l < a.cols(); ++l) total += std::conj(a(k, l)) * b(k, l);
  return total.real();
}

/// Coefficients c_0..c_n of det(lambda I - A) by Faddeev-LeVerrier.
inline std::vector<Complex> characteristic_polynomial(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<Complex> c(n + 1);
  c[n] = 1.0;
  CMatrix m = CMatrix::Zero(n, n);
  const CMatrix identity = CMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * identity;
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

inline double eval_polynomial(const std::vector<Complex>& c, double x) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc.real();
}

/// Largest real root of the characteristic polynomial of a Hermitian matrix:
/// downward scan from a norm bound to the first sign change, then bisection.
inline double largest_root_by_bisection(const CMatrix& a) {
  const auto c = characteristic_polynomial(a);
  double hi = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) hi += std::norm(a(i, j));
  hi = std::sqrt(hi) + 1.0;
  const double step = hi / 20000.0;
  const double sign_hi = eval_polynomial(c, hi) > 0 ? 1.0 : -1.0;
  double lo = hi;
  while (lo > -hi) {
    lo -= step;
    if (eval_polynomial(c, lo) * sign_hi <= 0.0) break;
  }
  double upper = lo + step;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + upper);
    if (eval_polynomial(c, mid) * sign_hi > 0.0)
      upper = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + upper);
}

/// sum_i w_i P_i X P_i with full matrix products.
inline CMatrix naive_conjugation_sum(const std::vector<double>& weights, const std::vector<CVector>& states,
                                     const CMatrix& x) {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const CMatrix p = states[i] * states[i].adjoint();
    out += weights[i] * (p * x * p);
  }
  return out;
}

inline CVector bloch_state(double theta, double phi) {
  CVector v(2);
  v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return v;
}

/// max over pure qubit states of <n|M|n>: a Bloch-sphere grid followed by
/// two finer grids centred on the best point.
inline double grid_max_expectation(const CMatrix& m) {
  auto value = [&](double t, double p) {
    const CVector v = bloch_state(t, p);
    return (v.adjoint() * m * v)(0, 0).real();
  };
  double best = -1e300, bt = 0, bp = 0;
  const int nt = 360, np = 720;
  for (int i = 0; i <= nt; ++i) {
    for (int j = 0; j < np; ++j) {
      const double t = std::numbers::pi * i / nt, p = 2 * std::numbers::pi * j / np;
      const double v = value(t, p);
      if (v > best) best = v, bt = t, bp = p;
    }
  }
  double span = std::numbers::pi / nt;
  for (int level = 0; level < 2; ++level) {
    const double ct = bt, cp = bp;
    for (int i = -50; i <= 50; ++i) {
      for (int j = -50; j <= 50; ++j) {
        const double t = ct + span * i / 25.0, p = cp + 2 * span * j / 25.0;
        const double v = value(t, p);
        if (v > best) best = v, bt = t, bp = p;
      }
    }
    span /= 25.0;
  }
  return best;
}

/// d (d-1)! 2! / (d+1)! reduced, in 128-bit integers (exact for d <= 33).
struct Fraction128 {
  unsigned __int128 num;
  unsigned __int128 den;
};

inline Fraction128 haar_factorial_fraction(int d) {
  unsigned __int128 fact = 1;  // (d-1)!
  for (int k = 2; k <= d - 1; ++k) fact *= static_cast<unsigned __int128>(k);
  unsigned __int128 num = static_cast<unsigned __int128>(d) * fact * 2;
  unsigned __int128 den = fact * static_cast<unsigned __int128>(d) * static_cast<unsigned __int128>(d + 1);
  unsigned __int128 a = num, b = den;
  while (b != 0) {
    const unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return {num / a, den / a};
}

}  // namespace qlab::oracle
