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

#include <cstdint>
#include <map>
#include <vector>

#include "qlab/optimization.hpp"

namespace qlab::testing {

/// Cached SIC search per dimension with a fixed seed.
inline const SicEnsemble& sic(int dim) {
  static std::map<int, SicEnsemble> cache;
  auto it = cache.find(dim);
  if (it == cache.end()) {
    FiducialSearchConfig cfg;
    cfg.dim = dim;
    cfg.seed = 20260101;
    FiducialSearchResult found = find_fiducial(cfg);
    if (!found.success) throw Error("test fixture: SIC search failed");
    it = cache.emplace(dim, *found.sic).first;
  }
  return it->second;
}

inline Ensemble random_ensemble(int dim, int n_states, Rng& rng) {
  std::vector<PureState> states;
  std::vector<double> probs;
  double total = 0.0;
  for (int i = 0; i < n_states; ++i) {
    states.push_back(haar_random_state(dim, rng));
    probs.push_back(std::uniform_real_distribution<double>(0.05, 1.0)(rng));
    total += probs.back();
  }
  for (double& p : probs) p /= total;
  return Ensemble(std::move(states), std::move(probs));
}

inline std::vector<Vector> amplitudes_of(const Ensemble& e) {
  std::vector<Vector> out;
  for (const auto& s : e.states()) out.push_back(s.amplitudes());
  return out;
}

}  // namespace qlab::testing
