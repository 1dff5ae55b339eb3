// Copyright 2026 The tiso authors
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

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "tiso/linalg.hpp"
#include "tiso/monomial_op.hpp"

namespace tiso::testsupport {

inline Complex phase(double turns) {
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

inline CMat scalar1(Complex z) {
  CMat m(1, 1);
  m(0, 0) = z;
  return m;
}

inline CMat diag_phases(std::initializer_list<double> turns) {
  CMat m = CMat::Zero(turns.size(), turns.size());
  Index i = 0;
  for (double t : turns) m(i, i) = phase(t), ++i;
  return m;
}

// Random unitary with the given eigenbasis: Q diag(phases) Q^*. Families
// drawn with a common Q commute exactly up to rounding.
inline CMat random_codiagonal(const CMat& q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Index d = q.rows();
  CMat diag = CMat::Zero(d, d);
  for (Index i = 0; i < d; ++i) diag(i, i) = phase(uni(rng));
  return q * diag * q.adjoint();
}

// Seeded model tuple with a simultaneously diagonal random twist family.
// Twists between two complement positions are the identity so that the
// (also codiagonal) tails satisfy the model hypotheses exactly.
inline TwistedTuple random_model(int n, const std::set<int>& A, int d, int N,
                                 std::uint64_t seed) {
  LatticeSpec spec{static_cast<int>(A.size()), d, N};
  const CMat q = random_unitary(d, seed * 1000003 + 17);
  std::map<std::pair<int, int>, CMat> twists;
  std::map<int, CMat> tails;
  std::uint64_t sub = seed * 7919;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const bool both_tail = !A.count(i) && !A.count(j);
      twists[{i, j}] = both_tail ? cidentity(d) : random_codiagonal(q, ++sub);
    }
  for (int i = 1; i <= n; ++i)
    if (!A.count(i)) tails[i] = random_codiagonal(q, ++sub);
  return model_tuple(spec, n, A, std::move(twists), std::move(tails));
}

}  // namespace tiso::testsupport
