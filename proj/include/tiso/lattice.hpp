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

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "tiso/common.hpp"

namespace tiso {

using MultiIndex = std::vector<int>;  // point of Z_+^m

inline int degree(const MultiIndex& k) {
  return std::accumulate(k.begin(), k.end(), 0);
}

inline std::string to_string(const MultiIndex& k) {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(k[i]);
  }
  return s;
}

/// Truncated lattice Z_+^m tensor a d-dimensional fiber: all multi-degrees
/// with k_1 + ... + k_m <= N. m = 0 denotes a pure fiber space.
struct LatticeSpec {
  int m = 1;
  int d = 1;
  int N = 0;

  void validate() const {
    if (m < 0 || d < 1 || N < 0)
      throw InvalidInputError("lattice spec needs m >= 0, d >= 1, N >= 0");
  }

  LatticeSpec with_bound(int bound) const {
    LatticeSpec s = *this;
    s.N = std::max(bound, 0);
    return s;
  }

  bool operator==(const LatticeSpec& o) const { return m == o.m && d == o.d && N == o.N; }
};

struct GradedIndex {
  MultiIndex k;
  int slot = 0;  // fiber coordinate, 0..d-1
};

/// Basis bookkeeping for a LatticeSpec: graded-lexicographic point order
/// (ascending |k|, then lexicographic k), d fiber slots per point.
class Basis {
 public:
  explicit Basis(const LatticeSpec& spec) : spec_(spec) {
    spec.validate();
    MultiIndex k(spec.m, 0);
    if (spec.m == 0) {
      points_.push_back(k);
    } else {
      for (int total = 0; total <= spec.N; ++total) emit(k, 0, total);
    }
    for (std::size_t i = 0; i < points_.size(); ++i)
      position_[points_[i]] = static_cast<Index>(i);
  }

  const LatticeSpec& spec() const { return spec_; }
  const std::vector<MultiIndex>& points() const { return points_; }
  Index num_points() const { return static_cast<Index>(points_.size()); }
  Index dim() const { return num_points() * spec_.d; }

  bool in_range(const MultiIndex& k) const {
    if (static_cast<int>(k.size()) != spec_.m) return false;
    for (int v : k)
      if (v < 0) return false;
    return degree(k) <= spec_.N;
  }

  Index point_index(const MultiIndex& k) const {
    auto it = position_.find(k);
    if (it == position_.end())
      throw TruncationError("lattice point (" + tiso::to_string(k) + ") outside truncation");
    return it->second;
  }

  Index slab_start(const MultiIndex& k) const { return point_index(k) * spec_.d; }

  std::vector<GradedIndex> indices() const {
    std::vector<GradedIndex> out;
    out.reserve(dim());
    for (const auto& k : points_)
      for (int s = 0; s < spec_.d; ++s) out.push_back({k, s});
    return out;
  }

 private:
  void emit(MultiIndex& k, int pos, int remaining) {
    if (pos == spec_.m - 1) {
      k[pos] = remaining;
      points_.push_back(k);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      k[pos] = v;
      emit(k, pos + 1, remaining - v);
    }
  }

  LatticeSpec spec_;
  std::vector<MultiIndex> points_;
  std::map<MultiIndex, Index> position_;
};

inline std::vector<GradedIndex> enumerate_basis(const LatticeSpec& spec) {
  return Basis(spec).indices();
}

/// Contiguous index range [first, first + d) of the fiber slab at k.
inline std::pair<Index, Index> slab(const LatticeSpec& spec, const MultiIndex& k) {
  Basis b(spec);
  const Index start = b.slab_start(k);
  return {start, start + spec.d};
}

}  // namespace tiso
