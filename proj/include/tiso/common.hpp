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

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace tiso {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

// Rank, orthonormality and residual thresholds. All are relative to the
// operator-norm scale of whatever they are applied to.
struct Tolerance {
  double orth = 1e-10;
  double rank = 1e-10;
  double residual = 1e-10;

  void validate(Index max_dim = 1) const {
    if (!(orth > 0.0) || !(rank > 0.0) || !(residual > 0.0))
      throw std::invalid_argument("tolerances must be strictly positive");
    const double eps = std::numeric_limits<double>::epsilon();
    if (rank < eps * static_cast<double>(std::max<Index>(max_dim, 1)))
      throw std::invalid_argument("rank tolerance below machine-epsilon scale");
  }
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInputError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct RankError : Error { using Error::Error; };
struct ContainmentError : Error { using Error::Error; };
struct TruncationError : Error { using Error::Error; };
struct ClosureError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };
struct InconsistencyError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

inline bool all_finite(const CMat& m) { return m.allFinite(); }

// Operator 2-norm (largest singular value). Empty matrices have norm 0.
inline double op_norm(const CMat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<CMat>(m).singularValues()(0);
}

inline CMat cidentity(Index n) { return CMat::Identity(n, n); }

// Largest |entry| together with its coordinates; used for residual reports.
struct WorstEntry {
  double value = 0.0;
  Index row = -1;
  Index col = -1;
};

inline WorstEntry worst_entry(const CMat& m) {
  WorstEntry w;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > w.value) w = {std::abs(m(i, j)), i, j};
  return w;
}

}  // namespace tiso
