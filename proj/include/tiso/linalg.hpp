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

#include <random>
#include <vector>

#include "tiso/common.hpp"

namespace tiso {

/// A subspace of C^ambient, stored as an orthonormal frame (columns).
/// Frames are non-canonical; equality is always tested through projectors.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.frame_ = CMat(ambient, 0);
    return s;
  }

  static Subspace full(Index ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.frame_ = CMat::Identity(ambient, ambient);
    return s;
  }

  // Adopts `frame` after checking orthonormality of its columns.
  static Subspace from_frame(CMat frame, const Tolerance& tol = {}) {
    if (!all_finite(frame)) throw InvalidInputError("frame has non-finite entries");
    if (frame.cols() > 0) {
      const double r = op_norm(CMat(frame.adjoint() * frame - cidentity(frame.cols())));
      if (r > tol.orth)
        throw InvalidInputError("frame columns are not orthonormal (residual " +
                                std::to_string(r) + ")");
    }
    Subspace s;
    s.ambient_ = frame.rows();
    s.frame_ = std::move(frame);
    return s;
  }

  // Orthonormal basis of the column span of `cols` (rank-revealing SVD).
  // `scale` is an absolute floor for the rank decision; pass 1.0 when the
  // columns come from unit frames so that pure-noise input has rank 0.
  static Subspace span(const CMat& cols, const Tolerance& tol = {}, double scale = 0.0) {
    if (!all_finite(cols)) throw InvalidInputError("span input has non-finite entries");
    if (cols.cols() == 0 || cols.rows() == 0) return Subspace::zero(cols.rows());
    Eigen::JacobiSVD<CMat> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double cut = tol.rank * std::max(smax, scale);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) ++rank;
    if (smax == 0.0) rank = 0;
    Subspace s;
    s.ambient_ = cols.rows();
    s.frame_ = svd.matrixU().leftCols(rank);
    return s;
  }

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return frame_.cols(); }
  const CMat& frame() const { return frame_; }

  CMat projector() const { return frame_ * frame_.adjoint(); }

  // ||(I - P_this) other|| over unit columns of `other`'s frame.
  bool contains(const Subspace& other, double tol) const {
    if (other.ambient_ != ambient_) throw DimensionError("ambient mismatch");
    if (other.dim() == 0) return true;
    CMat rest = other.frame_ - frame_ * (frame_.adjoint() * other.frame_);
    return op_norm(rest) <= tol;
  }

  static double distance(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_) throw DimensionError("ambient mismatch");
    return op_norm(a.projector() - b.projector());
  }

 private:
  Index ambient_ = 0;
  CMat frame_;
};

struct IsometryCheck {
  bool pass = false;
  double residual = 0.0;
};

/// residual = ||M*M - I||; pass iff residual < tol.residual.
inline IsometryCheck is_isometry(const CMat& m, const Tolerance& tol = {}) {
  IsometryCheck c;
  c.residual = op_norm(CMat(m.adjoint() * m - cidentity(m.cols())));
  c.pass = c.residual < tol.residual;
  return c;
}

inline bool is_unitary(const CMat& m, const Tolerance& tol = {}) {
  if (m.rows() != m.cols()) return false;
  return is_isometry(m, tol).pass && is_isometry(m.adjoint(), tol).pass;
}

/// Null space of M. Singular values below tol.rank * sigma_max count as zero.
inline Subspace kernel(const CMat& m, const Tolerance& tol = {}) {
  if (!all_finite(m)) throw InvalidInputError("kernel of non-finite matrix");
  if (m.cols() == 0) return Subspace::zero(0);
  if (m.rows() == 0) return Subspace::full(m.cols());
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank * smax) ++rank;
  if (smax == 0.0) rank = 0;
  return Subspace::from_frame(svd.matrixV().rightCols(m.cols() - rank), tol);
}

/// Intersection of subspaces via the eigenvalue-1 cluster of the averaged
/// projector; numerically symmetric in its arguments.
inline Subspace intersect(const std::vector<Subspace>& spaces, const Tolerance& tol = {}) {
  if (spaces.empty()) throw InvalidInputError("intersect of empty list");
  const Index ambient = spaces.front().ambient_dim();
  for (const auto& s : spaces)
    if (s.ambient_dim() != ambient) throw DimensionError("ambient mismatch in intersect");
  if (ambient == 0) return Subspace::zero(0);
  CMat avg = CMat::Zero(ambient, ambient);
  for (const auto& s : spaces) avg += s.projector();
  avg /= static_cast<double>(spaces.size());
  avg = (avg + CMat(avg.adjoint())) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(avg);
  const auto& ev = es.eigenvalues();
  Index lo = ambient;  // eigenvalues ascend; the 1-cluster sits at the top
  for (Index i = 0; i < ambient; ++i)
    if (ev(i) >= 1.0 - tol.rank) { lo = i; break; }
  return Subspace::from_frame(es.eigenvectors().rightCols(ambient - lo), tol);
}

/// S (-) T for T contained in S. dim of the result is dim S - dim T.
inline Subspace ortho_complement_within(const Subspace& s, const Subspace& t,
                                        const Tolerance& tol = {}) {
  if (s.ambient_dim() != t.ambient_dim()) throw DimensionError("ambient mismatch");
  if (!s.contains(t, tol.orth))
    throw ContainmentError("T is not contained in S");
  CMat rest = s.frame() - t.frame() * (t.frame().adjoint() * s.frame());
  Subspace r = Subspace::span(rest, tol, 1.0);
  if (r.dim() != s.dim() - t.dim())
    throw RankError("orthocomplement dimension mismatch");
  return r;
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b, const Tolerance& tol = {}) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("ambient mismatch");
  CMat cols(a.ambient_dim(), a.dim() + b.dim());
  cols << a.frame(), b.frame();
  return Subspace::span(cols, tol, 1.0);
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
/// diagonal phases absorbed into Q. Deterministic per seed.
inline CMat random_unitary(Index d, std::uint64_t seed) {
  if (d < 1) throw InvalidInputError("random_unitary needs d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat a(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      a(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<CMat> qr(a);
  CMat q = qr.householderQ() * cidentity(d);
  CMat r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

/// Unitary factor Q of the polar decomposition M = Q P, P positive.
inline CMat polar_unitary(const CMat& m, const Tolerance& tol = {}) {
  if (m.rows() != m.cols()) throw DimensionError("polar_unitary needs a square matrix");
  if (!all_finite(m)) throw InvalidInputError("polar_unitary of non-finite matrix");
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return CMat(0, 0);
  if (sv(sv.size() - 1) <= tol.rank * sv(0))
    throw RankError("polar_unitary of a (numerically) singular matrix");
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace tiso
