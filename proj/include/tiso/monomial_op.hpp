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

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "tiso/lattice.hpp"
#include "tiso/linalg.hpp"

namespace tiso {

// Monomial operators act on the truncated lattice space by
//
//   e_k (x) eta  |->  e_{k+s} (x) B G_1^{<c_1,k>} ... G_r^{<c_r,k>} eta,
//
// where s is a fixed degree shift, B is a fiber unitary, the twist
// generators G_t are commuting fiber unitaries commuting with B, and the
// c_t are integer exponent functionals on the lattice. The class is closed
// under composition and contains coordinate shifts, diagonal twist
// operators D_j[U], constant fiber operators I (x) U, and every model
// operator built from them. Because all fiber factors are unitary,
// rectangular sections between truncations N -> N+|s| are exact: no
// boundary error is ever introduced by the window.

struct MonomialOp {
  LatticeSpec spec;
  MultiIndex shift;                   // size m, entries >= 0
  CMat B;                             // d x d
  std::vector<CMat> gens;             // d x d each
  std::vector<MultiIndex> exps;       // one integer m-vector per generator

  int total_shift() const { return degree(shift); }

  // <c_t, k> for generator t
  long exponent_at(std::size_t t, const MultiIndex& k) const {
    long e = 0;
    for (std::size_t i = 0; i < k.size(); ++i)
      e += static_cast<long>(exps[t][i]) * k[i];
    return e;
  }

  CMat fiber_factor(const MultiIndex& k) const;
};

inline CMat unitary_power(const CMat& g, long p) {
  const Index d = g.rows();
  CMat base = p >= 0 ? g : CMat(g.adjoint());
  long e = p >= 0 ? p : -p;
  CMat acc = cidentity(d);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

inline CMat MonomialOp::fiber_factor(const MultiIndex& k) const {
  CMat f = B;
  for (std::size_t t = 0; t < gens.size(); ++t)
    f = f * unitary_power(gens[t], exponent_at(t, k));
  return f;
}

inline double commutator_norm(const CMat& a, const CMat& b) {
  return op_norm(a * b - b * a);
}

/// Checked constructor: validates the class invariants (unitary fiber data,
/// commuting generator family, B in the generators' commutant).
inline MonomialOp make_monomial(const LatticeSpec& spec, MultiIndex shift, CMat B,
                                std::vector<CMat> gens, std::vector<MultiIndex> exps,
                                const Tolerance& tol = {}) {
  spec.validate();
  if (static_cast<int>(shift.size()) != spec.m)
    throw DimensionError("shift length does not match lattice rank");
  for (int v : shift)
    if (v < 0) throw InvalidInputError("shift entries must be non-negative");
  if (B.rows() != spec.d || B.cols() != spec.d)
    throw DimensionError("front factor is not d x d");
  if (!is_unitary(B, tol))
    throw ConstructionError("front fiber factor is not unitary");
  if (gens.size() != exps.size())
    throw DimensionError("generator/exponent count mismatch");
  for (std::size_t t = 0; t < gens.size(); ++t) {
    if (gens[t].rows() != spec.d || gens[t].cols() != spec.d)
      throw DimensionError("twist generator is not d x d");
    if (!is_unitary(gens[t], tol))
      throw ConstructionError("twist generator is not unitary");
    if (static_cast<int>(exps[t].size()) != spec.m)
      throw DimensionError("exponent row length does not match lattice rank");
    if (commutator_norm(B, gens[t]) > tol.residual)
      throw ConstructionError("front factor does not commute with a twist generator");
    for (std::size_t u = 0; u < t; ++u)
      if (commutator_norm(gens[t], gens[u]) > tol.residual)
        throw ConstructionError("twist generators do not commute");
  }
  MonomialOp op;
  op.spec = spec;
  op.shift = std::move(shift);
  op.B = std::move(B);
  op.gens = std::move(gens);
  op.exps = std::move(exps);
  return op;
}

/// Coordinate shift M_{z_i}, 1 <= i <= m.
inline MonomialOp mult_op(const LatticeSpec& spec, int i) {
  if (i < 1 || i > spec.m) throw InvalidInputError("mult_op index out of range");
  MultiIndex s(spec.m, 0);
  s[i - 1] = 1;
  return make_monomial(spec, std::move(s), cidentity(spec.d), {}, {});
}

/// Diagonal operator D_j[U]: e_k (x) eta |-> e_k (x) U^{k_j} eta.
inline MonomialOp diag_op(const LatticeSpec& spec, int j, const CMat& U,
                          const Tolerance& tol = {}) {
  if (j < 1 || j > spec.m) throw InvalidInputError("diag_op index out of range");
  MultiIndex c(spec.m, 0);
  c[j - 1] = 1;
  return make_monomial(spec, MultiIndex(spec.m, 0), cidentity(spec.d), {U}, {c}, tol);
}

/// Constant fiber operator I (x) U.
inline MonomialOp const_op(const LatticeSpec& spec, const CMat& U,
                           const Tolerance& tol = {}) {
  return make_monomial(spec, MultiIndex(spec.m, 0), U, {}, {}, tol);
}

/// Composition op2 after op1. Stays in the monomial class when the merged
/// generator family commutes and commutes with both front factors; otherwise
/// throws ClosureError and the caller must fall back to dense matrices.
inline MonomialOp compose(const MonomialOp& op2, const MonomialOp& op1,
                          const Tolerance& tol = {}) {
  if (!(op1.spec == op2.spec))
    throw DimensionError("compose needs a common lattice spec");
  std::vector<CMat> gens = op1.gens;
  std::vector<MultiIndex> exps = op1.exps;
  // merge op2's generators, collapsing repeats of the same matrix
  for (std::size_t t = 0; t < op2.gens.size(); ++t) {
    bool merged = false;
    for (std::size_t u = 0; u < gens.size(); ++u) {
      if (op_norm(gens[u] - op2.gens[t]) < 1e-12) {
        for (int i = 0; i < op1.spec.m; ++i) exps[u][i] += op2.exps[t][i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      gens.push_back(op2.gens[t]);
      exps.push_back(op2.exps[t]);
    }
  }
  for (std::size_t t = 0; t < gens.size(); ++t) {
    for (std::size_t u = 0; u < t; ++u)
      if (commutator_norm(gens[t], gens[u]) > tol.residual)
        throw ClosureError("merged twist generators do not commute");
    if (commutator_norm(gens[t], op1.B) > tol.residual ||
        commutator_norm(gens[t], op2.B) > tol.residual)
      throw ClosureError("twist generator does not commute with a front factor");
  }
  CMat front = op2.B;
  for (std::size_t t = 0; t < op2.gens.size(); ++t)
    front = front * unitary_power(op2.gens[t], op2.exponent_at(t, op1.shift));
  front = front * op1.B;
  MultiIndex s(op1.spec.m);
  for (int i = 0; i < op1.spec.m; ++i) s[i] = op1.shift[i] + op2.shift[i];
  return make_monomial(op1.spec, std::move(s), std::move(front), std::move(gens),
                       std::move(exps), tol);
}

// ---------------------------------------------------------------------------
// Graded block application. A "level" is the total-degree bound of the
// domain window; monomial operators map window L exactly onto window
// L + |s|. Negative levels denote the empty window.

inline Index level_dim(const LatticeSpec& spec, int level) {
  if (level < 0) return 0;
  return Basis(spec.with_bound(level)).dim();
}

/// Applies the operator to a block of column vectors over window `level`.
/// Rows of the result are indexed by window level + |s|.
inline CMat apply_block(const MonomialOp& op, const CMat& x, int level) {
  const int out_level = level + op.total_shift();
  CMat out = CMat::Zero(level_dim(op.spec, out_level), x.cols());
  if (level < 0) return out;
  Basis dom(op.spec.with_bound(level));
  Basis cod(op.spec.with_bound(out_level));
  if (x.rows() != dom.dim()) throw DimensionError("block has wrong row count");
  const int d = op.spec.d;
  MultiIndex img(op.spec.m);
  for (Index p = 0; p < dom.num_points(); ++p) {
    const MultiIndex& k = dom.points()[p];
    for (int i = 0; i < op.spec.m; ++i) img[i] = k[i] + op.shift[i];
    out.middleRows(cod.slab_start(img), d) =
        op.fiber_factor(k) * x.middleRows(p * d, d);
  }
  return out;
}

/// Adjoint on a block over window `level`; rows of the result are indexed
/// by window level - |s| (empty when that is negative).
inline CMat adjoint_block(const MonomialOp& op, const CMat& x, int level) {
  const int out_level = level - op.total_shift();
  CMat out = CMat::Zero(level_dim(op.spec, out_level), x.cols());
  if (out_level < 0 || level < 0) return out;
  Basis dom(op.spec.with_bound(level));
  Basis cod(op.spec.with_bound(out_level));
  if (x.rows() != dom.dim()) throw DimensionError("block has wrong row count");
  const int d = op.spec.d;
  MultiIndex img(op.spec.m);
  for (Index p = 0; p < cod.num_points(); ++p) {
    const MultiIndex& k = cod.points()[p];
    for (int i = 0; i < op.spec.m; ++i) img[i] = k[i] + op.shift[i];
    out.middleRows(p * d, d) =
        op.fiber_factor(k).adjoint() * x.middleRows(dom.slab_start(img), d);
  }
  return out;
}

/// (I (x) U) on a block over window `level` (square).
inline CMat fiber_block(const LatticeSpec& spec, const CMat& u, const CMat& x, int level) {
  if (level < 0) return CMat(0, x.cols());
  Basis dom(spec.with_bound(level));
  if (x.rows() != dom.dim()) throw DimensionError("block has wrong row count");
  CMat out(x.rows(), x.cols());
  const int d = spec.d;
  for (Index p = 0; p < dom.num_points(); ++p)
    out.middleRows(p * d, d) = u * x.middleRows(p * d, d);
  return out;
}

/// A block of column vectors tagged with its window level. Products of
/// monomial operators are tracked through levels; every step is an exact
/// corner of the untruncated operator, so chains of applications introduce
/// no truncation error beyond the clip at degree zero.
struct LeveledBlock {
  int level = 0;
  CMat m;
};

inline LeveledBlock id_block(const LatticeSpec& spec, int level) {
  const Index d = level_dim(spec, level);
  return {level, CMat::Identity(d, d)};
}

inline LeveledBlock op_apply(const MonomialOp& op, const LeveledBlock& x) {
  return {x.level + op.total_shift(), apply_block(op, x.m, x.level)};
}

inline LeveledBlock op_adjoint_apply(const MonomialOp& op, const LeveledBlock& x) {
  return {x.level - op.total_shift(), adjoint_block(op, x.m, x.level)};
}

inline LeveledBlock unitary_fiber_apply(const LatticeSpec& spec, const CMat& u,
                                        const LeveledBlock& x) {
  return {x.level, fiber_block(spec, u, x.m, x.level)};
}

/// Difference of two leveled blocks with a common domain; the lower-level
/// block is zero-padded into the higher window (exact for graded maps).
inline CMat block_difference(const LatticeSpec& spec, const LeveledBlock& a,
                             const LeveledBlock& b) {
  if (a.m.cols() != b.m.cols()) throw DimensionError("block column mismatch");
  const int top = std::max(a.level, b.level);
  const Index rows = level_dim(spec, top);
  CMat pa = CMat::Zero(rows, a.m.cols());
  CMat pb = CMat::Zero(rows, b.m.cols());
  if (a.m.rows() > 0) pa.topRows(a.m.rows()) = a.m;
  if (b.m.rows() > 0) pb.topRows(b.m.rows()) = b.m;
  return pa - pb;
}

/// Action on a vector over the operator's declared window N; the result is
/// indexed by window N + |s|.
inline CVec apply(const MonomialOp& op, const CVec& v) {
  return apply_block(op, v, op.spec.N);
}

/// Adjoint action on a vector over window N; the result lives on the same
/// window (slabs with k + s beyond the window receive no contribution).
inline CVec adjoint_apply(const MonomialOp& op, const CVec& v) {
  CMat low = adjoint_block(op, v, op.spec.N);
  CVec out = CVec::Zero(level_dim(op.spec, op.spec.N));
  out.head(low.rows()) = low.col(0);
  return out;
}

/// Matrix of the operator on graded bases, window N_dom -> N_dom + |s|.
inline CMat to_matrix(const MonomialOp& op, int n_dom) {
  if (n_dom > op.spec.N)
    throw TruncationError("to_matrix beyond the declared truncation");
  if (n_dom < 0) throw InvalidInputError("to_matrix needs N_dom >= 0");
  return apply_block(op, CMat::Identity(level_dim(op.spec, n_dom), level_dim(op.spec, n_dom)),
                     n_dom);
}

// ---------------------------------------------------------------------------

/// An n-tuple of monomial operators over a common lattice together with the
/// fiber twist unitaries U_{ij} (i < j stored; U_{ji} = U_{ij}^*).
struct TwistedTuple {
  LatticeSpec spec;
  std::vector<MonomialOp> ops;
  std::map<std::pair<int, int>, CMat> twists;

  int n() const { return static_cast<int>(ops.size()); }

  const MonomialOp& op(int i) const {  // 1-based
    if (i < 1 || i > n()) throw InvalidInputError("operator index out of range");
    return ops[static_cast<std::size_t>(i - 1)];
  }

  CMat twist(int i, int j) const {
    if (i == j || i < 1 || j < 1 || i > n() || j > n())
      throw InvalidInputError("twist index out of range");
    auto it = twists.find({std::min(i, j), std::max(i, j)});
    if (it == twists.end()) return cidentity(spec.d);
    return i < j ? it->second : CMat(it->second.adjoint());
  }

  int max_shift() const {
    int r = 0;
    for (const auto& o : ops) r = std::max(r, o.total_shift());
    return r;
  }
};

/// Conjugates all fiber data by a unitary W (the tuple transported by
/// I (x) W). Relation residuals are invariant under this map.
inline TwistedTuple conjugate_fiber(const TwistedTuple& t, const CMat& w,
                                    const Tolerance& tol = {}) {
  if (w.rows() != t.spec.d || w.cols() != t.spec.d)
    throw DimensionError("conjugating unitary has wrong size");
  if (!is_unitary(w, tol)) throw InvalidInputError("conjugating matrix is not unitary");
  TwistedTuple out;
  out.spec = t.spec;
  const CMat wa = w.adjoint();
  for (const auto& o : t.ops) {
    std::vector<CMat> gens;
    gens.reserve(o.gens.size());
    for (const auto& g : o.gens) gens.push_back(w * g * wa);
    out.ops.push_back(make_monomial(o.spec, o.shift, w * o.B * wa, std::move(gens),
                                    o.exps, tol));
  }
  for (const auto& [key, u] : t.twists) out.twists[key] = w * u * wa;
  return out;
}

/// The model tuple of shifts and fiber unitaries: positions in A carry
/// twisted coordinate shifts, positions in the complement carry twisted
/// constant operators built from the tail unitaries. Hypotheses (commuting
/// twist family, tails compatible with the twists) are verified up to the
/// residual tolerance.
inline TwistedTuple model_tuple(const LatticeSpec& spec, int n, const std::set<int>& A,
                                std::map<std::pair<int, int>, CMat> twists,
                                std::map<int, CMat> tails, const Tolerance& tol = {}) {
  spec.validate();
  if (n < 1) throw InvalidInputError("model tuple needs n >= 1");
  if (static_cast<int>(A.size()) != spec.m)
    throw ConstructionError("|A| must equal the lattice rank m");
  for (int a : A)
    if (a < 1 || a > n) throw InvalidInputError("A contains an index outside 1..n");
  const Index d = spec.d;

  // fill missing twists with the identity, validate all of them
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (!twists.count({i, j})) twists[{i, j}] = cidentity(d);
  for (const auto& [key, u] : twists) {
    if (u.rows() != d || u.cols() != d) throw DimensionError("twist matrix is not d x d");
    if (!is_unitary(u, tol)) throw ConstructionError("twist matrix is not unitary");
  }
  for (auto it1 = twists.begin(); it1 != twists.end(); ++it1)
    for (auto it2 = twists.begin(); it2 != it1; ++it2)
      if (commutator_norm(it1->second, it2->second) > tol.residual)
        throw ConstructionError("twist family is not commuting");

  std::vector<int> p(A.begin(), A.end());
  std::vector<int> q;
  for (int i = 1; i <= n; ++i)
    if (!A.count(i)) q.push_back(i);

  for (int qi : q)
    if (!tails.count(qi)) tails[qi] = cidentity(d);
  auto twist_of = [&](int i, int j) -> CMat {
    if (i < j) return twists.at({i, j});
    return twists.at({j, i}).adjoint();
  };
  for (int qi : q) {
    const CMat& u = tails.at(qi);
    if (u.rows() != d || u.cols() != d) throw DimensionError("tail matrix is not d x d");
    if (!is_unitary(u, tol)) throw ConstructionError("tail matrix is not unitary");
    for (const auto& [key, w] : twists)
      if (commutator_norm(u, w) > tol.residual)
        throw ConstructionError("tail does not commute with the twist family");
  }
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = a + 1; b < q.size(); ++b) {
      const CMat& ui = tails.at(q[a]);
      const CMat& uj = tails.at(q[b]);
      if (op_norm(ui * uj - twist_of(q[a], q[b]) * uj * ui) > tol.residual)
        throw ConstructionError("tails violate the twisted commutation hypothesis");
    }

  TwistedTuple t;
  t.spec = spec;
  t.ops.resize(n, MonomialOp{});
  t.twists = twists;
  for (std::size_t i = 0; i < p.size(); ++i) {
    MultiIndex s(spec.m, 0);
    s[static_cast<int>(i)] = 1;
    std::vector<CMat> gens;
    std::vector<MultiIndex> exps;
    for (std::size_t tidx = 0; tidx < i; ++tidx) {
      gens.push_back(twist_of(p[i], p[tidx]));
      MultiIndex c(spec.m, 0);
      c[static_cast<int>(tidx)] = 1;
      exps.push_back(std::move(c));
    }
    t.ops[static_cast<std::size_t>(p[i] - 1)] =
        make_monomial(spec, std::move(s), cidentity(d), std::move(gens), std::move(exps), tol);
  }
  for (int qi : q) {
    std::vector<CMat> gens;
    std::vector<MultiIndex> exps;
    for (std::size_t tidx = 0; tidx < p.size(); ++tidx) {
      gens.push_back(twist_of(qi, p[tidx]));
      MultiIndex c(spec.m, 0);
      c[static_cast<int>(tidx)] = 1;
      exps.push_back(std::move(c));
    }
    t.ops[static_cast<std::size_t>(qi - 1)] =
        make_monomial(spec, MultiIndex(spec.m, 0), tails.at(qi), std::move(gens),
                      std::move(exps), tol);
  }
  return t;
}

/// Direct sum of tuples with a common operator count. All operators and
/// twists act block-diagonally, so every relation and subspace computation
/// decomposes part by part.
struct TupleSum {
  std::vector<TwistedTuple> parts;

  TupleSum() = default;
  explicit TupleSum(TwistedTuple t) { parts.push_back(std::move(t)); }
  explicit TupleSum(std::vector<TwistedTuple> p) : parts(std::move(p)) {
    if (parts.empty()) throw InvalidInputError("direct sum needs at least one part");
    for (const auto& t : parts)
      if (t.n() != parts.front().n())
        throw DimensionError("direct sum parts disagree on the operator count");
  }

  int n() const { return parts.empty() ? 0 : parts.front().n(); }
  Index fiber_dim() const {
    Index d = 0;
    for (const auto& t : parts) d += t.spec.d;
    return d;
  }
};

}  // namespace tiso
