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

#include <string>
#include <vector>

#include "tiso/monomial_op.hpp"

namespace tiso {

// Machine-readable residual reports for the defining relations of a twisted
// isometry tuple and the identities derived from them. Every check compares
// window matrices; mismatched codomain windows are embedded by zero-padding
// (exact, the operators are graded).

struct RelationEntry {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  Index worst_row = -1;  // coordinates of the worst-offending entry
  Index worst_col = -1;
};

struct RelationReport {
  std::vector<RelationEntry> entries;
  bool pass = true;
  double max_residual = 0.0;

  void add(std::string name, double residual, const Tolerance& tol,
           Index wrow = -1, Index wcol = -1) {
    const bool ok = residual < tol.residual;
    entries.push_back({std::move(name), residual, ok, wrow, wcol});
    pass = pass && ok;
    max_residual = std::max(max_residual, residual);
  }

  void add_diff(std::string name, const CMat& diff, const Tolerance& tol) {
    const WorstEntry w = worst_entry(diff);
    add(std::move(name), op_norm(diff), tol, w.row, w.col);
  }

  void merge(const RelationReport& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    pass = pass && other.pass;
    max_residual = std::max(max_residual, other.max_residual);
  }
};

namespace detail {

inline std::string vname(int i) { return "V" + std::to_string(i); }
inline std::string uname(int i, int j) {
  return "U" + std::to_string(i) + std::to_string(j);
}

inline LeveledBlock pow_apply(const MonomialOp& op, LeveledBlock x, int p) {
  for (int t = 0; t < p; ++t) x = op_apply(op, x);
  return x;
}

inline LeveledBlock pow_adjoint(const MonomialOp& op, LeveledBlock x, int p) {
  for (int t = 0; t < p; ++t) x = op_adjoint_apply(op, x);
  return x;
}

// X - V_i V_i* X at a fixed level
inline LeveledBlock range_defect(const MonomialOp& op, const LeveledBlock& x) {
  LeveledBlock y = op_apply(op, op_adjoint_apply(op, x));
  CMat m = x.m;
  if (y.m.rows() > 0) m.topRows(y.m.rows()) -= y.m;
  return {x.level, std::move(m)};
}

}  // namespace detail

/// Default check level leaving `words` many operator applications of room
/// inside the declared truncation.
inline int default_check_level(const TwistedTuple& t, int words) {
  const int r = t.max_shift();
  const int level = t.spec.N - words * r;
  if (level < 0)
    throw TruncationError("truncation too small for the requested relation checks");
  return level;
}

/// Defining relations: isometry of each V_i, the twisted cross commutation
/// V_i* V_j = U_ij^* V_j V_i^*, centrality of the twists, and commutation of
/// the twist family.
inline RelationReport verify_twisted(const TwistedTuple& t, int n_check,
                                     const Tolerance& tol = {}) {
  if (n_check < 0 || n_check + 2 * t.max_shift() > t.spec.N)
    throw TruncationError("insufficient truncation headroom for verify_twisted");
  RelationReport rep;
  const int n = t.n();
  const LatticeSpec& spec = t.spec;
  const LeveledBlock id = id_block(spec, n_check);

  for (int i = 1; i <= n; ++i) {
    LeveledBlock vi = op_apply(t.op(i), id);
    LeveledBlock back = op_adjoint_apply(t.op(i), vi);
    rep.add_diff("isometry(" + detail::vname(i) + ")",
                 block_difference(spec, back, id), tol);
  }

  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      LeveledBlock lhs = op_adjoint_apply(t.op(i), op_apply(t.op(j), id));
      LeveledBlock rhs = op_apply(t.op(j), op_adjoint_apply(t.op(i), id));
      rhs = unitary_fiber_apply(spec, t.twist(i, j).adjoint(), rhs);
      rep.add_diff("cross(" + detail::vname(i) + "," + detail::vname(j) + ")",
                   block_difference(spec, lhs, rhs), tol);
    }

  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const CMat u = t.twist(i, j);
      rep.add("twist_unitary(" + detail::uname(i, j) + ")",
              std::max(is_isometry(u, tol).residual,
                       is_isometry(u.adjoint(), tol).residual),
              tol);
      for (int k = 1; k <= n; ++k) {
        LeveledBlock lhs = op_apply(t.op(k), unitary_fiber_apply(spec, u, id));
        LeveledBlock rhs = unitary_fiber_apply(spec, u, op_apply(t.op(k), id));
        rep.add_diff("central(" + detail::vname(k) + "," + detail::uname(i, j) + ")",
                     block_difference(spec, lhs, rhs), tol);
      }
    }

  double worst_commute = 0.0;
  std::string worst_name = "twist_family_commutes";
  for (auto it1 = t.twists.begin(); it1 != t.twists.end(); ++it1)
    for (auto it2 = t.twists.begin(); it2 != it1; ++it2) {
      const double r = commutator_norm(it1->second, it2->second);
      if (r > worst_commute) {
        worst_commute = r;
        worst_name = "twist_family_commutes(" +
                     detail::uname(it1->first.first, it1->first.second) + "," +
                     detail::uname(it2->first.first, it2->first.second) + ")";
      }
    }
  rep.add(worst_name, worst_commute, tol);
  return rep;
}

inline RelationReport verify_twisted(const TwistedTuple& t, const Tolerance& tol = {}) {
  return verify_twisted(t, default_check_level(t, 2), tol);
}

/// Identities implied by the defining relations: V_i V_j = U_ij V_j V_i,
/// the commutator formula U_ij = V_i* V_j* V_i V_j, and the power rule
/// V_p V_q^i = U_pq^i V_q^i V_p for small i.
inline RelationReport derived_checks(const TwistedTuple& t, int n_check,
                                     const Tolerance& tol = {}) {
  if (n_check < 0 || n_check + 4 * t.max_shift() > t.spec.N)
    throw TruncationError("insufficient truncation headroom for derived_checks");
  RelationReport rep;
  const int n = t.n();
  const LatticeSpec& spec = t.spec;
  const LeveledBlock id = id_block(spec, n_check);

  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      LeveledBlock lhs = op_apply(t.op(i), op_apply(t.op(j), id));
      LeveledBlock rhs = unitary_fiber_apply(
          spec, t.twist(i, j), op_apply(t.op(j), op_apply(t.op(i), id)));
      rep.add_diff("commute(" + detail::vname(i) + "," + detail::vname(j) + ")",
                   block_difference(spec, lhs, rhs), tol);
    }

  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      LeveledBlock w = op_apply(t.op(j), id);
      w = op_apply(t.op(i), w);
      w = op_adjoint_apply(t.op(j), w);
      w = op_adjoint_apply(t.op(i), w);
      LeveledBlock u = unitary_fiber_apply(spec, t.twist(i, j), id);
      rep.add_diff("commutator_twist(" + detail::uname(i, j) + ")",
                   block_difference(spec, w, u), tol);
    }

  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q) {
      if (p == q) continue;
      for (int e = 1; e <= 3; ++e) {
        LeveledBlock lhs = op_apply(t.op(p), detail::pow_apply(t.op(q), id, e));
        LeveledBlock rhs = detail::pow_apply(t.op(q), op_apply(t.op(p), id), e);
        rhs = unitary_fiber_apply(spec, unitary_power(t.twist(p, q), e), rhs);
        rep.add_diff("power_rule(" + detail::vname(p) + "," + detail::vname(q) +
                         "^" + std::to_string(e) + ")",
                     block_difference(spec, lhs, rhs), tol);
      }
    }
  return rep;
}

inline RelationReport derived_checks(const TwistedTuple& t, const Tolerance& tol = {}) {
  return derived_checks(t, default_check_level(t, 4), tol);
}

/// Matrix units E_{pq,sr} = V1^p V2^q (1-V1V1*)(1-V2V2*) V2*^r V1*^s built
/// from the first two operators; checks the product rule with the Kronecker
/// deltas and the adjoint symmetry over all indices <= max_index. Individual
/// residuals are aggregated per family with the worst case named.
inline RelationReport matrix_unit_check(const TwistedTuple& t, int max_index,
                                        int n_check, const Tolerance& tol = {}) {
  if (t.n() < 2) throw InvalidInputError("matrix units need at least two operators");
  if (n_check < 0 || n_check + (2 * max_index + 2) * t.max_shift() > t.spec.N)
    throw TruncationError("insufficient truncation headroom for matrix units");
  RelationReport rep;
  const LatticeSpec& spec = t.spec;
  const MonomialOp& v1 = t.op(1);
  const MonomialOp& v2 = t.op(2);

  auto unit = [&](int p, int q, int s, int r, LeveledBlock x) {
    x = detail::pow_adjoint(v1, x, s);
    x = detail::pow_adjoint(v2, x, r);
    x = detail::range_defect(v2, x);
    x = detail::range_defect(v1, x);
    x = detail::pow_apply(v2, x, q);
    x = detail::pow_apply(v1, x, p);
    return x;
  };

  const LeveledBlock id = id_block(spec, n_check);
  const int mi = max_index;

  double worst_prod = 0.0;
  std::string worst_prod_name = "unit_product";
  double worst_adj = 0.0;
  std::string worst_adj_name = "unit_adjoint";

  for (int p = 0; p <= mi; ++p)
    for (int q = 0; q <= mi; ++q)
      for (int s = 0; s <= mi; ++s)
        for (int r = 0; r <= mi; ++r) {
          LeveledBlock e1 = unit(p, q, s, r, id);
          // adjoint symmetry: (E_{pq,sr})^* = E_{sr,pq} on matching windows
          LeveledBlock e2 = unit(s, r, p, q, {e1.level, cidentity(level_dim(spec, e1.level))});
          const double ra = op_norm(block_difference(
              spec, {e2.level, CMat(e1.m.adjoint())}, e2));
          if (ra > worst_adj) {
            worst_adj = ra;
            worst_adj_name = "unit_adjoint(E" + std::to_string(p) + std::to_string(q) +
                             "," + std::to_string(s) + std::to_string(r) + ")";
          }
          for (int i = 0; i <= mi; ++i)
            for (int j = 0; j <= mi; ++j)
              for (int l = 0; l <= mi; ++l)
                for (int k = 0; k <= mi; ++k) {
                  LeveledBlock inner = unit(i, j, l, k, id);
                  LeveledBlock lhs = unit(p, q, s, r, inner);
                  LeveledBlock rhs = (s == i && r == j)
                                         ? unit(p, q, l, k, id)
                                         : LeveledBlock{lhs.level,
                                                        CMat::Zero(lhs.m.rows(),
                                                                   lhs.m.cols())};
                  const double rr = op_norm(block_difference(spec, lhs, rhs));
                  if (rr > worst_prod) {
                    worst_prod = rr;
                    worst_prod_name = "unit_product(E" + std::to_string(p) +
                                      std::to_string(q) + "," + std::to_string(s) +
                                      std::to_string(r) + ";E" + std::to_string(i) +
                                      std::to_string(j) + "," + std::to_string(l) +
                                      std::to_string(k) + ")";
                  }
                }
        }
  rep.add(worst_prod_name, worst_prod, tol);
  rep.add(worst_adj_name, worst_adj, tol);

  // E_{00,00} is the joint range defect, an orthogonal projection
  LeveledBlock e0 = unit(0, 0, 0, 0, id);
  rep.add_diff("unit_projection_idempotent",
               block_difference(spec, {e0.level, CMat(e0.m * e0.m)}, e0), tol);
  rep.add_diff("unit_projection_selfadjoint",
               block_difference(spec, {e0.level, CMat(e0.m.adjoint())}, e0), tol);
  return rep;
}

/// Commutation of the range projections P_i(m) = V_i^m V_i^{*m} among
/// themselves and with the twists, plus projection axioms.
inline RelationReport projection_family_check(const TwistedTuple& t,
                                              const std::vector<int>& degrees,
                                              int n_check, const Tolerance& tol = {}) {
  int max_deg = 0;
  for (int d : degrees) {
    if (d < 0) throw InvalidInputError("projection degrees must be non-negative");
    max_deg = std::max(max_deg, d);
  }
  if (n_check < 0 || n_check + 2 * max_deg * t.max_shift() > t.spec.N)
    throw TruncationError("insufficient truncation headroom for projection family");
  RelationReport rep;
  const LatticeSpec& spec = t.spec;
  const LeveledBlock id = id_block(spec, n_check);
  const int n = t.n();

  auto proj = [&](int i, int m, const LeveledBlock& x) {
    return detail::pow_apply(t.op(i), detail::pow_adjoint(t.op(i), x, m), m);
  };

  std::vector<std::pair<int, int>> family;
  for (int i = 1; i <= n; ++i)
    for (int d : degrees) family.push_back({i, d});

  double worst_pair = 0.0;
  std::string worst_pair_name = "projection_commutator";
  double worst_axiom = 0.0;
  std::string worst_axiom_name = "projection_axioms";
  double worst_twist = 0.0;
  std::string worst_twist_name = "projection_twist_commutator";

  for (std::size_t a = 0; a < family.size(); ++a) {
    auto [i, mi] = family[a];
    LeveledBlock pa = proj(i, mi, id);
    const double ax = std::max(
        op_norm(block_difference(spec, {pa.level, CMat(pa.m * pa.m)}, pa)),
        op_norm(block_difference(spec, {pa.level, CMat(pa.m.adjoint())}, pa)));
    if (ax > worst_axiom) {
      worst_axiom = ax;
      worst_axiom_name = "projection_axioms(P" + std::to_string(i) + "(" +
                         std::to_string(mi) + "))";
    }
    for (std::size_t b = 0; b < a; ++b) {
      auto [j, mj] = family[b];
      LeveledBlock pb = proj(j, mj, id);
      const double r = op_norm(pa.m * pb.m - pb.m * pa.m);
      if (r > worst_pair) {
        worst_pair = r;
        worst_pair_name = "projection_commutator(P" + std::to_string(i) + "(" +
                          std::to_string(mi) + "),P" + std::to_string(j) + "(" +
                          std::to_string(mj) + "))";
      }
    }
    for (const auto& [key, u] : t.twists) {
      LeveledBlock lhs = unitary_fiber_apply(spec, u, pa);
      LeveledBlock rhs = {pa.level,
                          fiber_block(spec, u, cidentity(level_dim(spec, pa.level)),
                                      pa.level)};
      const double r = op_norm(CMat(lhs.m - pa.m * rhs.m));
      if (r > worst_twist) {
        worst_twist = r;
        worst_twist_name = "projection_twist_commutator(P" + std::to_string(i) + "(" +
                           std::to_string(mi) + ")," +
                           detail::uname(key.first, key.second) + ")";
      }
    }
  }
  rep.add(worst_pair_name, worst_pair, tol);
  rep.add(worst_axiom_name, worst_axiom, tol);
  rep.add(worst_twist_name, worst_twist, tol);
  return rep;
}

}  // namespace tiso
