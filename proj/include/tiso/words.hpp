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

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "tiso/monomial_op.hpp"

namespace tiso {

// Words over the universal twisted-isometry generators: letters v(i), v*(i)
// and central twist letters u(i,j)^{+-1}. The rewriting engine sorts
// v-letters by ascending index, accumulating one twist letter per adjacent
// transposition, and cancels v*(i) v(i) pairs; the result is a twist
// monomial times ordered blocks v_i^{a_i} v_i^{*b_i}. Soundness of the
// bookkeeping is certified numerically by evaluate/oracle_check rather than
// proved symbolically; see words_equal.

struct Letter {
  enum Kind { V, Vstar, U } kind = V;
  int i = 1;        // operator index for V/Vstar; first twist index for U
  int j = 0;        // second twist index (U only)
  int exp = 0;      // +-1 twist exponent (U only)
};

using Word = std::vector<Letter>;

inline Letter v_letter(int i) { return {Letter::V, i, 0, 0}; }
inline Letter vstar_letter(int i) { return {Letter::Vstar, i, 0, 0}; }
inline Letter u_letter(int i, int j, int exp) {
  // u(j,i) is u(i,j)^{-1}; store with i < j
  if (i > j) return {Letter::U, j, i, -exp};
  return {Letter::U, i, j, exp};
}

/// Reverses the word and stars every letter.
inline Word adjoint_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Letter l = *it;
    if (l.kind == Letter::V) l.kind = Letter::Vstar;
    else if (l.kind == Letter::Vstar) l.kind = Letter::V;
    else l.exp = -l.exp;
    out.push_back(l);
  }
  return out;
}

/// Parses whitespace-separated tokens `v3`, `v3*`, `u12`, `u12^-1`, `u21`,
/// `u12^4`. Indices run 1..max_index; u-tokens need two distinct digits.
inline Word parse(const std::string& text, int max_index = 9) {
  Word word;
  std::size_t pos = 0;
  const std::size_t n = text.size();
  while (pos < n) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) { ++pos; continue; }
    const std::size_t start = pos;
    while (pos < n && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::string tok = text.substr(start, pos - start);
    auto fail = [&](const std::string& why) {
      throw ParseError("token '" + tok + "' at position " + std::to_string(start) +
                       ": " + why);
    };
    if (tok[0] == 'v') {
      bool star = tok.back() == '*';
      const std::string digits = tok.substr(1, tok.size() - 1 - (star ? 1 : 0));
      if (digits.empty()) fail("missing index");
      for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail("bad index");
      const int i = std::stoi(digits);
      if (i < 1 || i > max_index) fail("index out of range");
      word.push_back(star ? vstar_letter(i) : v_letter(i));
    } else if (tok[0] == 'u') {
      if (tok.size() < 3 || !std::isdigit(static_cast<unsigned char>(tok[1])) ||
          !std::isdigit(static_cast<unsigned char>(tok[2])))
        fail("expected two digit indices");
      const int i = tok[1] - '0';
      const int j = tok[2] - '0';
      if (i == j) fail("twist indices must differ");
      if (i < 1 || i > max_index || j < 1 || j > max_index) fail("index out of range");
      long e = 1;
      if (tok.size() > 3) {
        if (tok[3] != '^') fail("expected '^'");
        const std::string es = tok.substr(4);
        if (es.empty()) fail("missing exponent");
        try {
          e = std::stol(es);
        } catch (const std::exception&) {
          fail("bad exponent");
        }
        if (e == 0) fail("zero exponent");
        std::size_t check = es[0] == '-' ? 1 : 0;
        if (check == es.size()) fail("bad exponent");
        for (; check < es.size(); ++check)
          if (!std::isdigit(static_cast<unsigned char>(es[check]))) fail("bad exponent");
      }
      const int sign = e > 0 ? 1 : -1;
      for (long r = 0; r < (e > 0 ? e : -e); ++r)
        word.push_back(u_letter(i, j, sign));
    } else {
      fail("unknown token");
    }
  }
  return word;
}

/// Canonical form: a twist exponent per pair i < j and one (a_i, b_i) block
/// per index, meaning u-monomial times v_1^{a_1} v_1^{*b_1} v_2^{a_2} ...
struct NormalForm {
  std::map<std::pair<int, int>, long> t;
  std::map<int, std::pair<long, long>> blocks;

  bool operator==(const NormalForm& o) const { return t == o.t && blocks == o.blocks; }

  Word as_word() const {
    Word w;
    for (const auto& [key, e] : t) {
      const int sign = e > 0 ? 1 : -1;
      for (long r = 0; r < (e > 0 ? e : -e); ++r)
        w.push_back(u_letter(key.first, key.second, sign));
    }
    for (const auto& [i, ab] : blocks) {
      for (long r = 0; r < ab.first; ++r) w.push_back(v_letter(i));
      for (long r = 0; r < ab.second; ++r) w.push_back(vstar_letter(i));
    }
    return w;
  }

  std::string to_text() const {
    std::string s;
    auto sep = [&] { if (!s.empty()) s += ' '; };
    for (const auto& [key, e] : t) {
      if (e == 0) continue;
      sep();
      s += "u" + std::to_string(key.first) + std::to_string(key.second);
      if (e != 1) s += "^" + std::to_string(e);
    }
    for (const auto& [i, ab] : blocks) {
      for (long r = 0; r < ab.first; ++r) { sep(); s += "v" + std::to_string(i); }
      for (long r = 0; r < ab.second; ++r) { sep(); s += "v" + std::to_string(i) + "*"; }
    }
    if (s.empty()) s = "1";
    return s;
  }
};

/// Rewrites a word to its canonical form. Twist letters are central and
/// collected first; v-letters are bubble-sorted by index, each adjacent
/// transposition of distinct indices contributing one twist exponent; blocks
/// are then reduced by v*(i) v(i) -> 1. Terminates since every swap lowers
/// the inversion count and every cancellation shortens the word.
inline NormalForm normalize(const Word& word) {
  NormalForm nf;
  std::vector<Letter> vs;
  for (const Letter& l : word) {
    if (l.kind == Letter::U) {
      nf.t[{l.i, l.j}] += l.exp;
      if (nf.t[{l.i, l.j}] == 0) nf.t.erase({l.i, l.j});
    } else {
      vs.push_back(l);
    }
  }
  // bubble sort by index; swapping X_i Y_j with i > j multiplies by
  // u_{ji}^{+1} when exactly one of the two letters is starred, u_{ji}^{-1}
  // otherwise (both rules are the defining relations read as rewrites)
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (std::size_t p = 0; p + 1 < vs.size(); ++p) {
      if (vs[p].i > vs[p + 1].i) {
        const bool mixed = (vs[p].kind == Letter::Vstar) != (vs[p + 1].kind == Letter::Vstar);
        const int lo = vs[p + 1].i;
        const int hi = vs[p].i;
        nf.t[{lo, hi}] += mixed ? 1 : -1;
        if (nf.t[{lo, hi}] == 0) nf.t.erase({lo, hi});
        std::swap(vs[p], vs[p + 1]);
        swapped = true;
      }
    }
  }
  // reduce each same-index run to v^a v*^b via v* v -> 1
  for (const Letter& l : vs) {
    auto& [a, b] = nf.blocks[l.i];
    if (l.kind == Letter::V) {
      if (b > 0) --b; else ++a;
    } else {
      ++b;
    }
  }
  for (auto it = nf.blocks.begin(); it != nf.blocks.end();)
    it = (it->second == std::pair<long, long>{0, 0}) ? nf.blocks.erase(it) : std::next(it);
  return nf;
}

inline bool words_equal(const Word& a, const Word& b) {
  return normalize(a) == normalize(b);
}

/// Matrix of the word on the tuple's window, letters applied right to left.
/// The result carries the codomain window level; words whose net degree dips
/// below zero pass through the (exact) empty window.
inline LeveledBlock evaluate_leveled(const Word& w, const TwistedTuple& t, int n_check) {
  if (n_check < 0) throw TruncationError("evaluate needs a non-negative window");
  LeveledBlock x = id_block(t.spec, n_check);
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const Letter& l = *it;
    if (l.kind == Letter::U) {
      if (l.j > t.n() || l.i > t.n())
        throw InvalidInputError("twist letter index exceeds the tuple size");
      x = unitary_fiber_apply(t.spec, unitary_power(t.twist(l.i, l.j), l.exp), x);
    } else {
      if (l.i > t.n()) throw InvalidInputError("letter index exceeds the tuple size");
      x = l.kind == Letter::V ? op_apply(t.op(l.i), x) : op_adjoint_apply(t.op(l.i), x);
    }
  }
  return x;
}

inline CMat evaluate(const Word& w, const TwistedTuple& t, int n_check) {
  return evaluate_leveled(w, t, n_check).m;
}

inline CMat evaluate(const NormalForm& nf, const TwistedTuple& t, int n_check) {
  return evaluate_leveled(nf.as_word(), t, n_check).m;
}

/// || evaluate(w) - evaluate(normalize(w)) || on the common window; the
/// soundness certificate for the rewriting rules.
inline double oracle_check(const Word& w, const TwistedTuple& t, int n_check) {
  LeveledBlock a = evaluate_leveled(w, t, n_check);
  LeveledBlock b = evaluate_leveled(normalize(w).as_word(), t, n_check);
  return op_norm(block_difference(t.spec, a, b));
}

}  // namespace tiso
