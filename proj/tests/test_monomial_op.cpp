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

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "tiso/monomial_op.hpp"

using namespace tiso;
using namespace tiso::testsupport;

namespace {

const Complex lam = phase(0.3);

// index of z^q in the m=1 scalar basis is q itself
CVec scalar_basis_vec(int N, int q) {
  CVec v = CVec::Zero(N + 1);
  v(q) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("diagonal operator multiplies z^q by lambda^q") {
  LatticeSpec spec{1, 1, 4};
  MonomialOp d = diag_op(spec, 1, scalar1(lam));
  for (int q = 0; q <= 4; ++q) {
    CVec out = tiso::apply(d, scalar_basis_vec(4, q));
    REQUIRE(std::abs(out(q) - std::pow(lam, q)) < 1e-14);
  }
}

TEST_CASE("coordinate shift sends the constant to z") {
  LatticeSpec spec{1, 1, 3};
  CVec out = tiso::apply(mult_op(spec, 1), scalar_basis_vec(3, 0));
  REQUIRE(out.size() == 5);  // codomain window N+1
  REQUIRE(std::abs(out(1) - 1.0) < 1e-15);
  REQUIRE(out.norm() == Catch::Approx(1.0));
}

TEST_CASE("adjoint of the shift annihilates constants and lowers degree") {
  LatticeSpec spec{1, 1, 3};
  MonomialOp mz = mult_op(spec, 1);
  REQUIRE(tiso::adjoint_apply(mz, scalar_basis_vec(3, 0)).norm() < 1e-15);
  CVec out = tiso::adjoint_apply(mz, scalar_basis_vec(3, 2));
  REQUIRE(std::abs(out(1) - 1.0) < 1e-15);
}

TEST_CASE("adjoint of a diagonal operator has the conjugate symbol") {
  LatticeSpec spec{1, 1, 4};
  MonomialOp d = diag_op(spec, 1, scalar1(lam));
  for (int q = 0; q <= 4; ++q) {
    CVec out = tiso::adjoint_apply(d, scalar_basis_vec(4, q));
    REQUIRE(std::abs(out(q) - std::pow(std::conj(lam), q)) < 1e-14);
  }
}

TEST_CASE("composition shift-after-diagonal on z^2 gives lambda^2 z^3") {
  LatticeSpec spec{1, 1, 4};
  MonomialOp c = compose(mult_op(spec, 1), diag_op(spec, 1, scalar1(lam)));
  CVec out = tiso::apply(c, scalar_basis_vec(4, 2));
  REQUIRE(std::abs(out(3) - lam * lam) < 1e-14);
}

TEST_CASE("the two composition orders differ by the twist on the front factor") {
  LatticeSpec spec{1, 1, 4};
  MonomialOp md = compose(mult_op(spec, 1), diag_op(spec, 1, scalar1(lam)));
  MonomialOp dm = compose(diag_op(spec, 1, scalar1(lam)), mult_op(spec, 1));
  REQUIRE(std::abs(md.B(0, 0) - 1.0) < 1e-15);
  REQUIRE(std::abs(dm.B(0, 0) - lam) < 1e-15);
  REQUIRE(op_norm(CMat(lam * to_matrix(md, 3)) - to_matrix(dm, 3)) < 1e-13);
}

TEST_CASE("composition of constant operators multiplies the symbols") {
  LatticeSpec spec{2, 2, 2};
  CMat u = diag_phases({0.1, 0.4});
  CMat w = diag_phases({0.25, 0.7});
  MonomialOp c = compose(const_op(spec, u), const_op(spec, w));
  REQUIRE(op_norm(CMat(c.B - u * w)) < 1e-14);
  REQUIRE(c.total_shift() == 0);
}

TEST_CASE("untwisted coordinate shifts commute") {
  LatticeSpec spec{2, 1, 3};
  MonomialOp a = compose(mult_op(spec, 1), mult_op(spec, 2));
  MonomialOp b = compose(mult_op(spec, 2), mult_op(spec, 1));
  REQUIRE(op_norm(to_matrix(a, 1) - to_matrix(b, 1)) < 1e-15);
}

TEST_CASE("to_matrix of the shift and of constants") {
  LatticeSpec spec{1, 1, 2};
  CMat mz = to_matrix(mult_op(spec, 1), 1);
  REQUIRE(mz.rows() == 3);
  REQUIRE(mz.cols() == 2);
  CMat expect = CMat::Zero(3, 2);
  expect(1, 0) = 1.0;
  expect(2, 1) = 1.0;
  REQUIRE(op_norm(mz - expect) < 1e-15);

  LatticeSpec fib{1, 2, 2};
  CMat u = random_unitary(2, 3);
  REQUIRE(op_norm(to_matrix(const_op(fib, u), 0) - u) < 1e-15);
}

TEST_CASE("diagonal with symbol i has matrix diag(1, i, -1)") {
  LatticeSpec spec{1, 1, 2};
  CMat d = to_matrix(diag_op(spec, 1, scalar1(Complex(0, 1))), 2);
  CMat expect = CMat::Zero(3, 3);
  expect(0, 0) = 1.0;
  expect(1, 1) = Complex(0, 1);
  expect(2, 2) = -1.0;
  REQUIRE(op_norm(d - expect) < 1e-15);
}

TEST_CASE("diag with identity symbol is the identity operator") {
  LatticeSpec spec{2, 2, 2};
  MonomialOp d = diag_op(spec, 1, cidentity(2));
  REQUIRE(op_norm(to_matrix(d, 2) - cidentity(level_dim(spec, 2))) < 1e-15);
}

TEST_CASE("shifts are isometries on every truncation") {
  LatticeSpec spec{2, 2, 4};
  for (int i = 1; i <= 2; ++i)
    for (int nd = 0; nd <= 3; ++nd)
      REQUIRE(is_isometry(to_matrix(mult_op(spec, i), nd)).pass);
}

TEST_CASE("compose is exact against matrix products") {
  LatticeSpec spec{2, 2, 5};
  const CMat q = random_unitary(2, 21);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    MonomialOp a = compose(mult_op(spec, 1), diag_op(spec, 2, random_codiagonal(q, seed)));
    MonomialOp b = compose(diag_op(spec, 1, random_codiagonal(q, seed + 50)),
                           const_op(spec, random_codiagonal(q, seed + 100)));
    MonomialOp ab = compose(a, b);
    CMat direct = to_matrix(a, 3) * to_matrix(b, 3);
    REQUIRE(op_norm(to_matrix(ab, 3) - direct) < 1e-12);
  }
}

TEST_CASE("apply and adjoint_apply are adjoint to each other") {
  LatticeSpec spec{2, 2, 3};
  const CMat q = random_unitary(2, 9);
  MonomialOp op = compose(mult_op(spec, 2), diag_op(spec, 1, random_codiagonal(q, 4)));
  const Index dn = level_dim(spec, spec.N);
  for (int rep = 0; rep < 20; ++rep) {
    CVec x = CVec::Zero(dn);
    CVec y = CVec::Zero(dn);
    x(rep % dn) = 1.0;
    y((rep * 7 + 3) % dn) = 1.0;
    CVec ax = tiso::apply(op, x);
    Complex lhs = (y.adjoint() * ax.head(dn))(0, 0);  // <y, A x> on the common window
    Complex rhs = (CVec(tiso::adjoint_apply(op, y)).adjoint() * x)(0, 0);  // <A* y, x>
    REQUIRE(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("diagonal operator identities on every truncation") {
  // adjoint symbol, commutation with foreign shifts, and the pull-through
  // identity against the adjoint of the matching shift
  LatticeSpec spec{2, 2, 4};
  CMat u = random_unitary(2, 31);

  MonomialOp d1 = diag_op(spec, 1, u);

  for (int nd = 0; nd <= 3; ++nd) {
    CMat d1m = to_matrix(d1, nd);
    CMat d1s = to_matrix(diag_op(spec, 1, CMat(u.adjoint())), nd);
    REQUIRE(op_norm(CMat(d1m.adjoint()) - d1s) < 1e-13);
  }

  MonomialOp m2 = mult_op(spec, 2);
  for (int nd = 0; nd <= 3; ++nd) {
    CMat lhs = to_matrix(compose(m2, d1), nd);
    CMat rhs = to_matrix(compose(d1, m2), nd);
    REQUIRE(op_norm(lhs - rhs) < 1e-13);
  }

  // M_{z_1}* D_1[U] = (I (x) U) D_1[U] M_{z_1}* as window matrices
  MonomialOp m1 = mult_op(spec, 1);
  for (int nd = 1; nd <= 3; ++nd) {
    CMat lhs = adjoint_block(m1, to_matrix(d1, nd), nd);  // window nd -> nd-1
    CMat mstar = adjoint_block(m1, cidentity(level_dim(spec, nd)), nd);
    CMat rhs = fiber_block(spec, u, to_matrix(d1, nd - 1) * mstar, nd - 1);
    REQUIRE(op_norm(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("model tuple with a single shift is the coordinate shift") {
  LatticeSpec spec{1, 1, 3};
  TwistedTuple t = model_tuple(spec, 1, {1}, {}, {});
  REQUIRE(t.n() == 1);
  REQUIRE(op_norm(to_matrix(t.op(1), 2) - to_matrix(mult_op(spec, 1), 2)) < 1e-15);
}

TEST_CASE("model pair of twisted shifts has the expected action") {
  LatticeSpec spec{2, 1, 4};
  const Complex u12 = phase(0.3);
  TwistedTuple t = model_tuple(spec, 2, {1, 2}, {{{1, 2}, scalar1(u12)}}, {});
  // V2 = M_{z_2} D_1[conj(u12)]
  Basis b3(spec.with_bound(3));
  Basis b4(spec.with_bound(4));
  CVec x = CVec::Zero(b3.dim());
  x(b3.slab_start({2, 1})) = 1.0;
  CMat out = apply_block(t.op(2), x, 3);
  const Complex expect = std::pow(std::conj(u12), 2);
  REQUIRE(std::abs(out(b4.slab_start({2, 2}), 0) - expect) < 1e-14);
}

TEST_CASE("model tuple tail positions are slab-wise unitary") {
  LatticeSpec spec{1, 1, 4};
  const Complex omega = phase(1.0 / 3.0);
  TwistedTuple t = model_tuple(spec, 2, {1}, {{{1, 2}, scalar1(phase(0.3))}},
                               {{2, scalar1(omega)}});
  CMat v2 = to_matrix(t.op(2), 4);
  REQUIRE(v2.rows() == v2.cols());
  REQUIRE(is_unitary(v2));
  for (Index i = 0; i < v2.rows(); ++i)
    REQUIRE(std::abs(std::abs(v2(i, i)) - 1.0) < 1e-13);
}

TEST_CASE("model tuple validates its hypotheses") {
  LatticeSpec spec{1, 2, 3};
  CMat bad = CMat::Zero(2, 2);
  bad(0, 0) = 2.0;
  bad(1, 1) = 1.0;
  REQUIRE_THROWS_AS(model_tuple(spec, 2, {1}, {{{1, 2}, bad}}, {}), ConstructionError);

  // non-commuting twists: clock and shift
  CMat clock = diag_phases({0.0, 0.5});
  CMat perm = CMat::Zero(2, 2);
  perm(0, 1) = 1.0;
  perm(1, 0) = 1.0;
  REQUIRE_THROWS_AS(model_tuple(spec, 3, {1}, {{{1, 2}, clock}, {{1, 3}, perm}}, {}),
                    ConstructionError);
}

TEST_CASE("compose rejects non-commuting generator families") {
  LatticeSpec spec{1, 2, 3};
  CMat clock = diag_phases({0.0, 0.5});
  CMat perm = CMat::Zero(2, 2);
  perm(0, 1) = 1.0;
  perm(1, 0) = 1.0;
  REQUIRE_THROWS_AS(compose(diag_op(spec, 1, clock), diag_op(spec, 1, perm)), ClosureError);
}

TEST_CASE("fiber conjugation transports window matrices") {
  TwistedTuple t = random_model(2, {1, 2}, 2, 4, 12);
  CMat w = random_unitary(2, 77);
  TwistedTuple tc = conjugate_fiber(t, w);
  REQUIRE(tc.n() == 2);
  for (int i = 1; i <= 2; ++i) {
    CMat a = to_matrix(t.op(i), 2);
    CMat b = to_matrix(tc.op(i), 2);
    CMat wlift_dom = fiber_block(t.spec, w, cidentity(level_dim(t.spec, 2)), 2);
    CMat wlift_cod = fiber_block(t.spec, w, cidentity(level_dim(t.spec, 3)), 3);
    REQUIRE(op_norm(b - wlift_cod * a * CMat(wlift_dom.adjoint())) < 1e-12);
  }
}

TEST_CASE("direct sums require a common operator count") {
  TwistedTuple a = random_model(2, {1}, 1, 3, 1);
  TwistedTuple b = random_model(3, {1}, 1, 3, 2);
  REQUIRE_THROWS_AS(TupleSum({a, b}), DimensionError);
  TupleSum ok({a, random_model(2, {2}, 2, 3, 3)});
  REQUIRE(ok.n() == 2);
  REQUIRE(ok.fiber_dim() == 3);
}
