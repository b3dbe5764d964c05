/*
   Copyright 2026 The tauforge authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tauforge/psdo.hpp"

using namespace tauforge;

namespace {
DiffCtx ctx1() {
  DiffCtx c;
  c.xvars = {t_var(1, 1)};
  return c;
}
GrassPoly tpoly(int k) { return GrassPoly::variable(t_var(1, k)); }
}  // namespace

TEST_CASE("Leibniz: d o t1 = t1 d + 1") {
  DiffCtx ctx = ctx1();
  MatPSDO d = MatPSDO::unit(1, -4, 1, 0, 0, 1, GrassPoly(1));
  MatPSDO f = MatPSDO::unit(1, -4, 0, 0, 0, 0, tpoly(1));
  MatPSDO prod = d.mul(f, ctx);
  MatPSDO expect(1, -3, 1);
  expect.add(1, 0, 0, tpoly(1), 0);
  expect.add(0, 0, 0, GrassPoly(1), 0);
  CHECK(prod == expect);
}

TEST_CASE("d^{-1} o d = 1 within the window") {
  DiffCtx ctx = ctx1();
  MatPSDO dinv = MatPSDO::unit(1, -6, -1, 0, 0, -1, GrassPoly(1));
  MatPSDO d = MatPSDO::unit(1, -6, 1, 0, 0, 1, GrassPoly(1));
  MatPSDO prod = dinv.mul(d, ctx);
  CHECK(prod == MatPSDO::identity(1, prod.lo()));
}

TEST_CASE("d^{-1} o t1 = t1 d^{-1} - d^{-2} + ...") {
  DiffCtx ctx = ctx1();
  MatPSDO dinv = MatPSDO::unit(1, -5, -1, 0, 0, -1, GrassPoly(1));
  MatPSDO f = MatPSDO::unit(1, -5, 0, 0, 0, 0, tpoly(1));
  MatPSDO prod = dinv.mul(f, ctx);
  CHECK(prod.at(-1, 0, 0).num == tpoly(1));
  CHECK(prod.at(-2, 0, 0).num == GrassPoly(-1));
  CHECK(prod.at(-3, 0, 0).num.is_zero());
}

TEST_CASE("adjoint basics") {
  DiffCtx ctx = ctx1();
  MatPSDO d = MatPSDO::unit(1, -4, 1, 0, 0, 1, GrassPoly(1));
  CHECK(d.adjoint(ctx) == d.scaled(GrassPoly(-1)));
  // (t1 d)* = -d t1 = -t1 d - 1
  MatPSDO td = MatPSDO::unit(1, -4, 1, 0, 0, 1, tpoly(1));
  MatPSDO expect(1, -4, 1);
  expect.add(1, 0, 0, -tpoly(1), 0);
  expect.add(0, 0, 0, GrassPoly(-1), 0);
  CHECK(td.adjoint(ctx) == expect);
  // (E12 d^{-1})* = E21 (-d)^{-1}
  MatPSDO e12 = MatPSDO::unit(2, -4, -1, 0, 1, -1, GrassPoly(1));
  MatPSDO adj = e12.adjoint(ctx);
  CHECK(adj.at(-1, 1, 0).num == GrassPoly(-1));
  CHECK(adj.at(-1, 0, 1).num.is_zero());
}

TEST_CASE("adjoint involution and anti-homomorphism on random operators") {
  DiffCtx ctx = ctx1();
  std::mt19937 rng(5);
  auto rand_op = [&](long m) {
    MatPSDO a(m, -6, 1);
    for (int t = 0; t < 6; ++t) {
      int k = (int)(rng() % 4) - 2;
      long i = rng() % m, j = rng() % m;
      int deg = (int)(rng() % 3);
      GrassPoly p(Cyclo((long)(rng() % 5) - 2));
      for (int dgr = 0; dgr < deg; ++dgr) p = p * tpoly(1 + (int)(rng() % 2));
      a.add(k, i, j, p, 0);
    }
    return a;
  };
  for (int it = 0; it < 8; ++it) {
    MatPSDO a = rand_op(2), b = rand_op(2);
    MatPSDO astst = a.adjoint(ctx).adjoint(ctx).truncated(-4, 1);
    CHECK(astst == a.truncated(-4, 1));
    MatPSDO lhs = a.mul(b, ctx).adjoint(ctx).truncated(-3, 2);
    MatPSDO rhs = b.adjoint(ctx).mul(a.adjoint(ctx), ctx).truncated(-3, 2);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("composition associativity on random triples") {
  DiffCtx ctx = ctx1();
  std::mt19937 rng(17);
  auto rand_op = [&](long m) {
    MatPSDO a(m, -5, 1);
    for (int t = 0; t < 5; ++t) {
      int k = (int)(rng() % 4) - 2;
      long i = rng() % m, j = rng() % m;
      GrassPoly p(Cyclo((long)(rng() % 5) - 2));
      if (rng() % 2) p = p * tpoly(1);
      a.add(k, i, j, p, 0);
    }
    return a;
  };
  for (int it = 0; it < 6; ++it) {
    MatPSDO a = rand_op(2), b = rand_op(2), c = rand_op(2);
    MatPSDO l = a.mul(b, ctx).mul(c, ctx);
    MatPSDO r = a.mul(b.mul(c, ctx), ctx);
    int lo = std::max(l.lo(), r.lo()) + 2;
    CHECK(l.truncated(lo, l.hi()) == r.truncated(lo, r.hi()));
  }
}

TEST_CASE("split parts") {
  MatPSDO a(1, -4, 1);
  a.add(1, 0, 0, tpoly(1), 0);
  a.add(-1, 0, 0, GrassPoly(1), 0);
  MatPSDO p = a.plus_part();
  CHECK(p.at(1, 0, 0).num == tpoly(1));
  CHECK(p.at(-1, 0, 0).num.is_zero());
  MatPSDO mm = a.minus_part();
  CHECK(mm.at(-1, 0, 0).num == GrassPoly(1));
  CHECK((p + mm) == a);
  CHECK(p.minus_part().window_zero());
}

TEST_CASE("ge/lt splitting with J(d)") {
  // scalar toy case: J = (1/2) d^{-1}, Jinv = 2 d; (u d^{-1})_ge = 0
  DiffCtx ctx = ctx1();
  MatPSDO J = MatPSDO::unit(1, -6, -1, 0, 0, -1, GrassPoly(Cyclo(Rat(1, 2))));
  MatPSDO Jinv = MatPSDO::unit(1, -6, 1, 0, 0, 1, GrassPoly(2));
  MatPSDO a = MatPSDO::unit(1, -5, -1, 0, 0, -1, tpoly(1));
  auto [ge, lt] = split_ge_lt(a, J, Jinv, ctx);
  CHECK(ge.window_zero());
  CHECK(lt == a);
  // idempotence and complementarity on a mixed operator
  MatPSDO b = MatPSDO::unit(1, -5, 1, 0, 0, 1, GrassPoly(1)) + a;
  auto [ge2, lt2] = split_ge_lt(b, J, Jinv, ctx);
  auto [ge3, lt3] = split_ge_lt(ge2.truncated(-4, ge2.hi()), J, Jinv, ctx);
  CHECK(ge3.truncated(-3, 1) == ge2.truncated(-3, 1));
  CHECK((ge2 + lt2).truncated(-4, 1) == b.truncated(-4, 1));
}

TEST_CASE("invert monic operators") {
  DiffCtx ctx = ctx1();
  MatPSDO one = MatPSDO::identity(1, -4);
  CHECK(one.invert(ctx).truncated(-3, 0) == MatPSDO::identity(1, -3));
  // 1 + u d^{-1} with u = t1
  MatPSDO a = MatPSDO::identity(1, -8) + MatPSDO::unit(1, -8, -1, 0, 0, -1, tpoly(1));
  MatPSDO b = a.invert(ctx);
  MatPSDO ab = a.mul(b, ctx).truncated(-4, 0);
  MatPSDO ba = b.mul(a, ctx).truncated(-4, 0);
  CHECK(ab == MatPSDO::identity(1, -4));
  CHECK(ba == MatPSDO::identity(1, -4));
  // 2x2 monic with an off-diagonal integral tail
  MatPSDO c = MatPSDO::identity(2, -8) + MatPSDO::unit(2, -8, -1, 0, 1, -1, tpoly(1));
  MatPSDO ci = c.invert(ctx);
  CHECK(c.mul(ci, ctx).truncated(-4, 0) == MatPSDO::identity(2, -4));
  CHECK(ci.mul(c, ctx).truncated(-4, 0) == MatPSDO::identity(2, -4));
  // first-order monic: d + u
  MatPSDO L = MatPSDO::unit(1, -6, 1, 0, 0, 1, GrassPoly(1)) +
              MatPSDO::unit(1, -6, 0, 0, 0, 0, tpoly(1));
  MatPSDO Li = L.invert(ctx);
  CHECK(L.mul(Li, ctx).truncated(-4, 0) == MatPSDO::identity(1, -4));
}

TEST_CASE("fraction coefficients with a tau denominator") {
  DiffCtx ctx = ctx1();
  GrassPoly tau = tpoly(1);
  MatPSDO p(1, -6, 0, tau);
  p.add(0, 0, 0, GrassPoly(1), 0);
  p.add(-1, 0, 0, GrassPoly(-1), 1);  // 1 - (1/t1) d^{-1}
  // derivative by x of the d^{-1} coefficient: d/dx(-1/t1) = 1/t1^2
  MatPSDO dp = p.dvar(t_var(1, 1), ctx);
  const Frac& f = dp.at(-1, 0, 0);
  CHECK(f.pow == 2);
  CHECK(f.num == GrassPoly(1));  // (0*t1 - 1*(-1)*1)/t1^2 = 1/t1^2
  // p * p^{-1} = 1
  MatPSDO pi = p.invert(ctx);
  CHECK(p.mul(pi, ctx).truncated(-3, 0) == MatPSDO::identity(1, -3));
}
