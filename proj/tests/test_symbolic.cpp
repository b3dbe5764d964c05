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

#include "tauforge/lax.hpp"

using namespace tauforge;

namespace {

GrassPoly entry(const MatPSDO& A, int k, int i, int j) {
  const Frac& f = A.at(k, i, j);
  REQUIRE(f.pow == 0);
  return f.num;
}

GrassPoly dx(const DiffCtx& ctx, const GrassPoly& p) { return ctx.dx(p); }

}  // namespace

TEST_CASE("symbolic B/D pair: structure of L and D") {
  SymbolicBD s = symbolic_bd_s1(9);
  const DiffCtx& ctx = s.ctx;
  // leading structure: L = diag(1,-1) d + U1 d^{-1} + ...
  CHECK(entry(s.L, 1, 0, 0) == GrassPoly(1));
  CHECK(entry(s.L, 1, 1, 1) == GrassPoly(-1));
  CHECK(entry(s.L, 0, 0, 0).is_zero());
  CHECK(entry(s.L, 0, 1, 1).is_zero());
  CHECK(entry(s.L, 0, 0, 1).is_zero());
  GrassPoly a = entry(s.L, -1, 0, 0), b = entry(s.L, -1, 0, 1);
  GrassPoly c = entry(s.L, -1, 1, 0);
  CHECK(entry(s.L, -1, 1, 1) == -a);
  // U2 = [[e, -b_x/2], [-c_x/2, e + a_x]]
  GrassPoly e = entry(s.L, -2, 0, 0);
  CHECK(entry(s.L, -2, 0, 1) == dx(ctx, b).scaled(Cyclo(Rat(-1, 2))));
  CHECK(entry(s.L, -2, 1, 0) == dx(ctx, c).scaled(Cyclo(Rat(-1, 2))));
  CHECK(entry(s.L, -2, 1, 1) == e + dx(ctx, a));
  // U3_{22} = -U3_{11} - 2 e_x - a_xx
  GrassPoly f11 = entry(s.L, -3, 0, 0);
  CHECK(entry(s.L, -3, 1, 1) == -f11 - dx(ctx, e).scaled(Cyclo(2)) - dx(ctx, dx(ctx, a)));
  // D = diag(1,-1) + [[0,b],[c,0]] d^{-2} + [[0,-b_x],[-c_x,0]] d^{-3} + ...
  CHECK(entry(s.D, 0, 0, 0) == GrassPoly(1));
  CHECK(entry(s.D, 0, 1, 1) == GrassPoly(-1));
  CHECK(entry(s.D, -1, 0, 1).is_zero());
  CHECK(entry(s.D, -1, 1, 0).is_zero());
  CHECK(entry(s.D, -2, 0, 1) == b);
  CHECK(entry(s.D, -2, 1, 0) == c);
  CHECK(entry(s.D, -2, 0, 0).is_zero());
  CHECK(entry(s.D, -3, 0, 1) == -dx(ctx, b));
  CHECK(entry(s.D, -3, 1, 0) == -dx(ctx, c));
}

TEST_CASE("symbolic B/D pair: t2 and t3 flow equations") {
  SymbolicBD s = symbolic_bd_s1(10);
  const DiffCtx& ctx = s.ctx;
  GrassPoly a = entry(s.L, -1, 0, 0), b = entry(s.L, -1, 0, 1);
  GrassPoly c = entry(s.L, -1, 1, 0);
  GrassPoly e = entry(s.L, -2, 0, 0);
  GrassPoly f11 = entry(s.L, -3, 0, 0), f12 = entry(s.L, -3, 0, 1);
  GrassPoly f21 = entry(s.L, -3, 1, 0);
  auto commutator_flow = [&](int n) {
    MatPSDO gen = s.L.power(n, ctx).mul(s.D, ctx).plus_part();
    return (gen.mul(s.L, ctx) - s.L.mul(gen, ctx)).truncated(-3, 1);
  };
  MatPSDO R2 = commutator_flow(2);
  // du11/dt2 = (2 u2_11 + u1_11,x)_x
  CHECK(entry(R2, -1, 0, 0) == dx(ctx, e.scaled(Cyclo(2)) + dx(ctx, a)));
  // du12/dt2 = 2(u1_11 u1_12 + u3_12)
  CHECK(entry(R2, -1, 0, 1) == (a * b + f12).scaled(Cyclo(2)));
  // du21/dt2 = -2(u1_21 u1_11 + u3_21)
  CHECK(entry(R2, -1, 1, 0) == (c * a + f21).scaled(Cyclo(-2)));
  MatPSDO R3 = commutator_flow(3);
  // du11/dt3 = (1/2)(6 a^2 + 6 f11 + 3 b c + 6 e_x + 2 a_xx)_x
  GrassPoly rhs11 = dx(ctx, (a * a).scaled(Cyclo(6)) + f11.scaled(Cyclo(6)) +
                            (b * c).scaled(Cyclo(3)) + dx(ctx, e).scaled(Cyclo(6)) +
                            dx(ctx, dx(ctx, a)).scaled(Cyclo(2)))
                        .scaled(Cyclo(Rat(1, 2)));
  CHECK(entry(R3, -1, 0, 0) == rhs11);
  // du21/dt3 = (1/2)(-12 e c + 6 f21_x - c_xxx)
  GrassPoly rhs21 = ((e * c).scaled(Cyclo(-12)) + dx(ctx, f21).scaled(Cyclo(6)) -
                     dx(ctx, dx(ctx, dx(ctx, c))))
                        .scaled(Cyclo(Rat(1, 2)));
  CHECK(entry(R3, -1, 1, 0) == rhs21);
  // du12/dt3 = (1/2)(12 (e + a_x) b + 6 f12_x - b_xxx)
  GrassPoly rhs12 = (((e + dx(ctx, a)) * b).scaled(Cyclo(12)) + dx(ctx, f12).scaled(Cyclo(6)) -
                     dx(ctx, dx(ctx, dx(ctx, b))))
                        .scaled(Cyclo(Rat(1, 2)));
  CHECK(entry(R3, -1, 0, 1) == rhs12);
}
