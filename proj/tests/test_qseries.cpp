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

#include "tauforge/qseries.hpp"

using namespace tauforge;

TEST_CASE("partition generating function coefficients") {
  // t^0 part of the JTI sum side: prod 1/(1-q^j) = 1 + q + 2q^2 + 3q^3 + ...
  QSeries s = QSeries::one(6);
  for (int j = 1; 2 * j <= 6; ++j) s = s.mul_geometric(2 * j, 0, Rat(1));
  CHECK(s.coeff(0, 0) == 1);
  CHECK(s.coeff(2, 0) == 1);
  CHECK(s.coeff(4, 0) == 2);
  CHECK(s.coeff(6, 0) == 3);
}

TEST_CASE("qb: distinct parts equal odd parts, coefficients to q^5") {
  QIdentityParams p;
  auto res = qidentity_verify("qb", 10, p);
  CHECK(res.ok);
  QSeries side = qidentity_side("qb", "product", 10, p);
  // 1 + q + q^2 + 2q^3 + 2q^4 + 3q^5
  int expect[] = {1, 1, 1, 2, 2, 3};
  for (int k = 0; k <= 5; ++k) CHECK(side.coeff(2 * k, 0) == expect[k]);
}

TEST_CASE("Jacobi triple product to q^20") {
  QIdentityParams p;
  p.marker_window = 5;
  auto res = qidentity_verify("jtp", 40, p);
  CHECK(res.ok);
}

TEST_CASE("Weyl module identity (half-integer grid) to q^12") {
  QIdentityParams p;
  auto res = qidentity_verify("cq", 24, p);
  CHECK(res.ok);
  // 1 + q^{1/2} + q + 2q^{3/2} + ...
  QSeries side = qidentity_side("cq", "product", 24, p);
  CHECK(side.coeff(0, 0) == 1);
  CHECK(side.coeff(1, 0) == 1);
  CHECK(side.coeff(2, 0) == 1);
  CHECK(side.coeff(3, 0) == 2);
}

TEST_CASE("two-marker charged symplectic boson identity to q^12") {
  QIdentityParams p;
  p.marker_window = 4;
  auto res = qidentity_verify("tet", 24, p);
  CHECK(res.ok);
  auto res2 = qidentity_verify("intro-new", 24, p);
  CHECK(res2.ok);
}

TEST_CASE("negative control: corrupted JTI sum exponent fails at q^1") {
  // replace m^2/2 by m^2 in the sum side: first discrepancy at q^{1/2}
  QIdentityParams p;
  p.marker_window = 3;
  QSeries lhs = qidentity_side("jtp", "product", 8, p);
  QSeries bad(8);
  QSeries eta = QSeries::one(8);
  for (int j = 1; 2 * j <= 8; ++j) eta = eta.mul_geometric(2 * j, 0, Rat(1));
  for (int m = -3; m <= 3; ++m)
    for (const auto& [k, v] : eta.coeffs()) {
      int e2 = k.first + 2 * m * m;
      if (e2 <= 8) bad.add(e2, m, v);
    }
  CHECK(lhs.first_difference(bad).has_value());
  auto d = lhs.first_difference(bad);
  CHECK(std::get<0>(*d) == 1);  // first break at q^{1/2}
}

TEST_CASE("multicomponent q-dimensions verify") {
  QIdentityParams p;
  p.s = 2;
  p.marker_window = 4;
  CHECK(qidentity_verify("qdima", 16, p).ok);
  p.s = 1;
  p.r = 2;
  CHECK(qidentity_verify("qdimd", 16, p).ok);
  CHECK(qidentity_verify("qdimc", 12, p).ok);
  p.s = 0;
  p.r = 1;
  CHECK(qidentity_verify("qdimc", 12, p).ok);
}

TEST_CASE("reduced q-dimension identities") {
  QIdentityParams p;
  p.lambda = {2, 1};
  p.mu = {};
  p.marker_window = 3;
  CHECK(qidentity_verify("qdima-red", 12, p).ok);
  p.lambda = {2, 1};
  p.mu = {1, 1};
  CHECK(qidentity_verify("qdimd-red", 10, p).ok);
  p.lambda = {};
  p.mu = {2, 1};
  CHECK(qidentity_verify("qdimd-red", 10, p).ok);
}

TEST_CASE("series multiplication commutative and associative") {
  std::mt19937 rng(11);
  auto rand_series = [&]() {
    QSeries s(10);
    for (int t = 0; t < 5; ++t) s.add((int)(rng() % 11), (int)(rng() % 5) - 2, Rat((long)(rng() % 7) - 3));
    return s;
  };
  for (int it = 0; it < 25; ++it) {
    QSeries a = rand_series(), b = rand_series(), c = rand_series();
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
  }
}
