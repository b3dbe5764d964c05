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

#include <set>

#include "tauforge/weylclass.hpp"

using namespace tauforge;

TEST_CASE("enumerate classes") {
  auto a3 = enumerate_classes(AlgType::A, 3);
  REQUIRE(a3.size() == 3);
  CHECK(a3[0].lambda == std::vector<long>{3});
  CHECK(a3[1].lambda == (std::vector<long>{2, 1}));
  CHECK(a3[2].lambda == (std::vector<long>{1, 1, 1}));

  auto d2 = enumerate_classes(AlgType::D, 2);
  REQUIRE(d2.size() == 3);  // ((2),()), ((1,1),()), ((),(1,1))
  std::set<std::string> got;
  for (auto& l : d2) got.insert(l.str());
  CHECK(got.count("D n=2 lambda=(2) mu=()"));
  CHECK(got.count("D n=2 lambda=(1,1) mu=()"));
  CHECK(got.count("D n=2 lambda=() mu=(1,1)"));

  auto c1 = enumerate_classes(AlgType::C, 1);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0].lambda == std::vector<long>{1});
  CHECK(c1[1].mu == std::vector<long>{1});
}

TEST_CASE("standard elements") {
  // (A, lambda=(2)): eps2 -> eps1, eps1 -> eps2
  SignedPerm w = standard_element({AlgType::A, 2, {2}, {}});
  CHECK(w.perm == (std::vector<long>{1, 0}));
  CHECK(w.sign == (std::vector<int>{1, 1}));
  // (C, lambda={}, mu=(n)): one negative cycle
  SignedPerm wc = standard_element({AlgType::C, 3, {}, {3}});
  CHECK(wc.perm == (std::vector<long>{1, 2, 0}));
  CHECK(wc.sign == (std::vector<int>{1, 1, -1}));
  // identity label
  SignedPerm wi = standard_element({AlgType::A, 3, {1, 1, 1}, {}});
  CHECK(wi.perm == (std::vector<long>{0, 1, 2}));
}

TEST_CASE("gl2 principal frame reproduces h_w = diag(1/4, -1/4)") {
  WeylFrame f = build_frame({AlgType::A, 2, {2}, {}});
  CHECK(f.hdiag[0] == Rat(1, 4));
  CHECK(f.hdiag[1] == Rat(-1, 4));
  CHECK(verify_frame(f).all_pass());
}

TEST_CASE("frames verify for all classes at small rank") {
  for (long n = 1; n <= 3; ++n) {
    for (auto& lab : enumerate_classes(AlgType::A, n)) {
      auto rep = verify_frame(build_frame(lab));
      INFO(lab.str());
      CHECK(rep.all_pass());
    }
  }
  for (long n = 1; n <= 2; ++n) {
    for (auto& lab : enumerate_classes(AlgType::C, n)) {
      auto rep = verify_frame(build_frame(lab));
      INFO(lab.str());
      CHECK(rep.all_pass());
    }
    for (auto& lab : enumerate_classes(AlgType::D, n)) {
      auto rep = verify_frame(build_frame(lab));
      INFO(lab.str());
      CHECK(rep.all_pass());
    }
    for (auto& lab : enumerate_classes(AlgType::B, n)) {
      for (char fl : {'d', 'b'}) {
        auto rep = verify_frame(build_frame(lab, fl));
        INFO(lab.str(), " flavor ", fl);
        CHECK(rep.all_pass());
      }
    }
  }
}

TEST_CASE("perturbed h fails the conjugation check") {
  WeylFrame f = build_frame({AlgType::A, 2, {2}, {}});
  f.hdiag[0] += Rat(1, 2);
  auto rep = verify_frame(f);
  bool conj_ok = true;
  for (auto& c : rep.checks)
    if (c.name == "conjugation") conj_ok = c.pass;
  CHECK(!conj_ok);
}

TEST_CASE("automorphism orders") {
  // gl_3, lambda = (2,1): N = 4
  CHECK(automorphism_order({AlgType::A, 3, {2, 1}, {}}) == 4);
  // sp_2: mu = (1): ad-order 2
  CHECK(automorphism_order({AlgType::C, 1, {}, {1}}) == 2);
  // gl_1: N = 1
  CHECK(automorphism_order({AlgType::A, 1, {1}, {}}) == 1);
  // clause agrees with brute force everywhere at small rank
  for (long n = 1; n <= 3; ++n) {
    for (auto t : {AlgType::A, AlgType::B, AlgType::C, AlgType::D}) {
      for (auto& lab : enumerate_classes(t, n)) {
        WeylFrame f = build_frame(lab);
        INFO(lab.str());
        CHECK(automorphism_order_brute(f) == f.order);
        if (t == AlgType::B) {
          WeylFrame fb = build_frame(lab, 'b');
          CHECK(automorphism_order_brute(fb) == fb.order);
        }
      }
    }
  }
}

TEST_CASE("nilpotent map block lists") {
  // sp: lambda=(2), mu=(1), n=3 -> (2,2,2)
  CHECK(nilpotent_map({AlgType::C, 3, {2}, {1}}).blocks == (std::vector<long>{2, 2, 2}));
  // so_28 collision
  CHECK(nilpotent_map({AlgType::D, 14, {}, {5, 5, 3, 1}}).blocks == (std::vector<long>{11, 9, 7, 1}));
  CHECK(nilpotent_map({AlgType::D, 14, {}, {5, 4, 4, 1}}).blocks == (std::vector<long>{11, 9, 7, 1}));
  // so_9 collision
  CHECK(nilpotent_map({AlgType::B, 4, {}, {2, 2}}).blocks == (std::vector<long>{5, 3, 1}));
  CHECK(nilpotent_map({AlgType::B, 4, {}, {2, 1, 1}}).blocks == (std::vector<long>{5, 3, 1}));
  // modified map separates the so_28 pair
  CHECK(nilpotent_map_modified({AlgType::D, 14, {}, {5, 5, 3, 1}}).blocks ==
        (std::vector<long>{11, 11, 5, 1}));
  CHECK(nilpotent_map_modified({AlgType::D, 14, {}, {5, 4, 4, 1}}).blocks ==
        (std::vector<long>{11, 9, 7, 1}));
  // trivial: mu empty
  CHECK(nilpotent_map_modified({AlgType::D, 3, {2, 1}, {}}).blocks == (std::vector<long>{2, 2, 1, 1}));
}

TEST_CASE("block lists agree with exact Jordan type of the assembled matrix") {
  for (long n = 1; n <= 4; ++n) {
    for (auto t : {AlgType::A, AlgType::B, AlgType::C, AlgType::D}) {
      for (auto& lab : enumerate_classes(t, n)) {
        CMat f = nilpotent_matrix(lab);
        INFO(lab.str());
        CHECK(jordan_type_of(f) == nilpotent_map(lab));
      }
    }
  }
}

TEST_CASE("modified map injective on elliptic type D classes") {
  for (long n : {6L, 10L, 14L}) {
    std::set<std::vector<long>> images;
    long count = 0;
    for (auto& lab : enumerate_classes(AlgType::D, n)) {
      if (!lab.lambda.empty()) continue;
      ++count;
      images.insert(nilpotent_map_modified(lab).blocks);
    }
    CHECK((long)images.size() == count);
  }
  // ... while the unmodified map collides at rank 14
  std::set<std::vector<long>> images;
  long count = 0;
  for (auto& lab : enumerate_classes(AlgType::D, 14)) {
    if (!lab.lambda.empty()) continue;
    ++count;
    images.insert(nilpotent_map(lab).blocks);
  }
  CHECK((long)images.size() < count);
}

TEST_CASE("both maps surject onto admissible Jordan types at small rank") {
  for (long n = 1; n <= 6; ++n) {
    for (auto t : {AlgType::B, AlgType::C, AlgType::D}) {
      std::set<std::vector<long>> admissible;
      for (auto& j : admissible_jordan_types(t, n)) admissible.insert(j.blocks);
      std::set<std::vector<long>> image, image_mod;
      for (auto& lab : enumerate_classes(t, n)) {
        image.insert(nilpotent_map(lab).blocks);
        if (t != AlgType::C) image_mod.insert(nilpotent_map_modified(lab).blocks);
      }
      INFO(algtype_str(t), " n=", n);
      CHECK(image == admissible);
      if (t != AlgType::C) CHECK(image_mod == admissible);
    }
  }
}
