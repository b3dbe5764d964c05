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

#include "tauforge/zseries.hpp"

#include <stdexcept>

namespace tauforge {

ZSeries ZSeries::zmono2(int exp2, const GrassPoly& p, int lo2, int hi2) {
  ZSeries out(lo2, hi2);
  out.add2(exp2, p);
  return out;
}

GrassPoly ZSeries::coeff2(int exp2) const {
  auto it = c_.find(exp2);
  return it == c_.end() ? GrassPoly() : it->second;
}

void ZSeries::add2(int exp2, const GrassPoly& p) {
  if (exp2 < lo2_ || exp2 > hi2_ || p.is_zero()) return;
  auto it = c_.find(exp2);
  if (it == c_.end()) {
    c_.emplace(exp2, p);
  } else {
    it->second += p;
    if (it->second.is_zero()) c_.erase(it);
  }
}

ZSeries ZSeries::operator+(const ZSeries& o) const {
  ZSeries out(std::min(lo2_, o.lo2_), std::max(hi2_, o.hi2_));
  for (const auto& [e, p] : c_) out.add2(e, p);
  for (const auto& [e, p] : o.c_) out.add2(e, p);
  return out;
}

ZSeries ZSeries::operator-(const ZSeries& o) const {
  ZSeries out(std::min(lo2_, o.lo2_), std::max(hi2_, o.hi2_));
  for (const auto& [e, p] : c_) out.add2(e, p);
  for (const auto& [e, p] : o.c_) out.add2(e, -p);
  return out;
}

ZSeries ZSeries::mul(const ZSeries& o, int lo2, int hi2) const {
  ZSeries out(lo2, hi2);
  for (const auto& [ea, pa] : c_) {
    for (const auto& [eb, pb] : o.c_) {
      int e = ea + eb;
      if (e < lo2 || e > hi2) continue;
      out.add2(e, pa * pb);
    }
  }
  return out;
}

ZSeries ZSeries::scaled(const GrassPoly& p) const {
  ZSeries out(lo2_, hi2_);
  for (const auto& [e, q] : c_) out.add2(e, p * q);
  return out;
}

ZSeries ZSeries::shifted2(int delta2) const {
  ZSeries out(lo2_ + delta2, hi2_ + delta2);
  for (const auto& [e, q] : c_) out.add2(e + delta2, q);
  return out;
}

GrassPoly ZSeries::residue() const { return coeff2(-2); }

bool ZSeries::is_zero() const {
  for (const auto& [e, p] : c_)
    if (!p.is_zero()) return false;
  return true;
}

std::vector<GrassPoly> exp_zt_coeffs(const std::function<Var(int)>& var_of,
                                     const Cyclo& c, bool odd_only, int mmax) {
  // m h_m = sum_k k a_k h_{m-k} with a_k = c t_k (k odd only if requested)
  std::vector<GrassPoly> h(mmax + 1);
  h[0] = GrassPoly(1);
  for (int m = 1; m <= mmax; ++m) {
    GrassPoly acc;
    for (int k = 1; k <= m; ++k) {
      if (odd_only && k % 2 == 0) continue;
      GrassPoly term = GrassPoly::variable(var_of(k)).scaled(c * Cyclo(k));
      acc += term * h[m - k];
    }
    h[m] = acc.scaled(Cyclo(Rat(1, m)));
  }
  return h;
}

ZSeries miwa_shift(const GrassPoly& p, const std::function<bool(const Var&)>& sel,
                   const Cyclo& coef, bool odd_only) {
  long wdeg = p.weighted_degree([&](const Var& v) {
    return (v.kind == VarKind::T || v.kind == VarKind::TBar) && sel(v) &&
           (!odd_only || v.idx % 2 == 1);
  });
  ZSeries out(-2 * (int)wdeg, 0);
  // Expand each monomial: for selected t_k^e, (t_k + g z^{-k})^e with
  // g = coef/k (or 2coef/k for the odd-variable convention).
  for (const auto& [m, c] : p.terms()) {
    // seed: scalar and odd part and unselected even part
    ZSeries acc = ZSeries::zmono2(0, GrassPoly::monomial(Mono{{}, m.odd}, c),
                                  out.lo2(), out.hi2());
    for (const auto& [v, e] : m.even) {
      bool selected = (v.kind == VarKind::T || v.kind == VarKind::TBar) && sel(v) &&
                      (!odd_only || v.idx % 2 == 1);
      if (!selected) {
        Mono mm;
        mm.even.push_back({v, e});
        acc = acc.scaled(GrassPoly::monomial(mm, Cyclo(1)));
        continue;
      }
      Cyclo g = coef * Cyclo(Rat(odd_only ? 2 : 1, v.idx));
      // binomial expansion of (t + g z^{-k})^e
      ZSeries factor(out.lo2(), 0);
      Rat binom(1);
      for (int j = 0; j <= e; ++j) {
        // C(e, j) t^{e-j} g^j z^{-kj}
        GrassPoly termp;
        if (e - j > 0) {
          Mono mm;
          mm.even.push_back({v, e - j});
          termp = GrassPoly::monomial(mm, Cyclo(binom));
        } else {
          termp = GrassPoly(Cyclo(binom));
        }
        Cyclo gj(1);
        for (int q = 0; q < j; ++q) gj *= g;
        factor.add2(-2 * v.idx * j, termp.scaled(gj));
        binom = binom * (e - j) / (j + 1);
      }
      acc = acc.mul(factor, out.lo2(), out.hi2());
    }
    out = out + acc;
  }
  return out;
}

}  // namespace tauforge
