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

#ifndef TAUFORGE_ZSERIES_HPP
#define TAUFORGE_ZSERIES_HPP

#include <map>

#include "tauforge/grasspoly.hpp"

namespace tauforge {

/// Formal z-Laurent object with GrassPoly coefficients over a finite window.
/// Exponents are stored doubled so half-integer powers are exact; the window
/// [lo2, hi2] is inclusive and also doubled. Coefficients outside the window
/// are dropped on construction.
class ZSeries {
 public:
  ZSeries() : lo2_(0), hi2_(-1) {}
  ZSeries(int lo2, int hi2) : lo2_(lo2), hi2_(hi2) {}

  static ZSeries zmono2(int exp2, const GrassPoly& p, int lo2, int hi2);

  int lo2() const { return lo2_; }
  int hi2() const { return hi2_; }
  bool window_empty() const { return hi2_ < lo2_; }

  const std::map<int, GrassPoly>& coeffs() const { return c_; }
  GrassPoly coeff2(int exp2) const;

  void add2(int exp2, const GrassPoly& p);

  ZSeries operator+(const ZSeries& o) const;
  ZSeries operator-(const ZSeries& o) const;
  /// Product truncated to the intersection window semantics: the result
  /// window is [max(lo2 sums kept by caller)] — here simply this window
  /// clipped to [lo2_, hi2_] of the left operand unless overridden.
  ZSeries mul(const ZSeries& o, int lo2, int hi2) const;
  ZSeries scaled(const GrassPoly& p) const;
  ZSeries shifted2(int delta2) const;  // multiply by z^{delta2/2}, reclip

  /// Coefficient of z^{-1}.
  GrassPoly residue() const;

  bool is_zero() const;

 private:
  int lo2_, hi2_;
  std::map<int, GrassPoly> c_;
};

/// Coefficients h_m of exp(sum_k c t^{(comp)}_k z^k) for m = 0..mmax, where k
/// runs over positive integers (odd only when odd_only), and the t variables
/// are built by var_of(k). h_0 = 1.
std::vector<GrassPoly> exp_zt_coeffs(const std::function<Var(int)>& var_of,
                                     const Cyclo& c, bool odd_only, int mmax);

/// Miwa shift: substitute t^{(comp)}_k -> t_k + coef * z^{-k} / k (all k >= 1),
/// or t_k -> t_k + 2 coef z^{-k}/k for odd k only. Exact for polynomials:
/// returns a z-Laurent polynomial with exponents in [-wdeg, 0].
ZSeries miwa_shift(const GrassPoly& p, const std::function<bool(const Var&)>& sel,
                   const Cyclo& coef, bool odd_only);

}  // namespace tauforge

#endif
