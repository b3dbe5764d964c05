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

#ifndef TAUFORGE_GRASSPOLY_HPP
#define TAUFORGE_GRASSPOLY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tauforge/cyclo.hpp"

namespace tauforge {

/// Variable universe. Commuting kinds: T (times t^(comp)_idx), TBar (second
/// copy for bilinear residuals), U (opaque symbol families, idx = number of
/// x-derivatives). Anticommuting kinds: Theta/Xi and their barred copies.
/// Xi indices are stored doubled so half-integer labels stay exact.
enum class VarKind : uint8_t { T = 0, TBar, U, Theta, Xi, ThetaBar, XiBar };

inline bool is_odd_kind(VarKind k) {
  return k == VarKind::Theta || k == VarKind::Xi || k == VarKind::ThetaBar ||
         k == VarKind::XiBar;
}

struct Var {
  VarKind kind;
  int32_t comp;
  int32_t idx;  // doubled for Xi/XiBar

  friend bool operator<(const Var& a, const Var& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.comp != b.comp) return a.comp < b.comp;
    return a.idx < b.idx;
  }
  friend bool operator==(const Var& a, const Var& b) {
    return a.kind == b.kind && a.comp == b.comp && a.idx == b.idx;
  }
};

inline Var t_var(int comp, int k) { return Var{VarKind::T, comp, k}; }
inline Var tbar_var(int comp, int k) { return Var{VarKind::TBar, comp, k}; }
inline Var u_var(int family, int deriv) { return Var{VarKind::U, family, deriv}; }
inline Var theta_var(int j) { return Var{VarKind::Theta, j, 0}; }
inline Var thetabar_var(int j) { return Var{VarKind::ThetaBar, j, 0}; }
inline Var xi_var2(int comp, int idx2) { return Var{VarKind::Xi, comp, idx2}; }
inline Var xibar_var2(int comp, int idx2) { return Var{VarKind::XiBar, comp, idx2}; }

/// Monomial: sparse exponent vector over commuting variables plus an ordered
/// square-free word of anticommuting letters.
struct Mono {
  std::vector<std::pair<Var, int>> even;  // sorted, exponents > 0
  std::vector<Var> odd;                   // sorted strictly ascending

  bool operator<(const Mono& o) const {
    if (even != o.even) return even < o.even;
    return odd < o.odd;
  }
  bool operator==(const Mono& o) const { return even == o.even && odd == o.odd; }
  int parity() const { return (int)(odd.size() & 1); }
};

class GrassPoly {
 public:
  GrassPoly() = default;
  GrassPoly(long n) { if (n != 0) terms_[Mono{}] = Cyclo(n); }
  GrassPoly(const Cyclo& c) { if (!c.is_zero()) terms_[Mono{}] = c; }

  static GrassPoly variable(const Var& v);
  static GrassPoly monomial(const Mono& m, const Cyclo& c);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Mono, Cyclo>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }

  void add_term(const Mono& m, const Cyclo& c);

  GrassPoly operator-() const;
  GrassPoly operator+(const GrassPoly& o) const;
  GrassPoly operator-(const GrassPoly& o) const;
  GrassPoly operator*(const GrassPoly& o) const;
  GrassPoly& operator+=(const GrassPoly& o);
  GrassPoly& operator-=(const GrassPoly& o) { return *this += -o; }
  GrassPoly& operator*=(const GrassPoly& o) { *this = *this * o; return *this; }
  bool operator==(const GrassPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const GrassPoly& o) const { return !(*this == o); }

  GrassPoly scaled(const Cyclo& c) const;

  /// Partial derivative with respect to a commuting variable.
  GrassPoly d(const Var& v) const;
  /// Left derivative with respect to an anticommuting letter.
  GrassPoly odd_d(const Var& v) const;
  /// Left multiplication by an anticommuting letter.
  GrassPoly odd_mul(const Var& v) const;

  /// Set every variable accepted by the filter to zero.
  GrassPoly subst_zero(const std::function<bool(const Var&)>& filter) const;
  /// Coefficient of a given odd word (extracted from the left in sorted
  /// order), i.e. the unique f with  poly = word*f + terms not divisible.
  GrassPoly odd_coeff(const std::vector<Var>& word) const;

  /// Sum of k * exp(t_k) over commuting variables accepted by the filter,
  /// maximized over monomials; 0 for the zero polynomial. Bounds Miwa shifts.
  long weighted_degree(const std::function<bool(const Var&)>& filter) const;

  /// Apply a commuting-variable substitution v -> v + shift[v] where shifts
  /// are plain polynomials (used by tests; Miwa shifts live in zseries).
  GrassPoly subst_add(const Var& v, const GrassPoly& add) const;

  /// Rename variables (kind changes etc.); must stay injective and
  /// order-compatible on odd letters or signs are recomputed.
  GrassPoly rename(const std::function<Var(const Var&)>& f) const;

  int max_odd_letters() const;
  std::string str() const;

  /// Sign (+1/-1) of sorting the concatenation of two sorted odd words, or 0
  /// if a letter repeats. 'merged' receives the sorted union.
  static int merge_odd(const std::vector<Var>& a, const std::vector<Var>& b,
                       std::vector<Var>& merged);

 private:
  std::map<Mono, Cyclo> terms_;
};

inline GrassPoly operator*(const Cyclo& c, const GrassPoly& p) { return p.scaled(c); }

std::string var_str(const Var& v);

}  // namespace tauforge

#endif
