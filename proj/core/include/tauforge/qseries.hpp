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

#ifndef TAUFORGE_QSERIES_HPP
#define TAUFORGE_QSERIES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tauforge/cyclo.hpp"

namespace tauforge {

/// Truncated two-variable formal series: rational coefficients on a grid of
/// (q-exponent, marker exponent). q-exponents are doubled so the half-integer
/// gradings stay exact; the marker tracks t (charge) or x (with x^2 = 1).
class QSeries {
 public:
  explicit QSeries(int k2 = 0, bool marker_involutive = false)
      : k2_(k2), x2_(marker_involutive) {}

  static QSeries one(int k2, bool marker_involutive = false);
  /// c * q^{e2/2} t^m
  static QSeries term(int k2, int e2, int m, const Rat& c, bool marker_involutive = false);

  int order2() const { return k2_; }
  const std::map<std::pair<int, int>, Rat>& coeffs() const { return c_; }
  Rat coeff(int e2, int m) const;

  void add(int e2, int m, const Rat& c);
  QSeries operator+(const QSeries& o) const;
  QSeries operator-(const QSeries& o) const;
  QSeries operator*(const QSeries& o) const;
  bool operator==(const QSeries& o) const { return c_ == o.c_; }

  /// 1/(1 - c q^{e2/2} t^m), truncated. e2 must be > 0.
  QSeries mul_geometric(int e2, int m, const Rat& c) const;
  /// (1 + c q^{e2/2} t^m)
  QSeries mul_one_plus(int e2, int m, const Rat& c) const;

  /// First (lowest-exponent) differing coefficient versus another series.
  std::optional<std::tuple<int, int, Rat, Rat>> first_difference(const QSeries& o) const;

  std::string str() const;

 private:
  int k2_;
  bool x2_;
  std::map<std::pair<int, int>, Rat> c_;
};

/// Identity catalogue. Parameters: s, r (component counts), partitions
/// lambda/mu with N = lcm as used by the reduced gradings, marker window.
struct QIdentityParams {
  int s = 0, r = 0;
  std::vector<long> lambda, mu;
  int marker_window = 6;  // |t-exponent| cap where a marker is present
};

/// Sides of the named identity expanded exactly to order q^{k2/2}.
QSeries qidentity_side(const std::string& name, const std::string& side, int k2,
                       const QIdentityParams& params);

struct QVerifyResult {
  bool ok;
  std::string detail;  // first discrepancy, when not ok
};

QVerifyResult qidentity_verify(const std::string& name, int k2, const QIdentityParams& params);

std::vector<std::string> qidentity_names();

/// Reduced q-dimension identities (types a and d) on the 1/den exponent grid.
long qdim_reduced_unit(const std::vector<long>& lambda, const std::vector<long>& mu);
QSeries qdim_reduced_side(char family, const std::string& side,
                          const std::vector<long>& lambda, const std::vector<long>& mu,
                          int kmax, int win);

}  // namespace tauforge

#endif
