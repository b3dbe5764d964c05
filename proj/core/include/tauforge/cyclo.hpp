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

#ifndef TAUFORGE_CYCLO_HPP
#define TAUFORGE_CYCLO_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace tauforge {

using Rat = mpq_class;

long gcd_long(long a, long b);
long lcm_long(long a, long b);
long euler_phi(long m);

/// Element of the M-th cyclotomic field Q(zeta_M), stored as a coefficient
/// vector of length phi(M) in the power basis 1, zeta, ..., zeta^{phi(M)-1},
/// canonically reduced modulo the M-th cyclotomic polynomial.
///
/// Arithmetic between different conductors embeds both operands into
/// Q(zeta_lcm). Comparisons are independent of the construction path.
class Cyclo {
 public:
  Cyclo() : m_(1), c_(1, Rat(0)) {}
  Cyclo(long num) : m_(1), c_(1, Rat(num)) {}
  Cyclo(const Rat& r) : m_(1), c_(1, r) {}
  Cyclo(long num, long den) : m_(1), c_(1, Rat(num, den)) { c_[0].canonicalize(); }

  /// zeta_M^k, canonically reduced.
  static Cyclo root_of_unity(long M, long k);
  /// sqrt(-1) = zeta_4.
  static Cyclo i();
  /// Positive square root of a positive integer, via Gauss sums.
  static Cyclo sqrt_int(long n);

  long conductor() const { return m_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Rational value; valid only when is_rational().
  Rat rational_value() const;

  Cyclo operator-() const;
  Cyclo operator+(const Cyclo& o) const;
  Cyclo operator-(const Cyclo& o) const;
  Cyclo operator*(const Cyclo& o) const;
  Cyclo& operator+=(const Cyclo& o) { *this = *this + o; return *this; }
  Cyclo& operator-=(const Cyclo& o) { *this = *this - o; return *this; }
  Cyclo& operator*=(const Cyclo& o) { *this = *this * o; return *this; }

  bool operator==(const Cyclo& o) const;
  bool operator!=(const Cyclo& o) const { return !(*this == o); }

  /// Multiplicative inverse. Throws std::domain_error on zero.
  Cyclo inverse() const;
  Cyclo operator/(const Cyclo& o) const { return *this * o.inverse(); }

  /// Complex conjugate (zeta -> zeta^{-1}).
  Cyclo conj() const;
  /// Galois twist zeta_M -> zeta_M^k, gcd(k, M) = 1.
  Cyclo galois(long k) const;

  /// Lift to the conductor M (m_ must divide M).
  Cyclo lifted(long M) const;
  /// Drop to the smallest conductor that still represents the value exactly
  /// among divisors of the current one. Keeps vectors short.
  void shrink();

  /// "cyclo(M)[c0,c1,...]"; rationals as p/q.
  std::string str() const;

  static const std::vector<Rat>& cyclotomic_poly(long M);

 private:
  long m_;
  std::vector<Rat> c_;  // size phi(m_)

  void reduce(std::vector<Rat>& raw) const;  // raw has arbitrary length
  static Cyclo from_raw(long M, std::vector<Rat> raw);
};

inline Cyclo operator*(const Rat& r, const Cyclo& c) { return Cyclo(r) * c; }
inline Cyclo operator*(long n, const Cyclo& c) { return Cyclo(n) * c; }

}  // namespace tauforge

#endif
