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

#ifndef TAUFORGE_PSDO_HPP
#define TAUFORGE_PSDO_HPP

#include <map>
#include <optional>

#include "tauforge/grasspoly.hpp"

namespace tauforge {

/// Differentiation context: d/dx acts as the sum of d/dt_1 over the listed
/// (kind, component) variables, plus the derivative bump on opaque symbol
/// families (u_{id,n} -> u_{id,n+1}).
struct DiffCtx {
  std::vector<Var> xvars;   // typically t_1^{(a)} for the charged components
  bool u_symbols = false;   // bump VarKind::U derivative counters

  GrassPoly dx(const GrassPoly& p) const;
  /// Plain partial derivative by an arbitrary commuting variable.
  static GrassPoly dvar(const GrassPoly& p, const Var& v);
};

/// Coefficient fraction num / base^pow over a fixed denominator polynomial.
struct Frac {
  GrassPoly num;
  int pow = 0;
  bool is_zero() const { return num.is_zero(); }
};

/// Matrix pseudo-differential operator: sum_k M_k d^k over a finite order
/// window [lo, hi]; orders above hi are exactly zero, orders below lo are
/// unknown (truncated). Coefficient entries are fractions with denominators
/// that are powers of a designated base polynomial (cross-multiplied, never
/// reduced).
class MatPSDO {
 public:
  MatPSDO() : m_(0), lo_(0), hi_(-1) {}
  MatPSDO(long m, int lo, int hi, GrassPoly base = GrassPoly(1))
      : m_(m), lo_(lo), hi_(hi), base_(base) {}

  static MatPSDO identity(long m, int lo);
  /// c * E_{ij} d^k
  static MatPSDO unit(long m, int lo, int hi, long i, long j, int k, const GrassPoly& c);
  /// diagonal constant matrix as an order-zero operator
  static MatPSDO diag(long m, int lo, const std::vector<Cyclo>& entries);

  long size() const { return m_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const GrassPoly& base() const { return base_; }

  const Frac& at(int k, long i, long j) const;
  void set(int k, long i, long j, const Frac& f);
  void add(int k, long i, long j, const GrassPoly& num, int pow);

  MatPSDO operator+(const MatPSDO& o) const;
  MatPSDO operator-(const MatPSDO& o) const;
  /// Leibniz composition, truncated to the valid window.
  MatPSDO mul(const MatPSDO& o, const DiffCtx& ctx) const;
  MatPSDO scaled(const GrassPoly& c) const;
  MatPSDO truncated(int lo, int hi) const;

  /// (f d^k)* = (-d)^k f^T
  MatPSDO adjoint(const DiffCtx& ctx) const;

  /// Differential / integral part split. The differential part keeps the
  /// full window: its negative orders are known to vanish.
  MatPSDO plus_part() const;
  MatPSDO minus_part() const;

  /// Coefficient-wise derivative by an arbitrary commuting variable.
  MatPSDO dvar(const Var& v, const DiffCtx& ctx) const;

  /// Two-sided inverse modulo the window; requires an invertible constant
  /// leading coefficient at the top order.
  MatPSDO invert(const DiffCtx& ctx) const;
  MatPSDO power(long n, const DiffCtx& ctx) const;

  bool window_zero() const;
  bool operator==(const MatPSDO& o) const;

  std::string str() const;

 private:
  long m_;
  int lo_, hi_;
  GrassPoly base_;
  std::map<int, std::vector<Frac>> coef_;  // order -> m*m entries

  friend MatPSDO with_base(const MatPSDO& a, const GrassPoly& base);
};

/// Reinterpret an operator over a (larger) denominator base.
MatPSDO with_base(const MatPSDO& a, const GrassPoly& base);

/// Generalized binomial C(k, l), integer k of either sign, l >= 0.
Rat gen_binom(long k, long l);

/// The J(d)-splitting of the second approach: A_ge = (A J)_+ J^{-1},
/// A_lt = A - A_ge; J and Jinv are supplied by the caller.
std::pair<MatPSDO, MatPSDO> split_ge_lt(const MatPSDO& a, const MatPSDO& J,
                                        const MatPSDO& Jinv, const DiffCtx& ctx);

}  // namespace tauforge

#endif
