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

#ifndef TAUFORGE_WEYLCLASS_HPP
#define TAUFORGE_WEYLCLASS_HPP

#include <optional>
#include <string>
#include <vector>

#include "tauforge/cyclo.hpp"

namespace tauforge {

enum class AlgType { A, B, C, D, A2, D2 };

std::string algtype_str(AlgType t);
std::optional<AlgType> algtype_parse(const std::string& s);

/// Conjugacy class of the Weyl group: positive-cycle partition lambda and
/// negative-cycle partition mu (empty for type A).
struct WeylClassLabel {
  AlgType type;
  long n;  // rank parameter
  std::vector<long> lambda;
  std::vector<long> mu;

  bool valid() const;
  std::string str() const;
};

/// Dense matrix over the cyclotomic field.
class CMat {
 public:
  CMat() : rows_(0), cols_(0) {}
  CMat(long r, long c) : rows_(r), cols_(c), a_(r * c) {}
  static CMat identity(long n);

  long rows() const { return rows_; }
  long cols() const { return cols_; }
  Cyclo& at(long i, long j) { return a_[i * cols_ + j]; }
  const Cyclo& at(long i, long j) const { return a_[i * cols_ + j]; }

  CMat operator+(const CMat& o) const;
  CMat operator-(const CMat& o) const;
  CMat operator*(const CMat& o) const;
  CMat scaled(const Cyclo& c) const;
  CMat transpose() const;
  bool operator==(const CMat& o) const;
  bool is_zero() const;

  /// Rank by Gaussian elimination (exact).
  long rank() const;
  /// Inverse; throws on singular.
  CMat inverse() const;
  /// Kernel basis as columns.
  CMat kernel() const;

  std::string str() const;

 private:
  long rows_, cols_;
  std::vector<Cyclo> a_;
};

/// Signed permutation: eps_j -> sign[j] * eps_{perm[j]} (0-based arrays).
struct SignedPerm {
  std::vector<long> perm;
  std::vector<int> sign;
  std::string str() const;
};

/// Lift data for a conjugacy class: the lift wtilde in the matrix group, the
/// diagonalizing frame S, the rational diagonal h_w on the eps-basis, the
/// automorphism order N, and the defining-representation dimension.
struct WeylFrame {
  WeylClassLabel label;
  char flavor = 'd';  // 'b' or 'd', type B only
  long dim = 0;       // n, 2n or 2n+1
  CMat wtilde;
  CMat frame;              // S with  wtilde = S exp(2 pi i h) S^{-1}
  std::vector<Rat> hdiag;  // length dim: diagonal entries of h_w in gl_dim
  long order = 0;          // N
};

struct CheckEntry {
  std::string name;
  bool pass;
  std::string detail;
};

struct FrameReport {
  std::vector<CheckEntry> checks;
  bool all_pass() const;
};

std::vector<WeylClassLabel> enumerate_classes(AlgType type, long n);

SignedPerm standard_element(const WeylClassLabel& label);

WeylFrame build_frame(const WeylClassLabel& label, char flavor = 'd');

/// Order of exp(2 pi i ad h_w) from the proposition parity clauses.
long automorphism_order(const WeylClassLabel& label, char flavor = 'd');
/// Brute-force order: lcm of denominators of h_i - h_j over the root
/// positions of g inside gl_dim.
long automorphism_order_brute(const WeylFrame& f);

struct JordanType {
  std::vector<long> blocks;  // weakly decreasing
  bool operator==(const JordanType& o) const { return blocks == o.blocks; }
  std::string str() const;
};

JordanType nilpotent_map(const WeylClassLabel& label);
JordanType nilpotent_map_modified(const WeylClassLabel& label);

/// Explicit nilpotent matrix f_{(lambda,mu)} in the defining representation.
CMat nilpotent_matrix(const WeylClassLabel& label);
/// Jordan type of a nilpotent matrix via exact ranks of powers.
JordanType jordan_type_of(const CMat& f);

FrameReport verify_frame(const WeylFrame& f);

/// Gram matrix of the invariant bilinear form on the defining representation
/// (so or sp conventions; identity for type A).
CMat form_gram(AlgType type, long dim);

/// All Jordan types admissible as nilpotent orbits (parity constraints) for
/// the given type and rank, used by surjectivity checks.
std::vector<JordanType> admissible_jordan_types(AlgType type, long n);

}  // namespace tauforge

#endif
