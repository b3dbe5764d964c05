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

#ifndef TAUFORGE_FOCK_HPP
#define TAUFORGE_FOCK_HPP

#include <map>
#include <string>
#include <vector>

#include "tauforge/cyclo.hpp"

namespace tauforge {

enum class Family : char { a = 'a', b = 'b', c = 'c', d = 'd' };

/// Component signature of a multicomponent realization: s charged pairs and
/// r neutral/twisted species. Family a forces r = 0. The extra generator
/// sigma_0 exists for (b, r even) and (d, r odd).
struct AlgebraKind {
  Family family;
  int s = 1;
  int r = 0;

  bool valid() const;
  bool has_sigma0() const;
  std::string str() const;
};

/// Species of a multicomponent mode. One-component generators are the s=1 or
/// r=1 species of the corresponding family.
enum class Species : uint8_t {
  PsiPlus,   // psi^{+a}, a in 1..s         (families a, b, d)
  PsiMinus,  // psi^{-a}
  PhiT,      // tilde-phi^{s+c}, c in 1..r  (families b, d)
  BPlus,     // b^{+a}                       (family c)
  BMinus,    // b^{-a}
  Bos,       // b^{s+c}                      (family c)
  Sigma0,    // extra generator
  SigmaJ,    // sigma_j field modes of the so_{2n+1} reduction
};

struct ModeOp {
  Species sp;
  int comp;   // component index (1-based); 0 for Sigma0
  int idx2;   // doubled mode index

  std::string str() const;
};

/// One-component generator in the underlying algebra (species collapsed to
/// the family's own generators).
struct M1 {
  uint8_t sp;  // 0 psi+, 1 psi-, 2 phitilde, 3 phi, 4 bos
  int idx2;
  friend bool operator<(const M1& x, const M1& y) {
    if (x.sp != y.sp) return x.sp < y.sp;
    return x.idx2 < y.idx2;
  }
  friend bool operator==(const M1& x, const M1& y) {
    return x.sp == y.sp && x.idx2 == y.idx2;
  }
};

using Word = std::vector<M1>;

/// Finite linear combination of normally ordered creation words applied to
/// the vacuum, with exact cyclotomic coefficients.
class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(AlgebraKind k) : kind_(k) {}

  static FockVector vacuum(AlgebraKind k);

  const AlgebraKind& kind() const { return kind_; }
  const std::map<Word, Cyclo>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Word& w, const Cyclo& c);
  FockVector operator+(const FockVector& o) const;
  FockVector operator-(const FockVector& o) const;
  FockVector scaled(const Cyclo& c) const;
  bool operator==(const FockVector& o) const { return terms_ == o.terms_; }

  /// Maximal energy (doubled) over stored words.
  int energy2() const;
  std::string str() const;

 private:
  AlgebraKind kind_;
  std::map<Word, Cyclo> terms_;
};

/// Relabeling: multicomponent mode -> linear combination of one-component
/// generators (exact round-trip bijection including the zero-mode mixes).
std::vector<std::pair<Cyclo, M1>> relabel(const AlgebraKind& kind, const ModeOp& m);
/// Inverse: one-component generator -> multicomponent modes.
std::vector<std::pair<Cyclo, ModeOp>> relabel_inverse(const AlgebraKind& kind, const M1& m);

/// Apply one one-component generator with exact normal ordering.
FockVector apply_m1(const FockVector& v, const M1& m);
/// Apply a multicomponent mode (relabel + apply).
FockVector apply_mode(const FockVector& v, const ModeOp& m);

/// A quadratic group generator v^+ v^- given by two linear combinations of
/// modes. For Clifford families the span must be isotropic so that
/// exp(v^+ v^-) = 1 + v^+ v^-; for family c only creation modes are allowed
/// and the exponential is truncated at energy e2max.
struct OrbitGen {
  std::vector<std::pair<Cyclo, ModeOp>> plus, minus;
};

FockVector orbit_element(const AlgebraKind& kind, const std::vector<OrbitGen>& gens,
                         int e2max);

/// Tensor of two Fock vectors with exact coefficients.
class FockTensor {
 public:
  void add(const Word& a, const Word& b, const Cyclo& c);
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::pair<Word, Word>, Cyclo>& terms() const { return terms_; }
  FockTensor operator-(const FockTensor& o) const;
  std::string str() const;

 private:
  std::map<std::pair<Word, Word>, Cyclo> terms_;
};

FockTensor tensor_of(const FockVector& a, const FockVector& b);

/// Exponent table of a reduction: z-power multipliers per species. Empty
/// means the unreduced hierarchy (all n = 1, p must then be 0 for the plain
/// Casimir).
struct ReductionTable {
  std::vector<long> n_charged;  // size s
  std::vector<long> n_neutral;  // size r: exponent of z in z^{p n_c} (b/d use
                                // z^{2 p mu_c - 1} dz/z conventions internally)
};

/// S_x^{(p)}(tau1 (x) tau2) minus the right-hand side; exactly zero iff the
/// bilinear identity holds at power p.
FockTensor bilinear_residue(const AlgebraKind& kind, const FockVector& tau1,
                            const FockVector& tau2, long p,
                            const ReductionTable* reduction = nullptr);

/// Dimension table of the truncated module: (doubled energy, charge) ->
/// count, enumerated by a bounded knapsack over creation letters. When a
/// reduction label is given the letter energies rescale to j N / lambda_a and
/// j N / mu_b (doubled via the 1/den grid of qseries).
std::map<std::pair<long, long>, long> graded_dimensions(const AlgebraKind& kind, int e2max);
std::map<std::pair<long, long>, long> graded_dimensions_reduced(
    Family family, const std::vector<long>& lambda, const std::vector<long>& mu,
    long den, long emax_units);

}  // namespace tauforge

#endif
