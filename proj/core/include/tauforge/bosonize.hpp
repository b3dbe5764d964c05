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

#ifndef TAUFORGE_BOSONIZE_HPP
#define TAUFORGE_BOSONIZE_HPP

#include <map>
#include <optional>

#include "tauforge/fock.hpp"
#include "tauforge/grasspoly.hpp"
#include "tauforge/weylclass.hpp"
#include "tauforge/zseries.hpp"

namespace tauforge {

/// Charge sector: lattice point in Z^s (empty for family c, whose Grassmann
/// content lives inside the polynomials).
using Sector = std::vector<int>;

/// Theta letters with components at or above this base are nilpotent even
/// parameters shared across both slots of a bilinear object: to_barred keeps
/// them unbarred, so eps = theta_a theta_b satisfies eps^2 = 0 in products of
/// the two slots. Used to build exact first-order group-orbit elements.
inline constexpr int kParamThetaBase = 1 << 20;

/// Charge-lattice indexed family of polynomial tau functions. Polynomials
/// live in t^{(a)}_k (odd k only for twisted components), theta_j, and the
/// xi variables; barred variants are used for the second slot of bilinear
/// residuals.
struct TauFamily {
  AlgebraKind kind;
  bool barred = false;
  std::map<Sector, GrassPoly> sec;

  static TauFamily unit(const AlgebraKind& kind);

  void add(const Sector& s, const GrassPoly& p);
  TauFamily operator+(const TauFamily& o) const;
  TauFamily operator-(const TauFamily& o) const;
  TauFamily scaled(const Cyclo& c) const;
  bool is_zero() const;
  bool operator==(const TauFamily& o) const;
  long max_weighted_degree() const;
  std::string str() const;
};

/// Exact single-mode application of the bosonized field: the coefficient of
/// the appropriate z-power of sigma field(z) sigma^{-1} acting on T.
TauFamily vertex_mode(const TauFamily& T, const ModeOp& m);

/// Bosonization isomorphism on energy-bounded vectors: sigma(|0>) = 1,
/// computed by peeling word letters through the vertex realization.
TauFamily sigma_map(const FockVector& v);

/// Rename all variables to their barred copies.
TauFamily to_barred(const TauFamily& T);

/// Hierarchy specification: the algebra kind plus an optional reduction with
/// per-species exponent tables (n_a for charged, 2 mu_c for neutral; a table
/// one shorter than r marks the last twisted species as the sigma(z) field
/// of the so_{2n+1} reductions).
struct HierarchySpec {
  AlgebraKind kind;
  std::optional<ReductionTable> reduction;
};

/// Bilinear object on sector pairs.
using BilinearPoly = std::map<std::pair<Sector, Sector>, GrassPoly>;

/// Exact left-minus-right side of the bilinear identity at power p in the
/// bosonic picture: zero for all sector pairs iff the family satisfies the
/// hierarchy at that p.
BilinearPoly hirota_residual(const HierarchySpec& spec, const TauFamily& T1,
                             const TauFamily& T2, long p);

bool bilinear_is_zero(const BilinearPoly& b);

struct ReductionConstraintResult {
  bool consistent;          // a single c_ell works across sectors
  std::optional<Rat> cell;  // the constant when tau is rational-led
  std::map<Sector, GrassPoly> residuals;
};

/// sum_a d tau / d t^{(a)}_{ell n_a} - c_ell tau per sector, with c_ell
/// solved from the first sector with a nonzero tau.
ReductionConstraintResult reduction_constraint_residual(const HierarchySpec& spec,
                                                        const TauFamily& T, long ell);

}  // namespace tauforge

#endif
