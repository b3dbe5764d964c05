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

#ifndef TAUFORGE_LAX_HPP
#define TAUFORGE_LAX_HPP

#include "tauforge/bosonize.hpp"
#include "tauforge/psdo.hpp"
#include "tauforge/report.hpp"

namespace tauforge {

/// Strategy used to build the wave operators.
enum class DressKind {
  KP,        // s x s, family a
  BDFirst,   // 2s x 2s, families b/d, charged block only
  BDSecond,  // (2s+1) x (2s+1), J(d)-splitting
  CKP,       // (r+2s) x (r+2s), family c
  BKP1,      // scalar one-component b reduction of BDSecond
};

struct DressingSet {
  HierarchySpec spec;
  DressKind dkind;
  Sector alpha;            // base charge sector
  std::vector<int> ell;    // theta sector for b/d (0/1 per theta variable)
  int depth = 6;
  DiffCtx ctx;
  GrassPoly tau_base;      // denominator
  MatPSDO Pplus, Pminus;
  // constrained-KP data (families b/d with mu nonempty)
  std::map<int, std::vector<Frac>> Wplus, Wminus;  // n -> (2s x r) entries
  std::vector<Frac> Tplus, Tminus;                 // 2s columns
  // second approach: J(d) and its inverse, and the normalizing constant term
  MatPSDO Jop, Jinv;
};

struct LaxSet {
  DressKind dkind;
  DiffCtx ctx;
  MatPSDO L;
  std::vector<MatPSDO> C;  // KP: C^(j); CKP: C^b (1..r+2s)
  std::vector<MatPSDO> D;  // B/D and CKP: D^j
  std::vector<MatPSDO> E;  // B/D and CKP: E^j
  MatPSDO Pinv;            // cached inverse of P+
};

/// Build the wave operators from a polynomial tau family. The base sector's
/// tau must be nonzero. Orders are kept down to d^{-depth}.
DressingSet dressing_from_tau(const HierarchySpec& spec, const TauFamily& T,
                              const Sector& alpha, const std::vector<int>& ell, int depth,
                              DressKind dkind);

LaxSet lax_from_dressing(const DressingSet& ds);

/// dP/dt_i^{(a)} + (dressed flow generator)_- P, zero for tau families.
MatPSDO sato_wilson_residual(const DressingSet& ds, int comp, int flow);

/// dX/dt - [(generator)_+ , X] for X = L and the auxiliaries.
std::vector<MatPSDO> lax_sato_residual(const DressingSet& ds, const LaxSet& ls, int comp,
                                       int flow);

struct ReducedOperator {
  MatPSDO calL;
  bool differential;           // true when the integral part vanishes
  bool constrained_form_match; // true when matched against the W-bilinear form
  std::string detail;
};

ReducedOperator reduced_operator(const DressingSet& ds, const LaxSet& ls);

/// Adjoint constraint checks per strategy (K-conjugation, L* = -L, 1.42a).
Report adjoint_constraints(const DressingSet& ds, const LaxSet& ls);

/// Sato-Wilson consistency of the wave operators (P-* relations).
Report dressing_invariants(const DressingSet& ds);

/// B-type eigenfunction residual d T^{+}/dt - (L^i D^j)_+ T^{+} for the
/// stored T columns (first approach, mu = empty so_{2n+1} case).
std::vector<GrassPoly> eigenfunction_residual(const DressingSet& ds, const LaxSet& ls,
                                              int comp, int flow);

/// Fully symbolic B/D first-approach pair at s = 1: the wave operator is
/// solved order by order from P* J P = J with free symbol families for the
/// undetermined entries, then L = P J d P^{-1} and D = P J P^{-1}. Symbol
/// families are u_var(100 k + 10 i + j, n) for the (i,j) entry of the order
/// -k wave coefficient with n x-derivatives.
struct SymbolicBD {
  MatPSDO P, L, D;
  DiffCtx ctx;
};
SymbolicBD symbolic_bd_s1(int depth);

}  // namespace tauforge

#endif
