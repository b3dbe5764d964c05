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

#include "tauforge/bosonize.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tauforge {

TauFamily TauFamily::unit(const AlgebraKind& kind) {
  TauFamily t;
  t.kind = kind;
  t.sec[Sector(kind.family == Family::c ? 0 : kind.s, 0)] = GrassPoly(1);
  return t;
}

void TauFamily::add(const Sector& s, const GrassPoly& p) {
  if (p.is_zero()) return;
  auto it = sec.find(s);
  if (it == sec.end()) sec.emplace(s, p);
  else {
    it->second += p;
    if (it->second.is_zero()) sec.erase(it);
  }
}

TauFamily TauFamily::operator+(const TauFamily& o) const {
  TauFamily out = *this;
  for (const auto& [s, p] : o.sec) out.add(s, p);
  return out;
}

TauFamily TauFamily::operator-(const TauFamily& o) const {
  TauFamily out = *this;
  for (const auto& [s, p] : o.sec) out.add(s, -p);
  return out;
}

TauFamily TauFamily::scaled(const Cyclo& c) const {
  TauFamily out;
  out.kind = kind;
  out.barred = barred;
  if (c.is_zero()) return out;
  for (const auto& [s, p] : sec) out.add(s, p.scaled(c));
  return out;
}

bool TauFamily::is_zero() const {
  for (const auto& [s, p] : sec)
    if (!p.is_zero()) return false;
  return true;
}

bool TauFamily::operator==(const TauFamily& o) const {
  return (*this - o).is_zero();
}

long TauFamily::max_weighted_degree() const {
  long best = 0;
  for (const auto& [s, p] : sec) {
    best = std::max(best, p.weighted_degree([](const Var& v) {
      return v.kind == VarKind::T || v.kind == VarKind::TBar;
    }));
  }
  return best;
}

std::string TauFamily::str() const {
  std::ostringstream os;
  for (const auto& [s, p] : sec) {
    os << "sector (";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "): " << p.str() << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// vertex operator realization

namespace {

long abs_sum(const Sector& s) {
  long a = 0;
  for (int k : s) a += std::abs(k);
  return a;
}

long part_sum(const Sector& s, int upto) {  // |k|_{upto}: sum of first 'upto'
  long a = 0;
  for (int i = 0; i < upto && i < (int)s.size(); ++i) a += s[i];
  return a;
}

int sgn_pm(long v) { return ((v % 2) + 2) % 2 == 0 ? 1 : -1; }

// theta-letter count of a monomial
int theta_count(const Mono& m, bool barred) {
  int c = 0;
  VarKind k = barred ? VarKind::ThetaBar : VarKind::Theta;
  for (const auto& v : m.odd)
    if (v.kind == k) ++c;
  return c;
}

int xi_count_all(const Mono& m, bool barred) {
  int c = 0;
  VarKind k = barred ? VarKind::XiBar : VarKind::Xi;
  for (const auto& v : m.odd)
    if (v.kind == k) ++c;
  return c;
}

// R_b(theta) of the b/d bosonization: (d/dtheta_j + theta_j)/sqrt2 for odd b,
// i (d/dtheta_j - theta_j)/sqrt2 for even b, with j = ceil(b/2); for family b
// with odd r the last species uses the theta-parity operator instead.
GrassPoly apply_R(const AlgebraKind& kind, bool barred, int b, const GrassPoly& f) {
  auto th = [&](int j) { return barred ? thetabar_var(j) : theta_var(j); };
  bool parity_op = (kind.family == Family::b) && (kind.r % 2 == 1) && (b == kind.r);
  if (parity_op) {
    // (1/sqrt2)(-1)^{sum theta d/dtheta}; the normalization makes R_r^2 = 1/2
    // and matches phitilde_0 |0> = |0>/sqrt2
    GrassPoly out;
    for (const auto& [m, c] : f.terms()) {
      int tc = theta_count(m, barred);
      out.add_term(m, (tc % 2 == 0) ? c : -c);
    }
    return out.scaled(Cyclo::sqrt_int(2).inverse());
  }
  int j = (b + 1) / 2;
  Cyclo is2 = Cyclo::sqrt_int(2).inverse();
  GrassPoly d = f.odd_d(th(j));
  GrassPoly mth = f.odd_mul(th(j));
  if (b % 2 == 1) return (d + mth).scaled(is2);
  return (d - mth).scaled(Cyclo::i() * is2);
}

// S(theta) realizing sigma_0
GrassPoly apply_S(const AlgebraKind& kind, bool barred, const Sector& sec, const GrassPoly& f) {
  Cyclo is2 = Cyclo::sqrt_int(2).inverse();
  if (kind.family == Family::b) {
    // (1/sqrt2) (-1)^{sum q d/dq + sum theta d/dtheta}
    GrassPoly out;
    int qpar = (int)(((abs_sum(sec) % 2) + 2) % 2);
    for (const auto& [m, c] : f.terms()) {
      int tc = theta_count(m, barred);
      out.add_term(m, ((tc + qpar) % 2 == 0) ? c : -c);
    }
    return out.scaled(is2);
  }
  // family d: i (-1)^{sum q d/dq} (d/dtheta_p - theta_p)/sqrt2
  int p = (kind.r + 1) / 2;
  auto th = barred ? thetabar_var(p) : theta_var(p);
  GrassPoly g = (f.odd_d(th) - f.odd_mul(th)).scaled(Cyclo::i() * is2);
  int qpar = (int)(((abs_sum(sec) % 2) + 2) % 2);
  return qpar ? -g : g;
}

// family c sign operator S_a: flips xi letters of components < a
GrassPoly apply_Sa(bool barred, int a, const GrassPoly& f) {
  GrassPoly out;
  VarKind k = barred ? VarKind::XiBar : VarKind::Xi;
  for (const auto& [m, c] : f.terms()) {
    int cnt = 0;
    for (const auto& v : m.odd)
      if (v.kind == k && v.comp < a) ++cnt;
    out.add_term(m, (cnt % 2 == 0) ? c : -c);
  }
  return out;
}

// family c charge operator T_a eigenvalue on a monomial: #xi^a_{k<=0} - #xi^a_{k>0}
int Ta_eigen(const Mono& m, bool barred, int a) {
  VarKind k = barred ? VarKind::XiBar : VarKind::Xi;
  int v = 0;
  for (const auto& x : m.odd) {
    if (x.kind != k || x.comp != a) continue;
    if (x.idx <= 0) ++v;
    else --v;
  }
  return v;
}

struct ModeCtx {
  const AlgebraKind& kind;
  bool barred;
  std::function<Var(int, int)> tvar;  // (comp, k)
};

// coefficient of z^{c2/2} in e^{sgn z . t^{(comp)}} * (Laurent object),
// where the Laurent object is given as exponent->poly (doubled exponents)
GrassPoly expand_with_exp(const ModeCtx& mc, int comp, int sgn, bool odd_only,
                          const std::map<int, GrassPoly>& laurent, int c2) {
  // need h_m for m up to (c2 - min exponent)/2
  int minexp = 0;
  for (const auto& [e, p] : laurent) minexp = std::min(minexp, e);
  int mmax = (c2 - minexp) / 2;
  if (mmax < 0) return GrassPoly();
  auto h = exp_zt_coeffs([&](int k) { return mc.tvar(comp, k); }, Cyclo(sgn), odd_only, mmax);
  GrassPoly acc;
  for (const auto& [e, p] : laurent) {
    int m2 = c2 - e;
    if (m2 < 0 || m2 % 2 != 0) continue;
    int m = m2 / 2;
    if (m <= mmax) acc += h[m] * p;
  }
  return acc;
}

std::map<int, GrassPoly> miwa_of(const ModeCtx& mc, int comp, const Cyclo& coef, bool odd_only,
                                 const GrassPoly& f) {
  VarKind kk = mc.barred ? VarKind::TBar : VarKind::T;
  ZSeries zs = miwa_shift(
      f, [&](const Var& v) { return v.kind == kk && v.comp == comp; }, coef, odd_only);
  std::map<int, GrassPoly> out;
  for (const auto& [e, p] : zs.coeffs())
    if (!p.is_zero()) out[e] = p;
  return out;
}

}  // namespace

TauFamily vertex_mode(const TauFamily& T, const ModeOp& m) {
  const AlgebraKind& kind = T.kind;
  bool barred = T.barred;
  ModeCtx mc{kind, barred,
             [&](int comp, int k) { return barred ? tbar_var(comp, k) : t_var(comp, k); }};
  TauFamily out;
  out.kind = kind;
  out.barred = barred;

  if (kind.family == Family::a || ((kind.family == Family::b || kind.family == Family::d) &&
                                   (m.sp == Species::PsiPlus || m.sp == Species::PsiMinus))) {
    // charged fermion field:
    // (-1)^{|k|_{a-1}} q_a^{+-1} z^{+-k_a} e^{+-z.t} e^{-+ z^{-1}.dtilde}
    int a = m.comp;
    int sgn = (m.sp == Species::PsiPlus) ? 1 : -1;
    for (const auto& [s, f] : T.sec) {
      auto laurent = miwa_of(mc, a, Cyclo(-sgn), false, f);
      // mode index j (doubled m.idx2): coefficient of z^{-j-1/2}, with the
      // z^{+-k_a} charge shift using the incoming sector
      int c2 = -m.idx2 - 1 - 2 * sgn * s[a - 1];
      GrassPoly g = expand_with_exp(mc, a, sgn, false, laurent, c2);
      if (g.is_zero()) continue;
      if (sgn_pm(part_sum(s, a - 1)) < 0) g = -g;
      Sector ns = s;
      ns[a - 1] += sgn;
      out.add(ns, g);
    }
    return out;
  }
  if (m.sp == Species::PhiT) {
    int b = m.comp - kind.s;
    for (const auto& [s, f] : T.sec) {
      auto laurent = miwa_of(mc, m.comp, Cyclo(-1), true, f);
      int c2 = -m.idx2;  // coefficient of z^{-n}
      GrassPoly g = expand_with_exp(mc, m.comp, 1, true, laurent, c2);
      if (g.is_zero()) continue;
      g = apply_R(kind, barred, b, g);
      if (sgn_pm(abs_sum(s)) < 0) g = -g;
      out.add(s, g);
    }
    return out;
  }
  if (m.sp == Species::Sigma0) {
    for (const auto& [s, f] : T.sec) {
      GrassPoly g = apply_S(kind, barred, s, f);
      out.add(s, g);
    }
    return out;
  }
  if (kind.family == Family::c) {
    auto xi = [&](int comp, int idx2) {
      // xi indices stored doubled
      return barred ? xibar_var2(comp, idx2) : xi_var2(comp, idx2);
    };
    if (m.sp == Species::BPlus || m.sp == Species::BMinus) {
      int a = m.comp;
      int sgn = (m.sp == Species::BPlus) ? 1 : -1;
      for (const auto& [s, f] : T.sec) {
        GrassPoly fs = apply_Sa(barred, a, f);
        auto laurent = miwa_of(mc, a, Cyclo(-sgn), false, fs);
        // apply z^{+- T_a} monomial-wise, then the Xi ladder, then e^{+-z.t}
        // Xi^{+a}: dxi_0 z^{-1} + sum_k (-k xi_k) z^{k-1} + sum_k dxi_{-k} z^{-k-1}
        // Xi^{-a}: -dxi_0 z^{-1} + sum_k (k xi_{-k}) z^{k-1} + sum_k dxi_k z^{-k-1}
        std::map<int, GrassPoly> shifted;
        for (const auto& [e, p] : laurent) {
          for (const auto& [mono, c] : p.terms()) {
            int tv = Ta_eigen(mono, barred, a);
            shifted[e + 2 * sgn * tv].add_term(mono, c);
          }
        }
        // degree data for the Xi ladder bound
        long fdeg = f.max_odd_letters() + 8 + std::abs(m.idx2) / 2 +
                    (long)T.max_weighted_degree();
        std::map<int, GrassPoly> after_xi;
        for (const auto& [e, p] : shifted) {
          if (p.is_zero()) continue;
          // zero-index term
          {
            GrassPoly g = (sgn > 0) ? p.odd_d(xi(a, 0)) : -p.odd_d(xi(a, 0));
            if (!g.is_zero()) after_xi[e - 2] += g;
          }
          for (long k = 1; k <= fdeg; ++k) {
            // multiplication terms: z^{k-1}
            GrassPoly gm = (sgn > 0) ? p.odd_mul(xi(a, 2 * (int)k)).scaled(Cyclo(-k))
                                     : p.odd_mul(xi(a, -2 * (int)k)).scaled(Cyclo(k));
            if (!gm.is_zero()) after_xi[e + 2 * (int)k - 2] += gm;
            // derivative terms: z^{-k-1}
            GrassPoly gd = (sgn > 0) ? p.odd_d(xi(a, -2 * (int)k)) : p.odd_d(xi(a, 2 * (int)k));
            if (!gd.is_zero()) after_xi[e - 2 * (int)k - 2] += gd;
          }
        }
        int c2 = -m.idx2 - 1;
        GrassPoly g = expand_with_exp(mc, a, sgn, false, after_xi, c2);
        if (!g.is_zero()) out.add(s, g);
      }
      return out;
    }
    if (m.sp == Species::Bos) {
      int comp = m.comp;
      for (const auto& [s, f] : T.sec) {
        GrassPoly fs = apply_Sa(barred, comp, f);
        auto laurent = miwa_of(mc, comp, Cyclo(1), true, fs);
        long fdeg = f.max_odd_letters() + 8 + std::abs(m.idx2) / 2 +
                    (long)T.max_weighted_degree();
        // Xi^c: sum_{i in 1/2+Z>=0} ((-1)^{i+1/2} 2i xi_i z^{i-1/2} + dxi_i z^{-i-1/2})
        std::map<int, GrassPoly> after_xi;
        for (const auto& [e, p] : laurent) {
          if (p.is_zero()) continue;
          for (long i2 = 1; i2 <= 2 * fdeg + 1; i2 += 2) {
            // sign (-1)^{i-1/2}: forced by the Theta anticommutation relations
            long n = (i2 - 1) / 2;
            Cyclo c = Cyclo(Rat(i2, 1));
            if (((n % 2) + 2) % 2 == 1) c = -c;
            GrassPoly gm = p.odd_mul(xi(comp, (int)i2)).scaled(c);
            if (!gm.is_zero()) after_xi[e + (int)i2 - 1] += gm;
            GrassPoly gd = p.odd_d(xi(comp, (int)i2));
            if (!gd.is_zero()) after_xi[e - (int)i2 - 1] += gd;
          }
        }
        int c2 = -m.idx2 - 1;
        GrassPoly g = expand_with_exp(mc, comp, 1, true, after_xi, c2);
        if (!g.is_zero()) out.add(s, g);
      }
      return out;
    }
  }
  if (m.sp == Species::SigmaJ) {
    // sigma(z) of the so_{2n+1} reductions acting on (t, xi) polynomials:
    // sigma_{-j} -> xi_j, sigma_j -> d/dxi_j (j > 0), sigma_0 -> R_{p+1}-like
    // parity-weighted zero mode, all with the charge/theta parity prefactor.
    for (const auto& [s, f] : T.sec) {
      GrassPoly g;
      auto xiv = [&](int idx2) { return T.barred ? xibar_var2(0, idx2) : xi_var2(0, idx2); };
      if (m.idx2 < 0) g = f.odd_mul(xiv(-m.idx2));
      else if (m.idx2 > 0) g = f.odd_d(xiv(m.idx2));
      else {
        // zero mode: (1+2delta) R_{r'} style operator on the last theta pair
        g = apply_S(kind, T.barred, s, f).scaled(Cyclo::sqrt_int(2));
      }
      if (g.is_zero()) continue;
      // parity prefactor (-1)^{|k| + N_theta + N_xi}
      GrassPoly h;
      int qpar = (int)(((abs_sum(s) % 2) + 2) % 2);
      for (const auto& [mono, c] : g.terms()) {
        int tc = theta_count(mono, T.barred) + xi_count_all(mono, T.barred);
        h.add_term(mono, ((tc + qpar) % 2 == 0) ? c : -c);
      }
      out.add(s, h);
    }
    return out;
  }
  throw std::domain_error("vertex_mode: unsupported species for kind " + kind.str());
}

TauFamily to_barred(const TauFamily& T) {
  TauFamily out;
  out.kind = T.kind;
  out.barred = true;
  // family c never touches theta letters; parameter letters (components at
  // or above kParamThetaBase) are shared across slots for every family
  bool bar_theta = T.kind.family != Family::c;
  for (const auto& [s, p] : T.sec) {
    out.add(s, p.rename([bar_theta](const Var& v) {
      Var w = v;
      switch (v.kind) {
        case VarKind::T: w.kind = VarKind::TBar; break;
        case VarKind::Theta:
          if (bar_theta && v.comp < kParamThetaBase) w.kind = VarKind::ThetaBar;
          break;
        case VarKind::Xi: w.kind = VarKind::XiBar; break;
        default: break;
      }
      return w;
    }));
  }
  return out;
}

TauFamily sigma_map(const FockVector& v) {
  TauFamily acc;
  acc.kind = v.kind();
  for (const auto& [word, c] : v.terms()) {
    TauFamily t = TauFamily::unit(v.kind());
    // apply letters right to left
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      auto decomposition = relabel_inverse(v.kind(), *it);
      TauFamily next;
      next.kind = v.kind();
      for (auto& [coef, mode] : decomposition) {
        TauFamily piece = vertex_mode(t, mode).scaled(coef);
        next = next + piece;
      }
      t = next;
      if (t.is_zero()) break;
    }
    acc = acc + t.scaled(c);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Hirota residuals

namespace {

void accumulate_pair(BilinearPoly& acc, const TauFamily& A, const TauFamily& B,
                     const Cyclo& coeff) {
  if (coeff.is_zero()) return;
  for (const auto& [sa, pa] : A.sec)
    for (const auto& [sb, pb] : B.sec) {
      GrassPoly prod = (pa * pb).scaled(coeff);
      if (prod.is_zero()) continue;
      auto key = std::make_pair(sa, sb);
      auto it = acc.find(key);
      if (it == acc.end()) acc.emplace(key, prod);
      else {
        it->second += prod;
        if (it->second.is_zero()) acc.erase(it);
      }
    }
}

long mode_span(const TauFamily& T1, const TauFamily& T2, long shift2) {
  long w = T1.max_weighted_degree() + T2.max_weighted_degree();
  long charge = 0;
  for (const auto& [s, p] : T1.sec) charge = std::max(charge, abs_sum(s));
  for (const auto& [s, p] : T2.sec) charge = std::max(charge, abs_sum(s));
  long xi = 0;
  for (const auto& [s, p] : T1.sec) xi = std::max<long>(xi, p.max_odd_letters());
  for (const auto& [s, p] : T2.sec) xi = std::max<long>(xi, p.max_odd_letters());
  return 2 * (w + charge + 2 * xi) + std::abs(shift2) + 10;
}

void pair_sum(BilinearPoly& acc, const TauFamily& T1, const TauFamily& T2b, Species sp1,
              Species sp2, int comp, long shift2, int par2,
              const std::function<Cyclo(long)>& coeff_of) {
  long span = mode_span(T1, T2b, shift2);
  for (long i2 = -span; i2 <= span; ++i2) {
    if (((i2 % 2) + 2) % 2 != par2) continue;
    Cyclo c = coeff_of(i2);
    if (c.is_zero()) continue;
    TauFamily A = vertex_mode(T1, ModeOp{sp1, comp, (int)i2});
    if (A.is_zero()) continue;
    TauFamily B = vertex_mode(T2b, ModeOp{sp2, comp, (int)(shift2 - i2)});
    if (B.is_zero()) continue;
    accumulate_pair(acc, A, B, c);
  }
}

}  // namespace

BilinearPoly hirota_residual(const HierarchySpec& spec, const TauFamily& T1raw,
                             const TauFamily& T2raw, long p) {
  const AlgebraKind& kind = spec.kind;
  TauFamily T1 = T1raw;
  TauFamily T2 = T2raw.barred ? T2raw : to_barred(T2raw);
  const int s = kind.s, r = kind.r;
  BilinearPoly acc;
  auto one = [](long) { return Cyclo(1); };
  auto minus_one = [](long) { return Cyclo(-1); };
  std::vector<long> ncharged(s, 1), nneutral(r, 1);
  int sigma_species = 0;
  if (spec.reduction) {
    const auto& red = *spec.reduction;
    if ((int)red.n_charged.size() != s) throw std::domain_error("hirota: table size s");
    ncharged = red.n_charged;
    if ((int)red.n_neutral.size() == r) nneutral = red.n_neutral;
    else if ((int)red.n_neutral.size() == r - 1) {
      nneutral.assign(red.n_neutral.begin(), red.n_neutral.end());
      sigma_species = r;
    } else {
      throw std::domain_error("hirota: table size r");
    }
  }

  if (kind.family == Family::a) {
    for (int a = 1; a <= s; ++a)
      pair_sum(acc, T1, T2, Species::PsiPlus, Species::PsiMinus, a, 2 * p * ncharged[a - 1], 1,
               one);
    return acc;
  }
  if (kind.family == Family::c) {
    for (int a = 1; a <= s; ++a) {
      long sh = 2 * p * ncharged[a - 1];
      pair_sum(acc, T1, T2, Species::BMinus, Species::BPlus, a, sh, 1, one);
      pair_sum(acc, T1, T2, Species::BPlus, Species::BMinus, a, sh, 1, minus_one);
    }
    for (int c = 1; c <= r; ++c) {
      long sh = 2 * p * nneutral[c - 1];
      auto sgn = [](long i2) {
        long n = (i2 + 1) / 2;
        return ((n % 2 + 2) % 2 == 0) ? Cyclo(1) : Cyclo(-1);
      };
      pair_sum(acc, T1, T2, Species::Bos, Species::Bos, s + c, sh, 1, sgn);
    }
    return acc;
  }
  bool isb = kind.family == Family::b;
  int r_eff = sigma_species ? r - 1 : r;
  for (int a = 1; a <= s; ++a) {
    long sh = 2 * p * ncharged[a - 1];
    pair_sum(acc, T1, T2, Species::PsiPlus, Species::PsiMinus, a, sh, 1, one);
    pair_sum(acc, T1, T2, Species::PsiMinus, Species::PsiPlus, a, sh, 1, one);
  }
  for (int c = 1; c <= r_eff; ++c) {
    long sh = 2 * p * nneutral[c - 1];
    auto sgn = [](long i2) {
      long n = i2 / 2;
      return ((n % 2 + 2) % 2 == 0) ? Cyclo(1) : Cyclo(-1);
    };
    pair_sum(acc, T1, T2, Species::PhiT, Species::PhiT, s + c, sh, 0, sgn);
  }
  if (!sigma_species) {
    if (kind.has_sigma0()) {
      TauFamily A = vertex_mode(T1, ModeOp{Species::Sigma0, 0, 0});
      TauFamily B = vertex_mode(T2, ModeOp{Species::Sigma0, 0, 0});
      accumulate_pair(acc, A, B, Cyclo(1));
    }
  } else {
    bool delta_zero = isb ? (r_eff % 2 == 0) : (r_eff % 2 == 1);
    long span = mode_span(T1, T2, 2 * p);
    for (long k = -span; k <= span; ++k) {
      long j2 = delta_zero ? 2 * k : 2 * k + 1;
      TauFamily A = vertex_mode(T1, ModeOp{Species::SigmaJ, 0, (int)j2});
      if (A.is_zero()) continue;
      TauFamily B = vertex_mode(T2, ModeOp{Species::SigmaJ, 0, (int)(2 * p - j2)});
      if (B.is_zero()) continue;
      accumulate_pair(acc, A, B, Cyclo(1));
    }
  }
  if (isb && p == 0) {
    accumulate_pair(acc, T1, T2, Cyclo(Rat(-1, 2)));
  }
  return acc;
}

bool bilinear_is_zero(const BilinearPoly& b) {
  for (const auto& [k, p] : b)
    if (!p.is_zero()) return false;
  return true;
}

ReductionConstraintResult reduction_constraint_residual(const HierarchySpec& spec,
                                                        const TauFamily& T, long ell) {
  if (!spec.reduction) throw std::domain_error("reduction_constraint_residual: no reduction");
  const auto& red = *spec.reduction;
  ReductionConstraintResult out;
  out.consistent = true;
  // D_ell tau = sum over species of d tau / d t^{(a)}_{ell n_a}
  auto Dell = [&](const GrassPoly& f) {
    GrassPoly g;
    for (int a = 1; a <= (int)red.n_charged.size(); ++a)
      g += f.d(t_var(a, (int)(ell * red.n_charged[a - 1])));
    for (int c = 1; c <= (int)red.n_neutral.size(); ++c) {
      long idx = ell * red.n_neutral[c - 1];
      if (idx % 2 == 1)  // twisted components carry odd times only
        g += f.d(t_var((int)red.n_charged.size() + c, (int)idx));
    }
    return g;
  };
  // solve c_ell from the first sector with nonzero tau whose derivative is a
  // rational multiple; then form residuals
  std::optional<Rat> cell;
  for (const auto& [s, f] : T.sec) {
    if (f.is_zero()) continue;
    GrassPoly df = Dell(f);
    // find candidate scalar: match leading monomial
    auto lead = f.terms().begin();
    Cyclo num(0);
    auto it = df.terms().find(lead->first);
    if (it != df.terms().end()) num = it->second;
    Cyclo cand = num * lead->second.inverse();
    if (cand.is_rational()) {
      cell = cand.rational_value();
      break;
    }
  }
  if (!cell) cell = Rat(0);
  out.cell = cell;
  for (const auto& [s, f] : T.sec) {
    GrassPoly resid = Dell(f) - f.scaled(Cyclo(*cell));
    if (!resid.is_zero()) out.consistent = false;
    out.residuals[s] = resid;
  }
  return out;
}

}  // namespace tauforge
