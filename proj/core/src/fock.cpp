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

#include "tauforge/fock.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tauforge {

bool AlgebraKind::valid() const {
  if (s < 0 || r < 0 || s + r == 0) return false;
  if (family == Family::a) return r == 0 && s >= 1;
  return true;
}

bool AlgebraKind::has_sigma0() const {
  if (family == Family::b) return r % 2 == 0;  // includes r = 0: sigma0 = phitilde_0
  if (family == Family::d) return r % 2 == 1;
  return false;
}

std::string AlgebraKind::str() const {
  std::ostringstream os;
  os << (char)family << "(s=" << s << ",r=" << r << ")";
  return os.str();
}

std::string ModeOp::str() const {
  std::ostringstream os;
  switch (sp) {
    case Species::PsiPlus: os << "psi+"; break;
    case Species::PsiMinus: os << "psi-"; break;
    case Species::PhiT: os << "phiT"; break;
    case Species::BPlus: os << "b+"; break;
    case Species::BMinus: os << "b-"; break;
    case Species::Bos: os << "b"; break;
    case Species::Sigma0: os << "sigma0"; break;
    case Species::SigmaJ: os << "sigma"; break;
  }
  if (comp) os << comp;
  os << "[";
  if (idx2 % 2 == 0) os << idx2 / 2;
  else os << idx2 << "/2";
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// one-component engine

namespace {

constexpr uint8_t SP_PSIP = 0, SP_PSIM = 1, SP_PHIT = 2, SP_PHI = 3, SP_BOS = 4;

bool m1_bosonic(const M1& m) { return m.sp == SP_BOS; }

// Central term of the (anti)commutator [m, w].
Cyclo contract1(const M1& m, const M1& w) {
  if (m.idx2 + w.idx2 != 0) return Cyclo(0);
  if ((m.sp == SP_PSIP && w.sp == SP_PSIM) || (m.sp == SP_PSIM && w.sp == SP_PSIP))
    return Cyclo(1);
  if (m.sp == SP_PHIT && w.sp == SP_PHIT) return Cyclo(1);
  if (m.sp == SP_PHI && w.sp == SP_PHI) return Cyclo(1);
  if (m.sp == SP_BOS && w.sp == SP_BOS) {
    // [b_i, b_j] = (-1)^{i-1/2} delta_{i,-j}
    long par = (m.idx2 - 1) / 2;
    return ((par % 2 + 2) % 2 == 0) ? Cyclo(1) : Cyclo(-1);
  }
  return Cyclo(0);
}

}  // namespace

FockVector FockVector::vacuum(AlgebraKind k) {
  FockVector v(k);
  v.terms_[Word{}] = Cyclo(1);
  return v;
}

void FockVector::add_term(const Word& w, const Cyclo& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) terms_.emplace(w, c);
  else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

FockVector FockVector::operator+(const FockVector& o) const {
  FockVector out = *this;
  for (const auto& [w, c] : o.terms_) out.add_term(w, c);
  return out;
}

FockVector FockVector::operator-(const FockVector& o) const {
  FockVector out = *this;
  for (const auto& [w, c] : o.terms_) out.add_term(w, -c);
  return out;
}

FockVector FockVector::scaled(const Cyclo& c) const {
  FockVector out(kind_);
  if (c.is_zero()) return out;
  for (const auto& [w, x] : terms_) out.add_term(w, x * c);
  return out;
}

int FockVector::energy2() const {
  int best = 0;
  for (const auto& [w, c] : terms_) {
    int e = 0;
    for (const auto& m : w) e -= m.idx2;
    best = std::max(best, e);
  }
  return best;
}

std::string FockVector::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (const auto& m : w) {
      os << " g" << (int)m.sp << "[";
      if (m.idx2 % 2 == 0) os << m.idx2 / 2;
      else os << m.idx2 << "/2";
      os << "]";
    }
    os << "|0>";
  }
  return os.str();
}

FockVector apply_m1(const FockVector& v, const M1& m) {
  FockVector out(v.kind());
  bool bosonic = m1_bosonic(m);
  for (const auto& [w, c0] : v.terms()) {
    if (m.idx2 < 0) {
      size_t pos = 0;
      int sign = 1;
      while (pos < w.size() && w[pos] < m) {
        if (!bosonic && !m1_bosonic(w[pos])) sign = -sign;
        ++pos;
      }
      if (!bosonic && pos < w.size() && w[pos] == m) continue;  // fermion square
      Word nw = w;
      nw.insert(nw.begin() + pos, m);
      out.add_term(nw, (sign < 0) ? -c0 : c0);
      continue;
    }
    // annihilator or zero mode: walk the whole word, contracting as we go
    int sign = 1;
    for (size_t k = 0; k < w.size(); ++k) {
      Cyclo cc = contract1(m, w[k]);
      if (!cc.is_zero()) {
        Word nw = w;
        nw.erase(nw.begin() + k);
        Cyclo coeff = c0 * cc;
        if (sign < 0) coeff = -coeff;
        out.add_term(nw, coeff);
      }
      if (!bosonic && !m1_bosonic(w[k])) sign = -sign;
    }
    if (m.idx2 == 0 && m.sp == SP_PHIT) {
      // phitilde_0 |0> = |0>/sqrt2
      Cyclo coeff = c0 * Cyclo::sqrt_int(2).inverse();
      out.add_term(w, (sign < 0) ? -coeff : coeff);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// relabelings (section-three conventions)

namespace {

[[noreturn]] void bad_mode(const AlgebraKind& k, const ModeOp& m, const char* why) {
  throw std::domain_error("relabel: " + m.str() + " invalid for " + k.str() + ": " + why);
}

Cyclo inv_sqrt2() { return Cyclo::sqrt_int(2).inverse(); }

}  // namespace

std::vector<std::pair<Cyclo, M1>> relabel(const AlgebraKind& kind, const ModeOp& m) {
  std::vector<std::pair<Cyclo, M1>> out;
  const int s = kind.s, r = kind.r;
  const Cyclo I = Cyclo::i();
  if (kind.family == Family::a) {
    if (m.sp != Species::PsiPlus && m.sp != Species::PsiMinus) bad_mode(kind, m, "family a");
    if (m.comp < 1 || m.comp > s) bad_mode(kind, m, "component");
    if ((m.idx2 & 1) == 0) bad_mode(kind, m, "index must be half-integral");
    int sg = m.sp == Species::PsiPlus ? 1 : -1;
    int idx2 = s * m.idx2 + sg * (s - 2 * m.comp + 1);
    out.push_back({Cyclo(1), M1{(uint8_t)(sg > 0 ? SP_PSIP : SP_PSIM), idx2}});
    return out;
  }
  if (kind.family == Family::b || kind.family == Family::d) {
    bool isb = kind.family == Family::b;
    const long P = 2 * s + r;
    const long q = isb ? r / 2 : (r + 1) / 2;
    const uint8_t SP = isb ? SP_PHIT : SP_PHI;
    const int half = isb ? 0 : 1;  // underlying index lattice Z or 1/2+Z
    auto base = [&](long k2) { return M1{SP, (int)k2}; };
    if (m.sp == Species::PsiPlus || m.sp == Species::PsiMinus) {
      if (m.comp < 1 || m.comp > s) bad_mode(kind, m, "component");
      if ((m.idx2 & 1) == 0) bad_mode(kind, m, "index must be half-integral");
      long j = (std::abs((long)m.idx2) - 1) / 2;
      bool pos = m.idx2 > 0;
      bool plus = m.sp == Species::PsiPlus;
      long off = (plus == pos) ? (q + 2 * m.comp) : (q + 2 * m.comp - 1);
      long k2 = 2 * (j * P + off) - half;
      out.push_back({Cyclo(1), base(pos ? k2 : -k2)});
      return out;
    }
    if (m.sp == Species::PhiT) {
      if (m.comp <= s || m.comp > s + r) bad_mode(kind, m, "component");
      long b = m.comp - s;
      if (m.idx2 % 2 != 0) bad_mode(kind, m, "twisted index must be integral");
      long n = m.idx2 / 2;
      if (n != 0) {
        long an = std::abs(n);
        bool pos = n > 0;
        long k2;
        Cyclo coeff(1);
        if (an % 2 == 1) {
          long j = (an - 1) / 2;
          k2 = 2 * (2 * j * P + q + 2 * s + b) - half;
          coeff = I;
        } else {
          long j = (an - 2) / 2;
          k2 = 2 * ((2 * j + 1) * P + q + 2 * s + b) - half;
        }
        out.push_back({coeff, base(pos ? k2 : -k2)});
        return out;
      }
      // zero modes
      if (isb && r % 2 == 1 && b == r) {
        out.push_back({Cyclo(1), base(0)});
        return out;
      }
      long c = (b + 1) / 2;
      long k2 = isb ? 2 * c : 2 * c - 1;  // phitilde_c or phi_{c-1/2}
      if (b % 2 == 1) {
        out.push_back({inv_sqrt2(), base(k2)});
        out.push_back({inv_sqrt2(), base(-k2)});
      } else {
        out.push_back({I * inv_sqrt2(), base(k2)});
        out.push_back({-(I * inv_sqrt2()), base(-k2)});
      }
      return out;
    }
    if (m.sp == Species::Sigma0) {
      if (!kind.has_sigma0()) bad_mode(kind, m, "no sigma0 for this kind");
      if (m.idx2 != 0) bad_mode(kind, m, "sigma0 has no modes");
      if (isb) {
        out.push_back({Cyclo(1), base(0)});
      } else {
        long k2 = 2 * q - 1;  // phi_{q-1/2}
        out.push_back({I * inv_sqrt2(), base(k2)});
        out.push_back({-(I * inv_sqrt2()), base(-k2)});
      }
      return out;
    }
    bad_mode(kind, m, "species/family mismatch");
  }
  if (kind.family == Family::c) {
    const long P = 2 * s + r;
    if ((m.idx2 & 1) == 0) bad_mode(kind, m, "index must be half-integral");
    long a2 = std::abs((long)m.idx2);
    bool pos = m.idx2 > 0;
    auto B = [&](long k2) { return M1{SP_BOS, (int)k2}; };
    if (m.sp == Species::Bos) {
      long c = m.comp - s;
      if (c < 1 || c > r) bad_mode(kind, m, "component");
      if (r % 2 == 0) {
        long j4 = (a2 - 1) / 2;  // 2j (lower) or 2j+1 (upper)
        bool lower = (j4 % 2 == 0);
        long cc = (c + 1) / 2;
        long k2 = 2 * j4 * P + (c % 2 == 1 ? 4 * cc - 3 : 4 * cc - 1);
        // odd species carry i on the upper series, even species on the lower
        Cyclo coeff = (c % 2 == 1) ? (lower ? Cyclo(1) : I) : (lower ? I : Cyclo(1));
        out.push_back({coeff, B(pos ? k2 : -k2)});
      } else {
        long j = (a2 - 1) / 2;
        long k2;
        Cyclo coeff(1);
        if (c == r) {
          k2 = 2 * j * P + 2 * r - 1;
        } else {
          long cc = (c + 1) / 2;
          k2 = 2 * j * P + (c % 2 == 1 ? 4 * cc - 3 : 4 * cc - 1);
          if (c % 2 == 0) coeff = I;
        }
        out.push_back({coeff, B(pos ? k2 : -k2)});
      }
      return out;
    }
    if (m.sp == Species::BPlus || m.sp == Species::BMinus) {
      long a = m.comp;
      if (a < 1 || a > s) bad_mode(kind, m, "component");
      bool plus = m.sp == Species::BPlus;
      if (r % 2 == 0) {
        long j = (a2 - 1) / 2;
        long off = (plus == pos) ? (2 * (r + 2 * a) - 3) : (2 * (r + 2 * a) - 1);
        long k2 = 2 * j * P + off;
        out.push_back({Cyclo(1), B(pos ? k2 : -k2)});
      } else {
        // r odd: charged modes split into two interleaved series; the global
        // sqrt(-1) and the -1/2 offset of the second series are forced by the
        // commutation relations and bijectivity of the relabeling
        long j4 = (a2 - 1) / 2;
        bool upper = (j4 % 2 == 1);
        long R2 = 2 * (r + 2 * a);
        bool mseries = ((plus == pos) != upper);
        long k2 = 2 * j4 * P + (mseries ? R2 - 3 : R2 - 1);
        out.push_back({I, B(pos ? k2 : -k2)});
      }
      return out;
    }
    bad_mode(kind, m, "species/family mismatch");
  }
  bad_mode(kind, m, "unknown family");
}

std::vector<std::pair<Cyclo, ModeOp>> relabel_inverse(const AlgebraKind& kind, const M1& m) {
  std::vector<std::pair<Cyclo, ModeOp>> out;
  const int s = kind.s, r = kind.r;
  long span = std::abs((long)m.idx2) + 4 * (long)(2 * s + r) + 8;
  auto try_mode = [&](const ModeOp& cand) {
    std::vector<std::pair<Cyclo, M1>> rel;
    try {
      rel = relabel(kind, cand);
    } catch (...) {
      return;
    }
    for (auto& [c, mm] : rel)
      if (mm == m && !c.is_zero()) out.push_back({c.conj(), cand});
  };
  std::vector<Species> species;
  if (kind.family == Family::a) species = {Species::PsiPlus, Species::PsiMinus};
  else if (kind.family == Family::c) species = {Species::BPlus, Species::BMinus, Species::Bos};
  else species = {Species::PsiPlus, Species::PsiMinus, Species::PhiT, Species::Sigma0};
  for (Species sp : species) {
    int clo = 1, chi = s;
    if (sp == Species::PhiT || sp == Species::Bos) { clo = s + 1; chi = s + r; }
    if (sp == Species::Sigma0) {
      if (!kind.has_sigma0()) continue;
      clo = chi = 0;
    }
    for (int comp = clo; comp <= chi; ++comp) {
      // the relabeled index magnitude is ~|m.idx2| / P; scan a tight window
      long lo = -(span / std::max(1, 2 * s + r)) - 6;
      long hi = -lo;
      for (long i2 = lo; i2 <= hi; ++i2) try_mode(ModeOp{sp, comp, (int)i2});
    }
  }
  return out;
}

FockVector apply_mode(const FockVector& v, const ModeOp& m) {
  auto rel = relabel(v.kind(), m);
  FockVector out(v.kind());
  for (auto& [c, m1] : rel) out = out + apply_m1(v, m1).scaled(c);
  return out;
}

// ---------------------------------------------------------------------------
// group orbit elements

namespace {

Cyclo pair_scalar(const AlgebraKind& kind, const std::vector<std::pair<Cyclo, ModeOp>>& x,
                  const std::vector<std::pair<Cyclo, ModeOp>>& y) {
  Cyclo acc(0);
  for (auto& [cx, mx] : x) {
    auto rx = relabel(kind, mx);
    for (auto& [cy, my] : y) {
      auto ry = relabel(kind, my);
      for (auto& [ax, m1x] : rx)
        for (auto& [ay, m1y] : ry) acc += cx * cy * ax * ay * contract1(m1x, m1y);
    }
  }
  return acc;
}

FockVector apply_combo(const FockVector& v, const std::vector<std::pair<Cyclo, ModeOp>>& combo) {
  FockVector out(v.kind());
  for (auto& [c, m] : combo) out = out + apply_mode(v, m).scaled(c);
  return out;
}

FockVector truncate_energy(const FockVector& v, int e2max) {
  FockVector out(v.kind());
  for (const auto& [w, c] : v.terms()) {
    int e = 0;
    for (const auto& m : w) e -= m.idx2;
    if (e <= e2max) out.add_term(w, c);
  }
  return out;
}

}  // namespace

FockVector orbit_element(const AlgebraKind& kind, const std::vector<OrbitGen>& gens,
                         int e2max) {
  FockVector v = FockVector::vacuum(kind);
  bool clifford = kind.family != Family::c;
  for (const auto& g : gens) {
    if (clifford) {
      if (kind.family == Family::a) {
        for (auto& [c, m] : g.plus)
          if (m.sp != Species::PsiPlus)
            throw std::domain_error("orbit_element: family a needs v+ in the psi+ span");
        for (auto& [c, m] : g.minus)
          if (m.sp != Species::PsiMinus)
            throw std::domain_error("orbit_element: family a needs v- in the psi- span");
      }
      if (!pair_scalar(kind, g.plus, g.plus).is_zero() ||
          !pair_scalar(kind, g.minus, g.minus).is_zero() ||
          !pair_scalar(kind, g.plus, g.minus).is_zero())
        throw std::domain_error("orbit_element: non-isotropic Clifford generator");
      FockVector q = apply_combo(apply_combo(v, g.minus), g.plus);
      v = v + q;
    } else {
      for (auto& [c, m] : g.plus)
        if (m.idx2 >= 0) throw std::domain_error("orbit_element: family c needs creation modes");
      for (auto& [c, m] : g.minus)
        if (m.idx2 >= 0) throw std::domain_error("orbit_element: family c needs creation modes");
      FockVector acc = v;
      FockVector term = v;
      long k = 1;
      for (;;) {
        term = apply_combo(apply_combo(term, g.minus), g.plus).scaled(Cyclo(Rat(1, k)));
        term = truncate_energy(term, e2max);
        if (term.is_zero()) break;
        acc = acc + term;
        ++k;
      }
      v = acc;
    }
    v = truncate_energy(v, e2max);
  }
  return v;
}

// ---------------------------------------------------------------------------
// bilinear residues

void FockTensor::add(const Word& a, const Word& b, const Cyclo& c) {
  if (c.is_zero()) return;
  auto key = std::make_pair(a, b);
  auto it = terms_.find(key);
  if (it == terms_.end()) terms_.emplace(key, c);
  else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

FockTensor FockTensor::operator-(const FockTensor& o) const {
  FockTensor out = *this;
  for (const auto& [k, c] : o.terms_) out.add(k.first, k.second, -c);
  return out;
}

std::string FockTensor::str() const {
  std::ostringstream os;
  os << terms_.size() << " tensor terms";
  return os.str();
}

FockTensor tensor_of(const FockVector& a, const FockVector& b) {
  FockTensor t;
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) t.add(wa, wb, ca * cb);
  return t;
}

namespace {

// sum_i coeff(i2) (mode_i tau1) (x) (mode'_{shift-i} tau2) over the finite
// range where both factors are nonzero; the index lattice has parity par2.
void add_pair_sum(FockTensor& acc, const FockVector& t1, const FockVector& t2, Species sp1,
                  Species sp2, int comp, long shift2, int par2,
                  const std::function<Cyclo(long)>& coeff_of) {
  int e1 = t1.energy2(), e2 = t2.energy2();
  long P = 2 * t1.kind().s + t1.kind().r;
  long span = std::max<long>(e1, e2) + std::abs(shift2) + 2 * P + 8;
  for (long i2 = -span; i2 <= span; ++i2) {
    if (((i2 % 2) + 2) % 2 != par2) continue;
    long j2 = shift2 - i2;
    Cyclo c = coeff_of(i2);
    if (c.is_zero()) continue;
    FockVector u1 = apply_mode(t1, ModeOp{sp1, comp, (int)i2});
    if (u1.is_zero()) continue;
    FockVector u2 = apply_mode(t2, ModeOp{sp2, comp, (int)j2});
    if (u2.is_zero()) continue;
    for (const auto& [wa, ca] : u1.terms())
      for (const auto& [wb, cb] : u2.terms()) acc.add(wa, wb, c * ca * cb);
  }
}

}  // namespace

FockTensor bilinear_residue(const AlgebraKind& kind, const FockVector& tau1,
                            const FockVector& tau2, long p, const ReductionTable* red) {
  if (!(tau1.kind().family == kind.family) || !(tau2.kind().family == kind.family))
    throw std::domain_error("bilinear_residue: kind mismatch");
  FockTensor acc;
  const int s = kind.s, r = kind.r;
  auto one = [](long) { return Cyclo(1); };
  auto minus_one = [](long) { return Cyclo(-1); };
  std::vector<long> ncharged(s, 1), nneutral(r, 1);
  int sigma_species = 0;
  if (red) {
    if ((int)red->n_charged.size() != s)
      throw std::domain_error("reduction table: charged size must equal s");
    ncharged = red->n_charged;
    if ((int)red->n_neutral.size() == r) {
      nneutral = red->n_neutral;
    } else if ((int)red->n_neutral.size() == r - 1) {
      nneutral.assign(red->n_neutral.begin(), red->n_neutral.end());
      sigma_species = r;
    } else {
      throw std::domain_error("reduction table: neutral size must be r or r-1");
    }
  }

  if (kind.family == Family::a) {
    for (int a = 1; a <= s; ++a)
      add_pair_sum(acc, tau1, tau2, Species::PsiPlus, Species::PsiMinus, a,
                   2 * p * ncharged[a - 1], 1, one);
    return acc;
  }
  if (kind.family == Family::c) {
    for (int a = 1; a <= s; ++a) {
      long sh = 2 * p * ncharged[a - 1];
      add_pair_sum(acc, tau1, tau2, Species::BMinus, Species::BPlus, a, sh, 1, one);
      add_pair_sum(acc, tau1, tau2, Species::BPlus, Species::BMinus, a, sh, 1, minus_one);
    }
    for (int c = 1; c <= r; ++c) {
      long sh = 2 * p * nneutral[c - 1];  // table entry is 2 mu_c
      auto sgn = [](long i2) {
        long n = (i2 + 1) / 2;  // (-1)^{i+1/2}
        return ((n % 2 + 2) % 2 == 0) ? Cyclo(1) : Cyclo(-1);
      };
      add_pair_sum(acc, tau1, tau2, Species::Bos, Species::Bos, s + c, sh, 1, sgn);
    }
    return acc;
  }
  // families b and d
  bool isb = kind.family == Family::b;
  int r_eff = sigma_species ? r - 1 : r;
  for (int a = 1; a <= s; ++a) {
    long sh = 2 * p * ncharged[a - 1];
    add_pair_sum(acc, tau1, tau2, Species::PsiPlus, Species::PsiMinus, a, sh, 1, one);
    add_pair_sum(acc, tau1, tau2, Species::PsiMinus, Species::PsiPlus, a, sh, 1, one);
  }
  for (int c = 1; c <= r_eff; ++c) {
    long sh = 2 * p * nneutral[c - 1];  // table entry is 2 mu_c
    auto sgn = [](long i2) {
      long n = i2 / 2;  // (-1)^i
      return ((n % 2 + 2) % 2 == 0) ? Cyclo(1) : Cyclo(-1);
    };
    add_pair_sum(acc, tau1, tau2, Species::PhiT, Species::PhiT, s + c, sh, 0, sgn);
  }
  if (!sigma_species) {
    if (kind.has_sigma0()) {
      FockVector u1 = apply_mode(tau1, ModeOp{Species::Sigma0, 0, 0});
      FockVector u2 = apply_mode(tau2, ModeOp{Species::Sigma0, 0, 0});
      for (const auto& [wa, ca] : u1.terms())
        for (const auto& [wb, cb] : u2.terms()) acc.add(wa, wb, ca * cb);
    }
  } else {
    // sigma(z) of the so_{2n+1} reductions, realized on the last twisted
    // species via the parity relabeling
    int R = sigma_species;
    bool delta_zero = isb ? (r_eff % 2 == 0) : (r_eff % 2 == 1);
    auto sigma_apply = [&](const FockVector& t, long j2) -> FockVector {
      if (delta_zero) {
        long j = j2 / 2;
        Cyclo c = (((j % 2) + 2) % 2 == 0) ? Cyclo(1) : Cyclo::i();
        return apply_mode(t, ModeOp{Species::PhiT, s + R, (int)j2}).scaled(c);
      }
      if (j2 == -1 || j2 == 1) {
        Cyclo is2 = inv_sqrt2();
        FockVector x = apply_mode(t, ModeOp{Species::PhiT, s + R, 0});
        FockVector y = apply_mode(t, ModeOp{Species::Sigma0, 0, 0});
        return (j2 == -1) ? (x.scaled(is2) - y.scaled(Cyclo::i() * is2))
                          : (x.scaled(is2) + y.scaled(Cyclo::i() * is2));
      }
      // sigma_{j+1/2} with |j2| >= 3: phi^R_j with j = (j2 -+ 1)/2
      long j = (j2 > 0) ? (j2 - 1) / 2 : (j2 + 1) / 2;
      bool apply_i = (j > 0) ? (j % 2 == 1) : (((-j) % 2) == 0);
      Cyclo c = apply_i ? Cyclo::i() : Cyclo(1);
      return apply_mode(t, ModeOp{Species::PhiT, s + R, (int)(2 * j)}).scaled(c);
    };
    int e1 = tau1.energy2(), e2 = tau2.energy2();
    long span = std::max(e1, e2) + std::abs(p) + 2 * (2 * s + r) + 8;
    for (long k = -span; k <= span; ++k) {
      long j2 = delta_zero ? 2 * k : 2 * k + 1;
      long j2b = 2 * p - j2;
      FockVector u1 = sigma_apply(tau1, j2);
      if (u1.is_zero()) continue;
      FockVector u2 = sigma_apply(tau2, j2b);
      if (u2.is_zero()) continue;
      for (const auto& [wa, ca] : u1.terms())
        for (const auto& [wb, cb] : u2.terms()) acc.add(wa, wb, ca * cb);
    }
  }
  if (isb && p == 0) {
    FockTensor rhs = tensor_of(tau1, tau2);
    for (const auto& [k, c] : rhs.terms()) acc.add(k.first, k.second, -(c * Cyclo(Rat(1, 2))));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// graded dimensions

namespace {

struct Letter {
  long e2;
  long charge;
  bool fermionic;
};

std::map<std::pair<long, long>, long> count_words(const std::vector<Letter>& letters,
                                                  long e2max) {
  std::map<std::pair<long, long>, long> dp;
  dp[{0, 0}] = 1;
  for (const auto& L : letters) {
    std::map<std::pair<long, long>, long> next = dp;
    for (const auto& [key, cnt] : dp) {
      if (L.fermionic) {
        long e = key.first + L.e2;
        if (e <= e2max) next[{e, key.second + L.charge}] += cnt;
      } else {
        for (long m = 1; key.first + m * L.e2 <= e2max; ++m)
          next[{key.first + m * L.e2, key.second + m * L.charge}] += cnt;
      }
    }
    dp = std::move(next);
  }
  return dp;
}

}  // namespace

std::map<std::pair<long, long>, long> graded_dimensions(const AlgebraKind& kind, int e2max) {
  std::vector<Letter> letters;
  const int s = kind.s, r = kind.r;
  if (kind.family == Family::a || kind.family == Family::c) {
    bool fer = kind.family == Family::a;
    for (int a = 1; a <= s; ++a)
      for (long j2 = 1; j2 <= e2max; j2 += 2) {
        letters.push_back({j2, +1, fer});
        letters.push_back({j2, -1, fer});
      }
    for (int c = 1; c <= r; ++c)
      for (long j2 = 1; j2 <= e2max; j2 += 2) letters.push_back({j2, 0, false});
    return count_words(letters, e2max);
  }
  for (int a = 1; a <= s; ++a)
    for (long j2 = 1; j2 <= e2max; j2 += 2) {
      letters.push_back({j2, +1, true});
      letters.push_back({j2, -1, true});
    }
  for (int c = 1; c <= r; ++c)
    for (long j2 = 2; j2 <= e2max; j2 += 2) letters.push_back({j2, 0, true});
  int zero_letters = (kind.family == Family::b) ? r / 2 : (r + 1) / 2;
  for (int z = 0; z < zero_letters; ++z) letters.push_back({0, 0, true});
  return count_words(letters, e2max);
}

std::map<std::pair<long, long>, long> graded_dimensions_reduced(
    Family family, const std::vector<long>& lambda, const std::vector<long>& mu,
    long den, long emax_units) {
  long N = 1;
  for (long l : lambda) N = lcm_long(N, l);
  for (long m : mu) N = lcm_long(N, 2 * m);
  std::vector<Letter> letters;
  for (long l : lambda) {
    long w = N * den / l;
    for (long j2 = 1; j2 * w / 2 <= emax_units; j2 += 2) {
      letters.push_back({j2 * w / 2, +1, family != Family::c});
      letters.push_back({j2 * w / 2, -1, family != Family::c});
    }
  }
  for (long m : mu) {
    long w = N * den / m;
    for (long j = 1; j * w <= emax_units; ++j) letters.push_back({j * w, 0, true});
  }
  if (family == Family::d || family == Family::b) {
    long zero_letters = (family == Family::b) ? (long)mu.size() / 2 : ((long)mu.size() + 1) / 2;
    for (long z = 0; z < zero_letters; ++z) letters.push_back({0, 0, true});
  }
  return count_words(letters, emax_units);
}

}  // namespace tauforge
