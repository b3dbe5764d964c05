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

#include "tauforge/grasspoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tauforge {

GrassPoly GrassPoly::variable(const Var& v) {
  Mono m;
  if (is_odd_kind(v.kind)) m.odd.push_back(v);
  else m.even.push_back({v, 1});
  return monomial(m, Cyclo(1));
}

GrassPoly GrassPoly::monomial(const Mono& m, const Cyclo& c) {
  GrassPoly p;
  if (!c.is_zero()) p.terms_[m] = c;
  return p;
}

void GrassPoly::add_term(const Mono& m, const Cyclo& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GrassPoly GrassPoly::operator-() const {
  GrassPoly out;
  for (const auto& [m, c] : terms_) out.terms_[m] = -c;
  return out;
}

GrassPoly GrassPoly::operator+(const GrassPoly& o) const {
  GrassPoly out = *this;
  out += o;
  return out;
}

GrassPoly& GrassPoly::operator+=(const GrassPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

GrassPoly GrassPoly::operator-(const GrassPoly& o) const { return *this + (-o); }

int GrassPoly::merge_odd(const std::vector<Var>& a, const std::vector<Var>& b,
                         std::vector<Var>& merged) {
  merged.clear();
  merged.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  long inversions = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return 0;
    if (a[i] < b[j]) {
      merged.push_back(a[i++]);
    } else {
      // b[j] jumps over the remaining a-letters
      inversions += (long)(a.size() - i);
      merged.push_back(b[j++]);
    }
  }
  while (i < a.size()) merged.push_back(a[i++]);
  while (j < b.size()) merged.push_back(b[j++]);
  return (inversions & 1) ? -1 : 1;
}

GrassPoly GrassPoly::operator*(const GrassPoly& o) const {
  GrassPoly out;
  std::vector<Var> merged;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      int sign = merge_odd(ma.odd, mb.odd, merged);
      if (sign == 0) continue;
      Mono m;
      m.odd = merged;
      // merge even exponent vectors
      m.even.reserve(ma.even.size() + mb.even.size());
      size_t i = 0, j = 0;
      while (i < ma.even.size() && j < mb.even.size()) {
        if (ma.even[i].first == mb.even[j].first) {
          int e = ma.even[i].second + mb.even[j].second;
          if (e != 0) m.even.push_back({ma.even[i].first, e});
          ++i; ++j;
        } else if (ma.even[i].first < mb.even[j].first) {
          m.even.push_back(ma.even[i++]);
        } else {
          m.even.push_back(mb.even[j++]);
        }
      }
      while (i < ma.even.size()) m.even.push_back(ma.even[i++]);
      while (j < mb.even.size()) m.even.push_back(mb.even[j++]);
      Cyclo c = ca * cb;
      if (sign < 0) c = -c;
      out.add_term(m, c);
    }
  }
  return out;
}

GrassPoly GrassPoly::scaled(const Cyclo& c) const {
  GrassPoly out;
  if (c.is_zero()) return out;
  for (const auto& [m, x] : terms_) {
    Cyclo y = x * c;
    if (!y.is_zero()) out.terms_[m] = y;
  }
  return out;
}

GrassPoly GrassPoly::d(const Var& v) const {
  GrassPoly out;
  for (const auto& [m, c] : terms_) {
    for (size_t i = 0; i < m.even.size(); ++i) {
      if (!(m.even[i].first == v)) continue;
      Mono mm = m;
      int e = mm.even[i].second;
      if (e == 1) mm.even.erase(mm.even.begin() + i);
      else mm.even[i].second = e - 1;
      out.add_term(mm, c * Cyclo(e));
      break;
    }
  }
  return out;
}

GrassPoly GrassPoly::odd_d(const Var& v) const {
  GrassPoly out;
  for (const auto& [m, c] : terms_) {
    for (size_t i = 0; i < m.odd.size(); ++i) {
      if (!(m.odd[i] == v)) continue;
      Mono mm = m;
      mm.odd.erase(mm.odd.begin() + i);
      Cyclo cc = (i & 1) ? -c : c;
      out.add_term(mm, cc);
      break;
    }
  }
  return out;
}

GrassPoly GrassPoly::odd_mul(const Var& v) const {
  return GrassPoly::variable(v) * *this;
}

GrassPoly GrassPoly::subst_zero(const std::function<bool(const Var&)>& filter) const {
  GrassPoly out;
  for (const auto& [m, c] : terms_) {
    bool hit = false;
    for (const auto& [v, e] : m.even)
      if (filter(v)) { hit = true; break; }
    if (!hit)
      for (const auto& v : m.odd)
        if (filter(v)) { hit = true; break; }
    if (!hit) out.add_term(m, c);
  }
  return out;
}

GrassPoly GrassPoly::odd_coeff(const std::vector<Var>& word) const {
  // For sorted word v1 < v2 < ... < vk and a term v1 v2 ... vk f, applying
  // left derivatives in ascending order peels letters off the front:
  // d_{v1}(v1 v2 ... f) = v2 ... f. Terms missing a letter vanish.
  GrassPoly out = *this;
  for (const auto& v : word) out = out.odd_d(v);
  return out;
}

long GrassPoly::weighted_degree(const std::function<bool(const Var&)>& filter) const {
  long best = 0;
  for (const auto& [m, c] : terms_) {
    long w = 0;
    for (const auto& [v, e] : m.even)
      if (filter(v)) w += (long)v.idx * e;
    best = std::max(best, w);
  }
  return best;
}

GrassPoly GrassPoly::subst_add(const Var& v, const GrassPoly& add) const {
  GrassPoly out;
  GrassPoly repl = GrassPoly::variable(v) + add;
  for (const auto& [m, c] : terms_) {
    GrassPoly term = GrassPoly::monomial(Mono{{}, m.odd}, c);
    for (const auto& [w, e] : m.even) {
      if (w == v) {
        for (int k = 0; k < e; ++k) term = term * repl;
      } else {
        Mono mm;
        mm.even.push_back({w, e});
        term = term * GrassPoly::monomial(mm, Cyclo(1));
      }
    }
    out += term;
  }
  return out;
}

GrassPoly GrassPoly::rename(const std::function<Var(const Var&)>& f) const {
  GrassPoly out;
  for (const auto& [m, c] : terms_) {
    Mono mm;
    mm.even.reserve(m.even.size());
    for (const auto& [v, e] : m.even) mm.even.push_back({f(v), e});
    std::sort(mm.even.begin(), mm.even.end());
    // renamed odd letters: count sorting inversions for the Koszul sign
    std::vector<Var> odd;
    odd.reserve(m.odd.size());
    for (const auto& v : m.odd) odd.push_back(f(v));
    long inv = 0;
    for (size_t i = 0; i < odd.size(); ++i)
      for (size_t j = i + 1; j < odd.size(); ++j)
        if (odd[j] < odd[i]) ++inv;
    std::sort(odd.begin(), odd.end());
    for (size_t i = 0; i + 1 < odd.size(); ++i)
      if (odd[i] == odd[i + 1]) throw std::logic_error("rename: odd letter collision");
    mm.odd = std::move(odd);
    out.add_term(mm, (inv & 1) ? -c : c);
  }
  return out;
}

int GrassPoly::max_odd_letters() const {
  int best = 0;
  for (const auto& [m, c] : terms_) best = std::max<int>(best, (int)m.odd.size());
  return best;
}

std::string var_str(const Var& v) {
  std::ostringstream os;
  switch (v.kind) {
    case VarKind::T: os << "t" << v.idx << "(" << v.comp << ")"; break;
    case VarKind::TBar: os << "T" << v.idx << "(" << v.comp << ")"; break;
    case VarKind::U: os << "u" << v.comp;
      for (int i = 0; i < v.idx; ++i) os << "x";
      break;
    case VarKind::Theta: os << "th" << v.comp; break;
    case VarKind::ThetaBar: os << "TH" << v.comp; break;
    case VarKind::Xi:
      os << "xi" << (v.comp ? std::to_string(v.comp) : std::string()) << "[";
      if (v.idx % 2 == 0) os << v.idx / 2;
      else os << v.idx << "/2";
      os << "]";
      break;
    case VarKind::XiBar:
      os << "XI" << (v.comp ? std::to_string(v.comp) : std::string()) << "[";
      if (v.idx % 2 == 0) os << v.idx / 2;
      else os << v.idx << "/2";
      os << "]";
      break;
  }
  return os.str();
}

std::string GrassPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (const auto& [v, e] : m.even) {
      os << "*" << var_str(v);
      if (e != 1) os << "^" << e;
    }
    for (const auto& v : m.odd) os << "*" << var_str(v);
  }
  return os.str();
}

}  // namespace tauforge
