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

#include "tauforge/qseries.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace tauforge {

QSeries QSeries::one(int k2, bool marker_involutive) {
  QSeries s(k2, marker_involutive);
  s.add(0, 0, Rat(1));
  return s;
}

QSeries QSeries::term(int k2, int e2, int m, const Rat& c, bool marker_involutive) {
  QSeries s(k2, marker_involutive);
  s.add(e2, m, c);
  return s;
}

Rat QSeries::coeff(int e2, int m) const {
  auto it = c_.find({e2, x2_ ? ((m % 2) + 2) % 2 : m});
  return it == c_.end() ? Rat(0) : it->second;
}

void QSeries::add(int e2, int m, const Rat& c) {
  if (c == 0 || e2 > k2_ || e2 < 0) return;
  if (x2_) m = ((m % 2) + 2) % 2;
  auto key = std::make_pair(e2, m);
  auto it = c_.find(key);
  if (it == c_.end()) c_.emplace(key, c);
  else {
    it->second += c;
    if (it->second == 0) c_.erase(it);
  }
}

QSeries QSeries::operator+(const QSeries& o) const {
  QSeries out(std::min(k2_, o.k2_), x2_ || o.x2_);
  for (const auto& [k, v] : c_) out.add(k.first, k.second, v);
  for (const auto& [k, v] : o.c_) out.add(k.first, k.second, v);
  return out;
}

QSeries QSeries::operator-(const QSeries& o) const {
  QSeries out(std::min(k2_, o.k2_), x2_ || o.x2_);
  for (const auto& [k, v] : c_) out.add(k.first, k.second, v);
  for (const auto& [k, v] : o.c_) out.add(k.first, k.second, -v);
  return out;
}

QSeries QSeries::operator*(const QSeries& o) const {
  QSeries out(std::min(k2_, o.k2_), x2_ || o.x2_);
  for (const auto& [ka, va] : c_) {
    if (ka.first > out.k2_) continue;
    for (const auto& [kb, vb] : o.c_) {
      int e2 = ka.first + kb.first;
      if (e2 > out.k2_) continue;
      out.add(e2, ka.second + kb.second, va * vb);
    }
  }
  return out;
}

QSeries QSeries::mul_geometric(int e2, int m, const Rat& c) const {
  if (e2 <= 0) throw std::domain_error("mul_geometric: need positive exponent");
  QSeries factor(k2_, x2_);
  Rat p(1);
  for (int j = 0; j * e2 <= k2_; ++j) {
    factor.add(j * e2, j * m, p);
    p *= c;
  }
  return *this * factor;
}

QSeries QSeries::mul_one_plus(int e2, int m, const Rat& c) const {
  QSeries factor(k2_, x2_);
  factor.add(0, 0, Rat(1));
  factor.add(e2, m, c);
  return *this * factor;
}

std::optional<std::tuple<int, int, Rat, Rat>> QSeries::first_difference(const QSeries& o) const {
  QSeries d = *this - o;
  if (d.c_.empty()) return std::nullopt;
  auto it = d.c_.begin();
  return std::make_tuple(it->first.first, it->first.second,
                         coeff(it->first.first, it->first.second),
                         o.coeff(it->first.first, it->first.second));
}

std::string QSeries::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : c_) {
    if (!first) os << " + ";
    first = false;
    os << v.get_str() << "*q^";
    if (k.first % 2 == 0) os << k.first / 2;
    else os << "(" << k.first << "/2)";
    if (k.second != 0) os << "*t^" << k.second;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// prod_{j in 1/2 + Z_{>=0}} (1+t q^j)(1+t^{-1} q^j), truncated; drop terms
// with |t-exponent| > win.
QSeries jti_product(int k2, int win) {
  QSeries s = QSeries::one(k2);
  for (int j2 = 1; j2 <= k2; j2 += 2) {
    s = s.mul_one_plus(j2, 1, Rat(1));
    s = s.mul_one_plus(j2, -1, Rat(1));
    QSeries clipped(k2);
    for (const auto& [k, v] : s.coeffs())
      if (std::abs(k.second) <= win + (k2 - k.first) / 1)  // loose inner clip
        clipped.add(k.first, k.second, v);
    s = clipped;
  }
  QSeries out(k2);
  for (const auto& [k, v] : s.coeffs())
    if (std::abs(k.second) <= win) out.add(k.first, k.second, v);
  return out;
}

QSeries jti_sum(int k2, int win) {
  QSeries eta(k2);
  eta.add(0, 0, Rat(1));
  for (int j = 1; 2 * j <= k2; ++j) eta = eta.mul_geometric(2 * j, 0, Rat(1));
  QSeries s(k2);
  for (int m = -win; m <= win; ++m) {
    if (m * m > k2) continue;  // q^{m^2/2}: doubled exponent m^2
    for (const auto& [k, v] : eta.coeffs()) {
      int e2 = k.first + m * m;
      if (e2 <= k2) s.add(e2, m, v);
    }
  }
  // completeness of |m| <= win terms only
  QSeries out(k2);
  for (const auto& [k, v] : s.coeffs())
    if (std::abs(k.second) <= win) out.add(k.first, k.second, v);
  return out;
}

// sum_{j,k>=0} q^{k/2} t^k / ((1-q)...(1-q^k)) q^{jk} q^{j/2} t^{-j} / ((1-q)...(1-q^j))
QSeries tet_sum(int k2, int win, bool with_eta_inverse) {
  QSeries s(k2);
  QSeries zero(k2);
  for (int k = 0; k * 1 <= k2; ++k) {
    if (k > k2) break;
    for (int j = 0; j + k + 2 * j * k <= 2 * k2; ++j) {
      long e2min = k + j + 2L * j * k;  // doubled: k/2 + j/2 + jk
      if (e2min > k2) continue;
      QSeries term = QSeries::term(k2, (int)e2min, k - j, Rat(1));
      for (int i = 1; i <= k; ++i) term = term.mul_geometric(2 * i, 0, Rat(1));
      for (int i = 1; i <= j; ++i) term = term.mul_geometric(2 * i, 0, Rat(1));
      s = s + term;
    }
  }
  if (with_eta_inverse) {
    for (int i = 1; 2 * i <= k2; ++i) s = s.mul_geometric(2 * i, 0, Rat(1));
  }
  QSeries out(k2);
  for (const auto& [k, v] : s.coeffs())
    if (std::abs(k.second) <= win) out.add(k.first, k.second, v);
  return out;
}

QSeries tet_product(int k2, int win, bool with_eta) {
  QSeries s = QSeries::one(k2);
  for (int i = 1; 2 * i - 1 <= k2; ++i) {
    s = s.mul_geometric(2 * i - 1, 1, Rat(1));
    s = s.mul_geometric(2 * i - 1, -1, Rat(1));
  }
  if (with_eta) {
    for (int i = 1; 2 * i <= k2; ++i) s = s.mul_one_plus(2 * i, 0, Rat(-1));
  }
  QSeries out(k2);
  for (const auto& [k, v] : s.coeffs())
    if (std::abs(k.second) <= win) out.add(k.first, k.second, v);
  return out;
}

long lcm_list(const std::vector<long>& xs) {
  long n = 1;
  for (long x : xs) n = lcm_long(n, x);
  return n;
}

// Lattice sums sum_{j_1..j_s} t^{|j|} q^{(N/2) sum j_a^2/lambda_a^2} with
// per-component weight factors; weights w2[a] = doubled exponent of q for
// (j_a = 1), i.e. N/lambda_a^2 doubled = 2N/lambda_a^2... passed explicitly.
void lattice_sum_rec(size_t a, const std::vector<long>& wq2, int k2, int win, long e2,
                     long m, const Rat& c, QSeries& out) {
  if (a == wq2.size()) {
    if (std::abs(m) <= win && e2 <= k2) out.add((int)e2, (int)m, c);
    return;
  }
  for (long j = 0;; ++j) {
    long add = wq2[a] * j * j;
    if (e2 + add > k2) { if (j == 0) return; break; }
    lattice_sum_rec(a + 1, wq2, k2, win, e2 + add, m + j, c, out);
    if (j > 0) lattice_sum_rec(a + 1, wq2, k2, win, e2 + add, m - j, c, out);
  }
}

}  // namespace

std::vector<std::string> qidentity_names() {
  return {"jtp", "qb", "cq", "tet", "intro-new", "qdima", "qdimd", "qdimc",
          "qdima-red", "qdimd-red"};
}

QSeries qidentity_side(const std::string& name, const std::string& side, int k2,
                       const QIdentityParams& params) {
  const int win = params.marker_window;
  if (name == "jtp") {
    return side == "product" ? jti_product(k2, win) : jti_sum(k2, win);
  }
  if (name == "qb") {
    QSeries s = QSeries::one(k2);
    if (side == "product") {
      for (int j = 1; 2 * j <= k2; ++j) s = s.mul_one_plus(2 * j, 0, Rat(1));
    } else {
      for (int j = 1; 2 * (2 * j - 1) <= k2; ++j) s = s.mul_geometric(2 * (2 * j - 1), 0, Rat(1));
    }
    return s;
  }
  if (name == "cq") {
    QSeries s = QSeries::one(k2);
    if (side == "product") {
      for (int j2 = 1; j2 <= k2; j2 += 2) s = s.mul_geometric(j2, 0, Rat(1));
    } else {
      for (int j = 1; 2 * (2 * j - 1) <= k2; ++j) s = s.mul_geometric(2 * (2 * j - 1), 0, Rat(1));
      for (int j2 = 1; j2 <= k2; j2 += 2) s = s.mul_one_plus(j2, 0, Rat(1));
    }
    return s;
  }
  if (name == "tet") {
    // TETdim1 (sum with eta^{-1} prefactor) = TETdim2 (product)
    return side == "product" ? tet_product(k2, win, false) : tet_sum(k2, win, true);
  }
  if (name == "intro-new") {
    // prod (1-q^i) / ((1-t q^{i-1/2})(1-t^{-1} q^{i-1/2})) = bare double sum
    return side == "product" ? tet_product(k2, win, true) : tet_sum(k2, win, false);
  }
  if (name == "qdima") {
    int s = params.s > 0 ? params.s : 1;
    if (side == "product") {
      QSeries out = QSeries::one(k2);
      for (int c = 0; c < s; ++c) out = out * jti_product(k2, win + 1);
      QSeries clip(k2);
      for (const auto& [k, v] : out.coeffs())
        if (std::abs(k.second) <= win) clip.add(k.first, k.second, v);
      return clip;
    }
    QSeries lattice(k2);
    lattice_sum_rec(0, std::vector<long>(s, 1), k2, win, 0, 0, Rat(1), lattice);
    QSeries eta = QSeries::one(k2);
    for (int j = 1; 2 * j <= k2; ++j)
      for (int c = 0; c < s; ++c) eta = eta.mul_geometric(2 * j, 0, Rat(1));
    QSeries out = lattice * eta;
    QSeries clip(k2);
    for (const auto& [k, v] : out.coeffs())
      if (std::abs(k.second) <= win) clip.add(k.first, k.second, v);
    return clip;
  }
  if (name == "qdimd") {
    // r >= 1: q-dimension of either irreducible d_infty summand (s,r)
    int s = params.s, r = params.r;
    if (r < 1) throw std::domain_error("qdimd needs r >= 1");
    if (side == "product") {
      // half of the full spin-module count; zero letters contribute 2^ceil(r/2)
      QSeries out = QSeries::one(k2);
      for (int c = 0; c < 2 * s; ++c)
        for (int j2 = 1; j2 <= k2; j2 += 2) out = out.mul_one_plus(j2, 0, Rat(1));
      for (int c = 0; c < r; ++c)
        for (int j = 1; 2 * j <= k2; ++j) out = out.mul_one_plus(2 * j, 0, Rat(1));
      Rat half_pow(1);
      for (int c = 0; c < (r + 1) / 2; ++c) half_pow *= 2;
      half_pow /= 2;
      return out * QSeries::term(k2, 0, 0, half_pow);
    }
    QSeries lattice(k2);
    lattice_sum_rec(0, std::vector<long>(s, 1), k2, 1000000, 0, 0, Rat(1), lattice);
    QSeries fold(k2);
    for (const auto& [k, v] : lattice.coeffs()) fold.add(k.first, 0, v);
    QSeries out = fold;
    for (int j = 1; 2 * j <= k2; ++j)
      for (int c = 0; c < s; ++c) out = out.mul_geometric(2 * j, 0, Rat(1));
    for (int j = 1; 2 * (2 * j - 1) <= k2; ++j)
      for (int c = 0; c < r; ++c) out = out.mul_geometric(2 * (2 * j - 1), 0, Rat(1));
    Rat pw(1);
    for (int c = 0; c < (r - 1) / 2; ++c) pw *= 2;
    return out * QSeries::term(k2, 0, 0, pw);
  }
  if (name == "qdimc") {
    int s = params.s, r = params.r;
    if (side == "product") {
      QSeries out = QSeries::one(k2, true);
      for (int c = 0; c < r + 2 * s; ++c)
        for (int j2 = 1; j2 <= k2; j2 += 2) out = out.mul_geometric(j2, 1, Rat(1));
      return out;
    }
    QSeries out = QSeries::one(k2, true);
    for (int c = 0; c < s; ++c) {
      QSeries ts = tet_sum(k2, 2 * k2 + 2, true);
      QSeries folded(k2, true);
      for (const auto& [k, v] : ts.coeffs()) folded.add(k.first, k.second, v);
      out = out * folded;
    }
    for (int c = 0; c < r; ++c) {
      for (int j2 = 1; j2 <= k2; j2 += 2) out = out.mul_one_plus(j2, 1, Rat(1));
      for (int j = 1; 2 * (2 * j - 1) <= k2; ++j) out = out.mul_geometric(2 * (2 * j - 1), 0, Rat(1));
    }
    return out;
  }
  throw std::domain_error("unknown identity: " + name);
}

long qdim_reduced_unit(const std::vector<long>& lambda, const std::vector<long>& mu) {
  long den = 2;
  for (long l : lambda) den = lcm_long(den, 2 * l);
  for (long m : mu) den = lcm_long(den, 2 * m);
  return den;
}

QSeries qdim_reduced_side(char family, const std::string& side,
                          const std::vector<long>& lambda, const std::vector<long>& mu,
                          int kmax, int win) {
  long N = 1;
  for (long l : lambda) N = lcm_long(N, l);
  for (long m : mu) N = lcm_long(N, 2 * m);
  long den = qdim_reduced_unit(lambda, mu);
  long K = (long)kmax * den;  // truncation in 1/den units
  if (K > 4000) throw std::domain_error("qdim_reduced_side: truncation grid too fine");
  int k2 = (int)K;
  bool typeA = (family == 'a');
  if (!typeA && mu.size() % 2 != 0)
    throw std::domain_error("qdim_reduced_side: type d needs an even number of mu parts");
  if (side == "product") {
    // letter count over the relabeled modes, energies in 1/den units:
    // charged pair a: psi^{\pm a}_j at j N/lambda_a, j in 1/2 + Z_{>=0};
    // twisted b: modes j N/mu_b, j >= 1, plus one zero letter per pair.
    QSeries out = QSeries::one(k2);
    for (long l : lambda) {
      long w = N / l * den;  // energy of j=1 (doubled j grid below)
      for (long j2 = 1; j2 * w / 2 <= K; j2 += 2) {
        long e = j2 * w / 2;
        if (2 * ((j2 * w) / 2) != j2 * w) throw std::logic_error("grid");
        out = out.mul_one_plus((int)e, typeA ? 1 : 0, Rat(1));
        out = out.mul_one_plus((int)e, typeA ? -1 : 0, Rat(1));
      }
    }
    if (!typeA) {
      for (long m : mu) {
        long w = N / m * den;
        for (long j = 1; j * w <= K; ++j) out = out.mul_one_plus((int)(j * w), 0, Rat(1));
      }
      // zero letters: one per pair of negative cycles; then halve for the
      // irreducible summand.
      Rat f(1);
      for (size_t c = 0; c + 1 < mu.size(); c += 2) f *= 2;
      f /= 2;
      out = out * QSeries::term(k2, 0, 0, f);
    }
    QSeries clip(k2);
    for (const auto& [k, v] : out.coeffs())
      if (std::abs(k.second) <= win) clip.add(k.first, k.second, v);
    return clip;
  }
  // sum side: lattice + Heisenberg products
  QSeries lattice(k2);
  {
    std::vector<long> wq2(lambda.size());
    // charge-j_a ground energy (N/2) j_a^2 / lambda_a, matching the letter
    // grading energy(psi^{+-a}_j) = j N/lambda_a
    for (size_t a = 0; a < lambda.size(); ++a) wq2[a] = N * den / (2 * lambda[a]);
    lattice_sum_rec(0, wq2, k2, typeA ? win : 1000000, 0, 0, Rat(1), lattice);
  }
  QSeries s = lattice;
  if (!typeA) {
    QSeries fold(k2);
    for (const auto& [k, v] : s.coeffs()) fold.add(k.first, 0, v);
    s = fold;
  }
  for (long l : lambda) {
    long w = N / l * den;
    for (long i = 1; i * w <= K; ++i) s = s.mul_geometric((int)(i * w), 0, Rat(1));
  }
  if (!typeA) {
    for (long m : mu) {
      long w = N / m * den;
      for (long i = 1; (2 * i - 1) * w <= K; ++i)
        s = s.mul_geometric((int)((2 * i - 1) * w), 0, Rat(1));
    }
    Rat pw(1);
    long r = (long)mu.size();
    for (long c = 0; c < (r - 1) / 2; ++c) pw *= 2;
    s = s * QSeries::term(k2, 0, 0, pw);
  }
  QSeries clip(k2);
  for (const auto& [k, v] : s.coeffs())
    if (std::abs(k.second) <= win) clip.add(k.first, k.second, v);
  return clip;
}

QVerifyResult qidentity_verify(const std::string& name, int k2, const QIdentityParams& params) {
  QSeries lhs(0), rhs(0);
  if (name == "qdima-red" || name == "qdimd-red") {
    char fam = (name == "qdima-red") ? 'a' : 'd';
    int kmax = k2 / 2;
    lhs = qdim_reduced_side(fam, "product", params.lambda, params.mu, kmax, params.marker_window);
    rhs = qdim_reduced_side(fam, "sum", params.lambda, params.mu, kmax, params.marker_window);
  } else {
    lhs = qidentity_side(name, "product", k2, params);
    rhs = qidentity_side(name, "sum", k2, params);
  }
  auto diff = lhs.first_difference(rhs);
  if (!diff) return {true, ""};
  std::ostringstream os;
  auto [e2, m, a, b] = *diff;
  os << "first discrepancy at exponent key " << e2 << " marker " << m << ": product-side "
     << a.get_str() << " vs sum-side " << b.get_str();
  return {false, os.str()};
}

}  // namespace tauforge
