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

#include "tauforge/cyclo.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace tauforge {

long gcd_long(long a, long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { long t = a % b; a = b; b = t; }
  return a;
}

long lcm_long(long a, long b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_long(a, b) * b;
}

long euler_phi(long m) {
  long result = m;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

// Polynomial helpers over Rat, dense ascending-coefficient vectors.
namespace {

void poly_trim(std::vector<Rat>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division q = a / b, requires b to divide a.
std::vector<Rat> poly_div(std::vector<Rat> a, const std::vector<Rat>& b) {
  poly_trim(a);
  std::vector<Rat> q;
  if (a.empty()) return q;
  q.assign(a.size() - b.size() + 1, Rat(0));
  const Rat& lead = b.back();
  for (long i = (long)a.size() - 1; i >= (long)b.size() - 1; --i) {
    Rat f = a[i] / lead;
    q[i - (b.size() - 1)] = f;
    if (f != 0) {
      for (size_t j = 0; j < b.size(); ++j) a[i - (b.size() - 1) + j] -= f * b[j];
    }
  }
  return q;
}

std::map<long, std::vector<Rat>>& phi_cache() {
  static std::map<long, std::vector<Rat>> cache;
  return cache;
}
std::mutex& phi_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const std::vector<Rat>& Cyclo::cyclotomic_poly(long M) {
  std::lock_guard<std::mutex> lock(phi_mutex());
  auto& cache = phi_cache();
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  // Phi_M = (x^M - 1) / prod_{d|M, d<M} Phi_d, computed recursively without
  // re-entering the lock.
  std::vector<long> divs;
  for (long d = 1; d < M; ++d)
    if (M % d == 0) divs.push_back(d);
  std::vector<Rat> num(M + 1, Rat(0));
  num[0] = -1;
  num[M] = 1;
  for (long d : divs) {
    auto dit = cache.find(d);
    if (dit == cache.end()) {
      // Compute Phi_d inline with the same recurrence (divisors of d < d < M
      // are already cached by induction order if we process ascending).
      // Simplest: recurse by releasing nothing; build ascending.
      // We fill ascending here to guarantee availability.
      for (long e = 1; e <= d; ++e) {
        if (d % e == 0 && cache.find(e) == cache.end()) {
          std::vector<Rat> en(e + 1, Rat(0));
          en[0] = -1;
          en[e] = 1;
          for (long f = 1; f < e; ++f)
            if (e % f == 0) en = poly_div(en, cache.at(f));
          poly_trim(en);
          cache.emplace(e, std::move(en));
        }
      }
      dit = cache.find(d);
    }
    num = poly_div(num, dit->second);
  }
  poly_trim(num);
  auto res = cache.emplace(M, std::move(num));
  return res.first->second;
}

Cyclo Cyclo::from_raw(long M, std::vector<Rat> raw) {
  Cyclo out;
  out.m_ = M;
  out.c_.assign(euler_phi(M), Rat(0));
  const auto& phi = cyclotomic_poly(M);
  size_t deg = phi.size() - 1;  // = euler_phi(M)
  // Reduce modulo Phi_M: zeta^deg = -sum_{j<deg} phi[j] zeta^j (phi monic).
  for (long i = (long)raw.size() - 1; i >= (long)deg; --i) {
    Rat f = raw[i];
    if (f == 0) continue;
    raw[i] = 0;
    for (size_t j = 0; j < deg; ++j) raw[i - deg + j] -= f * phi[j];
  }
  for (size_t i = 0; i < out.c_.size() && i < raw.size(); ++i) out.c_[i] = raw[i];
  return out;
}

Cyclo Cyclo::root_of_unity(long M, long k) {
  if (M < 1) throw std::domain_error("root_of_unity: M must be >= 1");
  k %= M;
  if (k < 0) k += M;
  std::vector<Rat> raw(k + 1, Rat(0));
  raw[k] = 1;
  return from_raw(M, std::move(raw));
}

Cyclo Cyclo::i() { return root_of_unity(4, 1); }

Cyclo Cyclo::sqrt_int(long n) {
  if (n < 0) throw std::domain_error("sqrt_int: negative argument");
  if (n == 0) return Cyclo(0);
  Cyclo out(1);
  long sq = 1;
  long rest = n;
  for (long p = 2; p * p <= rest; ++p) {
    while (rest % (p * p) == 0) { sq *= p; rest /= p * p; }
  }
  out = Cyclo(sq);
  // rest is squarefree; take sqrt prime by prime.
  long r = rest;
  for (long p = 2; p <= r; ++p) {
    if (r % p) continue;
    r /= p;
    if (p == 2) {
      // sqrt(2) = zeta_8 + zeta_8^{-1}
      out *= root_of_unity(8, 1) + root_of_unity(8, 7);
    } else {
      // Gauss sum g = sum_a (a|p) zeta_p^a equals sqrt(p) for p=1 mod 4 and
      // i*sqrt(p) for p=3 mod 4.
      Cyclo g(0);
      for (long a = 1; a < p; ++a) {
        long ls = 1, e = (p - 1) / 2, base = a % p, acc = 1;
        while (e) {  // Euler criterion a^((p-1)/2) mod p
          if (e & 1) acc = (acc * base) % p;
          base = (base * base) % p;
          e >>= 1;
        }
        ls = (acc == 1) ? 1 : -1;
        Cyclo term = root_of_unity(p, a);
        if (ls < 0) term = -term;
        g += term;
      }
      if (p % 4 == 3) g = g * i().inverse();
      out *= g;
    }
  }
  return out;
}

bool Cyclo::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Cyclo::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rat Cyclo::rational_value() const {
  if (!is_rational()) throw std::domain_error("rational_value: not rational");
  return c_[0];
}

Cyclo Cyclo::lifted(long M) const {
  if (M == m_) return *this;
  if (M % m_ != 0) throw std::domain_error("lifted: conductor mismatch");
  long step = M / m_;
  std::vector<Rat> raw(c_.size() * step, Rat(0));
  for (size_t j = 0; j < c_.size(); ++j)
    if (c_[j] != 0) raw[j * step] = c_[j];
  return from_raw(M, std::move(raw));
}

Cyclo Cyclo::operator-() const {
  Cyclo out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
  long M = lcm_long(m_, o.m_);
  Cyclo a = lifted(M), b = o.lifted(M);
  for (size_t j = 0; j < a.c_.size(); ++j) a.c_[j] += b.c_[j];
  return a;
}

Cyclo Cyclo::operator-(const Cyclo& o) const { return *this + (-o); }

Cyclo Cyclo::operator*(const Cyclo& o) const {
  if (is_zero() || o.is_zero()) return Cyclo(0);
  if (is_rational()) {
    Cyclo out = o;
    for (auto& x : out.c_) x *= c_[0];
    return out;
  }
  if (o.is_rational()) return o * *this;
  long M = lcm_long(m_, o.m_);
  Cyclo a = lifted(M), b = o.lifted(M);
  std::vector<Rat> raw(a.c_.size() + b.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j] == 0) continue;
      raw[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return from_raw(M, std::move(raw));
}

bool Cyclo::operator==(const Cyclo& o) const {
  long M = lcm_long(m_, o.m_);
  Cyclo a = lifted(M), b = o.lifted(M);
  return a.c_ == b.c_;
}

Cyclo Cyclo::galois(long k) const {
  k %= m_;
  if (k < 0) k += m_;
  if (gcd_long(k, m_) != 1) throw std::domain_error("galois: k not coprime to conductor");
  std::vector<Rat> raw(m_, Rat(0));
  for (size_t j = 0; j < c_.size(); ++j)
    if (c_[j] != 0) raw[(j * k) % m_] += c_[j];
  return from_raw(m_, std::move(raw));
}

Cyclo Cyclo::conj() const { return m_ == 1 ? *this : galois(m_ - 1); }

Cyclo Cyclo::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (is_rational()) return Cyclo(Rat(1) / c_[0]);
  // Norm trick: prod over Galois conjugates sigma_k(x), k coprime to m_,
  // equals the field norm (a rational). inverse = (norm/x-complement)/norm.
  Cyclo prod(1);
  Rat norm;
  {
    for (long k = 2; k < m_; ++k) {
      if (gcd_long(k, m_) != 1) continue;
      prod *= galois(k);
    }
    Cyclo nrm = *this * prod;
    if (!nrm.is_rational()) throw std::logic_error("norm not rational");
    norm = nrm.rational_value();
  }
  if (norm == 0) throw std::domain_error("inverse of zero (norm)");
  Cyclo out = prod;
  for (auto& x : out.c_) x /= norm;
  return out;
}

void Cyclo::shrink() {
  if (m_ == 1) return;
  // A value lies in Q(zeta_d) for d | m_ iff it is fixed by Gal(Q(zeta_m)/Q(zeta_d)).
  // Cheap common cases: try to drop to small divisors by round-trip.
  for (long d = 1; d < m_; ++d) {
    if (m_ % d != 0) continue;
    // candidate: express in conductor d by inverse of lifting. The lift keeps
    // only exponents divisible by m_/d when written in the raw power basis,
    // but reduction mixes coefficients, so test by Galois invariance instead.
    bool invariant = true;
    for (long k = 2; k < m_ && invariant; ++k) {
      if (gcd_long(k, m_) != 1) continue;
      if (k % d == 1) {
        if (!(galois(k) == *this)) invariant = false;
      }
    }
    if (!invariant) continue;
    // Project: value = (d/m * trace over the subgroup) expressed in Q(zeta_d).
    // Compute sum over k = 1 mod d, coprime to m_, of galois(k), divided by
    // the subgroup order; then re-express in conductor d basis by solving the
    // lift linearly. We instead reconstruct via raw basis folding:
    long pd = euler_phi(d);
    // Build matrix of lifted basis columns.
    std::vector<Cyclo> basis;
    basis.reserve(pd);
    for (long j = 0; j < pd; ++j) {
      std::vector<Rat> raw(j + 1, Rat(0));
      raw[j] = 1;
      basis.push_back(from_raw(d, std::move(raw)).lifted(m_));
    }
    long pm = (long)c_.size();
    // Solve sum_j y_j basis[j] = *this by Gaussian elimination on a pm x pd system.
    std::vector<std::vector<Rat>> A(pm, std::vector<Rat>(pd + 1, Rat(0)));
    for (long j = 0; j < pd; ++j)
      for (long i = 0; i < pm; ++i) A[i][j] = basis[j].coeffs()[i];
    for (long i = 0; i < pm; ++i) A[i][pd] = c_[i];
    std::vector<long> pivot_col(pm, -1);
    long row = 0;
    bool ok = true;
    for (long col = 0; col < pd && row < pm; ++col) {
      long pr = -1;
      for (long r = row; r < pm; ++r)
        if (A[r][col] != 0) { pr = r; break; }
      if (pr < 0) continue;
      std::swap(A[pr], A[row]);
      Rat lead = A[row][col];
      for (long cc = col; cc <= pd; ++cc) A[row][cc] /= lead;
      for (long r = 0; r < pm; ++r) {
        if (r == row || A[r][col] == 0) continue;
        Rat f = A[r][col];
        for (long cc = col; cc <= pd; ++cc) A[r][cc] -= f * A[row][cc];
      }
      pivot_col[row] = col;
      ++row;
    }
    std::vector<Rat> y(pd, Rat(0));
    for (long r = 0; r < pm; ++r) {
      bool all_zero = true;
      for (long cc = 0; cc < pd; ++cc)
        if (A[r][cc] != 0) { all_zero = false; break; }
      if (all_zero && A[r][pd] != 0) { ok = false; break; }
      if (pivot_col[r] >= 0) y[pivot_col[r]] = A[r][pd];
    }
    if (!ok) continue;
    m_ = d;
    c_ = std::move(y);
    return;  // d ascending: first success is the minimal conductor
  }
}

std::string Cyclo::str() const {
  std::ostringstream os;
  os << "cyclo(" << m_ << ")[";
  for (size_t j = 0; j < c_.size(); ++j) {
    if (j) os << ",";
    os << c_[j].get_str();
  }
  os << "]";
  return os.str();
}

}  // namespace tauforge
