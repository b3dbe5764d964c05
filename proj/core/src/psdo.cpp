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

#include "tauforge/psdo.hpp"

#include <sstream>
#include <stdexcept>

namespace tauforge {

GrassPoly DiffCtx::dvar(const GrassPoly& p, const Var& v) { return p.d(v); }

GrassPoly DiffCtx::dx(const GrassPoly& p) const {
  GrassPoly out;
  for (const Var& v : xvars) out += p.d(v);
  if (u_symbols) {
    // d/dx u_{id,n} = u_{id,n+1}
    for (const auto& [mono, c] : p.terms()) {
      for (size_t i = 0; i < mono.even.size(); ++i) {
        const Var& v = mono.even[i].first;
        if (v.kind != VarKind::U) continue;
        Mono mm = mono;
        int e = mm.even[i].second;
        if (e == 1) mm.even.erase(mm.even.begin() + i);
        else mm.even[i].second = e - 1;
        GrassPoly term = GrassPoly::monomial(mm, c * Cyclo(e));
        term = term * GrassPoly::variable(u_var(v.comp, v.idx + 1));
        out += term;
      }
    }
  }
  return out;
}

Rat gen_binom(long k, long l) {
  Rat r(1);
  for (long i = 0; i < l; ++i) {
    r *= Rat(k - i);
    r /= Rat(i + 1);
  }
  return r;
}

namespace {
const Frac kZeroFrac{};

// fraction arithmetic over a shared base
Frac frac_add(const Frac& a, const Frac& b, const GrassPoly& base) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int p = std::max(a.pow, b.pow);
  GrassPoly na = a.num, nb = b.num;
  for (int i = a.pow; i < p; ++i) na = na * base;
  for (int i = b.pow; i < p; ++i) nb = nb * base;
  return {na + nb, p};
}

Frac frac_mul(const Frac& a, const Frac& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return {a.num * b.num, a.pow + b.pow};
}

Frac frac_dx(const Frac& a, const GrassPoly& base, const DiffCtx& ctx) {
  if (a.is_zero()) return {};
  GrassPoly dn = ctx.dx(a.num);
  if (a.pow == 0) return {dn, 0};
  GrassPoly db = ctx.dx(base);
  if (db.is_zero()) return {dn, a.pow};
  // (n / b^p)' = (n' b - p n b') / b^{p+1}
  return {dn * base - a.num.scaled(Cyclo(a.pow)) * db, a.pow + 1};
}

Frac frac_dvar(const Frac& a, const GrassPoly& base, const Var& v) {
  if (a.is_zero()) return {};
  GrassPoly dn = a.num.d(v);
  if (a.pow == 0) return {dn, 0};
  GrassPoly db = base.d(v);
  if (db.is_zero()) return {dn, a.pow};
  return {dn * base - a.num.scaled(Cyclo(a.pow)) * db, a.pow + 1};
}

}  // namespace

MatPSDO MatPSDO::identity(long m, int lo) {
  MatPSDO out(m, lo, 0);
  for (long i = 0; i < m; ++i) out.add(0, i, i, GrassPoly(1), 0);
  return out;
}

MatPSDO MatPSDO::unit(long m, int lo, int hi, long i, long j, int k, const GrassPoly& c) {
  MatPSDO out(m, lo, hi);
  out.add(k, i, j, c, 0);
  return out;
}

MatPSDO MatPSDO::diag(long m, int lo, const std::vector<Cyclo>& entries) {
  MatPSDO out(m, lo, 0);
  for (long i = 0; i < m; ++i) out.add(0, i, i, GrassPoly(entries[i]), 0);
  return out;
}

const Frac& MatPSDO::at(int k, long i, long j) const {
  auto it = coef_.find(k);
  if (it == coef_.end()) return kZeroFrac;
  return it->second[i * m_ + j];
}

void MatPSDO::set(int k, long i, long j, const Frac& f) {
  if (k < lo_ || k > hi_) return;
  auto& mat = coef_[k];
  if (mat.empty()) mat.assign(m_ * m_, Frac{});
  mat[i * m_ + j] = f;
}

void MatPSDO::add(int k, long i, long j, const GrassPoly& num, int pow) {
  if (k < lo_ || k > hi_ || num.is_zero()) return;
  auto& mat = coef_[k];
  if (mat.empty()) mat.assign(m_ * m_, Frac{});
  mat[i * m_ + j] = frac_add(mat[i * m_ + j], {num, pow}, base_);
}

MatPSDO MatPSDO::operator+(const MatPSDO& o) const {
  if (m_ != o.m_) throw std::domain_error("MatPSDO: size mismatch");
  GrassPoly b = base_;
  if (!(base_ == o.base_)) {
    if (base_ == GrassPoly(1)) b = o.base_;
    else if (o.base_ == GrassPoly(1)) b = base_;
    else throw std::domain_error("MatPSDO: incompatible bases in +");
  }
  MatPSDO out(m_, std::max(lo_, o.lo_), std::max(hi_, o.hi_), b);
  for (const auto& [k, mat] : coef_)
    for (long i = 0; i < m_; ++i)
      for (long j = 0; j < m_; ++j)
        if (!mat[i * m_ + j].is_zero()) out.add(k, i, j, mat[i * m_ + j].num, mat[i * m_ + j].pow);
  for (const auto& [k, mat] : o.coef_)
    for (long i = 0; i < m_; ++i)
      for (long j = 0; j < m_; ++j)
        if (!mat[i * m_ + j].is_zero()) out.add(k, i, j, mat[i * m_ + j].num, mat[i * m_ + j].pow);
  return out;
}

MatPSDO MatPSDO::operator-(const MatPSDO& o) const {
  return *this + o.scaled(GrassPoly(-1));
}

MatPSDO MatPSDO::scaled(const GrassPoly& c) const {
  MatPSDO out(m_, lo_, hi_, base_);
  for (const auto& [k, mat] : coef_)
    for (long i = 0; i < m_; ++i)
      for (long j = 0; j < m_; ++j)
        if (!mat[i * m_ + j].is_zero()) out.add(k, i, j, mat[i * m_ + j].num * c, mat[i * m_ + j].pow);
  return out;
}

MatPSDO MatPSDO::truncated(int lo, int hi) const {
  MatPSDO out(m_, lo, hi, base_);
  for (const auto& [k, mat] : coef_) {
    if (k < lo || k > hi) continue;
    for (long i = 0; i < m_; ++i)
      for (long j = 0; j < m_; ++j)
        if (!mat[i * m_ + j].is_zero()) out.set(k, i, j, mat[i * m_ + j]);
  }
  return out;
}

MatPSDO MatPSDO::plus_part() const {
  MatPSDO out(m_, lo_, hi_, base_);
  for (const auto& [k, mat] : coef_) {
    if (k < 0) continue;
    for (long i = 0; i < m_; ++i)
      for (long j = 0; j < m_; ++j)
        if (!mat[i * m_ + j].is_zero()) out.set(k, i, j, mat[i * m_ + j]);
  }
  return out;
}

MatPSDO MatPSDO::minus_part() const {
  MatPSDO out = truncated(lo_, -1);
  return out;
}

MatPSDO MatPSDO::mul(const MatPSDO& o, const DiffCtx& ctx) const {
  if (m_ != o.m_) throw std::domain_error("MatPSDO: size mismatch");
  if (!(base_ == o.base_)) {
    // lift to the product base when one side is trivial
    if (base_ == GrassPoly(1)) return with_base(*this, o.base_).mul(o, ctx);
    if (o.base_ == GrassPoly(1)) return mul(with_base(o, base_), ctx);
    throw std::domain_error("MatPSDO: incompatible bases");
  }
  int lo = std::max(lo_ + o.hi_, o.lo_ + hi_);
  int hi = hi_ + o.hi_;
  MatPSDO out(m_, lo, hi, base_);
  for (const auto& [ka, mata] : coef_) {
    for (const auto& [kb, matb] : o.coef_) {
      // d^{ka} f = sum_l C(ka, l) f^{(l)} d^{ka - l}
      // stop once below the window
      std::vector<Frac> deriv(matb);
      for (long l = 0; ka + kb - l >= lo; ++l) {
        Rat bin = gen_binom(ka, l);
        if (bin != 0) {
          int k = (int)(ka + kb - l);
          for (long i = 0; i < m_; ++i)
            for (long j = 0; j < m_; ++j) {
              Frac acc{};
              for (long t = 0; t < m_; ++t) {
                const Frac& fa = mata[i * m_ + t];
                const Frac& fb = deriv[t * m_ + j];
                if (fa.is_zero() || fb.is_zero()) continue;
                acc = frac_add(acc, frac_mul(fa, fb), base_);
              }
              if (!acc.is_zero()) out.add(k, i, j, acc.num.scaled(Cyclo(bin)), acc.pow);
            }
        }
        if (ka >= 0 && l >= ka) break;  // finite Leibniz for differential part
        for (auto& f : deriv) f = frac_dx(f, base_, ctx);
        bool all_zero = true;
        for (auto& f : deriv)
          if (!f.is_zero()) { all_zero = false; break; }
        if (all_zero) break;
      }
    }
  }
  return out;
}

MatPSDO MatPSDO::adjoint(const DiffCtx& ctx) const {
  // (M d^k)* = (-d)^k M^T = sum_l (-1)^k C(k,l) (M^T)^{(l)} d^{k-l}
  MatPSDO out(m_, lo_, hi_, base_);
  for (const auto& [k, mat] : coef_) {
    std::vector<Frac> deriv(m_ * m_);
    for (long i = 0; i < m_; ++i)
      for (long j = 0; j < m_; ++j) deriv[i * m_ + j] = mat[j * m_ + i];
    for (long l = 0; k - l >= lo_; ++l) {
      Rat bin = gen_binom(k, l);
      if (k % 2 != 0) bin = -bin;
      if (bin != 0) {
        for (long i = 0; i < m_; ++i)
          for (long j = 0; j < m_; ++j) {
            const Frac& f = deriv[i * m_ + j];
            if (!f.is_zero()) out.add((int)(k - l), i, j, f.num.scaled(Cyclo(bin)), f.pow);
          }
      }
      if (k >= 0 && l >= k) break;
      for (auto& f : deriv) f = frac_dx(f, base_, ctx);
      bool all_zero = true;
      for (auto& f : deriv)
        if (!f.is_zero()) { all_zero = false; break; }
      if (all_zero) break;
    }
  }
  return out;
}

MatPSDO MatPSDO::dvar(const Var& v, const DiffCtx& ctx) const {
  (void)ctx;
  MatPSDO out(m_, lo_, hi_, base_);
  for (const auto& [k, mat] : coef_)
    for (long i = 0; i < m_; ++i)
      for (long j = 0; j < m_; ++j) {
        Frac f = frac_dvar(mat[i * m_ + j], base_, v);
        if (!f.is_zero()) out.add(k, i, j, f.num, f.pow);
      }
  return out;
}

MatPSDO MatPSDO::invert(const DiffCtx& ctx) const {
  // leading coefficient at hi_ must be an invertible constant matrix
  int d = hi_;
  auto it = coef_.find(d);
  if (it == coef_.end()) throw std::domain_error("MatPSDO::invert: zero leading coefficient");
  std::vector<Cyclo> lead(m_ * m_);
  for (long i = 0; i < m_; ++i)
    for (long j = 0; j < m_; ++j) {
      const Frac& f = it->second[i * m_ + j];
      if (f.is_zero()) { lead[i * m_ + j] = Cyclo(0); continue; }
      if (f.pow != 0 || f.num.size() != 1 || !f.num.terms().begin()->first.even.empty() ||
          !f.num.terms().begin()->first.odd.empty())
        throw std::domain_error("MatPSDO::invert: leading coefficient not constant");
      lead[i * m_ + j] = f.num.terms().begin()->second;
    }
  // invert the constant matrix
  std::vector<Cyclo> inv(m_ * m_);
  {
    std::vector<Cyclo> a = lead;
    for (long i = 0; i < m_; ++i) inv[i * m_ + i] = Cyclo(1);
    for (long c = 0; c < m_; ++c) {
      long piv = -1;
      for (long rr = c; rr < m_; ++rr)
        if (!a[rr * m_ + c].is_zero()) { piv = rr; break; }
      if (piv < 0) throw std::domain_error("MatPSDO::invert: singular leading coefficient");
      for (long j = 0; j < m_; ++j) {
        std::swap(a[piv * m_ + j], a[c * m_ + j]);
        std::swap(inv[piv * m_ + j], inv[c * m_ + j]);
      }
      Cyclo f = a[c * m_ + c].inverse();
      for (long j = 0; j < m_; ++j) {
        a[c * m_ + j] *= f;
        inv[c * m_ + j] *= f;
      }
      for (long rr = 0; rr < m_; ++rr) {
        if (rr == c || a[rr * m_ + c].is_zero()) continue;
        Cyclo g = a[rr * m_ + c];
        for (long j = 0; j < m_; ++j) {
          a[rr * m_ + j] -= g * a[c * m_ + j];
          inv[rr * m_ + j] -= g * inv[c * m_ + j];
        }
      }
    }
  }
  // B0 = lead^{-1} d^{-d}; X = I - A B0 has orders <= -1; A^{-1} = B0 sum X^k
  int blo = lo_ - 2 * d;  // requested inverse window
  int wlo = std::min(blo, lo_ - d);
  MatPSDO B0(m_, wlo, -d, base_);
  for (long i = 0; i < m_; ++i)
    for (long j = 0; j < m_; ++j)
      if (!inv[i * m_ + j].is_zero()) B0.add(-d, i, j, GrassPoly(inv[i * m_ + j]), 0);
  MatPSDO X = MatPSDO::identity(m_, wlo) - this->mul(B0, ctx).truncated(wlo, 0);
  MatPSDO acc = MatPSDO::identity(m_, wlo);
  MatPSDO pw = X;
  while (!pw.window_zero()) {
    acc = acc + pw;
    pw = pw.mul(X, ctx).truncated(wlo, 0);
  }
  return B0.mul(acc, ctx).truncated(blo, -d);
}

MatPSDO MatPSDO::power(long n, const DiffCtx& ctx) const {
  if (n < 0) throw std::domain_error("MatPSDO::power: negative");
  MatPSDO out = MatPSDO::identity(m_, lo_);
  for (long i = 0; i < n; ++i) out = out.mul(*this, ctx);
  return out;
}

bool MatPSDO::window_zero() const {
  for (const auto& [k, mat] : coef_)
    for (const auto& f : mat)
      if (!f.is_zero()) return false;
  return true;
}

bool MatPSDO::operator==(const MatPSDO& o) const {
  // compare on the intersection window by cross multiplication
  int lo = std::max(lo_, o.lo_);
  int hi = std::max(hi_, o.hi_);
  GrassPoly common = base_;
  if (!(base_ == o.base_)) {
    if (base_ == GrassPoly(1)) common = o.base_;
    else if (o.base_ == GrassPoly(1)) common = base_;
    else throw std::domain_error("MatPSDO: comparing different bases");
  }
  for (int k = lo; k <= hi; ++k) {
    for (long i = 0; i < m_; ++i)
      for (long j = 0; j < m_; ++j) {
        const Frac& a = at(k, i, j);
        const Frac& b = o.at(k, i, j);
        GrassPoly na = a.num, nb = b.num;
        int p = std::max(a.pow, b.pow);
        for (int q = a.pow; q < p; ++q) na = na * common;
        for (int q = b.pow; q < p; ++q) nb = nb * common;
        if (!(na == nb)) return false;
      }
  }
  return true;
}

std::string MatPSDO::str() const {
  std::ostringstream os;
  for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) {
    os << "d^" << it->first << ":\n";
    for (long i = 0; i < m_; ++i) {
      os << "  [";
      for (long j = 0; j < m_; ++j) {
        const Frac& f = it->second[i * m_ + j];
        if (j) os << " | ";
        if (f.is_zero()) os << "0";
        else {
          os << f.num.str();
          if (f.pow) os << " / tau^" << f.pow;
        }
      }
      os << "]\n";
    }
  }
  return os.str();
}

MatPSDO with_base(const MatPSDO& a, const GrassPoly& base) {
  MatPSDO out(a.m_, a.lo_, a.hi_, base);
  for (const auto& [k, mat] : a.coef_)
    for (long i = 0; i < a.m_; ++i)
      for (long j = 0; j < a.m_; ++j) {
        const Frac& f = mat[i * a.m_ + j];
        if (f.is_zero()) continue;
        if (f.pow != 0) throw std::domain_error("with_base: nontrivial source base");
        out.add(k, i, j, f.num, 0);
      }
  return out;
}

std::pair<MatPSDO, MatPSDO> split_ge_lt(const MatPSDO& a, const MatPSDO& J,
                                        const MatPSDO& Jinv, const DiffCtx& ctx) {
  MatPSDO aj = a.mul(J, ctx);
  MatPSDO ge = aj.plus_part().mul(Jinv, ctx).truncated(a.lo(), a.hi() + J.hi() + Jinv.hi());
  MatPSDO lt = (a - ge).truncated(a.lo(), a.hi());
  return {ge.truncated(a.lo(), std::max(a.hi(), a.hi() + J.hi() + Jinv.hi())), lt};
}

}  // namespace tauforge
