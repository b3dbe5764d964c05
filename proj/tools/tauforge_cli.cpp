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

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "tauforge/bosonize.hpp"
#include "tauforge/fock.hpp"
#include "tauforge/lax.hpp"
#include "tauforge/qseries.hpp"
#include "tauforge/report.hpp"
#include "tauforge/weylclass.hpp"

using json = nlohmann::json;
using namespace tauforge;

namespace {

std::vector<long> parse_partition(const std::string& s) {
  std::vector<long> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stol(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::stol(cur));
  return out;
}

// ---------------------------------------------------------------------------
// serialization (documented in docs/formats.md)

json cyclo_to_json(const Cyclo& c) { return c.str(); }

Cyclo cyclo_from_json(const json& j) {
  std::string s = j.get<std::string>();
  auto lp = s.find('('), rp = s.find(')'), lb = s.find('['), rb = s.rfind(']');
  if (lp == std::string::npos || rb == std::string::npos)
    throw std::runtime_error("bad scalar: " + s);
  long M = std::stol(s.substr(lp + 1, rp - lp - 1));
  std::string body = s.substr(lb + 1, rb - lb - 1);
  Cyclo out(0);
  long k = 0;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    Rat r(cur);
    r.canonicalize();
    out += Cyclo(r) * Cyclo::root_of_unity(M, k);
    ++k;
    cur.clear();
  };
  for (char ch : body) {
    if (ch == ',') flush();
    else cur += ch;
  }
  flush();
  return out;
}

json var_to_json(const Var& v) {
  switch (v.kind) {
    case VarKind::T: return json::array({"t", v.comp, v.idx});
    case VarKind::TBar: return json::array({"tbar", v.comp, v.idx});
    case VarKind::U: return json::array({"u", v.comp, v.idx});
    case VarKind::Theta: return json::array({"theta", v.comp});
    case VarKind::ThetaBar: return json::array({"thetabar", v.comp});
    case VarKind::Xi: return json::array({"xi", v.comp, v.idx});
    case VarKind::XiBar: return json::array({"xibar", v.comp, v.idx});
  }
  return {};
}

Var var_from_json(const json& j) {
  std::string k = j.at(0).get<std::string>();
  if (k == "t") return t_var(j.at(1), j.at(2));
  if (k == "tbar") return tbar_var(j.at(1), j.at(2));
  if (k == "u") return u_var(j.at(1), j.at(2));
  if (k == "theta") return theta_var(j.at(1));
  if (k == "thetabar") return thetabar_var(j.at(1));
  if (k == "xi") return xi_var2(j.at(1), j.at(2));
  if (k == "xibar") return xibar_var2(j.at(1), j.at(2));
  throw std::runtime_error("bad variable kind " + k);
}

json poly_to_json(const GrassPoly& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    json even = json::array(), odd = json::array();
    for (const auto& [v, e] : m.even) even.push_back(json::array({var_to_json(v), e}));
    for (const auto& v : m.odd) odd.push_back(var_to_json(v));
    terms.push_back(json{{"even", even}, {"odd", odd}, {"coeff", cyclo_to_json(c)}});
  }
  return terms;
}

GrassPoly poly_from_json(const json& j) {
  GrassPoly p;
  for (const auto& t : j) {
    Mono m;
    for (const auto& ev : t.at("even"))
      m.even.push_back({var_from_json(ev.at(0)), ev.at(1).get<int>()});
    for (const auto& ov : t.at("odd")) m.odd.push_back(var_from_json(ov));
    std::sort(m.even.begin(), m.even.end());
    std::sort(m.odd.begin(), m.odd.end());
    p.add_term(m, cyclo_from_json(t.at("coeff")));
  }
  return p;
}

AlgebraKind kind_from_json(const json& j) {
  AlgebraKind k;
  std::string f = j.at("family").get<std::string>();
  k.family = (Family)f.at(0);
  k.s = j.at("s").get<int>();
  k.r = j.at("r").get<int>();
  if (!k.valid()) throw std::runtime_error("invalid algebra kind in file");
  return k;
}

TauFamily tau_from_json(const json& j) {
  TauFamily T;
  T.kind = kind_from_json(j.at("kind"));
  for (const auto& sec : j.at("sectors")) {
    Sector s;
    for (const auto& x : sec.at("charge")) s.push_back(x.get<int>());
    T.add(s, poly_from_json(sec.at("poly")));
  }
  return T;
}

json tau_to_json(const TauFamily& T) {
  json j;
  j["kind"] = {{"family", std::string(1, (char)T.kind.family)}, {"s", T.kind.s}, {"r", T.kind.r}};
  json secs = json::array();
  for (const auto& [s, p] : T.sec)
    secs.push_back(json{{"charge", s}, {"poly", poly_to_json(p)}});
  j["sectors"] = secs;
  return j;
}

FockVector fock_from_json(const json& j) {
  AlgebraKind k = kind_from_json(j.at("kind"));
  FockVector v(k);
  for (const auto& t : j.at("terms")) {
    Word w;
    for (const auto& mj : t.at("word"))
      w.push_back(M1{(uint8_t)mj.at(0).get<int>(), mj.at(1).get<int>()});
    v.add_term(w, cyclo_from_json(t.at("coeff")));
  }
  return v;
}

json matpsdo_to_json(const MatPSDO& A) {
  json j;
  j["size"] = A.size();
  j["window"] = json::array({A.lo(), A.hi()});
  j["base"] = poly_to_json(A.base());
  json entries = json::array();
  for (int k = A.lo(); k <= A.hi(); ++k)
    for (long i = 0; i < A.size(); ++i)
      for (long jj = 0; jj < A.size(); ++jj) {
        const Frac& f = A.at(k, i, jj);
        if (f.is_zero()) continue;
        entries.push_back(json{{"order", k},
                               {"i", i},
                               {"j", jj},
                               {"num", poly_to_json(f.num)},
                               {"den_pow", f.pow}});
      }
  j["entries"] = entries;
  return j;
}

void emit(const Report& rep, bool structured) {
  if (structured) std::cout << rep.jsonl();
  else std::cout << rep.human();
}

// ---------------------------------------------------------------------------
// suites

Report suite_paper_examples() {
  Report rep;
  {
    QIdentityParams p;
    p.marker_window = 5;
    rep.add("jtp_to_q20", "Jacobi triple product", qidentity_verify("jtp", 40, p).ok);
    rep.add("qb_to_q20", "distinct = odd parts", qidentity_verify("qb", 40, p).ok);
    rep.add("cq_to_q12", "Weyl module identity", qidentity_verify("cq", 24, p).ok);
    p.marker_window = 4;
    rep.add("tet_to_q12", "charged symplectic boson identity",
            qidentity_verify("tet", 24, p).ok);
  }
  {
    WeylFrame f = build_frame({AlgType::A, 2, {2}, {}});
    rep.add("gl2_principal_hw", "principal realization",
            f.hdiag[0] == Rat(1, 4) && f.hdiag[1] == Rat(-1, 4) && verify_frame(f).all_pass());
  }
  {
    bool so28 =
        nilpotent_map({AlgType::D, 14, {}, {5, 5, 3, 1}}).blocks == std::vector<long>{11, 9, 7, 1} &&
        nilpotent_map({AlgType::D, 14, {}, {5, 4, 4, 1}}).blocks == std::vector<long>{11, 9, 7, 1};
    bool so9 =
        nilpotent_map({AlgType::B, 4, {}, {2, 2}}).blocks == std::vector<long>{5, 3, 1} &&
        nilpotent_map({AlgType::B, 4, {}, {2, 1, 1}}).blocks == std::vector<long>{5, 3, 1};
    bool sep = nilpotent_map_modified({AlgType::D, 14, {}, {5, 5, 3, 1}}).blocks ==
               std::vector<long>{11, 11, 5, 1};
    rep.add("so28_collision", "orbit map collisions", so28);
    rep.add("so9_collision", "orbit map collisions", so9);
    rep.add("so28_modified_separation", "modified orbit map", sep);
  }
  {
    SymbolicBD s = symbolic_bd_s1(10);
    const DiffCtx& ctx = s.ctx;
    auto entry = [&](const MatPSDO& A, int k, int i, int j) { return A.at(k, i, j).num; };
    GrassPoly a = entry(s.L, -1, 0, 0);
    GrassPoly e = entry(s.L, -2, 0, 0);
    MatPSDO gen = s.L.power(2, ctx).mul(s.D, ctx).plus_part();
    MatPSDO R2 = (gen.mul(s.L, ctx) - s.L.mul(gen, ctx)).truncated(-3, 1);
    rep.add("bd_symbolic_t2", "first-approach evolution equations",
            entry(R2, -1, 0, 0) == ctx.dx(e.scaled(Cyclo(2)) + ctx.dx(a)));
  }
  return rep;
}

Report suite_invariants(unsigned seed) {
  Report rep;
  std::mt19937 rng(seed);
  std::vector<AlgebraKind> kinds = {{Family::a, 1, 0}, {Family::a, 2, 0}, {Family::b, 1, 1},
                                    {Family::b, 0, 2}, {Family::d, 1, 1}, {Family::d, 1, 2}};
  for (const auto& kind : kinds) {
    std::vector<ModeOp> creation;
    for (int a = 1; a <= kind.s; ++a)
      for (int i2 : {-1, -3}) {
        creation.push_back({Species::PsiPlus, a, i2});
        creation.push_back({Species::PsiMinus, a, i2});
      }
    for (int c = kind.s + 1; c <= kind.s + kind.r; ++c)
      for (int i2 : {-2, -4}) creation.push_back({Species::PhiT, c, i2});
    bool ok = true;
    for (int it = 0; it < 3 && ok; ++it) {
      OrbitGen g;
      g.plus = {{Cyclo(1 + (long)(rng() % 3)), creation[rng() % creation.size()]}};
      g.minus = {{Cyclo(1 + (long)(rng() % 2)), creation[rng() % creation.size()]}};
      if (kind.family == Family::a) {
        g.plus[0].second.sp = Species::PsiPlus;
        g.minus[0].second.sp = Species::PsiMinus;
      }
      FockVector tau;
      try {
        tau = orbit_element(kind, {g}, 60);
      } catch (...) {
        continue;
      }
      if (!bilinear_residue(kind, tau, tau, 0).is_zero()) ok = false;
      TauFamily T = sigma_map(tau);
      HierarchySpec spec{kind, std::nullopt};
      if (!bilinear_is_zero(hirota_residual(spec, T, T, 0))) ok = false;
    }
    rep.add("orbit_bilinear_" + kind.str(), "fermionic + bosonic cross-check", ok);
  }
  return rep;
}

Report suite_reductions() {
  Report rep;
  {
    HierarchySpec spec{{Family::a, 1, 0}, ReductionTable{{2}, {}}};
    TauFamily T;
    T.kind = {Family::a, 1, 0};
    T.sec[Sector{0}] = GrassPoly::variable(t_var(1, 1));
    DressingSet ds = dressing_from_tau(spec, T, Sector{0}, {}, 9, DressKind::KP);
    LaxSet ls = lax_from_dressing(ds);
    ReducedOperator ro = reduced_operator(ds, ls);
    auto rc = reduction_constraint_residual(spec, T, 1);
    rep.add("kdv_differential", "lambda-KdV reduction", ro.differential);
    rep.add("kdv_constraint", "sum of derivative constraints", rc.consistent);
  }
  {
    AlgebraKind a2{Family::a, 2, 0};
    HierarchySpec spec{a2, ReductionTable{{1, 1}, {}}};
    TauFamily T;
    T.kind = a2;
    T.sec[Sector{0, 0}] = GrassPoly(1);
    DressingSet ds = dressing_from_tau(spec, T, Sector{0, 0}, {}, 7, DressKind::KP);
    LaxSet ls = lax_from_dressing(ds);
    rep.add("akns_differential", "two-component reduction",
            reduced_operator(ds, ls).differential);
  }
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computer algebra for multicomponent KP type hierarchies"};
  app.require_subcommand(1);
  bool structured = false;
  app.add_flag("--structured", structured, "emit line-oriented JSON records");

  auto* weyl = app.add_subcommand("weyl", "Weyl group conjugacy classes and frames");
  weyl->require_subcommand(1);
  std::string wtype = "A";
  long wrank = 1;
  std::string wlambda, wmu, wflavor = "d";
  bool modified = false;
  auto add_label_opts = [&](CLI::App* c, bool with_flavor) {
    c->add_option("--type", wtype, "algebra type A|B|C|D")->required();
    c->add_option("--rank", wrank, "rank parameter n")->required();
    c->add_option("--lambda", wlambda, "positive-cycle partition, comma separated");
    c->add_option("--mu", wmu, "negative-cycle partition, comma separated");
    if (with_flavor) c->add_option("--flavor", wflavor, "type B embedding flavor b|d");
  };
  auto* wclasses = weyl->add_subcommand("classes", "enumerate conjugacy classes");
  wclasses->add_option("--type", wtype)->required();
  wclasses->add_option("--rank", wrank)->required();
  auto* wframe = weyl->add_subcommand("frame", "build and verify a frame");
  add_label_opts(wframe, true);
  auto* wnil = weyl->add_subcommand("nilmap", "conjugacy class to nilpotent orbit");
  add_label_opts(wnil, false);
  wnil->add_flag("--modified", modified, "use the modified (injective on elliptic D) map");

  auto* qdim = app.add_subcommand("qdim", "q-series identities");
  auto* qverify = qdim->add_subcommand("verify", "verify an identity to a given order");
  std::string qid = "jtp";
  int qorder = 20;
  int qs = 1, qr = 0;
  std::string qlambda, qmu;
  qverify->add_option("--identity", qid)->required();
  qverify->add_option("--order", qorder, "q truncation order (integer powers)");
  qverify->add_option("--s", qs);
  qverify->add_option("--r", qr);
  qverify->add_option("--lambda", qlambda);
  qverify->add_option("--mu", qmu);

  auto* fock = app.add_subcommand("fock", "fermionic-picture checks");
  auto* fcheck = fock->add_subcommand("check", "bilinear residue of a tau vector");
  std::string ffam = "a", ftau;
  int fs = 1, fr = 0;
  long fpower = 0;
  std::string flambda, fmu;
  fcheck->add_option("--family", ffam, "a|b|c|d")->required();
  fcheck->add_option("--s", fs);
  fcheck->add_option("--r", fr);
  fcheck->add_option("--tau", ftau, "tau vector file (JSON)")->required();
  fcheck->add_option("--power", fpower, "reduction power p");
  fcheck->add_option("--lambda", flambda, "charged exponent table");
  fcheck->add_option("--mu", fmu, "neutral exponent table (2 mu)");

  auto* tau = app.add_subcommand("tau", "bosonization utilities");
  auto* tmap = tau->add_subcommand("sigma", "bosonize a Fock vector file");
  std::string tin, tout;
  tmap->add_option("--in", tin, "Fock vector file")->required();
  tmap->add_option("--out", tout, "output tau family file");

  auto* hir = app.add_subcommand("hirota", "bosonic bilinear identities");
  auto* hcheck = hir->add_subcommand("check", "residuals of a tau family");
  std::string htau, hpowers = "0";
  std::string hhier = "kp";
  std::string hlambda, hmu;
  hcheck->add_option("--hierarchy", hhier, "kp|bkp|dkp|ckp (informational; the kind is in the file)");
  hcheck->add_option("--tau", htau, "tau family file")->required();
  hcheck->add_option("--powers", hpowers, "powers, e.g. 0..3 or 0,2");
  hcheck->add_option("--lambda", hlambda);
  hcheck->add_option("--mu", hmu);

  auto* lax = app.add_subcommand("lax", "dressing and Lax operators");
  auto* lderive = lax->add_subcommand("derive", "build operators and run residual checks");
  std::string lhier = "kp", ltau, lflows = "t2,t3", lchecks = "sato,laxsato", lout;
  int ldepth = 8;
  std::string llambda, lmu;
  lderive->add_option("--hierarchy", lhier, "kp|bd1|ckp|bkp1")->required();
  lderive->add_option("--tau", ltau)->required();
  lderive->add_option("--depth", ldepth);
  lderive->add_option("--flows", lflows, "comma list like t2,t3");
  lderive->add_option("--check", lchecks, "sato,laxsato,adjoint,invariants");
  lderive->add_option("--out", lout, "write the Lax operator as JSON");
  auto* lreduce = lax->add_subcommand("reduce", "reduced operator checks");
  bool lcheckdiff = false;
  lreduce->add_option("--hierarchy", lhier)->required();
  lreduce->add_option("--tau", ltau)->required();
  lreduce->add_option("--depth", ldepth);
  lreduce->add_option("--lambda", llambda)->required();
  lreduce->add_option("--mu", lmu);
  lreduce->add_flag("--check-differential", lcheckdiff);

  auto* suite = app.add_subcommand("suite", "batch verification suites");
  std::string sname = "paper-examples";
  unsigned sseed = 1;
  suite->add_option("name", sname, "paper-examples|invariants|reductions")->required();
  suite->add_option("--seed", sseed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*wclasses) {
      auto t = algtype_parse(wtype);
      if (!t) throw std::runtime_error("unknown type " + wtype);
      for (const auto& lab : enumerate_classes(*t, wrank)) {
        if (structured) {
          json j{{"type", algtype_str(lab.type)}, {"n", lab.n}, {"lambda", lab.lambda}, {"mu", lab.mu}};
          std::cout << j.dump() << "\n";
        } else {
          std::cout << lab.str() << "\n";
        }
      }
      return 0;
    }
    if (*wframe) {
      auto t = algtype_parse(wtype);
      if (!t) throw std::runtime_error("unknown type " + wtype);
      WeylClassLabel lab{*t, wrank, parse_partition(wlambda), parse_partition(wmu)};
      WeylFrame f = build_frame(lab, wflavor.empty() ? 'd' : wflavor[0]);
      FrameReport fr = verify_frame(f);
      Report rep;
      for (auto& c : fr.checks) rep.add(c.name, lab.str(), c.pass, c.detail);
      std::cout << "order N = " << f.order << "\n";
      std::cout << "h_w diagonal:";
      for (auto& h : f.hdiag) std::cout << " " << h.get_str();
      std::cout << "\nS =\n" << f.frame.str();
      emit(rep, structured);
      return rep.all_pass() ? 0 : 1;
    }
    if (*wnil) {
      auto t = algtype_parse(wtype);
      if (!t) throw std::runtime_error("unknown type " + wtype);
      WeylClassLabel lab{*t, wrank, parse_partition(wlambda), parse_partition(wmu)};
      JordanType jt = modified ? nilpotent_map_modified(lab) : nilpotent_map(lab);
      std::string out;
      for (size_t i = 0; i < jt.blocks.size(); ++i)
        out += (i ? "," : "") + std::to_string(jt.blocks[i]);
      std::cout << out << "\n";
      return 0;
    }
    if (*qverify) {
      QIdentityParams p;
      p.s = qs;
      p.r = qr;
      p.lambda = parse_partition(qlambda);
      p.mu = parse_partition(qmu);
      p.marker_window = 5;
      auto res = qidentity_verify(qid, 2 * qorder, p);
      Report rep;
      rep.add("identity_" + qid, "order " + std::to_string(qorder), res.ok, res.detail);
      emit(rep, structured);
      return res.ok ? 0 : 1;
    }
    if (*fcheck) {
      std::ifstream in(ftau);
      if (!in) throw std::runtime_error("cannot open " + ftau);
      json j;
      in >> j;
      FockVector v = fock_from_json(j);
      AlgebraKind kind{(Family)ffam[0], fs, fr};
      ReductionTable red;
      bool has_red = !flambda.empty() || !fmu.empty();
      if (has_red) {
        red.n_charged = parse_partition(flambda);
        red.n_neutral = parse_partition(fmu);
      }
      FockTensor t = bilinear_residue(kind, v, v, fpower, has_red ? &red : nullptr);
      Report rep;
      rep.add("bilinear_residue_p" + std::to_string(fpower), kind.str(), t.is_zero(),
              t.is_zero() ? "" : t.str());
      emit(rep, structured);
      return t.is_zero() ? 0 : 1;
    }
    if (*tmap) {
      std::ifstream in(tin);
      if (!in) throw std::runtime_error("cannot open " + tin);
      json j;
      in >> j;
      FockVector v = fock_from_json(j);
      TauFamily T = sigma_map(v);
      json out = tau_to_json(T);
      if (tout.empty()) std::cout << out.dump(2) << "\n";
      else {
        std::ofstream of(tout);
        of << out.dump(2) << "\n";
      }
      return 0;
    }
    if (*hcheck) {
      std::ifstream in(htau);
      if (!in) throw std::runtime_error("cannot open " + htau);
      json j;
      in >> j;
      TauFamily T = tau_from_json(j);
      HierarchySpec spec{T.kind, std::nullopt};
      if (!hlambda.empty() || !hmu.empty())
        spec.reduction = ReductionTable{parse_partition(hlambda), parse_partition(hmu)};
      std::vector<long> powers;
      auto dots = hpowers.find("..");
      if (dots != std::string::npos) {
        long a = std::stol(hpowers.substr(0, dots));
        long b = std::stol(hpowers.substr(dots + 2));
        for (long p = a; p <= b; ++p) powers.push_back(p);
      } else {
        for (long p : parse_partition(hpowers)) powers.push_back(p);
      }
      Report rep;
      std::vector<CheckRecord> slots(powers.size());
      parallel_for(powers.size(), [&](size_t i) {
        BilinearPoly b = hirota_residual(spec, T, T, powers[i]);
        slots[i] = {"hirota_residual_p" + std::to_string(powers[i]), T.kind.str(),
                    bilinear_is_zero(b), ""};
      });
      for (auto& s : slots) rep.add(s.name, s.anchor, s.pass, s.detail);
      emit(rep, structured);
      return rep.all_pass() ? 0 : 1;
    }
    if (*lderive || *lreduce) {
      std::ifstream in(ltau);
      if (!in) throw std::runtime_error("cannot open " + ltau);
      json j;
      in >> j;
      TauFamily T = tau_from_json(j);
      DressKind dk = DressKind::KP;
      if (lhier == "bd1") dk = DressKind::BDFirst;
      else if (lhier == "ckp") dk = DressKind::CKP;
      else if (lhier == "bkp1") dk = DressKind::BKP1;
      HierarchySpec spec{T.kind, std::nullopt};
      if (*lreduce || !llambda.empty())
        spec.reduction = ReductionTable{parse_partition(llambda), parse_partition(lmu)};
      Sector alpha(T.kind.family == Family::c ? 0 : T.kind.s, 0);
      std::vector<int> ell((T.kind.r + 1) / 2, 0);
      DressingSet ds = dressing_from_tau(spec, T, alpha, ell, ldepth, dk);
      LaxSet ls = lax_from_dressing(ds);
      Report rep;
      if (*lreduce) {
        ReducedOperator ro = reduced_operator(ds, ls);
        rep.add("reduced_operator_differential", "integral part vanishes", ro.differential,
                ro.detail);
        if (!ro.differential)
          rep.add("constrained_form", "W-bilinear integral part", ro.constrained_form_match,
                  ro.detail);
        emit(rep, structured);
        if (lcheckdiff) return ro.differential ? 0 : 1;
        return (ro.differential || ro.constrained_form_match) ? 0 : 1;
      }
      for (const std::string& which : {std::string("sato"), std::string("laxsato"),
                                       std::string("adjoint"), std::string("invariants")}) {
        if (lchecks.find(which) == std::string::npos) continue;
        if (which == "invariants") {
          Report r2 = dressing_invariants(ds);
          for (auto& c : r2.records()) rep.add(c.name, c.anchor, c.pass, c.detail);
          continue;
        }
        if (which == "adjoint") {
          Report r2 = adjoint_constraints(ds, ls);
          for (auto& c : r2.records()) rep.add(c.name, c.anchor, c.pass, c.detail);
          continue;
        }
        std::string digits;
        std::vector<int> flows;
        for (char ch : lflows) {
          if (ch >= '0' && ch <= '9') digits += ch;
          else if (!digits.empty()) {
            flows.push_back(std::stoi(digits));
            digits.clear();
          }
        }
        if (!digits.empty()) flows.push_back(std::stoi(digits));
        for (int f : flows) {
          if (which == "sato") {
            MatPSDO res = sato_wilson_residual(ds, 1, f);
            rep.add("sato_wilson_t" + std::to_string(f), lhier,
                    res.truncated(-(ldepth - f - 2), 0).window_zero());
          } else {
            auto rs = lax_sato_residual(ds, ls, 1, f);
            bool ok = true;
            for (auto& r : rs)
              if (!r.truncated(-(ldepth - f - 3), r.hi()).window_zero()) ok = false;
            rep.add("lax_sato_t" + std::to_string(f), lhier, ok);
          }
        }
      }
      if (!lout.empty()) {
        std::ofstream of(lout);
        of << matpsdo_to_json(ls.L).dump(2) << "\n";
      }
      emit(rep, structured);
      return rep.all_pass() ? 0 : 1;
    }
    if (*suite) {
      Report rep;
      if (sname == "paper-examples") rep = suite_paper_examples();
      else if (sname == "invariants") rep = suite_invariants(sseed);
      else if (sname == "reductions") rep = suite_reductions();
      else throw std::runtime_error("unknown suite " + sname);
      emit(rep, structured);
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
