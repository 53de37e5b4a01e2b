#include "wittdiff/jobspec.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "wittdiff/biring.hpp"
#include "wittdiff/witt_interp.hpp"

namespace wittdiff {

using nlohmann::json;

namespace {

json poly_json(const std::vector<std::string>& vars, const FqPoly& f) {
  json out;
  out["poly"] = poly_str(f, vars);
  json table = json::array();
  for (const auto& t : f.terms()) {
    json exps = json::array();
    for (auto e : t.m.e) exps.push_back(static_cast<int>(e));
    table.push_back(json::array({exps, t.c.str()}));
  }
  out["table"] = std::move(table);
  return out;
}

json class_json(const GluedScheme& S, const CechClass& c) {
  json out;
  out["degree"] = c.degree;
  out["sheaf"] = c.sheaf == Sheaf::O            ? "O"
                 : c.sheaf == Sheaf::HomFOmega  ? "Hom(F*Omega,O)"
                                                : "F*Omega";
  out["window"] = c.window;
  json charts = json::object();
  for (const auto& [ci, vals] : c.chart_values) {
    const auto& chart = S.charts()[static_cast<size_t>(ci)];
    json v = json::object();
    if (c.sheaf == Sheaf::O) {
      v["value"] = poly_json(chart.A->vars(), vals[0]);
    } else {
      for (size_t m = 0; m < vals.size(); ++m)
        v[chart.A->vars()[m]] = poly_json(chart.A->vars(), vals[m]);
    }
    charts[chart.name] = std::move(v);
  }
  if (!charts.empty()) out["charts"] = std::move(charts);
  json pairs = json::object();
  for (const auto& [key, vals] : c.pair_values) {
    const auto& ov = S.overlap_at(key.first, key.second);
    std::string tag = S.charts()[static_cast<size_t>(key.first)].name + "," +
                      S.charts()[static_cast<size_t>(key.second)].name;
    json v = json::object();
    if (c.sheaf == Sheaf::O) {
      v["value"] = poly_json(ov.O->vars(), vals[0]);
    } else {
      for (size_t l = 0; l < vals.size(); ++l)
        v[ov.O->vars()[l]] = poly_json(ov.O->vars(), vals[l]);
    }
    pairs[tag] = std::move(v);
  }
  if (!pairs.empty()) out["pairs"] = std::move(pairs);
  return out;
}

// Deterministic relation-killing perturbation of a chart splitting, used to
// decouple the Deligne-Illusie lift choices from the Kodaira-Spencer ones.
Splitting perturbed_splitting(const Chart& chart, const Splitting& h) {
  const auto& A0 = chart.A->mod_p();
  Splitting out = h;
  if (chart.M.relations.empty()) {
    if (chart.A->nvars() > 0) out.values[1] = A0->nf(out.values[1] + A0->var(0).pow(2));
    return out;
  }
  const auto& r = chart.M.relations[0].coeffs;
  int k1 = -1, k2 = -1;
  for (int k = 1; k < chart.M.ngens(); ++k)
    if (!r[static_cast<size_t>(k)].is_zero()) {
      if (k1 < 0) {
        k1 = k;
      } else {
        k2 = k;
        break;
      }
    }
  FqPoly t = chart.A->nvars() > 0 ? A0->var(0) : A0->one();
  if (k1 >= 0 && k2 >= 0) {
    out.values[static_cast<size_t>(k1)] =
        A0->nf(out.values[static_cast<size_t>(k1)] + r[static_cast<size_t>(k2)] * t);
    out.values[static_cast<size_t>(k2)] =
        A0->nf(out.values[static_cast<size_t>(k2)] - r[static_cast<size_t>(k1)] * t);
  }
  return out;
}

std::string require_string(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string())
    throw InputError(std::string("job document: missing string field '") + key + "'");
  return doc[key].get<std::string>();
}

}  // namespace

GluedScheme scheme_from_json(const json& doc) {
  if (!doc.contains("p") || !doc["p"].is_number_integer())
    throw InputError("job document: missing prime 'p'");
  long p = doc["p"].get<long>();
  int m = doc.value("m", 1);
  FqPtr field;
  if (doc.contains("modulus")) {
    std::vector<long> low;
    for (const auto& c : doc["modulus"]) low.push_back(c.get<long>());
    field = Fq::make(p, low);
  } else {
    field = Fq::make(p, m);
  }

  if (!doc.contains("charts") || !doc["charts"].is_array() || doc["charts"].empty())
    throw InputError("job document: 'charts' must be a nonempty array");
  std::vector<std::pair<std::string, FPAlgebraPtr>> charts;
  for (const auto& cj : doc["charts"]) {
    std::string name = require_string(cj, "name");
    std::vector<std::string> vars;
    for (const auto& v : cj.at("vars")) vars.push_back(v.get<std::string>());
    auto ambient = FPAlgebra::make(field, vars, {});
    std::vector<W2Poly> gens;
    if (cj.contains("relations"))
      for (const auto& r : cj["relations"]) gens.push_back(ambient->parse(r.get<std::string>()));
    charts.emplace_back(name, FPAlgebra::make(field, vars, std::move(gens)));
  }

  std::vector<OverlapSpec> ovs;
  if (doc.contains("overlaps"))
    for (const auto& oj : doc["overlaps"]) {
      OverlapSpec ov;
      ov.chart_i = oj.at("charts").at(0).get<std::string>();
      ov.chart_j = oj.at("charts").at(1).get<std::string>();
      ov.s_i = require_string(oj, "s");
      ov.s_j = require_string(oj, "t");
      for (const auto& [k, v] : oj.at("to_first").items()) ov.to_i[k] = v.get<std::string>();
      for (const auto& [k, v] : oj.at("to_second").items()) ov.to_j[k] = v.get<std::string>();
      ovs.push_back(std::move(ov));
    }

  std::vector<TripleSpec> trs;
  if (doc.contains("triples"))
    for (const auto& tj : doc["triples"]) {
      TripleSpec tr;
      tr.chart_i = tj.at("charts").at(0).get<std::string>();
      tr.chart_j = tj.at("charts").at(1).get<std::string>();
      tr.chart_k = tj.at("charts").at(2).get<std::string>();
      tr.extra_loc = require_string(tj, "loc");
      for (const auto& [k, v] : tj.at("from_ik").items()) tr.from_ik[k] = v.get<std::string>();
      for (const auto& [k, v] : tj.at("from_jk").items()) tr.from_jk[k] = v.get<std::string>();
      for (const auto& [k, v] : tj.at("pre_jk").items()) tr.pre_jk[k] = v.get<std::string>();
      trs.push_back(std::move(tr));
    }

  return GluedScheme::build(std::move(charts), ovs, trs);
}

namespace {

CechClass section_from_json(const GluedScheme& S, const json& doc, long window) {
  if (!doc.contains("section"))
    throw InputError("this command needs a 'section' object (per-chart F*Omega coefficients)");
  CechClass om;
  om.degree = 0;
  om.sheaf = Sheaf::FOmega;
  om.window = window;
  for (const auto& chart : S.charts()) {
    if (!doc["section"].contains(chart.name))
      throw InputError("section: missing data for chart '" + chart.name + "'");
    const auto& arr = doc["section"][chart.name];
    if (static_cast<int>(arr.size()) != chart.A->nvars())
      throw InputError("section: chart '" + chart.name + "' needs one coefficient per variable");
    std::vector<FqPoly> vals;
    for (const auto& s : arr) vals.push_back(chart.A->mod_p()->parse(s.get<std::string>()));
    om.chart_values[S.chart_index(chart.name)] = std::move(vals);
  }
  return om;
}

Report cmd_omega(const GluedScheme& S) {
  Report rep;
  std::ostringstream os;
  json charts = json::array();
  for (const auto& chart : S.charts()) {
    json cj;
    cj["name"] = chart.name;
    json gens = json::array();
    gens.push_back("d p");
    for (const auto& v : chart.A->vars()) gens.push_back("d " + v);
    cj["generators"] = std::move(gens);
    json rels = json::array();
    bool free = true;
    for (const auto& r : chart.M.relations) {
      json row = json::array();
      bool zero = true;
      for (const auto& c : r.coeffs) {
        row.push_back(poly_str(c, chart.A->vars()));
        zero = zero && c.is_zero();
      }
      free = free && zero;
      rels.push_back(std::move(row));
    }
    cj["relations"] = std::move(rels);
    cj["free"] = free;
    cj["rank"] = chart.A->nvars() + 1;
    os << "chart " << chart.name << ": Omega^{1,tot} ";
    if (free)
      os << "free of rank " << chart.A->nvars() + 1 << "\n";
    else
      os << "presented with " << chart.M.relations.size() << " relation(s) on "
         << chart.A->nvars() + 1 << " generators\n";
    charts.push_back(std::move(cj));
  }
  rep.machine["command"] = "omega";
  rep.machine["charts"] = std::move(charts);
  rep.text = os.str();
  return rep;
}

Report cmd_lift(const GluedScheme& S, const JobOptions& opts) {
  Report rep;
  rep.machine["command"] = "lift";
  auto res = global_frobenius_lift(S, opts.window);
  std::ostringstream os;
  if (!res) {
    long w = opts.window < 0 ? S.default_window() : opts.window;
    rep.exit_code = 2;
    rep.machine["found"] = false;
    rep.machine["window"] = w;
    os << "no global Frobenius lift at window " << w;
    if (opts.window < 0) os << " (nor at " << 2 * w << ")";
    os << ": Absent\n";
    rep.text = os.str();
    return rep;
  }
  rep.machine["found"] = true;
  rep.machine["window"] = res->window;
  json charts = json::object();
  os << "global Frobenius lift found (window " << res->window << ")\n";
  for (size_t ci = 0; ci < S.charts().size(); ++ci) {
    const auto& chart = S.charts()[ci];
    json imgs = json::object();
    for (int v = 0; v < chart.A->nvars(); ++v) {
      std::string img = poly_str(res->lifts[ci].images[static_cast<size_t>(v)], chart.A->vars());
      imgs[chart.A->vars()[static_cast<size_t>(v)]] = img;
      os << "  " << chart.name << ": " << chart.A->vars()[static_cast<size_t>(v)] << " -> " << img
         << "\n";
    }
    charts[chart.name] = std::move(imgs);
  }
  rep.machine["charts"] = std::move(charts);
  rep.text = os.str();
  return rep;
}

Report cmd_kappa(const GluedScheme& S, const JobOptions& opts) {
  Report rep;
  rep.machine["command"] = "kappa";
  ChartSplittings hs;
  try {
    hs = compute_chart_splittings(S, opts.degree_bound);
  } catch (const GluingError& e) {
    rep.exit_code = 2;
    rep.machine["obstructed"] = true;
    rep.machine["error"] = e.what();
    rep.text = std::string(e.what()) + "\n";
    return rep;
  }
  CechClass kappa = kodaira_spencer(S, opts.window, &hs);
  rep.machine["class_coefficients"] = class_json(S, kappa);
  rep.machine["window"] = kappa.window;
  rep.machine["zero_cocycle"] = kappa.is_zero();
  rep.text = kappa.is_zero() ? "kappa = 0 as a cocycle\n" : "kappa computed (nonzero cocycle)\n";
  return rep;
}

Report cmd_di(const GluedScheme& S, const JobOptions& opts) {
  Report rep;
  rep.machine["command"] = "di";
  ChartSplittings hs;
  try {
    hs = compute_chart_splittings(S, opts.degree_bound);
  } catch (const GluingError& e) {
    rep.exit_code = 2;
    rep.machine["obstructed"] = true;
    rep.machine["error"] = e.what();
    rep.text = std::string(e.what()) + "\n";
    return rep;
  }
  std::vector<FrobLift> lifts;
  for (size_t ci = 0; ci < S.charts().size(); ++ci)
    lifts.push_back(splitting_to_frobenius(S.charts()[ci].M, hs.h[ci]));
  CechClass h = deligne_illusie(S, lifts, opts.window);
  rep.machine["class_coefficients"] = class_json(S, h);
  rep.machine["window"] = h.window;
  rep.machine["zero_cocycle"] = h.is_zero();
  rep.text = h.is_zero() ? "Deligne-Illusie class = 0 as a cocycle\n"
                         : "Deligne-Illusie cocycle computed (nonzero)\n";
  return rep;
}

Report cmd_compare(const GluedScheme& S, const JobOptions& opts) {
  Report rep;
  rep.machine["command"] = "compare";
  ChartSplittings hs;
  try {
    hs = compute_chart_splittings(S, opts.degree_bound);
  } catch (const GluingError& e) {
    rep.exit_code = 2;
    rep.machine["obstructed"] = true;
    rep.machine["error"] = e.what();
    rep.text = std::string(e.what()) + "\n";
    return rep;
  }
  CechClass kappa = kodaira_spencer(S, opts.window, &hs);
  // Deligne-Illusie from independently perturbed lift choices
  std::vector<FrobLift> lifts;
  for (size_t ci = 0; ci < S.charts().size(); ++ci) {
    Splitting hp = perturbed_splitting(S.charts()[ci], hs.h[ci]);
    lifts.push_back(splitting_to_frobenius(S.charts()[ci].M, hp));
  }
  CechClass h = deligne_illusie(S, lifts, opts.window);
  auto res = classes_equal_up_to_sign(S, kappa, h);
  rep.machine["class_coefficients"] = class_json(S, kappa);
  rep.machine["di_class"] = class_json(S, h);
  rep.machine["verdict"] = res.equal;
  rep.machine["window"] = res.window;
  rep.machine["stabilized"] = res.stabilized;
  if (res.equal) rep.machine["witness"] = class_json(S, res.witness);
  rep.exit_code = res.equal ? 0 : 2;
  std::ostringstream os;
  os << "kappa + h is " << (res.equal ? "" : "NOT ") << "a coboundary at window " << res.window
     << (res.stabilized ? "" : " (window was enlarged)") << "\n";
  rep.text = os.str();
  return rep;
}

Report cmd_gm(const GluedScheme& S, const json& doc, const JobOptions& opts) {
  Report rep;
  rep.machine["command"] = "gm";
  long w = opts.window < 0 ? S.default_window() : opts.window;
  CechClass om = section_from_json(S, doc, w);
  ChartSplittings hs;
  try {
    hs = compute_chart_splittings(S, opts.degree_bound);
  } catch (const GluingError& e) {
    rep.exit_code = 2;
    rep.machine["obstructed"] = true;
    rep.machine["error"] = e.what();
    rep.text = std::string(e.what()) + "\n";
    return rep;
  }
  CechClass gm_plain = gauss_manin(S, om, w, false, &hs);
  CechClass gm_sigma = gauss_manin(S, om, w, true, &hs);
  CechClass kappa = kodaira_spencer(S, w, &hs);
  CechClass cup = cup_with(S, kappa, om);
  bool sigma_exact = true;
  for (const auto& [key, v] : gm_sigma.pair_values) {
    const auto& cv = cup.pair_values.at(key);
    const auto& O0 = S.overlap_at(key.first, key.second).O->mod_p();
    sigma_exact = sigma_exact && O0->nf(v[0] - cv[0]).is_zero();
  }
  auto res = classes_equal_up_to_sign(S, gm_plain, cup.negate());
  rep.machine["class_coefficients"] = class_json(S, gm_plain);
  rep.machine["cup_class"] = class_json(S, cup);
  rep.machine["sigma_lift_exact_match"] = sigma_exact;
  rep.machine["equal_mod_coboundary"] = res.equal;
  rep.machine["window"] = res.window;
  rep.machine["stabilized"] = res.stabilized;
  if (res.equal) rep.machine["witness"] = class_json(S, res.witness);
  rep.exit_code = (res.equal && sigma_exact) ? 0 : 2;
  std::ostringstream os;
  os << "Gauss-Manin class computed; cup product cross-check "
     << (res.equal ? "agrees modulo coboundaries" : "DISAGREES") << "; sigma-lift cocycles "
     << (sigma_exact ? "match exactly" : "do NOT match") << "\n";
  rep.text = os.str();
  return rep;
}

Report cmd_axioms(uint64_t seed) {
  Report rep;
  rep.machine["command"] = "axioms";
  rep.machine["seed"] = seed;
  std::ostringstream os;
  json suites = json::array();
  auto record = [&](const std::string& name, bool ok) {
    os << (ok ? "ok   " : "FAIL ") << name << "\n";
    suites.push_back(json{{"name", name}, {"ok", ok}});
    if (!ok) rep.exit_code = 1;
  };
  std::mt19937_64 rng(seed);

  {
    bool ok = true;
    for (long p : {3L, 5L}) {
      auto f = Fq::make(p);
      long p2 = p * p;
      for (long a = 0; a < p2 && ok; ++a)
        for (long b = 0; b < p2 && ok; ++b) {
          W2Elem wa = w2_from_zp2(f, a), wb = w2_from_zp2(f, b);
          ok = ok && w2_to_zp2(wa + wb) == (a + b) % p2 && w2_to_zp2(wa * wb) == (a * b) % p2;
        }
    }
    record("w2-bijection-exhaustive-p3-p5", ok);
  }

  {
    auto f3 = Fq::make(3);
    auto tmp = FqAlgebra::make(f3, {"t"}, {});
    auto Dt = FqAlgebra::make(f3, {"t"}, {tmp->parse("t^3")});
    bool ok = true;
    for (const char* cs : {"0", "1", "2", "t"}) {
      FqPoly c = Dt->parse(cs);
      for (int i = 0; i < 300 && ok; ++i) {
        auto rnd = [&] {
          return uc_make(Dt, Dt->random_element(rng, 2), Dt->random_element(rng, 2), c);
        };
        UCElem a = rnd(), b = rnd(), d = rnd();
        ok = ok && uc_eq(uc_add(a, b), uc_add(b, a)) &&
             uc_eq(uc_add(uc_add(a, b), d), uc_add(a, uc_add(b, d))) &&
             uc_eq(uc_mul(uc_mul(a, b), d), uc_mul(a, uc_mul(b, d))) &&
             uc_eq(uc_mul(a, uc_add(b, d)), uc_add(uc_mul(a, b), uc_mul(a, d)));
      }
    }
    record("uc-ring-axioms-random", ok);
  }

  {
    auto f3 = Fq::make(3);
    auto F = FPAlgebra::make(f3, {"x", "y"}, {});
    auto M = omega_tot(F);
    auto F0 = F->mod_p();
    bool ok = true;
    auto rand_poly = [&] {
      W2Poly r = F->zero();
      auto mons = F0->staircase(3);
      for (const auto& mn : mons)
        if (rng() % 3 == 0) r.add_term(mn, W2Elem(f3->random(rng), f3->random(rng)));
      return r;
    };
    for (int i = 0; i < 200 && ok; ++i) {
      W2Poly a = rand_poly(), b = rand_poly();
      DiffElem lhs = dtot_expand(M, a + b);
      DiffElem rhs = M.add(M.add(dtot_expand(M, a), dtot_expand(M, b)),
                           M.scale(F0->nf(cp_eval(F->reduce0(a), F->reduce0(b), 3)),
                                   alpha(M, F0->one())));
      ok = ok && M.sub(lhs, rhs).is_zero();
      DiffElem lhs2 = dtot_expand(M, a * b);
      FqPoly a0p = F0->nf(F->reduce0(a).is_zero() ? F0->zero() : F->reduce0(a).pow(3));
      FqPoly b0p = F0->nf(F->reduce0(b).is_zero() ? F0->zero() : F->reduce0(b).pow(3));
      DiffElem rhs2 = M.add(M.scale(b0p, dtot_expand(M, a)), M.scale(a0p, dtot_expand(M, b)));
      ok = ok && M.sub(lhs2, rhs2).is_zero();
    }
    record("dtot-rules-free-algebra", ok);
  }

  {
    auto f3 = Fq::make(3);
    auto tmp = FqAlgebra::make(f3, {"t"}, {});
    auto Dt = FqAlgebra::make(f3, {"t"}, {tmp->parse("t^4")});
    auto Q = make_biring(f3, f3->from_int(2));
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      BiringPoint f = make_point(Dt, Dt->random_element(rng, 3), Dt->random_element(rng, 3));
      BiringPoint g = make_point(Dt, Dt->random_element(rng, 3), Dt->random_element(rng, 3));
      ok = ok &&
           uc_eq(point_to_uc(Q, point_ops(Q, f, g, PointOp::Add)),
                 uc_add(point_to_uc(Q, f), point_to_uc(Q, g))) &&
           uc_eq(point_to_uc(Q, point_ops(Q, f, g, PointOp::Mul)),
                 uc_mul(point_to_uc(Q, f), point_to_uc(Q, g)));
    }
    record("biring-representation", ok);
  }

  {
    auto f3 = Fq::make(3);
    auto A = FPAlgebra::make(f3, {"x"}, {});
    auto M = omega_tot(A);
    bool ok = true;
    for (int i = 0; i < 20 && ok; ++i) {
      Splitting h{{A->mod_p()->one(), A->mod_p()->random_element(rng, 4)}};
      FrobLift ph = splitting_to_frobenius(M, h);
      Splitting back = frobenius_to_splitting(M, ph);
      ok = ok && back.values[1] == h.values[1];
    }
    record("splitting-frobenius-roundtrip", ok);
  }

  rep.machine["suites"] = std::move(suites);
  rep.text = os.str();
  return rep;
}

}  // namespace

Report run_job(const json& doc, const std::string& command, const JobOptions& opts) {
  try {
    if (command == "axioms") return cmd_axioms(opts.seed);
    GluedScheme S = scheme_from_json(doc);
    S.glue_check();
    if (command == "omega") return cmd_omega(S);
    if (command == "lift") return cmd_lift(S, opts);
    if (command == "kappa") return cmd_kappa(S, opts);
    if (command == "di") return cmd_di(S, opts);
    if (command == "compare") return cmd_compare(S, opts);
    if (command == "gm") return cmd_gm(S, doc, opts);
    throw InputError("unknown command '" + command +
                     "' (expected omega|lift|kappa|di|compare|gm|axioms)");
  } catch (const Error& e) {
    Report rep;
    rep.exit_code = 1;
    rep.machine["command"] = command;
    rep.machine["error"] = e.what();
    rep.text = std::string("error: ") + e.what() + "\n";
    return rep;
  }
}

Report run_job_file(const std::string& path, const std::string& command, const JobOptions& opts) {
  json doc;
  if (command != "axioms") {
    std::ifstream in(path);
    if (!in) {
      Report rep;
      rep.exit_code = 1;
      rep.machine["error"] = "cannot open input file: " + path;
      rep.text = "error: cannot open input file: " + path + "\n";
      return rep;
    }
    try {
      in >> doc;
    } catch (const json::exception& e) {
      Report rep;
      rep.exit_code = 1;
      rep.machine["error"] = std::string("JSON parse error: ") + e.what();
      rep.text = std::string("error: JSON parse error: ") + e.what() + "\n";
      return rep;
    }
  }
  return run_job(doc, command, opts);
}

}  // namespace wittdiff
