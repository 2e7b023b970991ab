// Command-line front end. Every command writes a CSV table (stdout, or --out)
// and, with --out, a JSON sidecar next to it holding the configuration echo,
// the system hash and the gate constants.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vdc/vdc.hpp"

namespace {

using namespace vdc;
using ojson = nlohmann::ordered_json;

struct Config {
  std::string system_path;
  std::optional<double> B;
  std::vector<double> B_sweep;
  std::optional<double> xi;
  unsigned m = 0;
  std::vector<std::uint64_t> primes;
  std::vector<std::string> moduli;
  std::vector<std::int64_t> y;
  double tol = 2.0;
  double gate_const = 8.0;
  double slice_threshold = 0.5;
  unsigned slice_max_norm = 3;
  unsigned lambda_max = 3;
  std::uint64_t budget = gb::kDefaultBudget;
  std::uint64_t enum_budget = kDefaultEnumerationBudget;
  std::string out;
  std::uint64_t seed = 1;
  std::int64_t Ybound = 2;
  // bounds
  unsigned n = 0, r = 1, d = 4;
  std::vector<unsigned> rs;
  std::string s_star = "0";
};

struct Output {
  CsvTable table;
  ojson extra = ojson::object();
};

std::string str(const Integer& v) { return v.str(); }
std::string str(const Rational& v) { return to_string(v); }
std::string str(double v) { return format_double(v); }
std::string str(bool v) { return v ? "true" : "false"; }
template <typename T>
std::string str(const std::vector<T>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}
std::string str_int(const std::vector<Integer>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i].str();
  return s;
}

SystemFile load(const Config& c) {
  if (c.system_path.empty()) throw InvalidInput("--system is required");
  return parse_system(c.system_path);
}

std::vector<double> sweep(const Config& c) {
  if (!c.B_sweep.empty()) return c.B_sweep;
  if (c.B) return {*c.B};
  throw InvalidInput("--B or --B-sweep is required");
}

EngineOptions engine(const Config& c) { return {c.tol, c.gate_const, c.budget, c.enum_budget}; }

std::int64_t as_box(double B) {
  if (B < 0 || B != std::floor(B)) throw InvalidInput("B must be a non-negative integer for unweighted counts");
  return static_cast<std::int64_t>(B);
}

Output cmd_analyze(const Config& c, const SystemFile& sf) {
  if (c.primes.empty()) throw InvalidInput("--primes is required");
  Output o{CsvTable({"p", "rho", "s", "dim", "proj_count", "sing_count", "degenerate", "smooth_ci"})};
  for (auto p : c.primes) {
    const auto v = variety_profile(sf.system, p, {true, true, c.budget});
    o.table.add({std::to_string(p), std::to_string(v.rho), std::to_string(v.s), std::to_string(v.dim),
                 std::to_string(v.proj_count), std::to_string(v.sing_count), str(v.degenerate),
                 str(is_smooth_ci(v, sf.system.size()))});
  }
  return o;
}

Output cmd_count(const Config& c, const SystemFile& sf) {
  Output o{CsvTable({"B", "N", "visited"})};
  for (double B : sweep(c)) {
    const auto res = count_points(sf.system, as_box(B), {c.enum_budget});
    o.table.add({std::to_string(as_box(B)), std::to_string(res.count), std::to_string(res.visited)});
  }
  return o;
}

Output cmd_count_mod(const Config& c, const SystemFile& sf) {
  if (c.moduli.empty()) throw InvalidInput("--q is required (one modulus, or one per member)");
  std::vector<Integer> q;
  for (const auto& s : c.moduli) q.emplace_back(s);
  std::string qs;
  for (std::size_t i = 0; i < q.size(); ++i) qs += (i ? " " : "") + q[i].str();
  Output o{CsvTable({"B", "q", "N", "visited"})};
  for (double B : sweep(c)) {
    const auto res = count_congruence(sf.system, as_box(B), q, {c.enum_budget});
    o.table.add({std::to_string(as_box(B)), qs, std::to_string(res.count), std::to_string(res.visited)});
  }
  return o;
}

Output cmd_bounds(const Config& c) {
  if (c.n == 0) throw InvalidInput("--n is required");
  Output o{CsvTable({"kind", "n", "r", "degrees", "m", "eta", "exponent", "admissible", "violated", "D_prime", "Delta",
                     "R", "kappa", "threshold"})};
  auto row = [&](const std::string& kind, const ExponentReport& e, const std::string& degs, const std::string& m,
                 const std::string& R, const std::string& k) {
    o.table.add({kind, std::to_string(c.n), std::to_string(c.r), degs, m, str(e.eta), str(e.exponent), str(e.admissible),
                 e.violated, str(e.D_prime), str(e.Delta), R, k, str(e.threshold)});
  };
  if (c.rs.empty()) {
    const auto e = eta_same(c.n, c.r, c.d);
    std::vector<unsigned> rs(c.d - 1, 0);
    rs.back() = c.r;
    const auto rk = script_R_kappa(rs, c.m);
    row("same_degree", e, "d=" + std::to_string(c.d), std::to_string(c.m), str(rk.R), str(rk.kappa));
    const auto cmp = compare_thresholds(c.d, c.r, Integer(c.s_star));
    o.extra["thresholds"] = {{"birch_min_n", cmp.birch.str()},
                             {"same_degree_min_n", cmp.same_degree.str()},
                             {"mixed_min_n", cmp.mixed.str()},
                             {"s_star", c.s_star}};
    o.table.add({"birch_threshold", std::to_string(c.n), std::to_string(c.r), "d=" + std::to_string(c.d), "", "", "",
                 str(Integer(c.n) >= cmp.birch), "", "", "", "", "", Integer(cmp.birch - 1).str()});
  } else {
    const auto e = exponents_mixed(c.n, c.rs);
    const auto rk = script_R_kappa(c.rs, c.m);
    row("mixed_degree", e, "r_d=" + str(c.rs, ";"), std::to_string(c.m), str(rk.R), str(rk.kappa));
  }
  return o;
}

Output cmd_primes(const Config& c, const SystemFile& sf) {
  if (!c.xi) throw InvalidInput("--xi is required");
  const auto t = select_primes(sf.system, *c.xi, c.m, engine(c));
  Output o{CsvTable({"j", "p", "target", "ratio", "in_window"})};
  for (std::size_t j = 0; j < t.primes.size(); ++j) {
    const double ratio = t.ratios[j];
    o.table.add({std::to_string(j), std::to_string(t.primes[j]), j == 0 ? "xi^2" : "xi", str(ratio),
                 str(ratio >= 1.0 / t.tol && ratio <= t.tol)});
  }
  o.extra["xi_gate"] = xi_gate(sf.system, c.gate_const);
  return o;
}

PrimeTuple tuple_from(const Config& c, const SystemFile& sf) {
  if (!c.primes.empty()) {
    const double xi = c.xi ? *c.xi : static_cast<double>(c.primes.size() > 1 ? c.primes[1] : c.primes[0]);
    return make_prime_tuple(c.primes, sf.system.max_degree(), xi, c.tol);
  }
  if (!c.xi) throw InvalidInput("give --primes p_0,...,p_m or --xi with --m");
  return select_primes(sf.system, *c.xi, c.m, engine(c));
}

Output cmd_plan(const Config& c, const SystemFile& sf) {
  const auto t = tuple_from(c, sf);
  const auto plan = modulus_plan(t, sf.system);
  Output o{CsvTable({"d", "r_d", "q_d", "q_tilde_d"})};
  const auto sizes = sf.system.group_sizes();
  for (const auto& [d, q] : plan.q)
    o.table.add({std::to_string(d), std::to_string(d < sizes.size() ? sizes[d] : 0), q.str(), plan.q_tilde.at(d).str()});
  o.extra["primes"] = t.primes;
  o.extra["Q"] = plan.Q.str();
  o.extra["Q_tilde"] = plan.Q_tilde.str();
  o.extra["q_vector"] = str_int(plan.q_vector);
  return o;
}

Output cmd_difference(const Config& c, const SystemFile& sf) {
  if (c.y.empty()) throw InvalidInput("--y is required");
  std::uint64_t step = 0;
  if (!c.primes.empty())
    step = c.primes.back();
  else
    throw InvalidInput("--primes p_m is required (the differencing step)");
  const auto ds = difference_system(sf.system, c.y, step);
  Output o{CsvTable({"member", "source", "degree", "polynomial", "leading_form"})};
  const auto forms = ds.leading_forms();
  for (std::size_t i = 0; i < ds.members.size(); ++i)
    o.table.add({std::to_string(i + 1), std::to_string(ds.source[i] + 1),
                 ds.degree[i] ? std::to_string(*ds.degree[i]) : "-inf", ds.members[i].to_string(), forms[i].to_string()});
  o.extra["degenerate"] = ds.degenerate;
  return o;
}

Output cmd_regularize(const Config& c, const SystemFile& sf) {
  if (c.primes.empty()) throw InvalidInput("--primes (the prime pool) is required");
  const auto res = regularize(sf.system, c.primes, {c.lambda_max, 200000, c.budget});
  Output o{CsvTable({"member", "source", "polynomial"})};
  for (std::size_t i = 0; i < res.g.size(); ++i)
    o.table.add({std::to_string(i + 1), std::to_string(res.order[i] + 1), res.g[i].to_string()});
  ojson lam = ojson::array();
  for (const auto& [k, v] : res.lambda.same_degree) lam.push_back({k.first + 1, k.second + 1, v.str()});
  ojson low = ojson::array();
  for (const auto& [k, v] : res.lambda.lower_degree)
    low.push_back({std::get<0>(k) + 1, std::get<1>(k) + 1, std::get<2>(k) + 1, v.str()});
  o.extra["lambda_same_degree"] = lam;
  o.extra["lambda_lower_degree"] = low;
  o.extra["identity"] = res.lambda.is_identity();
  o.extra["witness"] = res.witness;
  o.extra["Lambda"] = res.Lambda;
  o.extra["tables_tried"] = res.tables_tried;
  o.extra["height_before"] = res.height_before.str();
  o.extra["height_after"] = res.height_after.str();
  o.extra["height_exponent"] = format_double(res.height_exponent);
  return o;
}

Output cmd_slice(const Config& c, const SystemFile& sf) {
  const auto res = find_slice(sf.system, c.primes, {c.slice_threshold, c.slice_max_norm, c.budget});
  Output o{CsvTable({"p", "a", "dim_before", "dim_after", "dim_with_linear_form", "s_before", "s_after", "ok"})};
  for (const auto& ch : res.checks)
    o.table.add({std::to_string(ch.p), str_int(res.a), std::to_string(ch.dim_before), std::to_string(ch.dim_after),
                 std::to_string(ch.dim_via_linear_form), std::to_string(ch.s_before), std::to_string(ch.s_after),
                 str(ch.ok)});
  o.extra["a"] = str_int(res.a);
  o.extra["norm"] = res.norm.str();
  o.extra["entry_bound"] = res.entry_bound.str();
  ojson inf = ojson::array();
  for (double v : res.kappa_inflation) inf.push_back(format_double(v));
  o.extra["kappa_inflation"] = inf;
  o.extra["candidates_tried"] = res.tried;
  return o;
}

Output cmd_variance(const Config& c, const SystemFile& sf) {
  const auto t = tuple_from(c, sf);
  const auto plan = modulus_plan(t, sf.system);
  const auto W = WeightSpec::paper_bump(sf.system.nvars());
  Output o{CsvTable({"B", "p_m", "zero_classes", "mass", "main_term", "S", "Sigma", "Sigma_augmented", "cross_cancel",
                     "N_W", "split_residual", "cauchy_ok"})};
  for (double B : sweep(c)) {
    const auto v = variance_report(sf.system, B, plan, W);
    o.table.add({str(B), std::to_string(v.p_m), std::to_string(v.zero_classes), str(v.mass), str(v.main_term), str(v.S),
                 str(v.Sigma), str(v.Sigma_augmented), str(v.cross_cancel), str(v.N_W), str(v.split_residual),
                 str(v.cauchy_ok)});
  }
  o.extra["primes"] = t.primes;
  return o;
}

Output cmd_prop(const Config& c, const SystemFile& sf) {
  const auto W = WeightSpec::paper_bump(sf.system.nvars());
  Output o{CsvTable({"B", "m", "primes", "xi", "s", "R", "N_W", "main_term", "lhs", "envelope1", "envelope2",
                     "lhs_over_envelope1"})};
  for (double B : sweep(c)) {
    PropReport rep;
    if (c.xi) {
      rep = prop_residual(sf.system, B, *c.xi, c.m, W, engine(c));
    } else {
      // Without --xi: m = 0, p_0 the least good prime in [B, 2B^2], xi = sqrt(p_0).
      if (c.m != 0) throw InvalidInput("--xi is required when m > 0");
      const auto lo = static_cast<std::uint64_t>(std::ceil(B));
      const auto p0 = least_good_prime(sf.system, lo, static_cast<std::uint64_t>(2 * B * B), 0, c.budget);
      rep = prop_residual(sf.system, B, make_prime_tuple({p0}, sf.system.max_degree(), std::sqrt(static_cast<double>(p0)), c.tol),
                          W, engine(c));
    }
    o.table.add({str(B), std::to_string(rep.primes.m), str(rep.primes.primes), str(rep.primes.xi), std::to_string(rep.s),
                 str(rep.R), str(rep.N_W), str(rep.main_term), str(rep.lhs), str(rep.envelope1), str(rep.envelope2),
                 str(rep.lhs / rep.envelope1)});
  }
  return o;
}

Output cmd_tsets(const Config& c, const SystemFile& sf) {
  if (c.primes.empty()) throw InvalidInput("--primes is required");
  Output o{CsvTable({"p", "s", "occupancy", "bound"})};
  const int n = static_cast<int>(sf.system.nvars());
  for (auto p : c.primes) {
    const auto rep = build_T_sets(sf.system, p, c.budget);
    for (int s = -1; s < n; ++s)
      o.table.add({std::to_string(p), std::to_string(s), std::to_string(rep.occupancy_at(s)),
                   str(10.0 * std::pow(static_cast<double>(p), n - s - 2))});
  }
  return o;
}

ojson config_echo(const Config& c, const std::string& command) {
  ojson j;
  j["command"] = command;
  j["system"] = c.system_path;
  if (c.B) j["B"] = format_double(*c.B);
  if (!c.B_sweep.empty()) {
    ojson a = ojson::array();
    for (double b : c.B_sweep) a.push_back(format_double(b));
    j["B_sweep"] = a;
  }
  if (c.xi) j["xi"] = format_double(*c.xi);
  j["m"] = c.m;
  j["primes"] = c.primes;
  j["q"] = c.moduli;
  j["y"] = c.y;
  j["seed"] = c.seed;
  j["Ybound"] = c.Ybound;
  return j;
}

ojson gate_echo(const Config& c) {
  return {{"tol_window", format_double(c.tol)},
          {"xi_gate_constant", format_double(c.gate_const)},
          {"slice_threshold", format_double(c.slice_threshold)},
          {"slice_max_norm", c.slice_max_norm},
          {"lambda_max", c.lambda_max},
          {"groebner_budget", c.budget},
          {"enumeration_budget", c.enum_budget}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact point counting and differencing experiments for polynomial systems"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--system", c.system_path, "system file");
    sub->add_option("--B", c.B, "box size");
    sub->add_option("--B-sweep", c.B_sweep, "box sizes")->delimiter(',');
    sub->add_option("--xi", c.xi, "target prime size xi");
    sub->add_option("--m", c.m, "differencing depth");
    sub->add_option("--primes", c.primes, "prime list (pool, tuple p_0..p_m, or step)")->delimiter(',');
    sub->add_option("--tol-window", c.tol, "window factor: p ~ xi means xi/tol <= p <= xi*tol");
    sub->add_option("--gate", c.gate_const, "xi must be at least max(gate, ln ||F||)");
    sub->add_option("--slice-threshold", c.slice_threshold, "largest sum of 1/p for slicing");
    sub->add_option("--slice-max-norm", c.slice_max_norm, "largest |a| searched by slice");
    sub->add_option("--lambda-max", c.lambda_max, "largest |lambda| searched by regularize");
    sub->add_option("--budget", c.budget, "Groebner reduction step budget");
    sub->add_option("--enum-budget", c.enum_budget, "lattice point budget");
    sub->add_option("--out", c.out, "CSV output path; a .json sidecar is written next to it");
    sub->add_option("--seed", c.seed, "seed echoed into the sidecar (no command is randomized)");
  };

  struct Cmd {
    const char* name;
    const char* help;
  };
  const std::vector<Cmd> cmds = {
      {"analyze", "rho_p, s_p and point counts per prime. Columns: p,rho,s,dim,proj_count,sing_count,degenerate,smooth_ci"},
      {"count", "N(f,B) for each B. Columns: B,N,visited"},
      {"count-mod", "N(f,B,q). Columns: B,q,N,visited"},
      {"bounds", "exponents, R, kappa and thresholds. Columns: kind,n,r,degrees,m,eta,exponent,admissible,violated,D_prime,Delta,R,kappa,threshold"},
      {"primes", "select p_0..p_m. Columns: j,p,target,ratio,in_window"},
      {"plan", "moduli q_d. Columns: d,r_d,q_d,q_tilde_d"},
      {"difference", "f(x + p y) - f(x). Columns: member,source,degree,polynomial,leading_form"},
      {"regularize", "nested smooth pencil. Columns: member,source,polynomial"},
      {"slice", "hyperplane slice. Columns: p,a,dim_before,dim_after,dim_with_linear_form,s_before,s_after,ok"},
      {"variance", "variance of the inner sums. Columns: B,p_m,zero_classes,mass,main_term,S,Sigma,Sigma_augmented,cross_cancel,N_W,split_residual,cauchy_ok"},
      {"prop-check", "congruence asymptotic residual. Columns: B,m,primes,xi,s,R,N_W,main_term,lhs,envelope1,envelope2,lhs_over_envelope1"},
      {"tsets", "occupancy of dim S_y >= s. Columns: p,s,occupancy,bound"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : cmds) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    common(sub);
    subs[cmd.name] = sub;
  }
  subs["count-mod"]->add_option("--q", c.moduli, "moduli")->delimiter(',');
  subs["difference"]->add_option("--y", c.y, "difference direction")->delimiter(',');
  auto* b = subs["bounds"];
  b->add_option("--n", c.n, "variables");
  b->add_option("--r", c.r, "equations (same degree)");
  b->add_option("--d", c.d, "degree (same degree)");
  b->add_option("--rs", c.rs, "r_2,...,r_D for mixed degrees")->delimiter(',');
  b->add_option("--s-star", c.s_star, "s* for the Birch threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  try {
    std::optional<SystemFile> sf;
    if (command != "bounds") sf = load(c);
    Output out = [&]() -> Output {
      if (command == "analyze") return cmd_analyze(c, *sf);
      if (command == "count") return cmd_count(c, *sf);
      if (command == "count-mod") return cmd_count_mod(c, *sf);
      if (command == "bounds") return cmd_bounds(c);
      if (command == "primes") return cmd_primes(c, *sf);
      if (command == "plan") return cmd_plan(c, *sf);
      if (command == "difference") return cmd_difference(c, *sf);
      if (command == "regularize") return cmd_regularize(c, *sf);
      if (command == "slice") return cmd_slice(c, *sf);
      if (command == "variance") return cmd_variance(c, *sf);
      if (command == "prop-check") return cmd_prop(c, *sf);
      return cmd_tsets(c, *sf);
    }();

    const std::string csv = out.table.str();
    if (c.out.empty()) {
      std::cout << csv;
      return 0;
    }
    std::ofstream(c.out, std::ios::binary) << csv;
    ojson side;
    side["schema"] = kSidecarSchema;
    side["version"] = kVersion;
    side["config"] = config_echo(c, command);
    side["gates"] = gate_echo(c);
    if (sf) {
      side["system"] = {{"name", sf->name},
                        {"hash", system_hash(sf->system)},
                        {"n", sf->system.nvars()},
                        {"multidegree", sf->system.multidegree()}};
    }
    side["columns"] = out.table.columns();
    side["rows"] = out.table.size();
    side["results"] = out.extra;
    std::ofstream(c.out + ".json", std::ios::binary) << side.dump(2) << "\n";
    return 0;
  } catch (const HypothesisFailure& e) {
    std::cerr << "hypothesis-failure: " << e.what() << "\n";
    return 2;
  } catch (const ResourceExhausted& e) {
    std::cerr << "resource-exhausted: " << e.what() << "\n";
    return 3;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid-input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
