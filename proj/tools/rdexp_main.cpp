#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdexp/rdexp.hpp"

namespace {

using nlohmann::json;

// "lo:hi:n" for linear grids, "log:lo:hi:n" for log-spaced ones.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 4 && parts[0] == "log")
      return rdexp::logspace(std::stod(parts[1]), std::stod(parts[2]),
                             static_cast<std::size_t>(std::stoul(parts[3])));
    if (parts.size() == 3)
      return rdexp::linspace(std::stod(parts[0]), std::stod(parts[1]),
                             static_cast<std::size_t>(std::stoul(parts[2])));
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("bad grid '" + text + "', expected lo:hi:n or log:lo:hi:n");
}

struct Problem {
  rdexp::Distribution source;
  rdexp::DistortionSpec distortion{1, 1};
  std::optional<double> delta;
};

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  json doc = json::parse(in);
  if (!doc.contains("source") || !doc.contains("distortion"))
    throw std::invalid_argument("config must contain 'source' and 'distortion'");
  Problem prob{rdexp::Distribution(doc["source"].get<std::vector<double>>()),
               rdexp::DistortionSpec(doc["distortion"].get<std::vector<std::vector<double>>>()),
               std::nullopt};
  if (prob.source.size() < 2)
    throw std::invalid_argument("config source needs at least two letters");
  if (prob.distortion.rows() != prob.source.size())
    throw std::invalid_argument("distortion row count must match source size");
  if (doc.contains("delta")) prob.delta = doc["delta"].get<double>();
  return prob;
}

rdexp::Unit parse_unit(const std::string& name) {
  if (name == "nats") return rdexp::Unit::nats;
  if (name == "bits") return rdexp::Unit::bits;
  throw std::invalid_argument("unknown unit '" + name + "'");
}

// Every output embeds the library version and the fully resolved settings so
// a run can be reproduced from the file alone.
std::vector<std::string> echo_comments(const std::string& command, const json& config) {
  return {std::string("rdexp version ") + rdexp::version, "command " + command,
          "config " + config.dump()};
}

struct OutputTarget {
  std::string path;  // empty = stdout

  void write(const std::function<void(std::ostream&)>& fn) const {
    if (path.empty()) {
      fn(std::cout);
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    fn(out);
  }
};

void write_string_csv(std::ostream& os, const std::vector<std::string>& comments,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<std::string>>& rows) {
  for (const auto& c : comments) os << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

std::string fmt(double v, rdexp::Unit unit, bool convert = true) {
  return rdexp::format_value(convert ? rdexp::in_unit(v, unit) : v);
}

int cmd_solve_params(std::size_t size_a, std::size_t size_b, rdexp::Unit unit,
                     const OutputTarget& out) {
  auto par = rdexp::solve_parameters(size_a, size_b);
  auto spec = rdexp::make_counterexample(size_a, size_b, 0.0);
  auto ends = rdexp::closed_form_endpoints(spec);
  json cfg{{"size_a", size_a}, {"size_b", size_b}, {"unit", rdexp::unit_name(unit)}};
  out.write([&](std::ostream& os) {
    write_string_csv(os, echo_comments("solve-params", cfg),
                     {"size_a", "size_b", "delta", "a", "rate_a", "rate_b", "unit"},
                     {{std::to_string(size_a), std::to_string(size_b),
                       rdexp::format_value(par.delta), rdexp::format_value(par.a),
                       fmt(ends.rate_a, unit), fmt(ends.rate_b, unit), rdexp::unit_name(unit)}});
  });
  return 0;
}

// Source either from a problem file or from the counterexample family with
// block-A weight xi.
struct SourceChoice {
  rdexp::Distribution p;
  rdexp::DistortionSpec d{1, 1};
  double delta = 0.0;
  json config;
};

SourceChoice resolve_source(const std::string& config_path, std::size_t size_a, std::size_t size_b,
                            double xi, double delta_flag) {
  SourceChoice sc;
  if (!config_path.empty()) {
    Problem prob = load_problem(config_path);
    sc.p = prob.source;
    sc.d = prob.distortion;
    if (delta_flag >= 0.0)
      sc.delta = delta_flag;
    else if (prob.delta)
      sc.delta = *prob.delta;
    else
      throw std::invalid_argument("delta required: pass --delta or put it in the config");
    sc.config["config_file"] = config_path;
  } else {
    auto spec = rdexp::make_counterexample(size_a, size_b, xi);
    sc.p = rdexp::q_lambda(spec, xi);
    sc.d = rdexp::build_distortion(spec);
    sc.delta = delta_flag >= 0.0 ? delta_flag : spec.delta;
    sc.config["size_a"] = size_a;
    sc.config["size_b"] = size_b;
    sc.config["xi"] = xi;
  }
  sc.config["delta"] = sc.delta;
  return sc;
}

int cmd_rd_curve(const SourceChoice& sc, std::string delta_grid, rdexp::Unit unit,
                 const OutputTarget& out) {
  rdexp::DistortionKernel kernel(sc.d);
  if (delta_grid.empty()) {
    double dmax = kernel.delta_max(sc.p.probs());
    delta_grid = "0:" + rdexp::format_value(dmax) + ":101";
  }
  std::vector<double> deltas = parse_grid(delta_grid);
  rdexp::Curve curve = rdexp::rd_curve(sc.p, sc.d, deltas);
  json cfg = sc.config;
  cfg.erase("delta");
  cfg["delta_grid"] = delta_grid;
  cfg["unit"] = rdexp::unit_name(unit);
  std::vector<std::vector<std::string>> rows;
  for (const auto& pt : curve.points)
    rows.push_back({rdexp::format_value(pt.x), fmt(pt.y, unit), rdexp::unit_name(unit)});
  out.write([&](std::ostream& os) {
    write_string_csv(os, echo_comments("rd-curve", cfg), {"delta", "rate", "unit"}, rows);
  });
  return 0;
}

int cmd_blahut(const SourceChoice& sc, const std::string& rho_grid_s, const std::string& nu_grid_s,
               const std::string& rate_grid_s, rdexp::Unit unit, unsigned threads,
               const OutputTarget& out) {
  std::vector<double> rhos =
      rho_grid_s.empty() ? rdexp::default_rho_grid() : parse_grid(rho_grid_s);
  std::vector<double> nus = nu_grid_s.empty() ? rdexp::linspace(0.0, 10.0, 61)
                                              : parse_grid(nu_grid_s);
  std::vector<double> rates =
      rate_grid_s.empty()
          ? rdexp::linspace(0.0, std::log(static_cast<double>(sc.p.size())), 101)
          : parse_grid(rate_grid_s);

  rdexp::DistortionKernel kernel(sc.d);
  auto table = rdexp::blahut_inner_table(sc.delta, sc.p, kernel, rhos, nus, {}, threads);
  json cfg = sc.config;
  cfg["rho_grid"] = rho_grid_s.empty() ? "default" : rho_grid_s;
  cfg["nu_grid"] = nu_grid_s.empty() ? "0:10:61" : nu_grid_s;
  cfg["rate_grid"] = rate_grid_s.empty() ? "auto" : rate_grid_s;
  cfg["unit"] = rdexp::unit_name(unit);
  std::vector<std::vector<std::string>> rows;
  for (double r : rates) {
    auto pt = rdexp::blahut_exponent_from_table(r, table);
    rows.push_back({fmt(pt.rate, unit), fmt(pt.exponent, unit), rdexp::format_value(pt.rho),
                    rdexp::format_value(pt.nu), rdexp::unit_name(unit)});
  }
  out.write([&](std::ostream& os) {
    write_string_csv(os, echo_comments("blahut", cfg),
                     {"rate", "exponent", "rho", "nu", "unit"}, rows);
  });
  return 0;
}

rdexp::GridSpec grids_from_flags(const SourceChoice& sc, const std::string& mu_s,
                                 const std::string& nu_s, const std::string& e_s, json& cfg) {
  rdexp::GridSpec grid;
  if (mu_s.empty()) {
    grid.mu_values = rdexp::logspace(3e-2, 20.0, 80);
    grid.mu_values.insert(grid.mu_values.begin(), 0.0);
    cfg["mu_grid"] = "0+log:0.03:20:80";
  } else {
    grid.mu_values = parse_grid(mu_s);
    if (grid.mu_values.empty() || grid.mu_values.front() != 0.0)
      grid.mu_values.insert(grid.mu_values.begin(), 0.0);
    cfg["mu_grid"] = "0+" + mu_s;
  }
  if (nu_s.empty()) {
    double hi = 50.0 / rdexp::DistortionKernel(sc.d).min_positive_value();
    if (!std::isfinite(hi)) hi = 1.0;
    grid.nu_values = rdexp::linspace(0.0, hi, 200);
    cfg["nu_grid"] = "0:" + rdexp::format_value(hi) + ":200";
  } else {
    grid.nu_values = parse_grid(nu_s);
    cfg["nu_grid"] = nu_s;
  }
  if (e_s.empty()) {
    double emax = 0.0;
    for (std::size_t x = 0; x < sc.p.size(); ++x)
      if (sc.p[x] > 0.0) emax = std::max(emax, std::log(1.0 / sc.p[x]));
    emax *= 1.2;
    grid.e_values = rdexp::linspace(0.0, emax, 100);
    cfg["e_grid"] = "0:" + rdexp::format_value(emax) + ":100";
  } else {
    grid.e_values = parse_grid(e_s);
    cfg["e_grid"] = e_s;
  }
  return grid;
}

void write_sidecar(const std::string& csv_path, const json& cfg, const rdexp::GTable& table) {
  if (csv_path.empty()) return;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t bad = 0;
  for (double v : table.values) {
    if (!std::isfinite(v)) {
      ++bad;
      continue;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  json side{{"version", rdexp::version},
            {"config", cfg},
            {"g_table",
             {{"mu_count", table.grid.mu_values.size()},
              {"nu_count", table.grid.nu_values.size()},
              {"min", lo},
              {"max", hi},
              {"non_finite_cells", bad}}},
            {"warnings", table.warnings}};
  std::ofstream out(csv_path + ".json");
  if (!out) throw std::invalid_argument("cannot open sidecar '" + csv_path + ".json'");
  out << side.dump(2) << "\n";
}

int cmd_marton_inverse(const SourceChoice& sc, const std::string& mu_s, const std::string& nu_s,
                       const std::string& e_s, rdexp::Unit unit, unsigned threads,
                       const OutputTarget& out) {
  json cfg = sc.config;
  cfg["unit"] = rdexp::unit_name(unit);
  rdexp::GridSpec grid = grids_from_flags(sc, mu_s, nu_s, e_s, cfg);
  auto table = rdexp::compute_g_table(sc.p, sc.d, std::move(grid), {}, threads);
  auto inv = rdexp::rm_grid(table, sc.delta);
  std::vector<std::string> comments = echo_comments("marton-inverse", cfg);
  for (const auto& w : inv.warnings) comments.push_back("warning " + w);
  std::vector<std::vector<std::string>> rows;
  for (const auto& pt : inv.curve.points)
    rows.push_back({fmt(pt.x, unit), fmt(pt.y, unit), rdexp::unit_name(unit)});
  out.write([&](std::ostream& os) { write_string_csv(os, comments, {"E", "R", "unit"}, rows); });
  write_sidecar(out.path, cfg, table);
  return 0;
}

int cmd_marton(const SourceChoice& sc, const std::string& mu_s, const std::string& nu_s,
               const std::string& e_s, const std::string& rate_grid_s, rdexp::Unit unit,
               unsigned threads, const OutputTarget& out) {
  json cfg = sc.config;
  cfg["unit"] = rdexp::unit_name(unit);
  rdexp::GridSpec grid = grids_from_flags(sc, mu_s, nu_s, e_s, cfg);
  auto inv = rdexp::rm_grid(sc.p, sc.d, sc.delta, std::move(grid), {}, threads);
  double top = inv.curve.points.empty() ? 0.0 : inv.curve.points.back().y;
  std::vector<double> rates =
      rate_grid_s.empty() ? rdexp::linspace(0.0, top, 101) : parse_grid(rate_grid_s);
  cfg["rate_grid"] = rate_grid_s.empty() ? "auto" : rate_grid_s;
  std::vector<std::string> comments = echo_comments("marton", cfg);
  for (const auto& w : inv.warnings) comments.push_back("warning " + w);
  std::vector<std::vector<std::string>> rows;
  for (double r : rates)
    rows.push_back(
        {fmt(r, unit), fmt(rdexp::marton_from_inverse(r, inv), unit), rdexp::unit_name(unit)});
  out.write([&](std::ostream& os) {
    write_string_csv(os, comments, {"rate", "exponent", "unit"}, rows);
  });
  return 0;
}

// Figures 1-3 belong to the 8/512 example with xi = 0.01, figures 4-6 to the
// 50/2500 example with xi = 0.2, figure 7 to the appendix scan.
struct FigureDefaults {
  std::size_t size_a, size_b;
  double xi;
};

FigureDefaults figure_defaults(int figure) {
  if (figure <= 3 || figure == 7) return {8, 512, 0.01};
  return {50, 2500, 0.2};
}

int cmd_figure(int figure, std::size_t size_a, std::size_t size_b, double xi, double lambda,
               double rho, const std::string& lambda_grid_s, const std::string& mu_s,
               const std::string& nu_s, const std::string& e_s, const std::string& rate_grid_s,
               rdexp::Unit unit, unsigned threads, const OutputTarget& out) {
  auto spec = rdexp::make_counterexample(size_a, size_b, xi);
  json cfg{{"figure", figure},        {"size_a", size_a}, {"size_b", size_b},
           {"xi", xi},                {"delta", spec.delta}, {"unit", rdexp::unit_name(unit)}};
  std::vector<double> lambdas =
      lambda_grid_s.empty() ? rdexp::linspace(0.0, 1.0, 1001) : parse_grid(lambda_grid_s);
  cfg["lambda_grid"] = lambda_grid_s.empty() ? "0:1:1001" : lambda_grid_s;

  if (figure == 1 || figure == 4) {
    auto lc = rdexp::lambda_curve(spec, lambdas, {}, threads);
    std::vector<std::string> comments = echo_comments("figure", cfg);
    for (const auto& m : lc.maxima)
      comments.push_back("local maximum lambda=" + rdexp::format_value(m.x) +
                         " rate=" + fmt(m.y, unit) + " " + rdexp::unit_name(unit));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < lc.lambdas.size(); ++i)
      rows.push_back({rdexp::format_value(lc.lambdas[i]), fmt(lc.rates[i], unit),
                      rdexp::unit_name(unit)});
    out.write([&](std::ostream& os) {
      write_string_csv(os, comments, {"lambda", "rate", "unit"}, rows);
    });
    return 0;
  }

  if (figure == 2 || figure == 5) {
    auto lc = rdexp::lambda_curve(spec, lambdas, {}, threads);
    auto marton = rdexp::marton_theorem3(spec, lc);
    double top = marton.points.empty() ? 0.0 : marton.points.back().x;
    std::vector<double> rates =
        rate_grid_s.empty() ? rdexp::linspace(0.0, top, 201) : parse_grid(rate_grid_s);
    cfg["rate_grid"] = rate_grid_s.empty() ? "auto" : rate_grid_s;
    std::vector<double> nus = nu_s.empty() ? rdexp::linspace(0.0, 10.0, 61) : parse_grid(nu_s);
    cfg["blahut_nu_grid"] = nu_s.empty() ? "0:10:61" : nu_s;
    rdexp::DistortionKernel kernel(rdexp::build_distortion(spec));
    auto table = rdexp::blahut_inner_table(spec.delta, rdexp::q_lambda(spec, xi), kernel,
                                           rdexp::default_rho_grid(), nus, {}, threads);
    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : marton.points)
      rows.push_back({"marton", fmt(pt.x, unit), fmt(pt.y, unit), rdexp::unit_name(unit)});
    for (double r : rates) {
      auto pt = rdexp::blahut_exponent_from_table(r, table);
      rows.push_back({"blahut", fmt(pt.rate, unit), fmt(pt.exponent, unit),
                      rdexp::unit_name(unit)});
    }
    out.write([&](std::ostream& os) {
      write_string_csv(os, echo_comments("figure", cfg),
                       {"series", "rate", "exponent", "unit"}, rows);
    });
    return 0;
  }

  if (figure == 3 || figure == 6) {
    cfg["unit"] = rdexp::unit_name(unit);
    SourceChoice sc{rdexp::q_lambda(spec, xi), rdexp::build_distortion(spec), spec.delta, cfg};
    std::string nu_default = nu_s.empty() ? "0:18:181" : nu_s;
    std::string e_default = e_s;
    if (e_default.empty()) {
      // divergence reach of the best rate maximizer over the lambda family
      auto lc = rdexp::lambda_curve(spec, lambdas, {}, threads);
      double best_lambda = spec.xi;
      double best_rate = -1.0;
      for (const auto& m : lc.maxima)
        if (m.y > best_rate) {
          best_rate = m.y;
          best_lambda = m.x;
        }
      double emax = 1.2 * rdexp::binary_divergence(best_lambda, spec.xi);
      e_default = "0:" + rdexp::format_value(emax) + ":100";
    }
    rdexp::GridSpec grid = grids_from_flags(sc, mu_s, nu_default, e_default, cfg);
    auto table = rdexp::compute_g_table(sc.p, sc.d, std::move(grid), {}, threads);
    auto inv = rdexp::rm_grid(table, sc.delta);
    std::vector<std::string> comments = echo_comments("figure", cfg);
    for (const auto& w : inv.warnings) comments.push_back("warning " + w);
    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : inv.curve.points)
      rows.push_back({fmt(pt.x, unit), fmt(pt.y, unit), rdexp::unit_name(unit)});
    out.write([&](std::ostream& os) { write_string_csv(os, comments, {"E", "R", "unit"}, rows); });
    write_sidecar(out.path, cfg, table);
    return 0;
  }

  if (figure == 7) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
      throw std::invalid_argument("figure 7 needs --lambda in [0, 1]");
    cfg["lambda"] = lambda;
    cfg["rho"] = rho;
    std::vector<double> nus = nu_s.empty() ? rdexp::linspace(0.0, 18.0, 361) : parse_grid(nu_s);
    cfg["nu_grid"] = nu_s.empty() ? "0:18:361" : nu_s;
    auto scan = rdexp::appendix_scan(rho, rdexp::q_lambda(spec, lambda),
                                     rdexp::build_distortion(spec), spec.delta, nus);
    std::vector<std::string> comments = echo_comments("figure", cfg);
    for (const auto& m : scan.refined_maxima)
      comments.push_back("local maximum nu=" + rdexp::format_value(m.x) + " value=" +
                         fmt(m.y, unit) + " " + rdexp::unit_name(unit));
    std::vector<std::vector<std::string>> rows;
    for (const auto& pt : scan.curve.points)
      rows.push_back({rdexp::format_value(pt.x), fmt(pt.y, unit), rdexp::unit_name(unit)});
    out.write([&](std::ostream& os) {
      write_string_csv(os, comments, {"nu", "value", "unit"}, rows);
    });
    return 0;
  }

  throw std::invalid_argument("figure must be 1..7");
}

struct OracleCheck {
  std::string name;
  double fast = 0.0;
  double brute = 0.0;
  double tol = 0.0;
};

int cmd_oracle_check(double tol_scale, const OutputTarget& out) {
  using namespace rdexp;
  std::vector<OracleCheck> checks;

  Distribution p2({0.3, 0.7});
  DistortionSpec ham2({{0.0, 1.0}, {1.0, 0.0}});
  checks.push_back({"brute_rd vs rate_at_delta (binary Hamming, delta 0.1)",
                    rate_at_delta(p2, ham2, 0.1).rate, brute_rd(p2, ham2, 0.1, 0.01), 5e-3});

  Distribution p25({0.25, 0.75});
  GridSpec grid;
  grid.mu_values = logspace(1e-3, 2000.0, 120);
  grid.mu_values.insert(grid.mu_values.begin(), 0.0);
  grid.nu_values = linspace(0.0, 8.0, 161);
  grid.e_values = linspace(0.0, 0.2, 81);
  GTable table = compute_g_table(p25, ham2, grid, {}, 1);
  InverseCurve inv = rm_grid(table, 0.1);
  for (double e : {0.05, 0.1}) {
    double fast = 0.0;
    for (const auto& pt : inv.curve.points)
      if (pt.x <= e) fast = pt.y;
    checks.push_back({"brute_rm vs rm_grid (binary, e " + format_value(e) + ")", fast,
                      brute_rm(e, 0.1, p25, ham2, 0.01), 2e-3});
  }

  double target_rate = rate_at_delta(p25, ham2, 0.1).rate + 0.05;
  checks.push_back({"brute_marton vs marton_from_inverse (binary, rate +0.05)",
                    marton_from_inverse(target_rate, inv),
                    brute_marton(target_rate, 0.1, p25, ham2, 0.01), 2e-3});

  Distribution p3({0.5, 0.3, 0.2});
  Distribution py3({0.2, 0.5, 0.3});
  DistortionSpec d3({{0.0, 1.0, 0.4}, {1.0, 0.0, 0.7}, {0.3, 0.6, 0.0}});
  checks.push_back({"brute_g vs g_closed_form (3x3, mu 0.5, nu 1)",
                    g_closed_form(0.5, 1.0, py3, p3, d3), brute_g(0.5, 1.0, py3, p3, d3, 0.005),
                    2e-3});

  Distribution pu2 = Distribution::uniform(2);
  LpGame game = lp_game_value(1.0, pu2, ham2);
  checks.push_back({"lp_game_value vs closed form (binary Hamming, nu 1)", game.c_star,
                    (1.0 + std::exp(-1.0)) / 2.0, 1e-9});

  bool all_ok = true;
  std::ostringstream report;
  report << "# rdexp version " << version << "\n";
  for (const auto& c : checks) {
    double diff = std::abs(c.fast - c.brute);
    double tol = c.tol * tol_scale;
    bool ok = diff <= tol;
    all_ok = all_ok && ok;
    report << (ok ? "[PASS] " : "[FAIL] ") << c.name << ": fast=" << format_value(c.fast)
           << " brute=" << format_value(c.brute) << " |diff|=" << format_value(diff)
           << " tol=" << format_value(tol) << "\n";
  }
  report << (all_ok ? "all oracle checks passed\n" : "oracle check FAILED\n");
  out.write([&](std::ostream& os) { os << report.str(); });
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-distortion and error-exponent curves for discrete memoryless sources"};
  app.require_subcommand(1);

  std::string out_path, config_path, unit_name = "nats";
  std::string mu_grid, nu_grid, e_grid, rho_grid, rate_grid, delta_grid, lambda_grid;
  std::size_t size_a = 8, size_b = 512;
  double xi = -1.0, lambda = -1.0, delta = -1.0, rho = 2.25, tol_scale = 1.0;
  unsigned threads = 0;
  int figure = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output CSV path (default stdout)");
    cmd->add_option("--unit", unit_name, "nats or bits")->check(CLI::IsMember({"nats", "bits"}));
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  };
  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON problem file with source, distortion, delta");
    cmd->add_option("--size-a", size_a, "block A letters (counterexample source)");
    cmd->add_option("--size-b", size_b, "block B letters (counterexample source)");
    cmd->add_option("--xi", xi, "block A weight of the nominal source");
    cmd->add_option("--delta", delta, "distortion level (default: solved from block sizes)");
  };

  auto* sp = app.add_subcommand("solve-params", "closed-form (delta, a) for the two-block source");
  sp->add_option("--size-a", size_a, "block A letters")->required();
  sp->add_option("--size-b", size_b, "block B letters")->required();
  add_common(sp);

  auto* rd = app.add_subcommand("rd-curve", "rate-distortion curve R(delta)");
  add_source(rd);
  rd->add_option("--delta-grid", delta_grid, "delta sweep lo:hi:n (default 0:delta_max:101)");
  add_common(rd);

  auto* bl = app.add_subcommand("blahut", "Blahut exponent curve E_B(R)");
  add_source(bl);
  bl->add_option("--rho-grid", rho_grid, "slope grid (default 0 plus log:0.001:10:201)");
  bl->add_option("--nu-grid", nu_grid, "inner nu grid (default 0:10:61, auto-extended)");
  bl->add_option("--rate-grid", rate_grid, "rates to tabulate (default 0:log|X|:101)");
  add_common(bl);

  auto* mi = app.add_subcommand("marton-inverse", "inverse function R_M(E) by the grid method");
  add_source(mi);
  mi->add_option("--mu-grid", mu_grid, "mu grid (0 is always prepended)");
  mi->add_option("--nu-grid", nu_grid, "nu grid");
  mi->add_option("--e-grid", e_grid, "exponent grid");
  add_common(mi);

  auto* ma = app.add_subcommand("marton", "Marton exponent E_M(R) read off the tabulated inverse");
  add_source(ma);
  ma->add_option("--mu-grid", mu_grid, "mu grid (0 is always prepended)");
  ma->add_option("--nu-grid", nu_grid, "nu grid");
  ma->add_option("--e-grid", e_grid, "exponent grid");
  ma->add_option("--rate-grid", rate_grid, "rates to tabulate");
  add_common(ma);

  auto* fg = app.add_subcommand("figure", "data series behind the worked-example figures");
  fg->add_option("n", figure, "figure number 1..7")->required()->check(CLI::Range(1, 7));
  fg->add_option("--size-a", size_a, "block A letters (default 8, or 50 for figures 4-6)");
  fg->add_option("--size-b", size_b, "block B letters (default 512, or 2500 for figures 4-6)");
  fg->add_option("--xi", xi, "block A weight (default 0.01, or 0.2 for figures 4-6)");
  fg->add_option("--lambda", lambda, "source mixture weight (required for figure 7)");
  fg->add_option("--rho", rho, "scan slope for figure 7 (default 2.25)");
  fg->add_option("--lambda-grid", lambda_grid, "lambda grid (default 0:1:1001)");
  fg->add_option("--mu-grid", mu_grid, "mu grid for figures 3 and 6");
  fg->add_option("--nu-grid", nu_grid, "nu grid for figures 3, 6 and 7");
  fg->add_option("--e-grid", e_grid, "exponent grid for figures 3 and 6");
  fg->add_option("--rate-grid", rate_grid, "rate grid for the Blahut series of figures 2 and 5");
  add_common(fg);

  auto* oc = app.add_subcommand("oracle-check", "brute-force cross checks on tiny instances");
  oc->add_option("--tol-scale", tol_scale, "multiplier on every tolerance (0 forces failure)");
  add_common(oc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    rdexp::Unit unit = parse_unit(unit_name);
    OutputTarget out{out_path};
    if (sp->parsed()) return cmd_solve_params(size_a, size_b, unit, out);
    if (rd->parsed()) {
      auto sc = resolve_source(config_path, size_a, size_b, xi < 0.0 ? 0.01 : xi, delta);
      return cmd_rd_curve(sc, delta_grid, unit, out);
    }
    if (bl->parsed()) {
      auto sc = resolve_source(config_path, size_a, size_b, xi < 0.0 ? 0.01 : xi, delta);
      return cmd_blahut(sc, rho_grid, nu_grid, rate_grid, unit, threads, out);
    }
    if (mi->parsed()) {
      auto sc = resolve_source(config_path, size_a, size_b, xi < 0.0 ? 0.01 : xi, delta);
      return cmd_marton_inverse(sc, mu_grid, nu_grid, e_grid, unit, threads, out);
    }
    if (ma->parsed()) {
      auto sc = resolve_source(config_path, size_a, size_b, xi < 0.0 ? 0.01 : xi, delta);
      return cmd_marton(sc, mu_grid, nu_grid, e_grid, rate_grid, unit, threads, out);
    }
    if (fg->parsed()) {
      auto def = figure_defaults(figure);
      if (!fg->count("--size-a")) size_a = def.size_a;
      if (!fg->count("--size-b")) size_b = def.size_b;
      rdexp::Unit fig_unit = fg->count("--unit") ? unit : rdexp::Unit::bits;
      return cmd_figure(figure, size_a, size_b, xi < 0.0 ? def.xi : xi, lambda, rho, lambda_grid,
                        mu_grid, nu_grid, e_grid, rate_grid, fig_unit, threads, out);
    }
    if (oc->parsed()) return cmd_oracle_check(tol_scale, out);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
