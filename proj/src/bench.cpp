#include "ssopt/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ssopt/history.hpp"
#include "ssopt/pounders.hpp"
#include "ssopt/problem.hpp"
#include "ssopt/regret.hpp"
#include "ssopt/subspace_gd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace ssopt {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Standard CSV quoting, applied only when the field needs it.
std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += "\"\"";
    out.push_back(c);
  }
  out += "\"";
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string sanitize(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '.';
    out.push_back(keep ? c : '_');
  }
  return out;
}

std::vector<std::string> string_list(const json& value, const std::string& key) {
  std::vector<std::string> out;
  if (value.is_string()) {
    std::stringstream ss(value.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      // Embedded ids carry one interior comma ("name:m@D=<D>,seed=<s>");
      // a fragment opening with seed= can only be that continuation.
      if (!out.empty() && item.rfind("seed=", 0) == 0) {
        out.back() += "," + item;
      } else {
        out.push_back(item);
      }
    }
  } else if (value.is_array()) {
    for (const json& v : value) {
      if (!v.is_string()) {
        throw std::invalid_argument("config key " + key +
                                    " must hold strings");
      }
      out.push_back(v.get<std::string>());
    }
  } else {
    throw std::invalid_argument("config key " + key +
                                " must be a string or array");
  }
  return out;
}

template <typename T>
std::vector<T> number_list(const json& value, const std::string& key) {
  std::vector<T> out;
  if (value.is_string()) {
    std::stringstream ss(value.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        if constexpr (std::is_floating_point_v<T>) {
          out.push_back(static_cast<T>(std::stod(item)));
        } else {
          out.push_back(static_cast<T>(std::stoull(item)));
        }
      } catch (const std::exception&) {
        throw std::invalid_argument("config key " + key + ": bad number '" +
                                    item + "'");
      }
    }
  } else if (value.is_array()) {
    for (const json& v : value) {
      if (!v.is_number()) {
        throw std::invalid_argument("config key " + key +
                                    " must hold numbers");
      }
      out.push_back(v.get<T>());
    }
  } else {
    throw std::invalid_argument("config key " + key +
                                " must be a number list");
  }
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.problems.empty()) {
    throw std::invalid_argument("config: problems must be nonempty");
  }
  if (cfg.solvers.empty()) {
    throw std::invalid_argument("config: solvers must be nonempty");
  }
  if (cfg.seeds.empty()) {
    throw std::invalid_argument("config: seeds must be nonempty");
  }
  for (double tau : cfg.taus) {
    if (!(tau > 0.0 && tau < 1.0)) {
      throw std::invalid_argument("config: every tau must lie in (0, 1)");
    }
  }
  if (cfg.horizon < 1) {
    throw std::invalid_argument("config: horizon must be >= 1");
  }
  if (cfg.budget < 0) {
    throw std::invalid_argument("config: budget must be >= 0");
  }
  if (!(cfg.sketch_fraction > 0.0 && cfg.sketch_fraction <= 1.0)) {
    throw std::invalid_argument("config: sketch_fraction must be in (0, 1]");
  }
  if (cfg.output_dir.empty()) {
    throw std::invalid_argument("config: output_dir must be nonempty");
  }
}

// What one solver label runs. The gradient-descent pair mirrors the
// head-to-head protocol; everything else is a trust-region variant.
struct SolverSpec {
  std::string label;
  bool is_gd = false;
  bool gd_ucb = false;
  TrVariant tr = TrVariant::ucb;
};

SolverSpec parse_solver(const std::string& label) {
  SolverSpec spec;
  spec.label = label;
  if (label == "gd:random") {
    spec.is_gd = true;
    spec.gd_ucb = false;
    return spec;
  }
  if (label == "gd:ucb") {
    spec.is_gd = true;
    spec.gd_ucb = true;
    return spec;
  }
  if (label.rfind("pounders:", 0) == 0) {
    spec.tr = parse_tr_variant(label.substr(9));
    return spec;
  }
  throw std::invalid_argument("unknown solver label: " + label);
}

struct CellOutcome {
  bool ok = false;
  double f0 = 0.0;
  double final_f = 0.0;
};

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }
  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "problems") {
      cfg.problems = string_list(value, key);
    } else if (key == "solvers") {
      cfg.solvers = string_list(value, key);
    } else if (key == "seeds") {
      cfg.seeds = number_list<std::uint64_t>(value, key);
    } else if (key == "horizon") {
      cfg.horizon = value.get<long>();
    } else if (key == "budget") {
      cfg.budget = value.get<long>();
    } else if (key == "sketch_fraction") {
      cfg.sketch_fraction = value.get<double>();
    } else if (key == "taus") {
      cfg.taus = number_list<double>(value, key);
    } else if (key == "output_dir") {
      cfg.output_dir = value.get<std::string>();
    } else if (key == "write_histories") {
      cfg.write_histories = value.get<bool>();
    } else if (key == "regret_dim_cap") {
      cfg.regret_dim_cap = value.get<int>();
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::vector<std::string> builtin_suite(int d) {
  if (d < 1) throw std::invalid_argument("builtin_suite: d must be >= 1");
  const std::string n = std::to_string(d);
  if (d >= 1000) {
    return {"quad_cond10:" + n, "broyden_tridiagonal:" + n,
            "linear_slope:" + n};
  }
  std::vector<std::string> suite = {
      "sphere:" + n,        "quad_cond10:" + n,
      "quad_cond100:" + n,  "quad_ill:" + n,
      "quad_rot:" + n,      "rosenbrock:" + n,
      "trigonometric:" + n, "broyden_tridiagonal:" + n,
      "linear_slope:" + n};
  if (d > 10) {
    suite.push_back("trigonometric:10@D=" + n + ",seed=1");
  }
  return suite;
}

double performance_ratio(double f0, double f_rand, double f_ucb) {
  if (!(f_rand <= f0) || !(f_ucb <= f0)) {
    throw std::invalid_argument(
        "performance_ratio: finals above the start indicate a non-monotone "
        "trace");
  }
  const double denom = std::max({f0 - f_rand, f0 - f_ucb, 1.0});
  return (f_rand - f_ucb) / denom;
}

DataProfile data_profile(const std::vector<SolveTrace>& traces, double tau,
                         int d) {
  if (traces.empty()) {
    throw std::invalid_argument("data_profile: no traces");
  }
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("data_profile: tau must lie in (0, 1)");
  }
  if (d < 1) throw std::invalid_argument("data_profile: d must be >= 1");

  std::vector<std::string> solvers;
  std::vector<std::string> instances;
  for (const SolveTrace& t : traces) {
    if (t.curve.empty()) {
      throw std::invalid_argument("data_profile: empty curve for " +
                                  t.solver + " on " + t.instance);
    }
    long prev_e = 0;
    double prev_v = t.curve.front().second;
    for (const auto& [e, v] : t.curve) {
      if (e <= prev_e || v > prev_v) {
        throw std::invalid_argument(
            "data_profile: curve not monotone for " + t.solver + " on " +
            t.instance);
      }
      prev_e = e;
      prev_v = v;
    }
    if (std::find(solvers.begin(), solvers.end(), t.solver) == solvers.end()) {
      solvers.push_back(t.solver);
    }
    if (std::find(instances.begin(), instances.end(), t.instance) ==
        instances.end()) {
      instances.push_back(t.instance);
    }
  }

  // Index traces and enforce the shared-instance precondition.
  std::map<std::pair<std::string, std::string>, const SolveTrace*> by_cell;
  for (const SolveTrace& t : traces) {
    if (!by_cell.emplace(std::make_pair(t.solver, t.instance), &t).second) {
      throw std::invalid_argument("data_profile: duplicate trace for " +
                                  t.solver + " on " + t.instance);
    }
  }
  for (const std::string& s : solvers) {
    for (const std::string& i : instances) {
      if (!by_cell.count({s, i})) {
        throw std::invalid_argument("data_profile: solver " + s +
                                    " is missing instance " + i);
      }
    }
  }

  // Per instance: consistent start and the best value any solver reached.
  std::map<std::string, double> f0_of, fL_of;
  for (const std::string& i : instances) {
    for (const std::string& s : solvers) {
      const SolveTrace& t = *by_cell.at({s, i});
      const double best = t.curve.back().second;
      if (!f0_of.count(i)) {
        f0_of[i] = t.f0;
        fL_of[i] = best;
      } else {
        if (std::abs(t.f0 - f0_of[i]) >
            1e-9 * std::max(1.0, std::abs(f0_of[i]))) {
          throw std::invalid_argument(
              "data_profile: solvers disagree on f0 for " + i);
        }
        fL_of[i] = std::min(fL_of[i], best);
      }
    }
  }

  const long unit = d + 2;
  long max_evals = 0;
  for (const SolveTrace& t : traces) {
    max_evals = std::max(
        max_evals, std::max(t.total_evals, t.curve.back().first));
  }
  const long max_units = (max_evals + unit - 1) / unit;

  DataProfile profile;
  profile.solvers = solvers;
  profile.max_units = max_units;
  for (const std::string& s : solvers) {
    std::vector<double> curve(static_cast<std::size_t>(max_units) + 1, 0.0);
    for (const std::string& i : instances) {
      const SolveTrace& t = *by_cell.at({s, i});
      const double need = (1.0 - tau) * (f0_of[i] - fL_of[i]);
      long solved_at = -1;
      for (const auto& [e, v] : t.curve) {
        if (f0_of[i] - v >= need) {
          solved_at = e;
          break;
        }
      }
      if (solved_at < 0) continue;
      // Solved within b units once b*(d+2) evaluations cover solved_at.
      const long first_unit = (solved_at + unit - 1) / unit;
      for (long b = first_unit; b <= max_units; ++b) {
        curve[static_cast<std::size_t>(b)] += 1.0;
      }
    }
    for (double& v : curve) v /= static_cast<double>(instances.size());
    profile.fractions.push_back(std::move(curve));
  }
  return profile;
}

void write_profile_csv(const DataProfile& profile, std::ostream& out) {
  out << "solver,budget_units,fraction\n";
  for (std::size_t i = 0; i < profile.solvers.size(); ++i) {
    for (long b = 0; b <= profile.max_units; ++b) {
      out << csv_field(profile.solvers[i]) << ',' << b << ','
          << fmt_double(profile.fractions[i][static_cast<std::size_t>(b)])
          << '\n';
    }
  }
}

void write_profile_svg(const DataProfile& profile, std::ostream& out) {
  const double width = 640, height = 420;
  const double left = 60, right = width - 170, top = 20, bottom = height - 45;
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                           "#9467bd", "#ff7f0e", "#8c564b"};
  const std::size_t ncolors = sizeof palette / sizeof palette[0];
  const double units = std::max<long>(profile.max_units, 1);
  auto sx = [&](double b) { return left + (right - left) * b / units; };
  auto sy = [&](double f) { return bottom - (bottom - top) * f; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes with a light grid at the quarter lines.
  for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    out << "<line x1=\"" << left << "\" y1=\"" << sy(f) << "\" x2=\"" << right
        << "\" y2=\"" << sy(f) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << sy(f) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << f << "</text>\n";
  }
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  const long xticks = std::min<long>(profile.max_units, 8);
  for (long t = 0; t <= xticks; ++t) {
    const double b = units * static_cast<double>(t) / std::max<long>(xticks, 1);
    out << "<text x=\"" << sx(b) << "\" y=\"" << bottom + 16
        << "\" font-size=\"12\" text-anchor=\"middle\">"
        << static_cast<long>(b + 0.5) << "</text>\n";
  }
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 10
      << "\" font-size=\"13\" text-anchor=\"middle\">budget (units of "
         "d+2 evaluations)</text>\n";
  out << "<text x=\"14\" y=\"" << (top + bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "14 "
      << (top + bottom) / 2 << ")\">fraction solved</text>\n";

  for (std::size_t i = 0; i < profile.solvers.size(); ++i) {
    const auto& f = profile.fractions[i];
    std::ostringstream path;
    path << "M " << sx(0) << ' ' << sy(f[0]);
    for (long b = 1; b <= profile.max_units; ++b) {
      // Step curve: hold the old level until the unit boundary.
      path << " H " << sx(static_cast<double>(b)) << " V "
           << sy(f[static_cast<std::size_t>(b)]);
    }
    const char* color = palette[i % ncolors];
    out << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<line x1=\"" << right + 12 << "\" y1=\"" << top + 14 * (i + 1)
        << "\" x2=\"" << right + 34 << "\" y2=\"" << top + 14 * (i + 1)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << right + 40 << "\" y=\"" << top + 14 * (i + 1) + 4
        << "\" font-size=\"12\">" << profile.solvers[i] << "</text>\n";
  }
  out << "</svg>\n";
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  std::vector<SolverSpec> solvers;
  for (const std::string& label : config.solvers) {
    solvers.push_back(parse_solver(label));
  }

  const fs::path root(config.output_dir);
  fs::create_directories(root / "histories");
  fs::create_directories(root / "curves");
  fs::create_directories(root / "profiles");

  ExperimentResult result;
  std::vector<SolveTrace> traces;
  std::vector<std::string> dropped_instances;
  ordered_json regret_rows = ordered_json::array();
  int profile_dim = 0;

  // The head-to-head ratio needs a random arm and a confidence arm of the
  // same family; the gradient-descent pair takes precedence.
  std::string rand_arm, ucb_arm;
  auto has = [&](const char* label) {
    return std::find(config.solvers.begin(), config.solvers.end(), label) !=
           config.solvers.end();
  };
  if (has("gd:random") && has("gd:ucb")) {
    rand_arm = "gd:random";
    ucb_arm = "gd:ucb";
  } else if (has("pounders:random") && has("pounders:ucb")) {
    rand_arm = "pounders:random";
    ucb_arm = "pounders:ucb";
  }

  for (const std::string& problem_id : config.problems) {
    std::optional<Problem> base;
    try {
      base.emplace(make_problem_from_id(problem_id));
    } catch (const std::exception& e) {
      result.failures.push_back(problem_id + ": " + e.what());
      continue;
    }
    const int d = base->dim();
    if (profile_dim == 0) profile_dim = d;
    const int p = std::max(
        1, static_cast<int>(std::ceil(config.sketch_fraction * d)));
    const long tr_budget = config.budget > 0 ? config.budget : 50L * (d + 2);

    for (std::uint64_t seed : config.seeds) {
      std::map<std::string, CellOutcome> outcomes;
      const std::string instance =
          problem_id + "#s" + std::to_string(seed);
      bool instance_complete = true;

      for (const SolverSpec& solver : solvers) {
        const std::string cell =
            problem_id + " / " + solver.label + " / seed " +
            std::to_string(seed);
        try {
          Problem prob = *base;
          Rng rng(seed);
          RunHistory history;
          GdConfig gd_cfg;
          if (solver.is_gd) {
            gd_cfg.sketch_spec.kind = SketchKind::gaussian;
            gd_cfg.sketch_spec.p = p;
            gd_cfg.horizon = config.horizon;
            gd_cfg.use_ucb = solver.gd_ucb;
            gd_cfg.solver_label = solver.label;
            gd_cfg.record_full =
                solver.gd_ucb && d <= config.regret_dim_cap;
            history = run_subspace_gd(prob, gd_cfg, rng);
          } else {
            TrConfig tr_cfg;
            tr_cfg.variant = solver.tr;
            tr_cfg.budget = tr_budget;
            tr_cfg.solver_label = solver.label;
            history = run_ss_pounders(prob, tr_cfg, rng);
          }
          if (history.eval_curve.empty()) {
            throw std::runtime_error("run produced no evaluations");
          }

          const std::string stem = sanitize(problem_id) + "__" +
                                   sanitize(solver.label) + "__s" +
                                   std::to_string(seed);
          if (config.write_histories) {
            std::ostringstream jsonl;
            write_history_jsonl(history, jsonl);
            write_atomic(root / "histories" / (stem + ".jsonl"),
                         jsonl.str());
            result.files.push_back("histories/" + stem + ".jsonl");
          }
          std::ostringstream curve_csv;
          curve_csv << "evals,best\n";
          for (const auto& [e, v] : history.eval_curve) {
            curve_csv << e << ',' << fmt_double(v) << '\n';
          }
          write_atomic(root / "curves" / (stem + ".csv"), curve_csv.str());
          result.files.push_back("curves/" + stem + ".csv");

          SolveTrace trace;
          trace.solver = solver.label;
          trace.instance = instance;
          trace.f0 = history.eval_curve.front().second;
          trace.curve = history.eval_curve;
          trace.total_evals = history.total_evals;
          traces.push_back(std::move(trace));

          CellOutcome out;
          out.ok = true;
          out.f0 = history.eval_curve.front().second;
          out.final_f = history.eval_curve.back().second;
          outcomes[solver.label] = out;

          // Regret diagnostics for confidence-rule descent runs that kept
          // full records: replay the estimator and check the bounds.
          if (solver.is_gd && solver.gd_ucb && gd_cfg.record_full) {
            RegretTrace rt = build_regret_trace(prob, history, gd_cfg);
            const double dk = dynamic_regret(rt);
            const double vk = total_variation(rt);
            std::vector<double> bounds_u;
            bounds_u.reserve(rt.entries.size());
            for (const RegretEntry& entry : rt.entries) {
              bounds_u.push_back(entry.U);
            }
            const double ceiling =
                regret_bound(d, rt.lambda, rt.memory, vk, bounds_u,
                             static_cast<long>(rt.entries.size()));
            ordered_json row;
            row["problem"] = problem_id;
            row["seed"] = seed;
            row["dim"] = d;
            // The per-step error bound assumes unit probe directions, which
            // holds only when every column is a confidence pick (p = 1).
            if (rt.unit_directions && rt.has_estimator) {
              const GradErrorReport err = check_gradient_error_bound(rt);
              row["gradient_bound_violations"] = err.violations;
            } else {
              row["gradient_bound_violations"] = nullptr;
            }
            row["dynamic_regret"] = dk;
            row["total_variation"] = vk;
            row["regret_ceiling"] = ceiling;
            row["within_ceiling"] = dk <= ceiling;
            regret_rows.push_back(std::move(row));
          }
        } catch (const std::exception& e) {
          result.failures.push_back(cell + ": " + e.what());
          instance_complete = false;
        }
      }

      if (!instance_complete) dropped_instances.push_back(instance);
      if (!rand_arm.empty() && outcomes.count(rand_arm) &&
          outcomes.count(ucb_arm) && outcomes[rand_arm].ok &&
          outcomes[ucb_arm].ok) {
        RatioRow row;
        row.problem = problem_id;
        row.seed = seed;
        row.r = performance_ratio(outcomes[rand_arm].f0,
                                  outcomes[rand_arm].final_f,
                                  outcomes[ucb_arm].final_f);
        result.ratios.push_back(row);
      }
    }
  }

  // Profiles use only instances every solver completed.
  std::vector<SolveTrace> complete;
  for (const SolveTrace& t : traces) {
    if (std::find(dropped_instances.begin(), dropped_instances.end(),
                  t.instance) == dropped_instances.end()) {
      complete.push_back(t);
    }
  }
  if (!complete.empty() && profile_dim > 0) {
    for (double tau : config.taus) {
      DataProfile profile = data_profile(complete, tau, profile_dim);
      char tag[32];
      std::snprintf(tag, sizeof tag, "%g", tau);
      std::ostringstream csv;
      write_profile_csv(profile, csv);
      write_atomic(root / "profiles" /
                       ("profile_tau" + std::string(tag) + ".csv"),
                   csv.str());
      result.files.push_back("profiles/profile_tau" + std::string(tag) +
                             ".csv");
      std::ostringstream svg;
      write_profile_svg(profile, svg);
      write_atomic(root / "profiles" /
                       ("profile_tau" + std::string(tag) + ".svg"),
                   svg.str());
      result.files.push_back("profiles/profile_tau" + std::string(tag) +
                             ".svg");
      result.profiles.emplace(tau, std::move(profile));
    }
  }

  std::ostringstream ratios_csv;
  ratios_csv << "problem,seed,r\n";
  for (const RatioRow& row : result.ratios) {
    ratios_csv << csv_field(row.problem) << ',' << row.seed << ',' << fmt_double(row.r)
               << '\n';
  }
  write_atomic(root / "ratios.csv", ratios_csv.str());
  result.files.push_back("ratios.csv");

  ordered_json report;
  report["problems"] = config.problems;
  report["solvers"] = config.solvers;
  report["seeds"] = config.seeds;
  report["horizon"] = config.horizon;
  report["budget"] = config.budget;
  report["sketch_fraction"] = config.sketch_fraction;
  report["taus"] = config.taus;
  report["profile_dim"] = profile_dim;
  report["failures"] = result.failures;
  report["dropped_instances"] = dropped_instances;
  report["regret"] = std::move(regret_rows);
  report["files"] = result.files;
  write_atomic(root / "report.json", report.dump(2) + "\n");
  result.files.push_back("report.json");

  return result;
}

}  // namespace ssopt
