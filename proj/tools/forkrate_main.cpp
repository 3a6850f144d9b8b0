// forkrate: rate-function computations, design queries, Monte Carlo tail
// simulation and figure-grade parameter sweeps for the three block
// dissemination schemes (iid / ar / many), with CSV or JSON output.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "forkrate/config_json.hpp"
#include "forkrate/errors.hpp"
#include "forkrate/ldp_ar.hpp"
#include "forkrate/ldp_iid.hpp"
#include "forkrate/ldp_many.hpp"
#include "forkrate/params.hpp"
#include "forkrate/sim.hpp"
#include "forkrate/threads.hpp"

namespace {

using json = nlohmann::json;
using forkrate::errc;
using forkrate::raise;
using forkrate::Scheme;

std::string format9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

int exit_code_for(errc code) {
  switch (code) {
    case errc::io_error:
      return 3;
    case errc::insufficient_points:
    case errc::empty_samples:
      return 4;
    default:
      return 2;
  }
}

void emit_error(const std::string& code, const std::string& message) {
  json doc;
  doc["error"] = {{"code", code}, {"message", message}};
  std::cerr << doc.dump() << "\n";
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot open output file: " + path);
  out << body;
  out.flush();
  if (!out) raise(errc::io_error, "write failure on output file: " + path);
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t idx = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &idx);
  } catch (const std::exception&) {
    raise(errc::config_error, what + " is not a number: '" + text + "'");
  }
  if (idx != text.size()) {
    raise(errc::config_error, what + " is not a number: '" + text + "'");
  }
  return v;
}

// ===== rate =====

// One slot per flag; a JSON config fills slots first, flags override.
struct RateInputs {
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<double> diff;  // --k / --h, service minus arrival rate
  std::optional<double> xi;
  std::optional<double> arg;  // --q / --b / --u, scheme-matched
  std::string mode;
};

const char* arg_flag_name(Scheme s) {
  switch (s) {
    case Scheme::iid: return "q";
    case Scheme::ar: return "b";
    case Scheme::many: return "u";
  }
  return "?";
}

const char* lambda_key_name(Scheme s) {
  switch (s) {
    case Scheme::iid: return "lambda";
    case Scheme::ar: return "lambda_t";
    case Scheme::many: return "lambda_bar";
  }
  return "?";
}

const char* mu_key_name(Scheme s) {
  switch (s) {
    case Scheme::iid: return "mu";
    case Scheme::ar: return "mu_t";
    case Scheme::many: return "mu_bar";
  }
  return "?";
}

RateInputs rate_inputs_from_config(Scheme scheme, const std::string& path) {
  const json doc = [&] {
    try {
      return json::parse(forkrate::read_text_file(path));
    } catch (const json::exception& e) {
      raise(errc::config_error, std::string("malformed JSON: ") + e.what());
    }
  }();
  if (!doc.is_object()) raise(errc::config_error, "rate config must be a JSON object");

  const std::string lambda_key = lambda_key_name(scheme);
  const std::string mu_key = mu_key_name(scheme);
  const std::string arg_key = arg_flag_name(scheme);

  std::vector<std::string> allowed = {lambda_key, mu_key, "k", arg_key, "mode"};
  if (scheme == Scheme::ar) allowed.push_back("xi");
  if (scheme == Scheme::many) allowed.push_back("h");
  for (const auto& item : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      raise(errc::config_error, "unknown key '" + item.key() + "' in rate config");
    }
  }

  const auto number = [&](const std::string& key) -> std::optional<double> {
    if (!doc.contains(key)) return std::nullopt;
    if (!doc.at(key).is_number()) {
      raise(errc::config_error, "key '" + key + "' in rate config must be a number");
    }
    return doc.at(key).get<double>();
  };

  RateInputs in;
  in.lambda = number(lambda_key);
  in.mu = number(mu_key);
  in.diff = number("k");
  if (scheme == Scheme::many) {
    const auto h = number("h");
    if (h) {
      if (in.diff) raise(errc::config_error, "rate config sets both 'k' and 'h'");
      in.diff = h;
    }
  }
  if (scheme == Scheme::ar) in.xi = number("xi");
  in.arg = number(arg_key);
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) {
      raise(errc::config_error, "key 'mode' in rate config must be a string");
    }
    in.mode = doc.at("mode").get<std::string>();
  }
  return in;
}

double resolve_service(const std::optional<double>& mu,
                       const std::optional<double>& diff, double lambda) {
  if (mu && diff) {
    raise(errc::config_error, "give exactly one of --mu or --k/--h, not both");
  }
  if (mu) return *mu;
  if (diff) return lambda + *diff;
  raise(errc::config_error, "missing service rate: give --mu or --k/--h");
}

forkrate::RateMode resolve_mode(Scheme scheme, const std::string& name) {
  if (scheme == Scheme::iid) {
    if (!name.empty() && name != "closed_form") {
      raise(errc::config_error,
            "scheme iid has a closed form only; --mode does not apply");
    }
    return forkrate::RateMode::closed_form;
  }
  if (name.empty()) return forkrate::RateMode::exact_numeric;
  const forkrate::RateMode mode = forkrate::rate_mode_from_name(name);
  if (mode == forkrate::RateMode::closed_form) {
    raise(errc::config_error,
          "no closed form exists for this scheme; use exact_numeric or taylor");
  }
  return mode;
}

struct RateCli {
  std::string scheme;
  std::string config_path;
  std::optional<double> lambda, mu, k, h, xi, q, b, u;
  std::string mode;
  bool as_json = false;
};

void run_rate(const RateCli& o) {
  const Scheme scheme = forkrate::scheme_from_name(o.scheme);

  RateInputs in;
  if (!o.config_path.empty()) in = rate_inputs_from_config(scheme, o.config_path);

  if (o.lambda) in.lambda = o.lambda;
  if (o.mu || o.k || o.h) {
    if (o.k && o.h) raise(errc::config_error, "give --k or --h, not both");
    in.mu = o.mu;
    in.diff = o.k ? o.k : o.h;
  }
  if (o.xi) {
    if (scheme != Scheme::ar) {
      raise(errc::config_error, "--xi applies to the ar scheme only");
    }
    in.xi = o.xi;
  }
  if (o.q && scheme != Scheme::iid) {
    raise(errc::config_error, "--q applies to the iid scheme only");
  }
  if (o.b && scheme != Scheme::ar) {
    raise(errc::config_error, "--b applies to the ar scheme only");
  }
  if (o.u && scheme != Scheme::many) {
    raise(errc::config_error, "--u applies to the many scheme only");
  }
  if (o.q) in.arg = o.q;
  if (o.b) in.arg = o.b;
  if (o.u) in.arg = o.u;
  if (!o.mode.empty()) in.mode = o.mode;

  if (!in.lambda) raise(errc::config_error, "missing --lambda");
  if (!in.arg) {
    raise(errc::config_error,
          std::string("missing --") + arg_flag_name(scheme));
  }
  const double lambda = *in.lambda;
  const double service = resolve_service(in.mu, in.diff, lambda);
  const forkrate::RateMode mode = resolve_mode(scheme, in.mode);

  forkrate::RateResult r;
  switch (scheme) {
    case Scheme::iid:
      r = forkrate::rate_iid(*in.arg, forkrate::IidParams{lambda, service});
      break;
    case Scheme::ar: {
      if (!in.xi) raise(errc::config_error, "scheme ar needs --xi");
      forkrate::ArParams p;
      p.lambda_t = lambda;
      p.mu_t = service;
      p.xi = *in.xi;
      r = forkrate::rate_ar(*in.arg, p, mode);
      break;
    }
    case Scheme::many: {
      forkrate::ManyParams p;
      p.lambda_bar = lambda;
      p.mu_bar = service;
      r = forkrate::rate_many(*in.arg, p, mode);
      break;
    }
  }

  if (o.as_json) {
    json doc;
    doc["schema_version"] = 1;
    doc["scheme"] = forkrate::scheme_name(scheme);
    doc["I"] = r.value;
    doc["t_star"] = r.t_star;
    if (r.y_star) doc["y_star"] = *r.y_star;
    doc["mode"] = forkrate::rate_mode_name(r.mode);
    std::cout << doc.dump() << "\n";
    return;
  }
  std::cout << "I = " << format9(r.value) << "\n";
  std::cout << "t_star = " << format9(r.t_star) << "\n";
  if (r.y_star) std::cout << "y_star = " << format9(*r.y_star) << "\n";
  std::cout << "mode = " << forkrate::rate_mode_name(r.mode) << "\n";
}

// ===== design =====

struct DesignCli {
  double delta = 0.0;
  std::optional<double> lambda, mu, k, omega;
  bool as_json = false;
};

void run_design_omega(const DesignCli& o) {
  if (!o.lambda) raise(errc::config_error, "missing --lambda");
  forkrate::DesignQuery q;
  q.delta = o.delta;
  q.mu = resolve_service(o.mu, o.k, *o.lambda);
  const double omega_star = forkrate::solve_design(q, *o.lambda);
  if (o.as_json) {
    json doc{{"schema_version", 1}, {"delta", o.delta}, {"omega_star", omega_star}};
    std::cout << doc.dump() << "\n";
  } else {
    std::cout << format9(omega_star) << "\n";
  }
}

void run_design_mu(const DesignCli& o) {
  if (!o.lambda) raise(errc::config_error, "missing --lambda");
  if (!o.omega) raise(errc::config_error, "missing --omega");
  forkrate::DesignQuery q;
  q.delta = o.delta;
  q.omega = o.omega;
  const double mu_star = forkrate::solve_design(q, *o.lambda);
  if (o.as_json) {
    json doc{{"schema_version", 1}, {"delta", o.delta}, {"mu_star", mu_star}};
    std::cout << doc.dump() << "\n";
  } else {
    std::cout << format9(mu_star) << "\n";
  }
}

// ===== simulate =====

struct SimulateCli {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
};

void run_simulate(const SimulateCli& o) {
  const forkrate::SimConfig cfg =
      forkrate::parse_sim_config(forkrate::read_text_file(o.config_path));

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> samples = forkrate::simulate_paths(cfg);
  const std::vector<forkrate::TailEstimate> estimates =
      forkrate::estimate_tails(samples, cfg.omega_grid, cfg.horizon);
  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - t0;

  const std::string body = o.format == "json"
                               ? forkrate::tail_table_json(cfg, estimates, samples)
                               : forkrate::tail_table_csv(estimates, cfg.seed);
  write_output(o.out_path, body);

  std::fprintf(stderr, "simulate: n_paths=%lld horizon=%lld seed=%llu wall_s=%.3f\n",
               static_cast<long long>(cfg.n_paths),
               static_cast<long long>(cfg.horizon),
               static_cast<unsigned long long>(cfg.seed), wall.count());
}

// ===== compare =====

struct CompareCli {
  std::string config_path;
  std::string out_path;
  double tolerance = 0.15;
};

void run_compare(const CompareCli& o) {
  if (!(o.tolerance > 0.0)) {
    raise(errc::config_error, "--tolerance must be > 0");
  }
  const forkrate::CompareConfig cfg =
      forkrate::parse_compare_config(forkrate::read_text_file(o.config_path));

  const std::vector<double> samples = forkrate::simulate_paths(cfg.sim);
  const std::vector<forkrate::TailEstimate> estimates =
      forkrate::estimate_tails(samples, cfg.sim.omega_grid, cfg.sim.horizon);

  // The empirical fit runs first so degenerate runs (every p_hat zero) fail
  // with InsufficientPoints before any theory-side validation can trigger.
  const forkrate::DecayFit fit = forkrate::fit_decay_rate(estimates);

  double rate_theory = 0.0;
  switch (cfg.sim.scheme) {
    case Scheme::iid: {
      const auto p = forkrate::require_stable(
          std::get<forkrate::IidParams>(cfg.sim.params));
      rate_theory = std::log(p.mu / p.lambda);
      break;
    }
    case Scheme::ar: {
      const double b = *cfg.threshold;
      rate_theory =
          forkrate::rate_ar(b, std::get<forkrate::ArParams>(cfg.sim.params))
              .value / b;
      break;
    }
    case Scheme::many: {
      const double u = *cfg.threshold;
      rate_theory =
          forkrate::rate_many(u, std::get<forkrate::ManyParams>(cfg.sim.params))
              .value / u;
      break;
    }
  }

  const double rel_err = std::abs(fit.slope - rate_theory) / rate_theory;
  const char* verdict = rel_err <= o.tolerance ? "OK" : "MISMATCH";

  std::ostringstream out;
  out << "omega,p_theory,p_hat,ci_half_width,flag\n";
  for (const auto& e : estimates) {
    const double p_theory = std::exp(-e.omega * rate_theory);
    out << format9(e.omega) << ',' << format9(p_theory) << ','
        << format9(e.p_hat) << ',' << format9(e.ci_half_width) << ','
        << (e.p_hat > 0.0 ? verdict : "excluded") << '\n';
  }
  out << "slope_empirical,rate_theory,rel_err\n";
  out << format9(fit.slope) << ',' << format9(rate_theory) << ','
      << format9(rel_err) << '\n';
  write_output(o.out_path, out.str());
}

// ===== sweep =====

struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 0;
};

struct SweepRun {
  Scheme scheme = Scheme::iid;
  forkrate::RateMode mode = forkrate::RateMode::closed_form;
  std::vector<AxisSpec> axes;  // 1 or 2, row-major in output
  std::map<std::string, double> fixed;
};

AxisSpec parse_axis_spec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    raise(errc::config_error,
          "sweep axis must look like name=min:max:steps, got '" + text + "'");
  }
  AxisSpec ax;
  ax.name = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    raise(errc::config_error,
          "sweep axis must look like name=min:max:steps, got '" + text + "'");
  }
  ax.min = parse_double(rest.substr(0, c1), "axis min");
  ax.max = parse_double(rest.substr(c1 + 1, c2 - c1 - 1), "axis max");
  const double steps_raw = parse_double(rest.substr(c2 + 1), "axis steps");
  if (steps_raw != std::floor(steps_raw) || steps_raw < 2 || steps_raw > 100000) {
    raise(errc::config_error, "axis steps must be an integer >= 2");
  }
  ax.steps = static_cast<int>(steps_raw);
  if (!(ax.min < ax.max)) {
    raise(errc::config_error, "axis min must be strictly below axis max");
  }
  return ax;
}

std::vector<double> linspace(const AxisSpec& ax) {
  std::vector<double> v(static_cast<std::size_t>(ax.steps));
  for (int i = 0; i < ax.steps; ++i) {
    v[static_cast<std::size_t>(i)] =
        ax.min + (ax.max - ax.min) * static_cast<double>(i) /
                     static_cast<double>(ax.steps - 1);
  }
  return v;
}

SweepRun preset_run(const std::string& name) {
  SweepRun run;
  const auto ar = [&](AxisSpec a1, AxisSpec a2,
                      std::map<std::string, double> fixed) {
    run.scheme = Scheme::ar;
    run.mode = forkrate::RateMode::exact_numeric;
    run.axes = {std::move(a1), std::move(a2)};
    run.fixed = std::move(fixed);
  };
  if (name == "fig1") {
    run.scheme = Scheme::iid;
    run.mode = forkrate::RateMode::closed_form;
    run.axes = {{"q", 1.0, 10.0, 10}, {"k", 0.5, 5.0, 10}};
    run.fixed = {{"lambda", 1.0}};
  } else if (name == "fig2") {
    ar({"b", 5.0, 10.0, 2}, {"xi", -0.8, 0.8, 9}, {{"lambda", 30.0}, {"k", 2.0}});
  } else if (name == "fig3") {
    ar({"b", 2.0, 20.0, 10}, {"k", 0.5, 2.0, 2}, {{"lambda", 30.0}, {"xi", -0.2}});
  } else if (name == "fig4") {
    ar({"k", 0.5, 5.0, 10}, {"xi", -0.2, 0.8, 2}, {{"lambda", 30.0}, {"b", 5.0}});
  } else if (name == "fig7") {
    run.scheme = Scheme::many;
    run.mode = forkrate::RateMode::exact_numeric;
    run.axes = {{"u", 5.0, 8.0, 2}, {"h", 1.0, 5.0, 5}};
    run.fixed = {{"lambda", 30.0}};
  } else if (name == "fig8") {
    run.scheme = Scheme::many;
    run.mode = forkrate::RateMode::exact_numeric;
    run.axes = {{"u", 2.0, 20.0, 10}, {"h", 2.0, 20.0, 10}};
    run.fixed = {{"lambda", 30.0}};
  } else {
    raise(errc::config_error,
          "unknown preset '" + name +
              "' (expected fig1, fig2, fig3, fig4, fig7 or fig8)");
  }
  return run;
}

std::optional<double> sweep_lookup(const SweepRun& run, double a1, double a2,
                                   const std::string& name) {
  if (!run.axes.empty() && run.axes[0].name == name) return a1;
  if (run.axes.size() > 1 && run.axes[1].name == name) return a2;
  const auto it = run.fixed.find(name);
  if (it != run.fixed.end()) return it->second;
  return std::nullopt;
}

void validate_sweep_shape(const SweepRun& run) {
  if (run.axes.empty() || run.axes.size() > 2) {
    raise(errc::config_error, "sweep needs 1 or 2 --sweep axes");
  }
  std::vector<std::string> allowed = {"k", "h"};
  switch (run.scheme) {
    case Scheme::iid: allowed.push_back("q"); break;
    case Scheme::ar: allowed.push_back("b"); allowed.push_back("xi"); break;
    case Scheme::many: allowed.push_back("u"); break;
  }
  for (const auto& ax : run.axes) {
    if (std::find(allowed.begin(), allowed.end(), ax.name) == allowed.end()) {
      raise(errc::config_error,
            "axis '" + ax.name + "' cannot be swept for this scheme");
    }
    if (run.fixed.count(ax.name) != 0) {
      raise(errc::config_error, "'" + ax.name + "' is both swept and fixed");
    }
  }
  if (run.axes.size() == 2 && run.axes[0].name == run.axes[1].name) {
    raise(errc::config_error, "both sweep axes name the same parameter");
  }

  const auto present = [&](const std::string& name) {
    return run.fixed.count(name) != 0 ||
           std::any_of(run.axes.begin(), run.axes.end(),
                       [&](const AxisSpec& ax) { return ax.name == name; });
  };
  if (run.fixed.count("lambda") == 0) {
    raise(errc::config_error, "sweep needs a fixed --lambda");
  }
  const bool has_mu = run.fixed.count("mu") != 0;
  const bool has_diff = present("k") || present("h");
  if (present("k") && present("h")) {
    raise(errc::config_error, "give --k or --h, not both");
  }
  if (has_mu == has_diff) {
    raise(errc::config_error, "give exactly one of --mu or --k/--h");
  }
  if (!present(arg_flag_name(run.scheme))) {
    raise(errc::config_error,
          std::string("sweep needs '") + arg_flag_name(run.scheme) +
              "' as an axis or fixed flag");
  }
  if (run.scheme == Scheme::ar && !present("xi")) {
    raise(errc::config_error, "scheme ar needs xi as an axis or fixed flag");
  }
  if (run.scheme != Scheme::ar && present("xi")) {
    raise(errc::config_error, "xi applies to the ar scheme only");
  }
}

forkrate::RateResult eval_sweep_point(const SweepRun& run, double a1, double a2) {
  const auto get = [&](const std::string& name) {
    return sweep_lookup(run, a1, a2, name);
  };
  const double lambda = *get("lambda");
  const auto diff = get("k") ? get("k") : get("h");
  const double service =
      get("mu") ? *get("mu") : lambda + *diff;
  const double arg = *get(arg_flag_name(run.scheme));

  switch (run.scheme) {
    case Scheme::iid:
      return forkrate::rate_iid(arg, forkrate::IidParams{lambda, service});
    case Scheme::ar: {
      forkrate::ArParams p;
      p.lambda_t = lambda;
      p.mu_t = service;
      p.xi = *get("xi");
      return forkrate::rate_ar(arg, p, run.mode);
    }
    case Scheme::many: {
      forkrate::ManyParams p;
      p.lambda_bar = lambda;
      p.mu_bar = service;
      return forkrate::rate_many(arg, p, run.mode);
    }
  }
  raise(errc::config_error, "unreachable scheme");
}

bool is_feasibility_error(errc code) {
  switch (code) {
    case errc::unstable:
    case errc::infeasible:
    case errc::non_positive_rate:
    case errc::domain_error:
    case errc::xi_out_of_range:
      return true;
    default:
      return false;
  }
}

struct SweepCli {
  std::string preset;
  std::string scheme;
  std::vector<std::string> axes;
  std::optional<double> lambda, mu, k, h, xi, b, u, q;
  std::string mode;
  std::string out_path;
  std::string format = "csv";
};

void run_sweep(const SweepCli& o) {
  SweepRun run;
  if (!o.preset.empty()) {
    const bool extras = !o.scheme.empty() || !o.axes.empty() ||
                        !o.mode.empty() || o.lambda || o.mu || o.k || o.h ||
                        o.xi || o.b || o.u || o.q;
    if (extras) {
      raise(errc::config_error,
            "--preset fixes the whole grid; drop the other sweep flags");
    }
    run = preset_run(o.preset);
  } else {
    if (o.scheme.empty()) {
      raise(errc::config_error, "sweep needs --scheme or --preset");
    }
    run.scheme = forkrate::scheme_from_name(o.scheme);
    run.mode = resolve_mode(run.scheme, o.mode);
    for (const auto& spec : o.axes) run.axes.push_back(parse_axis_spec(spec));
    const auto put = [&](const char* name, const std::optional<double>& v) {
      if (v) run.fixed[name] = *v;
    };
    put("lambda", o.lambda);
    put("mu", o.mu);
    put("k", o.k);
    put("h", o.h);
    put("xi", o.xi);
    put("b", o.b);
    put("u", o.u);
    put("q", o.q);
  }
  validate_sweep_shape(run);

  const std::vector<double> axis1 = linspace(run.axes[0]);
  const std::vector<double> axis2 =
      run.axes.size() > 1 ? linspace(run.axes[1]) : std::vector<double>{0.0};
  const std::int64_t n_inner = static_cast<std::int64_t>(axis2.size());
  const std::int64_t n_total =
      static_cast<std::int64_t>(axis1.size()) * n_inner;

  std::vector<std::optional<forkrate::RateResult>> results(
      static_cast<std::size_t>(n_total));
  forkrate::parallel_for(n_total, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const double a1 = axis1[static_cast<std::size_t>(i / n_inner)];
      const double a2 = axis2[static_cast<std::size_t>(i % n_inner)];
      try {
        results[static_cast<std::size_t>(i)] = eval_sweep_point(run, a1, a2);
      } catch (const forkrate::Error& e) {
        if (!is_feasibility_error(e.code())) throw;
        // leave the slot empty: clipped below
      }
    }
  });

  std::int64_t clipped = 0;
  for (const auto& r : results) {
    if (!r) ++clipped;
  }
  if (clipped == n_total) {
    raise(errc::infeasible,
          "every grid point violates the scheme's feasibility preconditions");
  }
  if (clipped > 0) {
    std::fprintf(stderr,
                 "sweep: clipped %lld of %lld grid points outside the "
                 "feasible region\n",
                 static_cast<long long>(clipped),
                 static_cast<long long>(n_total));
  }

  const std::string scheme_str = forkrate::scheme_name(run.scheme);
  const std::string mode_str = forkrate::rate_mode_name(run.mode);

  std::string body;
  if (o.format == "json") {
    json doc;
    doc["schema_version"] = 1;
    doc["scheme"] = scheme_str;
    doc["mode"] = mode_str;
    auto& axes = doc["axes"] = json::array();
    for (const auto& ax : run.axes) axes.push_back(ax.name);
    auto& rows = doc["rows"] = json::array();
    for (std::int64_t i = 0; i < n_total; ++i) {
      const auto& r = results[static_cast<std::size_t>(i)];
      if (!r) continue;
      json row;
      row[run.axes[0].name] = axis1[static_cast<std::size_t>(i / n_inner)];
      if (run.axes.size() > 1) {
        row[run.axes[1].name] = axis2[static_cast<std::size_t>(i % n_inner)];
      }
      row["I"] = r->value;
      row["t_star"] = r->t_star;
      row["y_star"] = r->y_star ? json(*r->y_star) : json(nullptr);
      rows.push_back(std::move(row));
    }
    body = doc.dump(2) + "\n";
  } else {
    std::ostringstream out;
    out << "scheme,mode," << run.axes[0].name;
    if (run.axes.size() > 1) out << ',' << run.axes[1].name;
    out << ",I,t_star,y_star\n";
    for (std::int64_t i = 0; i < n_total; ++i) {
      const auto& r = results[static_cast<std::size_t>(i)];
      if (!r) continue;
      out << scheme_str << ',' << mode_str << ','
          << format9(axis1[static_cast<std::size_t>(i / n_inner)]);
      if (run.axes.size() > 1) {
        out << ',' << format9(axis2[static_cast<std::size_t>(i % n_inner)]);
      }
      out << ',' << format9(r->value) << ',' << format9(r->t_star) << ',';
      if (r->y_star) out << format9(*r->y_star);
      out << '\n';
    }
    body = out.str();
  }
  write_output(o.out_path, body);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forking threat rates and large-deviation decay for block "
               "dissemination queues"};
  // long-form help only: the short -h slot would shadow the --h flag
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  RateCli rate_o;
  auto* rate = app.add_subcommand(
      "rate", "Rate-function value I with its minimizing time");
  rate->add_option("--scheme", rate_o.scheme, "iid | ar | many")->required();
  rate->add_option("--config", rate_o.config_path,
                   "JSON file with parameter keys (flags override)");
  rate->add_option("--lambda", rate_o.lambda, "mean arrival rate");
  rate->add_option("--mu", rate_o.mu, "mean service rate");
  rate->add_option("--k", rate_o.k, "service minus arrival rate");
  rate->add_option("--h", rate_o.h, "alias of --k");
  rate->add_option("--xi", rate_o.xi, "AR(1) coefficient (ar only)");
  rate->add_option("--q", rate_o.q, "backlog threshold (iid)");
  rate->add_option("--b", rate_o.b, "backlog threshold (ar)");
  rate->add_option("--u", rate_o.u, "backlog threshold (many)");
  rate->add_option("--mode", rate_o.mode,
                   "exact_numeric | taylor (ar/many; default exact_numeric)");
  rate->add_flag("--json", rate_o.as_json, "emit a JSON object");
  rate->callback([&rate_o] { run_rate(rate_o); });

  DesignCli design_o;
  auto* design = app.add_subcommand(
      "design", "Design queries for a target forking probability");
  design->require_subcommand(1);
  auto* design_omega = design->add_subcommand(
      "omega", "Smallest threshold with forking estimate <= delta");
  design_omega->add_option("--delta", design_o.delta, "target in (0, 1]")
      ->required();
  design_omega->add_option("--lambda", design_o.lambda, "mean arrival rate");
  design_omega->add_option("--mu", design_o.mu, "mean service rate");
  design_omega->add_option("--k", design_o.k, "service minus arrival rate");
  design_omega->add_flag("--json", design_o.as_json, "emit a JSON object");
  design_omega->callback([&design_o] { run_design_omega(design_o); });
  auto* design_mu = design->add_subcommand(
      "mu", "Smallest service rate with forking estimate <= delta");
  design_mu->add_option("--delta", design_o.delta, "target in (0, 1]")
      ->required();
  design_mu->add_option("--lambda", design_o.lambda, "mean arrival rate");
  design_mu->add_option("--omega", design_o.omega, "fixed backlog threshold");
  design_mu->add_flag("--json", design_o.as_json, "emit a JSON object");
  design_mu->callback([&design_o] { run_design_mu(design_o); });

  SimulateCli sim_o;
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo tail table for a JSON sim config");
  simulate->add_option("--config", sim_o.config_path, "sim config JSON file")
      ->required();
  simulate->add_option("--out", sim_o.out_path, "output file (default stdout)");
  simulate->add_option("--format", sim_o.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  simulate->callback([&sim_o] { run_simulate(sim_o); });

  CompareCli cmp_o;
  auto* compare = app.add_subcommand(
      "compare", "Theory vs Monte Carlo decay comparison table");
  compare->add_option("--config", cmp_o.config_path, "compare config JSON file")
      ->required();
  compare->add_option("--tolerance", cmp_o.tolerance,
                      "relative slope tolerance (default 0.15)");
  compare->add_option("--out", cmp_o.out_path, "output file (default stdout)");
  compare->callback([&cmp_o] { run_compare(cmp_o); });

  SweepCli sweep_o;
  auto* sweep = app.add_subcommand(
      "sweep", "Rate-function grid over 1 or 2 swept parameters");
  sweep->add_option("--preset", sweep_o.preset,
                    "fig1 | fig2 | fig3 | fig4 | fig7 | fig8");
  sweep->add_option("--scheme", sweep_o.scheme, "iid | ar | many");
  sweep->add_option("--sweep", sweep_o.axes,
                    "axis as name=min:max:steps (repeat for a second axis)");
  sweep->add_option("--lambda", sweep_o.lambda, "mean arrival rate");
  sweep->add_option("--mu", sweep_o.mu, "mean service rate");
  sweep->add_option("--k", sweep_o.k, "service minus arrival rate");
  sweep->add_option("--h", sweep_o.h, "alias of --k");
  sweep->add_option("--xi", sweep_o.xi, "AR(1) coefficient (ar only)");
  sweep->add_option("--b", sweep_o.b, "fixed threshold (ar)");
  sweep->add_option("--u", sweep_o.u, "fixed threshold (many)");
  sweep->add_option("--q", sweep_o.q, "fixed threshold (iid)");
  sweep->add_option("--mode", sweep_o.mode, "exact_numeric | taylor");
  sweep->add_option("--out", sweep_o.out_path, "output file (default stdout)");
  sweep->add_option("--format", sweep_o.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->callback([&sweep_o] { run_sweep(sweep_o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const forkrate::Error& e) {
    emit_error(forkrate::errc_name(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const CLI::ParseError& e) {
    emit_error("config_error", std::string("argument error: ") + e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 2;
  }
  return 0;
}
