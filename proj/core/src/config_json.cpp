#include "forkrate/config_json.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forkrate/errors.hpp"

namespace forkrate {

namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    raise(errc::config_error, std::string("malformed JSON: ") + e.what());
  }
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) {
    raise(errc::config_error, where + " must be a JSON object");
  }
}

void reject_unknown_keys(const json& j,
                         std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      raise(errc::config_error, "unknown key '" + item.key() + "' in " + where);
    }
  }
}

double require_number(const json& j, const char* key,
                      const std::string& where) {
  if (!j.contains(key)) {
    raise(errc::config_error,
          "missing key '" + std::string(key) + "' in " + where);
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    raise(errc::config_error,
          "key '" + std::string(key) + "' in " + where + " must be a number");
  }
  return v.get<double>();
}

double optional_number(const json& j, const char* key, double fallback,
                       const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) {
    raise(errc::config_error,
          "key '" + std::string(key) + "' in " + where + " must be a number");
  }
  return v.get<double>();
}

std::int64_t optional_integer(const json& j, const char* key,
                              std::int64_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) {
    raise(errc::config_error,
          "key '" + std::string(key) + "' in " + where + " must be an integer");
  }
  return v.get<std::int64_t>();
}

// Structural parsing only; invariant checks are the caller's business
// because the simulator accepts records the analysis side rejects.
IidParams parse_iid_object(const json& j) {
  require_object(j, "iid params");
  reject_unknown_keys(j, {"lambda", "mu"}, "iid params");
  IidParams p;
  p.lambda = require_number(j, "lambda", "iid params");
  p.mu = require_number(j, "mu", "iid params");
  return p;
}

ArParams parse_ar_object(const json& j) {
  require_object(j, "ar params");
  reject_unknown_keys(j, {"lambda_t", "sigma_t", "xi", "mu_t"}, "ar params");
  ArParams p;
  p.lambda_t = require_number(j, "lambda_t", "ar params");
  p.sigma_t = optional_number(j, "sigma_t", 1.0, "ar params");
  p.xi = require_number(j, "xi", "ar params");
  p.mu_t = require_number(j, "mu_t", "ar params");
  return p;
}

ManyParams parse_many_object(const json& j) {
  require_object(j, "many params");
  reject_unknown_keys(j, {"lambda_bar", "mu_bar", "n_sources"}, "many params");
  ManyParams p;
  p.lambda_bar = require_number(j, "lambda_bar", "many params");
  p.mu_bar = require_number(j, "mu_bar", "many params");
  const std::int64_t n =
      optional_integer(j, "n_sources", p.n_sources, "many params");
  if (n < 1 || n > 1000000) {
    raise(errc::config_error, "n_sources out of range in many params");
  }
  p.n_sources = static_cast<int>(n);
  return p;
}

SimConfig parse_sim_object(const json& doc, const std::string& where) {
  SimConfig cfg;

  if (!doc.contains("scheme") || !doc.at("scheme").is_string()) {
    raise(errc::config_error, where + " needs a string key 'scheme'");
  }
  cfg.scheme = scheme_from_name(doc.at("scheme").get<std::string>());

  if (!doc.contains("params")) {
    raise(errc::config_error, where + " needs an object key 'params'");
  }
  switch (cfg.scheme) {
    case Scheme::iid: cfg.params = parse_iid_object(doc.at("params")); break;
    case Scheme::ar: cfg.params = parse_ar_object(doc.at("params")); break;
    case Scheme::many: cfg.params = parse_many_object(doc.at("params")); break;
  }

  cfg.horizon = optional_integer(doc, "horizon", cfg.horizon, where);
  cfg.n_paths = optional_integer(doc, "n_paths", cfg.n_paths, where);

  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned()) {
      raise(errc::config_error,
            "key 'seed' in " + where + " must be a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }

  if (!doc.contains("omega_grid") || !doc.at("omega_grid").is_array() ||
      doc.at("omega_grid").empty()) {
    raise(errc::config_error,
          where + " needs a non-empty array key 'omega_grid'");
  }
  for (const json& v : doc.at("omega_grid")) {
    if (!v.is_number()) {
      raise(errc::config_error,
            "omega_grid in " + where + " must contain numbers only");
    }
    cfg.omega_grid.push_back(v.get<double>());
  }

  cfg.source_corr = optional_number(doc, "source_corr", 0.0, where);

  return validate(cfg);
}

constexpr std::initializer_list<const char*> kSimKeys = {
    "scheme", "params", "horizon", "n_paths", "seed", "omega_grid",
    "source_corr"};

}  // namespace

IidParams parse_iid_params(const std::string& json_text) {
  return validate(parse_iid_object(parse_document(json_text)));
}

ArParams parse_ar_params(const std::string& json_text) {
  return validate(parse_ar_object(parse_document(json_text)));
}

ManyParams parse_many_params(const std::string& json_text) {
  return validate(parse_many_object(parse_document(json_text)));
}

SimConfig parse_sim_config(const std::string& json_text) {
  const json doc = parse_document(json_text);
  require_object(doc, "sim config");
  reject_unknown_keys(doc, kSimKeys, "sim config");
  return parse_sim_object(doc, "sim config");
}

CompareConfig parse_compare_config(const std::string& json_text) {
  const json doc = parse_document(json_text);
  require_object(doc, "compare config");
  reject_unknown_keys(doc,
                      {"scheme", "params", "horizon", "n_paths", "seed",
                       "omega_grid", "source_corr", "b", "u"},
                      "compare config");

  CompareConfig cfg;
  cfg.sim = parse_sim_object(doc, "compare config");

  const bool has_b = doc.contains("b");
  const bool has_u = doc.contains("u");
  switch (cfg.sim.scheme) {
    case Scheme::iid:
      if (has_b || has_u) {
        raise(errc::config_error,
              "scheme iid derives its decay rate from params; remove key '" +
                  std::string(has_b ? "b" : "u") + "'");
      }
      break;
    case Scheme::ar: {
      if (has_u) {
        raise(errc::config_error, "scheme ar takes key 'b', not 'u'");
      }
      const double b = require_number(doc, "b", "compare config");
      if (!(b > 0.0) || !std::isfinite(b)) {
        raise(errc::config_error, "key 'b' must be a positive number");
      }
      cfg.threshold = b;
      break;
    }
    case Scheme::many: {
      if (has_b) {
        raise(errc::config_error, "scheme many takes key 'u', not 'b'");
      }
      const double u = require_number(doc, "u", "compare config");
      if (!(u > 0.0) || !std::isfinite(u)) {
        raise(errc::config_error, "key 'u' must be a positive number");
      }
      cfg.threshold = u;
      break;
    }
  }
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(errc::io_error, "cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    raise(errc::io_error, "read failure on file: " + path);
  }
  return buf.str();
}

}  // namespace forkrate
