#pragma once

#include <optional>
#include <string>

#include "forkrate/params.hpp"
#include "forkrate/sim.hpp"

namespace forkrate {

// JSON deserialization for parameter records and simulation configs. Keys are
// snake_case field names; malformed documents, unknown keys, wrong types and
// missing required keys are rejected with errc::config_error, while invariant
// violations surface through the validate() overloads with their usual codes.
// Parsers take whole JSON documents as text so that no JSON library type
// leaks into this interface.

IidParams parse_iid_params(const std::string& json_text);
ArParams parse_ar_params(const std::string& json_text);
ManyParams parse_many_params(const std::string& json_text);

// Full simulation config document, e.g.:
//   {"scheme": "iid", "params": {"lambda": 1, "mu": 2},
//    "horizon": 2000, "n_paths": 100000, "seed": 42,
//    "omega_grid": [2, 3, 4, 5, 6, 7, 8]}
// horizon / n_paths / seed are optional (defaults 2000 / 10000 / 1);
// scheme, params and a non-empty omega_grid are required. "source_corr" is
// accepted for the many scheme only.
SimConfig parse_sim_config(const std::string& json_text);

// Compare config: a sim config plus the theory-side threshold. The ar scheme
// requires key "b", the many scheme key "u" (the rate function's argument;
// the theory column is exp(-omega * I/threshold)); iid derives everything
// from params and accepts neither key.
struct CompareConfig {
  SimConfig sim;
  std::optional<double> threshold;
};

CompareConfig parse_compare_config(const std::string& json_text);

// Whole-file read; errc::io_error with the path in the message on failure.
std::string read_text_file(const std::string& path);

}  // namespace forkrate
