#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "wittdiff/cech.hpp"

namespace wittdiff {

struct JobOptions {
  long degree_bound = -1;
  long window = -1;
  uint64_t seed = 1;
};

struct Report {
  int exit_code = 0;       // 0 ok, 1 input error, 2 obstructed/Absent/false
  std::string text;        // human-readable
  nlohmann::json machine;  // deterministic machine-readable document
};

// Builds the scheme described by a job document. Throws InputError /
// ParseError / GluingError / FlatnessError with diagnostics.
GluedScheme scheme_from_json(const nlohmann::json& doc);

// Dispatches one of: omega, lift, kappa, di, compare, gm, axioms.
Report run_job(const nlohmann::json& doc, const std::string& command, const JobOptions& opts);

// Reads the document from a file first; errors become exit code 1 reports.
Report run_job_file(const std::string& path, const std::string& command, const JobOptions& opts);

}  // namespace wittdiff
