#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace twb::cli {

enum class Format { text, json };

struct InputDigest {
  std::string path;
  std::string digest;  ///< "fnv1a64:" + 16 hex digits of the file bytes
  bool operator==(const InputDigest&) const = default;
};

struct ReportViolation {
  std::string name;
  std::string detail;
  bool operator==(const ReportViolation&) const = default;
};

// Exit status: 0 when the command's property holds, 1 when it fails (the
// failures are listed in `violations`), 2 for usage and input errors.
struct RunReport {
  std::vector<std::string> command;
  std::vector<InputDigest> inputs;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json payload;  ///< null when the command produced nothing
  std::vector<ReportViolation> violations;
  std::string error;       ///< "Kind: message" for exit status 2
  double timing_ms = 0;    ///< wall clock; not part of the deterministic content
  int exit_status = 0;
  bool operator==(const RunReport&) const = default;
};

std::string fnv1a64(const std::string& bytes);

nlohmann::json report_to_json(const RunReport& r, bool with_timing = true);
RunReport report_from_json(const nlohmann::json& j);

/// Text is line-oriented and ends with a status line ("OK", "FAIL" or
/// "ERROR"); JSON is the report object with sorted keys, one trailing newline.
std::string emit_report(const RunReport& r, Format format);

}  // namespace twb::cli
