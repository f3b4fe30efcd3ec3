#include "report.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace twb::cli {

using nlohmann::json;

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

json report_to_json(const RunReport& r, bool with_timing) {
  json j;
  j["command"] = r.command;
  j["inputs"] = json::array();
  for (const auto& i : r.inputs) j["inputs"].push_back({{"path", i.path}, {"digest", i.digest}});
  j["params"] = r.params;
  j["payload"] = r.payload;
  j["violations"] = json::array();
  for (const auto& v : r.violations) j["violations"].push_back({{"name", v.name}, {"detail", v.detail}});
  if (!r.error.empty()) j["error"] = r.error;
  j["exit_status"] = r.exit_status;
  if (with_timing) j["timing_ms"] = r.timing_ms;
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.command = j.at("command").get<std::vector<std::string>>();
  for (const auto& i : j.at("inputs")) r.inputs.push_back({i.at("path"), i.at("digest")});
  r.params = j.at("params");
  r.payload = j.at("payload");
  for (const auto& v : j.at("violations")) r.violations.push_back({v.at("name"), v.at("detail")});
  if (j.contains("error")) r.error = j.at("error");
  r.exit_status = j.at("exit_status");
  if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms");
  return r;
}

namespace {

bool scalar(const json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void render(std::ostringstream& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      const bool inline_array = v.is_array() && std::all_of(v.begin(), v.end(), scalar);
      if (scalar(v)) {
        out << pad << k << ": " << scalar_text(v) << "\n";
      } else if (inline_array) {
        out << pad << k << ":";
        for (const auto& x : v) out << " " << scalar_text(x);
        out << (v.empty() ? " (none)" : "") << "\n";
      } else if (v.empty()) {
        out << pad << k << ": (none)\n";
      } else {
        out << pad << k << ":\n";
        render(out, v, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (scalar(v) || std::all_of(v.begin(), v.end(), scalar)) {
        out << pad << "-";
        if (scalar(v)) {
          out << " " << scalar_text(v);
        } else if (v.is_array()) {
          for (const auto& x : v) out << " " << scalar_text(x);
        } else {
          for (const auto& [k, x] : v.items()) out << " " << k << "=" << scalar_text(x);
        }
        out << "\n";
      } else {
        out << pad << "-\n";
        render(out, v, indent + 2);
      }
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

}  // namespace

std::string emit_report(const RunReport& r, Format format) {
  if (format == Format::json) return report_to_json(r).dump(2) + "\n";
  std::ostringstream out;
  out << "command:";
  for (const auto& c : r.command) out << " " << c;
  out << "\n";
  for (const auto& i : r.inputs) out << "input: " << i.path << " " << i.digest << "\n";
  if (!r.params.empty()) {
    out << "params:\n";
    render(out, r.params, 2);
  }
  if (r.payload.is_null()) {
    if (r.error.empty()) out << "result: none\n";
  } else {
    out << "result:\n";
    if (scalar(r.payload)) {
      out << "  " << scalar_text(r.payload) << "\n";
    } else {
      render(out, r.payload, 2);
    }
  }
  if (!r.error.empty()) {
    out << "error: " << r.error << "\n";
  } else if (r.violations.empty()) {
    out << "violations: none\n";
  } else {
    out << "violations:\n";
    for (const auto& v : r.violations) out << "  " << v.name << (v.detail.empty() ? "" : ": " + v.detail) << "\n";
  }
  char ms[32];
  std::snprintf(ms, sizeof ms, "%.1f", r.timing_ms);
  out << "time: " << ms << " ms\n";
  out << (r.exit_status == 0 ? "OK" : r.exit_status == 1 ? "FAIL" : "ERROR") << "\n";
  return out.str();
}

}  // namespace twb::cli
