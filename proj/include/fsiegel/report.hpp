#pragma once

// Run configuration, per-check records, and the versioned report with its json/csv/md renderings.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fsiegel {

using json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "fsiegel-report/1";

struct Caps {
  std::uint64_t group = 100000;   // largest group enumerated element by element
  std::uint64_t points = 200000;  // largest Lagrangian set enumerated
};

enum class Status { kPass, kFail, kSkippedResource };

std::string_view to_string(Status s);

enum class Format { kJson, kCsv, kMd };

Format parse_format(std::string_view s);
std::string_view to_string(Format f);

/// Every check id accepted by `verify`, in execution order.
const std::vector<std::string>& verify_check_ids();
bool is_verify_check(std::string_view id);

struct RunConfig {
  std::string command;  // census | verify | orbits | group | witness
  std::vector<int> q_list{3, 5, 7};
  std::vector<int> n_list{1, 2};
  std::string group = "spf";
  std::vector<std::string> checks;
  Format format = Format::kJson;
  Caps caps;
  bool enumerate = false;                 // group: enumerate element by element
  std::optional<std::uint64_t> group_cap;  // group: --cap
  unsigned jobs = 1;
  std::string out;

  json echo() const;
};

struct CheckRecord {
  std::string check;
  int q = 0;
  int n = 0;
  Status status = Status::kPass;
  std::string message;
  json data = json::object();
  double wall_time_ms = 0;
};

/// Collects named assertions for one check; the check fails iff any assertion is false.
class Verdict {
 public:
  void expect(const std::string& name, bool ok) {
    assertions_[name] = ok;
    if (!ok) failed_.push_back(name);
  }
  bool ok() const { return failed_.empty(); }
  json to_json() const { return json{{"assertions", assertions_}, {"failed", failed_}}; }

 private:
  json assertions_ = json::object();
  std::vector<std::string> failed_;
};

struct VerificationReport {
  RunConfig config;
  std::vector<CheckRecord> records;
  json fields = json::array();  // per-q field parameters
  double wall_time_ms = 0;

  /// 0 all pass; 1 any failure; 3 every record skipped for resources.
  int exit_code() const;
  json to_json() const;
};

/// Removes wall-time, runtime and transporter-word fields, recursively.
json strip_volatile(const json& j);

std::string render(const VerificationReport& report, Format format);

}  // namespace fsiegel
