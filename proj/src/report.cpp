#include "fsiegel/report.hpp"

#include <algorithm>
#include <sstream>

#include "fsiegel/errors.hpp"

namespace fsiegel {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kSkippedResource: return "skipped-resource";
  }
  return "?";
}

Format parse_format(std::string_view s) {
  if (s == "json") return Format::kJson;
  if (s == "csv") return Format::kCsv;
  if (s == "md") return Format::kMd;
  throw ParameterError("unknown format: " + std::string(s));
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::kJson: return "json";
    case Format::kCsv: return "csv";
    case Format::kMd: return "md";
  }
  return "?";
}

const std::vector<std::string>& verify_check_ids() {
  static const std::vector<std::string> ids{"theorem1", "cayley",  "stabilizers",     "strata-map",
                                            "involutions", "lemma4", "siegel-criterion"};
  return ids;
}

bool is_verify_check(std::string_view id) {
  const auto& ids = verify_check_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

json RunConfig::echo() const {
  json j{{"command", command}, {"q", q_list},          {"n", n_list},
         {"group", group},     {"format", to_string(format)},
         {"caps", {{"group", caps.group}, {"points", caps.points}}}};
  if (command == "verify") j["checks"] = checks;
  if (command == "group") {
    j["enumerate"] = enumerate;
    if (group_cap) j["cap"] = *group_cap;
  }
  if (!out.empty()) j["out"] = out;
  return j;
}

int VerificationReport::exit_code() const {
  bool any_fail = false, all_skipped = !records.empty();
  for (const auto& r : records) {
    any_fail = any_fail || r.status == Status::kFail;
    all_skipped = all_skipped && r.status == Status::kSkippedResource;
  }
  if (any_fail) return 1;
  if (all_skipped) return 3;
  return 0;
}

json VerificationReport::to_json() const {
  json recs = json::array();
  std::size_t pass = 0, fail = 0, skipped = 0;
  for (const auto& r : records) {
    json j{{"check", r.check}, {"q", r.q},       {"n", r.n},
           {"status", to_string(r.status)}, {"data", r.data}, {"wall_time_ms", r.wall_time_ms}};
    if (!r.message.empty()) j["message"] = r.message;
    recs.push_back(std::move(j));
    pass += r.status == Status::kPass;
    fail += r.status == Status::kFail;
    skipped += r.status == Status::kSkippedResource;
  }
  return json{{"schema_version", kSchemaVersion},
              {"command", config.command},
              {"config", config.echo()},
              {"fields", fields},
              {"records", recs},
              {"summary", {{"pass", pass}, {"fail", fail}, {"skipped_resource", skipped}}},
              {"exit_code", exit_code()},
              {"runtime", {{"jobs", config.jobs}, {"wall_time_ms", wall_time_ms}}}};
}

json strip_volatile(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "wall_time_ms" || it.key() == "runtime" || it.key() == "transporter_words") continue;
      out[it.key()] = strip_volatile(it.value());
    }
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& e : j) out.push_back(strip_volatile(e));
    return out;
  }
  return j;
}

namespace {

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string failed_list(const CheckRecord& r) {
  std::string out;
  if (r.data.contains("verdict")) {
    for (const auto& f : r.data["verdict"]["failed"]) {
      if (!out.empty()) out += ";";
      out += f.get<std::string>();
    }
  }
  return out;
}

using Table = std::vector<std::vector<std::string>>;

/// Header row followed by body rows, chosen by command.
Table table_of(const VerificationReport& rep) {
  Table t;
  const auto& cmd = rep.config.command;
  if (cmd == "census") {
    t.push_back({"q", "n", "total", "r", "h_count", "o_count", "h_in_image", "o_in_image", "status"});
    for (const auto& r : rep.records) {
      if (!r.data.contains("strata")) {
        t.push_back({std::to_string(r.q), std::to_string(r.n), "", "", "", "", "", "", std::string(to_string(r.status))});
        continue;
      }
      for (const auto& s : r.data["strata"]) {
        t.push_back({std::to_string(r.q), std::to_string(r.n), cell_text(r.data["total"]), cell_text(s["r"]),
                     cell_text(s["h_count"]), cell_text(s["o_count"]), cell_text(s["h_in_image"]),
                     cell_text(s["o_in_image"]), std::string(to_string(r.status))});
      }
    }
  } else if (cmd == "orbits") {
    t.push_back({"q", "n", "group", "label", "size", "contains_image_point", "representative"});
    for (const auto& r : rep.records) {
      if (!r.data.contains("orbits")) continue;
      for (const auto& o : r.data["orbits"]) {
        t.push_back({std::to_string(r.q), std::to_string(r.n), cell_text(r.data["group"]), cell_text(o["label"]),
                     cell_text(o["size"]), cell_text(o["contains_image_point"]), cell_text(o["representative"])});
      }
    }
  } else if (cmd == "witness") {
    t.push_back({"q", "n", "id", "param", "status", "observed_o_type", "observed_in_image", "basis"});
    for (const auto& r : rep.records) {
      if (!r.data.contains("witnesses")) continue;
      for (const auto& w : r.data["witnesses"]) {
        t.push_back({std::to_string(r.q), std::to_string(r.n), cell_text(w["id"]), cell_text(w["param"]),
                     cell_text(w["status"]), w.contains("observed_o_type") ? cell_text(w["observed_o_type"]) : "",
                     w.contains("observed_in_image") ? cell_text(w["observed_in_image"]) : "",
                     w.contains("basis") ? cell_text(w["basis"]) : ""});
      }
    }
  } else {
    t.push_back({"check", "q", "n", "status", "failed", "message"});
    for (const auto& r : rep.records) {
      t.push_back({r.check, std::to_string(r.q), std::to_string(r.n), std::string(to_string(r.status)),
                   failed_list(r), r.message});
    }
  }
  return t;
}

}  // namespace

std::string render(const VerificationReport& report, Format format) {
  if (format == Format::kJson) return report.to_json().dump(2) + "\n";
  const auto t = table_of(report);
  std::ostringstream os;
  if (format == Format::kCsv) {
    for (const auto& row : t) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_field(row[c]);
      os << "\n";
    }
    return os.str();
  }
  os << "# fsiegel " << report.config.command << "\n\n";
  for (std::size_t r = 0; r < t.size(); ++r) {
    os << "|";
    for (const auto& c : t[r]) os << " " << c << " |";
    os << "\n";
    if (r == 0) {
      os << "|";
      for (std::size_t c = 0; c < t[r].size(); ++c) os << " --- |";
      os << "\n";
    }
  }
  const auto j = report.to_json();
  os << "\nSummary: " << j["summary"]["pass"] << " pass, " << j["summary"]["fail"] << " fail, "
     << j["summary"]["skipped_resource"] << " skipped (resource).\n";
  return os.str();
}

}  // namespace fsiegel
