#pragma once

// Line-delimited JSON trace. One record per line with keys in the fixed
// order t, dir, topic, node, payload. Numbers use 9 significant digits
// ("%.9g"); negative zero prints as 0.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "liftbot/fields.hpp"
#include "liftbot/registry.hpp"
#include "liftbot/runtime.hpp"

namespace liftbot {

struct TraceRecord {
  double t = 0.0;
  Direction dir = Direction::pub;
  std::string topic;
  std::string node;
  Fields payload;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (!std::isfinite(v)) throw TraceError("non-finite number in trace");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string format_record(const TraceRecord& r) {
  auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
  std::string out = "{\"t\":" + format_number(r.t) + ",\"dir\":\"" + (r.dir == Direction::pub ? "pub" : "sub") +
                    "\",\"topic\":" + str(r.topic) + ",\"node\":" + str(r.node) + ",\"payload\":{";
  bool first = true;
  for (const auto& [key, value] : r.payload) {
    if (!first) out += ',';
    first = false;
    out += str(key) + ':';
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, bool>) out += v ? "true" : "false";
          else if constexpr (std::is_same_v<V, double>) out += format_number(v);
          else out += str(v);
        },
        value);
  }
  out += "}}";
  return out;
}

inline TraceRecord parse_record(const std::string& line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw TraceError(std::string("malformed trace line: ") + e.what());
  }
  static const char* const kKeys[] = {"t", "dir", "topic", "node", "payload"};
  if (!j.is_object() || j.size() != 5) throw TraceError("trace record must have exactly 5 keys");
  std::size_t k = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++k)
    if (it.key() != kKeys[k]) throw TraceError("trace record keys out of order at '" + it.key() + "'");
  try {
    TraceRecord r;
    r.t = j["t"].get<double>();
    std::string dir = j["dir"].get<std::string>();
    if (dir == "pub") r.dir = Direction::pub;
    else if (dir == "sub") r.dir = Direction::sub;
    else throw TraceError("bad trace direction '" + dir + "'");
    r.topic = j["topic"].get<std::string>();
    r.node = j["node"].get<std::string>();
    const auto& p = j["payload"];
    if (!p.is_object()) throw TraceError("trace payload must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      const auto& v = it.value();
      if (v.is_boolean()) r.payload.emplace_back(it.key(), v.get<bool>());
      else if (v.is_number()) r.payload.emplace_back(it.key(), v.get<double>());
      else if (v.is_string()) r.payload.emplace_back(it.key(), v.get<std::string>());
      else throw TraceError("unsupported payload value for '" + it.key() + "'");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw TraceError(std::string("malformed trace record: ") + e.what());
  }
}

inline TraceRecord to_trace_record(const Record& r, const EventRegistry& reg) {
  const EventTypeInfo& info = reg.info(r.type);
  return TraceRecord{r.t, r.dir, info.name, r.node, info.fields(r.value)};
}

/// Runtime observer that writes every record to a stream.
class TraceWriter {
 public:
  TraceWriter(std::ostream& out, const EventRegistry& reg) : out_(&out), reg_(&reg) {}

  void operator()(const Record& r) {
    *out_ << format_record(to_trace_record(r, *reg_)) << '\n';
    ++count_;
  }

  std::size_t count() const { return count_; }

 private:
  std::ostream* out_;
  const EventRegistry* reg_;
  std::size_t count_ = 0;
};

}  // namespace liftbot
