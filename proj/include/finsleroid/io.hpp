#pragma once

// Deterministic serialization helpers.  All floating-point output uses the
// shortest round-trip decimal representation (std::to_chars), so identical
// inputs always produce byte-identical text, independent of locale and
// stream state.

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include "finsleroid/core.hpp"

namespace fsr {

/// Shortest decimal string that round-trips to exactly this double.
inline std::string fmt_double(double v) {
  if (v == 0.0) return "0";  // fold negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_int(long long v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Comma-joined component list of a flattened vector.
inline std::string fmt_components(const Vec& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(v[i]);
  }
  return out;
}

/// Minimal JSON object builder for the json-lines output format.  Values
/// are emitted in insertion order; only the value kinds the CLI needs are
/// supported (numbers, strings, booleans, numeric arrays).
class JsonObject {
 public:
  JsonObject& field(const std::string& key, double v) { return raw(key, fmt_double(v)); }
  JsonObject& field(const std::string& key, long long v) { return raw(key, fmt_int(v)); }
  JsonObject& field(const std::string& key, int v) { return raw(key, fmt_int(v)); }
  JsonObject& field(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonObject& field(const std::string& key, const std::string& v) {
    return raw(key, '"' + escape(v) + '"');
  }
  JsonObject& field(const std::string& key, const char* v) {
    return field(key, std::string(v));
  }
  JsonObject& field(const std::string& key, const Vec& v) {
    std::string arr = "[";
    for (int i = 0; i < v.size(); ++i) {
      if (i) arr += ',';
      arr += fmt_double(v[i]);
    }
    arr += ']';
    return raw(key, arr);
  }

  /// Insert an already-serialized value (e.g. a preformatted number).
  JsonObject& raw(const std::string& key, const std::string& v) {
    if (!body_.empty()) body_ += ',';
    body_ += '"' + escape(key) + "\":" + v;
    return *this;
  }

  std::string str() const { return "{" + body_ + "}"; }

 private:
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  }
  std::string body_;
};

}  // namespace fsr
