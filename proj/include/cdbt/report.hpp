#pragma once

// Structured pass/fail records produced by every verification routine.

#include <chrono>
#include <string>
#include <utility>

#include "cdbt/json_io.hpp"

namespace cdbt {

enum class Status { pass, fail, skip };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
  }
  return "?";
}

struct VerifyReport {
  std::string check_id;
  json spec = json::object();
  Status status = Status::skip;
  json witness = json::object();
  long long elapsed_ms = 0;

  bool passed() const { return status == Status::pass; }

  /// Without timing, for deterministic comparisons.
  json to_json_stable() const {
    return json{{"check_id", check_id}, {"spec", spec}, {"status", to_string(status)}, {"witness", witness}};
  }

  json to_json() const {
    json j = to_json_stable();
    j["elapsed_ms"] = elapsed_ms;
    return j;
  }
};

/// Times a check body that fills status and witness.
template <class F>
VerifyReport timed_report(std::string id, json spec, F&& body) {
  VerifyReport r;
  r.check_id = std::move(id);
  r.spec = std::move(spec);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.status = Status::fail;
    r.witness["exception"] = e.what();
  }
  r.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  if (r.status == Status::fail && r.witness.empty()) r.witness["note"] = "failed without a witness";
  return r;
}

inline Status status_of(bool ok) { return ok ? Status::pass : Status::fail; }

}  // namespace cdbt
