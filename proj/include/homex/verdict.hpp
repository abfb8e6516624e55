#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace homex {

enum class Status { Certified, Refuted, Inconclusive };

std::string to_string(Status s);

/// Three-valued result of a semi-decidable check. Certified and Refuted carry
/// a witness that can be re-checked; Inconclusive records the cutoff reached.
struct Verdict {
  Status status = Status::Inconclusive;
  std::string clause;
  nlohmann::json witness;

  static Verdict certified(std::string clause, nlohmann::json witness = {}) {
    return {Status::Certified, std::move(clause), std::move(witness)};
  }
  static Verdict refuted(std::string clause, nlohmann::json witness = {}) {
    return {Status::Refuted, std::move(clause), std::move(witness)};
  }
  static Verdict inconclusive(std::string clause, nlohmann::json witness = {}) {
    return {Status::Inconclusive, std::move(clause), std::move(witness)};
  }

  bool is_certified() const { return status == Status::Certified; }
  bool is_refuted() const { return status == Status::Refuted; }
  bool is_inconclusive() const { return status == Status::Inconclusive; }
  /// Integer payload under witness["value"]; throws if absent.
  long long value() const { return witness.at("value").get<long long>(); }

  nlohmann::json to_json() const;
};

/// Certified if all are, Refuted if any is, Inconclusive otherwise. The
/// first refuting (or inconclusive) clause is reported.
Verdict combine(const std::vector<Verdict>& parts, const std::string& clause);

/// Process exit code for a top-level verdict: 0, 2 or 3.
int exit_code(Status s);

}  // namespace homex
