#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "homex/verdict.hpp"

namespace homex::cli {

inline constexpr const char* kSchema = "homex/1";
inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

/// The result of one command. JSON is the primary form; the text form is
/// rendered from the same value.
struct Report {
  std::vector<std::string> command;
  nlohmann::json config;
  nlohmann::json result;
  std::optional<Status> status;   // top-level verdict, absent for plain queries
  std::optional<double> seconds;  // only with --timing, so reports stay byte-stable

  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);
  std::string to_text() const;
  friend bool operator==(const Report&, const Report&) = default;
};

/// Exit code of a report: 0 without a verdict, otherwise exit_code(status).
int report_exit_code(const Report& r);

/// Runs one command line (without the program name). Reports go to `out`,
/// usage and parse errors to `err` with exit code 1.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace homex::cli
