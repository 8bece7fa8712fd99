#pragma once

#include <dnapl/simulation.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnapl
{

struct Diagnostic
{
  std::string source;
  int line = 0;    // 1-based, 0 if unknown
  int column = 0;
  std::string message;

  std::string str() const;
};

class ScenarioParseError : public std::runtime_error
{
 public:
  explicit ScenarioParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Reads and validates a scenario file. Every problem found is reported in
/// one ScenarioParseError, each with its location in the file.
Scenario parse_scenario(const std::filesystem::path &path);
Scenario parse_scenario_text(const std::string &text, const std::string &source = "<scenario>");

/// Writes the scenario in the same format. Report times are always written
/// as an explicit list.
std::string serialize_scenario(const Scenario &scenario);
void write_scenario(const Scenario &scenario, const std::filesystem::path &path);

}  // namespace dnapl
