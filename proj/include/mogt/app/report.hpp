#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mogt::app {

/// Version of the machine-readable row layout.
inline constexpr int kReportSchemaVersion = 1;

enum class OutputFormat { Table, Rows };
/// Accepts "table" / "rows".
OutputFormat parse_format(std::string_view text);

struct Section {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

/// Output of one command: ordered key/value facts plus named tables.
///
/// Rows format, one record per line, tab separated:
///   schema_version  1
///   command         <name>
///   meta            <key>  <value>
///   #<section>      <column>...
///   <section>       <value>...
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void set(std::string key, std::string value);
  Section& section(std::string name, std::vector<std::string> columns);

  const std::string& command() const noexcept { return command_; }
  const std::vector<std::pair<std::string, std::string>>& meta() const noexcept { return meta_; }
  const std::vector<Section>& sections() const noexcept { return sections_; }
  /// Value of a meta key, or empty.
  std::string get(std::string_view key) const;
  const Section* find_section(std::string_view name) const;

  std::string render(OutputFormat format) const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<Section> sections_;
};

/// Fixed six-decimal rendering; "inf" / "-inf" / "nan" for non-finite values.
std::string format_real(double value);

}  // namespace mogt::app
