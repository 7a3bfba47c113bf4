#include "mogt/app/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::app {

OutputFormat parse_format(std::string_view text) {
  if (text == "table") return OutputFormat::Table;
  if (text == "rows") return OutputFormat::Rows;
  throw ValidationError(fmt::format("unknown format '{}' (expected table or rows)", text));
}

void Section::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error(fmt::format("section {}: row has {} cells, expected {}", name, row.size(), columns.size()));
  }
  rows.push_back(std::move(row));
}

void Report::set(std::string key, std::string value) {
  for (auto& [k, v] : meta_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  meta_.emplace_back(std::move(key), std::move(value));
}

Section& Report::section(std::string name, std::vector<std::string> columns) {
  sections_.push_back(Section{std::move(name), std::move(columns), {}});
  return sections_.back();
}

std::string Report::get(std::string_view key) const {
  for (const auto& [k, v] : meta_) {
    if (k == key) return v;
  }
  return {};
}

const Section* Report::find_section(std::string_view name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

std::string join_tabs(std::string_view head, const std::vector<std::string>& cells) {
  std::string line(head);
  for (const auto& c : cells) {
    line += '\t';
    line += c;
  }
  line += '\n';
  return line;
}

std::string render_rows(const Report& r) {
  std::string out = fmt::format("schema_version\t{}\ncommand\t{}\n", kReportSchemaVersion, r.command());
  for (const auto& [k, v] : r.meta()) out += fmt::format("meta\t{}\t{}\n", k, v);
  for (const auto& s : r.sections()) {
    out += join_tabs("#" + s.name, s.columns);
    for (const auto& row : s.rows) out += join_tabs(s.name, row);
  }
  return out;
}

std::string render_table(const Report& r) {
  std::string out = r.command() + "\n";
  std::size_t key_width = 0;
  for (const auto& [k, v] : r.meta()) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : r.meta()) out += fmt::format("  {:<{}}  {}\n", k, key_width, v);

  for (const auto& s : r.sections()) {
    out += fmt::format("\n[{}]\n", s.name);
    std::vector<std::size_t> width(s.columns.size());
    for (std::size_t c = 0; c < s.columns.size(); ++c) {
      width[c] = s.columns[c].size();
      for (const auto& row : s.rows) width[c] = std::max(width[c], row[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
      std::string text = " ";
      for (std::size_t c = 0; c < cells.size(); ++c) {
        text += ' ';
        text += c + 1 == cells.size() ? cells[c] : fmt::format("{:<{}}", cells[c], width[c] + 1);
      }
      return text + "\n";
    };
    out += line(s.columns);
    std::vector<std::string> rule;
    for (auto w : width) rule.emplace_back(w, '-');
    out += line(rule);
    for (const auto& row : s.rows) out += line(row);
  }
  return out;
}

}  // namespace

std::string Report::render(OutputFormat format) const {
  return format == OutputFormat::Rows ? render_rows(*this) : render_table(*this);
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  // Avoid printing "-0.000000".
  if (value == 0.0) value = 0.0;
  auto text = fmt::format("{:.6f}", value);
  if (text == "-0.000000") text = "0.000000";
  return text;
}

}  // namespace mogt::app
