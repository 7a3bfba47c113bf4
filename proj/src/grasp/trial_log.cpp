#include "mogt/grasp/trial_log.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::grasp {

const PreGrasp* TrialSet::find_pregrasp(const std::string& id) const {
  for (const auto& p : pregrasps) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::vector<GraspTrial> TrialSet::trials_for(const std::string& id) const {
  std::vector<GraspTrial> out;
  for (const auto& t : trials) {
    if (t.pregrasp_id == id) out.push_back(t);
  }
  return out;
}

namespace {

constexpr std::array<std::string_view, 6> kHeader = {"pregrasp_id",      "spread_deg",     "finger_left_deg",
                                                     "finger_right_deg", "end_config_deg", "outcome_count"};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

double parse_double(std::string_view text, std::size_t line, std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ParseError(line, fmt::format("{}: '{}' is not a number", field, text));
  }
  return value;
}

int parse_count(std::string_view text, std::size_t line, int m_max) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(line, fmt::format("outcome_count: '{}' is not an integer", text));
  }
  if (value < 0 || value > m_max) {
    throw ParseError(line, fmt::format("outcome_count {} outside [0, {}]", value, m_max));
  }
  return value;
}

JointVector parse_end_config(std::string_view text, std::size_t line) {
  JointVector config{};
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (count == kHandDof) {
      throw ParseError(line, fmt::format("end_config_deg has more than {} angles", kHandDof));
    }
    config[count++] = parse_double(part, line, "end_config_deg");
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (count != kHandDof) {
    throw ParseError(line, fmt::format("end_config_deg has {} angles, expected {}", count, kHandDof));
  }
  return config;
}

}  // namespace

TrialSet parse_trial_log(std::istream& in, int m_max) {
  if (m_max < 1) throw ValidationError("m_max must be >= 1");
  TrialSet set;
  set.m_max = m_max;
  std::unordered_map<std::string, std::size_t> index;

  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto fields = split_fields(raw);
    if (fields.empty() || fields.front().starts_with('#')) continue;

    if (!have_header) {
      if (fields.size() != kHeader.size() || !std::equal(fields.begin(), fields.end(), kHeader.begin())) {
        throw ParseError(line, "expected header: pregrasp_id spread_deg finger_left_deg finger_right_deg "
                               "end_config_deg outcome_count");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != kHeader.size()) {
      throw ParseError(line, fmt::format("expected {} fields, found {}", kHeader.size(), fields.size()));
    }

    PreGrasp pregrasp{std::string(fields[0]), parse_double(fields[1], line, "spread_deg"),
                      parse_double(fields[2], line, "finger_left_deg"),
                      parse_double(fields[3], line, "finger_right_deg")};
    try {
      pregrasp.validate();
    } catch (const ValidationError& e) {
      throw ParseError(line, e.what());
    }

    GraspTrial trial{pregrasp.id, parse_end_config(fields[4], line), parse_count(fields[5], line, m_max)};

    const auto [it, inserted] = index.try_emplace(pregrasp.id, set.pregrasps.size());
    if (inserted) {
      set.pregrasps.push_back(pregrasp);
    } else if (!(set.pregrasps[it->second] == pregrasp)) {
      throw ParseError(line, fmt::format("pre-grasp '{}' reappears with different angles", pregrasp.id));
    }
    set.trials.push_back(std::move(trial));
  }
  if (!have_header) throw ParseError(line, "missing header line");
  return set;
}

TrialSet load_trial_log(const std::filesystem::path& path, int m_max) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open trial log '{}'", path.string()));
  return parse_trial_log(in, m_max);
}

void write_trial_log(std::ostream& out, const TrialSet& set) {
  out << "pregrasp_id\tspread_deg\tfinger_left_deg\tfinger_right_deg\tend_config_deg\toutcome_count\n";
  std::unordered_map<std::string, const PreGrasp*> by_id;
  for (const auto& p : set.pregrasps) by_id.emplace(p.id, &p);
  for (const auto& trial : set.trials) {
    const auto found = by_id.find(trial.pregrasp_id);
    const PreGrasp* p = found == by_id.end() ? nullptr : found->second;
    if (p == nullptr) throw ValidationError(fmt::format("trial references unknown pre-grasp '{}'", trial.pregrasp_id));
    out << fmt::format("{}\t{}\t{}\t{}\t{},{},{}\t{}\n", p->id, p->spread_deg, p->finger_left_deg, p->finger_right_deg,
                       trial.end_config_deg[0], trial.end_config_deg[1], trial.end_config_deg[2],
                       trial.outcome_count);
  }
}

}  // namespace mogt::grasp
