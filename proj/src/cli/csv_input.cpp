#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

#include <fmt/format.h>

#include "kendall/cli.hpp"

namespace kendall::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

}  // namespace

BivariateSample parse_sample_csv(std::istream& in) {
  std::vector<double> xs, ys;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;
    const bool first_content = !seen_content;
    seen_content = true;

    const auto comma = view.find(',');
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
      if (first_content) continue;  // header
      throw DataError(fmt::format("line {}: expected two comma-separated columns", line_no));
    }
    const auto x = parse_number(view.substr(0, comma));
    const auto y = parse_number(view.substr(comma + 1));
    if (!x || !y) {
      if (first_content) continue;
      throw DataError(fmt::format("line {}: expected two numeric columns, got '{}'", line_no,
                                  view));
    }
    if (!std::isfinite(*x) || !std::isfinite(*y)) {
      throw DataError(fmt::format("line {}: non-finite value", line_no));
    }
    xs.push_back(*x);
    ys.push_back(*y);
  }
  return BivariateSample(std::move(xs), std::move(ys));
}

BivariateSample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open input file '{}'", path));
  return parse_sample_csv(in);
}

}  // namespace kendall::cli
