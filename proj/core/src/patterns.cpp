#include "adatest/patterns.hpp"

#include "adatest/error.hpp"
#include "adatest/serialize.hpp"

namespace adatest {

std::vector<PatternVector> parse_patterns(std::string_view text,
                                          std::optional<std::size_t> width) {
  std::vector<PatternVector> out;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of("01") != std::string_view::npos) {
      throw ParseError("pattern rows may only contain 0 and 1", line_no);
    }
    if (!width) width = line.size();
    if (line.size() != *width) {
      throw ParseError("pattern has width " + std::to_string(line.size()) + ", expected " +
                           std::to_string(*width),
                       line_no);
    }
    out.push_back(PatternVector{BitVector::from_string(line)});
  }
  return out;
}

std::vector<PatternVector> read_pattern_file(const std::filesystem::path& path,
                                             std::optional<std::size_t> width) {
  try {
    return parse_patterns(read_text_file(path), width);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string write_patterns(std::span<const PatternVector> vectors) {
  std::string out;
  for (const PatternVector& v : vectors) {
    out += v.bits.to_string();
    out += '\n';
  }
  return out;
}

}  // namespace adatest
