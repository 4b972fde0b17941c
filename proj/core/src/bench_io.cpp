#include <cctype>
#include <fstream>
#include <sstream>

#include "adatest/error.hpp"
#include "adatest/netlist.hpp"

namespace adatest {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' ||
        c == '=' || c == '#') {
      return false;
    }
  }
  return true;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

// Splits "HEAD(arg, arg, ...)" into head and trimmed args.
bool split_call(std::string_view text, std::string_view& head,
                std::vector<std::string_view>& args) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') return false;
  head = trim(text.substr(0, open));
  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  args.clear();
  if (trim(body).empty()) return true;
  while (true) {
    const auto comma = body.find(',');
    args.push_back(trim(body.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return true;
}

}  // namespace

Netlist parse_bench(std::string_view text, std::string name) {
  NetlistBuilder builder(std::move(name));
  int line_no = 0;
  std::vector<std::string_view> args;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);  // also drops the '\r' of CRLF files
    if (line.empty()) continue;

    std::string_view head;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      if (!split_call(line, head, args) || args.size() != 1 || !valid_name(args[0])) {
        throw ParseError("malformed declaration '" + std::string(line) + "'", line_no);
      }
      if (iequals(head, "INPUT")) {
        builder.add_input(std::string(args[0]), line_no);
      } else if (iequals(head, "OUTPUT")) {
        builder.add_output(std::string(args[0]), line_no);
      } else {
        throw ParseError("unknown declaration '" + std::string(head) + "'", line_no);
      }
      continue;
    }

    const std::string_view lhs = trim(line.substr(0, eq));
    const std::string_view rhs = trim(line.substr(eq + 1));
    if (!valid_name(lhs)) {
      throw ParseError("invalid signal name '" + std::string(lhs) + "'", line_no);
    }
    if (!split_call(rhs, head, args)) {
      throw ParseError("malformed gate expression '" + std::string(rhs) + "'", line_no);
    }
    const auto kind = parse_gate_kind(head);
    if (!kind) throw ParseError("unknown gate kind '" + std::string(head) + "'", line_no);
    std::vector<std::string> inputs;
    inputs.reserve(args.size());
    for (std::string_view a : args) {
      if (!valid_name(a)) {
        throw ParseError("invalid signal name '" + std::string(a) + "' in gate '" +
                             std::string(lhs) + "'",
                         line_no);
      }
      inputs.emplace_back(a);
    }
    builder.add_gate(*kind, std::string(lhs), std::move(inputs), line_no);
  }
  return std::move(builder).build();
}

Netlist read_bench_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open netlist '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_bench(buffer.str(), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string write_bench(const Netlist& netlist) {
  std::ostringstream out;
  if (!netlist.name().empty()) out << "# " << netlist.name() << "\n";
  for (NodeId id : netlist.primary_inputs()) out << "INPUT(" << netlist.node_name(id) << ")\n";
  if (!netlist.primary_inputs().empty()) out << "\n";
  for (NodeId id : netlist.primary_outputs()) {
    out << "OUTPUT(" << netlist.node_name(id) << ")\n";
  }
  if (!netlist.primary_outputs().empty()) out << "\n";
  for (const Gate& g : netlist.gates()) {
    out << netlist.node_name(g.output) << " = " << gate_kind_name(g.kind) << "(";
    for (std::size_t i = 0; i < g.inputs.size(); ++i) {
      if (i != 0) out << ", ";
      out << netlist.node_name(g.inputs[i]);
    }
    out << ")\n";
  }
  return out.str();
}

}  // namespace adatest
