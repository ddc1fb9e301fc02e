#include "setfam/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "setfam/errors.hpp"

namespace setfam {

std::string render_family(const SetFamily& family) {
  std::string out = std::to_string(family.n()) + ' ' +
                    (family.is_uniform() ? std::to_string(family.k()) : std::string("*")) + '\n';
  for (Subset s : family.members_lex()) {
    bool first = true;
    for (int e : elements_of(s)) {
      if (!first) out += ' ';
      out += std::to_string(e);
      first = false;
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

int parse_int(const std::string& token, std::size_t line_no) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty())
    throw InputError("line " + std::to_string(line_no) + ": not an integer: '" + token + "'");
  return value;
}

}  // namespace

SetFamily parse_family(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw InputError("line 1: missing header \"n k\"");
  std::istringstream header(lines[0]);
  std::string n_tok, k_tok, extra;
  if (!(header >> n_tok >> k_tok) || (header >> extra))
    throw InputError("line 1: header must be \"n k\" or \"n *\"");
  const int n = parse_int(n_tok, 1);
  if (n < 0 || n > kMaxLayerN)
    throw InputError("line 1: n = " + n_tok + " outside 0.." + std::to_string(kMaxLayerN));
  std::optional<int> k;
  if (k_tok != "*") {
    k = parse_int(k_tok, 1);
    if (*k < 0 || *k > n) throw InputError("line 1: k = " + k_tok + " outside 0..n");
  }

  std::vector<Subset> members;
  std::unordered_set<Subset> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::istringstream row(lines[i]);
    std::string tok;
    Subset s = 0;
    int last = 0;
    while (row >> tok) {
      const int e = parse_int(tok, line_no);
      if (e < 1 || e > n)
        throw InputError("line " + std::to_string(line_no) + ": element " + tok +
                         " outside 1.." + std::to_string(n));
      if (e <= last)
        throw InputError("line " + std::to_string(line_no) + ": elements must be ascending");
      last = e;
      s |= element_bit(e);
    }
    if (k && cardinality(s) != *k)
      throw InputError("line " + std::to_string(line_no) + ": set of size " +
                       std::to_string(cardinality(s)) + " in layer " + std::to_string(*k));
    if (!seen.insert(s).second)
      throw InputError("line " + std::to_string(line_no) + ": duplicate set " + to_string(s));
    members.push_back(s);
  }
  const Storage storage = k ? Storage::layer : default_storage(n);
  return SetFamily::from_members(n, storage, std::move(members), k);
}

SetFamily read_family_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open family file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_family(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_family_file(const std::string& path, const SetFamily& family) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << render_family(family);
}

}  // namespace setfam
