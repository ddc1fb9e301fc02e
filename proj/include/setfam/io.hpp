#pragma once

// Plain-text family files: a header "n k" ("n *" when untagged), then one member
// per line as ascending space-separated elements. A blank line is the empty set.

#include <iosfwd>
#include <string>
#include <string_view>

#include "setfam/family.hpp"

namespace setfam {

/// Members are written in lex order.
[[nodiscard]] std::string render_family(const SetFamily& family);
/// Throws InputError (with the line number) on malformed headers, out-of-range or
/// unsorted elements, duplicate members and members off the declared layer.
[[nodiscard]] SetFamily parse_family(std::string_view text);

[[nodiscard]] SetFamily read_family_file(const std::string& path);
void write_family_file(const std::string& path, const SetFamily& family);

}  // namespace setfam
