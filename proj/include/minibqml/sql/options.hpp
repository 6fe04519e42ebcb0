#pragma once

#include "minibqml/sql/ast.hpp"

#include <string>
#include <string_view>

namespace minibqml::sql {

/// Checks `value` against the domain of option `key` and returns it in
/// canonical form (enumerations case-normalized, `[]` typed as a number
/// list where a number list is expected). Throws OptionError at `pos` for
/// an unknown key or an out-of-domain value.
OptionValue validate_option(std::string_view key, OptionValue value, SourcePos pos);

bool is_known_option(std::string_view key);

} // namespace minibqml::sql
