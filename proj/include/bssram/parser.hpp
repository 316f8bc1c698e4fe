#pragma once

#include <string>
#include <string_view>

#include "bssram/program.hpp"

namespace bssram {

/// Parses the `.bssram` text form. Throws ParseError (with line and column)
/// on lexical errors, malformed instructions, non-consecutive labels, and a
/// stop that is missing, duplicated or not last.
Program parse_program(std::string_view text);

/// Canonical text: optional signature header line, then one instruction per
/// line. parse_program(format_program(p)) == p for every valid p.
std::string format_program(const Program& p);

std::string format_instruction(const Instruction& ins);

} // namespace bssram
