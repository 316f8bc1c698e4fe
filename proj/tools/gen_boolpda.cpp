// Prints the pushdown formula evaluator in the .bssram syntax.

#include <iostream>

#include "bssram/boolpda.hpp"
#include "bssram/parser.hpp"

int main() {
    std::cout << "# Generated by gen_boolpda. Halts with output (1) exactly on the prefix\n"
                 "# form of a Boolean formula whose value is 1.\n"
              << bssram::format_program(bssram::build_boolean_pda()) << '\n';
}
