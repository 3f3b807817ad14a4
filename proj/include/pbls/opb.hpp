#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pbls/formula.hpp"

namespace pbls {

struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;

  ParseError(const std::string& message, int line_, int col_)
      : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                           ": " + message),
        line(line_),
        col(col_) {}
};

/// Parses the linear OPB format used by the pseudo-Boolean competitions:
/// '*' comment lines, an optional "* #variable= n #constraint= m" header,
/// an optional "min:" objective line, and ';'-terminated constraints with
/// relations >=, <=, =, >, <. Literals are xN or ~xN. Constraints are stored
/// normalized; trivially satisfied ones are dropped.
PboInstance parse_opb(std::istream& in);
PboInstance parse_opb_string(const std::string& text);
PboInstance parse_opb_file(const std::string& path);

/// Writes an instance back out in the same format. Emitted text is a fixed
/// point of parse+emit.
void emit_opb(const PboInstance& inst, std::ostream& out);
std::string emit_opb_string(const PboInstance& inst);

}  // namespace pbls
