#pragma once

#include <stdexcept>
#include <string>

#include "mlp/ast.hpp"

namespace mlp {

struct ParseError : std::runtime_error {
  Location loc;
  ParseError(Location l, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(l.line) + ":" +
                           std::to_string(l.col) + ": " + msg),
        loc(l) {}
};

/// Parses `.mlp` source. Throws ParseError (including unknown directive
/// statuses) on malformed input.
Program parse_program(const std::string& source);

/// Parses a single goal term, e.g. "prepend(a,[b],Ys)". Variables are
/// numbered 0..n-1 in first-occurrence order; num_vars_out receives n.
TermPtr parse_goal(const std::string& text, int* num_vars_out = nullptr);

}  // namespace mlp
