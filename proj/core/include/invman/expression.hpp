#pragma once

#include <map>
#include <string>
#include <string_view>

namespace invman {

// Evaluates an arithmetic expression over named parameters.
// Grammar: numbers, identifiers, + − * / ^ (right-associative), unary ±,
// parentheses and sqrt(·). Throws SchemaError with the failing offset.
double evaluate_expression(std::string_view text, const std::map<std::string, double>& parameters);

}  // namespace invman
