#ifndef TRIP_PARSER_HPP
#define TRIP_PARSER_HPP

#include <string>

#include "trip/superpoly.hpp"

namespace trip {

// Grammar: rational literals (like 2, -5, 3/4), declared identifiers, + - *,
// ^ with a non-negative integer exponent (even generators only), parentheses.
// Juxtaposed odd generators keep their written order: "th2*th1" is -th1*th2
// after canonical normalization. Errors carry the 1-based position.
SuperPoly parseExpression(const std::string& text, TablePtr table,
                          std::optional<int> trunc = std::nullopt);

// Deterministic canonical printer; parseExpression(printExpression(f)) == f.
std::string printExpression(const SuperPoly& poly);

}  // namespace trip

#endif
