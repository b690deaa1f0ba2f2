#pragma once

#include <string_view>
#include <vector>

#include "fusionclust/mixture.hpp"

namespace fusionclust {

// Mixture strings, whitespace-insensitive and case-insensitive:
//
//   mixture   := term ( '+' term )*
//   term      := [ weight '*' ] component
//   weight    := number [ '/' number ]
//   component := name '(' number ( ',' number )* ')'
//
//   normal(mean, sd)            aliases: n, norm
//   student_t(df, location)     aliases: t
//   laplace(location, rate)     aliases: dexp
//   beta(a, b)
//   chi_square(df)              aliases: chisq, chi2
//
// Either every term carries a weight or none does (equal weights).
// Example: "0.3*normal(-4,1) + 0.7*normal(4,1)", "1/3*t(1,-3)+...".
//
// A product model for multivariate data lists one mixture per dimension
// separated by ';', e.g. "0.5*normal(-2,1)+0.5*normal(2,1); normal(0,1)".

/// Throws ParseError on malformed input, DomainError on invalid parameters.
MixtureModel parse_mixture(std::string_view text);

/// One mixture per ';'-separated dimension.
std::vector<MixtureModel> parse_product(std::string_view text);

}  // namespace fusionclust
