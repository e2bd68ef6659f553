#pragma once

#include <string>

#include "causim/scm.hpp"

namespace causim {

// Natural-language rendering of an SCM: one templated English paragraph per
// sampler (ascending name) and per mechanism (topological order), e.g.
//
//   U_QE is sampled once per world. The sampling rule for U_QE is: generate
//   a random number uniformly between 0 and 1; if it is less than 1/2,
//   return "qe"; otherwise return "qx".
//
//   qe is set as the returned output of f_QE. The input to f_QE is U_QE.
//   The generation rule is: if U_QE equals "qe", return "QE"; otherwise
//   return "QX".
//
// The template is a fixed bijection on the executable content, so mapping
// back to the formal space preserves execution by construction.
std::string informalize(const Scm& scm);

// Inverts the template exactly; throws InformalParseError on any deviation.
// Doc strings are not carried by the text, and the topology tag is
// re-inferred as the first kind (chain, star, inverted_star, tree, layered,
// poly_tree) the rebuilt graph satisfies.
Scm parse_informal(const std::string& text, const std::string& scm_id = "informal",
                   int version = 0);

}  // namespace causim
