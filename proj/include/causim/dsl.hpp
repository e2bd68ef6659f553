#pragma once

#include <string>

#include "causim/sampler.hpp"
#include "causim/scm.hpp"

namespace causim {

// Mechanism concrete syntax.  Canonical render puts the header on one line,
// one clause per line with two-space indent, double-quoted tokens:
//
//   mech "f_ZY" out "ZY" exo "U_ZY" parents "[XQ, VI]" {
//     when XQ == "XQ" && U_ZY == "ax" -> "vok";
//     when U_ZY in {"by", "cz"} -> "pem";
//     default -> "nul";
//   }
//
// Parsing is whitespace-insensitive.  IN sets are normalized (sorted,
// deduplicated, singletons collapse to ==), so render(parse(t)) is the
// canonical form of t and render is byte-idempotent.
Mechanism parse_mechanism(const std::string& text);
std::string render_mechanism(const Mechanism& mech);

// Sampler concrete syntax, same conventions:
//
//   sampler "U_ZY" doc "..." { "ax": 1/3; "by": 1/3; "cz": 1/3; }
//
// The doc clause is optional and holds the one-line summary.
CategoricalSampler parse_sampler(const std::string& text);
std::string render_sampler(const CategoricalSampler& sampler);

}  // namespace causim
