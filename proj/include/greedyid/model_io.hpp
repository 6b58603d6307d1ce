#pragma once

#include <string>

#include "greedyid/lti.hpp"
#include "greedyid/time_domain.hpp"

namespace greedyid {

/// On-disk model document: JSON with fields "order", "domain"
/// ("continuous" | "discrete"), "sample_time", and matrices "E", "A", "B",
/// "C", "D" as row-major nested arrays of [re, im] pairs. Doubles survive
/// the round trip bitwise.
void save_model(const std::string& path, const StateSpace& m);

/// Throws ParseError (with the offending field) on malformed documents and
/// DimensionMismatch when the matrix shapes disagree with "order".
StateSpace load_model(const std::string& path);

/// Trace rows "p, u_re, u_im, y_re, y_im" (comma-separated, header line),
/// plus a JSON sidecar at path + ".meta.json" carrying sample_time and k_min.
void save_trace(const std::string& path, const DiscreteTrace& t);
DiscreteTrace load_trace(const std::string& path);

}  // namespace greedyid
