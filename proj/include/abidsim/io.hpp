#pragma once

#include <string>

#include "abidsim/core.hpp"

namespace abidsim {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double x);
double parse_double(const std::string& s);

/// Instance files are JSON documents with every number carried as a
/// decimal string, so that save -> load is bit-exact:
/// {"bidders": [{"id", "target"}],
///  "queries": [{"id", "values": [v per bidder], "ctrs": [c per bidder]}]}
/// On input, plain JSON numbers are accepted too, and "ctrs" may be omitted
/// (defaulting to 1).
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace abidsim
