#pragma once

// Deliberately naive reimplementations used as test oracles. They work on
// RouteTuples and ordered maps directly and share no code with the library's
// inference beyond the data model.

#include <map>
#include <vector>

#include "commusage/model.hpp"

namespace commusage::testing {

std::map<Asn, Classification> reference_inference(const std::vector<RouteTuple>& tuples,
                                                  const Thresholds& th, std::size_t max_column);

std::map<Asn, Classification> reference_rowbased(const std::vector<RouteTuple>& tuples,
                                                 const Thresholds& th);

/// Parses sanitized tuple lines (collector|peer|path|communities).
std::vector<RouteTuple> tuples_from_lines(const std::vector<std::string>& lines);

}  // namespace commusage::testing
