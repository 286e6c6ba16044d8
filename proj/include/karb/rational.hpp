#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>

namespace karb {

// Exact arbitrary-precision rational. All cost arithmetic in the library is
// exact; there is no floating point on any optimality-critical path.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using CostMap = std::map<int, Rat>;

/// Serializes as "p/q" with q >= 1, e.g. "7/1", "-3/2".
inline std::string rat_to_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p/q" (denominator required and positive). Returns nullopt on
/// malformed input.
std::optional<Rat> rat_from_string(const std::string& text);

}  // namespace karb
