#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace matchrobust {

/// Exact counts of permutations and profiles. These overflow 64 bits quickly.
using BigCount = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

}  // namespace matchrobust
