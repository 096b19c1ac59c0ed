#pragma once

#include "arago/specfun.hpp"

#include <cmath>
#include <complex>

namespace test {

inline double rel(arago::cplx a, arago::cplx b) { return std::abs(a - b) / std::abs(b); }
inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace test
