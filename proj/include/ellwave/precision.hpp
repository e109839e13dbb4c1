#pragma once

#include <boost/multiprecision/float128.hpp>

namespace ellwave {

// IEEE binary128. Used where the lattice sums cancel to O(q^p) and double
// precision leaves no significant digits.
using Quad = boost::multiprecision::float128;

template <class T>
inline double to_double(const T& x) {
  return static_cast<double>(x);
}

}  // namespace ellwave
