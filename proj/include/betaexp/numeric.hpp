#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace betaexp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

inline int sign_of(const Rat& r) { return r.sign(); }
inline int sign_of(const Int& v) { return v.sign(); }

} // namespace betaexp
