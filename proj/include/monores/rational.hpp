// Exact rational scalar type used throughout the symbolic path.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace monores {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

inline Rat rat(long long p, long long q = 1) { return Rat(Int(p), Int(q)); }

inline double to_double(const Rat& r) {
    return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

inline std::string to_string(const Rat& r) {
    if (r.denominator() == 1) return r.numerator().str();
    return r.numerator().str() + "/" + r.denominator().str();
}

// Accepts "p", "-p", "p/q".
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s), Int(1));
    Int p(s.substr(0, slash)), q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(p, q);
}

inline Rat abs(const Rat& r) { return r < Rat(0) ? -r : r; }

// Nearest rational with denominator <= max_den (continued fractions).
// Used only to snap numerically located zero centers onto exact points.
inline Rat rat_approx(double x, std::int64_t max_den = 64) {
    bool neg = x < 0;
    if (neg) x = -x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        std::int64_t a = static_cast<std::int64_t>(v);
        std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double frac = v - static_cast<double>(a);
        if (frac < 1e-12) break;
        v = 1.0 / frac;
    }
    Rat r(Int(p1), Int(q1 == 0 ? 1 : q1));
    return neg ? -r : r;
}

}  // namespace monores
