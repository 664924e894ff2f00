#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

namespace etale {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "p", "p/q" or "-p/q"; q > 0 after normalization.
inline Rat parse_rational(std::string_view s) {
    auto bad = [&] { throw parse_error("bad rational: '" + std::string(s) + "'"); };
    size_t slash = s.find('/');
    try {
        if (slash == std::string_view::npos)
            return Rat(Int(std::string(s)));
        Int num{std::string(s.substr(0, slash))};
        Int den{std::string(s.substr(slash + 1))};
        if (den == 0) bad();
        return Rat(num, den);
    } catch (const std::exception&) {
        bad();
    }
    return Rat(0);
}

inline std::string rational_str(const Rat& r) {
    if (rat_den(r) == 1) return rat_num(r).str();
    return rat_num(r).str() + "/" + rat_den(r).str();
}

// Representative of r mod 1 in [0, 1).
inline Rat mod1(const Rat& r) {
    Int n = rat_num(r), d = rat_den(r);
    Int q = n / d;
    Int rem = n - q * d;
    if (rem < 0) rem += d;
    return Rat(rem, d);
}

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

// Conformal dimension / spin, always stored mod 1 in [0, 1).
// Represents the phase e^{2*pi*i*value}.
class Phase {
public:
    Phase() : v_(0) {}
    explicit Phase(const Rat& r) : v_(mod1(r)) {}
    const Rat& value() const { return v_; }
    Phase operator+(const Phase& o) const { return Phase(v_ + o.v_); }
    Phase operator-(const Phase& o) const { return Phase(v_ - o.v_); }
    Phase operator-() const { return Phase(-v_); }
    bool operator==(const Phase& o) const { return v_ == o.v_; }
    bool operator!=(const Phase& o) const { return v_ != o.v_; }
    bool operator<(const Phase& o) const { return v_ < o.v_; }
    bool is_zero() const { return v_ == 0; }
    std::string str() const { return rational_str(v_); }

private:
    Rat v_;
};

} // namespace etale
