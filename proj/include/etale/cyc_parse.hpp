#pragma once

#include "etale/cyclotomic.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace etale {

// Text grammar for exact values used by the catalog files and serialization:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := ['-'] atom
//   atom   := rational
//           | sqrt(rational)
//           | sinpi(k,n)              -- sin(k*pi/n)
//           | sinratio(k,m,n)         -- sin(k*pi/n)/sin(m*pi/n)
//           | cyc(n; c0,c1,...)       -- power-basis coefficients
//
// Whitespace is insignificant.
class CycParser {
public:
    explicit CycParser(std::string_view s) : s_(s), pos_(0) {}

    Cyc parse() {
        Cyc v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return v;
    }

private:
    Cyc expr() {
        Cyc v = term();
        while (true) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                v = v + term();
            } else if (peek() == '-') {
                ++pos_;
                v = v - term();
            } else {
                return v;
            }
        }
    }

    Cyc term() {
        Cyc v = factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                v = v * factor();
            } else {
                return v;
            }
        }
    }

    Cyc factor() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return -factor();
        }
        return atom();
    }

    Cyc atom() {
        skip_ws();
        char c = peek();
        if (std::isdigit((unsigned char)c)) return Cyc(rational());
        if (match_kw("sqrt")) {
            expect('(');
            Rat r = signed_rational();
            expect(')');
            return Cyc::sqrt_nonneg(r);
        }
        if (match_kw("sinratio")) {
            expect('(');
            long k = integer();
            expect(',');
            long m = integer();
            expect(',');
            long n = integer();
            expect(')');
            return Cyc::sin_ratio(k, m, n);
        }
        if (match_kw("sinpi")) {
            expect('(');
            long k = integer();
            expect(',');
            long n = integer();
            expect(')');
            return Cyc::sin_pi(k, n);
        }
        if (match_kw("cyc")) {
            expect('(');
            long n = integer();
            expect(';');
            std::vector<Rat> coeffs;
            while (true) {
                coeffs.push_back(signed_rational());
                skip_ws();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
            expect(')');
            if ((long)coeffs.size() != euler_phi(n))
                fail("cyc(): expected " + std::to_string(euler_phi(n)) + " coefficients");
            return Cyc(n, std::move(coeffs));
        }
        fail("expected value atom");
        return Cyc();
    }

    Rat rational() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
        if (start == pos_) fail("expected number");
        Int num{std::string(s_.substr(start, pos_ - start))};
        if (peek() == '/') {
            ++pos_;
            size_t dstart = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
            if (dstart == pos_) fail("expected denominator");
            Int den{std::string(s_.substr(dstart, pos_ - dstart))};
            if (den == 0) fail("zero denominator");
            return Rat(num, den);
        }
        return Rat(num);
    }

    Rat signed_rational() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return -rational();
        }
        return rational();
    }

    long integer() {
        Rat r = signed_rational();
        if (!is_integer(r)) fail("expected integer");
        return (long)rat_num(r);
    }

    bool match_kw(std::string_view kw) {
        skip_ws();
        if (s_.substr(pos_, kw.size()) == kw) {
            pos_ += kw.size();
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error("value parse error at position " + std::to_string(pos_) + ": " + msg +
                          " in '" + std::string(s_) + "'");
    }

    std::string_view s_;
    size_t pos_;
};

inline Cyc parse_cyc(std::string_view s) { return CycParser(s).parse(); }

} // namespace etale
