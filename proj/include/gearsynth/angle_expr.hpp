#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gearsynth/common.hpp"

namespace gearsynth {

/**
 * Angle expression grammar: decimal (including scientific notation),
 * `pi`, `pi/k`, `pi/k^j`, or `a*10^-b`. Returns binary64 radians.
 */
inline double parse_angle(const std::string& expr) {
    auto fail = [&](std::size_t pos, const std::string& why) -> double {
        throw std::invalid_argument("parse_angle: " + why + " at position " +
                                    std::to_string(pos) + " in '" + expr + "'");
    };
    std::string s;
    for (char c : expr) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) return fail(0, "empty expression");

    if (s.rfind("pi", 0) == 0) {
        if (s.size() == 2) return kPi;
        if (s[2] != '/') return fail(2, "expected '/' after pi");
        std::string rest = s.substr(3);
        auto caret = rest.find('^');
        try {
            if (caret == std::string::npos) {
                std::size_t used = 0;
                long k = std::stol(rest, &used);
                if (used != rest.size() || k == 0) return fail(3, "bad divisor");
                return kPi / static_cast<double>(k);
            }
            std::size_t used = 0;
            long base = std::stol(rest.substr(0, caret), &used);
            if (used != caret || base == 0) return fail(3, "bad base");
            std::size_t used2 = 0;
            std::string expo = rest.substr(caret + 1);
            long e = std::stol(expo, &used2);
            if (used2 != expo.size()) return fail(3 + caret + 1, "bad exponent");
            return kPi / std::pow(static_cast<double>(base), static_cast<double>(e));
        } catch (const std::logic_error&) {
            return fail(3, "bad divisor");
        }
    }

    auto star = s.find("*10^");
    if (star != std::string::npos) {
        try {
            std::size_t used = 0;
            double a = std::stod(s.substr(0, star), &used);
            if (used != star) return fail(0, "bad mantissa");
            std::string expo = s.substr(star + 4);
            std::size_t used2 = 0;
            long b = std::stol(expo, &used2);
            if (used2 != expo.size()) return fail(star + 4, "bad exponent");
            return a * std::pow(10.0, static_cast<double>(b));
        } catch (const std::logic_error&) {
            return fail(0, "bad a*10^b form");
        }
    }

    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) return fail(used, "trailing characters");
        return v;
    } catch (const std::logic_error&) {
        return fail(0, "not a number");
    }
}

} // namespace gearsynth
