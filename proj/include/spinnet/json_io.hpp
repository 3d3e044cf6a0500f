#pragma once

/// \file spinnet/json_io.hpp
/// JSON form of exact values:
///   {"coeff_num": "-1", "coeff_den": "3", "radicand_num": "3", "radicand_den": "1", "float": -0.577...}
/// Integers are decimal strings so nothing is lost to double rounding.

#include "spinnet/error.hpp"
#include "spinnet/radical.hpp"

#include <json.hpp>

#include <string>

namespace spinnet {

using Json = nlohmann::json;

inline Json to_json_value(const RadicalRational &x) {
    return Json{{"coeff_num", boost::multiprecision::numerator(x.coeff()).str()},
                {"coeff_den", boost::multiprecision::denominator(x.coeff()).str()},
                {"radicand_num", x.radicand().str()},
                {"radicand_den", "1"},
                {"float", x.to_double()}};
}

inline RadicalRational radical_from_json(const Json &j) {
    auto field = [&](const char *name) -> BigInt {
        if (!j.is_object() || !j.contains(name) || !j.at(name).is_string())
            throw Error(ErrorKind::UnsupportedFormat, std::string("missing string field '") + name + "'");
        const std::string &s = j.at(name).get_ref<const std::string &>();
        if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos || s.find('-', 1) != std::string::npos)
            throw Error(ErrorKind::UnsupportedFormat, std::string("field '") + name + "' is not an integer: " + s);
        return BigInt(s);
    };
    BigInt cn = field("coeff_num"), cd = field("coeff_den"), rn = field("radicand_num"), rd = field("radicand_den");
    if (cd == 0 || rd == 0)
        throw Error(ErrorKind::UnsupportedFormat, "zero denominator");
    if (rn < 0 || rd < 0)
        throw Error(ErrorKind::UnsupportedFormat, "negative radicand");
    return RadicalRational::from_parts(Rational(cn, cd), Rational(rn, rd));
}

} // namespace spinnet
