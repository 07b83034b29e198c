#include "inclab/rational.hpp"

#include <sstream>

namespace inclab {

Rational parse_rational(const std::string& token) {
    std::string s;
    for (char c : token)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational token");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Int num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 ||
            den.set_str(s.substr(slash + 1), 10) != 0)
            throw ParseError("bad rational token '" + token + "'");
        if (den == 0) throw ParseError("zero denominator in '" + token + "'");
        return rat(num, den);
    }

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+")
            throw ParseError("bad rational token '" + token + "'");
        Int num;
        if (num.set_str(digits, 10) != 0)
            throw ParseError("bad rational token '" + token + "'");
        Int den = 1;
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        return rat(num, den);
    }

    Int num;
    if (num.set_str(s, 10) != 0)
        throw ParseError("bad rational token '" + token + "'");
    return Rational(num);
}

std::string format_rational(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch();
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Int dot(const IntVec& a, const IntVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch();
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rational dot(const RatVec& a, const IntVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch();
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * Rational(b[i]);
    return s;
}

RatVec parse_rational_csv(const std::string& line) {
    RatVec out;
    std::string token;
    std::istringstream in(line);
    while (std::getline(in, token, ',')) out.push_back(parse_rational(token));
    if (out.empty()) throw ParseError("no rational tokens in '" + line + "'");
    return out;
}

std::string format_rational_csv(const RatVec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_rational(v[i]);
    }
    return s;
}

} // namespace inclab
