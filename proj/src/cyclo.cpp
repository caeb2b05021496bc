#include "subeqlab/cyclo.hpp"

#include <cctype>

namespace subeqlab {

std::size_t height(const Cyclo& x) {
    auto bits = [](const Rational& r) {
        return msb(numerator(r) == 0 ? Int(1) : abs(numerator(r))) +
               msb(denominator(r));
    };
    return static_cast<std::size_t>(bits(x.p) + bits(x.q));
}

std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

std::string to_string(const Cyclo& x) {
    if (x.q == 0) return to_string(x.p);
    std::string wpart;
    Rational aq = x.q < 0 ? Rational(-x.q) : x.q;
    if (aq == 1)
        wpart = "w";
    else
        wpart = to_string(aq) + " w";
    if (x.p == 0) return (x.q < 0 ? "-" : "") + wpart;
    return to_string(x.p) + (x.q < 0 ? " - " : " + ") + wpart;
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
};

Int parse_int(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.i;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
    if (c.i == start) throw parse_error("expected integer at position " + std::to_string(start) + " in '" + c.s + "'");
    return Int(c.s.substr(start, c.i - start));
}

// term := number [['*'] 'w'] | 'w'
Cyclo parse_term(Cursor& c, bool negative) {
    Rational value;
    bool have_number = false;
    if (c.peek() != 'w') {
        Int num = parse_int(c);
        Int den = 1;
        if (c.peek() == '/') {
            ++c.i;
            den = parse_int(c);
            if (den == 0) throw parse_error("zero denominator in '" + c.s + "'");
        }
        value = Rational(num, den);
        have_number = true;
    } else {
        value = 1;
    }
    if (c.peek() == '*') ++c.i;
    bool is_omega = false;
    if (c.peek() == 'w') {
        ++c.i;
        is_omega = true;
    } else if (!have_number) {
        throw parse_error("expected term in '" + c.s + "'");
    }
    if (negative) value = -value;
    return is_omega ? Cyclo(Rational(0), value) : Cyclo(value);
}

}  // namespace

Cyclo parse_cyclo(const std::string& text) {
    Cursor c{text};
    Cyclo result;
    bool first = true;
    while (!c.done()) {
        bool negative = false;
        char sign = c.peek();
        if (sign == '+' || sign == '-') {
            negative = sign == '-';
            ++c.i;
        } else if (!first) {
            throw parse_error("expected '+' or '-' at position " + std::to_string(c.i) + " in '" + text + "'");
        }
        result += parse_term(c, negative);
        first = false;
    }
    if (first) throw parse_error("empty cyclotomic literal");
    return result;
}

Rational parse_rational(const std::string& text) {
    Cyclo v = parse_cyclo(text);
    if (!v.is_rational()) throw parse_error("expected rational, got '" + text + "'");
    return v.p;
}

}  // namespace subeqlab
