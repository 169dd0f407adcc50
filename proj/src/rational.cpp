#include "qgame/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

#include "qgame/errors.hpp"

namespace qgame {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DuplicatePayoff: return "DuplicatePayoff";
        case Errc::NotNormalized: return "NotNormalized";
        case Errc::EmptyState: return "EmptyState";
        case Errc::UnknownPayoff: return "UnknownPayoff";
        case Errc::PayoffCollision: return "PayoffCollision";
        case Errc::ExpansionTooLarge: return "ExpansionTooLarge";
        case Errc::EnclosureTooWide: return "EnclosureTooWide";
        case Errc::MalformedTrace: return "MalformedTrace";
        case Errc::ParseError: return "ParseError";
    }
    return "Error";
}

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    mpq_init(q_);
    mpq_set_si(q_, num, 1);
    Rational d;
    mpq_set_si(d.q_, den, 1);
    mpq_div(q_, q_, d.q_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    Rational r;
    mpq_div(r.q_, q_, o.q_);
    return r;
}

Rational Rational::from_string(std::string_view s) {
    auto fail = [&] { throw Error(Errc::ParseError, "bad rational '" + std::string(s) + "'"); };
    if (s.empty()) fail();
    std::string_view num = s, den = "1";
    if (auto pos = s.find('/'); pos != std::string_view::npos) {
        num = s.substr(0, pos);
        den = s.substr(pos + 1);
    }
    auto check = [&](std::string_view t, bool sign_ok) {
        if (t.empty()) fail();
        size_t i = 0;
        if (sign_ok && t[0] == '-') i = 1;
        if (i == t.size()) fail();
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) fail();
    };
    check(num, true);
    check(den, false);
    Rational r;
    if (mpz_set_str(mpq_numref(r.q_), std::string(num).c_str(), 10) != 0) fail();
    if (mpz_set_str(mpq_denref(r.q_), std::string(den).c_str(), 10) != 0) fail();
    if (mpz_sgn(mpq_denref(r.q_)) == 0) fail();
    mpq_canonicalize(r.q_);
    return r;
}

std::string Rational::str() const {
    char* c = mpq_get_str(nullptr, 10, q_);
    std::string s(c);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(c, s.size() + 1);
    return s;
}

Rational Rational::floor() const {
    Rational r;
    mpz_fdiv_q(mpq_numref(r.q_), mpq_numref(q_), mpq_denref(q_));
    return r;
}

Rational Rational::ceil() const {
    Rational r;
    mpz_cdiv_q(mpq_numref(r.q_), mpq_numref(q_), mpq_denref(q_));
    return r;
}

Rational Rational::numerator() const {
    Rational r;
    mpz_set(mpq_numref(r.q_), mpq_numref(q_));
    return r;
}

Rational Rational::denominator() const {
    Rational r;
    mpz_set(mpq_numref(r.q_), mpq_denref(q_));
    return r;
}

Rational Rational::floor_to_grid(const Rational& n) const { return (*this * n).floor() / n; }

Rational Rational::ceil_to_grid(const Rational& n) const { return (*this * n).ceil() / n; }

Rational Rational::int_lcm(const Rational& a, const Rational& b) {
    if (!a.is_integer() || !b.is_integer()) throw std::domain_error("int_lcm: not integers");
    Rational r;
    mpz_lcm(mpq_numref(r.q_), mpq_numref(a.q_), mpq_numref(b.q_));
    return r;
}

Rational Rational::int_root_floor(const Rational& x, unsigned long n) {
    if (!x.is_integer() || x.sign() < 0) throw std::domain_error("int_root_floor: bad input");
    Rational r;
    mpz_root(mpq_numref(r.q_), mpq_numref(x.q_), n);
    return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace qgame
