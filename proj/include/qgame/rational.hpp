#pragma once

#include <gmp.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qgame {

// Exact rational value backed by GMP. Always stored in lowest terms with a
// positive denominator; equality is value equality. Prints as "m" when the
// denominator is 1, otherwise "m/n".
class Rational {
  public:
    Rational() { mpq_init(q_); }
    Rational(long n) {
        mpq_init(q_);
        mpq_set_si(q_, n, 1);
    }
    Rational(long num, long den);

    Rational(const Rational& o) {
        mpq_init(q_);
        mpq_set(q_, o.q_);
    }
    Rational(Rational&& o) noexcept {
        mpq_init(q_);
        mpq_swap(q_, o.q_);
    }
    Rational& operator=(const Rational& o) {
        mpq_set(q_, o.q_);
        return *this;
    }
    Rational& operator=(Rational&& o) noexcept {
        mpq_swap(q_, o.q_);
        return *this;
    }
    ~Rational() { mpq_clear(q_); }

    // Parses "m" or "m/n" (optional leading '-', decimal digits only).
    static Rational from_string(std::string_view s);

    std::string str() const;

    Rational operator+(const Rational& o) const {
        Rational r;
        mpq_add(r.q_, q_, o.q_);
        return r;
    }
    Rational operator-(const Rational& o) const {
        Rational r;
        mpq_sub(r.q_, q_, o.q_);
        return r;
    }
    Rational operator*(const Rational& o) const {
        Rational r;
        mpq_mul(r.q_, q_, o.q_);
        return r;
    }
    Rational operator/(const Rational& o) const;
    Rational operator-() const {
        Rational r;
        mpq_neg(r.q_, q_);
        return r;
    }

    Rational& operator+=(const Rational& o) {
        mpq_add(q_, q_, o.q_);
        return *this;
    }
    Rational& operator-=(const Rational& o) {
        mpq_sub(q_, q_, o.q_);
        return *this;
    }
    Rational& operator*=(const Rational& o) {
        mpq_mul(q_, q_, o.q_);
        return *this;
    }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return mpq_equal(q_, o.q_) != 0; }
    std::strong_ordering operator<=>(const Rational& o) const {
        int c = mpq_cmp(q_, o.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    int sign() const { return mpq_sgn(q_); }
    bool is_zero() const { return mpq_sgn(q_) == 0; }
    bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }

    Rational abs() const {
        Rational r;
        mpq_abs(r.q_, q_);
        return r;
    }

    // Largest integer <= *this / smallest integer >= *this, as Rationals.
    Rational floor() const;
    Rational ceil() const;

    Rational numerator() const;
    Rational denominator() const;

    // floor/ceil of this*n divided back by n: rounding onto the 1/n grid.
    Rational floor_to_grid(const Rational& n) const;
    Rational ceil_to_grid(const Rational& n) const;

    // lcm of two positive integers (integer-valued Rationals).
    static Rational int_lcm(const Rational& a, const Rational& b);

    // x mod 1 in [0, 1).
    Rational mod_one() const { return *this - floor(); }

    // Floor n-th root of a nonnegative integer-valued Rational.
    static Rational int_root_floor(const Rational& x, unsigned long n);

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

  private:
    mpq_t q_;
};

inline Rational operator+(long a, const Rational& b) { return Rational(a) + b; }
inline Rational operator-(long a, const Rational& b) { return Rational(a) - b; }
inline Rational operator*(long a, const Rational& b) { return Rational(a) * b; }

} // namespace qgame
