#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hirschlab/error.hpp"

namespace hirschlab {

/**
 * Exact rational number backed by GMP.
 *
 * The stored value is always in lowest terms with a positive denominator;
 * every constructor and arithmetic operator re-establishes that form.
 */
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(int value) : value_(value) {}   // NOLINT(google-explicit-constructor)
    explicit Rational(const mpz_class& integer) : value_(integer) {}
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Throws ArithmeticError on a zero denominator.
    Rational(const mpz_class& numerator, const mpz_class& denominator)
    {
        if (denominator == 0)
            throw ArithmeticError("rational with zero denominator");
        value_ = mpq_class(numerator, denominator);
        value_.canonicalize();
    }

    /**
     * Parse "[+-]digits[/digits]". Decimal points, exponents and whitespace
     * are rejected; the denominator must be a positive integer.
     */
    static Rational parse(std::string_view text)
    {
        auto fail = [&](const char* why) {
            return ParseError("bad rational '" + std::string(text) + "': " + why);
        };
        std::size_t pos = 0;
        bool negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            negative = text[pos] == '-';
            ++pos;
        }
        auto digits = [&](std::size_t from) {
            std::size_t end = from;
            while (end < text.size() && text[end] >= '0' && text[end] <= '9')
                ++end;
            return end;
        };
        std::size_t num_end = digits(pos);
        if (num_end == pos)
            throw fail("expected digits");
        mpz_class numerator(std::string(text.substr(pos, num_end - pos)), 10);
        mpz_class denominator = 1;
        if (num_end < text.size()) {
            if (text[num_end] != '/')
                throw fail("unexpected character");
            std::size_t den_end = digits(num_end + 1);
            if (den_end == num_end + 1 || den_end != text.size())
                throw fail("denominator must be a positive integer");
            denominator = mpz_class(std::string(text.substr(num_end + 1, den_end - num_end - 1)), 10);
            if (denominator == 0)
                throw ArithmeticError("bad rational '" + std::string(text) + "': zero denominator");
        }
        if (negative)
            numerator = -numerator;
        return Rational(numerator, denominator);
    }

    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }
    const mpq_class& mpq() const { return value_; }

    int sign() const { return sgn(value_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return value_.get_den() == 1; }

    /// "n" for integers, "n/d" otherwise. Never a decimal.
    std::string str() const
    {
        if (is_integer())
            return value_.get_num().get_str();
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    Rational operator-() const { return Rational(mpq_class(-value_)); }
    Rational abs() const { return Rational(mpq_class(::abs(value_))); }
    Rational inverse() const
    {
        if (is_zero())
            throw ArithmeticError("inverse of zero");
        mpq_class r;
        mpq_inv(r.get_mpq_t(), value_.get_mpq_t());
        return Rational(std::move(r));
    }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero())
            throw ArithmeticError("division by zero");
        value_ /= o.value_;
        return *this;
    }

    /// this += a * b without building an intermediate Rational.
    void add_product(const Rational& a, const Rational& b)
    {
        thread_local mpq_class scratch;
        mpq_mul(scratch.get_mpq_t(), a.value_.get_mpq_t(), b.value_.get_mpq_t());
        mpq_add(value_.get_mpq_t(), value_.get_mpq_t(), scratch.get_mpq_t());
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.value_.get_mpq_t(), b.value_.get_mpq_t()) != 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    mpq_class value_;
};

/// Reduced representative of n/d with positive denominator.
inline Rational reduce(const mpz_class& n, const mpz_class& d) { return Rational(n, d); }

inline Rational reduce(long n, long d) { return Rational(mpz_class(n), mpz_class(d)); }

struct RationalHash {
    std::size_t operator()(const Rational& r) const
    {
        return std::hash<std::string>{}(r.str());
    }
};

}  // namespace hirschlab
