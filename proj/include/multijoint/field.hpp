#pragma once

#include "errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace multijoint {

namespace detail {

inline std::int64_t floor_mod(std::int64_t v, std::int64_t p) {
    std::int64_t r = v % p;
    return r < 0 ? r + p : r;
}

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t i = 2; i * i <= p; ++i)
        if (p % i == 0) return false;
    return true;
}

inline std::int64_t parse_int64(std::string_view text) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw parse_error("not an integer: '" + std::string(text) + "'");
    return value;
}

} // namespace detail

/// Element of a prime field F_p. Residues are kept canonical (0 <= v < p)
/// and every element carries its modulus, so cross-field mixing is caught
/// at the first arithmetic operation.
class fp_scalar {
public:
    fp_scalar(std::int64_t value, std::int64_t modulus)
        : value_(detail::floor_mod(value, modulus)), modulus_(modulus) {}

    std::int64_t residue() const { return value_; }
    std::int64_t modulus() const { return modulus_; }
    bool is_zero() const { return value_ == 0; }

    fp_scalar zero_like() const { return fp_scalar(0, modulus_); }
    fp_scalar one_like() const { return fp_scalar(1, modulus_); }

    fp_scalar operator-() const { return fp_scalar(modulus_ - value_, modulus_); }

    friend fp_scalar operator+(const fp_scalar& a, const fp_scalar& b) {
        a.check_same(b);
        return fp_scalar(a.value_ + b.value_, a.modulus_);
    }
    friend fp_scalar operator-(const fp_scalar& a, const fp_scalar& b) {
        a.check_same(b);
        return fp_scalar(a.value_ - b.value_ + a.modulus_, a.modulus_);
    }
    friend fp_scalar operator*(const fp_scalar& a, const fp_scalar& b) {
        a.check_same(b);
        // p < 2^31, so the product of two residues fits in int64.
        return fp_scalar(a.value_ * b.value_ % a.modulus_, a.modulus_);
    }
    friend fp_scalar operator/(const fp_scalar& a, const fp_scalar& b) {
        a.check_same(b);
        return a * b.inverse();
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    fp_scalar inverse() const {
        if (value_ == 0) throw field_error("division by zero in F_" + std::to_string(modulus_));
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = modulus_, new_r = value_;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        return fp_scalar(t, modulus_);
    }

    friend bool operator==(const fp_scalar& a, const fp_scalar& b) {
        a.check_same(b);
        return a.value_ == b.value_;
    }
    friend bool operator!=(const fp_scalar& a, const fp_scalar& b) { return !(a == b); }
    friend bool operator<(const fp_scalar& a, const fp_scalar& b) {
        a.check_same(b);
        return a.value_ < b.value_;
    }

    std::string str() const { return std::to_string(value_); }

private:
    void check_same(const fp_scalar& other) const {
        if (modulus_ != other.modulus_)
            throw field_error("mixed prime fields: F_" + std::to_string(modulus_) + " and F_" +
                              std::to_string(other.modulus_));
    }

    std::int64_t value_;
    std::int64_t modulus_;
};

/// Kernel for F_p with p a prime below 2^31. Primality is validated once
/// here by trial division; elements are produced through this kernel.
class prime_field {
public:
    using scalar = fp_scalar;

    explicit prime_field(std::int64_t p) : p_(p) {
        if (p > 2147483647)
            throw field_error("modulus too large: " + std::to_string(p) + " (need p < 2^31)");
        if (!detail::is_prime(p))
            throw field_error("modulus is not prime: " + std::to_string(p));
    }

    std::int64_t modulus() const { return p_; }

    scalar element(std::int64_t value) const { return scalar(value, p_); }

    scalar parse(std::string_view text) const { return element(detail::parse_int64(text)); }

    std::string spec_string() const { return "prime:" + std::to_string(p_); }

    friend bool operator==(const prime_field& a, const prime_field& b) { return a.p_ == b.p_; }

private:
    std::int64_t p_;
};

/// Arbitrary-precision rational. The underlying representation keeps the
/// fraction reduced with a positive denominator, so structural equality is
/// field equality.
class rat_scalar {
public:
    rat_scalar() : value_(0) {}
    explicit rat_scalar(boost::multiprecision::cpp_rational value) : value_(std::move(value)) {}

    const boost::multiprecision::cpp_rational& value() const { return value_; }
    boost::multiprecision::cpp_int numerator() const { return boost::multiprecision::numerator(value_); }
    boost::multiprecision::cpp_int denominator() const { return boost::multiprecision::denominator(value_); }
    bool is_zero() const { return value_ == 0; }

    rat_scalar zero_like() const { return rat_scalar(); }
    rat_scalar one_like() const { return rat_scalar(boost::multiprecision::cpp_rational(1)); }

    rat_scalar operator-() const { return rat_scalar(-value_); }

    friend rat_scalar operator+(const rat_scalar& a, const rat_scalar& b) { return rat_scalar(a.value_ + b.value_); }
    friend rat_scalar operator-(const rat_scalar& a, const rat_scalar& b) { return rat_scalar(a.value_ - b.value_); }
    friend rat_scalar operator*(const rat_scalar& a, const rat_scalar& b) { return rat_scalar(a.value_ * b.value_); }
    friend rat_scalar operator/(const rat_scalar& a, const rat_scalar& b) { return a * b.inverse(); }

    rat_scalar inverse() const {
        if (is_zero()) throw field_error("division by zero in Q");
        return rat_scalar(1 / value_);
    }

    friend bool operator==(const rat_scalar& a, const rat_scalar& b) { return a.value_ == b.value_; }
    friend bool operator!=(const rat_scalar& a, const rat_scalar& b) { return !(a == b); }
    friend bool operator<(const rat_scalar& a, const rat_scalar& b) { return a.value_ < b.value_; }

    std::string str() const {
        if (denominator() == 1) return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }

private:
    boost::multiprecision::cpp_rational value_;
};

/// Kernel for the rationals.
class rational_field {
public:
    using scalar = rat_scalar;

    scalar element(std::int64_t value) const {
        return scalar(boost::multiprecision::cpp_rational(value));
    }

    scalar element(std::int64_t num, std::int64_t den) const {
        if (den == 0) throw field_error("zero denominator");
        // Division normalizes sign and reduces the fraction.
        return scalar(boost::multiprecision::cpp_rational(num) / den);
    }

    scalar parse(std::string_view text) const {
        auto slash = text.find('/');
        try {
            if (slash == std::string_view::npos) {
                check_integer_format(text);
                return scalar(boost::multiprecision::cpp_rational(
                    boost::multiprecision::cpp_int(std::string(text))));
            }
            std::string_view num = text.substr(0, slash);
            std::string_view den = text.substr(slash + 1);
            check_integer_format(num);
            check_integer_format(den);
            boost::multiprecision::cpp_int d{std::string(den)};
            if (d == 0) throw field_error("zero denominator in '" + std::string(text) + "'");
            return scalar(boost::multiprecision::cpp_rational(
                              boost::multiprecision::cpp_int(std::string(num))) /
                          boost::multiprecision::cpp_rational(d));
        } catch (const std::runtime_error& e) {
            if (dynamic_cast<const error*>(&e)) throw;
            throw parse_error("not a rational: '" + std::string(text) + "'");
        }
    }

    std::string spec_string() const { return "rational"; }

    friend bool operator==(const rational_field&, const rational_field&) { return true; }

private:
    static void check_integer_format(std::string_view text) {
        if (text.empty()) throw parse_error("empty number");
        std::size_t start = text[0] == '-' ? 1 : 0;
        if (start == text.size()) throw parse_error("bare sign");
        for (std::size_t i = start; i < text.size(); ++i)
            if (text[i] < '0' || text[i] > '9')
                throw parse_error("not a number: '" + std::string(text) + "'");
    }
};

template <class K>
concept field_kernel = requires(const K k, std::int64_t n, std::string_view sv) {
    typename K::scalar;
    { k.element(n) } -> std::same_as<typename K::scalar>;
    { k.parse(sv) } -> std::same_as<typename K::scalar>;
    { k.spec_string() } -> std::convertible_to<std::string>;
};

/// Dense matrix over an exact scalar type. Used for the span tests.
template <class S>
class matrix {
public:
    matrix(int rows, int cols, std::vector<S> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows_ < 0 || cols_ < 0 || entries_.size() != static_cast<std::size_t>(rows_) * cols_)
            throw validation_error("matrix entry count does not match its shape");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    S& at(int r, int c) { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }
    const S& at(int r, int c) const { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }

private:
    int rows_;
    int cols_;
    std::vector<S> entries_;
};

/// Row rank by exact Gaussian elimination. The pivot is always the first
/// nonzero entry in column order, which makes the reduction deterministic.
template <class S>
int rank(matrix<S> m) {
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int pivot = -1;
        for (int q = r; q < m.rows(); ++q) {
            if (!m.at(q, c).is_zero()) {
                pivot = q;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != r)
            for (int cc = 0; cc < m.cols(); ++cc) std::swap(m.at(pivot, cc), m.at(r, cc));
        S inv = m.at(r, c).inverse();
        for (int q = r + 1; q < m.rows(); ++q) {
            if (m.at(q, c).is_zero()) continue;
            S f = m.at(q, c) * inv;
            for (int cc = c; cc < m.cols(); ++cc) m.at(q, cc) = m.at(q, cc) - f * m.at(r, cc);
        }
        ++r;
    }
    return r;
}

} // namespace multijoint
