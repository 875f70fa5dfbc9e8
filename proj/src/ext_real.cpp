#include "mf/ext_real.hpp"

#include <ostream>
#include <stdexcept>

#include "mf/error.hpp"

namespace mf {

namespace {

bool is_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// No leading zeros except the literal "0".
bool is_canonical_natural(std::string_view s) {
    return is_digits(s) && (s.size() == 1 || s.front() != '0');
}

[[noreturn]] void bad_rational(std::string_view text, const char* why) {
    throw Error(ErrorKind::Parse,
                "invalid rational '" + std::string(text) + "': " + why);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && body.front() == '-') {
        negative = true;
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                           : body.substr(slash + 1);
    if (!is_canonical_natural(num) || !is_canonical_natural(den))
        bad_rational(text, "expected k or p/q with decimal digits and no leading zeros");
    Integer n(std::string(num), 10);
    Integer d(std::string(den), 10);
    if (d == 0) bad_rational(text, "zero denominator");
    if (negative && n == 0) bad_rational(text, "negative zero");
    Integer g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (g != 1 && !(n == 0 && d == 1)) bad_rational(text, "not in lowest terms");
    Rational q(n, d);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

std::string format_rational(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

ExtReal::ExtReal(long n) : value_(n) {
    if (n < 0) throw std::domain_error("ExtReal must be nonnegative");
}

ExtReal::ExtReal(long num, long den) {
    if (den <= 0 || num < 0) throw std::domain_error("ExtReal must be nonnegative with positive denominator");
    value_ = Rational(num, den);
    value_.canonicalize();
}

ExtReal::ExtReal(Rational q) : value_(std::move(q)) {
    value_.canonicalize();
    if (sgn(value_) < 0) throw std::domain_error("ExtReal must be nonnegative");
}

ExtReal ExtReal::infinity() noexcept {
    ExtReal x;
    x.inf_ = true;
    return x;
}

const Rational& ExtReal::value() const {
    if (inf_) throw std::logic_error("ExtReal::value() on infinity");
    return value_;
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.inf_ || b.inf_) return ExtReal::infinity();
    ExtReal r;
    r.value_ = a.value_ + b.value_;
    return r;
}

ExtReal& ExtReal::operator+=(const ExtReal& other) {
    if (inf_) return *this;
    if (other.inf_) {
        inf_ = true;
        value_ = 0;
        return *this;
    }
    value_ += other.value_;
    return *this;
}

ExtReal operator*(const ExtReal& a, const ExtReal& b) {
    if (a.is_zero() || b.is_zero()) return ExtReal{};
    if (a.inf_ || b.inf_) return ExtReal::infinity();
    ExtReal r;
    r.value_ = a.value_ * b.value_;
    return r;
}

ExtReal monus(const ExtReal& a, const ExtReal& b) {
    if (b.inf_) throw std::domain_error("monus: subtrahend is infinite");
    if (a.inf_) return a;
    if (a.value_ < b.value_) throw std::domain_error("monus: result would be negative");
    return ExtReal(Rational(a.value_ - b.value_));
}

ExtReal divide(const ExtReal& a, const ExtReal& b) {
    if (a.inf_ || b.inf_ || b.is_zero()) throw std::domain_error("divide: needs finite a and finite positive b");
    return ExtReal(Rational(a.value_ / b.value_));
}

bool operator==(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.inf_ || b.inf_) {
        if (a.inf_ == b.inf_) return std::strong_ordering::equal;
        return a.inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    int c = mpq_cmp(a.value_.get_mpq_t(), b.value_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string ExtReal::str() const { return inf_ ? "inf" : format_rational(value_); }

ExtReal ExtReal::parse(std::string_view text) {
    if (text == "inf") return infinity();
    Rational q = parse_rational(text);
    if (sgn(q) < 0) throw Error(ErrorKind::Parse, "negative value '" + std::string(text) + "' where [0, inf] expected");
    return ExtReal(std::move(q));
}

ExtReal add(const ExtReal& a, const ExtReal& b) { return a + b; }
ExtReal mul(const ExtReal& a, const ExtReal& b) { return a * b; }

Order cmp(const ExtReal& a, const ExtReal& b) noexcept {
    auto c = a <=> b;
    if (c < 0) return Order::LT;
    if (c > 0) return Order::GT;
    return Order::EQ;
}

ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }
ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

ExtReal pow2_neg(unsigned k) {
    Integer den = 1;
    den <<= k;
    return ExtReal(Rational(Integer(1), den));
}

std::ostream& operator<<(std::ostream& os, const ExtReal& x) { return os << x.str(); }

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::UniverseMismatch: return "UniverseMismatch";
        case ErrorKind::NoDecomposition: return "NoDecomposition";
        case ErrorKind::NotInDomain: return "NotInDomain";
        case ErrorKind::NotACover: return "NotACover";
        case ErrorKind::PreconditionFailed: return "PreconditionFailed";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::CertificationFailed: return "CertificationFailed";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::Parse: return "ParseError";
    }
    return "Unknown";
}

}  // namespace mf
