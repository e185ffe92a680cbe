#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace piwb {

/// Arbitrary-precision rational with eager semantics.
///
/// Thin wrapper over mpq_class that forces every operation to produce a
/// canonical, materialized value. gmpxx expression templates interact badly
/// with `auto` and with generic code (Eigen), so they are confined here.
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long n) : v_(n) {}
    Rat(long n, long d) : v_(n, d) {
        if (d == 0) throw std::invalid_argument("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class &q) : v_(q) {}

    /// Parses "p" or "p/q" with optional sign.
    static Rat parse(const std::string &s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rat: cannot parse '" + s + "'");
        q.canonicalize();
        return Rat(q);
    }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    std::string str() const { return v_.get_str(); }
    const mpq_class &raw() const { return v_; }
    double to_double() const { return v_.get_d(); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat &operator+=(const Rat &o) { v_ += o.v_; return *this; }
    Rat &operator-=(const Rat &o) { v_ -= o.v_; return *this; }
    Rat &operator*=(const Rat &o) { v_ *= o.v_; return *this; }
    Rat &operator/=(const Rat &o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat &b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat &b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat &b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat &b) { a /= b; return a; }

    friend bool operator==(const Rat &a, const Rat &b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat &a, const Rat &b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat &a, const Rat &b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat &a, const Rat &b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat &a, const Rat &b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat &a, const Rat &b) { return a.v_ >= b.v_; }

    friend Rat abs(const Rat &a) { return Rat(mpq_class(abs(a.v_))); }

  private:
    mpq_class v_;
};

std::ostream &operator<<(std::ostream &os, const Rat &r);

} // namespace piwb

template <> struct std::hash<piwb::Rat> {
    size_t operator()(const piwb::Rat &r) const noexcept {
        return std::hash<std::string>()(r.str());
    }
};
