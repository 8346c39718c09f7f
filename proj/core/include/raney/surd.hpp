#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>

#include "raney/numeric.hpp"

namespace raney {

// Exact real quadratic irrational (u + v*sqrt(D))/w, plus a PositiveInfinity variant.
//
// Canonical form: w > 0, gcd(u, v, w) = 1, D squarefree, and v == 0 implies D == 1
// (rationals embed with D = 1). Values are immutable after construction; comparison
// is the exact real ordering across different fields.
class Surd {
  public:
    Surd() : u_(0), v_(0), D_(1), w_(1) {}

    static Surd infinity();
    static Surd from_int(const Int& n);
    static Surd from_rational(const Rat& q);
    // (u + v*sqrt(D))/w, canonicalized; requires w != 0, D >= 0.
    static Surd make(Int u, Int v, Int D, Int w);
    // sqrt of a nonnegative rational.
    static Surd sqrt_of(const Rat& q);

    bool is_infinite() const { return inf_; }
    bool is_rational() const { return !inf_ && D_ == 1; }
    // u == 0 and irrational, i.e. v*sqrt(D)/w; the shape of cut qualities.
    bool is_pure_sqrt() const { return !inf_ && u_ == 0 && D_ > 1; }

    const Int& u() const { return u_; }
    const Int& v() const { return v_; }
    const Int& D() const { return D_; }
    const Int& w() const { return w_; }

    Rat as_rational() const;         // requires is_rational()
    Rat square_as_rational() const;  // requires u == 0; returns v^2 D / w^2

    Surd conjugate() const;  // flips the sign of v
    Surd negated() const;
    Surd plus(const Surd& o) const;  // MixedFieldError on distinct D > 1
    Surd minus(const Surd& o) const;
    Surd times_rational(const Rat& q) const;

    static std::strong_ordering compare(const Surd& x, const Surd& y);
    bool operator==(const Surd& o) const { return compare(*this, o) == std::strong_ordering::equal; }
    bool operator<(const Surd& o) const { return compare(*this, o) == std::strong_ordering::less; }
    bool operator<=(const Surd& o) const { return compare(*this, o) != std::strong_ordering::greater; }
    bool operator>(const Surd& o) const { return o < *this; }
    bool operator>=(const Surd& o) const { return o <= *this; }

    double to_double() const;
    std::string str() const;                 // "sqrt(7157)/23", "(1+sqrt(5))/2", "inf"
    std::string decimal(int sig = 15) const; // "3.67821975514076"
    static Surd parse(std::string_view text);

  private:
    Int u_, v_, D_, w_;
    bool inf_ = false;
    void canonicalize();
};

// Exact (a*x + b)/(c*x + d) for an integer 2x2 matrix {a, b, c, d} (negative entries
// allowed). Throws DivisionByZeroError when c*x + d = 0.
Surd mobius_apply(const std::array<Int, 4>& m, const Surd& x);

// Larger real root of a*x^2 + b*x + c (a != 0); NegativeDiscriminantError if b^2 < 4ac.
Surd positive_root(const Int& a, const Int& b, const Int& c);

}  // namespace raney
