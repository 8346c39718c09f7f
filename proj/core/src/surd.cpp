#include "raney/surd.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "raney/errors.hpp"

namespace raney {

namespace {

int sign_of(const Int& x) { return x == 0 ? 0 : (x > 0 ? 1 : -1); }

// Sign of a + b*sqrt(d), d >= 0 not necessarily squarefree.
int sign_one_radical(const Int& a, const Int& b, const Int& d) {
    if (b == 0 || d == 0) return sign_of(a);
    if (a == 0) return sign_of(b);
    int sa = sign_of(a), sb = sign_of(b);
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with b^2 d
    Int lhs = a * a, rhs = b * b * d;
    if (lhs == rhs) return 0;
    return (lhs > rhs) ? sa : sb;
}

// Sign of a + b*sqrt(d1) + c*sqrt(d2); d1, d2 > 1 squarefree and distinct, or the
// degenerate cases reduced before the call.
int sign_two_radicals(Int a, Int b, const Int& d1, Int c, const Int& d2) {
    if (d1 == 1 || d1 == 0) {
        if (d1 == 1) a += b;
        return sign_one_radical(a, c, d2);
    }
    if (d2 == 1 || d2 == 0) {
        if (d2 == 1) a += c;
        return sign_one_radical(a, b, d1);
    }
    if (b == 0) return sign_one_radical(a, c, d2);
    if (c == 0) return sign_one_radical(a, b, d1);
    // t = b*sqrt(d1) + c*sqrt(d2)
    int st;
    int sb = sign_of(b), sc = sign_of(c);
    if (sb == sc) {
        st = sb;
    } else {
        Int l = b * b * d1, r = c * c * d2;
        st = (l == r) ? 0 : ((l > r) ? sb : sc);
    }
    if (st == 0) return sign_of(a);
    if (a == 0) return st;
    int sa = sign_of(a);
    if (sa == st) return sa;
    // |a| vs |t|: a^2 - t^2 = (a^2 - b^2 d1 - c^2 d2) - 2bc*sqrt(d1 d2)
    Int ha = a * a - b * b * d1 - c * c * d2;
    int cmp = sign_one_radical(ha, -2 * b * c, d1 * d2);
    if (cmp == 0) return 0;
    return (cmp > 0) ? sa : st;
}

}  // namespace

void Surd::canonicalize() {
    if (inf_) return;
    if (w_ == 0) throw DivisionByZeroError("surd with zero denominator");
    if (D_ < 0) throw NegativeDiscriminantError("surd with negative radicand");
    if (w_ < 0) { u_ = -u_; v_ = -v_; w_ = -w_; }
    if (v_ == 0 || D_ == 0) { v_ = 0; D_ = 1; }
    if (D_ > 1) {
        auto [s, d] = extract_square(D_);
        v_ *= s;
        D_ = d;
    }
    if (D_ == 1) { u_ += v_; v_ = 0; }
    Int g = gcd(gcd(abs(u_), abs(v_)), w_);
    if (g > 1) { u_ /= g; v_ /= g; w_ /= g; }
}

Surd Surd::infinity() {
    Surd s;
    s.inf_ = true;
    return s;
}

Surd Surd::from_int(const Int& n) { return make(n, 0, 1, 1); }

Surd Surd::from_rational(const Rat& q) { return make(numerator(q), 0, 1, denominator(q)); }

Surd Surd::make(Int u, Int v, Int D, Int w) {
    Surd s;
    s.u_ = std::move(u);
    s.v_ = std::move(v);
    s.D_ = std::move(D);
    s.w_ = std::move(w);
    s.canonicalize();
    return s;
}

Surd Surd::sqrt_of(const Rat& q) {
    if (q < 0) throw NegativeDiscriminantError("sqrt of negative rational");
    // sqrt(n/d) = sqrt(n d)/d
    return make(0, 1, numerator(q) * denominator(q), denominator(q));
}

Rat Surd::as_rational() const {
    if (inf_ || D_ != 1) throw std::logic_error("surd is not rational");
    return Rat(u_, w_);
}

Rat Surd::square_as_rational() const {
    if (inf_ || u_ != 0) throw std::logic_error("surd is not a pure square root");
    return Rat(v_ * v_ * D_, w_ * w_);
}

Surd Surd::conjugate() const {
    if (inf_) return *this;
    return make(u_, -v_, D_, w_);
}

Surd Surd::negated() const {
    if (inf_) throw std::logic_error("negating infinity");
    return make(-u_, -v_, D_, w_);
}

Surd Surd::plus(const Surd& o) const {
    if (inf_ || o.inf_) return infinity();
    Int D = D_;
    if (D_ == 1) D = o.D_;
    else if (o.D_ != 1 && o.D_ != D_)
        throw MixedFieldError("adding surds from distinct quadratic fields");
    return make(u_ * o.w_ + o.u_ * w_, v_ * o.w_ + o.v_ * w_, D, w_ * o.w_);
}

Surd Surd::minus(const Surd& o) const { return plus(o.negated()); }

Surd Surd::times_rational(const Rat& q) const {
    if (inf_) {
        if (q <= 0) throw std::logic_error("scaling infinity by a nonpositive rational");
        return *this;
    }
    return make(u_ * numerator(q), v_ * numerator(q), D_, w_ * denominator(q));
}

std::strong_ordering Surd::compare(const Surd& x, const Surd& y) {
    if (x.inf_ || y.inf_) {
        if (x.inf_ && y.inf_) return std::strong_ordering::equal;
        return x.inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    // sign of (u1 + v1 sqrt(D1))/w1 - (u2 + v2 sqrt(D2))/w2, w's positive
    int s = sign_two_radicals(x.u_ * y.w_ - y.u_ * x.w_, x.v_ * y.w_, x.D_, -y.v_ * x.w_, y.D_);
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

double Surd::to_double() const {
    if (inf_) return std::numeric_limits<double>::infinity();
    return (to_double(u_) + to_double(v_) * std::sqrt(to_double(D_))) / to_double(w_);
}

std::string Surd::str() const {
    if (inf_) return "inf";
    std::ostringstream os;
    if (v_ == 0) {
        os << u_;
        if (w_ != 1) os << "/" << w_;
        return os.str();
    }
    std::string radical;
    {
        std::ostringstream r;
        if (v_ == -1) r << "-";
        else if (v_ != 1) r << v_ << "*";
        r << "sqrt(" << D_ << ")";
        radical = r.str();
    }
    if (u_ == 0) {
        os << radical;
        if (w_ != 1) os << "/" << w_;
        return os.str();
    }
    if (w_ != 1) os << "(";
    os << u_;
    os << (v_ > 0 ? "+" : "");
    os << radical;
    if (w_ != 1) os << ")/" << w_;
    return os.str();
}

std::string Surd::decimal(int sig) const {
    if (inf_) return "inf";
    using Big = boost::multiprecision::cpp_bin_float_50;
    Big val = (Big(u_) + Big(v_) * sqrt(Big(D_))) / Big(w_);
    std::ostringstream os;
    os << std::setprecision(sig) << val;
    return os.str();
}

namespace {

struct Cursor {
    std::string_view s;
    std::size_t i = 0;
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        skip_ws();
        return i < s.size() && s[i] == c;
    }
    bool eat(char c) {
        if (peek(c)) { ++i; return true; }
        return false;
    }
    bool eat(std::string_view word) {
        skip_ws();
        if (s.substr(i, word.size()) == word) { i += word.size(); return true; }
        return false;
    }
    Int unsigned_integer() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw ParseError("expected integer in surd at offset " + std::to_string(i));
        return Int(std::string(s.substr(start, i - start)));
    }
};

// term := 'sqrt' '(' int ')' | int ['*'? 'sqrt' '(' int ')']
struct Term { Int rational{0}, coeff{0}, radicand{1}; };

Term parse_term(Cursor& c, bool negated) {
    Term t;
    auto radical = [&](Int lead) {
        if (!c.eat('(')) throw ParseError("expected ( after sqrt");
        t.radicand = c.unsigned_integer();
        if (!c.eat(')')) throw ParseError("expected ) in surd");
        t.coeff = lead;
    };
    if (c.eat("sqrt")) {
        radical(1);
    } else {
        Int lead = c.unsigned_integer();
        c.eat('*');
        if (c.eat("sqrt")) radical(lead);
        else t.rational = lead;
    }
    if (negated) { t.rational = -t.rational; t.coeff = -t.coeff; }
    return t;
}

}  // namespace

Surd Surd::parse(std::string_view text) {
    Cursor c{text};
    c.skip_ws();
    if (c.eat("inf")) {
        if (c.skip_ws(), c.i != c.s.size()) throw ParseError("trailing characters after inf");
        return infinity();
    }
    bool parened = c.eat('(');
    Int u = 0, v = 0, D = 1;
    Term t1 = parse_term(c, c.eat('-'));
    u += t1.rational;
    if (t1.coeff != 0) { v = t1.coeff; D = t1.radicand; }
    if (c.peek('+') || c.peek('-')) {
        bool minus = c.eat('-');
        if (!minus) c.eat('+');
        Term t2 = parse_term(c, minus);
        u += t2.rational;
        if (t2.coeff != 0) {
            if (v != 0) throw ParseError("two radical terms in surd");
            v = t2.coeff;
            D = t2.radicand;
        }
    }
    if (parened && !c.eat(')')) throw ParseError("unbalanced ( in surd");
    Int w = 1;
    if (c.eat('/')) w = c.unsigned_integer();
    c.skip_ws();
    if (c.i != c.s.size()) throw ParseError("trailing characters in surd");
    return make(u, v, D, w);
}

Surd mobius_apply(const std::array<Int, 4>& m, const Surd& x) {
    const Int &a = m[0], &b = m[1], &c = m[2], &d = m[3];
    if (x.is_infinite()) {
        if (c == 0) {
            if (a == 0) throw DivisionByZeroError("mobius of infinity by singular map");
            return Surd::infinity();
        }
        return Surd::make(a, 0, 1, c);
    }
    // x = (u + v sqrt(D))/w; numerator and denominator share the factor 1/w
    const Int &u = x.u(), &v = x.v(), &D = x.D(), &w = x.w();
    Int P = a * u + b * w, Q = a * v;
    Int R = c * u + d * w, S = c * v;
    Int den = R * R - S * S * D;
    if (den == 0) {
        // for canonical surds this happens only when c x + d = 0 exactly
        throw DivisionByZeroError("mobius denominator vanishes");
    }
    return Surd::make(P * R - Q * S * D, Q * R - P * S, D, den);
}

Surd positive_root(const Int& a, const Int& b, const Int& c) {
    if (a == 0) throw std::invalid_argument("positive_root: leading coefficient is zero");
    Int A = a, B = b, C = c;
    if (A < 0) { A = -A; B = -B; C = -C; }
    Int disc = B * B - 4 * A * C;
    if (disc < 0) throw NegativeDiscriminantError("quadratic has no real roots");
    return Surd::make(-B, 1, disc, 2 * A);
}

}  // namespace raney
