#include "raney/words.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "raney/errors.hpp"

namespace raney {

std::size_t Word::letter_count() const {
    std::size_t n = 0;
    for (auto r : runs) n += r;
    return n;
}

void Word::push(Letter c, std::uint32_t count) {
    if (count == 0) return;
    if (runs.empty()) {
        first = c;
        runs.push_back(count);
    } else if (last() == c) {
        runs.back() += count;
    } else {
        runs.push_back(count);
    }
}

void Word::append(const Word& o) {
    if (o.empty()) return;
    if (empty()) {
        *this = o;
        return;
    }
    std::size_t j = 0;
    if (o.first == last()) {
        runs.back() += o.runs[0];
        j = 1;
    }
    runs.insert(runs.end(), o.runs.begin() + j, o.runs.end());
}

std::string Word::str() const {
    std::string out;
    for (std::size_t j = 0; j < runs.size(); ++j)
        out.append(runs[j], letter_char(letter_of_run(j)));
    return out;
}

Word Word::parse(std::string_view text) {
    Word w;
    for (char c : text) {
        if (c == 'L') w.push(Letter::L);
        else if (c == 'R') w.push(Letter::R);
        else if (!std::isspace(static_cast<unsigned char>(c)))
            throw ParseError(std::string("bad letter in LR-word: ") + c);
    }
    return w;
}

Rat cf_value(const std::vector<std::int64_t>& terms) {
    if (terms.empty()) throw EmptyCFError("continued fraction with no terms");
    if (terms[0] < 0) throw std::invalid_argument("continued fraction with negative leading term");
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i] < 1) throw std::invalid_argument("continued fraction term < 1");
    Rat v = terms.back();
    for (std::size_t i = terms.size() - 1; i-- > 0;) v = Rat(terms[i]) + 1 / v;
    return v;
}

std::array<Int, 4> period_matrix(const Period& period) {
    if (period.empty()) throw EmptyPeriodError("empty continued fraction period");
    Int a = 1, b = 0, c = 0, d = 1;
    for (auto t : period) {
        if (t < 1) throw std::invalid_argument("period term < 1");
        // right-multiply by [[t,1],[1,0]]
        Int na = a * t + b, nc = c * t + d;
        b = a;
        d = c;
        a = na;
        c = nc;
    }
    return {a, b, c, d};
}

Surd periodic_value(const Period& period) {
    auto m = period_matrix(period);
    // fixed point of x = (a x + b)/(c x + d): c x^2 + (d - a) x - b = 0
    return positive_root(m[2], m[3] - m[0], -m[1]);
}

Surd cut_quality_periodic(const Period& period, std::size_t i) {
    if (i < 1 || i > period.size()) throw std::out_of_range("cut index outside the period");
    Period rot(period.begin() + (i - 1), period.end());
    rot.insert(rot.end(), period.begin(), period.begin() + (i - 1));
    auto m = period_matrix(rot);
    Int tr = m[0] + m[3];
    Int det = (period.size() % 2 == 0) ? 1 : -1;
    return Surd::make(0, 1, tr * tr - 4 * det, m[2]);
}

std::pair<Int, Int> lambda_periodic_raw(const Period& period) {
    auto m = period_matrix(period);
    Int tr = m[0] + m[3];
    Int det = (period.size() % 2 == 0) ? 1 : -1;
    Int disc = tr * tr - 4 * det;
    // The discriminant is rotation-invariant, so the max cut quality is
    // sqrt(disc) over the least lower-left entry among the rotations. Conjugate
    // by [[b,1],[1,0]] stepwise instead of rebuilding each rotated product.
    Int min_c = m[2];
    Int a = m[0], b = m[1], c = m[2], d = m[3];
    for (std::size_t i = 0; i + 1 < period.size(); ++i) {
        Int t = period[i];
        // inv([[t,1],[1,0]]) * M * [[t,1],[1,0]] with inv = [[0,1],[1,-t]]
        Int na = c * t + d;
        Int nb = c;
        Int nc = (a - c * t) * t + b - d * t;
        Int nd = a - c * t;
        a = na;
        b = nb;
        c = nc;
        d = nd;
        if (c < min_c) min_c = c;
    }
    return {disc, min_c};
}

Surd lambda_periodic(const Period& period) {
    auto [disc, min_c] = lambda_periodic_raw(period);
    return Surd::make(0, 1, disc, min_c);
}

Surd eventually_periodic_value(const std::vector<std::int64_t>& preperiod, const Period& period) {
    Surd x = periodic_value(period);
    if (preperiod.empty()) return x;
    if (preperiod[0] < 0) throw std::invalid_argument("negative leading preperiod term");
    for (std::size_t i = 1; i < preperiod.size(); ++i)
        if (preperiod[i] < 1) throw std::invalid_argument("preperiod term < 1");
    Int a = 1, b = 0, c = 0, d = 1;
    for (auto t : preperiod) {
        Int na = a * t + b, nc = c * t + d;
        b = a;
        d = c;
        a = na;
        c = nc;
    }
    return mobius_apply({a, b, c, d}, x);
}

namespace {

struct Frac {
    Int num, den;  // tails are in [0, 1), den > 0, coprime by construction
};

// reciprocal of (t + f)
inline Frac step(std::int64_t t, const Frac& f) { return {f.den, t * f.den + f.num}; }

}  // namespace

std::vector<Rat> cut_values_exact(const std::vector<std::uint32_t>& runs) {
    std::vector<Rat> out;
    if (runs.size() < 2) return out;
    const std::size_t k = runs.size() - 1;
    // backward chains: P_i = [0, a_{i-1}, ..., a_0], Q_i = [0, a_{i-1}, ..., a_1]
    std::vector<Frac> P(k + 1), Q(k + 1);
    P[1] = {1, Int(runs[0])};
    Q[1] = {0, 1};
    for (std::size_t i = 2; i <= k; ++i) {
        P[i] = step(runs[i - 1], P[i - 1]);
        Q[i] = step(runs[i - 1], Q[i - 1]);
    }
    // forward chains: S_i = [0, a_{i+1}, ..., a_k], T_i = [0, a_{i+1}, ..., a_{k-1}]
    std::vector<Frac> S(k + 1), T(k + 1);
    S[k] = {0, 1};
    if (k >= 1) T[k - 1] = {0, 1};
    for (std::size_t i = k; i-- > 0;) {
        if (i + 1 < k) T[i] = step(runs[i + 1], T[i + 1]);
        S[i] = step(runs[i + 1], S[i + 1]);
    }
    out.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) {
        const Frac& B = (i % 2 == 0) ? P[i] : Q[i];
        const Frac& F = ((k - i) % 2 == 0) ? S[i] : T[i];
        Int num = Int(runs[i]) * B.den * F.den + B.num * F.den + F.num * B.den;
        out.emplace_back(num, B.den * F.den);
    }
    return out;
}

Rat underline_lambda(const std::vector<std::uint32_t>& runs) {
    Rat best = 0;
    for (const Rat& v : cut_values_exact(runs))
        if (v > best) best = v;
    return best;
}

Rat underline_lambda(const Word& w) { return underline_lambda(w.runs); }

Period cyclic_runs(const std::vector<std::uint32_t>& runs) {
    if (runs.size() < 2) throw std::invalid_argument("cyclic_runs needs both letters");
    if (runs.size() % 2 == 1) {
        // first and last letters agree: wrap-around runs merge in w^inf;
        // rotate past run 0
        Period merged(runs.begin() + 1, runs.end());
        merged.back() += runs.front();
        return merged;
    }
    return Period(runs.begin(), runs.end());
}

Period cyclic_runs(const Word& w) { return cyclic_runs(w.runs); }

Surd word_power_lambda(const Word& w) {
    if (w.empty()) throw std::invalid_argument("word_power_lambda of the empty word");
    if (w.single_letter()) return Surd::infinity();
    return lambda_periodic(cyclic_runs(w));
}

bool is_cyclic_rotation(const Period& a, const Period& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    for (std::size_t s = 0; s < a.size(); ++s) {
        bool ok = true;
        for (std::size_t j = 0; j < a.size() && ok; ++j)
            ok = a[(s + j) % a.size()] == b[j];
        if (ok) return true;
    }
    return false;
}

bool cyclically_symmetric(const Period& a) {
    Period rev(a.rbegin(), a.rend());
    return is_cyclic_rotation(a, rev);
}

Symmetry classify_symmetry(const Period& period1, const Period& period2) {
    if (period1.empty() || period2.empty()) throw EmptyPeriodError("classify_symmetry on empty period");
    if (is_cyclic_rotation(period1, period2))
        return cyclically_symmetric(period1) ? Symmetry::S : Symmetry::A;
    Period rev(period1.rbegin(), period1.rend());
    if (is_cyclic_rotation(rev, period2)) return Symmetry::R;
    throw UnrelatedPeriodsError("periods are neither rotations nor reversed rotations");
}

Period parse_period(std::string_view text) {
    Period out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() &&
               (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
            ++i;
    };
    auto number = [&]() -> std::int64_t {
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw ParseError("expected digit in period at offset " + std::to_string(i));
        return std::stoll(std::string(text.substr(start, i - start)));
    };
    skip();
    bool brackets = i < text.size() && text[i] == '[';
    if (brackets) ++i;
    while (true) {
        skip();
        if (i >= text.size()) break;
        if (text[i] == ']') { ++i; break; }
        std::int64_t term;
        if (brackets) {
            term = number();
        } else {
            // compact form: one digit per term
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw ParseError(std::string("bad character in period: ") + text[i]);
            term = text[i] - '0';
            ++i;
        }
        std::int64_t reps = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            reps = number();
        }
        if (term < 1 || reps < 1) throw ParseError("period terms and repetitions must be >= 1");
        out.insert(out.end(), reps, term);
    }
    skip();
    if (i != text.size()) throw ParseError("trailing characters in period");
    if (out.empty()) throw EmptyPeriodError("empty period string");
    return out;
}

std::string period_brackets(const Period& p) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << "]";
    return os.str();
}

std::string period_digits(const Period& p) {
    if (std::all_of(p.begin(), p.end(), [](std::int64_t t) { return t >= 1 && t <= 9; })) {
        std::string s;
        for (auto t : p) s += char('0' + t);
        return s;
    }
    return period_brackets(p);
}

std::vector<std::int64_t> word_to_cf_terms(const Word& w) {
    std::vector<std::int64_t> terms;
    if (w.empty()) return terms;
    if (w.first == Letter::L) terms.push_back(0);
    for (auto r : w.runs) terms.push_back(r);
    return terms;
}

}  // namespace raney
