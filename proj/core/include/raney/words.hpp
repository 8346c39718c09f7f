#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "raney/surd.hpp"

namespace raney {

enum class Letter : std::uint8_t { L = 0, R = 1 };

inline Letter flip(Letter c) { return c == Letter::L ? Letter::R : Letter::L; }
inline char letter_char(Letter c) { return c == Letter::L ? 'L' : 'R'; }

// Finite LR-word stored as run-length encoding: runs of alternating letters, the
// first run having letter `first`. The empty word has no runs.
struct Word {
    Letter first = Letter::L;
    std::vector<std::uint32_t> runs;

    bool empty() const { return runs.empty(); }
    bool single_letter() const { return runs.size() == 1; }
    std::size_t letter_count() const;
    Letter letter_of_run(std::size_t j) const {
        return (j % 2 == 0) ? first : flip(first);
    }
    Letter last() const { return letter_of_run(runs.size() - 1); }

    void push(Letter c, std::uint32_t count = 1);
    void append(const Word& o);

    bool operator==(const Word&) const = default;

    std::string str() const;
    static Word parse(std::string_view text);  // string over {L, R}
};

using Period = std::vector<std::int64_t>;

// Exact value of a finite simple continued fraction [a0, a1, ..., ak],
// a0 >= 0 and ai >= 1 for i >= 1. Throws EmptyCFError on an empty list.
Rat cf_value(const std::vector<std::int64_t>& terms);

// Product over the period of [[b, 1], [1, 0]]; determinant (-1)^len.
// Returned as {a, b, c, d}. Throws EmptyPeriodError.
std::array<Int, 4> period_matrix(const Period& period);

// Value of the purely periodic continued fraction [overline{b1, ..., bl}]:
// the fixed point > 1 of the period matrix.
Surd periodic_value(const Period& period);

// Quality of the cut at index i (1-based) of a periodic continued fraction:
// xi_i - conj(xi_i) = sqrt(tr^2 - 4 det) / c_i for the rotated period matrix.
// Always a pure square root of a rational.
Surd cut_quality_periodic(const Period& period, std::size_t i);

// lambda of the periodic continued fraction: max over all cuts.
Surd lambda_periodic(const Period& period);

// Same value as (N, d) meaning sqrt(N)/d, skipping squarefree canonicalization;
// N = tr^2 - 4 det of the period matrix, d = min lower-left entry over rotations.
std::pair<Int, Int> lambda_periodic_raw(const Period& period);

// Value of [a0, ..., ak, overline{b1, ..., bl}].
Surd eventually_periodic_value(const std::vector<std::int64_t>& preperiod, const Period& period);

// Lower bound on the approximability of any completion of a finite word with run
// lengths a0..ak: max over cuts i = 1..k of
//   a_i + [0, a_{i-1}, ..., a_{i%2}] + [0, a_{i+1}, ..., a_{k-((k-i)%2)}],
// both tails truncated to an even number of terms. Max over no cuts is 0.
Rat underline_lambda(const std::vector<std::uint32_t>& runs);
Rat underline_lambda(const Word& w);

// Exact values of all cuts i = 1..k (entry i-1 is cut i); empty for words with
// fewer than two runs.
std::vector<Rat> cut_values_exact(const std::vector<std::uint32_t>& runs);

// Run-length period of w^inf: rotate to a letter-change boundary, merging the
// wrap-around run when the word's first and last letters agree. Requires a word
// containing both letters.
Period cyclic_runs(const Word& w);
Period cyclic_runs(const std::vector<std::uint32_t>& runs);  // parity determines the merge

// lambda(w^inf): PositiveInfinity for single-letter words, else
// lambda_periodic(cyclic_runs(w)). Throws on the empty word.
Surd word_power_lambda(const Word& w);

enum class Symmetry { S, A, R };

inline char symmetry_char(Symmetry s) {
    return s == Symmetry::S ? 'S' : (s == Symmetry::A ? 'A' : 'R');
}

bool is_cyclic_rotation(const Period& a, const Period& b);
// Reversal is a cyclic rotation of the period itself.
bool cyclically_symmetric(const Period& a);

// S: period1 symmetric up to rotation and period2 a rotation of period1.
// A: period1 asymmetric, period2 a rotation of period1.
// R: period1 asymmetric, period2 a rotation of the reversal of period1.
// Throws UnrelatedPeriodsError when none applies.
Symmetry classify_symmetry(const Period& period1, const Period& period2);

// CF text formats: bracket form "[2,2,1,1]" and compact digit form "2211";
// both accept "a^b" repetition (exponent parsed greedily in compact form).
Period parse_period(std::string_view text);
std::string period_brackets(const Period& p);
// Compact digits when every term is a single digit, else the bracket form.
std::string period_digits(const Period& p);

// CF terms of the word read as an LR-expansion with the R-first convention:
// a leading 0 is inserted when the word starts with L.
std::vector<std::int64_t> word_to_cf_terms(const Word& w);

}  // namespace raney
