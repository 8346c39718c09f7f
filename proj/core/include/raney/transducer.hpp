#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "raney/words.hpp"

namespace raney {

// Nonnegative integer 2x2 matrix acting as a linear fractional transformation.
struct Mat {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return a * d - b * c; }
    // a > c and b < d: no dominant row.
    bool row_balanced() const { return a > c && b < d; }
    // additionally a > b and c < d: no dominant row or column.
    bool doubly_balanced() const { return a > b && c < d && a > c && b < d; }
    std::int64_t content() const;  // gcd of the entries

    Mat times_letter(Letter s) const {
        if (s == Letter::L) return {a + b, b, c + d, d};
        return {a, a + b, c, c + d};
    }

    bool operator==(const Mat&) const = default;
    std::string str() const;
};

// Mirror symmetry: conjugation by x -> 1/x, which swaps L and R.
inline Mat mirror_mat(const Mat& m) { return {m.d, m.c, m.b, m.a}; }
Word swap_letters(const Word& w);

struct Edge {
    std::int32_t from = 0, to = 0;
    Word in, out;
};

enum class Kind { Slow, Fast };

struct Transducer {
    std::int64_t level = 0;
    Kind kind = Kind::Slow;
    std::vector<Mat> nodes;
    std::vector<Edge> edges;                 // contiguous per from-node
    std::vector<std::uint32_t> out_begin;    // size nodes()+1; edge range of node i
    std::int32_t start = 0;                  // index of [[n,0],[0,1]]

    std::size_t node_count() const { return nodes.size(); }
    std::span<const Edge> out_edges(std::int32_t node) const {
        return {edges.data() + out_begin[node], edges.data() + out_begin[node + 1]};
    }
    std::int32_t find_node(const Mat& m) const;  // -1 if absent
};

// One step of the slow transducer: reduce gamma * S back to row-balanced form,
// emitting the output word. Requires gamma row-balanced with positive determinant.
std::pair<Word, Mat> slow_step(const Mat& gamma, Letter s);

Transducer build_slow(std::int64_t n);  // n >= 2
Transducer build_fast(std::int64_t n);  // n >= 2

// Structural checks; returns human-readable violations (empty = valid).
std::vector<std::string> validate(const Transducer& t);

std::string to_dot(const Transducer& t);
std::string to_json_text(const Transducer& t);

struct DriveResult {
    Word output;
    std::int32_t node = 0;
    std::size_t consumed = 0;  // input letters consumed (fast may stop early)
};

// Walk the transducer reading `input`; works for both kinds (fast edges are
// matched by the base property of their input words).
DriveResult drive(const Transducer& t, std::int32_t node, std::span<const Letter> input);

std::vector<Letter> word_letters(const Word& w);

}  // namespace raney
