#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raney/surd.hpp"

namespace raney {

// Positive solution of x^2 + y^2 + z^2 = 3xyz with x <= y <= z.
struct MarkoffTriple {
    std::int64_t x = 1, y = 1, z = 1;
    bool operator==(const MarkoffTriple&) const = default;
    auto operator<=>(const MarkoffTriple&) const = default;
};

// All triples with z <= z_bound, grown from (1,1,1) by Vieta involutions,
// deduplicated and sorted by (z, y, x).
std::vector<MarkoffTriple> enumerate_triples(std::int64_t z_bound);

// sqrt(9 z^2 - 4) / z, canonicalized.
Surd lambda_z(std::int64_t z);

// Discriminant of the attached quadratic form: 9z^2 - 4 for z odd, (9z^2 - 4)/4 for z even.
Int markoff_discriminant(std::int64_t z);

struct MarkoffPoint {
    MarkoffTriple triple;
    Surd lambda;
    Int D;
};

// The six congruence cases; returns the Markoff points guaranteed to lie in L_p.
// "square mod q" counts p == 0 mod q as a square. Throws NotPrimeError.
std::vector<MarkoffPoint> corollary_filter(std::int64_t p);

// Which of the six cases fired, in order (a)..(f).
std::vector<bool> corollary_cases(std::int64_t p);

struct SquarefreeCollision {
    Int part;
    std::int64_t z1, z2;
};

struct UniquenessReport {
    std::int64_t z_bound = 0;
    std::size_t triples_checked = 0;
    std::vector<SquarefreeCollision> collisions;       // strong-uniqueness violations
    std::vector<std::int64_t> duplicate_max;           // classical-uniqueness violations
    std::vector<std::int64_t> factorization_timeouts;  // entries skipped (reported, not fatal)
};

// Squarefree parts of 9z^2 - 4 over all triple maxima z <= z_bound; any collision
// would make some ratio a rational square. Also checks each z occurs once as a max.
UniquenessReport strong_uniqueness_check(std::int64_t z_bound);

}  // namespace raney
