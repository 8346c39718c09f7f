#include "raney/markoff.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "raney/errors.hpp"

namespace raney {

std::vector<MarkoffTriple> enumerate_triples(std::int64_t z_bound) {
    if (z_bound < 1) throw std::invalid_argument("z_bound must be >= 1");
    std::set<std::array<std::int64_t, 3>> seen;
    std::vector<std::array<std::int64_t, 3>> work;
    auto push = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
        std::array<std::int64_t, 3> s{x, y, z};
        std::sort(s.begin(), s.end());
        if (s[2] > z_bound) return;
        if (seen.insert(s).second) work.push_back(s);
    };
    push(1, 1, 1);
    while (!work.empty()) {
        auto [x, y, z] = work.back();
        work.pop_back();
        // Vieta involutions; only two can grow from a sorted triple
        push(3 * y * z - x, y, z);
        push(x, 3 * x * z - y, z);
        push(x, y, 3 * x * y - z);
    }
    std::vector<MarkoffTriple> out;
    out.reserve(seen.size());
    for (const auto& s : seen) out.push_back({s[0], s[1], s[2]});
    std::sort(out.begin(), out.end(), [](const MarkoffTriple& a, const MarkoffTriple& b) {
        return std::tie(a.z, a.y, a.x) < std::tie(b.z, b.y, b.x);
    });
    return out;
}

Surd lambda_z(std::int64_t z) {
    Int zz = z;
    return Surd::make(0, 1, 9 * zz * zz - 4, zz);
}

Int markoff_discriminant(std::int64_t z) {
    Int zz = z;
    Int d = 9 * zz * zz - 4;
    return (z % 2 == 0) ? d / 4 : d;
}

namespace {

// Euler's criterion, with p == 0 (mod q) counting as a square.
bool square_mod(std::int64_t p, std::uint64_t q) {
    std::uint64_t r = static_cast<std::uint64_t>(p) % q;
    if (r == 0) return true;
    return powmod_u64(r, (q - 1) / 2, q) == 1;
}

MarkoffPoint point_for(std::int64_t x, std::int64_t y, std::int64_t z) {
    return {{x, y, z}, lambda_z(z), markoff_discriminant(z)};
}

}  // namespace

std::vector<bool> corollary_cases(std::int64_t p) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p))) throw NotPrimeError("p must be prime");
    std::int64_t m5 = p % 5, m8 = p % 8;
    std::vector<bool> fired(6, false);
    fired[0] = m5 == 0 || m5 == 1 || m5 == 4;
    fired[1] = m8 == 2 || m8 == 1 || m8 == 7;
    fired[2] = square_mod(p, 13) && square_mod(p, 17);
    fired[3] = square_mod(p, 37) && square_mod(p, 41);
    fired[4] = square_mod(p, 5) && square_mod(p, 17) && square_mod(p, 89);
    fired[5] = (m8 == 1 || m8 == 7) && square_mod(p, 13);
    return fired;
}

std::vector<MarkoffPoint> corollary_filter(std::int64_t p) {
    auto fired = corollary_cases(p);
    static const std::array<std::array<std::int64_t, 3>, 6> triples{
        {{1, 1, 1}, {1, 1, 2}, {1, 2, 5}, {1, 5, 13}, {2, 5, 29}, {1, 13, 34}}};
    std::vector<MarkoffPoint> out;
    for (int i = 0; i < 6; ++i)
        if (fired[i]) out.push_back(point_for(triples[i][0], triples[i][1], triples[i][2]));
    return out;
}

UniquenessReport strong_uniqueness_check(std::int64_t z_bound) {
    UniquenessReport rep;
    rep.z_bound = z_bound;
    auto triples = enumerate_triples(z_bound);
    rep.triples_checked = triples.size();
    std::map<std::int64_t, int> max_count;
    std::map<Int, std::int64_t> part_to_z;
    for (const auto& t : triples) {
        ++max_count[t.z];
        Int z = t.z;
        try {
            // 9z^2 - 4 = (3z - 2)(3z + 2); factor the halves separately
            Int part = squarefree_part(3 * z - 2) * squarefree_part(3 * z + 2);
            part = squarefree_part(part);
            auto [it, fresh] = part_to_z.emplace(part, t.z);
            if (!fresh && it->second != t.z) rep.collisions.push_back({part, it->second, t.z});
        } catch (const FactorizationTimeout&) {
            rep.factorization_timeouts.push_back(t.z);
        }
    }
    for (const auto& [z, count] : max_count)
        if (count > 1) rep.duplicate_max.push_back(z);
    return rep;
}

}  // namespace raney
