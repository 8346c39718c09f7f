#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace raney {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime_u64(std::uint64_t n);

// Miller-Rabin with the fixed base set {2,...,37}; deterministic below 3.3e24.
bool is_probable_prime(const Int& n);

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// Full factorization: trial division by primes <= 1e6, then Brent's rho.
// Throws FactorizationTimeout if a rho invocation exceeds `rho_iter_cap` iterations.
std::vector<std::pair<Int, int>> factorize(Int n, std::uint64_t rho_iter_cap = 1ull << 27);

// n = s^2 * d with d squarefree; returns (s, d). Requires n > 0.
std::pair<Int, Int> extract_square(const Int& n, std::uint64_t rho_iter_cap = 1ull << 27);

Int squarefree_part(const Int& n, std::uint64_t rho_iter_cap = 1ull << 27);

Int isqrt_floor(const Int& n);
bool is_perfect_square(const Int& n, Int* root = nullptr);

double to_double(const Int& n);
double to_double(const Rat& q);

// Decimal rendering with `sig` significant digits (computed at 50-digit precision).
std::string decimal_of_sqrt_ratio(const Int& num_under_root, const Int& denom, int sig = 15);
std::string decimal_of_rat(const Rat& q, int sig = 15);

}  // namespace raney
