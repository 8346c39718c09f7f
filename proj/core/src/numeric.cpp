#include "raney/numeric.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "raney/errors.hpp"

namespace raney {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

const std::vector<std::uint32_t>& small_primes() {
    static std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 1'000'000;
        std::vector<bool> sieve(limit + 1, true);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (!sieve[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i) sieve[j] = false;
        }
        return out;
    }();
    return primes;
}

bool miller_rabin_u64(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) d >>= 1, ++r;
    u64 x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

Int powmod_int(Int base, Int exp, const Int& mod) {
    Int r = 1;
    base %= mod;
    while (exp > 0) {
        if (bit_test(exp, 0)) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

bool miller_rabin_int(const Int& n, const Int& a) {
    if (a % n == 0) return true;
    Int d = n - 1;
    int r = 0;
    while (!bit_test(d, 0)) d >>= 1, ++r;
    Int x = powmod_int(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

// Brent's variant of Pollard rho; returns a nontrivial factor of composite odd n.
Int brent_rho(const Int& n, std::uint64_t iter_cap) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        Int x = 2, y = 2, d = 1, q = 1, ys = 0;
        std::uint64_t iters = 0;
        u64 r = 1;
        const u64 batch = 128;
        while (d == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = (y * y + c) % n;
            for (u64 k = 0; k < r && d == 1; k += batch) {
                ys = y;
                const u64 lim = std::min(batch, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                d = gcd(q, n);
                iters += lim;
                if (iters > iter_cap) throw FactorizationTimeout("pollard rho iteration cap hit");
            }
            r *= 2;
        }
        if (d == n) {
            // backtrack one step at a time
            do {
                ys = (ys * ys + c) % n;
                d = gcd(abs(x - ys), n);
            } while (d == 1);
        }
        if (d != n) return d;
        // rare: retry with another polynomial
    }
}

void factor_rec(Int n, std::uint64_t cap, std::vector<Int>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out.push_back(n);
        return;
    }
    Int d = brent_rho(n, cap);
    factor_rec(d, cap, out);
    factor_rec(n / d, cap, out);
}

}  // namespace

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    u64 r = 1;
    base %= mod;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, mod);
        base = mulmod_u64(base, base, mod);
        exp >>= 1;
    }
    return r;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (!miller_rabin_u64(n, a)) return false;
    }
    return true;
}

bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    if (n <= std::numeric_limits<std::uint64_t>::max())
        return is_prime_u64(n.convert_to<std::uint64_t>());
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return false;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (!miller_rabin_int(n, a)) return false;
    }
    return true;
}

std::vector<std::pair<Int, int>> factorize(Int n, std::uint64_t rho_iter_cap) {
    if (n <= 0) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<Int, int>> out;
    for (std::uint32_t p : small_primes()) {
        if (Int(p) * p > n) break;
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) n /= p, ++e;
            out.emplace_back(p, e);
        }
    }
    if (n > 1) {
        std::vector<Int> rest;
        factor_rec(n, rho_iter_cap, rest);
        std::sort(rest.begin(), rest.end());
        for (std::size_t i = 0; i < rest.size();) {
            std::size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            out.emplace_back(rest[i], int(j - i));
            i = j;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<Int, Int> extract_square(const Int& n, std::uint64_t rho_iter_cap) {
    Int s = 1, d = 1;
    for (const auto& [p, e] : factorize(n, rho_iter_cap)) {
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) d *= p;
    }
    return {s, d};
}

Int squarefree_part(const Int& n, std::uint64_t rho_iter_cap) {
    return extract_square(n, rho_iter_cap).second;
}

Int isqrt_floor(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    return sqrt(n);
}

bool is_perfect_square(const Int& n, Int* root) {
    if (n < 0) return false;
    Int r = sqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

double to_double(const Int& n) { return n.convert_to<double>(); }

double to_double(const Rat& q) {
    return numerator(q).convert_to<double>() / denominator(q).convert_to<double>();
}

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

std::string format_sig(const Big& x, int sig) {
    std::ostringstream os;
    os << std::setprecision(sig) << x;
    return os.str();
}

}  // namespace

std::string decimal_of_sqrt_ratio(const Int& num_under_root, const Int& denom, int sig) {
    Big v = sqrt(Big(num_under_root)) / Big(denom);
    return format_sig(v, sig);
}

std::string decimal_of_rat(const Rat& q, int sig) {
    Big v = Big(numerator(q)) / Big(denominator(q));
    return format_sig(v, sig);
}

}  // namespace raney
