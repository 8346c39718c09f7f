#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raney/transducer.hpp"

namespace raney {

// Exact pruning-threshold value: infinity, a rational, or sqrt(N)/d. Cycle
// lambda-values stay in this form so the search never factors discriminants.
struct Threshold {
    enum class Kind { Inf, Rational, Sqrt };
    Kind kind = Kind::Inf;
    Rat r;
    Int N, d;

    static Threshold infinity() { return {}; }
    static Threshold rational(Rat q);
    static Threshold sqrt_val(Int N, Int d);

    bool is_inf() const { return kind == Kind::Inf; }
    double approx() const;
    bool rat_le(const Rat& v) const;  // v <= *this, exact
    bool less_than(const Threshold& o) const;
    bool equals(const Threshold& o) const;
    Surd to_surd() const;  // canonicalizes (factors N); for final reporting
};

// A closed path; edges[0]'s from-node equals the last edge's to-node. Stored in
// the lexicographically least rotation of the edge-index sequence.
struct Cycle {
    std::vector<std::int32_t> edges;
};

struct PathGeneration {
    std::uint32_t k = 0;             // edges per path
    std::vector<std::int32_t> flat;  // k * count() edge indices
    std::size_t count() const { return k == 0 ? 0 : flat.size() / k; }
    const std::int32_t* path(std::size_t i) const { return flat.data() + i * k; }
};

struct SearchState {
    const Transducer* t = nullptr;
    std::uint32_t k = 0;               // length of paths in `good`
    Threshold alpha;                   // best cycle value found (initially inf)
    Threshold cap;                     // pruning cap; goodness tested vs min(alpha, cap)
    std::optional<Rat> beta_running;   // least underline-lambda over alpha-bad paths
    PathGeneration good, good_prev;
    int threads = 1;
};

// Exact alpha-goodness of a path: underline_lambda of both accumulated words <= alpha.
bool is_good(const Transducer& t, std::span<const std::int32_t> edges, const Surd& alpha);

// Accumulated input/output words of an edge path.
std::pair<Word, Word> path_words(const Transducer& t, std::span<const std::int32_t> edges);

SearchState search_init(const Transducer& t, Threshold cap, int threads = 1);

// One generation of Algorithm 6.1: extend good paths by one edge (all start
// nodes), keep those whose trailing subpath is also good and whose words stay
// alpha-good, fold closed paths into alpha, fold bad paths into beta.
void iterate(SearchState& s);

// max(lambda(V^inf), lambda(W^inf)) of a closed path.
Threshold cycle_value(const Transducer& t, std::span<const std::int32_t> edges);

// The unique-forward-extension test over middle segments; on success returns
// every cycle of the successor map, canonicalized and deduplicated.
std::optional<std::vector<Cycle>> stopping_check(const SearchState& s, std::uint32_t t_param,
                                                 std::uint32_t m_param);

struct FinalizeOutcome {
    Threshold alpha;        // least cycle value
    Threshold alpha2prime;  // least value above alpha (inf if none)
    Threshold beta;         // min(beta_running, alpha2prime)
    std::vector<Cycle> optimal;
};

FinalizeOutcome finalize(const Transducer& t, const std::vector<Cycle>& cycles,
                         const std::optional<Rat>& beta_running);

struct Witness {
    Cycle cycle;
    std::vector<std::int64_t> xi_preperiod;
    Period xi_period;
    Period p_xi_period;
    Symmetry symmetry = Symmetry::S;
    Surd xi;
};

// Reconstruct an irrational hitting the cycle: shortest path from the start
// node, then the periodic tail. Verifies max(lambda(xi), lambda(p xi)) == alpha
// exactly; throws VerificationFailedError otherwise.
Witness make_witness(const Transducer& t, const Cycle& c, const Threshold& alpha);

struct ResultReport {
    std::int64_t p = 0;
    Surd alpha;
    Surd beta;
    std::uint32_t k_stop = 0, t = 0, m = 0;
    std::vector<Witness> witnesses;
};

struct SearchOptions {
    std::uint32_t k_max = 100000;
    int threads = 1;
    bool corollary_seed = true;            // tighten the cap with Corollary members
    std::optional<Rat> prune_cap = Rat(4); // nullopt = honest alpha-only pruning
    std::string checkpoint_path;           // saved every few generations when set
    std::string resume_path;
};

struct MinLagrangeResult {
    std::optional<ResultReport> report;  // engaged iff the search terminated
    std::uint32_t k_reached = 0;
    Surd alpha_so_far;
    Surd beta_so_far;
};

// Runs the full search on T_p with t = round(sqrt(k)), m = k - 2t - 1.
// Throws NotPrimeError for composite p.
MinLagrangeResult min_lagrange(std::int64_t p, const SearchOptions& opt = {});

std::string report_to_json(const ResultReport& r);

void save_checkpoint(const std::string& path, const SearchState& s, std::int64_t p);
// Restores a state over a freshly built transducer; throws CheckpointError on mismatch.
SearchState load_checkpoint(const std::string& path, const Transducer& t, std::int64_t p,
                            int threads);

}  // namespace raney
