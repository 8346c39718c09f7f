#include "raney/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "raney/errors.hpp"
#include "raney/markoff.hpp"

namespace raney {

// ---------------------------------------------------------------- Threshold

Threshold Threshold::rational(Rat q) {
    Threshold t;
    t.kind = Kind::Rational;
    t.r = std::move(q);
    return t;
}

Threshold Threshold::sqrt_val(Int N, Int d) {
    Threshold t;
    t.kind = Kind::Sqrt;
    t.N = std::move(N);
    t.d = std::move(d);
    return t;
}

double Threshold::approx() const {
    switch (kind) {
        case Kind::Inf: return std::numeric_limits<double>::infinity();
        case Kind::Rational: return to_double(r);
        case Kind::Sqrt: return std::sqrt(to_double(N)) / to_double(d);
    }
    return 0;
}

bool Threshold::rat_le(const Rat& v) const {
    switch (kind) {
        case Kind::Inf: return true;
        case Kind::Rational: return v <= r;
        case Kind::Sqrt: {
            if (v <= 0) return true;
            Int p = numerator(v), q = denominator(v);
            return p * p * d * d <= N * q * q;
        }
    }
    return false;
}

bool Threshold::less_than(const Threshold& o) const {
    if (kind == Kind::Inf) return false;
    if (o.kind == Kind::Inf) return true;
    if (kind == Kind::Rational && o.kind == Kind::Rational) return r < o.r;
    if (kind == Kind::Sqrt && o.kind == Kind::Sqrt) return N * o.d * o.d < o.N * d * d;
    if (kind == Kind::Rational) {
        // r < sqrt(N)/d
        Int p = numerator(r), q = denominator(r);
        if (p < 0) return true;
        return p * p * o.d * o.d < o.N * q * q;
    }
    // sqrt(N)/d < r
    Int p = numerator(o.r), q = denominator(o.r);
    if (p <= 0) return false;
    return N * q * q < p * p * d * d;
}

bool Threshold::equals(const Threshold& o) const { return !less_than(o) && !o.less_than(*this); }

Surd Threshold::to_surd() const {
    switch (kind) {
        case Kind::Inf: return Surd::infinity();
        case Kind::Rational: return Surd::from_rational(r);
        case Kind::Sqrt: return Surd::make(0, 1, N, d);
    }
    return Surd();
}

// ---------------------------------------------------------------- word helpers

namespace {

using Runs = std::vector<std::uint32_t>;

// Appends a word to an accumulated run sequence. `last` is the final letter of
// the accumulated word (ignored while empty).
void append_word(Runs& runs, Letter& last, bool& have, const Word& w) {
    if (w.empty()) return;
    std::size_t j = 0;
    if (have && w.first == last) {
        runs.back() += w.runs[0];
        j = 1;
    }
    runs.insert(runs.end(), w.runs.begin() + j, w.runs.end());
    last = w.last();
    have = true;
}

Threshold word_power_threshold(const Runs& runs) {
    if (runs.size() <= 1) return Threshold::infinity();
    auto [N, d] = lambda_periodic_raw(cyclic_runs(runs));
    return Threshold::sqrt_val(std::move(N), std::move(d));
}

constexpr double kMargin = 1e-7;

struct Ctx {
    bool inf = true;
    bool rational = false;
    Rat r;
    Int N, d;
    double approx = std::numeric_limits<double>::infinity();
};

Ctx make_ctx(const Threshold& t) {
    Ctx c;
    c.inf = t.kind == Threshold::Kind::Inf;
    c.rational = t.kind == Threshold::Kind::Rational;
    if (c.rational) c.r = t.r;
    if (t.kind == Threshold::Kind::Sqrt) {
        c.N = t.N;
        c.d = t.d;
    }
    c.approx = t.approx();
    return c;
}

bool ctx_le(const Rat& v, const Ctx& c) {
    if (c.inf) return true;
    if (c.rational) return v <= c.r;
    if (v <= 0) return true;
    Int p = numerator(v), q = denominator(v);
    return p * p * c.d * c.d <= c.N * q * q;
}

struct Scratch {
    std::vector<double> fwdS, fwdT;
    Runs candV, candW;
    std::vector<std::int32_t> seq;
};

// Max cut value in doubles; exact decisions happen only inside the margin band.
double scan_max_cut(const Runs& runs, Scratch& sc) {
    const std::size_t k = runs.size() - 1;
    sc.fwdS.resize(k + 1);
    sc.fwdT.resize(k + 1);
    sc.fwdS[k] = 0.0;
    sc.fwdT[k] = 0.0;
    if (k >= 1) sc.fwdT[k - 1] = 0.0;
    for (std::size_t i = k; i-- > 0;) {
        sc.fwdS[i] = 1.0 / (runs[i + 1] + sc.fwdS[i + 1]);
        if (i + 1 < k) sc.fwdT[i] = 1.0 / (runs[i + 1] + sc.fwdT[i + 1]);
    }
    double P = 1.0 / runs[0], Q = 0.0, best = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        if (i >= 2) {
            P = 1.0 / (runs[i - 1] + P);
            Q = 1.0 / (runs[i - 1] + Q);
        }
        double B = (i % 2 == 0) ? P : Q;
        double F = ((k - i) % 2 == 0) ? sc.fwdS[i] : sc.fwdT[i];
        double v = double(runs[i]) + B + F;
        if (v > best) best = v;
    }
    return best;
}

// true if underline_lambda(runs) > threshold, decided exactly.
bool word_bad(const Runs& runs, const Ctx& ctx, Scratch& sc, double* max_out) {
    if (runs.size() < 2) {
        if (max_out) *max_out = 0.0;
        return false;
    }
    double m = scan_max_cut(runs, sc);
    if (max_out) *max_out = m;
    if (ctx.inf) return false;
    if (m > ctx.approx + kMargin) return true;
    if (m < ctx.approx - kMargin) return false;
    for (const Rat& v : cut_values_exact(runs))
        if (!ctx_le(v, ctx)) return true;
    return false;
}

// Hash set over the fixed-length edge sequences of a generation.
class SeqSet {
  public:
    explicit SeqSet(const PathGeneration& g) : g_(g) {
        map_.reserve(g.count() * 2);
        for (std::size_t i = 0; i < g.count(); ++i)
            map_.emplace(hash(g.path(i), g.k), static_cast<std::uint32_t>(i));
    }
    bool contains(const std::int32_t* seq) const {
        auto [lo, hi] = map_.equal_range(hash(seq, g_.k));
        for (auto it = lo; it != hi; ++it)
            if (std::memcmp(g_.path(it->second), seq, g_.k * sizeof(std::int32_t)) == 0) return true;
        return false;
    }
    static std::uint64_t hash(const std::int32_t* seq, std::uint32_t k) {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::uint32_t i = 0; i < k; ++i) {
            h ^= static_cast<std::uint32_t>(seq[i]);
            h *= 0xff51afd7ed558ccdull;
            h ^= h >> 33;
        }
        return h;
    }

  private:
    const PathGeneration& g_;
    std::unordered_multimap<std::uint64_t, std::uint32_t> map_;
};

void rebuild_runs(const Transducer& T, const std::int32_t* edges, std::uint32_t k, Runs& v,
                  Runs& w, Letter& lastV, Letter& lastW, bool& haveV, bool& haveW) {
    v.clear();
    w.clear();
    haveV = haveW = false;
    lastV = lastW = Letter::L;
    for (std::uint32_t j = 0; j < k; ++j) {
        const Edge& e = T.edges[edges[j]];
        append_word(v, lastV, haveV, e.in);
        append_word(w, lastW, haveW, e.out);
    }
}

}  // namespace

std::pair<Word, Word> path_words(const Transducer& t, std::span<const std::int32_t> edges) {
    Word v, w;
    for (std::int32_t ei : edges) {
        v.append(t.edges[ei].in);
        w.append(t.edges[ei].out);
    }
    return {std::move(v), std::move(w)};
}

bool is_good(const Transducer& t, std::span<const std::int32_t> edges, const Surd& alpha) {
    auto [v, w] = path_words(t, edges);
    Surd uv = Surd::from_rational(underline_lambda(v));
    Surd uw = Surd::from_rational(underline_lambda(w));
    return uv <= alpha && uw <= alpha;
}

Threshold cycle_value(const Transducer& t, std::span<const std::int32_t> edges) {
    auto [v, w] = path_words(t, edges);
    Threshold tv = word_power_threshold(v.runs);
    Threshold tw = word_power_threshold(w.runs);
    return tv.less_than(tw) ? tw : tv;
}

SearchState search_init(const Transducer& t, Threshold cap, int threads) {
    SearchState s;
    s.t = &t;
    s.cap = std::move(cap);
    s.threads = std::max(1, threads);
    return s;
}

void iterate(SearchState& s) {
    const Transducer& T = *s.t;
    const std::uint32_t k = s.k, nk = k + 1;
    Threshold eff = s.alpha.less_than(s.cap) ? s.alpha : s.cap;
    const Ctx ctx = make_ctx(eff);
    const double beta_d =
        s.beta_running ? to_double(*s.beta_running) : std::numeric_limits<double>::infinity();

    std::optional<SeqSet> prev_set;
    if (k >= 1) prev_set.emplace(s.good);
    const std::size_t parent_count = (k == 0) ? T.node_count() : s.good.count();

    struct ChunkOut {
        std::vector<std::int32_t> flat;
        std::vector<Threshold> cycles;
        std::optional<Rat> bad_min;
    };

    auto process = [&](std::size_t lo, std::size_t hi, ChunkOut& out) {
        Scratch sc;
        Runs pv, pw;
        Letter lastV = Letter::L, lastW = Letter::L;
        bool haveV = false, haveW = false;
        for (std::size_t i = lo; i < hi; ++i) {
            std::int32_t start_node, end_node;
            const std::int32_t* pedges = nullptr;
            if (k == 0) {
                start_node = end_node = static_cast<std::int32_t>(i);
                pv.clear();
                pw.clear();
                haveV = haveW = false;
            } else {
                pedges = s.good.path(i);
                start_node = T.edges[pedges[0]].from;
                end_node = T.edges[pedges[k - 1]].to;
                rebuild_runs(T, pedges, k, pv, pw, lastV, lastW, haveV, haveW);
            }
            const auto eb = T.out_begin[end_node], ee = T.out_begin[end_node + 1];
            for (std::uint32_t ei = eb; ei < ee; ++ei) {
                const Edge& e = T.edges[ei];
                if (k >= 1) {
                    sc.seq.assign(pedges + 1, pedges + k);
                    sc.seq.push_back(static_cast<std::int32_t>(ei));
                    if (!prev_set->contains(sc.seq.data())) continue;
                }
                sc.candV = pv;
                Letter lv = lastV;
                bool hv = haveV;
                append_word(sc.candV, lv, hv, e.in);
                sc.candW = pw;
                Letter lw = lastW;
                bool hw = haveW;
                append_word(sc.candW, lw, hw, e.out);

                double mv = 0, mw = 0;
                bool bad = word_bad(sc.candV, ctx, sc, &mv);
                if (!bad) bad = word_bad(sc.candW, ctx, sc, &mw);
                if (!bad) {
                    if (pedges) out.flat.insert(out.flat.end(), pedges, pedges + k);
                    out.flat.push_back(static_cast<std::int32_t>(ei));
                    if (e.to == start_node) {
                        Threshold tv = word_power_threshold(sc.candV);
                        Threshold tw = word_power_threshold(sc.candW);
                        out.cycles.push_back(tv.less_than(tw) ? tw : tv);
                    }
                } else {
                    // beta candidate: exact value only if it could improve beta
                    if (std::max(mv, mw) < beta_d + 1e-6) {
                        Rat ul = underline_lambda(sc.candV);
                        Rat uw2 = underline_lambda(sc.candW);
                        if (uw2 > ul) ul = uw2;
                        if (!out.bad_min || ul < *out.bad_min) out.bad_min = std::move(ul);
                    }
                }
            }
        }
    };

    const int nthreads =
        std::max(1, std::min<int>(s.threads, static_cast<int>(parent_count ? parent_count : 1)));
    std::vector<ChunkOut> outs(nthreads);
    if (nthreads == 1) {
        process(0, parent_count, outs[0]);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(nthreads);
        const std::size_t chunk = (parent_count + nthreads - 1) / nthreads;
        for (int w = 0; w < nthreads; ++w) {
            std::size_t lo = std::min<std::size_t>(w * chunk, parent_count);
            std::size_t hi = std::min<std::size_t>(lo + chunk, parent_count);
            pool.emplace_back([&, w, lo, hi] {
                try {
                    process(lo, hi, outs[w]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    // ordered merge
    PathGeneration next;
    next.k = nk;
    std::size_t total = 0;
    for (const auto& o : outs) total += o.flat.size();
    next.flat.reserve(total);
    Threshold alpha_new = s.alpha;
    std::optional<Rat> bad_min;
    for (auto& o : outs) {
        next.flat.insert(next.flat.end(), o.flat.begin(), o.flat.end());
        for (const Threshold& cv : o.cycles)
            if (cv.less_than(alpha_new)) alpha_new = cv;
        if (o.bad_min && (!bad_min || *o.bad_min < *bad_min)) bad_min = std::move(o.bad_min);
    }

    // alpha tightened mid-generation: re-filter this generation against the new
    // threshold (goodness is monotone in alpha, older generations stay valid).
    Threshold eff_new = alpha_new.less_than(s.cap) ? alpha_new : s.cap;
    if (!eff_new.equals(eff)) {
        const Ctx ctx2 = make_ctx(eff_new);
        Scratch sc;
        Runs v, w;
        Letter lv, lw;
        bool hv, hw;
        PathGeneration filtered;
        filtered.k = nk;
        filtered.flat.reserve(next.flat.size());
        for (std::size_t i = 0; i < next.count(); ++i) {
            const std::int32_t* pe = next.path(i);
            rebuild_runs(T, pe, nk, v, w, lv, lw, hv, hw);
            bool bad = word_bad(v, ctx2, sc, nullptr) || word_bad(w, ctx2, sc, nullptr);
            if (!bad) {
                filtered.flat.insert(filtered.flat.end(), pe, pe + nk);
            } else {
                Rat ul = underline_lambda(v);
                Rat u2 = underline_lambda(w);
                if (u2 > ul) ul = u2;
                if (!bad_min || ul < *bad_min) bad_min = std::move(ul);
            }
        }
        next = std::move(filtered);
    }

    if (bad_min && (!s.beta_running || *bad_min < *s.beta_running)) s.beta_running = std::move(bad_min);
    s.good_prev = std::move(s.good);
    s.good = std::move(next);
    s.alpha = std::move(alpha_new);
    s.k = nk;
}

// ---------------------------------------------------------------- stopping

namespace {

// Interns fixed-length edge sequences.
class SegArena {
  public:
    explicit SegArena(std::uint32_t len) : len_(len) {}
    std::uint32_t len() const { return len_; }
    std::size_t size() const { return count_; }
    const std::int32_t* seg(std::size_t id) const { return flat_.data() + id * len_; }
    // Returns the id, interning if new.
    std::uint32_t intern(const std::int32_t* seq) {
        std::uint64_t h = SeqSet::hash(seq, len_);
        auto [lo, hi] = map_.equal_range(h);
        for (auto it = lo; it != hi; ++it)
            if (std::memcmp(seg(it->second), seq, len_ * sizeof(std::int32_t)) == 0)
                return it->second;
        flat_.insert(flat_.end(), seq, seq + len_);
        auto id = static_cast<std::uint32_t>(count_++);
        map_.emplace(h, id);
        return id;
    }
    // -1 if absent.
    std::int64_t find(const std::int32_t* seq) const {
        std::uint64_t h = SeqSet::hash(seq, len_);
        auto [lo, hi] = map_.equal_range(h);
        for (auto it = lo; it != hi; ++it)
            if (std::memcmp(seg(it->second), seq, len_ * sizeof(std::int32_t)) == 0)
                return it->second;
        return -1;
    }

  private:
    std::uint32_t len_;
    std::size_t count_ = 0;
    std::vector<std::int32_t> flat_;
    std::unordered_multimap<std::uint64_t, std::uint32_t> map_;
};

std::vector<std::int32_t> canonical_rotation(std::vector<std::int32_t> edges) {
    std::vector<std::int32_t> best = edges;
    for (std::size_t r = 1; r < edges.size(); ++r) {
        std::rotate(edges.begin(), edges.begin() + 1, edges.end());
        if (edges < best) best = edges;
    }
    return best;
}

}  // namespace

std::optional<std::vector<Cycle>> stopping_check(const SearchState& s, std::uint32_t t_param,
                                                 std::uint32_t m_param) {
    if (m_param < 1 || s.good_prev.k != m_param + 2 * t_param || s.good.k != s.good_prev.k + 1)
        return std::nullopt;
    if (s.good_prev.count() == 0 || s.good.count() == 0) return std::nullopt;

    const std::uint32_t m = m_param, t = t_param;
    SegArena A(m);
    for (std::size_t i = 0; i < s.good_prev.count(); ++i)
        A.intern(s.good_prev.path(i) + t);
    // unique forward extension per A-segment
    constexpr std::int32_t kNone = -1, kMany = -2;
    std::vector<std::int32_t> ext(A.size(), kNone);
    for (std::size_t i = 0; i < s.good.count(); ++i) {
        const std::int32_t* seg = s.good.path(i) + t;
        std::int64_t id = A.find(seg);
        if (id < 0) continue;  // prefix not a good middle; cannot extend any A element
        std::int32_t e = seg[m];
        if (ext[id] == kNone) ext[id] = e;
        else if (ext[id] != e) ext[id] = kMany;
    }
    for (std::size_t i = 0; i < A.size(); ++i)
        if (ext[i] == kNone || ext[i] == kMany) return std::nullopt;

    // successor map on A
    std::vector<std::int64_t> next(A.size());
    std::vector<std::int32_t> buf(m);
    for (std::size_t i = 0; i < A.size(); ++i) {
        const std::int32_t* seg = A.seg(i);
        std::copy(seg + 1, seg + m, buf.begin());
        buf[m - 1] = ext[i];
        next[i] = A.find(buf.data());
        if (next[i] < 0) return std::nullopt;  // good structure is not extension-closed
    }

    // every infinite good path falls into a cycle of the successor map
    std::vector<std::uint8_t> color(A.size(), 0);  // 0 new, 1 on stack, 2 done
    std::vector<Cycle> cycles;
    std::vector<std::uint32_t> stack;
    for (std::size_t start = 0; start < A.size(); ++start) {
        if (color[start]) continue;
        stack.clear();
        std::size_t cur = start;
        while (color[cur] == 0) {
            color[cur] = 1;
            stack.push_back(static_cast<std::uint32_t>(cur));
            cur = static_cast<std::size_t>(next[cur]);
        }
        if (color[cur] == 1) {
            auto it = std::find(stack.begin(), stack.end(), static_cast<std::uint32_t>(cur));
            Cycle c;
            for (auto jt = it; jt != stack.end(); ++jt) c.edges.push_back(A.seg(*jt)[0]);
            c.edges = canonical_rotation(std::move(c.edges));
            cycles.push_back(std::move(c));
        }
        for (auto id : stack) color[id] = 2;
    }
    std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
        return std::tie(a.edges) < std::tie(b.edges);
    });
    cycles.erase(std::unique(cycles.begin(), cycles.end(),
                             [](const Cycle& a, const Cycle& b) { return a.edges == b.edges; }),
                 cycles.end());
    std::stable_sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
        return a.edges.size() < b.edges.size();
    });
    return cycles;
}

FinalizeOutcome finalize(const Transducer& t, const std::vector<Cycle>& cycles,
                         const std::optional<Rat>& beta_running) {
    if (cycles.empty()) throw EmptyCycleSetError("no cycles to finalize");
    std::vector<Threshold> values;
    values.reserve(cycles.size());
    for (const Cycle& c : cycles) values.push_back(cycle_value(t, c.edges));
    FinalizeOutcome out;
    out.alpha = values[0];
    for (const Threshold& v : values)
        if (v.less_than(out.alpha)) out.alpha = v;
    out.alpha2prime = Threshold::infinity();
    for (const Threshold& v : values)
        if (out.alpha.less_than(v) && v.less_than(out.alpha2prime)) out.alpha2prime = v;
    out.beta = out.alpha2prime;
    if (beta_running) {
        Threshold br = Threshold::rational(*beta_running);
        if (br.less_than(out.beta)) out.beta = br;
    }
    for (std::size_t i = 0; i < cycles.size(); ++i)
        if (values[i].equals(out.alpha)) out.optimal.push_back(cycles[i]);
    return out;
}

// ---------------------------------------------------------------- witnesses

namespace {

std::vector<std::int32_t> shortest_path_edges(const Transducer& t, std::int32_t from,
                                              std::int32_t to) {
    if (from == to) return {};
    std::vector<std::int32_t> parent_edge(t.node_count(), -1);
    std::vector<char> seen(t.node_count(), 0);
    std::vector<std::int32_t> queue{from};
    seen[from] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::int32_t v = queue[qi];
        for (std::uint32_t ei = t.out_begin[v]; ei < t.out_begin[v + 1]; ++ei) {
            std::int32_t u = t.edges[ei].to;
            if (seen[u]) continue;
            seen[u] = 1;
            parent_edge[u] = static_cast<std::int32_t>(ei);
            if (u == to) {
                std::vector<std::int32_t> path;
                for (std::int32_t cur = to; cur != from;) {
                    path.push_back(parent_edge[cur]);
                    cur = t.edges[parent_edge[cur]].from;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(u);
        }
    }
    throw VerificationFailedError("cycle start unreachable from the start node");
}

Word rotate_word(const Word& w, std::size_t r) {
    auto letters = word_letters(w);
    std::rotate(letters.begin(), letters.begin() + r, letters.end());
    Word out;
    for (Letter c : letters) out.push(c);
    return out;
}

// CF data of U * C^inf: preperiod includes one full rotated period so the
// junction always falls on a letter change.
std::pair<std::vector<std::int64_t>, Period> tail_cf(const Word& u, const Word& c) {
    if (c.runs.size() < 2)
        throw VerificationFailedError("optimal cycle word uses a single letter");
    std::size_t r = (c.first != c.last()) ? 0 : c.runs[0];
    Word rotated = rotate_word(c, r);
    Word pre = u;
    if (r > 0) {
        Word head;
        head.push(c.first, c.runs[0]);
        pre.append(head);
    }
    pre.append(rotated);
    Period period(rotated.runs.begin(), rotated.runs.end());
    return {word_to_cf_terms(pre), std::move(period)};
}

}  // namespace

Witness make_witness(const Transducer& t, const Cycle& c, const Threshold& alpha) {
    Witness wit;
    wit.cycle = c;
    std::int32_t cycle_start = t.edges[c.edges[0]].from;
    auto approach = shortest_path_edges(t, t.start, cycle_start);
    auto [u_word, x_word] = path_words(t, approach);
    auto [c_word, d_word] = path_words(t, c.edges);

    auto [pre, per] = tail_cf(u_word, c_word);
    auto [ppre, pper] = tail_cf(x_word, d_word);
    wit.xi_preperiod = std::move(pre);
    wit.xi_period = std::move(per);
    wit.p_xi_period = std::move(pper);

    auto [n1, d1] = lambda_periodic_raw(wit.xi_period);
    auto [n2, d2] = lambda_periodic_raw(wit.p_xi_period);
    Threshold l1 = Threshold::sqrt_val(n1, d1), l2 = Threshold::sqrt_val(n2, d2);
    Threshold lp = l1.less_than(l2) ? l2 : l1;
    if (!lp.equals(alpha))
        throw VerificationFailedError("witness lambda_p(xi) differs from alpha");

    wit.symmetry = classify_symmetry(wit.xi_period, wit.p_xi_period);
    wit.xi = eventually_periodic_value(wit.xi_preperiod, wit.xi_period);
    return wit;
}

// ---------------------------------------------------------------- driver

namespace {

nlohmann::json json_int(const Int& n) {
    if (n >= std::numeric_limits<std::int64_t>::min() &&
        n <= std::numeric_limits<std::int64_t>::max())
        return n.convert_to<std::int64_t>();
    return n.str();
}

nlohmann::json threshold_json(const Threshold& t) {
    switch (t.kind) {
        case Threshold::Kind::Inf: return {{"kind", "inf"}};
        case Threshold::Kind::Rational:
            return {{"kind", "rational"}, {"num", numerator(t.r).str()}, {"den", denominator(t.r).str()}};
        case Threshold::Kind::Sqrt:
            return {{"kind", "sqrt"}, {"N", t.N.str()}, {"d", t.d.str()}};
    }
    return {};
}

Threshold threshold_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind");
    if (kind == "inf") return Threshold::infinity();
    if (kind == "rational")
        return Threshold::rational(Rat(Int(j.at("num").get<std::string>()),
                                       Int(j.at("den").get<std::string>())));
    if (kind == "sqrt")
        return Threshold::sqrt_val(Int(j.at("N").get<std::string>()),
                                   Int(j.at("d").get<std::string>()));
    throw CheckpointError("unknown threshold kind: " + kind);
}

struct RunOutcome {
    enum { Done, Exhausted, CapInvalid } status;
    std::optional<ResultReport> report;
    std::uint32_t k_reached = 0;
    Surd alpha_so_far, beta_so_far;
};

RunOutcome run_search(std::int64_t p, const Transducer& T, SearchState state,
                      const SearchOptions& opt) {
    RunOutcome out{RunOutcome::Exhausted, std::nullopt, 0, Surd::infinity(), Surd::infinity()};
    const bool capped = !state.cap.is_inf();
    while (state.k < opt.k_max) {
        iterate(state);
        if (!opt.checkpoint_path.empty() && state.k % 8 == 0)
            save_checkpoint(opt.checkpoint_path, state, p);
        const std::uint32_t k = state.k;
        const auto tpar = static_cast<std::uint32_t>(std::llround(std::sqrt(double(k))));
        if (k < 2 * tpar + 2) continue;
        const std::uint32_t mpar = k - 2 * tpar - 1;
        auto cycles = stopping_check(state, tpar, mpar);
        if (!cycles) continue;
        FinalizeOutcome fin = finalize(T, *cycles, state.beta_running);
        if (fin.alpha.is_inf() || (capped && state.cap.less_than(fin.alpha))) {
            // the cap cut below the true minimum; rerun honestly
            return {RunOutcome::CapInvalid, std::nullopt, k, Surd::infinity(), Surd::infinity()};
        }
        if (fin.beta.is_inf()) continue;  // no isolation bound yet; keep searching

        ResultReport rep;
        rep.p = p;
        rep.alpha = fin.alpha.to_surd();
        rep.beta = fin.beta.to_surd();
        rep.k_stop = k;
        rep.t = tpar;
        rep.m = mpar;
        // Runtime checks in the spirit of the termination theorem: the minimum is
        // the square root of a rational, the bound strictly exceeds it, and every
        // witness reproduces alpha exactly.
        if (!rep.alpha.is_pure_sqrt())
            throw VerificationFailedError("alpha is not the square root of a rational");
        if (!(rep.alpha < rep.beta)) throw VerificationFailedError("isolation bound <= alpha");
        for (const Cycle& c : fin.optimal) rep.witnesses.push_back(make_witness(T, c, fin.alpha));
        out.status = RunOutcome::Done;
        out.report = std::move(rep);
        out.k_reached = k;
        return out;
    }
    if (!opt.checkpoint_path.empty()) save_checkpoint(opt.checkpoint_path, state, p);
    out.k_reached = state.k;
    out.alpha_so_far = state.alpha.to_surd();
    out.beta_so_far =
        state.beta_running ? Surd::from_rational(*state.beta_running) : Surd::infinity();
    return out;
}

}  // namespace

MinLagrangeResult min_lagrange(std::int64_t p, const SearchOptions& opt) {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
        throw NotPrimeError("minlp requires a prime level");
    Transducer T = build_fast(p);

    Threshold cap = Threshold::infinity();
    if (opt.prune_cap) cap = Threshold::rational(*opt.prune_cap);
    if (opt.corollary_seed) {
        for (const MarkoffPoint& pt : corollary_filter(p)) {
            const Surd& l = pt.lambda;
            Threshold tv = Threshold::sqrt_val(l.v() * l.v() * l.D(), l.w());
            if (tv.less_than(cap)) cap = tv;
        }
    }

    SearchState state = search_init(T, cap, opt.threads);
    if (!opt.resume_path.empty()) state = load_checkpoint(opt.resume_path, T, p, opt.threads);

    RunOutcome out = run_search(p, T, std::move(state), opt);
    if (out.status == RunOutcome::CapInvalid) {
        out = run_search(p, T, search_init(T, Threshold::infinity(), opt.threads), opt);
        if (out.status == RunOutcome::CapInvalid)
            throw VerificationFailedError("uncapped search reported an invalid cap");
    }
    MinLagrangeResult res;
    res.k_reached = out.k_reached;
    res.alpha_so_far = out.alpha_so_far;
    res.beta_so_far = out.beta_so_far;
    if (out.status == RunOutcome::Done) res.report = std::move(out.report);
    return res;
}

std::string report_to_json(const ResultReport& r) {
    nlohmann::json j;
    j["p"] = r.p;
    j["alpha"] = {{"num_under_root", json_int(r.alpha.v() * r.alpha.v() * r.alpha.D())},
                  {"denom", json_int(r.alpha.w())}};
    j["alpha_text"] = r.alpha.str();
    j["alpha_decimal"] = r.alpha.decimal(15);
    j["beta"] = {{"text", r.beta.str()}, {"decimal", r.beta.decimal(15)}};
    j["k_stop"] = r.k_stop;
    j["t"] = r.t;
    j["m"] = r.m;
    auto wits = nlohmann::json::array();
    for (const Witness& w : r.witnesses) {
        nlohmann::json wj;
        wj["cycle"] = {{"edges", w.cycle.edges}};
        wj["preperiod"] = w.xi_preperiod;
        wj["period"] = w.xi_period;
        wj["p_period"] = w.p_xi_period;
        wj["symmetry"] = std::string(1, symmetry_char(w.symmetry));
        wj["xi"] = w.xi.str();
        wj["xi_decimal"] = w.xi.decimal(15);
        wits.push_back(std::move(wj));
    }
    j["witnesses"] = std::move(wits);
    return j.dump(2) + "\n";
}

void save_checkpoint(const std::string& path, const SearchState& s, std::int64_t p) {
    nlohmann::json j;
    j["format"] = "raney-minlp-checkpoint";
    j["version"] = 1;
    j["p"] = p;
    j["k"] = s.k;
    j["alpha"] = threshold_json(s.alpha);
    j["cap"] = threshold_json(s.cap);
    if (s.beta_running)
        j["beta"] = {{"num", numerator(*s.beta_running).str()},
                     {"den", denominator(*s.beta_running).str()}};
    else
        j["beta"] = nullptr;
    j["good"] = {{"k", s.good.k}, {"flat", s.good.flat}};
    j["good_prev"] = {{"k", s.good_prev.k}, {"flat", s.good_prev.flat}};
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw CheckpointError("cannot write checkpoint: " + path);
    f << j.dump() << "\n";
}

SearchState load_checkpoint(const std::string& path, const Transducer& t, std::int64_t p,
                            int threads) {
    std::ifstream f(path);
    if (!f) throw CheckpointError("cannot read checkpoint: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
    try {
        if (j.at("format") != "raney-minlp-checkpoint" || j.at("version") != 1)
            throw CheckpointError("unrecognized checkpoint format");
        if (j.at("p").get<std::int64_t>() != p)
            throw CheckpointError("checkpoint is for a different prime");
        SearchState s;
        s.t = &t;
        s.threads = std::max(1, threads);
        s.k = j.at("k").get<std::uint32_t>();
        s.alpha = threshold_from_json(j.at("alpha"));
        s.cap = threshold_from_json(j.at("cap"));
        if (!j.at("beta").is_null())
            s.beta_running = Rat(Int(j.at("beta").at("num").get<std::string>()),
                                 Int(j.at("beta").at("den").get<std::string>()));
        s.good.k = j.at("good").at("k").get<std::uint32_t>();
        s.good.flat = j.at("good").at("flat").get<std::vector<std::int32_t>>();
        s.good_prev.k = j.at("good_prev").at("k").get<std::uint32_t>();
        s.good_prev.flat = j.at("good_prev").at("flat").get<std::vector<std::int32_t>>();
        const auto ecount = static_cast<std::int64_t>(t.edges.size());
        for (std::int32_t e : s.good.flat)
            if (e < 0 || e >= ecount) throw CheckpointError("edge index out of range");
        for (std::int32_t e : s.good_prev.flat)
            if (e < 0 || e >= ecount) throw CheckpointError("edge index out of range");
        if (s.k != s.good.k || (s.good_prev.k + 1 != s.k && s.k != 0))
            throw CheckpointError("inconsistent generation lengths");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
}

}  // namespace raney
