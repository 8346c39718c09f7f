#include "raney/transducer.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "raney/errors.hpp"

namespace raney {

namespace {

struct MatKey {
    std::int64_t a, b, c, d;
    bool operator==(const MatKey&) const = default;
};

struct MatKeyHash {
    std::size_t operator()(const MatKey& m) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::int64_t v : {m.a, m.b, m.c, m.d}) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h);
    }
};

MatKey key_of(const Mat& m) { return {m.a, m.b, m.c, m.d}; }

using Mat4 = std::array<Int, 4>;

Mat4 word_matrix(const Word& w) {
    // L^k = [[1,0],[k,1]], R^k = [[1,k],[0,1]]
    Mat4 m{1, 0, 0, 1};
    for (std::size_t j = 0; j < w.runs.size(); ++j) {
        Int k = w.runs[j];
        if (w.letter_of_run(j) == Letter::L) {
            // right-multiply by [[1,0],[k,1]]
            m[0] += m[1] * k;
            m[2] += m[3] * k;
        } else {
            m[1] += m[0] * k;
            m[3] += m[2] * k;
        }
    }
    return m;
}

Mat4 mat_to_big(const Mat& m) { return {m.a, m.b, m.c, m.d}; }

Mat4 mul(const Mat4& x, const Mat4& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

}  // namespace

std::int64_t Mat::content() const {
    std::int64_t g = std::gcd(std::gcd(a, b), std::gcd(c, d));
    return g;
}

std::string Mat::str() const {
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    return os.str();
}

Word swap_letters(const Word& w) {
    Word out = w;
    out.first = flip(out.first);
    return out;
}

std::int32_t Transducer::find_node(const Mat& m) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == m) return static_cast<std::int32_t>(i);
    return -1;
}

std::pair<Word, Mat> slow_step(const Mat& gamma, Letter s) {
    if (gamma.det() <= 0) throw NonPositiveDeterminantError("slow_step on matrix with det <= 0");
    Mat g = gamma.times_letter(s);
    Word w;
    // Non-strict reductions: equality cases occur and must step (the strict
    // reading never reaches row-balanced form from them). det > 0 makes the
    // two conditions mutually exclusive.
    for (;;) {
        if (g.a <= g.c) {
            w.push(Letter::L);
            g.c -= g.a;
            g.d -= g.b;
        } else if (g.b >= g.d) {
            w.push(Letter::R);
            g.a -= g.c;
            g.b -= g.d;
        } else {
            break;
        }
    }
    return {std::move(w), g};
}

Transducer build_slow(std::int64_t n) {
    if (n < 2) throw std::invalid_argument("transducer level must be >= 2");
    Transducer t;
    t.level = n;
    t.kind = Kind::Slow;
    std::unordered_map<MatKey, std::int32_t, MatKeyHash> index;
    Mat start{n, 0, 0, 1};
    t.nodes.push_back(start);
    index.emplace(key_of(start), 0);
    t.out_begin.push_back(0);
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(t.nodes.size()); ++i) {
        Mat node = t.nodes[i];
        for (Letter s : {Letter::L, Letter::R}) {
            auto [w, g] = slow_step(node, s);
            auto [it, fresh] = index.emplace(key_of(g), static_cast<std::int32_t>(t.nodes.size()));
            if (fresh) t.nodes.push_back(g);
            Word in;
            in.push(s);
            t.edges.push_back({i, it->second, std::move(in), std::move(w)});
        }
        t.out_begin.push_back(static_cast<std::uint32_t>(t.edges.size()));
    }
    return t;
}

Transducer build_fast(std::int64_t n) {
    Transducer slow = build_slow(n);
    std::vector<std::uint32_t> indeg(slow.node_count(), 0);
    for (const Edge& e : slow.edges) ++indeg[e.to];

    // Exercise (a): on the reachable slow graph, indegree >= 2 iff doubly balanced.
    for (std::size_t i = 0; i < slow.node_count(); ++i) {
        if ((indeg[i] >= 2) != slow.nodes[i].doubly_balanced())
            throw std::runtime_error("fast compaction: indegree/doubly-balanced mismatch at " +
                                     slow.nodes[i].str());
    }

    Transducer t;
    t.level = n;
    t.kind = Kind::Fast;
    std::unordered_map<MatKey, std::int32_t, MatKeyHash> index;
    std::vector<std::int32_t> slow_index;  // fast idx -> slow idx
    t.nodes.push_back(slow.nodes[slow.start]);
    index.emplace(key_of(slow.nodes[slow.start]), 0);
    slow_index.push_back(slow.start);
    t.out_begin.push_back(0);

    std::uint64_t steps = 0;
    constexpr std::uint64_t kStepBound = 1'000'000;
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(t.nodes.size()); ++i) {
        // Expand chains through indegree-1 nodes, depth-first with L before R so
        // input words come out in lexicographic order.
        struct Item {
            std::int32_t slow_node;
            Word vin, wout;
        };
        std::vector<Item> stack;
        stack.push_back({slow_index[i], {}, {}});
        while (!stack.empty()) {
            Item item = std::move(stack.back());
            stack.pop_back();
            for (Letter s : {Letter::R, Letter::L}) {  // reversed; stack pops L first
                if (++steps > kStepBound)
                    throw CompactionDivergedError("fast compaction exceeded step bound");
                const Edge& e = slow.out_edges(item.slow_node)[s == Letter::L ? 0 : 1];
                Word vin = item.vin;
                vin.append(e.in);
                Word wout = item.wout;
                wout.append(e.out);
                if (indeg[e.to] >= 2) {
                    auto [it, fresh] =
                        index.emplace(key_of(slow.nodes[e.to]), static_cast<std::int32_t>(t.nodes.size()));
                    if (fresh) {
                        t.nodes.push_back(slow.nodes[e.to]);
                        slow_index.push_back(e.to);
                    }
                    t.edges.push_back({i, it->second, std::move(vin), std::move(wout)});
                } else {
                    stack.push_back({e.to, std::move(vin), std::move(wout)});
                }
            }
        }
        // restore lexicographic edge order within this node (DFS emitted mixed order)
        auto begin = t.edges.begin() + t.out_begin[i];
        std::sort(begin, t.edges.end(), [](const Edge& x, const Edge& y) {
            return word_letters(x.in) < word_letters(y.in);
        });
        t.out_begin.push_back(static_cast<std::uint32_t>(t.edges.size()));
    }
    return t;
}

std::vector<Letter> word_letters(const Word& w) {
    std::vector<Letter> out;
    out.reserve(w.letter_count());
    for (std::size_t j = 0; j < w.runs.size(); ++j)
        out.insert(out.end(), w.runs[j], w.letter_of_run(j));
    return out;
}

namespace {

void check_connectivity(const Transducer& t, std::vector<std::string>& out) {
    const std::size_t n = t.node_count();
    std::vector<std::vector<std::int32_t>> rev(n);
    for (const Edge& e : t.edges) rev[e.to].push_back(e.from);
    auto bfs = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<std::int32_t> queue{t.start};
        seen[t.start] = 1;
        while (!queue.empty()) {
            std::int32_t v = queue.back();
            queue.pop_back();
            if (forward) {
                for (const Edge& e : t.out_edges(v))
                    if (!seen[e.to]) seen[e.to] = 1, queue.push_back(e.to);
            } else {
                for (std::int32_t u : rev[v])
                    if (!seen[u]) seen[u] = 1, queue.push_back(u);
            }
        }
        return seen;
    };
    auto fwd = bfs(true), bwd = bfs(false);
    for (std::size_t i = 0; i < n; ++i) {
        if (!fwd[i] || !bwd[i]) {
            out.push_back("node " + t.nodes[i].str() + " breaks strong connectivity");
            return;
        }
    }
}

}  // namespace

std::vector<std::string> validate(const Transducer& t) {
    std::vector<std::string> out;
    if (t.nodes.empty() || t.out_begin.size() != t.node_count() + 1) {
        out.push_back("malformed transducer tables");
        return out;
    }
    if (!(t.nodes[t.start] == Mat{t.level, 0, 0, 1}))
        out.push_back("start node is not [[n,0],[0,1]]");
    for (std::size_t i = 0; i < t.node_count(); ++i) {
        const Mat& m = t.nodes[i];
        if (m.det() != t.level)
            out.push_back("node " + m.str() + " has determinant != level");
        if (m.content() != 1) out.push_back("node " + m.str() + " has non-coprime entries");
        if (m.a < 0 || m.b < 0 || m.c < 0 || m.d < 0)
            out.push_back("node " + m.str() + " has negative entries");
        if (t.kind == Kind::Slow && !m.row_balanced())
            out.push_back("slow node " + m.str() + " is not row-balanced");
        if (t.kind == Kind::Fast && !m.doubly_balanced())
            out.push_back("fast node " + m.str() + " is not doubly balanced");
    }
    // edge identity: mat(from) * mat(in) == mat(out) * mat(to)
    for (const Edge& e : t.edges) {
        Mat4 lhs = mul(mat_to_big(t.nodes[e.from]), word_matrix(e.in));
        Mat4 rhs = mul(word_matrix(e.out), mat_to_big(t.nodes[e.to]));
        if (lhs != rhs)
            out.push_back("edge " + t.nodes[e.from].str() + " -" + e.in.str() + ":" + e.out.str() +
                          "-> " + t.nodes[e.to].str() + " violates the matrix identity");
    }
    for (std::size_t i = 0; i < t.node_count(); ++i) {
        auto es = t.out_edges(static_cast<std::int32_t>(i));
        if (t.kind == Kind::Slow) {
            bool ok = es.size() == 2 && es[0].in.str() == "L" && es[1].in.str() == "R";
            if (!ok) out.push_back("slow node " + t.nodes[i].str() + " lacks the L/R edge pair");
        } else {
            // base property: prefix-free and complete
            std::vector<std::vector<Letter>> ins;
            for (const Edge& e : es) ins.push_back(word_letters(e.in));
            Rat total = 0;
            bool prefix_free = true;
            for (std::size_t x = 0; x < ins.size(); ++x) {
                total += Rat(1, Int(1) << ins[x].size());
                for (std::size_t y = 0; y < ins.size(); ++y) {
                    if (x != y && ins[x].size() <= ins[y].size() &&
                        std::equal(ins[x].begin(), ins[x].end(), ins[y].begin()))
                        prefix_free = false;
                }
            }
            if (!prefix_free)
                out.push_back("fast node " + t.nodes[i].str() + " has non-prefix-free inputs");
            if (total != 1)
                out.push_back("fast node " + t.nodes[i].str() + " inputs do not form a base");
        }
    }
    check_connectivity(t, out);
    // Lemma 4.3: every walk of length n has a nonempty output (exhaustive for small n).
    if (t.kind == Kind::Slow && t.level <= 5) {
        const auto n = static_cast<std::size_t>(t.level);
        for (std::size_t v = 0; v < t.node_count(); ++v) {
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                std::int32_t node = static_cast<std::int32_t>(v);
                std::size_t out_letters = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    const Edge& e = t.out_edges(node)[(mask >> j) & 1];
                    out_letters += e.out.letter_count();
                    node = e.to;
                }
                if (out_letters == 0) {
                    out.push_back("length-n walk with empty output from " + t.nodes[v].str());
                    break;
                }
            }
        }
    }
    return out;
}

std::string to_dot(const Transducer& t) {
    std::ostringstream os;
    os << "digraph " << (t.kind == Kind::Slow ? "slow_" : "fast_") << t.level << " {\n";
    os << "  rankdir=LR;\n";
    for (std::size_t i = 0; i < t.node_count(); ++i)
        os << "  n" << i << " [label=\"" << t.nodes[i].str() << "\"];\n";
    for (const Edge& e : t.edges) {
        os << "  n" << e.from << " -> " << "n" << e.to << " [label=\""
           << (e.in.empty() ? "-" : e.in.str()) << ":" << (e.out.empty() ? "-" : e.out.str())
           << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_json_text(const Transducer& t) {
    nlohmann::json j;
    j["level"] = t.level;
    j["kind"] = t.kind == Kind::Slow ? "slow" : "fast";
    j["start"] = t.start;
    auto nodes = nlohmann::json::array();
    for (const Mat& m : t.nodes) nodes.push_back({m.a, m.b, m.c, m.d});
    j["nodes"] = std::move(nodes);
    auto edges = nlohmann::json::array();
    for (const Edge& e : t.edges)
        edges.push_back({{"from", e.from}, {"in", e.in.str()}, {"out", e.out.str()}, {"to", e.to}});
    j["edges"] = std::move(edges);
    return j.dump(2) + "\n";
}

DriveResult drive(const Transducer& t, std::int32_t node, std::span<const Letter> input) {
    DriveResult r;
    r.node = node;
    std::size_t pos = 0;
    for (;;) {
        const Edge* next = nullptr;
        for (const Edge& e : t.out_edges(r.node)) {
            auto in = word_letters(e.in);
            if (in.size() <= input.size() - pos &&
                std::equal(in.begin(), in.end(), input.begin() + pos)) {
                next = &e;
                break;
            }
        }
        if (!next) break;
        pos += next->in.letter_count();
        r.output.append(next->out);
        r.node = next->to;
    }
    r.consumed = pos;
    return r;
}

}  // namespace raney
