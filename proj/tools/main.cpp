#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "raney/errors.hpp"
#include "raney/markoff.hpp"
#include "raney/search.hpp"
#include "raney/table.hpp"
#include "raney/transducer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;
constexpr int kExitNotTerminated = 4;

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(output_path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + output_path);
    f << text;
}

std::string resolve_checkpoint(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    const char* dir = std::getenv("LAGRANGE_CHECKPOINT_DIR");
    if (p.is_relative() && dir && *dir) return (std::filesystem::path(dir) / p).string();
    return path;
}

nlohmann::json json_int(const raney::Int& n) {
    if (n >= std::numeric_limits<std::int64_t>::min() &&
        n <= std::numeric_limits<std::int64_t>::max())
        return n.convert_to<std::int64_t>();
    return n.str();
}

nlohmann::json surd_json(const raney::Surd& s) {
    nlohmann::json j;
    j["text"] = s.str();
    j["decimal"] = s.decimal(15);
    if (s.is_pure_sqrt()) {
        j["num_under_root"] = json_int(s.v() * s.v() * s.D());
        j["denom"] = json_int(s.w());
    }
    return j;
}

int cmd_transducer(std::int64_t n, const std::string& kind, const std::string& format,
                   const std::string& output) {
    raney::Transducer t = (kind == "slow") ? raney::build_slow(n) : raney::build_fast(n);
    auto violations = raney::validate(t);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
        return kExitVerification;
    }
    emit(format == "json" ? raney::to_json_text(t) : raney::to_dot(t), output);
    return kExitOk;
}

int cmd_minlp(std::int64_t p, const raney::SearchOptions& opt, const std::string& output) {
    raney::MinLagrangeResult res = raney::min_lagrange(p, opt);
    if (!res.report) {
        nlohmann::json j;
        j["status"] = "not_terminated";
        j["p"] = p;
        j["k_reached"] = res.k_reached;
        j["alpha_so_far"] = res.alpha_so_far.str();
        j["beta_so_far"] = res.beta_so_far.str();
        if (!opt.checkpoint_path.empty()) j["checkpoint"] = opt.checkpoint_path;
        emit(j.dump(2) + "\n", output);
        return kExitNotTerminated;
    }
    emit(raney::report_to_json(*res.report), output);
    return kExitOk;
}

int cmd_verify_table(std::vector<std::int64_t> rows, bool all, bool stretch,
                     const std::string& table_file, const raney::SearchOptions& opt,
                     const std::string& emit_data) {
    std::vector<raney::ReferenceTableEntry> table;
    if (table_file.empty()) {
        table = raney::reference_table();
    } else {
        std::ifstream f(table_file);
        if (!f) throw std::runtime_error("cannot read " + table_file);
        std::stringstream ss;
        ss << f.rdbuf();
        table = raney::parse_table(ss.str());
    }
    if (!emit_data.empty()) {
        std::ofstream f(emit_data, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + emit_data);
        f << raney::table_plot_data();
    }
    if (rows.empty()) {
        if (all || stretch) {
            for (const auto& e : table) rows.push_back(e.p);
        } else {
            rows = raney::default_verify_rows();
        }
    }
    int failures = 0, ran = 0;
    for (std::int64_t p : rows) {
        const raney::ReferenceTableEntry* entry = nullptr;
        for (const auto& e : table)
            if (e.p == p) entry = &e;
        if (!entry) {
            std::cout << "p=" << p << " SKIP (no reference row)\n";
            continue;
        }
        raney::RowVerdict v = raney::verify_row(*entry, opt);
        ++ran;
        std::cout << "p=" << p << (v.pass() ? " PASS " : " FAIL ") << v.detail;
        if (!v.terminated) std::cout << " [not terminated]";
        else if (!v.alpha_ok) std::cout << " [alpha mismatch]";
        else if (!v.period_ok) std::cout << " [period mismatch]";
        else if (!v.symmetry_ok) std::cout << " [symmetry mismatch]";
        std::cout << " (" << v.seconds << "s)\n";
        if (!v.pass()) ++failures;
    }
    std::cout << ran - failures << "/" << ran << " rows verified\n";
    return failures == 0 ? kExitOk : kExitVerification;
}

int cmd_markoff(std::int64_t p, std::int64_t enumerate_bound, std::int64_t uniqueness_bound,
                const std::string& output) {
    nlohmann::json j;
    if (enumerate_bound > 0) {
        j["z_bound"] = enumerate_bound;
        auto triples = raney::enumerate_triples(enumerate_bound);
        auto arr = nlohmann::json::array();
        for (const auto& t : triples) arr.push_back({t.x, t.y, t.z});
        j["triples"] = std::move(arr);
    } else if (uniqueness_bound > 0) {
        auto rep = raney::strong_uniqueness_check(uniqueness_bound);
        j["z_bound"] = rep.z_bound;
        j["triples_checked"] = rep.triples_checked;
        auto col = nlohmann::json::array();
        for (const auto& c : rep.collisions)
            col.push_back({{"part", c.part.str()}, {"z1", c.z1}, {"z2", c.z2}});
        j["collisions"] = std::move(col);
        j["duplicate_max"] = rep.duplicate_max;
        j["factorization_timeouts"] = rep.factorization_timeouts;
        auto pts = nlohmann::json::array();
        for (const auto& t : raney::enumerate_triples(uniqueness_bound)) {
            raney::Surd l = raney::lambda_z(t.z);
            pts.push_back({{"z", t.z},
                           {"lambda", {{"N", json_int(l.v() * l.v() * l.D())}, {"d", json_int(l.w())}}},
                           {"D", json_int(raney::markoff_discriminant(t.z))},
                           {"squarefree_part", raney::squarefree_part(9 * raney::Int(t.z) * t.z - 4).str()}});
        }
        j["points"] = std::move(pts);
    } else {
        auto cases = raney::corollary_cases(p);
        auto points = raney::corollary_filter(p);
        j["p"] = p;
        const char* names = "abcdef";
        nlohmann::json cj;
        for (int i = 0; i < 6; ++i) cj[std::string(1, names[i])] = static_cast<bool>(cases[i]);
        j["cases"] = std::move(cj);
        auto arr = nlohmann::json::array();
        const raney::Surd* best = nullptr;
        for (const auto& pt : points) {
            arr.push_back({{"triple", {pt.triple.x, pt.triple.y, pt.triple.z}},
                           {"lambda", surd_json(pt.lambda)},
                           {"D", json_int(pt.D)}});
            if (!best || pt.lambda < *best) best = &pt.lambda;
        }
        j["points"] = std::move(arr);
        j["min"] = best ? surd_json(*best) : nlohmann::json();
    }
    emit(j.dump(2) + "\n", output);
    return kExitOk;
}

int cmd_quality(const std::string& period_text, const std::string& output) {
    raney::Period period = raney::parse_period(period_text);
    nlohmann::json j;
    j["period"] = period;
    j["lambda"] = surd_json(raney::lambda_periodic(period));
    auto cuts = nlohmann::json::array();
    for (std::size_t i = 1; i <= period.size(); ++i) {
        raney::Surd q = raney::cut_quality_periodic(period, i);
        cuts.push_back({{"i", i}, {"term", period[i - 1]}, {"value", surd_json(q)}});
    }
    j["cuts"] = std::move(cuts);
    emit(j.dump(2) + "\n", output);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Raney-transducer computation of the minimum of the p-Lagrange spectrum"};
    app.require_subcommand(1);

    // transducer
    auto* tr = app.add_subcommand("transducer", "Build, validate and export a Raney transducer");
    std::int64_t tr_n = 0;
    std::string tr_kind, tr_format = "dot", tr_output;
    tr->add_option("n", tr_n, "level (determinant), n >= 2")->required()->check(CLI::Range(std::int64_t(2), std::int64_t(1) << 40));
    tr->add_option("kind", tr_kind, "slow | fast")->required()->check(CLI::IsMember({"slow", "fast"}));
    tr->add_option("--format", tr_format, "dot | json")->check(CLI::IsMember({"dot", "json"}));
    tr->add_option("-o,--output", tr_output, "write to file instead of stdout");

    // minlp
    auto* ml = app.add_subcommand("minlp", "Compute min of the p-Lagrange spectrum with certificate");
    std::int64_t ml_p = 0;
    raney::SearchOptions ml_opt;
    std::string ml_output, ml_cap = "4", ml_checkpoint, ml_resume;
    bool ml_no_cap = false, ml_no_seed = false;
    ml->add_option("p", ml_p, "prime level")->required();
    ml->add_option("--max-k", ml_opt.k_max, "path-length budget before giving up");
    ml->add_option("--threads", ml_opt.threads, "worker threads (deterministic output)")
        ->check(CLI::Range(1, 256));
    ml->add_option("--checkpoint", ml_checkpoint, "save search state to this file");
    ml->add_option("--resume", ml_resume, "resume from a checkpoint file");
    ml->add_option("--prune-cap", ml_cap, "rational pruning cap (e.g. 4 or 7/2)");
    ml->add_flag("--no-prune-cap", ml_no_cap, "disable the pruning cap");
    ml->add_flag("--no-corollary-seed", ml_no_seed, "do not seed the cap with Markoff congruence points");
    ml->add_option("-o,--output", ml_output, "write the report to a file");

    // verify-table
    auto* vt = app.add_subcommand("verify-table", "Recompute and check reference-table rows");
    std::string vt_rows, vt_file, vt_emit;
    bool vt_all = false, vt_stretch = false;
    raney::SearchOptions vt_opt;
    vt->add_option("--rows", vt_rows, "comma-separated primes (default: the standard rows)");
    vt->add_flag("--all", vt_all, "verify every table row (long-period rows are slow)");
    vt->add_flag("--stretch", vt_stretch, "alias of --all");
    vt->add_option("--table-file", vt_file, "external table file (p N d period symmetry)");
    vt->add_option("--threads", vt_opt.threads, "worker threads")->check(CLI::Range(1, 256));
    vt->add_option("--max-k", vt_opt.k_max, "path-length budget per row");
    vt->add_option("--emit-data", vt_emit, "write 'p alpha_decimal symmetry' plot data to a file");

    // markoff
    auto* mk = app.add_subcommand("markoff", "Markoff triples, congruence cases, uniqueness check");
    std::int64_t mk_p = 0, mk_enum = 0, mk_uniq = 0;
    std::string mk_output;
    mk->add_option("p", mk_p, "prime: which congruence cases fire");
    mk->add_option("--enumerate", mk_enum, "list triples with max <= bound");
    mk->add_option("--uniqueness", mk_uniq, "strong-uniqueness squarefree check up to bound");
    mk->add_option("-o,--output", mk_output, "write to file instead of stdout");

    // quality
    auto* ql = app.add_subcommand("quality", "lambda of a periodic continued fraction, per cut");
    std::string ql_period, ql_output;
    ql->add_option("period", ql_period, "period, e.g. \"2211\" or \"[2,2,1,1]\" or \"[2,2,1^7]\"")
        ->required();
    ql->add_option("-o,--output", ql_output, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (tr->parsed()) return cmd_transducer(tr_n, tr_kind, tr_format, tr_output);
        if (ml->parsed()) {
            if (ml_no_cap) ml_opt.prune_cap.reset();
            else {
                auto slash = ml_cap.find('/');
                if (slash == std::string::npos) ml_opt.prune_cap = raney::Rat(raney::Int(ml_cap));
                else
                    ml_opt.prune_cap = raney::Rat(raney::Int(ml_cap.substr(0, slash)),
                                                  raney::Int(ml_cap.substr(slash + 1)));
            }
            ml_opt.corollary_seed = !ml_no_seed;
            ml_opt.checkpoint_path = resolve_checkpoint(ml_checkpoint);
            ml_opt.resume_path = resolve_checkpoint(ml_resume);
            return cmd_minlp(ml_p, ml_opt, ml_output);
        }
        if (vt->parsed()) {
            std::vector<std::int64_t> rows;
            std::stringstream ss(vt_rows);
            for (std::string item; std::getline(ss, item, ',');)
                if (!item.empty()) rows.push_back(std::stoll(item));
            return cmd_verify_table(rows, vt_all, vt_stretch, vt_file, vt_opt, vt_emit);
        }
        if (mk->parsed()) {
            if (mk_p == 0 && mk_enum == 0 && mk_uniq == 0)
                throw raney::ParseError("markoff needs p, --enumerate or --uniqueness");
            return cmd_markoff(mk_p, mk_enum, mk_uniq, mk_output);
        }
        if (ql->parsed()) return cmd_quality(ql_period, ql_output);
    } catch (const raney::NotPrimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const raney::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const raney::CheckpointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const raney::VerificationFailedError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
