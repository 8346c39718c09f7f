#include "raney/table.hpp"

#include <chrono>
#include <sstream>

#include "raney/errors.hpp"

namespace raney {

namespace {

// p  num_under_root  denom  period  symmetry
constexpr std::string_view kTableText = R"(# minimum of the p-Lagrange spectrum, primes p < 2000 without a Markoff congruence point
3     12              1        21                S
67    7157            23       33211112          S
163   43677           61       22121211          R
227   231             5        22211111          S
277   4901            23       2222111           S
283   4901            23       2222111           S
293   76728           83       2212111211        R
317   6401            25       211211111         S
347   8643            29       22211211111211    S
397   2813            17       22221             S
547   2813            17       22221             S
557   2813            17       22221             S
587   8468            29       2211211           S
643   2813            17       22221             S
653   689             8        22121121          S
683   2813            17       22221             S
773   4522693909      20985    [2,2,1,1,2,1^8,2,1,1,2,2,1,1,1,2,2,1,1,1]  S
827   75924733710396  2701041  [2,2,2,2,1,1,2,1,1,1,1,2,1,1,1,1,2,2,1,1,1,1,1,2,1,1]  R
853   1625621         409      2222122111        R
907   689             8        22121121          S
947   897756          285      22121111121111    A
997   174557          137      22211222111       S
1013  258068          149      221212211         S
1093  29870597        1819     [2,2,1,1,2,2,1^12]  S
1123  574738353221    245645   [2,2,2,2,2,2,1,1,1,2,2,1,2,2,1,1,1,1,1,1]  R
1163  9797            31       21121111          S
1213  231             5        22211111          S
1237  1535117         401      2212212211        S
1493  76728           83       2212111211        A
1523  10538139        977      [1,2,1^7,2,1,2,2,1,1,1,1,1]  R
1597  11527532430881  1071860  [2^16,1,1,2,2,1,1,2,1,1,2,1,1,2,2,1,1]  S
1627  354606557       5729     [2,2,2,2,2,1,1,1,2,1,1,2,1,2]  R
1637  4901            23       2222111           S
1693  9797            31       21121111          S
1747  1720469         425      [2,2,1,2,2,1^9]   S
1787  60713           82       [2,2,1,1,2,2,1^7] S
1867  9797            31       21121111          S
1907  4901            23       2222111           S
1933  5834157         743      [2,1,1,1,2,1^13]  S
1987  27229           55       [2,2,1^7]         S
1997  278788          169      222122111         R
)";

Symmetry symmetry_from_char(char c) {
    switch (c) {
        case 'S': return Symmetry::S;
        case 'A': return Symmetry::A;
        case 'R': return Symmetry::R;
        default: throw ParseError(std::string("bad symmetry class: ") + c);
    }
}

}  // namespace

std::string_view reference_table_text() { return kTableText; }

std::vector<ReferenceTableEntry> parse_table(std::string_view text) {
    std::vector<ReferenceTableEntry> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string p_s, n_s, d_s, period_s, sym_s;
        if (!(row >> p_s >> n_s >> d_s >> period_s >> sym_s)) {
            if (!p_s.empty()) throw ParseError("short table row: " + line);
            continue;
        }
        ReferenceTableEntry e;
        e.p = std::stoll(p_s);
        e.num_under_root = Int(n_s);
        e.denom = Int(d_s);
        e.period = parse_period(period_s);
        if (sym_s.size() != 1) throw ParseError("bad symmetry field: " + sym_s);
        e.symmetry = symmetry_from_char(sym_s[0]);
        out.push_back(std::move(e));
    }
    return out;
}

const std::vector<ReferenceTableEntry>& reference_table() {
    static const std::vector<ReferenceTableEntry> table = parse_table(kTableText);
    return table;
}

const std::vector<std::int64_t>& default_verify_rows() {
    static const std::vector<std::int64_t> rows{3, 67, 163, 227, 277, 283, 397, 653, 1213, 1987};
    return rows;
}

RowVerdict verify_row(const ReferenceTableEntry& row, const SearchOptions& opt) {
    RowVerdict v;
    v.p = row.p;
    auto t0 = std::chrono::steady_clock::now();
    MinLagrangeResult res = min_lagrange(row.p, opt);
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!res.report) {
        v.detail = "search did not terminate within k_max=" + std::to_string(opt.k_max);
        return v;
    }
    v.terminated = true;
    const ResultReport& rep = *res.report;
    Surd expected = Surd::make(0, 1, row.num_under_root, row.denom);
    v.alpha_ok = rep.alpha == expected;
    Period rev(row.period.rbegin(), row.period.rend());
    for (const Witness& w : rep.witnesses) {
        for (const Period* per : {&w.xi_period, &w.p_xi_period}) {
            if (is_cyclic_rotation(*per, row.period) || is_cyclic_rotation(*per, rev))
                v.period_ok = true;
        }
        if (w.symmetry == row.symmetry) v.symmetry_ok = true;
    }
    std::ostringstream d;
    d << "alpha=" << rep.alpha.str() << " expected=sqrt(" << row.num_under_root << ")/"
      << row.denom << " k_stop=" << rep.k_stop << " witnesses=" << rep.witnesses.size();
    v.detail = d.str();
    return v;
}

std::string table_plot_data() {
    std::ostringstream os;
    os << "# p alpha_decimal symmetry\n";
    for (const auto& e : reference_table()) {
        os << e.p << " " << decimal_of_sqrt_ratio(e.num_under_root, e.denom, 15) << " "
           << symmetry_char(e.symmetry) << "\n";
    }
    return os.str();
}

}  // namespace raney
