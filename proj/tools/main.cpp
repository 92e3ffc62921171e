#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <charmult/jsonio.hpp>
#include <charmult/multiplicity.hpp>

namespace fs = std::filesystem;
namespace cm = charmult;
using cm::ojson;

static constexpr const char* kVersion = "0.1.0";

// ---- cache directory resolution: flag > env > user cache root ----

static fs::path cache_root(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* e = std::getenv("CHARMULT_CACHE_DIR"); e && *e) return e;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "charmult";
    if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "charmult";
    return fs::path(".charmult-cache");
}

// ---- group spec grammar ----

struct FamilyParams {
    long n = 0, q = 0;
};

static FamilyParams family_params(const std::string& body) {
    FamilyParams P;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t eq = tok.find('=');
        if (eq == std::string::npos) throw cm::ParseError("expected key=value in \"" + tok + "\"");
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        long v = 0;
        try {
            std::size_t used = 0;
            v = std::stol(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw cm::ParseError("value of \"" + key + "\" is not an integer");
        }
        if (key == "n")
            P.n = v;
        else if (key == "q")
            P.q = v;
        else
            throw cm::ParseError("unknown parameter \"" + key + "\"");
    }
    if (P.n == 0 || P.q == 0) throw cm::ParseError("family spec needs both n= and q=");
    return P;
}

static ojson read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cm::ParseError("cannot open " + path);
    ojson j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw cm::ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

static cm::GroupPtr parse_group_spec(const std::string& spec) {
    if (spec == "Q8") return cm::quaternion_group();
    if (spec == "klein") return cm::klein_group();
    std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw cm::ParseError("unrecognized group spec \"" + spec + "\"");
    std::string head = spec.substr(0, colon), body = spec.substr(colon + 1);
    if (head == "cyclic" || head == "dihedral") {
        long n = 0;
        try {
            std::size_t used = 0;
            n = std::stol(body, &used);
            if (used != body.size()) throw std::invalid_argument(body);
        } catch (const std::exception&) {
            throw cm::ParseError("\"" + head + ":\" needs an integer");
        }
        return head == "cyclic" ? cm::cyclic_group(n) : cm::dihedral_group(n);
    }
    if (head == "table") {
        ojson j = read_json_file(body);
        if (!j.is_object()) throw cm::ParseError("table file must hold a single group object");
        return cm::group_from_json(j);
    }
    if (head == "U" || head == "SU" || head == "GU" || head == "SUxU") {
        FamilyParams P = family_params(body);
        if (P.n != 2) throw cm::UnsupportedCase("only the rank-two families are wired in");
        cm::FieldPtr E = cm::SmallField::quadratic_ext(cm::SmallField::prime(P.q));
        if (head == "U") return cm::unitary_group(E);
        if (head == "SU") return cm::special_unitary_group(E);
        if (head == "GU") return cm::unitary_similitude_group(E);
        return cm::s_u_cross_u(E, cm::unitary_group(E));
    }
    throw cm::ParseError("unrecognized group spec \"" + spec + "\"");
}

// ---- output ----

static void write_out(const std::string& text, const std::string& outfile) {
    if (outfile.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(outfile);
    if (!out) throw cm::ParseError("cannot write " + outfile);
    out << text;
}

static std::string table_tsv(const ojson& record) {
    std::string s = "class";
    for (const auto& c : record.at("classes")) s += "\t" + std::to_string(c.at(0).get<long>());
    s += "\nsize";
    for (const auto& c : record.at("classes")) s += "\t" + std::to_string(c.at(1).get<long>());
    s += "\n";
    long i = 0;
    for (const auto& row : record.at("rows")) {
        s += "chi" + std::to_string(i++);
        for (const auto& v : row) s += "\t" + cm::cyc_from_json(v).str();
        s += "\n";
    }
    return s;
}

static ojson manifest_head(const std::string& subcommand, ojson parameters) {
    ojson m;
    m["tool"] = "charmult";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["parameters"] = std::move(parameters);
    return m;
}

// ---- chartab ----

static int run_chartab(const std::string& spec, const std::string& format,
                       const std::string& outfile, const fs::path& cachedir) {
    cm::mult_detail::Stopwatch sw;
    cm::GroupPtr G = parse_group_spec(spec);
    std::string key = cm::table_cache_key(G);
    fs::path entry = cachedir / (key + ".json");
    long hits = 0, misses = 0;
    ojson record;
    if (fs::exists(entry)) {
        record = read_json_file(entry.string());
        // a stale or colliding entry falls back to a recompute
        if (record.value("group", "") == cm::fnv_hex(G->table_hash()))
            hits = 1;
        else
            record = ojson();
    }
    if (hits == 0) {
        record = cm::table_to_json(cm::character_table(G));
        misses = 1;
        std::error_code ec;
        fs::create_directories(cachedir, ec);
        if (!ec) {
            fs::path tmp = entry;
            tmp += ".tmp";
            std::ofstream out(tmp);
            if (out) {
                out << record.dump() << "\n";
                out.close();
                fs::rename(tmp, entry, ec);
            }
        }
    }

    if (format == "tsv") {
        write_out(table_tsv(record), outfile);
        return 0;
    }
    ojson m = manifest_head("chartab", ojson{{"group", spec}, {"format", format}});
    m["table"] = std::move(record);
    m["cache"] = ojson{{"hits", hits}, {"misses", misses}};
    m["timing"] = ojson{{"total_ms", sw.ms()}};
    write_out(m.dump(2) + "\n", outfile);
    return 0;
}

// ---- verify ----

struct VerifyOpts {
    std::string suite;
    long q = 3;
    long p = 0; // 0: suite default (3 for lattice, {3,5} for e1)
    int d = 0;  // 0: both block sizes
    long prec = 4;
    unsigned seed = 20260815;
    int count = 200;
    long max_order = 128;
};

static void collect_suite(const VerifyOpts& o, const std::string& name,
                          std::vector<cm::MultiplicityReport>& reports,
                          std::vector<cm::KleinHit>& hits) {
    if (name == "regular-identity") {
        reports.push_back(cm::regular_identity_suite(o.count, o.seed));
    } else if (name == "constancy") {
        reports.push_back(cm::su_u_constancy(o.q));
        reports.push_back(cm::constancy_suite(o.count, o.seed));
    } else if (name == "invariance") {
        reports.push_back(cm::invariance_suite(cm::battery_groups(), o.max_order));
    } else if (name == "klein") {
        reports.push_back(cm::klein_suite(cm::klein_catalog(), &hits));
    } else if (name == "shadow-mult2") {
        reports.push_back(cm::finite_shadow_mult_two(o.q));
    } else if (name == "lattice") {
        long p = o.p ? o.p : 3;
        if (o.d == 0) {
            reports.push_back(cm::lattice_duality_report(p, o.prec, 1));
            reports.push_back(cm::lattice_duality_report(p, o.prec, 2));
        } else {
            reports.push_back(cm::lattice_duality_report(p, o.prec, o.d));
        }
    } else if (name == "e1") {
        if (o.p == 0) {
            reports.push_back(cm::norm_one_report(3, o.prec));
            reports.push_back(cm::norm_one_report(5, o.prec));
        } else {
            reports.push_back(cm::norm_one_report(o.p, o.prec));
        }
    } else if (name == "survey") {
        reports.push_back(cm::gu_u_restriction_survey(o.q, 1));
        reports.push_back(cm::gu_u_restriction_survey(o.q, 2));
    } else {
        throw cm::ParseError("unknown suite \"" + name + "\"");
    }
}

static int run_verify(const VerifyOpts& o, const std::string& format,
                      const std::string& outfile) {
    cm::mult_detail::Stopwatch sw;
    static const std::vector<std::string> kAll = {"regular-identity", "constancy", "invariance",
                                                  "klein",            "shadow-mult2", "lattice",
                                                  "e1",               "survey"};
    std::vector<cm::MultiplicityReport> reports;
    std::vector<cm::KleinHit> hits;
    if (o.suite == "all")
        for (const std::string& s : kAll) collect_suite(o, s, reports, hits);
    else
        collect_suite(o, o.suite, reports, hits);

    bool all_pass = true;
    for (const auto& r : reports) all_pass = all_pass && r.passed();

    if (format == "tsv") {
        std::string s = "check\tpass\tfailed_verdicts\n";
        for (const auto& r : reports) {
            std::string bad;
            for (const auto& [k, v] : r.verdicts)
                if (!v) bad += (bad.empty() ? "" : ",") + k;
            s += r.scenario + "\t" + (r.passed() ? "1" : "0") + "\t" + (bad.empty() ? "-" : bad) +
                 "\n";
        }
        write_out(s, outfile);
        return all_pass ? 0 : 1;
    }

    ojson params;
    params["suite"] = o.suite;
    params["q"] = o.q;
    params["p"] = o.p;
    params["d"] = o.d;
    params["prec"] = o.prec;
    params["seed"] = o.seed;
    params["count"] = o.count;
    params["max_order"] = o.max_order;
    ojson m = manifest_head("verify", std::move(params));
    ojson jr = ojson::array();
    for (const auto& r : reports) jr.push_back(cm::report_to_json(r));
    m["reports"] = std::move(jr);
    if (!hits.empty() || o.suite == "klein") {
        ojson jh = ojson::array();
        for (const auto& h : hits) jh.push_back(cm::klein_hit_to_json(h));
        m["hits"] = std::move(jh);
    }
    m["cache"] = ojson{{"hits", 0}, {"misses", 0}};
    ojson checks = ojson::array();
    for (const auto& r : reports)
        checks.push_back(ojson{{"check", r.scenario}, {"ms", r.ms}});
    m["timing"] = ojson{{"total_ms", sw.ms()}, {"checks", std::move(checks)}};
    write_out(m.dump(2) + "\n", outfile);
    return all_pass ? 0 : 1;
}

// ---- search ----

static int run_search(const std::string& fixtures, long max_order, const std::string& format,
                      const std::string& outfile) {
    cm::mult_detail::Stopwatch sw;
    std::vector<cm::NamedGroup> catalog = cm::fixtures_from_json(read_json_file(fixtures));
    std::vector<cm::NamedGroup> kept;
    for (cm::NamedGroup& ng : catalog)
        if (ng.group->order() <= max_order) kept.push_back(std::move(ng));
    std::vector<cm::KleinHit> hits;
    cm::MultiplicityReport summary = cm::klein_suite(kept, &hits);

    if (format == "tsv") {
        std::string s = "group\torder\tkernel\trow\tverdict\tcase\tconstruction\n";
        for (const auto& h : hits)
            s += h.name + "\t" + std::to_string(h.group->order()) + "\t" +
                 std::to_string(h.normal.size()) + "\t" + std::to_string(h.pi_row) + "\t" +
                 (h.verdict.kind == cm::KleinVerdict::TwoCopies ? "TwoCopies" : "FourDistinct") +
                 "\t" + h.verdict.case_label + "\t" + (h.construction_ok ? "1" : "0") + "\n";
        write_out(s, outfile);
        return summary.passed() ? 0 : 1;
    }

    ojson m = manifest_head(
        "search", ojson{{"fixtures", fixtures}, {"max_order", max_order}});
    m["reports"] = ojson::array({cm::report_to_json(summary)});
    ojson jh = ojson::array();
    for (const auto& h : hits) jh.push_back(cm::klein_hit_to_json(h));
    m["hits"] = std::move(jh);
    m["cache"] = ojson{{"hits", 0}, {"misses", 0}};
    m["timing"] = ojson{{"total_ms", sw.ms()},
                        {"checks", ojson::array({ojson{{"check", summary.scenario},
                                                       {"ms", summary.ms}}})}};
    write_out(m.dump(2) + "\n", outfile);
    return summary.passed() ? 0 : 1;
}

// ---- entry point ----

int main(int argc, char** argv) {
    CLI::App app{"exact character-theoretic multiplicity and lattice checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string cache_flag;
    app.add_option("--cache-dir", cache_flag,
                   "character-table cache directory (default: CHARMULT_CACHE_DIR, then the "
                   "user cache root)");

    auto* ct = app.add_subcommand("chartab", "print the character table of a group");
    ct->fallthrough();
    std::string ct_spec, ct_format = "json", ct_out;
    ct->add_option("--group", ct_spec,
                   "group spec: Q8 | klein | cyclic:n | dihedral:n | U:n=2,q=3 | SU:... | "
                   "GU:... | SUxU:... | table:FILE")
        ->required();
    ct->add_option("--format", ct_format, "json or tsv")
        ->check(CLI::IsMember({"json", "tsv"}));
    ct->add_option("--out", ct_out, "write output to a file instead of stdout");

    auto* vf = app.add_subcommand("verify", "run a named verification suite");
    vf->fallthrough();
    VerifyOpts vo;
    std::string vf_format = "json", vf_out;
    vf->add_option("--suite", vo.suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"regular-identity", "constancy", "invariance", "klein",
                               "shadow-mult2", "lattice", "e1", "survey", "all"}));
    vf->add_option("--q", vo.q, "residue field size for the finite families (default 3)");
    vf->add_option("--p", vo.p, "residue characteristic for the local checks (default: suite)");
    vf->add_option("--d", vo.d, "hyperbolic block count, 0 = both 1 and 2 (default 0)");
    vf->add_option("--prec", vo.prec, "working precision for the local checks (default 4)");
    vf->add_option("--seed", vo.seed, "battery shuffle seed (default 20260815)");
    vf->add_option("--count", vo.count, "battery size (default 200)");
    vf->add_option("--max-order", vo.max_order, "invariance catalog order cap (default 128)");
    vf->add_option("--format", vf_format, "json or tsv")
        ->check(CLI::IsMember({"json", "tsv"}));
    vf->add_option("--out", vf_out, "write output to a file instead of stdout");

    auto* se = app.add_subcommand("search", "classify Klein-quotient configurations in fixtures");
    se->fallthrough();
    std::string se_fixtures, se_format = "json", se_out;
    long se_max = 64;
    se->add_option("--fixtures", se_fixtures, "JSON array of multiplication-table groups")
        ->required();
    se->add_option("--max-order", se_max, "skip fixture groups above this order (default 64)");
    se->add_option("--format", se_format, "json or tsv")
        ->check(CLI::IsMember({"json", "tsv"}));
    se->add_option("--out", se_out, "write output to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ct->parsed()) return run_chartab(ct_spec, ct_format, ct_out, cache_root(cache_flag));
        if (vf->parsed()) return run_verify(vo, vf_format, vf_out);
        return run_search(se_fixtures, se_max, se_format, se_out);
    } catch (const cm::ParseError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const cm::InternalError& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const cm::NotACharacter& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const cm::HypothesisFailed& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const cm::StructureFailed& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const cm::Error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    }
}
