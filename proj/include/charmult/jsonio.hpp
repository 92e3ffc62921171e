#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "catalog.hpp"
#include "character.hpp"
#include "fnv.hpp"
#include "multiplicity.hpp"

namespace charmult {

// Key order is part of the output contract (byte-stable reruns), so every
// serializer here builds ordered_json.
using ojson = nlohmann::ordered_json;

// ---- cyclotomic numbers ----

inline ojson cyc_to_json(const CycNum& z) {
    ojson j;
    j["order"] = z.order();
    ojson coeffs = ojson::array();
    const std::vector<Rat>& c = z.coords();
    for (std::size_t e = 0; e < c.size(); ++e)
        if (c[e] != 0) coeffs.push_back(ojson::array({static_cast<long>(e), rat_to_string(c[e])}));
    j["coeffs"] = std::move(coeffs);
    return j;
}

inline CycNum cyc_from_json(const ojson& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("coeffs"))
        throw ParseError("cyclotomic value needs \"order\" and \"coeffs\"");
    long n = j.at("order").get<long>();
    std::vector<std::pair<long, Rat>> terms;
    for (const ojson& t : j.at("coeffs")) {
        if (!t.is_array() || t.size() != 2)
            throw ParseError("cyclotomic coefficient must be [exponent, \"p/q\"]");
        terms.emplace_back(t.at(0).get<long>(), rat_from_string(t.at(1).get<std::string>()));
    }
    return CycNum::from_root_sum(n, terms);
}

// ---- abstract groups as multiplication tables ----

inline ojson group_to_json(const GroupPtr& G) {
    if (G->order() > kTableLimit)
        throw UnsupportedCase("group too large to export as a multiplication table");
    ojson j;
    j["order"] = G->order();
    j["table"] = G->to_table();
    ojson labels = ojson::array();
    for (int i = 0; i < G->order(); ++i) labels.push_back(G->label(i));
    j["labels"] = std::move(labels);
    return j;
}

inline GroupPtr group_from_json(const ojson& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("table"))
        throw ParseError("group needs \"order\" and \"table\"");
    long n = j.at("order").get<long>();
    const ojson& jt = j.at("table");
    if (!jt.is_array() || static_cast<long>(jt.size()) != n)
        throw ParseError("multiplication table must have one row per element");
    std::vector<std::vector<int>> table;
    table.reserve(jt.size());
    for (const ojson& row : jt) {
        if (!row.is_array() || static_cast<long>(row.size()) != n)
            throw ParseError("multiplication table rows must have one entry per element");
        std::vector<int> r;
        r.reserve(row.size());
        for (const ojson& v : row) {
            long x = v.get<long>();
            if (x < 0 || x >= n) throw ParseError("table entry out of range");
            r.push_back(static_cast<int>(x));
        }
        table.push_back(std::move(r));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        for (const ojson& l : j.at("labels")) labels.push_back(l.get<std::string>());
        if (static_cast<long>(labels.size()) != n)
            throw ParseError("label count must match the order");
    }
    try {
        return FiniteGroup::from_table(std::move(table), std::move(labels));
    } catch (const Error& e) {
        throw ParseError(std::string("table is not a group: ") + e.what());
    }
}

// ---- character-table cache records ----

/// The class-splitting prime recorded with a cached table: 0 for abelian
/// groups (no splitting needed), otherwise the deterministic working prime.
inline long table_prime(const GroupPtr& G) {
    if (G->abelian()) return 0;
    return dixon_detail::working_prime(G->exponent(), G->order());
}

/// Cache key: content hash of the multiplication table plus the prime.
inline std::string table_cache_key(const GroupPtr& G) {
    return fnv_hex(G->table_hash()) + "-l" + std::to_string(table_prime(G));
}

inline ojson table_to_json(const CharacterTable& T) {
    const GroupPtr& G = T.G;
    ojson j;
    j["group"] = fnv_hex(G->table_hash());
    j["ell"] = table_prime(G);
    ojson classes = ojson::array();
    for (long c = 0; c < G->num_classes(); ++c)
        classes.push_back(ojson::array({G->class_rep(static_cast<int>(c)),
                                        G->class_size(static_cast<int>(c))}));
    j["classes"] = std::move(classes);
    ojson degrees = ojson::array();
    for (long i = 0; i < T.num_irr(); ++i) degrees.push_back(T.degree(i));
    j["degrees"] = std::move(degrees);
    ojson rows = ojson::array();
    for (long i = 0; i < T.num_irr(); ++i) {
        ojson row = ojson::array();
        for (long c = 0; c < G->num_classes(); ++c) row.push_back(cyc_to_json(T.row(i).on_class(c)));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

/// Rebuilds the rows of a cached table against a live group. The group must
/// hash to the recorded value; class count and row shapes are validated.
inline std::vector<std::vector<CycNum>> table_rows_from_json(const ojson& j, const GroupPtr& G) {
    if (!j.is_object() || !j.contains("group") || !j.contains("rows"))
        throw ParseError("cached table needs \"group\" and \"rows\"");
    if (j.at("group").get<std::string>() != fnv_hex(G->table_hash()))
        throw ParseError("cached table belongs to a different group");
    const ojson& jr = j.at("rows");
    std::vector<std::vector<CycNum>> rows;
    for (const ojson& row : jr) {
        if (static_cast<long>(row.size()) != G->num_classes())
            throw ParseError("cached row has the wrong class count");
        std::vector<CycNum> r;
        for (const ojson& v : row) r.push_back(cyc_from_json(v));
        rows.push_back(std::move(r));
    }
    if (static_cast<long>(rows.size()) != G->num_classes())
        throw ParseError("cached table has the wrong row count");
    return rows;
}

// ---- check reports ----

/// {"check", "params", "pass", "witness"}; timing stays out of this object
/// so reruns compare byte for byte.
inline ojson report_to_json(const MultiplicityReport& r) {
    ojson j;
    j["check"] = r.scenario;
    ojson params = ojson::object();
    ojson notes = ojson::array();
    for (const std::string& s : r.inputs) {
        std::size_t eq = s.find('=');
        bool kv = eq != std::string::npos && eq > 0 &&
                  s.find_first_of(" :") == std::string::npos;
        if (kv)
            params[s.substr(0, eq)] = s.substr(eq + 1);
        else
            notes.push_back(s);
    }
    if (!notes.empty()) params["notes"] = std::move(notes);
    j["params"] = std::move(params);
    j["pass"] = r.passed();
    ojson witness;
    ojson verdicts = ojson::object();
    for (const auto& [k, v] : r.verdicts) verdicts[k] = v;
    witness["verdicts"] = std::move(verdicts);
    ojson stats = ojson::object();
    for (const auto& [k, v] : r.stats) stats[k] = v;
    witness["stats"] = std::move(stats);
    if (!r.decomposition.empty()) {
        ojson dec = ojson::array();
        for (const auto& [row, mult] : r.decomposition) dec.push_back(ojson::array({row, mult}));
        witness["decomposition"] = std::move(dec);
    }
    j["witness"] = std::move(witness);
    return j;
}

inline ojson klein_hit_to_json(const KleinHit& h) {
    ojson j;
    j["group"] = h.name;
    j["order"] = h.group->order();
    j["kernel_order"] = static_cast<long>(h.normal.size());
    j["row"] = h.pi_row;
    j["verdict"] = h.verdict.kind == KleinVerdict::FourDistinct ? "FourDistinct" : "TwoCopies";
    j["case"] = h.verdict.case_label;
    ojson wit = ojson::array();
    for (const auto& [row, mult] : h.verdict.witness) wit.push_back(ojson::array({row, mult}));
    j["decomposition"] = std::move(wit);
    j["construction_verified"] = h.construction_ok;
    return j;
}

// ---- fixture catalogs ----

/// A fixture file is a JSON array of multiplication-table groups, each
/// optionally named.
inline std::vector<NamedGroup> fixtures_from_json(const ojson& j) {
    if (!j.is_array()) throw ParseError("fixture file must be a JSON array of groups");
    std::vector<NamedGroup> out;
    int anon = 0;
    for (const ojson& g : j) {
        NamedGroup ng;
        ng.group = group_from_json(g);
        if (g.contains("name"))
            ng.name = g.at("name").get<std::string>();
        else
            ng.name = "fixture" + std::to_string(anon++);
        out.push_back(std::move(ng));
    }
    return out;
}

} // namespace charmult
