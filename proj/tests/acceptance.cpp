// Acceptance suite: nine criteria, one line each, exact comparisons with a
// wall-clock budget printed per line. Exit status is the number of failed
// criteria (0 when everything holds).

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <charmult/multiplicity.hpp>

using namespace charmult;

namespace {

// 1. orthogonality and degree sums across the named table battery
bool table_battery(std::string& d) {
    std::vector<NamedGroup> gs;
    for (long n = 1; n <= 12; ++n) gs.push_back({"Z" + std::to_string(n), cyclic_group(n)});
    gs.push_back({"Z2xZ2", klein_group()});
    gs.push_back({"S3", symmetric_group(3)});
    gs.push_back({"S4", symmetric_group(4)});
    gs.push_back({"D8", dihedral_group(4)});
    gs.push_back({"Q8", quaternion_group()});
    FieldPtr E = SmallField::quadratic_ext(SmallField::prime(3));
    GroupPtr U = unitary_group(E);
    gs.push_back({"U(2,9)", U});
    gs.push_back({"SU(2,9)", special_unitary_group(E)});
    gs.push_back({"S(UxU)(9)", s_u_cross_u(E, U)});

    long rows_total = 0;
    for (const NamedGroup& ng : gs) {
        const GroupPtr& G = ng.group;
        const CharacterTable& T = character_table(G);
        long k = T.num_irr();
        long ss = 0;
        for (long i = 0; i < k; ++i) ss += T.degree(i) * T.degree(i);
        if (ss != G->order()) {
            d = ng.name + ": degree squares sum to " + std::to_string(ss);
            return false;
        }
        for (long i = 0; i < k; ++i)
            for (long j = i; j < k; ++j)
                if (!(inner_product(T.row(i), T.row(j)) == CycNum(i == j ? 1 : 0))) {
                    d = ng.name + ": row orthogonality fails at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")";
                    return false;
                }
        for (long c = 0; c < k; ++c)
            for (long cc = c; cc < k; ++cc) {
                CycNum s(0);
                for (long i = 0; i < k; ++i)
                    s = s + T.row(i).on_class(c) * T.row(i).on_class(cc).conj();
                long want = c == cc ? G->order() / G->class_size(static_cast<int>(c)) : 0;
                if (!(s == CycNum(want))) {
                    d = ng.name + ": column orthogonality fails at (" + std::to_string(c) + "," +
                        std::to_string(cc) + ")";
                    return false;
                }
            }
        rows_total += k;
    }
    d = std::to_string(gs.size()) + " groups, " + std::to_string(rows_total) +
        " irreducibles, all identities exact";
    return true;
}

// 2. <regular, pullback(f, chi)> = chi(1) across the randomized battery
bool regular_identity(std::string& d) {
    MultiplicityReport r = regular_identity_suite(200, 20260815);
    d = std::to_string(r.stat("maps")) + " maps, " + std::to_string(r.stat("characters")) +
        " characters, " + std::to_string(r.stat("failures")) + " failures";
    return r.passed() && r.stat("maps") >= 200 && r.stat("failures") == 0;
}

// 3. uniform multiplicities and twist orbits for every abelian-quotient
//    normal subgroup in the catalog
bool induced_invariance(std::string& d) {
    MultiplicityReport r = invariance_suite(battery_groups(), 128);
    d = std::to_string(r.stat("groups")) + " groups, " +
        std::to_string(r.stat("configurations")) + " configurations, " +
        std::to_string(r.stat("failures")) + " failures";
    return r.passed() && r.stat("configurations") > 0 && r.stat("failures") == 0;
}

// 4. quaternion seed verdict plus independent re-decomposition of every
//    configuration the search visits
bool klein_agreement(std::string& d) {
    GroupPtr Q8 = quaternion_group();
    const CharacterTable& T = character_table(Q8);
    long two_dim = -1;
    for (long i = 0; i < T.num_irr(); ++i)
        if (T.degree(i) == 2) two_dim = i;
    std::vector<int> center;
    for (int i = 0; i < Q8->order(); ++i) {
        bool central = true;
        for (int j = 0; j < Q8->order() && central; ++j)
            central = Q8->mult(i, j) == Q8->mult(j, i);
        if (central) center.push_back(i);
    }
    KleinVerdict v = klein_classifier(Q8, center, T.row(two_dim));
    if (v.kind != KleinVerdict::TwoCopies) {
        d = "quaternion verdict is not two-copies";
        return false;
    }
    if (v.witness.size() != 1 || v.witness[0].second != 2) {
        d = "quaternion witness is not a doubled constituent";
        return false;
    }
    SubgroupRef NR = make_subgroup(Q8, center);
    const CharacterTable& TN = character_table(NR.sub);
    const ClassFunction& w = TN.row(v.witness[0].first);
    bool sign_like = TN.degree(v.witness[0].first) == 1;
    bool saw_minus = false;
    for (long c = 0; c < NR.sub->num_classes(); ++c) {
        if (w.on_class(c) == CycNum(-1))
            saw_minus = true;
        else if (!(w.on_class(c) == CycNum(1)))
            sign_like = false;
    }
    if (!sign_like || !saw_minus) {
        d = "doubled constituent is not the sign character";
        return false;
    }

    std::vector<KleinHit> hits = klein_search(klein_catalog());
    long doubled = 0, split = 0;
    for (const KleinHit& h : hits) {
        SubgroupRef R = make_subgroup(h.group, h.normal);
        std::vector<long> m = decompose(restrict_to(R, character_table(h.group).row(h.pi_row)),
                                        character_table(R.sub));
        long cnt = 0, mx = 0;
        for (long val : m)
            if (val) {
                ++cnt;
                mx = std::max(mx, val);
            }
        bool four = cnt == 4 && mx == 1, two = cnt == 1 && mx == 2;
        bool agree = h.verdict.kind == KleinVerdict::FourDistinct ? four : two;
        if (!agree) {
            d = "direct decomposition disagrees with the verdict at " + h.name;
            return false;
        }
        if (!h.construction_ok) {
            d = "construction route failed at " + h.name;
            return false;
        }
        (h.verdict.kind == KleinVerdict::TwoCopies ? doubled : split) += 1;
    }
    d = std::to_string(hits.size()) + " configurations agree (" + std::to_string(doubled) +
        " doubled, " + std::to_string(split) + " split); quaternion doubles the sign";
    return !hits.empty();
}

// 5. induced character irreducible, every restriction constituent doubled
bool shadow_mult_two(std::string& d) {
    MultiplicityReport r = finite_shadow_mult_two(3);
    bool all_two = !r.decomposition.empty();
    for (const auto& [row, m] : r.decomposition) all_two = all_two && m == 2;
    d = std::to_string(r.stat("constituents")) + " constituents of the restriction, each with "
        "multiplicity two; induced character has norm one";
    return r.passed() && r.verdict("induced_irreducible") && r.verdict("multiplicities_all_two") &&
           all_two;
}

// 6. the full lattice-chain identity battery at both block sizes
bool lattice_identities(std::string& d) {
    MultiplicityReport r1 = lattice_duality_report(3, 4, 1);
    MultiplicityReport r2 = lattice_duality_report(3, 4, 2);
    d = "swap diagram over " + std::to_string(r1.stat("swap_tested")) + " + " +
        std::to_string(r2.stat("swap_tested")) + " stabilizer elements, zero failures";
    return r1.passed() && r2.passed();
}

// 7. norm-one unit counts and power quotients at both residue characteristics
bool norm_one_structure(std::string& d) {
    MultiplicityReport r3 = norm_one_report(3, 4);
    MultiplicityReport r5 = norm_one_report(5, 4);
    d = "group orders " + std::to_string(r3.stat("group_order")) + " and " +
        std::to_string(r5.stat("group_order")) + " at precision four, quotients cyclic with "
        "even order exactly at even exponents";
    return r3.passed() && r5.passed();
}

// 8. every irreducible of the similitude group restricts multiplicity free
bool similitude_survey(std::string& d) {
    MultiplicityReport r = gu_u_restriction_survey(3, 2);
    d = std::to_string(r.stat("rows")) + " irreducibles, largest multiplicity " +
        std::to_string(r.stat("max_multiplicity"));
    return r.passed() && r.stat("max_multiplicity") == 1;
}

// 9. singleton multiplicity sets for the det-one inclusion and for every
//    eligible battery map
bool constancy(std::string& d) {
    MultiplicityReport inc = su_u_constancy(3);
    MultiplicityReport bat = constancy_suite(200, 20260815);
    d = std::to_string(inc.stat("rows")) + " inclusion rows all nonvacuous; battery " +
        std::to_string(bat.stat("checks")) + " checks over " +
        std::to_string(bat.stat("eligible")) + " eligible maps, " +
        std::to_string(bat.stat("failures")) + " failures";
    return inc.passed() && bat.passed() && inc.stat("failures") == 0 &&
           bat.stat("failures") == 0;
}

} // namespace

int main() {
    struct Row {
        const char* label;
        double budget_s;
        bool (*fn)(std::string&);
    };
    const Row rows[] = {
        {"character-table validity battery", 60, table_battery},
        {"regular-representation identity", 120, regular_identity},
        {"induced invariance battery", 120, induced_invariance},
        {"klein-quotient criterion agreement", 120, klein_agreement},
        {"finite shadow multiplicity two", 600, shadow_mult_two},
        {"lattice chain identities", 120, lattice_identities},
        {"norm-one unit structure", 60, norm_one_structure},
        {"similitude restriction survey", 120, similitude_survey},
        {"constancy of multiplicities", 120, constancy},
    };

    int failures = 0;
    int idx = 0;
    for (const Row& row : rows) {
        ++idx;
        std::string detail;
        bool ok = false;
        auto t0 = std::chrono::steady_clock::now();
        try {
            ok = row.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_budget = el < row.budget_s;
        bool pass = ok && in_budget;
        if (!pass) ++failures;
        std::printf("[%d/9] %s  %-36s %7.2fs / %.0fs%s\n", idx, pass ? "PASS" : "FAIL", row.label,
                    el, row.budget_s, in_budget ? "" : "  (over budget)");
        if (!detail.empty()) std::printf("       %s\n", detail.c_str());
    }
    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures;
}
