#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include <charmult/multiplicity.hpp>

using namespace charmult;

namespace {

std::vector<int> center_indices(const GroupPtr& G) {
    std::vector<int> out;
    for (int i = 0; i < G->order(); ++i) {
        bool central = true;
        for (int j = 0; j < G->order() && central; ++j)
            if (G->mult(i, j) != G->mult(j, i)) central = false;
        if (central) out.push_back(i);
    }
    return out;
}

long row_of_degree(const CharacterTable& T, long deg) {
    long found = -1;
    for (long i = 0; i < T.num_irr(); ++i) {
        if (T.degree(i) != deg) continue;
        REQUIRE(found == -1); // caller expects a unique row of this degree
        found = i;
    }
    REQUIRE(found >= 0);
    return found;
}

// the order-two group has one nontrivial row; which slot it lands in is a
// sorting detail, so locate it by value
long sign_row(const CharacterTable& T) {
    REQUIRE(T.num_irr() == 2);
    for (long i = 0; i < 2; ++i)
        for (int c = 0; c < T.G->num_classes(); ++c)
            if (T.row(i).on_class(c) == CycNum(-1)) return i;
    FAIL("no sign character found");
    return -1;
}

GroupHom identity_hom(const GroupPtr& G) {
    std::vector<int> img(G->order());
    for (int i = 0; i < G->order(); ++i) img[i] = i;
    return GroupHom(G, G, std::move(img));
}

GroupHom trivial_hom(const GroupPtr& src, const GroupPtr& dst) {
    return GroupHom(src, dst, std::vector<int>(src->order(), dst->id()));
}

// deterministic mix of trivial maps, cyclic parametrizations, subgroup
// inclusions, and quotient projections
std::vector<GroupHom> hom_battery(const std::vector<GroupPtr>& pool, std::size_t want,
                                  unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<GroupHom> out;
    while (out.size() < want)
        for (const auto& dst : pool) {
            if (out.size() >= want) break;
            const auto& src = pool[rng() % pool.size()];
            out.push_back(trivial_hom(src, dst));

            int g = static_cast<int>(rng() % dst->order());
            long o = dst->element_order(g);
            std::vector<int> img(o);
            for (long i = 0; i < o; ++i) img[i] = dst->power(g, i);
            out.push_back(GroupHom(cyclic_group(o), dst, std::move(img)));

            std::vector<int> seeds{static_cast<int>(rng() % dst->order()),
                                   static_cast<int>(rng() % dst->order())};
            SubgroupRef H = make_subgroup(dst, dst->closure_indices(seeds));
            out.push_back(GroupHom(H.sub, dst, H.embed));

            auto ns = normal_subgroups(dst);
            auto [qr, proj] = quotient_with_projection(dst, ns[rng() % ns.size()]);
            out.push_back(proj);
        }
    out.resize(want, out.front());
    return out;
}

void check_weighted_sum(const GroupHom& f) {
    const CharacterTable& T1 = character_table(f.target());
    const CharacterTable& T2 = character_table(f.source());
    for (long i = 0; i < T1.num_irr(); ++i) {
        long total = 0;
        for (long j = 0; j < T2.num_irr(); ++j)
            total += T2.degree(j) * conjectural_multiplicity(f, T1.row(i), T2.row(j));
        REQUIRE(total == T1.degree(i));
    }
}

} // namespace

TEST_CASE("conjectural multiplicity on the identity is Schur orthogonality") {
    GroupPtr G = symmetric_group(3);
    const CharacterTable& T = character_table(G);
    GroupHom f = identity_hom(G);
    ConjecturalContext diag;
    for (long i = 0; i < T.num_irr(); ++i)
        for (long j = 0; j < T.num_irr(); ++j) {
            long m = conjectural_multiplicity(f, T.row(i), T.row(j), &diag);
            REQUIRE(m == (i == j ? 1 : 0));
            REQUIRE(diag.hypothesis_ok());
        }
}

TEST_CASE("conjectural multiplicity through a point is the degree") {
    GroupPtr G = quaternion_group();
    GroupPtr pt = cyclic_group(1);
    GroupHom f = trivial_hom(pt, G);
    const CharacterTable& T = character_table(G);
    const CharacterTable& Tp = character_table(pt);
    for (long i = 0; i < T.num_irr(); ++i)
        REQUIRE(conjectural_multiplicity(f, T.row(i), Tp.row(0)) == T.degree(i));
}

TEST_CASE("sign against the two-dimensional character of the quaternions") {
    GroupPtr Q = quaternion_group();
    auto z = center_indices(Q);
    REQUIRE(z.size() == 2);
    SubgroupRef H = make_subgroup(Q, z);
    GroupHom inc(H.sub, Q, H.embed);

    const CharacterTable& TQ = character_table(Q);
    const CharacterTable& TH = character_table(H.sub);
    long two = row_of_degree(TQ, 2);
    long sgn = sign_row(TH);

    ConjecturalContext diag;
    REQUIRE(conjectural_multiplicity(inc, TQ.row(two), TH.row(sgn), &diag) == 2);
    REQUIRE(diag.image_normal);
    REQUIRE(diag.cokernel_abelian);

    // the other pairings: linear rows of Q8 restrict trivially
    for (long i = 0; i < TQ.num_irr(); ++i) {
        if (i == two) continue;
        REQUIRE(conjectural_multiplicity(inc, TQ.row(i), TH.row(sgn)) == 0);
        REQUIRE(conjectural_multiplicity(inc, TQ.row(i), TH.row(1 - sgn)) == 1);
    }
}

TEST_CASE("conjectural multiplicity rejects mismatched characters") {
    GroupPtr Q = quaternion_group();
    GroupPtr D = dihedral_group(4);
    GroupHom f = identity_hom(Q);
    const CharacterTable& TD = character_table(D);
    REQUIRE_THROWS_AS(conjectural_multiplicity(f, TD.row(0), character_table(Q).row(0)),
                      GroupMismatch);
    REQUIRE_THROWS_AS(conjectural_multiplicity(f, character_table(Q).row(0), TD.row(0)),
                      GroupMismatch);
}

TEST_CASE("regular identity on the quaternion identity map") {
    GroupPtr Q = quaternion_group();
    MultiplicityReport rep = regular_identity_check(identity_hom(Q));
    REQUIRE(rep.passed());
    REQUIRE(rep.decomposition.size() == 5);
    std::vector<long> vals;
    for (auto& [row, v] : rep.decomposition) vals.push_back(v);
    REQUIRE(vals == std::vector<long>{1, 1, 1, 1, 2});
}

TEST_CASE("regular identity for a trivial map returns the degrees") {
    GroupPtr G = symmetric_group(4);
    MultiplicityReport rep = regular_identity_check(trivial_hom(cyclic_group(1), G));
    REQUIRE(rep.passed());
    const CharacterTable& T = character_table(G);
    for (auto& [row, v] : rep.decomposition) REQUIRE(v == T.degree(row));
}

TEST_CASE("regular identity and the weighted sum across a hom battery") {
    std::vector<GroupPtr> pool = {cyclic_group(6),  symmetric_group(3), quaternion_group(),
                                  dihedral_group(4), cyclic_group(8),   alternating_group(4),
                                  dihedral_group(6)};
    auto battery = hom_battery(pool, 48, 20260815);
    REQUIRE(battery.size() == 48);
    for (const auto& f : battery) REQUIRE(regular_identity_check(f).passed());
    // the equivalent formulation through individual conjectural multiplicities
    for (std::size_t t = 0; t < battery.size(); t += 6) check_weighted_sum(battery[t]);
}

TEST_CASE("constancy for the central inclusion in the quaternions") {
    GroupPtr Q = quaternion_group();
    SubgroupRef H = make_subgroup(Q, center_indices(Q));
    GroupHom inc(H.sub, Q, H.embed);
    const CharacterTable& TH = character_table(H.sub);

    MultiplicityReport rep = constancy_check(inc, TH.row(sign_row(TH)));
    REQUIRE(rep.passed());
    REQUIRE(rep.stat("common_multiplicity") == 2);
    REQUIRE(rep.stat("contributing") == 1);
    REQUIRE(rep.stat("vacuous") == 0);
    REQUIRE(rep.decomposition.size() == 1);
    REQUIRE(rep.decomposition[0].first == row_of_degree(character_table(Q), 2));
}

TEST_CASE("constancy on an identity map gives multiplicity one") {
    GroupPtr G = dihedral_group(4);
    GroupHom f = identity_hom(G);
    const CharacterTable& T = character_table(G);
    for (long j = 0; j < T.num_irr(); ++j) {
        MultiplicityReport rep = constancy_check(f, T.row(j));
        REQUIRE(rep.passed());
        REQUIRE(rep.stat("common_multiplicity") == 1);
        REQUIRE(rep.stat("contributing") == 1);
    }
}

TEST_CASE("constancy across the determinant-one inclusion of isometries") {
    FieldPtr E = SmallField::quadratic_ext(SmallField::prime(3));
    GroupPtr U = unitary_group(E);
    std::vector<int> det1;
    for (int i = 0; i < U->order(); ++i)
        if (unitary_detail::det2(*E, U->payload(i)) == 1) det1.push_back(i);
    SubgroupRef S = make_subgroup(U, det1);
    REQUIRE(S.sub->order() == 24);
    GroupHom inc(S.sub, U, S.embed);

    const CharacterTable& TS = character_table(S.sub);
    for (long j = 0; j < TS.num_irr(); ++j) {
        MultiplicityReport rep = constancy_check(inc, TS.row(j));
        REQUIRE(rep.passed());
        REQUIRE(rep.stat("vacuous") == 0);
        REQUIRE(rep.stat("common_multiplicity") >= 1);
    }
}

TEST_CASE("constancy precondition failures") {
    GroupPtr S3 = symmetric_group(3);
    // a transposition generates a non-normal order-two subgroup
    int t = -1;
    for (int i = 0; i < S3->order(); ++i)
        if (S3->element_order(i) == 2) { t = i; break; }
    SubgroupRef H = make_subgroup(S3, S3->closure_indices({t}));
    GroupHom inc(H.sub, S3, H.embed);
    const CharacterTable& TH = character_table(H.sub);
    REQUIRE_THROWS_AS(constancy_check(inc, TH.row(0)), PreconditionFailed);

    // trivial image is normal, but the cokernel is all of S3
    GroupPtr pt = cyclic_group(1);
    GroupHom triv = trivial_hom(pt, S3);
    REQUIRE_THROWS_AS(constancy_check(triv, character_table(pt).row(0)), PreconditionFailed);
}

TEST_CASE("constancy is vacuous for characters that do not factor") {
    GroupPtr Q = quaternion_group();
    // project onto the order-two quotient by a cyclic normal subgroup of order four
    std::vector<int> n4;
    for (const auto& N : normal_subgroups(Q))
        if (N.size() == 4) { n4 = N; break; }
    REQUIRE(n4.size() == 4);
    auto [qr, proj] = quotient_with_projection(Q, n4);
    const CharacterTable& TQ = character_table(Q);
    MultiplicityReport rep = constancy_check(proj, TQ.row(row_of_degree(TQ, 2)));
    REQUIRE(rep.passed());
    REQUIRE(rep.stat("vacuous") == 1);
    REQUIRE(rep.stat("common_multiplicity") == 0);
    REQUIRE(rep.decomposition.empty());
}

TEST_CASE("induced invariance from the center of the quaternions") {
    GroupPtr Q = quaternion_group();
    SubgroupRef H = make_subgroup(Q, center_indices(Q));
    const CharacterTable& TH = character_table(H.sub);
    MultiplicityReport rep = induced_invariance_check(H, TH.row(sign_row(TH)));
    REQUIRE(rep.passed());
    REQUIRE(rep.stat("constituents") == 1);
    REQUIRE(rep.stat("common_multiplicity") == 2);
    REQUIRE(rep.decomposition[0].first == row_of_degree(character_table(Q), 2));

    // the trivial character induces the four lifted linear characters
    MultiplicityReport triv = induced_invariance_check(H, TH.row(1 - sign_row(TH)));
    REQUIRE(triv.passed());
    REQUIRE(triv.stat("constituents") == 4);
    REQUIRE(triv.stat("common_multiplicity") == 1);
}

TEST_CASE("induced invariance splits along the order-two twist inside Z4") {
    GroupPtr Z4 = cyclic_group(4);
    SubgroupRef H = make_subgroup(Z4, {0, 2});
    const CharacterTable& TH = character_table(H.sub);
    MultiplicityReport rep = induced_invariance_check(H, TH.row(sign_row(TH)));
    REQUIRE(rep.passed());
    REQUIRE(rep.stat("constituents") == 2);
    REQUIRE(rep.stat("common_multiplicity") == 1);
    // the two constituents are the faithful characters of Z4
    const CharacterTable& T = character_table(Z4);
    for (auto& [row, m] : rep.decomposition) {
        bool faithful = false;
        for (int c = 0; c < Z4->num_classes(); ++c)
            if (T.row(row).on_class(c) == CycNum::from_root_sum(4, {{1, Rat(1)}}) ||
                T.row(row).on_class(c) == CycNum::from_root_sum(4, {{3, Rat(1)}}))
                faithful = true;
        REQUIRE(faithful);
    }
}

TEST_CASE("induced invariance rejects nonabelian quotients") {
    GroupPtr S4 = symmetric_group(4);
    std::vector<int> v4;
    for (const auto& N : normal_subgroups(S4))
        if (N.size() == 4) { v4 = N; break; }
    REQUIRE(v4.size() == 4);
    SubgroupRef H = make_subgroup(S4, v4);
    REQUIRE_THROWS_AS(induced_invariance_check(H, character_table(H.sub).row(0)),
                      PreconditionFailed);

    GroupPtr S3 = symmetric_group(3);
    int t = -1;
    for (int i = 0; i < S3->order(); ++i)
        if (S3->element_order(i) == 2) { t = i; break; }
    SubgroupRef K = make_subgroup(S3, S3->closure_indices({t}));
    REQUIRE_THROWS_AS(induced_invariance_check(K, character_table(K.sub).row(0)), NotNormal);
}

TEST_CASE("induced invariance sweep over small groups") {
    std::vector<GroupPtr> pool = {quaternion_group(), dihedral_group(4), cyclic_group(12),
                                  sl2_f3(),           dihedral_group(6), symmetric_group(3)};
    for (const auto& G : pool)
        for (const auto& N : normal_subgroups(G)) {
            if (!quotient_by(G, N).group->abelian()) continue;
            SubgroupRef H = make_subgroup(G, N);
            const CharacterTable& TN = character_table(H.sub);
            for (long r = 0; r < TN.num_irr(); ++r)
                REQUIRE(induced_invariance_check(H, TN.row(r)).passed());
        }
}

TEST_CASE("klein classifier on the quaternion center") {
    GroupPtr Q = quaternion_group();
    auto z = center_indices(Q);
    const CharacterTable& T = character_table(Q);
    KleinVerdict v = klein_classifier(Q, z, T.row(row_of_degree(T, 2)));
    REQUIRE(v.kind == KleinVerdict::TwoCopies);
    REQUIRE(v.case_label == "(ii)");
    REQUIRE(v.witness.size() == 1);
    REQUIRE(v.witness[0].second == 2);
    // the index-two kernel is cyclic of order four
    SubgroupRef H = make_subgroup(Q, v.n1);
    REQUIRE(H.sub->order() == 4);
    REQUIRE(H.sub->exponent() == 4);
}

TEST_CASE("klein classifier on the dihedral center") {
    GroupPtr D = dihedral_group(4);
    const CharacterTable& T = character_table(D);
    KleinVerdict v = klein_classifier(D, center_indices(D), T.row(row_of_degree(T, 2)));
    REQUIRE(v.kind == KleinVerdict::TwoCopies);
    REQUIRE(v.witness.size() == 1);
    REQUIRE(v.witness[0].second == 2);
}

TEST_CASE("klein classifier error paths") {
    GroupPtr Q = quaternion_group();
    auto z = center_indices(Q);
    const CharacterTable& T = character_table(Q);

    // linear characters move under the twists
    REQUIRE_THROWS_AS(klein_classifier(Q, z, T.row(0)), HypothesisFailed);

    // an order-four cyclic quotient is not Klein
    GroupPtr Z8 = cyclic_group(8);
    const CharacterTable& T8 = character_table(Z8);
    REQUIRE_THROWS_AS(klein_classifier(Z8, {0, 4}, T8.row(0)), StructureFailed);

    // foreign character
    GroupPtr D = dihedral_group(4);
    REQUIRE_THROWS_AS(klein_classifier(Q, z, character_table(D).row(0)), GroupMismatch);
}

TEST_CASE("klein search on the quaternions finds the induced construction") {
    auto hits = klein_search({{"Q8", quaternion_group()}});
    REQUIRE(hits.size() == 1);
    const KleinHit& h = hits[0];
    REQUIRE(h.normal.size() == 2);
    REQUIRE(h.verdict.kind == KleinVerdict::TwoCopies);
    REQUIRE(h.verdict.case_label == "(ii)");
    REQUIRE(h.construction_ok);
    SubgroupRef H = make_subgroup(h.group, h.verdict.n1);
    REQUIRE(H.sub->order() == 4);
    REQUIRE(H.sub->exponent() == 4);
}

TEST_CASE("klein search on the Klein group itself is empty") {
    REQUIRE(klein_search({{"V4", klein_group()}}).empty());
}

TEST_CASE("klein search across the order sixteen catalog") {
    auto hits = klein_search(order16_all());
    REQUIRE(hits.size() == 15);
    std::set<std::string> names;
    for (const auto& h : hits) {
        REQUIRE(h.verdict.kind == KleinVerdict::TwoCopies);
        REQUIRE(h.construction_ok);
        names.insert(h.name);
    }
    REQUIRE(names.size() == 9);
}

TEST_CASE("klein search on the extraspecial groups of order 32") {
    // the 35 configurations are the planes of the four-dimensional
    // symplectic space over F2 acting on the unique degree-four character;
    // the 15 Lagrangian planes give abelian kernels (four distinct
    // constituents), the 20 nondegenerate ones give the doubled constituent
    for (auto mk : {extraspecial32_minus, extraspecial32_plus}) {
        auto hits = klein_search({{"extraspecial", mk()}});
        REQUIRE(hits.size() == 35);
        long two = 0, four = 0;
        for (const auto& h : hits) {
            REQUIRE(h.construction_ok);
            if (h.verdict.kind == KleinVerdict::TwoCopies) {
                ++two;
                REQUIRE(h.verdict.witness.size() == 1);
                REQUIRE(h.verdict.witness[0].second == 2);
                REQUIRE(h.verdict.case_label == "(ii)");
            } else {
                ++four;
                REQUIRE(h.verdict.witness.size() == 4);
                for (auto& [row, m] : h.verdict.witness) REQUIRE(m == 1);
                REQUIRE(h.verdict.case_label == "(i)");
            }
        }
        REQUIRE(two == 20);
        REQUIRE(four == 15);
    }
}

TEST_CASE("klein classifier agrees when rerun on a FourDistinct witness") {
    auto hits = klein_search({{"extraspecial", extraspecial32_minus()}});
    const KleinHit* fd = nullptr;
    for (const auto& h : hits)
        if (h.verdict.kind == KleinVerdict::FourDistinct) { fd = &h; break; }
    REQUIRE(fd != nullptr);
    const CharacterTable& T = character_table(fd->group);
    KleinVerdict again = klein_classifier(fd->group, fd->normal, T.row(fd->pi_row));
    REQUIRE(again.kind == KleinVerdict::FourDistinct);
    REQUIRE(again.witness == fd->verdict.witness);
}

TEST_CASE("finite shadow of the multiplicity-two construction at q = 3") {
    MultiplicityReport rep = finite_shadow_mult_two(3);
    REQUIRE(rep.passed());
    REQUIRE(rep.verdict("rho_cuspidal_and_moved"));
    REQUIRE(rep.verdict("sigma_irreducible"));
    REQUIRE(rep.verdict("swap_moves_sigma"));
    REQUIRE(rep.verdict("induced_irreducible"));
    REQUIRE(rep.verdict("multiplicities_all_two"));
    REQUIRE(rep.verdict("swap_restrictions_agree"));
    REQUIRE(rep.verdict("frobenius_reciprocity"));
    REQUIRE(rep.stat("sigma_degree") == 4);
    REQUIRE(rep.stat("induced_degree") == 8);
    // the restriction concentrates in a single constituent, taken twice
    REQUIRE(rep.stat("constituents") == 1);
    REQUIRE(rep.decomposition.size() == 1);
    REQUIRE(rep.decomposition[0].second == 2);
}

TEST_CASE("finite shadow input guards") {
    REQUIRE_THROWS_AS(finite_shadow_mult_two(2), NoQuadraticCharacter);
    REQUIRE_THROWS_AS(finite_shadow_mult_two(5), ClosureCapExceeded);
    REQUIRE_THROWS_AS(finite_shadow_mult_two(9), UnsupportedCase);
    REQUIRE_THROWS_AS(finite_shadow_mult_two(3, 2), UnsupportedCase);
}

TEST_CASE("similitude restriction survey in rank two") {
    MultiplicityReport rep = gu_u_restriction_survey(3, 2);
    REQUIRE(rep.passed());
    REQUIRE(rep.verdict("multiplicity_free"));
    REQUIRE(rep.verdict("padic_parity"));
    REQUIRE(rep.stat("rows") == 32);
    REQUIRE(rep.stat("max_multiplicity") == 1);
    REQUIRE(rep.stat("max_components") == 1);
    REQUIRE(rep.stat("padic_quotient_order") == 2);
}

TEST_CASE("similitude restriction survey in rank one") {
    MultiplicityReport rep = gu_u_restriction_survey(3, 1);
    REQUIRE(rep.passed());
    REQUIRE(rep.stat("rows") == 8);
    REQUIRE(rep.stat("max_multiplicity") == 1);
    REQUIRE(rep.stat("max_components") == 1);
    REQUIRE(rep.stat("padic_quotient_order") == 1);
}

TEST_CASE("similitude survey guards and the valuation parity table") {
    REQUIRE_THROWS_AS(gu_u_restriction_survey(3, 3), ClosureCapExceeded);
    REQUIRE_THROWS_AS(gu_u_restriction_survey(2, 2), UnsupportedCase);
    REQUIRE_THROWS_AS(gu_u_restriction_survey(3, 0), PreconditionFailed);

    REQUIRE(padic_similitude_quotient_order(3, 1) == 1);
    REQUIRE(padic_similitude_quotient_order(3, 2) == 2);
    REQUIRE(padic_similitude_quotient_order(3, 3) == 1);
    REQUIRE(padic_similitude_quotient_order(5, 4) == 2);
    REQUIRE(padic_similitude_quotient_order(7, 5) == 1);
}

TEST_CASE("report accessors reject unknown names") {
    MultiplicityReport rep = gu_u_restriction_survey(3, 1);
    REQUIRE_THROWS_AS(rep.stat("no_such_stat"), InternalError);
    REQUIRE_THROWS_AS(rep.verdict("no_such_verdict"), InternalError);
}

TEST_CASE("lattice duality report bundles the chain checks") {
    MultiplicityReport rep = lattice_duality_report(3, 4, 1);
    REQUIRE(rep.passed());
    for (const char* name :
         {"chain_inclusions", "double_dual_identity", "residue_quotients_hermitian",
          "similitude_scale", "maps_lattice_to_dual", "square_is_scalar", "inverse_relation",
          "square_scales_lattice", "swap_diagram", "determinant_surjective"})
        REQUIRE(rep.verdict(name));
    REQUIRE(rep.stat("quotient_dim") == 2);
    REQUIRE(rep.stat("quotient_elements") == 81);
    REQUIRE(rep.stat("swap_failures") == 0);
    REQUIRE(rep.stat("swap_tested") > 200);
    REQUIRE(rep.stat("norm_one_units") == 12);

    REQUIRE_THROWS_AS(lattice_duality_report(3, 4, 0), PreconditionFailed);
    REQUIRE_THROWS_AS(lattice_duality_report(3, 3, 1), PreconditionFailed);
    REQUIRE_THROWS_AS(lattice_duality_report(4, 4, 1), Error);
}

TEST_CASE("norm-one unit report counts and quotient structure") {
    MultiplicityReport rep = norm_one_report(3, 2);
    REQUIRE(rep.passed());
    REQUIRE(rep.verdict("unit_counts"));
    REQUIRE(rep.verdict("power_quotients_cyclic"));
    REQUIRE(rep.verdict("quotient_orders_gcd"));
    REQUIRE(rep.verdict("even_exponent_parity"));
    REQUIRE(rep.stat("group_order") == 12);
    REQUIRE(rep.stat("exponents_checked") == 6);

    REQUIRE(norm_one_report(5, 2).stat("group_order") == 30);
    REQUIRE(norm_one_report(7, 1).stat("exponents_checked") == 7);
    REQUIRE_THROWS_AS(norm_one_report(3, 0), PreconditionFailed);
}
