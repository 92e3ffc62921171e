#include <algorithm>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "charmult/character.hpp"
#include "charmult/unitary.hpp"

using namespace charmult;
using namespace charmult::unitary_detail;

namespace {

FieldPtr ext_of(long p) { return SmallField::quadratic_ext(SmallField::prime(p)); }

// Exhaustive oracle: all 2x2 matrices satisfying m* J m = J.
std::set<Payload> isometry_filter(const FieldPtr& E) {
    std::set<Payload> out;
    int q = static_cast<int>(E->q());
    Payload m(4);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int d = 0; d < q; ++d) {
                    m[0] = a; m[1] = b; m[2] = c; m[3] = d;
                    if (is_isometry(*E, 2, m)) out.insert(m);
                }
    return out;
}

std::set<Payload> payload_set(const GroupPtr& G) {
    std::set<Payload> out;
    for (int i = 0; i < G->order(); ++i) out.insert(G->payload(i));
    return out;
}

} // namespace

TEST_CASE("unitary groups match the exhaustive isometry filter") {
    for (long p : {2L, 3L}) {
        FieldPtr E = ext_of(p);
        GroupPtr U = unitary_group(E);
        auto oracle = isometry_filter(E);
        REQUIRE(payload_set(U) == oracle);
    }
    // F16 over F4: same check one level up the tower
    FieldPtr E16 = SmallField::quadratic_ext(SmallField::quadratic_ext(SmallField::prime(2)));
    GroupPtr U4 = unitary_group(E16);
    REQUIRE(U4->order() == 300);
    REQUIRE(payload_set(U4) == isometry_filter(E16));
}

TEST_CASE("group orders across small q") {
    struct Row { long p, u, su, gu; };
    for (Row r : {Row{2, 18, 6, 18}, Row{3, 96, 24, 192}, Row{5, 720, 120, 2880}}) {
        FieldPtr E = ext_of(r.p);
        REQUIRE(unitary_group(E)->order() == r.u);
        REQUIRE(special_unitary_group(E)->order() == r.su);
        REQUIRE(unitary_similitude_group(E)->order() == r.gu);
    }
}

TEST_CASE("special unitary group is the determinant-one part") {
    FieldPtr E = ext_of(3);
    GroupPtr U = unitary_group(E);
    GroupPtr S = special_unitary_group(E);
    std::set<Payload> su_filter;
    for (int i = 0; i < U->order(); ++i)
        if (det2(*E, U->payload(i)) == 1) su_filter.insert(U->payload(i));
    REQUIRE(payload_set(S) == su_filter);
}

TEST_CASE("similitude group is the similitude filter and contains U") {
    FieldPtr E = ext_of(3);
    GroupPtr U = unitary_group(E);
    GroupPtr GU = unitary_similitude_group(E);
    std::set<Payload> filt;
    int q = static_cast<int>(E->q());
    Payload m(4);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c)
                for (int d = 0; d < q; ++d) {
                    m[0] = a; m[1] = b; m[2] = c; m[3] = d;
                    if (similitude_factor(*E, 2, m)) filt.insert(m);
                }
    REQUIRE(payload_set(GU) == filt);
    auto us = payload_set(U);
    auto gus = payload_set(GU);
    for (const auto& pl : us) REQUIRE(gus.count(pl) == 1);
}

TEST_CASE("norm-one circle and discrete logs") {
    FieldPtr E = ext_of(3);
    auto cyc = norm_one_cycle(E);
    REQUIRE(cyc.size() == 4);
    REQUIRE(cyc[0] == 1);
    std::set<int> seen(cyc.begin(), cyc.end());
    REQUIRE(seen.size() == 4);
    for (int v : cyc) REQUIRE(E->norm_conj(v) == 1);
    for (std::size_t t = 0; t < cyc.size(); ++t) REQUIRE(norm_one_dlog(E, cyc[t]) == static_cast<long>(t));
    REQUIRE_THROWS_AS(norm_one_dlog(E, E->mult_generator()), NotNormOne);
}

TEST_CASE("determinant characters are multiplicative roots of unity") {
    FieldPtr E = ext_of(3);
    GroupPtr U = unitary_group(E);
    std::vector<ClassFunction> chis;
    for (long j = 0; j <= 3; ++j) chis.push_back(det_power_character(E, U, j));
    REQUIRE(chis[0] == trivial_character(U));
    for (const auto& chi : chis) REQUIRE(is_irreducible(chi));
    // multiplicative on every element pair
    for (int g = 0; g < U->order(); g += 7)
        for (int h = 0; h < U->order(); h += 5)
            REQUIRE(chis[1](U->mult(g, h)) == chis[1](g) * chis[1](h));
    // powers of the first nontrivial one
    for (long j = 0; j <= 3; ++j)
        for (int c = 0; c < U->num_classes(); ++c)
            REQUIRE(chis[j].on_class(c) == chis[1].on_class(c).pow(j));
    // they are exactly the linear rows of the table
    auto lins = linear_characters(U);
    REQUIRE(lins.size() == 4);
    for (const auto& lin : lins) {
        bool hit = false;
        for (const auto& chi : chis) hit = hit || chi == lin;
        REQUIRE(hit);
    }
}

TEST_CASE("quadratic determinant twist") {
    FieldPtr E = ext_of(3);
    GroupPtr U = unitary_group(E);
    ClassFunction chi = quadratic_det_character(E, U);
    REQUIRE(chi != trivial_character(U));
    REQUIRE(chi * chi == trivial_character(U));
    for (int c = 0; c < U->num_classes(); ++c) {
        CycNum v = chi.on_class(c);
        REQUIRE((v == CycNum(1) || v == CycNum(-1)));
    }
    FieldPtr E2 = ext_of(2);
    GroupPtr U2 = unitary_group(E2);
    REQUIRE_THROWS_AS(quadratic_det_character(E2, U2), NoQuadraticCharacter);
}

TEST_CASE("similitude character has kernel exactly U") {
    FieldPtr E = ext_of(3);
    GroupPtr U = unitary_group(E);
    GroupPtr GU = unitary_similitude_group(E);
    ClassFunction lam = similitude_character(E, GU);
    REQUIRE(is_irreducible(lam));
    auto us = payload_set(U);
    for (int i = 0; i < GU->order(); ++i) {
        bool inU = us.count(GU->payload(i)) == 1;
        REQUIRE((lam(i) == CycNum(1)) == inU);
    }
    for (int g = 0; g < GU->order(); g += 11)
        for (int h = 0; h < GU->order(); h += 13)
            REQUIRE(lam(GU->mult(g, h)) == lam(g) * lam(h));
}

TEST_CASE("unitary character table for q = 3: degrees and cuspidality") {
    FieldPtr E = ext_of(3);
    GroupPtr U = unitary_group(E);
    REQUIRE(U->num_classes() == 16);
    const CharacterTable& T = character_table(U);
    std::vector<long> degs;
    for (long i = 0; i < T.num_irr(); ++i) degs.push_back(T.degree(i));
    std::sort(degs.begin(), degs.end());
    REQUIRE(degs == std::vector<long>{1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4, 4});
    // cuspidal rows are exactly the degree q-1 = 2 rows
    for (long i = 0; i < T.num_irr(); ++i) {
        INFO("row " << i << " degree " << T.degree(i));
        REQUIRE(is_cuspidal(E, U, T.row(i)) == (T.degree(i) == 2));
    }
}

TEST_CASE("unipotent subgroup") {
    FieldPtr E = ext_of(3);
    GroupPtr U = unitary_group(E);
    auto n = unipotent_indices(E, U);
    REQUIRE(n.size() == 3);
    SubgroupRef N = make_subgroup(U, n);
    REQUIRE(N.sub->abelian());
    REQUIRE(N.sub->exponent() == 3);
}

TEST_CASE("the paired representation choice is deterministic and moved by the twist") {
    FieldPtr E = ext_of(3);
    GroupPtr U = unitary_group(E);
    ClassFunction rho = pick_rho(E, U);
    ClassFunction rho2 = pick_rho(E, U);
    REQUIRE(rho == rho2);
    REQUIRE(rho.degree() == CycNum(2));
    REQUIRE(is_cuspidal(E, U, rho));
    ClassFunction chi = quadratic_det_character(E, U);
    REQUIRE(rho * chi != rho);
    REQUIRE(is_irreducible(rho * chi));
}

TEST_CASE("det-one pairs as block matrices") {
    FieldPtr E = ext_of(2);
    GroupPtr U = unitary_group(E);
    GroupPtr S = s_u_cross_u(E, U);
    REQUIRE(S->order() == 108);
    // every element is block diagonal with det product 1
    for (int i = 0; i < S->order(); ++i) {
        const Payload& m = S->payload(i);
        for (int r = 0; r < 2; ++r)
            for (int c = 2; c < 4; ++c) {
                REQUIRE(m[r * 4 + c] == 0);
                REQUIRE(m[c * 4 + r] == 0);
            }
        Payload a{m[0], m[1], m[4 + 0], m[4 + 1]};
        Payload b{m[2 * 4 + 2], m[2 * 4 + 3], m[3 * 4 + 2], m[3 * 4 + 3]};
        REQUIRE(E->mul(det2(*E, a), det2(*E, b)) == 1);
    }
}

TEST_CASE("swap extension bridges payloads with the pair group") {
    FieldPtr E = ext_of(2);
    GroupPtr U = unitary_group(E);
    GroupPtr S = s_u_cross_u(E, U);
    GroupPtr W = swap_extension_group(E, U);
    REQUIRE(W->order() == 648);
    // S embeds by payload
    for (int i = 0; i < S->order(); ++i) REQUIRE(W->index_of_payload(S->payload(i)).has_value());
    // the swap element conjugates diag(a, b) to diag(b, a)
    std::vector<int> P(16, 0);
    Payload pp(16, 0);
    pp[2] = pp[7] = pp[8] = pp[13] = 1;
    auto pidx = W->index_of_payload(pp);
    REQUIRE(pidx.has_value());
    REQUIRE_FALSE(S->index_of_payload(pp).has_value());
    int t = *pidx;
    REQUIRE(W->mult(t, t) == W->id());
    for (int i = 0; i < S->order(); i += 17) {
        const Payload& m = S->payload(i);
        Payload sw(16, 0);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                sw[r * 4 + c] = m[(2 + r) * 4 + 2 + c];
                sw[(2 + r) * 4 + 2 + c] = m[r * 4 + c];
            }
        int gi = *W->index_of_payload(m);
        REQUIRE(W->payload(W->mult(W->mult(t, gi), t)) == sw);
    }
}
