#include <algorithm>
#include <set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "charmult/catalog.hpp"
#include "charmult/character.hpp"

using namespace charmult;

namespace {

std::vector<long> degree_list(const CharacterTable& T) {
    std::vector<long> d;
    for (long i = 0; i < T.num_irr(); ++i) d.push_back(T.degree(i));
    std::sort(d.begin(), d.end());
    return d;
}

int find_class(const FiniteGroup& G, long size, long elem_order) {
    int found = -1;
    for (int c = 0; c < G.num_classes(); ++c)
        if (G.class_size(c) == size && G.element_order(G.class_rep(c)) == elem_order) {
            REQUIRE(found == -1); // caller expects the (size, order) pair to be unique
            found = c;
        }
    REQUIRE(found >= 0);
    return found;
}

void check_orthogonality(const GroupPtr& G) {
    const CharacterTable& T = character_table(G);
    long k = G->num_classes();
    REQUIRE(T.num_irr() == k);
    // first orthogonality: rows are orthonormal
    for (long i = 0; i < k; ++i)
        for (long j = i; j < k; ++j) {
            CycNum ip = inner_product(T.row(i), T.row(j));
            REQUIRE(ip == CycNum(i == j ? 1 : 0));
        }
    // second orthogonality: columns give centralizer orders
    for (int c = 0; c < k; ++c)
        for (int c2 = c; c2 < k; ++c2) {
            CycNum acc = 0;
            for (long i = 0; i < k; ++i)
                acc += T.row(i).on_class(c) * T.row(i).on_class(c2).conj();
            CycNum expect = (c == c2) ? CycNum(Rat(G->order(), G->class_size(c))) : CycNum(0);
            REQUIRE(acc == expect);
        }
    // degrees divide the order and their squares sum to it
    long sum = 0;
    for (long i = 0; i < k; ++i) {
        long d = T.degree(i);
        REQUIRE(G->order() % d == 0);
        sum += d * d;
    }
    REQUIRE(sum == G->order());
    // the regular character decomposes with multiplicity = degree
    auto m = decompose(regular_character(G), T);
    for (long i = 0; i < k; ++i) REQUIRE(m[i] == T.degree(i));
}

} // namespace

TEST_CASE("known degree patterns for classic groups") {
    REQUIRE(degree_list(character_table(symmetric_group(3))) == std::vector<long>{1, 1, 2});
    REQUIRE(degree_list(character_table(dihedral_group(4))) == std::vector<long>{1, 1, 1, 1, 2});
    REQUIRE(degree_list(character_table(quaternion_group())) == std::vector<long>{1, 1, 1, 1, 2});
    REQUIRE(degree_list(character_table(alternating_group(4))) == std::vector<long>{1, 1, 1, 3});
    REQUIRE(degree_list(character_table(symmetric_group(4))) == std::vector<long>{1, 1, 2, 3, 3});
    REQUIRE(degree_list(character_table(symmetric_group(5))) ==
            std::vector<long>{1, 1, 4, 4, 5, 5, 6});
    REQUIRE(degree_list(character_table(alternating_group(5))) ==
            std::vector<long>{1, 3, 3, 4, 5});
    REQUIRE(degree_list(character_table(sl2_f3())) == std::vector<long>{1, 1, 1, 2, 2, 2, 3});
    REQUIRE(degree_list(character_table(heisenberg_f3())) ==
            std::vector<long>{1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3});
    REQUIRE(degree_list(character_table(extraspecial32_minus())) ==
            std::vector<long>{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 4});
}

TEST_CASE("symmetric group on three letters: exact values") {
    GroupPtr S3 = symmetric_group(3);
    const CharacterTable& T = character_table(S3);
    int c_id = S3->class_of(S3->id());
    int c_swap = find_class(*S3, 3, 2);
    int c_rot = find_class(*S3, 2, 3);
    // the unique 2-dimensional row
    for (long i = 0; i < T.num_irr(); ++i) {
        if (T.degree(i) != 2) continue;
        REQUIRE(T.row(i).on_class(c_id) == CycNum(2));
        REQUIRE(T.row(i).on_class(c_swap) == CycNum(0));
        REQUIRE(T.row(i).on_class(c_rot) == CycNum(-1));
    }
    // the sign row
    long signs = 0;
    for (long i = 0; i < T.num_irr(); ++i)
        if (T.degree(i) == 1 && T.row(i).on_class(c_swap) == CycNum(-1)) {
            ++signs;
            REQUIRE(T.row(i).on_class(c_rot) == CycNum(1));
        }
    REQUIRE(signs == 1);
}

TEST_CASE("quaternion group: the two dimensional row") {
    GroupPtr Q = quaternion_group();
    const CharacterTable& T = character_table(Q);
    int c_id = Q->class_of(Q->id());
    int c_neg = find_class(*Q, 1, 2);
    for (long i = 0; i < T.num_irr(); ++i) {
        if (T.degree(i) != 2) continue;
        REQUIRE(T.row(i).on_class(c_id) == CycNum(2));
        REQUIRE(T.row(i).on_class(c_neg) == CycNum(-2));
        for (int c = 0; c < Q->num_classes(); ++c)
            if (c != c_id && c != c_neg) REQUIRE(T.row(i).on_class(c) == CycNum(0));
    }
}

TEST_CASE("alternating group on five letters: golden ratio entries") {
    GroupPtr A5 = alternating_group(5);
    const CharacterTable& T = character_table(A5);
    CycNum z5 = CycNum::zeta(5);
    CycNum phi_plus = CycNum(1) + z5 + z5.pow(4);   // (1+sqrt5)/2
    CycNum phi_minus = CycNum(1) + z5.pow(2) + z5.pow(3); // (1-sqrt5)/2
    // five-cycles split into two classes of size 12; each degree-3 row takes
    // one golden value on each
    std::vector<int> fives;
    for (int c = 0; c < A5->num_classes(); ++c)
        if (A5->element_order(A5->class_rep(c)) == 5) fives.push_back(c);
    REQUIRE(fives.size() == 2);
    long rows3 = 0;
    for (long i = 0; i < T.num_irr(); ++i) {
        if (T.degree(i) != 3) continue;
        ++rows3;
        std::multiset<std::string> got{T.row(i).on_class(fives[0]).str(),
                                       T.row(i).on_class(fives[1]).str()};
        REQUIRE(got == std::multiset<std::string>{phi_plus.str(), phi_minus.str()});
    }
    REQUIRE(rows3 == 2);
}

TEST_CASE("abelian tables: exact roots of unity") {
    GroupPtr Z4 = cyclic_group(4);
    const CharacterTable& T = character_table(Z4);
    REQUIRE(T.num_irr() == 4);
    CycNum i4 = CycNum::zeta(4);
    // the generator (index 1, the rotation) takes each fourth root exactly once
    std::multiset<std::string> vals;
    for (long r = 0; r < 4; ++r) vals.insert(T.row(r).on_class(Z4->class_of(1)).str());
    REQUIRE(vals == std::multiset<std::string>{CycNum(1).str(), CycNum(-1).str(), i4.str(),
                                               (-i4).str()});

    // klein group: all values are +-1
    const CharacterTable& K = character_table(klein_group());
    for (long r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            CycNum v = K.row(r).on_class(c);
            REQUIRE((v == CycNum(1) || v == CycNum(-1)));
        }
}

TEST_CASE("abelian fast path agrees with the eigenvector engine") {
    for (GroupPtr G : {cyclic_group(6), cyclic_group(8), klein_group(),
                       direct_product(cyclic_group(2), cyclic_group(4))}) {
        auto fast = dixon_detail::abelian_rows(*G);
        auto slow = dixon_detail::nonabelian_rows(*G);
        auto key = [](const std::vector<CycNum>& row) {
            std::string s;
            for (const auto& v : row) s += v.str() + "|";
            return s;
        };
        std::multiset<std::string> a, b;
        for (const auto& r : fast) a.insert(key(r));
        for (const auto& r : slow) b.insert(key(r));
        REQUIRE(a == b);
    }
}

TEST_CASE("orthogonality battery") {
    std::vector<GroupPtr> gs = {symmetric_group(3),
                                dihedral_group(4),
                                quaternion_group(),
                                alternating_group(4),
                                symmetric_group(4),
                                sl2_f3(),
                                generalized_quaternion(4),
                                semidihedral16(),
                                modular16(),
                                heisenberg_f3(),
                                extraspecial32_minus(),
                                extraspecial32_plus(),
                                alternating_group(5),
                                symmetric_group(5),
                                dihedral_group(32),
                                cyclic_group(12),
                                direct_product(cyclic_group(3), cyclic_group(9)),
                                direct_product(symmetric_group(3), symmetric_group(3))};
    for (const auto& G : gs) check_orthogonality(G);
}

TEST_CASE("tables are a pure function of the multiplication table") {
    GroupPtr A = dihedral_group(4);
    GroupPtr B = dihedral_group(4); // separate instance, same indexing
    const CharacterTable& TA = character_table(A);
    const CharacterTable& TB = character_table(B);
    REQUIRE(TA.num_irr() == TB.num_irr());
    for (long i = 0; i < TA.num_irr(); ++i)
        REQUIRE(TA.row(i).values() == TB.row(i).values());
}

TEST_CASE("decompose accepts characters and rejects non-characters") {
    GroupPtr S4 = symmetric_group(4);
    const CharacterTable& T = character_table(S4);
    ClassFunction f = T.row(1) + T.row(2) + T.row(2);
    auto m = decompose(f, T);
    std::vector<long> expect(T.num_irr(), 0);
    expect[1] = 1;
    expect[2] = 2;
    REQUIRE(m == expect);

    ClassFunction diff = T.row(0) - T.row(1);
    REQUIRE_THROWS_AS(decompose(diff, T), NotACharacter);
    ClassFunction half = CycNum(Rat(1, 2)) * T.row(0);
    REQUIRE_THROWS_AS(decompose(half, T), NotACharacter);
    REQUIRE(is_irreducible(T.row(3)));
    REQUIRE_FALSE(is_irreducible(f));
}

TEST_CASE("restriction and induction satisfy Frobenius reciprocity") {
    GroupPtr S4 = symmetric_group(4);
    auto a4idx = S4->derived_indices();
    SubgroupRef A4 = make_subgroup(S4, a4idx);
    const CharacterTable& TG = character_table(S4);
    const CharacterTable& TH = character_table(A4.sub);
    for (long s = 0; s < TH.num_irr(); ++s)
        for (long c = 0; c < TG.num_irr(); ++c) {
            CycNum lhs = inner_product(induce_from(A4, TH.row(s)), TG.row(c));
            CycNum rhs = inner_product(TH.row(s), restrict_to(A4, TG.row(c)));
            REQUIRE(lhs == rhs);
        }
    // induced degree is the index times the original degree
    for (long s = 0; s < TH.num_irr(); ++s) {
        ClassFunction ind = induce_from(A4, TH.row(s));
        REQUIRE(ind.degree() == CycNum(Rat(2)) * TH.row(s).degree());
    }
}

TEST_CASE("induction is transitive") {
    GroupPtr S4 = symmetric_group(4);
    auto nsubs = normal_subgroups(S4);
    REQUIRE(nsubs[1].size() == 4);
    SubgroupRef V = make_subgroup(S4, nsubs[1]);
    SubgroupRef A = make_subgroup(S4, nsubs[2]);
    // V sits inside A; its indices within A's numbering
    std::vector<int> vinA;
    for (std::size_t j = 0; j < nsubs[2].size(); ++j)
        if (std::find(nsubs[1].begin(), nsubs[1].end(), A.embed[j]) != nsubs[1].end())
            vinA.push_back(static_cast<int>(j));
    SubgroupRef VinA = make_subgroup(A.sub, vinA);

    const CharacterTable& TV = character_table(V.sub);
    const CharacterTable& TVa = character_table(VinA.sub);
    REQUIRE(TV.num_irr() == TVa.num_irr());
    for (long s = 0; s < TV.num_irr(); ++s) {
        REQUIRE(TV.row(s).values() == TVa.row(s).values()); // same abstract table
        ClassFunction direct = induce_from(V, TV.row(s));
        ClassFunction nested = induce_from(A, induce_from(VinA, TVa.row(s)));
        REQUIRE(direct.values() == nested.values());
    }
}

TEST_CASE("tensoring with a linear character permutes the irreducibles") {
    for (GroupPtr G : {symmetric_group(4), quaternion_group(), sl2_f3()}) {
        const CharacterTable& T = character_table(G);
        for (const ClassFunction& lin : linear_characters(G)) {
            std::set<std::string> seen;
            for (long i = 0; i < T.num_irr(); ++i) {
                ClassFunction t = T.row(i) * lin;
                REQUIRE(is_irreducible(t));
                REQUIRE(t.degree() == T.row(i).degree());
                std::string k;
                for (const auto& v : t.values()) k += v.str() + "|";
                REQUIRE(seen.insert(k).second);
            }
        }
    }
}

TEST_CASE("pullback along a quotient projection embeds the quotient table") {
    GroupPtr S4 = symmetric_group(4);
    auto nsubs = normal_subgroups(S4);
    auto [qr, proj] = quotient_with_projection(S4, nsubs[1]); // S4 / V4, order 6
    REQUIRE(qr.group->order() == 6);
    const CharacterTable& TQ = character_table(qr.group);
    const CharacterTable& TG = character_table(S4);
    for (long i = 0; i < TQ.num_irr(); ++i) {
        ClassFunction lift = pullback(proj, TQ.row(i));
        REQUIRE(is_irreducible(lift));
        // the lift appears in the big table
        bool found = false;
        for (long j = 0; j < TG.num_irr(); ++j)
            if (TG.row(j).values() == lift.values()) found = true;
        REQUIRE(found);
        for (long j = 0; j < TQ.num_irr(); ++j) {
            CycNum ip = inner_product(lift, pullback(proj, TQ.row(j)));
            REQUIRE(ip == CycNum(i == j ? 1 : 0));
        }
    }
}

TEST_CASE("pointwise regular identity through verified homomorphisms") {
    // sum over Irr(H) of deg * chi(f(g)) equals |H| exactly when f(g) = 1
    std::vector<GroupPtr> gs = {symmetric_group(4), quaternion_group(), dihedral_group(6)};
    for (const auto& G : gs) {
        for (const auto& N : normal_subgroups(G)) {
            auto [qr, proj] = quotient_with_projection(G, N);
            const CharacterTable& TH = character_table(qr.group);
            for (int c = 0; c < G->num_classes(); ++c) {
                int g = G->class_rep(c);
                CycNum acc = 0;
                for (long i = 0; i < TH.num_irr(); ++i)
                    acc += TH.row(i).degree() * TH.row(i)(proj.map(g));
                CycNum expect = (proj.map(g) == qr.group->id()) ? CycNum(Rat(qr.group->order()))
                                                                : CycNum(0);
                REQUIRE(acc == expect);
            }
        }
    }
}

TEST_CASE("class function plumbing rejects group mismatches") {
    GroupPtr A = symmetric_group(3), B = cyclic_group(6);
    ClassFunction fa = trivial_character(A), fb = trivial_character(B);
    REQUIRE_THROWS_AS(fa + fb, GroupMismatch);
    REQUIRE_THROWS_AS(inner_product(fa, fb), GroupMismatch);
    REQUIRE_THROWS_AS(ClassFunction(A, std::vector<CycNum>{CycNum(1)}), GroupMismatch);
    REQUIRE_THROWS_AS(decompose(fb, character_table(A)), GroupMismatch);
}

TEST_CASE("linear character counts match abelianizations") {
    REQUIRE(linear_characters(symmetric_group(4)).size() == 2);
    REQUIRE(linear_characters(quaternion_group()).size() == 4);
    REQUIRE(linear_characters(alternating_group(4)).size() == 3);
    REQUIRE(linear_characters(alternating_group(5)).size() == 1);
    REQUIRE(linear_characters(cyclic_group(12)).size() == 12);
}
