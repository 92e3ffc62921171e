#pragma once

// Named small groups used throughout the test batteries.
//
// Permutation or matrix realizations are used where a standard one exists;
// the two-parameter presentations of order 16 are built straight from their
// normal forms a^i b^j (or a^i b^j c^k) as explicit tables, which keeps the
// relations visible and the indexing deterministic.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "charmult/errors.hpp"
#include "charmult/group.hpp"

namespace charmult {

inline GroupPtr cyclic_group(long n) {
    if (n < 1) throw Error("cyclic group order must be positive");
    if (n == 1) return FiniteGroup::from_table({{0}}, {"e"});
    std::vector<int> rot(n);
    for (long i = 0; i < n; ++i) rot[i] = static_cast<int>((i + 1) % n);
    return FiniteGroup::from_perm_generators({rot});
}

inline GroupPtr klein_group() {
    return FiniteGroup::from_perm_generators({{1, 0, 3, 2}, {2, 3, 0, 1}});
}

/// Dihedral group of order 2n acting on n points (n >= 3).
inline GroupPtr dihedral_group(long n) {
    if (n < 3) throw Error("dihedral construction needs n >= 3");
    std::vector<int> rot(n), ref(n);
    for (long i = 0; i < n; ++i) {
        rot[i] = static_cast<int>((i + 1) % n);
        ref[i] = static_cast<int>((n - i) % n);
    }
    return FiniteGroup::from_perm_generators({rot, ref});
}

inline GroupPtr symmetric_group(long n) {
    if (n < 2 || n > 6) throw Error("symmetric construction supports 2 <= n <= 6");
    if (n == 2) return cyclic_group(2);
    std::vector<int> cyc(n), swp(n);
    for (long i = 0; i < n; ++i) { cyc[i] = static_cast<int>((i + 1) % n); swp[i] = static_cast<int>(i); }
    std::swap(swp[0], swp[1]);
    return FiniteGroup::from_perm_generators({swp, cyc});
}

inline GroupPtr alternating_group(long n) {
    if (n == 4) return FiniteGroup::from_perm_generators({{1, 2, 0, 3}, {0, 2, 3, 1}});
    if (n == 5) return FiniteGroup::from_perm_generators({{1, 2, 0, 3, 4}, {0, 1, 3, 4, 2}});
    throw Error("alternating construction supports n = 4 or 5");
}

/// Quaternion group of order 8 as 2x2 matrices over F3
/// (i = [[0,-1],[1,0]], j = [[1,1],[1,-1]]).
inline GroupPtr quaternion_group() {
    FieldPtr F3 = SmallField::prime(3);
    return FiniteGroup::from_mat_generators(F3, 2, {{0, 2, 1, 0}, {1, 1, 1, 2}});
}

/// SL(2, 3), generated by the two elementary transvections.
inline GroupPtr sl2_f3() {
    FieldPtr F3 = SmallField::prime(3);
    return FiniteGroup::from_mat_generators(F3, 2, {{1, 1, 0, 1}, {1, 0, 1, 1}});
}

/// Heisenberg group over F3: upper unitriangular 3x3 matrices, order 27.
inline GroupPtr heisenberg_f3() {
    FieldPtr F3 = SmallField::prime(3);
    return FiniteGroup::from_mat_generators(F3, 3,
                                            {{1, 1, 0, 0, 1, 0, 0, 0, 1},
                                             {1, 0, 0, 0, 1, 1, 0, 0, 1}});
}

namespace catalog_detail {

// Groups with normal form a^i b^j, a of order m, b^2 in <a>, built from the
// rewriting rule b a = a^t b and the value of b^2.
inline GroupPtr two_gen_order2m(long m, long t, long bsq_exp) {
    long n = 2 * m;
    auto idx = [&](long i, long j) { return j * m + i; };
    std::vector<std::vector<int>> tab(n, std::vector<int>(n));
    auto normal = [&](long i, long j) { // reduce a^i b^j with j possibly 2
        if (j >= 2) { j -= 2; i += bsq_exp; }
        i %= m;
        if (i < 0) i += m;
        return idx(i, j);
    };
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < 2; ++j)
            for (long k = 0; k < m; ++k)
                for (long l = 0; l < 2; ++l) {
                    // (a^i b^j)(a^k b^l) = a^{i + t^j k} b^{j+l}
                    long shift = k;
                    if (j == 1) shift = (t * k) % m;
                    tab[idx(i, j)][idx(k, l)] = static_cast<int>(normal(i + shift, j + l));
                }
    std::vector<std::string> labels(n);
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < 2; ++j)
            labels[idx(i, j)] = "a" + std::to_string(i) + (j ? "b" : "");
    return FiniteGroup::from_table(std::move(tab), std::move(labels));
}

} // namespace catalog_detail

/// Generalized quaternion group of order 4m (a^(2m) = 1, b^2 = a^m,
/// b a b^-1 = a^-1). quaternion16 is m = 4.
inline GroupPtr generalized_quaternion(long m) {
    if (m < 2) throw Error("generalized quaternion needs m >= 2");
    return catalog_detail::two_gen_order2m(2 * m, 2 * m - 1, m);
}

inline GroupPtr semidihedral16() { return catalog_detail::two_gen_order2m(8, 3, 0); }
inline GroupPtr modular16() { return catalog_detail::two_gen_order2m(8, 5, 0); }
inline GroupPtr z4_semidirect_z4() {
    // a^4 = b^4 = 1, b a b^-1 = a^-1; normal form a^i b^j with j < 4
    long n = 16;
    auto idx = [&](long i, long j) { return j * 4 + i; };
    std::vector<std::vector<int>> tab(n, std::vector<int>(n));
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j)
            for (long k = 0; k < 4; ++k)
                for (long l = 0; l < 4; ++l) {
                    long shift = (j % 2 == 0) ? k : (4 - k) % 4;
                    tab[idx(i, j)][idx(k, l)] = static_cast<int>(idx((i + shift) % 4, (j + l) % 4));
                }
    return FiniteGroup::from_table(std::move(tab));
}

/// (Z4 x Z2) extended by an involution sending a -> ab, fixing b.
inline GroupPtr pauli_like16() {
    // normal form a^i b^j c^k, i < 4, j < 2, k < 2; c a = a b c, c b = b c
    long n = 16;
    auto idx = [&](long i, long j, long k) { return (k * 2 + j) * 4 + i; };
    std::vector<std::vector<int>> tab(n, std::vector<int>(n));
    for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 2; ++j)
            for (long k = 0; k < 2; ++k)
                for (long s = 0; s < 4; ++s)
                    for (long t = 0; t < 2; ++t)
                        for (long u = 0; u < 2; ++u) {
                            long jj = (j + t + (k ? s : 0)) % 2;
                            tab[idx(i, j, k)][idx(s, t, u)] =
                                static_cast<int>(idx((i + s) % 4, jj, (k + u) % 2));
                        }
    return FiniteGroup::from_table(std::move(tab));
}

/// Central product of A and B along the given central involutions:
/// (A x B) / <(zA, zB)>.
inline GroupPtr central_product_by_involutions(const GroupPtr& A, const GroupPtr& B, int zA, int zB) {
    if (A->element_order(zA) != 2 || B->element_order(zB) != 2)
        throw Error("central product glue elements must be involutions");
    GroupPtr P = direct_product(A, B);
    long nb = B->order();
    int glued = static_cast<int>(zA * nb + zB);
    std::vector<int> N{P->id(), glued};
    return quotient_by(P, N).group;
}

inline int unique_central_involution(const GroupPtr& G) {
    auto z = G->center_indices();
    int found = -1;
    for (int c : z)
        if (c != G->id() && G->element_order(c) == 2) {
            if (found >= 0) throw Error("center has several involutions");
            found = c;
        }
    if (found < 0) throw Error("center has no involution");
    return found;
}

/// Central product D8 * Q8 (extraspecial of order 32, minus type).
inline GroupPtr extraspecial32_minus() {
    GroupPtr D = dihedral_group(4), Q = quaternion_group();
    return central_product_by_involutions(D, Q, unique_central_involution(D),
                                          unique_central_involution(Q));
}

/// Central product D8 * D8 (extraspecial of order 32, plus type).
inline GroupPtr extraspecial32_plus() {
    GroupPtr D1 = dihedral_group(4), D2 = dihedral_group(4);
    return central_product_by_involutions(D1, D2, unique_central_involution(D1),
                                          unique_central_involution(D2));
}

/// Central product Z4 * D8 (order 16).
inline GroupPtr central_product_z4_d8() {
    GroupPtr Z = cyclic_group(4), D = dihedral_group(4);
    return central_product_by_involutions(Z, D, 2, unique_central_involution(D));
}

struct NamedGroup {
    std::string name;
    GroupPtr group;
};

/// All fourteen groups of order 16, in a fixed presentation order.
inline std::vector<NamedGroup> order16_all() {
    std::vector<NamedGroup> out;
    out.push_back({"Z16", cyclic_group(16)});
    out.push_back({"Z4xZ4", direct_product(cyclic_group(4), cyclic_group(4))});
    out.push_back({"(Z4xZ2):Z2", pauli_like16()});
    out.push_back({"Z4:Z4", z4_semidirect_z4()});
    out.push_back({"Z8xZ2", direct_product(cyclic_group(8), cyclic_group(2))});
    out.push_back({"M16", modular16()});
    out.push_back({"D16", dihedral_group(8)});
    out.push_back({"SD16", semidihedral16()});
    out.push_back({"Q16", generalized_quaternion(4)});
    out.push_back({"Z4xZ2xZ2", direct_product(direct_product(cyclic_group(4), cyclic_group(2)), cyclic_group(2))});
    out.push_back({"D8xZ2", direct_product(dihedral_group(4), cyclic_group(2))});
    out.push_back({"Q8xZ2", direct_product(quaternion_group(), cyclic_group(2))});
    out.push_back({"Z4*D8", central_product_z4_d8()});
    out.push_back({"Z2^4", direct_product(direct_product(cyclic_group(2), cyclic_group(2)),
                                          direct_product(cyclic_group(2), cyclic_group(2)))});
    return out;
}

/// Nonabelian groups of order <= 128 exercised by the invariance battery.
inline std::vector<NamedGroup> battery_groups() {
    std::vector<NamedGroup> out;
    out.push_back({"S3", symmetric_group(3)});
    out.push_back({"D8", dihedral_group(4)});
    out.push_back({"Q8", quaternion_group()});
    out.push_back({"D10", dihedral_group(5)});
    out.push_back({"A4", alternating_group(4)});
    out.push_back({"D12", dihedral_group(6)});
    out.push_back({"D16", dihedral_group(8)});
    out.push_back({"SD16", semidihedral16()});
    out.push_back({"M16", modular16()});
    out.push_back({"Q16", generalized_quaternion(4)});
    out.push_back({"Z4:Z4", z4_semidirect_z4()});
    out.push_back({"(Z4xZ2):Z2", pauli_like16()});
    out.push_back({"SL(2,3)", sl2_f3()});
    out.push_back({"S4", symmetric_group(4)});
    out.push_back({"Heis27", heisenberg_f3()});
    out.push_back({"D8*Q8", extraspecial32_minus()});
    out.push_back({"D8*D8", extraspecial32_plus()});
    out.push_back({"Q8xZ2", direct_product(quaternion_group(), cyclic_group(2))});
    out.push_back({"D8xZ2", direct_product(dihedral_group(4), cyclic_group(2))});
    out.push_back({"Q32", generalized_quaternion(8)});
    out.push_back({"D64", dihedral_group(32)});
    out.push_back({"S3xS3", direct_product(symmetric_group(3), symmetric_group(3))});
    out.push_back({"A5", alternating_group(5)});
    out.push_back({"S5", symmetric_group(5)});
    return out;
}

} // namespace charmult
