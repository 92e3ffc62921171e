#pragma once

// Unitary groups of rank one over quadratic extensions E/F of small prime
// fields, always with respect to the hyperbolic hermitian form with Gram
// matrix J = antidiag(1, 1).
//
// U(2) is generated by the diagonal torus diag(a, conj(a)^-1), the Weyl
// element J itself, and an upper unipotent with a trace-zero entry; the
// expected orders (q(q-1)(q+1)^2 for U, q(q^2-1) for SU, (q-1)|U| for the
// similitude group) are asserted after closure. The paired constructions,
// S(U x U) and its extension by the coordinate swap, live inside GL(4, E) as
// block matrices so that element payloads stay comparable across all three
// groups.

#include <string>
#include <utility>
#include <vector>

#include "charmult/character.hpp"
#include "charmult/errors.hpp"
#include "charmult/group.hpp"
#include "charmult/smallfield.hpp"

namespace charmult {

namespace unitary_detail {

inline Payload mat_mul(const SmallField& E, int d, const Payload& a, const Payload& b) {
    Payload r(d * d, 0);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            int aik = a[i * d + k];
            if (!aik) continue;
            for (int j = 0; j < d; ++j)
                r[i * d + j] =
                    static_cast<std::uint16_t>(E.add(r[i * d + j], E.mul(aik, b[k * d + j])));
        }
    return r;
}

inline Payload conj_transpose(const SmallField& E, int d, const Payload& a) {
    Payload r(d * d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r[j * d + i] = static_cast<std::uint16_t>(E.conj(a[i * d + j]));
    return r;
}

inline int det2(const SmallField& E, const Payload& a) {
    return E.sub(E.mul(a[0], a[3]), E.mul(a[1], a[2]));
}

inline Payload hyperbolic_gram(int d) {
    Payload J(d * d, 0);
    for (int i = 0; i < d; ++i) J[i * d + (d - 1 - i)] = 1;
    return J;
}

/// m is an isometry of the hyperbolic form: m* J m = J.
inline bool is_isometry(const SmallField& E, int d, const Payload& m) {
    Payload J = hyperbolic_gram(d);
    return mat_mul(E, d, conj_transpose(E, d, m), mat_mul(E, d, J, m)) == J;
}

/// Similitude factor t with m* J m = t J, or 0 if m is no similitude.
inline int similitude_factor(const SmallField& E, int d, const Payload& m) {
    Payload J = hyperbolic_gram(d);
    Payload W = mat_mul(E, d, conj_transpose(E, d, m), mat_mul(E, d, J, m));
    int t = W[d - 1]; // entry (0, d-1) of t*J
    Payload tJ(d * d, 0);
    for (int i = 0; i < d; ++i) tJ[i * d + (d - 1 - i)] = static_cast<std::uint16_t>(t);
    return W == tJ ? t : 0;
}

/// Smallest nonzero code with trace zero under conjugation.
inline int trace_zero_unit(const SmallField& E) {
    for (int z = 1; z < E.q(); ++z)
        if (E.trace_conj(z) == 0) return z;
    throw InternalError("no trace-zero unit in the extension");
}

} // namespace unitary_detail

/// Norm-one elements of E*, listed as consecutive powers of the canonical
/// generator g^(q-1) (g the least multiplicative generator of E*).
inline std::vector<int> norm_one_cycle(const FieldPtr& E) {
    if (!E->is_ext()) throw Error("norm-one cycle needs a quadratic extension");
    long q = E->base()->q();
    int z1 = E->pow(E->mult_generator(), q - 1);
    std::vector<int> out;
    int x = 1;
    for (long t = 0; t <= q; ++t) {
        out.push_back(x);
        x = E->mul(x, z1);
    }
    if (x != 1) throw InternalError("norm-one generator has wrong order");
    return out;
}

/// Discrete log of a norm-one element against norm_one_cycle order.
inline long norm_one_dlog(const FieldPtr& E, int v) {
    auto cyc = norm_one_cycle(E);
    for (std::size_t t = 0; t < cyc.size(); ++t)
        if (cyc[t] == v) return static_cast<long>(t);
    throw NotNormOne("element " + E->elem_str(v) + " has norm != 1");
}

/// U(2, q) in the hyperbolic basis.
inline GroupPtr unitary_group(const FieldPtr& E) {
    if (!E->is_ext()) throw Error("unitary group needs a quadratic extension");
    const SmallField& F = *E;
    long q = E->base()->q();
    int g = F.mult_generator();
    int z = unitary_detail::trace_zero_unit(F);
    std::vector<std::vector<int>> gens = {
        {g, 0, 0, F.inv(F.conj(g))}, // torus
        {0, 1, 1, 0},                // Weyl element
        {1, z, 0, 1},                // unipotent
    };
    GroupPtr U = FiniteGroup::from_mat_generators(E, 2, gens);
    if (U->order() != q * (q - 1) * (q + 1) * (q + 1))
        throw InternalError("unitary group closure has unexpected order");
    for (int i = 0; i < U->order(); ++i)
        if (!unitary_detail::is_isometry(F, 2, U->payload(i)))
            throw InternalError("non-isometry inside the unitary group");
    return U;
}

/// SU(2, q): determinant-one subgroup, generated by opposite unipotents and
/// the split torus of the base field.
inline GroupPtr special_unitary_group(const FieldPtr& E) {
    if (!E->is_ext()) throw Error("special unitary group needs a quadratic extension");
    const SmallField& F = *E;
    long q = E->base()->q();
    int z = unitary_detail::trace_zero_unit(F);
    // base-field codes embed into E as themselves
    int fb = q > 2 ? E->base()->mult_generator() : 1;
    std::vector<std::vector<int>> gens = {
        {1, z, 0, 1},
        {1, 0, z, 1},
        {fb, 0, 0, F.inv(fb)},
    };
    GroupPtr S = FiniteGroup::from_mat_generators(E, 2, gens);
    if (S->order() != q * (q * q - 1))
        throw InternalError("special unitary closure has unexpected order");
    for (int i = 0; i < S->order(); ++i)
        if (unitary_detail::det2(F, S->payload(i)) != 1)
            throw InternalError("determinant leaves the norm-one line");
    return S;
}

/// The full similitude group: isometries up to a base-field unit factor.
inline GroupPtr unitary_similitude_group(const FieldPtr& E) {
    if (!E->is_ext()) throw Error("similitude group needs a quadratic extension");
    const SmallField& F = *E;
    long q = E->base()->q();
    int g = F.mult_generator();
    int z = unitary_detail::trace_zero_unit(F);
    std::vector<std::vector<int>> gens = {
        {g, 0, 0, F.inv(F.conj(g))},
        {0, 1, 1, 0},
        {1, z, 0, 1},
        {g, 0, 0, g}, // scalar with similitude factor N(g), a generator of F*
    };
    GroupPtr G = FiniteGroup::from_mat_generators(E, 2, gens);
    long u = q * (q - 1) * (q + 1) * (q + 1);
    if (G->order() != u * (q - 1))
        throw InternalError("similitude group closure has unexpected order");
    return G;
}

/// S(U x U): pairs (a, b) of isometries with det(a) det(b) = 1, realized as
/// 4x4 block-diagonal matrices.
inline GroupPtr s_u_cross_u(const FieldPtr& E, const GroupPtr& U) {
    const SmallField& F = *E;
    std::vector<int> dets(U->order());
    for (int i = 0; i < U->order(); ++i) dets[i] = unitary_detail::det2(F, U->payload(i));
    std::vector<Payload> elems;
    for (int a = 0; a < U->order(); ++a)
        for (int b = 0; b < U->order(); ++b) {
            if (F.mul(dets[a], dets[b]) != 1) continue;
            Payload m(16, 0);
            const Payload& pa = U->payload(a);
            const Payload& pb = U->payload(b);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    m[i * 4 + j] = pa[i * 2 + j];
                    m[(2 + i) * 4 + 2 + j] = pb[i * 2 + j];
                }
            elems.push_back(std::move(m));
        }
    GroupPtr S = FiniteGroup::from_mat_list(E, 4, std::move(elems));
    long q = E->base()->q();
    if (S->order() != U->order() * U->order() / (q + 1))
        throw InternalError("det-one pair group has unexpected order");
    return S;
}

/// (U x U) extended by the coordinate swap, as 4x4 block matrices. Built
/// directly from generators so the payloads match s_u_cross_u.
inline GroupPtr swap_extension_group(const FieldPtr& E, const GroupPtr& U) {
    std::vector<std::vector<int>> gens;
    for (int g : U->generators()) {
        const Payload& m = U->payload(g);
        for (int off : {0, 2}) {
            std::vector<int> M(16, 0);
            M[0] = M[5] = M[10] = M[15] = 1;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) M[(off + i) * 4 + off + j] = m[i * 2 + j];
            gens.push_back(std::move(M));
        }
    }
    std::vector<int> P(16, 0);
    P[2] = P[7] = P[8] = P[13] = 1;
    gens.push_back(P);
    GroupPtr W = FiniteGroup::from_mat_generators(E, 4, gens, 200000);
    if (W->order() != 2 * U->order() * U->order())
        throw InternalError("swap extension has unexpected order");
    return W;
}

/// The linear character g -> zeta_(q+1)^(j * dlog det g) of a unitary group.
inline ClassFunction det_power_character(const FieldPtr& E, const GroupPtr& U, long j) {
    long q = E->base()->q();
    auto cyc = norm_one_cycle(E);
    std::vector<CycNum> v;
    v.reserve(U->num_classes());
    for (int c = 0; c < U->num_classes(); ++c) {
        int d = unitary_detail::det2(*E, U->payload(U->class_rep(c)));
        long t = norm_one_dlog(E, d);
        v.push_back(CycNum::from_root_sum(q + 1, {{j * t % (q + 1), Rat(1)}}));
    }
    return ClassFunction(U, std::move(v));
}

/// The order-two character of the norm-one circle, composed with det.
inline ClassFunction quadratic_det_character(const FieldPtr& E, const GroupPtr& U) {
    long q = E->base()->q();
    if ((q + 1) % 2 != 0)
        throw NoQuadraticCharacter("norm-one circle has odd order " + std::to_string(q + 1));
    return det_power_character(E, U, (q + 1) / 2);
}

/// The similitude factor as a linear character, valued in roots of unity of
/// order q - 1 via the least generator of the base field.
inline ClassFunction similitude_character(const FieldPtr& E, const GroupPtr& GU) {
    const SmallField& F = *E;
    long q = E->base()->q();
    int g0 = E->base()->mult_generator();
    std::vector<int> powers;
    {
        int x = 1;
        for (long t = 0; t + 1 < q; ++t) {
            powers.push_back(x);
            x = E->base()->mul(x, g0);
        }
    }
    std::vector<CycNum> v;
    v.reserve(GU->num_classes());
    for (int c = 0; c < GU->num_classes(); ++c) {
        int t = unitary_detail::similitude_factor(F, 2, GU->payload(GU->class_rep(c)));
        if (!t) throw NotInStabilizer("element is not a similitude");
        long dl = -1;
        for (std::size_t s = 0; s < powers.size(); ++s)
            if (powers[s] == t) { dl = static_cast<long>(s); break; }
        if (dl < 0) throw InternalError("similitude factor escapes the base field units");
        v.push_back(CycNum::from_root_sum(q - 1, {{dl % (q - 1), Rat(1)}}));
    }
    return ClassFunction(GU, std::move(v));
}

/// Indices of the unipotent subgroup {upper triangular, trace-zero entry}.
inline std::vector<int> unipotent_indices(const FieldPtr& E, const GroupPtr& U) {
    std::vector<int> out;
    for (int z = 0; z < E->q(); ++z) {
        if (E->trace_conj(z) != 0) continue;
        Payload m{1, static_cast<std::uint16_t>(z), 0, 1};
        auto idx = U->index_of_payload(m);
        if (!idx) throw InternalError("unipotent element missing from the group");
        out.push_back(*idx);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// A character is cuspidal when its restriction to the unipotent subgroup
/// contains no trivial component.
inline bool is_cuspidal(const FieldPtr& E, const GroupPtr& U, const ClassFunction& chi) {
    SubgroupRef N = make_subgroup(U, unipotent_indices(E, U));
    ClassFunction res = restrict_to(N, chi);
    return inner_product(res, trivial_character(N.sub)) == CycNum(0);
}

/// First cuspidal irreducible of degree q-1 that is moved by the quadratic
/// determinant twist; this is the representation the paired construction
/// needs.
inline ClassFunction pick_rho(const FieldPtr& E, const GroupPtr& U) {
    long q = E->base()->q();
    const CharacterTable& T = character_table(U);
    ClassFunction chi = quadratic_det_character(E, U);
    for (long i = 0; i < T.num_irr(); ++i) {
        if (T.degree(i) != q - 1) continue;
        if (!is_cuspidal(E, U, T.row(i))) continue;
        if (T.row(i) * chi == T.row(i)) continue;
        return T.row(i);
    }
    throw NoSuitableRho("no cuspidal degree q-1 row moved by the quadratic twist");
}

} // namespace charmult
