#pragma once

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "character.hpp"
#include "localfield.hpp"
#include "unitary.hpp"

namespace charmult {

/// Result of one named check: an exact decomposition plus boolean verdicts
/// and named integer statistics. `passed` is the conjunction of verdicts.
struct MultiplicityReport {
    std::string scenario;
    std::vector<std::string> inputs;
    std::vector<std::pair<long, long>> decomposition; // (table row, multiplicity)
    std::vector<std::pair<std::string, bool>> verdicts;
    std::vector<std::pair<std::string, long>> stats;
    double ms = 0.0;

    bool passed() const {
        for (const auto& [name, ok] : verdicts)
            if (!ok) return false;
        return true;
    }
    long stat(const std::string& name) const {
        for (const auto& [k, v] : stats)
            if (k == name) return v;
        throw InternalError("report has no statistic named " + name);
    }
    bool verdict(const std::string& name) const {
        for (const auto& [k, v] : verdicts)
            if (k == name) return v;
        throw InternalError("report has no verdict named " + name);
    }
};

/// Outcome of the Klein-quotient criterion for one (G, N, pi) configuration.
/// `witness` is the direct decomposition of pi restricted to N, which the
/// criterion verdict must reproduce. `n1` is the index-two kernel used by
/// the criterion and `pi1_row`/`pi2_row` are the two constituents of the
/// restriction to it, as rows of that subgroup's table.
struct KleinVerdict {
    enum Kind { FourDistinct, TwoCopies };
    Kind kind = TwoCopies;
    std::vector<std::pair<long, long>> witness;
    std::string case_label;
    std::vector<int> n1;
    long pi1_row = -1;
    long pi2_row = -1;
};

struct KleinHit {
    std::string name;
    GroupPtr group;
    std::vector<int> normal;
    long pi_row = -1;
    KleinVerdict verdict;
    bool construction_ok = false;
};

/// Side diagnostics for conjectural_multiplicity: whether the map satisfies
/// the normal-image / abelian-cokernel hypothesis the formula assumes.
struct ConjecturalContext {
    bool image_normal = false;
    bool cokernel_abelian = false;
    bool hypothesis_ok() const { return image_normal && cokernel_abelian; }
};

namespace mult_detail {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

inline long exact_nonneg(const CycNum& v) {
    if (!v.is_integer()) throw NotACharacter("inner product is not an integer: " + v.str());
    long m = rat_to_long(v.rational_value());
    if (m < 0) throw NotACharacter("inner product is negative");
    return m;
}

inline std::string group_desc(const GroupPtr& G) {
    return "order " + std::to_string(G->order()) + ", " + std::to_string(G->num_classes()) +
           " classes";
}

/// The Klein-four quotient data shared by the classifier and the search:
/// the quotient itself and its three nontrivial characters lifted to G,
/// in table order.
struct KleinFrame {
    QuotientResult qr;
    std::vector<ClassFunction> omega;
};

inline KleinFrame klein_frame(const GroupPtr& G, const std::vector<int>& N) {
    auto [qr, proj] = quotient_with_projection(G, N);
    if (qr.group->order() != 4 || qr.group->exponent() != 2)
        throw StructureFailed("quotient is not a Klein four group");
    KleinFrame fr;
    ClassFunction triv = trivial_character(G);
    for (const auto& lam : linear_characters(qr.group)) {
        ClassFunction w = pullback(proj, lam);
        if (w == triv) continue;
        fr.omega.push_back(std::move(w));
    }
    if (fr.omega.size() != 3) throw InternalError("Klein quotient with wrong character count");
    fr.qr = std::move(qr);
    return fr;
}

/// Conjugate of a class function on an index-two subgroup by a fixed outer
/// representative. Conjugation by the two cosets' representatives induces
/// the same character, so the choice of g does not matter.
inline ClassFunction outer_conjugate(const SubgroupRef& H, const ClassFunction& f) {
    const GroupPtr& G = H.parent;
    std::vector<char> in(G->order(), 0);
    for (int x : H.embed) in[x] = 1;
    int g = 0;
    while (g < G->order() && in[g]) ++g;
    if (g == G->order()) throw PreconditionFailed("subgroup is the whole group");
    int gi = G->inv(g);
    std::vector<int> pos(G->order(), -1);
    for (std::size_t t = 0; t < H.embed.size(); ++t) pos[H.embed[t]] = static_cast<int>(t);
    std::vector<CycNum> vals;
    vals.reserve(H.sub->num_classes());
    for (int c = 0; c < H.sub->num_classes(); ++c) {
        int p = H.embed[H.sub->class_rep(c)];
        int cp = G->mult(G->mult(g, p), gi);
        if (pos[cp] < 0) throw NotNormal("conjugation leaves the subgroup");
        vals.push_back(f(pos[cp]));
    }
    return ClassFunction(H.sub, std::move(vals));
}

/// Splits a 4x4 block-diagonal payload into its two 2x2 blocks; false when
/// either off-diagonal block is nonzero (the swapped coset).
inline bool split_blocks(const Payload& p, Payload& a, Payload& b) {
    for (int i : {2, 3, 6, 7, 8, 9, 12, 13})
        if (p[i]) return false;
    a = {p[0], p[1], p[4], p[5]};
    b = {p[10], p[11], p[14], p[15]};
    return true;
}

} // namespace mult_detail

/// The multiplicity the component-group formula predicts for the pair
/// (chi1 on the target, chi2 on the source): <chi2, pullback(f, chi1)>.
/// Always an exact nonnegative integer for irreducible inputs; when `diag`
/// is given it reports whether f has normal image with abelian cokernel,
/// the hypothesis under which the prediction is meaningful.
inline long conjectural_multiplicity(const GroupHom& f, const ClassFunction& chi1,
                                     const ClassFunction& chi2,
                                     ConjecturalContext* diag = nullptr) {
    if (chi2.group() != f.source()) throw GroupMismatch("second character lives off the source");
    if (diag) {
        auto [nrm, ab] = hom_image_normal_abelian_cokernel(f);
        diag->image_normal = nrm;
        diag->cokernel_abelian = ab;
    }
    return mult_detail::exact_nonneg(inner_product(chi2, pullback(f, chi1)));
}

/// For every irreducible chi1 of the target, the regular character of the
/// source must pair with pullback(f, chi1) to exactly chi1(1). This holds
/// for every homomorphism whatsoever; the check exercises the exact
/// arithmetic end to end and reports any violation.
inline MultiplicityReport regular_identity_check(const GroupHom& f) {
    mult_detail::Stopwatch sw;
    const CharacterTable& T = character_table(f.target());
    ClassFunction reg = regular_character(f.source());
    MultiplicityReport rep;
    rep.scenario = "regular-identity";
    rep.inputs = {"source " + mult_detail::group_desc(f.source()),
                  "target " + mult_detail::group_desc(f.target())};
    bool all = true;
    for (long i = 0; i < T.num_irr(); ++i) {
        long got = mult_detail::exact_nonneg(inner_product(reg, pullback(f, T.row(i))));
        rep.decomposition.push_back({i, got});
        if (got != T.degree(i)) all = false;
    }
    rep.verdicts = {{"regular_identity", all}};
    rep.stats = {{"rows", T.num_irr()}};
    rep.ms = sw.ms();
    return rep;
}

/// With chi2 fixed and chi1 running over the target's irreducibles, the
/// positive values of <chi2, pullback(f, chi1)> must all coincide. Requires
/// f to have normal image with abelian cokernel; the set may be empty when
/// chi2 does not factor through the image (reported via the `vacuous` stat).
inline MultiplicityReport constancy_check(const GroupHom& f, const ClassFunction& chi2) {
    mult_detail::Stopwatch sw;
    if (chi2.group() != f.source()) throw GroupMismatch("character lives off the source");
    auto [nrm, ab] = hom_image_normal_abelian_cokernel(f);
    if (!nrm || !ab) throw PreconditionFailed("image is not normal with abelian cokernel");
    const CharacterTable& T = character_table(f.target());
    MultiplicityReport rep;
    rep.scenario = "constancy";
    rep.inputs = {"source " + mult_detail::group_desc(f.source()),
                  "target " + mult_detail::group_desc(f.target())};
    std::set<long> seen;
    for (long i = 0; i < T.num_irr(); ++i) {
        long m = mult_detail::exact_nonneg(inner_product(chi2, pullback(f, T.row(i))));
        if (m == 0) continue;
        rep.decomposition.push_back({i, m});
        seen.insert(m);
    }
    rep.verdicts = {{"singleton_multiplicity_set", seen.size() <= 1}};
    rep.stats = {{"common_multiplicity", seen.empty() ? 0 : *seen.begin()},
                 {"contributing", static_cast<long>(rep.decomposition.size())},
                 {"vacuous", seen.empty() ? 1 : 0}};
    rep.ms = sw.ms();
    return rep;
}

/// Induction from a normal subgroup with abelian quotient: all constituents
/// of induce(pi, G) must carry the same multiplicity, and any two of them
/// must differ by tensoring with a linear character lifted from G/N.
inline MultiplicityReport induced_invariance_check(const SubgroupRef& N, const ClassFunction& pi) {
    mult_detail::Stopwatch sw;
    if (pi.group() != N.sub) throw GroupMismatch("character lives off the subgroup");
    auto [qr, proj] = quotient_with_projection(N.parent, N.embed);
    if (!qr.group->abelian()) throw PreconditionFailed("quotient is not abelian");
    const CharacterTable& T = character_table(N.parent);
    std::vector<long> mults = decompose(induce_from(N, pi), T);

    MultiplicityReport rep;
    rep.scenario = "induced-invariance";
    rep.inputs = {"group " + mult_detail::group_desc(N.parent),
                  "subgroup " + mult_detail::group_desc(N.sub)};
    std::vector<long> rows;
    bool uniform = true;
    long common = 0;
    for (long i = 0; i < T.num_irr(); ++i) {
        if (!mults[i]) continue;
        rep.decomposition.push_back({i, mults[i]});
        rows.push_back(i);
        if (common == 0) common = mults[i];
        else if (mults[i] != common) uniform = false;
    }

    std::vector<ClassFunction> lifted;
    for (const auto& lam : linear_characters(qr.group)) lifted.push_back(pullback(proj, lam));
    bool twist = true;
    for (std::size_t t = 1; t < rows.size(); ++t) {
        bool found = false;
        for (const auto& lam : lifted)
            if (T.row(rows[t]) == T.row(rows[0]) * lam) { found = true; break; }
        if (!found) { twist = false; break; }
    }

    rep.verdicts = {{"uniform_multiplicity", uniform}, {"twist_orbit", twist}};
    rep.stats = {{"common_multiplicity", common},
                 {"constituents", static_cast<long>(rows.size())},
                 {"quotient_order", qr.group->order()}};
    rep.ms = sw.ms();
    return rep;
}

/// Klein-quotient criterion. Hypotheses: G/N is Klein four and pi is fixed
/// by all three nontrivial twists from the quotient. The restriction of pi
/// to the index-two kernel N1 of the first twist splits as pi1 + pi2; the
/// verdict is FourDistinct when pi1 is fixed by the second twist restricted
/// to N1, TwoCopies when the twist exchanges pi1 and pi2. The direct
/// decomposition of pi over N is computed independently and must agree:
/// four distinct constituents versus one constituent twice.
inline KleinVerdict klein_classifier(const GroupPtr& G, const std::vector<int>& N,
                                     const ClassFunction& pi) {
    if (pi.group() != G) throw GroupMismatch("character lives off the group");
    mult_detail::KleinFrame fr = mult_detail::klein_frame(G, N);
    for (const auto& w : fr.omega)
        if (!(pi * w == pi)) throw HypothesisFailed("character moves under a quotient twist");

    std::vector<int> k1;
    for (int i = 0; i < G->order(); ++i)
        if (fr.omega[0](i) == CycNum(1)) k1.push_back(i);
    SubgroupRef H1 = make_subgroup(G, k1);
    const CharacterTable& T1 = character_table(H1.sub);
    std::vector<long> m1 = decompose(restrict_to(H1, pi), T1);
    std::vector<long> parts;
    for (long r = 0; r < T1.num_irr(); ++r) {
        if (!m1[r]) continue;
        if (m1[r] != 1) throw InternalError("index-two restriction is not multiplicity free");
        parts.push_back(r);
    }
    if (parts.size() != 2) throw InternalError("index-two restriction does not split in two");

    ClassFunction pi1 = T1.row(parts[0]);
    ClassFunction tw = pi1 * restrict_to(H1, fr.omega[1]);
    bool fixed = tw == pi1;
    if (!fixed && !(tw == T1.row(parts[1])))
        throw InternalError("twist leaves the restriction pair");

    KleinVerdict v;
    v.kind = fixed ? KleinVerdict::FourDistinct : KleinVerdict::TwoCopies;
    v.case_label = fixed ? "(i)" : "(ii)";
    v.n1 = std::move(k1);
    v.pi1_row = parts[0];
    v.pi2_row = parts[1];

    SubgroupRef NR = make_subgroup(G, N);
    std::vector<long> mN = decompose(restrict_to(NR, pi), character_table(NR.sub));
    long count = 0, maxm = 0;
    for (long r = 0; r < static_cast<long>(mN.size()); ++r) {
        if (!mN[r]) continue;
        v.witness.push_back({r, mN[r]});
        ++count;
        maxm = std::max(maxm, mN[r]);
    }
    bool four = count == 4 && maxm == 1;
    bool two = count == 1 && maxm == 2;
    if (fixed ? !four : !two)
        throw InternalError("criterion disagrees with the direct decomposition");
    return v;
}

namespace mult_detail {

/// The construction route behind a TwoCopies verdict: pi must be induced
/// from pi1 on the index-two kernel, and the outer conjugate of pi1 must be
/// its twist by the second character (and genuinely different from pi1).
inline bool construction_route_ok(const GroupPtr& G, const KleinFrame& fr, const KleinVerdict& v,
                                  const ClassFunction& pi) {
    SubgroupRef H1 = make_subgroup(G, v.n1);
    const CharacterTable& T1 = character_table(H1.sub);
    ClassFunction pi1 = T1.row(v.pi1_row);
    if (!(induce_from(H1, pi1) == pi)) return false;
    ClassFunction tw = pi1 * restrict_to(H1, fr.omega[1]);
    if (tw == pi1) return false;
    return outer_conjugate(H1, pi1) == tw;
}

} // namespace mult_detail

/// Exhaustive sweep: every normal subgroup with Klein four quotient, every
/// irreducible fixed by all three twists, classified; TwoCopies hits also
/// get the induced-construction route verified.
inline std::vector<KleinHit> klein_search(const std::vector<NamedGroup>& catalog) {
    std::vector<KleinHit> hits;
    for (const auto& ng : catalog) {
        const GroupPtr& G = ng.group;
        const CharacterTable& T = character_table(G);
        for (const auto& N : normal_subgroups(G)) {
            if (4 * static_cast<long>(N.size()) != G->order()) continue;
            mult_detail::KleinFrame fr;
            try {
                fr = mult_detail::klein_frame(G, N);
            } catch (const StructureFailed&) {
                continue; // cyclic quotient of order four
            }
            for (long r = 0; r < T.num_irr(); ++r) {
                const ClassFunction& pi = T.row(r);
                bool invariant = true;
                for (const auto& w : fr.omega)
                    if (!(pi * w == pi)) { invariant = false; break; }
                if (!invariant) continue;
                KleinHit hit;
                hit.name = ng.name;
                hit.group = G;
                hit.normal = N;
                hit.pi_row = r;
                hit.verdict = klein_classifier(G, N, pi);
                hit.construction_ok =
                    hit.verdict.kind == KleinVerdict::FourDistinct ||
                    mult_detail::construction_route_ok(G, fr, hit.verdict, pi);
                hits.push_back(std::move(hit));
            }
        }
    }
    return hits;
}

/// The residue-field shadow of the multiplicity-two construction, over the
/// hyperbolic plane. Let rho be a cuspidal irreducible of U = U(2, q) moved
/// by the quadratic determinant twist chi, and put sigma = rho (x) rho.chi
/// on U x U. The swap extension Gamma exchanges the factors, so sigma and
/// its swap conjugate rho.chi (x) rho are inequivalent on U x U and the
/// induced character of Gamma is irreducible; on the det-one pair subgroup
/// S the two conjugates agree, and every constituent of the restriction to
/// S appears with multiplicity exactly two.
///
/// U x U sits outside the table cap, so nothing is decomposed there: sigma
/// lives as a matrix of values over pairs of U-classes, the induced
/// character is written down classwise on Gamma via the index-two formula,
/// and only S (within cap) gets its own table.
inline MultiplicityReport finite_shadow_mult_two(long q, int d = 1) {
    mult_detail::Stopwatch sw;
    if (d != 1) throw UnsupportedCase("only the rank-one shadow is implemented");
    if (q < 2) throw PreconditionFailed("residue field size must be at least 2");
    if (q % 2 == 0)
        throw NoQuadraticCharacter("norm-one circle has odd order " + std::to_string(q + 1));
    if (!dixon_detail::is_prime(q))
        throw UnsupportedCase("prime-power residue fields are not wired in");
    long u_order = q * (q - 1) * (q + 1) * (q + 1);
    if (u_order * u_order / (q + 1) > kTableLimit)
        throw ClosureCapExceeded("det-one pair group exceeds the table cap");

    FieldPtr E = SmallField::quadratic_ext(SmallField::prime(q));
    GroupPtr U = unitary_group(E);
    const CharacterTable& TU = character_table(U);
    ClassFunction rho = pick_rho(E, U);
    ClassFunction rhochi = rho * quadratic_det_character(E, U);
    long rho_row = -1;
    for (long i = 0; i < TU.num_irr(); ++i)
        if (TU.row(i) == rho) { rho_row = i; break; }
    bool rho_qualifies = is_cuspidal(E, U, rho) && !(rhochi == rho);

    // sigma(a, b) = rho(a) rho.chi(b) over pairs of U-classes; the swapped
    // conjugate reads the same matrix transposed
    long nc = U->num_classes();
    std::vector<std::vector<CycNum>> sig(nc, std::vector<CycNum>(nc, CycNum(0)));
    for (long a = 0; a < nc; ++a)
        for (long b = 0; b < nc; ++b)
            sig[a][b] = rho.on_class(static_cast<int>(a)) * rhochi.on_class(static_cast<int>(b));

    CycNum ip_self(0), ip_swap(0);
    for (long a = 0; a < nc; ++a)
        for (long b = 0; b < nc; ++b) {
            CycNum w(Rat(U->class_size(static_cast<int>(a))) *
                     Rat(U->class_size(static_cast<int>(b))));
            ip_self += w * sig[a][b] * sig[a][b].conj();
            ip_swap += w * sig[a][b] * sig[b][a].conj();
        }
    CycNum den(Rat(1, u_order) * Rat(1, u_order));
    bool sigma_irreducible = ip_self * den == CycNum(1);
    bool swap_moves_sigma = ip_swap * den == CycNum(0);

    // induced character on the swap extension: sigma(a,b) + sigma(b,a) on
    // the block-diagonal part, zero on the swapped coset
    GroupPtr gam = swap_extension_group(E, U);
    std::vector<CycNum> pv;
    pv.reserve(gam->num_classes());
    for (int c = 0; c < gam->num_classes(); ++c) {
        Payload a, b;
        if (!mult_detail::split_blocks(gam->payload(gam->class_rep(c)), a, b)) {
            pv.push_back(CycNum(0));
            continue;
        }
        auto ia = U->index_of_payload(a), ib = U->index_of_payload(b);
        if (!ia || !ib) throw InternalError("block-diagonal element escapes the paired factors");
        pv.push_back(sig[U->class_of(*ia)][U->class_of(*ib)] +
                     sig[U->class_of(*ib)][U->class_of(*ia)]);
    }
    ClassFunction pit(gam, std::move(pv));
    bool pit_irreducible = inner_product(pit, pit) == CycNum(1);

    GroupPtr S = s_u_cross_u(E, U);
    std::vector<int> emb(S->order());
    for (int i = 0; i < S->order(); ++i) {
        auto ix = gam->index_of_payload(S->payload(i));
        if (!ix) throw InternalError("det-one pair is missing from the swap extension");
        emb[i] = *ix;
    }
    SubgroupRef SR{gam, S, std::move(emb)};
    const CharacterTable& TS = character_table(S);
    std::vector<long> mults = decompose(restrict_to(SR, pit), TS);

    MultiplicityReport rep;
    rep.scenario = "finite-shadow-mult-two";
    rep.inputs = {"q=" + std::to_string(q), "unitary " + mult_detail::group_desc(U),
                  "pair subgroup " + mult_detail::group_desc(S),
                  "extension " + mult_detail::group_desc(gam)};
    bool all_two = true;
    for (long r = 0; r < TS.num_irr(); ++r) {
        if (!mults[r]) continue;
        rep.decomposition.push_back({r, mults[r]});
        if (mults[r] != 2) all_two = false;
    }
    if (rep.decomposition.empty()) all_two = false;

    // the two conjugates of sigma restrict to the same class function on S
    bool swap_agrees = true;
    for (int c = 0; c < S->num_classes() && swap_agrees; ++c) {
        Payload a, b;
        if (!mult_detail::split_blocks(S->payload(S->class_rep(c)), a, b))
            throw InternalError("pair subgroup contains a swapped element");
        int ca = U->class_of(*U->index_of_payload(a));
        int cb = U->class_of(*U->index_of_payload(b));
        if (!(sig[ca][cb] == sig[cb][ca])) swap_agrees = false;
    }

    // reciprocity, with the induction side computed by class fusion
    bool frobenius = true;
    for (const auto& [r, m] : rep.decomposition) {
        CycNum ip = inner_product(pit, induce_from(SR, TS.row(r)));
        if (!(ip == CycNum(Rat(m)))) { frobenius = false; break; }
    }

    rep.verdicts = {{"rho_cuspidal_and_moved", rho_qualifies},
                    {"sigma_irreducible", sigma_irreducible},
                    {"swap_moves_sigma", swap_moves_sigma},
                    {"induced_irreducible", pit_irreducible},
                    {"multiplicities_all_two", all_two},
                    {"swap_restrictions_agree", swap_agrees},
                    {"frobenius_reciprocity", frobenius}};
    rep.stats = {{"rho_row", rho_row},
                 {"sigma_degree", (q - 1) * (q - 1)},
                 {"induced_degree", 2 * (q - 1) * (q - 1)},
                 {"constituents", static_cast<long>(rep.decomposition.size())},
                 {"extension_classes", gam->num_classes()},
                 {"pair_classes", S->num_classes()}};
    rep.ms = sw.ms();
    return rep;
}

/// Order of the group of similitude valuations modulo norms at an odd
/// prime: two when a uniformizer can appear as a similitude scalar of the
/// rank-n form, one otherwise.
inline long padic_similitude_quotient_order(long p, long n) {
    if (n < 1) throw PreconditionFailed("rank must be positive");
    PadicCtx C(p, 2);
    return is_similitude_scalar(C, 1, 1, n) ? 2 : 1;
}

/// Restriction survey from the similitude group to the isometry group over
/// the residue field: decomposes every irreducible and reports the largest
/// multiplicity (expected one) and the largest component count, alongside
/// the valuation parity of the similitude quotient at p = q.
inline MultiplicityReport gu_u_restriction_survey(long q, int n) {
    mult_detail::Stopwatch sw;
    if (n < 1) throw PreconditionFailed("rank must be positive");
    if (!dixon_detail::is_prime(q) || q == 2)
        throw UnsupportedCase("survey needs an odd prime residue field");
    if (n > 2) throw ClosureCapExceeded("rank above two exceeds the table cap");

    FieldPtr E = SmallField::quadratic_ext(SmallField::prime(q));
    GroupPtr GU;
    std::vector<int> uidx;
    if (n == 1) {
        std::vector<Payload> all;
        for (int x = 1; x < E->q(); ++x) all.push_back(Payload{static_cast<std::uint16_t>(x)});
        GU = FiniteGroup::from_mat_list(E, 1, std::move(all));
        for (int i = 0; i < GU->order(); ++i) {
            int x = GU->payload(i)[0];
            if (E->mul(x, E->conj(x)) == 1) uidx.push_back(i);
        }
    } else {
        GU = unitary_similitude_group(E);
        for (int i = 0; i < GU->order(); ++i)
            if (unitary_detail::similitude_factor(*E, 2, GU->payload(i)) == 1) uidx.push_back(i);
    }
    SubgroupRef UR = make_subgroup(GU, std::move(uidx));
    const CharacterTable& TG = character_table(GU);
    const CharacterTable& TU = character_table(UR.sub);

    long max_mult = 0, max_parts = 0;
    for (long i = 0; i < TG.num_irr(); ++i) {
        std::vector<long> m = decompose(restrict_to(UR, TG.row(i)), TU);
        long parts = 0;
        for (long v : m) {
            if (!v) continue;
            ++parts;
            max_mult = std::max(max_mult, v);
        }
        max_parts = std::max(max_parts, parts);
    }
    long quotient_order = padic_similitude_quotient_order(q, n);

    MultiplicityReport rep;
    rep.scenario = "similitude-restriction-survey";
    rep.inputs = {"q=" + std::to_string(q), "n=" + std::to_string(n),
                  "similitude group " + mult_detail::group_desc(GU),
                  "isometry group " + mult_detail::group_desc(UR.sub)};
    rep.verdicts = {{"multiplicity_free", max_mult == 1},
                    {"padic_parity", quotient_order == (n % 2 == 0 ? 2 : 1)}};
    rep.stats = {{"rows", TG.num_irr()},
                 {"max_multiplicity", max_mult},
                 {"max_components", max_parts},
                 {"padic_quotient_order", quotient_order}};
    rep.ms = sw.ms();
    return rep;
}

// ---- composite local-field suites ----

/// Full check of the model chain p L^dual <= L <= L^dual at one block size:
/// inclusions, biduality, the two hermitian residue quotients, the five
/// identities of the duality similitude, the reduction swap diagram, and
/// surjectivity of det onto the norm-one units at precision two.
inline MultiplicityReport lattice_duality_report(long p, long prec, int d) {
    mult_detail::Stopwatch sw;
    if (d < 1) throw PreconditionFailed("block size must be positive");
    // dualizing twice costs two valuation levels of headroom
    if (prec < 4) throw PreconditionFailed("chain verification needs precision at least four");
    PadicCtx C(p, static_cast<int>(prec));
    HermSpace V = HermSpace::hyperbolic(C, 2 * d);
    Lattice L = model_lattice(C, d);
    Lattice Lv = dual_lattice(L, V);

    bool chain = Lv.contains_lattice(L) && L.contains_lattice(Lv.scaled(1));
    bool bidual = dual_lattice(Lv, V) == L;

    QuotientHermitian outer = quotient_hermitian(Lv, L, V);
    QuotientHermitian inner = quotient_hermitian(L, Lv.scaled(1), V);
    long res_count = 1;
    for (int i = 0; i < 2 * d; ++i) res_count *= p * p;
    bool quotients_ok = !outer.degenerate && !inner.degenerate && outer.dim == 2 * d &&
                        inner.dim == 2 * d && outer.element_count == res_count &&
                        inner.element_count == res_count && outer.res->q() == p * p &&
                        inner.res->q() == p * p;

    DualityReport dual = verify_duality_similitude(C, d);
    SwapReport swap = verify_swap_diagram(C, d);

    PadicCtx C2(p, 2);
    LatticeChain ch2 = LatticeChain::make(C2, d);
    std::vector<UE> units = e1_elements(C2);
    bool det_onto = true;
    for (const UE& t : units) {
        EMat g = torus_element(ch2, 0, hilbert90_lift(C2, t));
        ScaledUE dv = g.det();
        if (!ch2.stabilizes(g) || dv.shift != 0 || !(dv.u == t)) {
            det_onto = false;
            break;
        }
    }

    MultiplicityReport rep;
    rep.scenario = "lattice-duality";
    rep.inputs = {"p=" + std::to_string(p), "precision=" + std::to_string(prec),
                  "d=" + std::to_string(d)};
    if (!swap.first_failure.empty()) rep.inputs.push_back("swap failure: " + swap.first_failure);
    rep.verdicts = {{"chain_inclusions", chain},
                    {"double_dual_identity", bidual},
                    {"residue_quotients_hermitian", quotients_ok},
                    {"similitude_scale", dual.similitude_ok},
                    {"maps_lattice_to_dual", dual.lattice_to_dual},
                    {"square_is_scalar", dual.square_is_scalar},
                    {"inverse_relation", dual.inverse_relation},
                    {"square_scales_lattice", dual.square_scales_lattice},
                    {"swap_diagram", swap.pass()},
                    {"determinant_surjective", det_onto}};
    rep.stats = {{"quotient_dim", outer.dim},
                 {"quotient_elements", outer.element_count},
                 {"swap_tested", swap.tested},
                 {"swap_failures", swap.failures},
                 {"norm_one_units", static_cast<long>(units.size())}};
    rep.ms = sw.ms();
    return rep;
}

/// Counts the norm-one units at every precision up to `prec` against the
/// unramified formula (p+1) p^(N-1), then checks each quotient by r-th
/// powers for small r: cyclic of order gcd(r, group order), with even order
/// exactly when r is even.
inline MultiplicityReport norm_one_report(long p, long prec) {
    mult_detail::Stopwatch sw;
    if (prec < 1) throw PreconditionFailed("precision must be positive");
    bool counts_ok = true;
    long full = p + 1; // group order at the top precision
    for (long N = 1; N <= prec; ++N) {
        PadicCtx C(p, static_cast<int>(N));
        long expected = p + 1;
        for (long i = 1; i < N; ++i) expected *= p;
        if (static_cast<long>(e1_elements(C).size()) != expected) counts_ok = false;
        full = expected;
    }

    PadicCtx C(p, static_cast<int>(prec));
    std::vector<long> exps = {1, 2, 3, 4, 5, 6};
    if (p > 6) exps.push_back(p);
    bool cyclic_ok = true, orders_ok = true, parity_ok = true;
    for (long r : exps) {
        E1Quotient q = e1_mod_rth_powers(C, r);
        if (!q.cyclic) cyclic_ok = false;
        if (q.order != std::gcd(r, full)) orders_ok = false;
        if ((q.order % 2 == 0) != (r % 2 == 0)) parity_ok = false;
    }

    MultiplicityReport rep;
    rep.scenario = "norm-one-units";
    rep.inputs = {"p=" + std::to_string(p), "precision=" + std::to_string(prec)};
    rep.verdicts = {{"unit_counts", counts_ok},
                    {"power_quotients_cyclic", cyclic_ok},
                    {"quotient_orders_gcd", orders_ok},
                    {"even_exponent_parity", parity_ok}};
    rep.stats = {{"group_order", full},
                 {"exponents_checked", static_cast<long>(exps.size())}};
    rep.ms = sw.ms();
    return rep;
}

// ---- randomized homomorphism battery ----

struct HomCase {
    std::string name;
    GroupHom hom;
};

/// Mixed pool of groups of order at most 64 for the randomized batteries.
inline std::vector<NamedGroup> hom_pool() {
    std::vector<NamedGroup> out;
    out.push_back({"Z2", cyclic_group(2)});
    out.push_back({"Z3", cyclic_group(3)});
    out.push_back({"Z4", cyclic_group(4)});
    out.push_back({"Z6", cyclic_group(6)});
    out.push_back({"Z8", cyclic_group(8)});
    out.push_back({"Z12", cyclic_group(12)});
    out.push_back({"Z2xZ2", klein_group()});
    out.push_back({"S3", symmetric_group(3)});
    out.push_back({"D8", dihedral_group(4)});
    out.push_back({"Q8", quaternion_group()});
    out.push_back({"D12", dihedral_group(6)});
    out.push_back({"A4", alternating_group(4)});
    out.push_back({"D16", dihedral_group(8)});
    out.push_back({"SD16", semidihedral16()});
    out.push_back({"Q16", generalized_quaternion(4)});
    out.push_back({"SL(2,3)", sl2_f3()});
    out.push_back({"S4", symmetric_group(4)});
    out.push_back({"Heis27", heisenberg_f3()});
    out.push_back({"D8*Q8", extraspecial32_minus()});
    out.push_back({"Q8xZ2", direct_product(quaternion_group(), cyclic_group(2))});
    out.push_back({"S3xS3", direct_product(symmetric_group(3), symmetric_group(3))});
    out.push_back({"A5", alternating_group(5)});
    return out;
}

/// Deterministic battery of homomorphisms drawn from a pool: trivial maps,
/// cyclic parametrizations by single target elements, inner automorphisms,
/// power endomorphisms of abelian groups, and quotient projections. The
/// candidate set is fixed by the pool; `seed` only shuffles which `want`
/// of them are materialized, with a self-contained Fisher-Yates so the
/// selection is identical on every platform.
inline std::vector<HomCase> hom_battery(const std::vector<NamedGroup>& pool, int want,
                                        unsigned seed) {
    struct Cand {
        int kind, a, b, x;
    };
    std::vector<Cand> cands;
    const int P = static_cast<int>(pool.size());
    for (int a = 0; a < P; ++a)
        for (int b = 0; b < P; ++b) cands.push_back({0, a, b, 0});
    for (int b = 0; b < P; ++b)
        for (int x = 0; x < pool[b].group->order(); ++x) cands.push_back({1, -1, b, x});
    for (int a = 0; a < P; ++a)
        for (int x = 0; x < pool[a].group->order(); ++x) cands.push_back({2, a, a, x});
    for (int a = 0; a < P; ++a)
        if (pool[a].group->abelian())
            for (int k = 2; k <= 5; ++k) cands.push_back({3, a, a, k});
    std::vector<std::vector<std::vector<int>>> normals(P);
    for (int a = 0; a < P; ++a) {
        for (auto& N : normal_subgroups(pool[a].group))
            if (static_cast<long>(N.size()) > 1 &&
                static_cast<long>(N.size()) < pool[a].group->order())
                normals[a].push_back(std::move(N));
        for (int x = 0; x < static_cast<int>(normals[a].size()); ++x)
            cands.push_back({4, a, -1, x});
    }

    std::mt19937 rng(seed);
    for (std::size_t i = cands.size(); i > 1; --i)
        std::swap(cands[i - 1], cands[rng() % i]);

    std::vector<HomCase> out;
    for (const Cand& c : cands) {
        if (static_cast<int>(out.size()) >= want) break;
        switch (c.kind) {
        case 0: {
            const GroupPtr& A = pool[c.a].group;
            const GroupPtr& B = pool[c.b].group;
            std::vector<int> img(A->order(), B->id());
            out.push_back({"trivial " + pool[c.a].name + " -> " + pool[c.b].name,
                           GroupHom(A, B, std::move(img))});
            break;
        }
        case 1: {
            const GroupPtr& B = pool[c.b].group;
            long n = B->element_order(c.x);
            GroupPtr Zn = cyclic_group(n);
            int g = 0;
            for (int i = 0; i < Zn->order(); ++i)
                if (Zn->element_order(i) == n) {
                    g = i;
                    break;
                }
            std::vector<int> img(Zn->order());
            for (long k = 0; k < n; ++k) img[Zn->power(g, k)] = B->power(c.x, k);
            out.push_back({"Z" + std::to_string(n) + " -> " + pool[c.b].name + " at " +
                               B->label(c.x),
                           GroupHom(Zn, B, std::move(img))});
            break;
        }
        case 2: {
            const GroupPtr& A = pool[c.a].group;
            std::vector<int> img(A->order());
            int xi = A->inv(c.x);
            for (int i = 0; i < A->order(); ++i) img[i] = A->mult(A->mult(c.x, i), xi);
            out.push_back({"inner automorphism of " + pool[c.a].name + " by " + A->label(c.x),
                           GroupHom(A, A, std::move(img))});
            break;
        }
        case 3: {
            const GroupPtr& A = pool[c.a].group;
            std::vector<int> img(A->order());
            for (int i = 0; i < A->order(); ++i) img[i] = A->power(i, c.x);
            out.push_back({"power " + std::to_string(c.x) + " endomorphism of " + pool[c.a].name,
                           GroupHom(A, A, std::move(img))});
            break;
        }
        default: {
            const GroupPtr& A = pool[c.a].group;
            auto [qr, proj] = quotient_with_projection(A, normals[c.a][c.x]);
            out.push_back({pool[c.a].name + " onto quotient of order " +
                               std::to_string(qr.group->order()),
                           std::move(proj)});
            break;
        }
        }
    }
    return out;
}

// ---- composite suites over the batteries ----

/// Regular-representation identity across a randomized battery: for every
/// map f and every irreducible chi of the target, <reg, pullback(f, chi)>
/// equals chi(1).
inline MultiplicityReport regular_identity_suite(int want = 200, unsigned seed = 20260815) {
    mult_detail::Stopwatch sw;
    std::vector<HomCase> cases = hom_battery(hom_pool(), want, seed);
    long rows = 0, failures = 0;
    std::string first;
    for (const HomCase& c : cases) {
        MultiplicityReport r = regular_identity_check(c.hom);
        rows += r.stat("rows");
        if (!r.passed()) {
            ++failures;
            if (first.empty()) first = c.name;
        }
    }
    MultiplicityReport rep;
    rep.scenario = "regular-identity-battery";
    rep.inputs = {"maps=" + std::to_string(cases.size()), "seed=" + std::to_string(seed)};
    if (!first.empty()) rep.inputs.push_back("first failure: " + first);
    rep.verdicts = {{"zero_failures", failures == 0},
                    {"battery_full", static_cast<int>(cases.size()) >= want}};
    rep.stats = {{"maps", static_cast<long>(cases.size())},
                 {"characters", rows},
                 {"failures", failures}};
    rep.ms = sw.ms();
    return rep;
}

/// Constancy across every battery map whose image is normal with abelian
/// cokernel: for each fixed irreducible of the source the positive
/// multiplicities form a singleton set.
inline MultiplicityReport constancy_suite(int want = 200, unsigned seed = 20260815) {
    mult_detail::Stopwatch sw;
    std::vector<HomCase> cases = hom_battery(hom_pool(), want, seed);
    long eligible = 0, checks = 0, vacuous = 0, failures = 0;
    std::string first;
    for (const HomCase& c : cases) {
        auto [nrm, ab] = hom_image_normal_abelian_cokernel(c.hom);
        if (!nrm || !ab) continue;
        ++eligible;
        const CharacterTable& TS = character_table(c.hom.source());
        for (long i = 0; i < TS.num_irr(); ++i) {
            MultiplicityReport r = constancy_check(c.hom, TS.row(i));
            ++checks;
            vacuous += r.stat("vacuous");
            if (!r.passed()) {
                ++failures;
                if (first.empty()) first = c.name;
            }
        }
    }
    MultiplicityReport rep;
    rep.scenario = "constancy-battery";
    rep.inputs = {"maps=" + std::to_string(cases.size()), "seed=" + std::to_string(seed)};
    if (!first.empty()) rep.inputs.push_back("first failure: " + first);
    rep.verdicts = {{"zero_failures", failures == 0}, {"battery_nonempty", eligible > 0}};
    rep.stats = {{"maps", static_cast<long>(cases.size())},
                 {"eligible", eligible},
                 {"checks", checks},
                 {"vacuous_sets", vacuous},
                 {"failures", failures}};
    rep.ms = sw.ms();
    return rep;
}

/// Constancy across the inclusion of the determinant-one isometries into
/// the full isometry group of the hyperbolic plane over F_(q^2). Every
/// multiplicity set here is nonvacuous.
inline MultiplicityReport su_u_constancy(long q = 3) {
    mult_detail::Stopwatch sw;
    FieldPtr E = SmallField::quadratic_ext(SmallField::prime(q));
    GroupPtr U = unitary_group(E);
    std::vector<int> det1;
    for (int i = 0; i < U->order(); ++i)
        if (unitary_detail::det2(*E, U->payload(i)) == 1) det1.push_back(i);
    SubgroupRef S = make_subgroup(U, det1);
    GroupHom inc(S.sub, U, S.embed);

    const CharacterTable& TS = character_table(S.sub);
    long failures = 0, vacuous = 0, max_common = 0;
    for (long i = 0; i < TS.num_irr(); ++i) {
        MultiplicityReport r = constancy_check(inc, TS.row(i));
        vacuous += r.stat("vacuous");
        max_common = std::max(max_common, r.stat("common_multiplicity"));
        if (!r.passed()) ++failures;
    }
    MultiplicityReport rep;
    rep.scenario = "constancy-det-one";
    rep.inputs = {"q=" + std::to_string(q), "isometry group " + mult_detail::group_desc(U),
                  "det-one subgroup of order " + std::to_string(S.sub->order())};
    rep.verdicts = {{"zero_failures", failures == 0}, {"all_nonvacuous", vacuous == 0}};
    rep.stats = {{"rows", TS.num_irr()},
                 {"failures", failures},
                 {"max_common_multiplicity", max_common}};
    rep.ms = sw.ms();
    return rep;
}

/// Induction invariance across a named catalog: every normal subgroup with
/// abelian quotient, every irreducible of the subgroup.
inline MultiplicityReport invariance_suite(const std::vector<NamedGroup>& catalog,
                                           long max_order = 128) {
    mult_detail::Stopwatch sw;
    long groups = 0, configs = 0, failures = 0;
    std::string first;
    for (const NamedGroup& ng : catalog) {
        const GroupPtr& G = ng.group;
        if (G->order() > max_order) continue;
        ++groups;
        for (const auto& Nidx : normal_subgroups(G)) {
            if (static_cast<long>(Nidx.size()) == G->order()) continue;
            if (!quotient_by(G, Nidx).group->abelian()) continue;
            SubgroupRef N = make_subgroup(G, Nidx);
            const CharacterTable& TN = character_table(N.sub);
            for (long r = 0; r < TN.num_irr(); ++r) {
                MultiplicityReport rep = induced_invariance_check(N, TN.row(r));
                ++configs;
                if (!rep.passed()) {
                    ++failures;
                    if (first.empty())
                        first = ng.name + " with kernel of order " +
                                std::to_string(Nidx.size());
                }
            }
        }
    }
    MultiplicityReport rep;
    rep.scenario = "induced-invariance-battery";
    rep.inputs = {"catalog groups=" + std::to_string(catalog.size()),
                  "max order=" + std::to_string(max_order)};
    if (!first.empty()) rep.inputs.push_back("first failure: " + first);
    rep.verdicts = {{"zero_failures", failures == 0}, {"battery_nonempty", configs > 0}};
    rep.stats = {{"groups", groups}, {"configurations", configs}, {"failures", failures}};
    rep.ms = sw.ms();
    return rep;
}

/// Built-in catalog for the Klein-quotient search: the quaternion and
/// dihedral seeds, every group of order 16, both extraspecial groups of
/// order 32, and a spread of larger 2-groups up to order 64.
inline std::vector<NamedGroup> klein_catalog() {
    std::vector<NamedGroup> out;
    out.push_back({"Q8", quaternion_group()});
    out.push_back({"D8", dihedral_group(4)});
    out.push_back({"D12", dihedral_group(6)});
    for (NamedGroup& ng : order16_all()) out.push_back(std::move(ng));
    out.push_back({"D8*Q8", extraspecial32_minus()});
    out.push_back({"D8*D8", extraspecial32_plus()});
    out.push_back({"Q32", generalized_quaternion(8)});
    out.push_back({"D32", dihedral_group(16)});
    out.push_back({"D64", dihedral_group(32)});
    return out;
}

/// Search summary over a catalog: every hit's criterion verdict has already
/// been cross-checked against the direct decomposition inside the
/// classifier, and two-copies hits carry the verified construction route.
inline MultiplicityReport klein_suite(const std::vector<NamedGroup>& catalog,
                                      std::vector<KleinHit>* hits_out = nullptr) {
    mult_detail::Stopwatch sw;
    std::vector<KleinHit> hits = klein_search(catalog);
    long two = 0, four = 0, bad_construction = 0;
    bool q8_two_copies = false;
    for (const KleinHit& h : hits) {
        if (h.verdict.kind == KleinVerdict::TwoCopies) {
            ++two;
            if (h.group->order() == 8 && h.name == "Q8") q8_two_copies = true;
        } else {
            ++four;
        }
        if (!h.construction_ok) ++bad_construction;
    }
    bool has_q8 = false;
    for (const NamedGroup& ng : catalog)
        if (ng.name == "Q8") has_q8 = true;
    MultiplicityReport rep;
    rep.scenario = "klein-quotient-search";
    rep.inputs = {"catalog groups=" + std::to_string(catalog.size())};
    rep.verdicts = {{"constructions_verified", bad_construction == 0},
                    {"quaternion_two_copies", !has_q8 || q8_two_copies}};
    rep.stats = {{"hits", static_cast<long>(hits.size())},
                 {"two_copies", two},
                 {"four_distinct", four}};
    rep.ms = sw.ms();
    if (hits_out) *hits_out = std::move(hits);
    return rep;
}

} // namespace charmult
