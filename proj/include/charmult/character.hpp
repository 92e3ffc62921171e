#pragma once

// Class functions and exact character tables.
//
// Tables are computed one of two ways. Abelian groups are handled directly:
// every irreducible is linear, so characters are enumerated as exponent
// vectors g -> Z/E (E the exponent) by extending along a generator chain.
// Nonabelian groups go through eigenvector splitting of the class-sum
// structure matrices modulo a suitable prime l (l = 1 mod exponent, l larger
// than twice the square root of the order), followed by an exact lift: the
// multiplicity of each root of unity in a character value is recovered as a
// discrete Fourier coefficient mod l, which determines the value as an exact
// cyclotomic number since multiplicities are bounded by the degree < l/2.
//
// Rows are sorted by (degree, entrywise order on values), so a table is a
// pure function of the group's indexed multiplication table.

#include <algorithm>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "charmult/cyclotomic.hpp"
#include "charmult/errors.hpp"
#include "charmult/group.hpp"

namespace charmult {

class ClassFunction {
public:
    ClassFunction(GroupPtr G, std::vector<CycNum> vals) : G_(std::move(G)), v_(std::move(vals)) {
        if (static_cast<long>(v_.size()) != G_->num_classes())
            throw GroupMismatch("class function has wrong number of values");
    }

    static ClassFunction constant(const GroupPtr& G, const CycNum& c) {
        return ClassFunction(G, std::vector<CycNum>(G->num_classes(), c));
    }

    const GroupPtr& group() const { return G_; }
    long num_classes() const { return static_cast<long>(v_.size()); }
    const CycNum& on_class(int c) const { return v_[c]; }
    const CycNum& operator()(int elem) const { return v_[G_->class_of(elem)]; }
    const CycNum& degree() const { return v_[G_->class_of(G_->id())]; }
    const std::vector<CycNum>& values() const { return v_; }

    ClassFunction conj() const {
        std::vector<CycNum> w;
        w.reserve(v_.size());
        for (const auto& x : v_) w.push_back(x.conj());
        return ClassFunction(G_, std::move(w));
    }

    friend ClassFunction operator+(const ClassFunction& a, const ClassFunction& b) {
        a.match(b);
        std::vector<CycNum> w;
        w.reserve(a.v_.size());
        for (std::size_t i = 0; i < a.v_.size(); ++i) w.push_back(a.v_[i] + b.v_[i]);
        return ClassFunction(a.G_, std::move(w));
    }
    friend ClassFunction operator-(const ClassFunction& a, const ClassFunction& b) {
        a.match(b);
        std::vector<CycNum> w;
        w.reserve(a.v_.size());
        for (std::size_t i = 0; i < a.v_.size(); ++i) w.push_back(a.v_[i] - b.v_[i]);
        return ClassFunction(a.G_, std::move(w));
    }
    /// Pointwise product (the character of a tensor product).
    friend ClassFunction operator*(const ClassFunction& a, const ClassFunction& b) {
        a.match(b);
        std::vector<CycNum> w;
        w.reserve(a.v_.size());
        for (std::size_t i = 0; i < a.v_.size(); ++i) w.push_back(a.v_[i] * b.v_[i]);
        return ClassFunction(a.G_, std::move(w));
    }
    friend ClassFunction operator*(const CycNum& s, const ClassFunction& a) {
        std::vector<CycNum> w;
        w.reserve(a.v_.size());
        for (const auto& x : a.v_) w.push_back(s * x);
        return ClassFunction(a.G_, std::move(w));
    }

    friend bool operator==(const ClassFunction& a, const ClassFunction& b) {
        return a.G_ == b.G_ && a.v_ == b.v_;
    }
    friend bool operator!=(const ClassFunction& a, const ClassFunction& b) { return !(a == b); }

private:
    void match(const ClassFunction& o) const {
        if (G_ != o.G_) throw GroupMismatch("class functions live on different groups");
    }

    GroupPtr G_;
    std::vector<CycNum> v_;
};

inline CycNum inner_product(const ClassFunction& a, const ClassFunction& b) {
    if (a.group() != b.group()) throw GroupMismatch("inner product across different groups");
    const FiniteGroup& G = *a.group();
    CycNum acc = 0;
    for (int c = 0; c < G.num_classes(); ++c)
        acc += CycNum(Rat(G.class_size(c))) * a.on_class(c) * b.on_class(c).conj();
    return acc * CycNum(Rat(1, G.order()));
}

inline ClassFunction trivial_character(const GroupPtr& G) {
    return ClassFunction::constant(G, CycNum(1));
}

inline ClassFunction regular_character(const GroupPtr& G) {
    std::vector<CycNum> v(G->num_classes(), CycNum(0));
    v[G->class_of(G->id())] = CycNum(Rat(G->order()));
    return ClassFunction(G, std::move(v));
}

// ---- table computation ----

namespace dixon_detail {

inline long modpow(long b, long e, long m) {
    long r = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

inline long modinv(long a, long m) {
    long t = 0, nt = 1, r = m, nr = a % m;
    if (nr < 0) nr += m;
    while (nr) {
        long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw InternalError("element not invertible in the working prime field");
    return t < 0 ? t + m : t;
}

inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Smallest prime l = 1 (mod e) with l^2 > 4n and l not dividing n.
inline long working_prime(long e, long n) {
    for (long l = e + 1;; l += e) {
        if (l * l <= 4 * n) continue;
        if (n % l == 0) continue;
        if (is_prime(l)) return l;
    }
}

inline long primitive_root(long p) {
    std::vector<long> fac;
    long m = p - 1;
    for (long d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            fac.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) fac.push_back(m);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long f : fac)
            if (modpow(g, (p - 1) / f, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw InternalError("no primitive root found");
}

using Vec = std::vector<long>;
using Mat = std::vector<Vec>;

/// In-place reduced row echelon form mod l; returns pivot columns. Zero rows
/// are removed.
inline std::vector<int> rref(Mat& M, long l) {
    std::vector<int> pivots;
    std::size_t row = 0;
    std::size_t cols = M.empty() ? 0 : M[0].size();
    for (std::size_t col = 0; col < cols && row < M.size(); ++col) {
        std::size_t sel = row;
        while (sel < M.size() && M[sel][col] == 0) ++sel;
        if (sel == M.size()) continue;
        std::swap(M[row], M[sel]);
        long s = modinv(M[row][col], l);
        for (auto& x : M[row]) x = x * s % l;
        for (std::size_t r = 0; r < M.size(); ++r) {
            if (r == row || M[r][col] == 0) continue;
            long f = M[r][col];
            for (std::size_t c2 = 0; c2 < cols; ++c2)
                M[r][c2] = ((M[r][c2] - f * M[row][c2]) % l + l) % l;
        }
        pivots.push_back(static_cast<int>(col));
        ++row;
    }
    M.resize(row);
    return pivots;
}

/// Coordinates of y in the span of an RREF basis; y must lie in the span.
inline Vec coords_in(const Mat& basis, const std::vector<int>& pivots, Vec y, long l) {
    Vec out(basis.size(), 0);
    for (std::size_t t = 0; t < basis.size(); ++t) {
        long c = y[pivots[t]] % l;
        out[t] = c;
        if (!c) continue;
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = ((y[j] - c * basis[t][j]) % l + l) % l;
    }
    for (long v : y)
        if (v % l) throw InternalError("vector escapes the invariant subspace");
    return out;
}

/// Basis (as RREF rows) of the kernel of M mod l.
inline Mat nullspace(Mat M, long l) {
    std::size_t n = M.empty() ? 0 : M[0].size();
    std::vector<int> piv = rref(M, l);
    std::vector<char> is_piv(n, 0);
    for (int p : piv) is_piv[p] = 1;
    Mat out;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_piv[free]) continue;
        Vec v(n, 0);
        v[free] = 1;
        for (std::size_t t = 0; t < piv.size(); ++t)
            v[piv[t]] = (l - M[t][free] % l) % l;
        out.push_back(std::move(v));
    }
    return out;
}

struct SplitState {
    Mat basis;               // RREF rows spanning the subspace
    std::vector<int> pivots;
};

/// Structure matrix of class i: entry (j, k) counts x in C_i with
/// x^-1 z_k in C_j, for the fixed representative z_k of class k.
inline Mat structure_matrix(const FiniteGroup& G, int i, long l) {
    long k = G.num_classes();
    Mat A(k, Vec(k, 0));
    const auto& Ci = G.classes()[i];
    for (int x : Ci) {
        int xi = G.inv(x);
        for (int kc = 0; kc < k; ++kc) {
            int j = G.class_of(G.mult(xi, G.class_rep(kc)));
            A[j][kc] = (A[j][kc] + 1) % l;
        }
    }
    return A;
}

/// Joint eigenvectors (normalized to 1 on the identity class) of all class
/// structure matrices mod l. There are exactly num_classes of them.
inline Mat eigenvector_rows(const FiniteGroup& G, long l) {
    long k = G.num_classes();
    int c0 = G.class_of(G.id());
    std::vector<SplitState> spaces;
    {
        SplitState whole;
        whole.basis.assign(k, Vec(k, 0));
        for (long t = 0; t < k; ++t) whole.basis[t][t] = 1;
        whole.pivots.resize(k);
        for (long t = 0; t < k; ++t) whole.pivots[t] = static_cast<int>(t);
        spaces.push_back(std::move(whole));
    }
    // split on class matrices, cheapest classes first
    std::vector<int> order;
    for (int c = 0; c < k; ++c)
        if (c != c0) order.push_back(c);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (G.class_size(a) != G.class_size(b)) return G.class_size(a) < G.class_size(b);
        return a < b;
    });
    for (int ci : order) {
        bool any = false;
        for (const auto& s : spaces)
            if (s.basis.size() > 1) { any = true; break; }
        if (!any) break;
        Mat A = structure_matrix(G, ci, l);
        std::vector<SplitState> next;
        for (auto& S : spaces) {
            std::size_t d = S.basis.size();
            if (d <= 1) {
                next.push_back(std::move(S));
                continue;
            }
            // matrix of A on the subspace, acting on coordinate rows
            Mat B(d, Vec(d, 0));
            for (std::size_t t = 0; t < d; ++t) {
                Vec img(k, 0);
                for (long j = 0; j < k; ++j) {
                    long acc = 0;
                    for (long c2 = 0; c2 < k; ++c2) acc = (acc + A[j][c2] * S.basis[t][c2]) % l;
                    img[j] = acc;
                }
                Vec co = coords_in(S.basis, S.pivots, std::move(img), l);
                for (std::size_t s2 = 0; s2 < d; ++s2) B[t][s2] = co[s2];
            }
            // left eigenvectors of B: kernel of (B^T - lambda I)
            Mat Bt(d, Vec(d, 0));
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c2 = 0; c2 < d; ++c2) Bt[r][c2] = B[c2][r];
            std::size_t found = 0;
            for (long lam = 0; lam < l && found < d; ++lam) {
                Mat shifted = Bt;
                for (std::size_t t = 0; t < d; ++t) shifted[t][t] = ((shifted[t][t] - lam) % l + l) % l;
                Mat ker = nullspace(std::move(shifted), l);
                if (ker.empty()) continue;
                found += ker.size();
                SplitState sub;
                sub.basis.assign(ker.size(), Vec(k, 0));
                for (std::size_t t = 0; t < ker.size(); ++t)
                    for (std::size_t s2 = 0; s2 < d; ++s2) {
                        if (!ker[t][s2]) continue;
                        for (long j = 0; j < k; ++j)
                            sub.basis[t][j] = (sub.basis[t][j] + ker[t][s2] * S.basis[s2][j]) % l;
                    }
                sub.pivots = rref(sub.basis, l);
                if (sub.basis.size() != ker.size())
                    throw InternalError("eigenspace basis degenerated");
                next.push_back(std::move(sub));
            }
            if (found != d) throw InternalError("class matrix failed to diagonalize");
        }
        spaces = std::move(next);
    }
    Mat rows;
    for (auto& S : spaces) {
        if (S.basis.size() != 1)
            throw InternalError("class matrices did not separate all characters");
        Vec v = std::move(S.basis[0]);
        if (v[c0] == 0) throw InternalError("eigenvector vanishes on the identity class");
        long s = modinv(v[c0], l);
        for (auto& x : v) x = x * s % l;
        rows.push_back(std::move(v));
    }
    if (static_cast<long>(rows.size()) != k)
        throw InternalError("wrong number of joint eigenvectors");
    return rows;
}

/// Full nonabelian table: eigenvectors mod l, degree recovery, exact lift.
inline std::vector<std::vector<CycNum>> nonabelian_rows(const FiniteGroup& G) {
    long n = G.order();
    long k = G.num_classes();
    long E = G.exponent();
    long l = working_prime(E, n);
    int c0 = G.class_of(G.id());
    Mat w = eigenvector_rows(G, l);

    std::vector<long> csize(k), cinv(k);
    for (int c = 0; c < k; ++c) {
        csize[c] = G.class_size(c);
        cinv[c] = G.class_of(G.inv(G.class_rep(c)));
    }
    long z = modpow(primitive_root(l), (l - 1) / E, l);

    std::vector<std::vector<CycNum>> rows;
    std::vector<long> degs;
    for (const Vec& v : w) {
        // degree from the second orthogonality at the identity
        long s = 0;
        for (int c = 0; c < k; ++c)
            s = (s + v[c] % l * (v[cinv[c]] % l) % l * modinv(csize[c] % l, l)) % l;
        long d2 = n % l * modinv(s, l) % l;
        long deg = -1;
        for (long d = 1; d * d <= n; ++d)
            if (d * d % l == d2) { deg = d; break; }
        if (deg < 0) throw InternalError("degree recovery failed");
        degs.push_back(deg);

        // chi(g) mod l on every class
        std::vector<long> chi(k);
        for (int c = 0; c < k; ++c) chi[c] = deg % l * v[c] % l * modinv(csize[c] % l, l) % l;

        // exact lift class by class
        std::vector<CycNum> row(k, CycNum(0));
        for (int c = 0; c < k; ++c) {
            long e = G.element_order(G.class_rep(c));
            if (e == 1) {
                row[c] = CycNum(Rat(deg));
                continue;
            }
            long ze = modpow(z, E / e, l);
            long einv = modinv(e % l, l);
            std::vector<long> chipow(e);
            int g = G.class_rep(c);
            for (long m = 0; m < e; ++m) chipow[m] = chi[G.class_of(G.power(g, m))];
            std::vector<std::pair<long, Rat>> terms;
            for (long s2 = 0; s2 < e; ++s2) {
                long acc = 0;
                for (long m = 0; m < e; ++m) {
                    long zexp = ((e - s2) * m) % e; // z^(-s m) = z^((e-s) m)
                    acc = (acc + chipow[m] * modpow(ze, zexp, l)) % l;
                }
                long coef = acc * einv % l;
                if (coef > deg)
                    throw InternalError("root multiplicity exceeds the degree");
                if (coef) terms.push_back({s2, Rat(coef)});
            }
            row[c] = terms.empty() ? CycNum(0) : CycNum::from_root_sum(e, terms);
        }
        if (!(row[c0] == CycNum(Rat(deg)))) throw InternalError("lifted degree mismatch");
        rows.push_back(std::move(row));
    }
    long degsum = 0;
    for (long d : degs) degsum += d * d;
    if (degsum != n) throw InternalError("degrees fail the sum of squares identity");
    return rows;
}

/// Abelian table: characters as exponent vectors g -> Z/E built by extending
/// along a generator chain, then materialized as roots of unity.
inline std::vector<std::vector<CycNum>> abelian_rows(const FiniteGroup& G) {
    long n = G.order();
    long E = G.exponent();
    std::vector<int> H{G.id()};
    std::vector<char> inH(n, 0);
    inH[G.id()] = 1;
    std::vector<std::vector<long>> chars{std::vector<long>(n, 0)};
    for (int x : G.generators()) {
        if (inH[x]) continue;
        long r = 1;
        int xp = x;
        while (!inH[xp]) { xp = G.mult(xp, x); ++r; }
        // x^r lands in H; each character extends in r ways
        std::vector<std::vector<long>> next;
        next.reserve(chars.size() * r);
        std::vector<int> newH;
        for (const auto& a : chars) {
            long c = a[xp];
            // r*v = c (mod E) is solvable iff r | c, and r divides E here
            if (c % r != 0) throw InternalError("character fails to extend along the chain");
            long v0 = (c / r) % E;
            for (long t = 0; t < r; ++t) {
                std::vector<long> b = a;
                long vx = (v0 + t * (E / r)) % E;
                for (int h : H)
                    for (long m = 1; m < r; ++m)
                        b[G.mult(h, G.power(x, m))] = (a[h] + m * vx) % E;
                next.push_back(std::move(b));
            }
        }
        for (int h : H)
            for (long m = 1; m < r; ++m) {
                int y = G.mult(h, G.power(x, m));
                if (!inH[y]) { inH[y] = 1; newH.push_back(y); }
            }
        H.insert(H.end(), newH.begin(), newH.end());
        chars = std::move(next);
    }
    if (static_cast<long>(chars.size()) != n)
        throw InternalError("abelian character count mismatch");
    long k = G.num_classes();
    std::vector<std::vector<CycNum>> rows;
    rows.reserve(n);
    for (const auto& a : chars) {
        std::vector<CycNum> row;
        row.reserve(k);
        for (int c = 0; c < k; ++c) {
            long exp = a[G.class_rep(c)] % E;
            row.push_back(CycNum::from_root_sum(E, {{exp, Rat(1)}}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace dixon_detail

struct CharacterTable {
    GroupPtr G;
    std::vector<ClassFunction> irr;

    long num_irr() const { return static_cast<long>(irr.size()); }
    const ClassFunction& row(long i) const { return irr[i]; }
    long degree(long i) const { return rat_to_long(irr[i].degree().rational_value()); }
};

/// The character table, rows sorted by (degree, entry order). Memoized per
/// group instance for the lifetime of the process.
inline const CharacterTable& character_table(const GroupPtr& G) {
    static std::map<const FiniteGroup*, std::unique_ptr<CharacterTable>> cache;
    auto it = cache.find(G.get());
    if (it != cache.end()) return *it->second;

    std::vector<std::vector<CycNum>> rows =
        G->abelian() ? dixon_detail::abelian_rows(*G) : dixon_detail::nonabelian_rows(*G);
    int c0 = G->class_of(G->id());
    std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        int dc = CycNum::cmp(a[c0], b[c0]);
        if (dc != 0) return dc < 0;
        for (std::size_t t = 0; t < a.size(); ++t) {
            int c = CycNum::cmp(a[t], b[t]);
            if (c != 0) return c < 0;
        }
        return false;
    });
    auto tab = std::make_unique<CharacterTable>();
    tab->G = G;
    for (auto& r : rows) tab->irr.emplace_back(G, std::move(r));
    auto [pos, inserted] = cache.emplace(G.get(), std::move(tab));
    (void)inserted;
    return *pos->second;
}

// ---- operations ----

/// Exact decomposition into irreducible multiplicities; every coefficient
/// must be a nonnegative integer or the function was not a character.
inline std::vector<long> decompose(const ClassFunction& f, const CharacterTable& T) {
    if (f.group() != T.G) throw GroupMismatch("decomposing against a foreign table");
    std::vector<long> out;
    out.reserve(T.irr.size());
    for (const auto& chi : T.irr) {
        CycNum m = inner_product(f, chi);
        if (!m.is_integer()) throw NotACharacter("non-integral multiplicity " + m.str());
        long v = rat_to_long(m.rational_value());
        if (v < 0) throw NotACharacter("negative multiplicity");
        out.push_back(v);
    }
    return out;
}

inline bool is_irreducible(const ClassFunction& f) {
    CycNum ip = inner_product(f, f);
    return ip == CycNum(1) && !f.degree().is_zero();
}

/// Restriction along a subgroup embedding.
inline ClassFunction restrict_to(const SubgroupRef& H, const ClassFunction& f) {
    if (f.group() != H.parent) throw GroupMismatch("restricting a foreign class function");
    std::vector<CycNum> v;
    v.reserve(H.sub->num_classes());
    for (int c = 0; c < H.sub->num_classes(); ++c)
        v.push_back(f(H.embed[H.sub->class_rep(c)]));
    return ClassFunction(H.sub, std::move(v));
}

/// Induction along a subgroup embedding, via class fusion:
/// Ind f (g) = |C_G(g)| * sum over H-classes fusing into [g] of f / |C_H|.
inline ClassFunction induce_from(const SubgroupRef& H, const ClassFunction& f) {
    if (f.group() != H.sub) throw GroupMismatch("inducing a foreign class function");
    const FiniteGroup& G = *H.parent;
    const FiniteGroup& S = *H.sub;
    std::vector<CycNum> v(G.num_classes(), CycNum(0));
    for (int d = 0; d < S.num_classes(); ++d) {
        int gc = G.class_of(H.embed[S.class_rep(d)]);
        Rat factor = Rat(G.order()) * Rat(S.class_size(d)) / (Rat(G.class_size(gc)) * Rat(S.order()));
        v[gc] += CycNum(factor) * f.on_class(d);
    }
    return ClassFunction(H.parent, std::move(v));
}

inline ClassFunction pullback(const GroupHom& h, const ClassFunction& f) {
    if (f.group() != h.target()) throw GroupMismatch("pulling back a foreign class function");
    const FiniteGroup& S = *h.source();
    std::vector<CycNum> v;
    v.reserve(S.num_classes());
    for (int c = 0; c < S.num_classes(); ++c) v.push_back(f(h.map(S.class_rep(c))));
    return ClassFunction(h.source(), std::move(v));
}

/// The linear characters (degree-one rows) of the table.
inline std::vector<ClassFunction> linear_characters(const GroupPtr& G) {
    const CharacterTable& T = character_table(G);
    std::vector<ClassFunction> out;
    for (long i = 0; i < T.num_irr(); ++i)
        if (T.degree(i) == 1) out.push_back(T.row(i));
    return out;
}

} // namespace charmult
