#pragma once

// Truncated-precision arithmetic in the unramified quadratic extension of
// Q_p, and the hermitian-lattice constructions on top of it: hyperbolic
// spaces, lattice duals in column Hermite normal form over the valuation
// ring, residue quotients with their induced forms, the norm-one unit group
// with Hilbert-90 lifts, and the pair of reduction maps attached to an
// almost-self-dual lattice chain.
//
// Elements are residues mod p^N; the uniformizer is p itself. Matrix-level
// lattice operations (duals, containment, quotient structure) lift the
// stored representatives to exact integers and work with adjugates and
// determinants over Z[x]/(f), so lattice identities are decided exactly.
// A stored basis is always assumed to span its lattice exactly; every
// constructor in this header preserves that invariant, because column
// operations with truncated coefficients and entry-wise truncation both
// perturb a basis by vectors of the lattice itself (all lattices in scope
// contain p^N times the ambient standard lattice at their stored scale).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "charmult/errors.hpp"
#include "charmult/group.hpp"
#include "charmult/smallfield.hpp"

namespace charmult {

/// Element a + b x of R_E / p^N, coordinates canonical in [0, p^N).
struct UE {
    long a = 0;
    long b = 0;
    bool operator==(const UE&) const = default;
};

/// A scaled residue: value p^shift * u.
struct ScaledUE {
    UE u;
    long shift = 0;
};

class PadicCtx {
public:
    PadicCtx(long p, int N) : p_(p), N_(N) {
        if (p < 2 || p > 31) throw Error("residue characteristic out of supported range");
        for (long t = 2; t * t <= p; ++t)
            if (p % t == 0) throw Error("characteristic must be prime");
        if (N < 1) throw Error("working precision must be at least 1");
        pN_ = 1;
        for (int i = 0; i < N; ++i) {
            if (pN_ > 3000000000L / p) throw Error("p^N exceeds the supported range");
            pN_ *= p;
        }
        if (p == 2) {
            fA_ = 1;
            fB_ = 1;
        } else {
            long u = 2;
            while (legendre(u) != -1) ++u;
            fA_ = 0;
            fB_ = -u;
        }
    }

    long p() const { return p_; }
    int precision() const { return N_; }
    long pn() const { return pN_; }
    /// Exact integer coefficients of the modulus f = x^2 + fa x + fb.
    long fa() const { return fA_; }
    long fb() const { return fB_; }

    long smod(long v) const {
        long r = v % pN_;
        return r < 0 ? r + pN_ : r;
    }
    long mulmod(long x, long y) const {
        return static_cast<long>(static_cast<__int128>(x) * y % pN_);
    }
    /// Inverse of a unit residue.
    long sinv(long v) const {
        long r0 = pN_, r1 = smod(v), s0 = 0, s1 = 1;
        while (r1 != 0) {
            long q = r0 / r1;
            long r2 = r0 - q * r1, s2 = s0 - q * s1;
            r0 = r1; r1 = r2; s0 = s1; s1 = s2;
        }
        if (r0 != 1) throw DivisionByZero("residue is not a unit");
        return smod(s0);
    }
    /// p-adic valuation of a residue; N means indistinguishable from zero.
    int vp(long v) const {
        if (v == 0) return N_;
        int k = 0;
        while (v % p_ == 0) { v /= p_; ++k; }
        return k;
    }
    long ppow(int k) const {  // p^k mod p^N (0 for k >= N)
        if (k >= N_) return 0;
        long r = 1;
        for (int i = 0; i < k; ++i) r *= p_;
        return r;
    }

    UE of_int(long v) const { return {smod(v), 0}; }
    bool is_zero(UE x) const { return x.a == 0 && x.b == 0; }
    UE add(UE x, UE y) const { return {smod(x.a + y.a), smod(x.b + y.b)}; }
    UE sub(UE x, UE y) const { return {smod(x.a - y.a), smod(x.b - y.b)}; }
    UE neg(UE x) const { return {smod(-x.a), smod(-x.b)}; }
    UE mul(UE x, UE y) const {
        long aa = mulmod(x.a, y.a), bb = mulmod(x.b, y.b);
        long cross = smod(mulmod(x.a, y.b) + mulmod(x.b, y.a));
        return {smod(aa - mulmod(smod(fB_), bb)), smod(cross - mulmod(smod(fA_), bb))};
    }
    /// Ring involution sending x to the other root of f.
    UE conj(UE x) const { return {smod(x.a - mulmod(smod(fA_), x.b)), smod(-x.b)}; }
    /// e * conj(e), an element of R_k / p^N.
    long norm(UE x) const {
        long t = mulmod(x.a, x.a);
        t = smod(t - mulmod(smod(fA_), mulmod(x.a, x.b)));
        return smod(t + mulmod(smod(fB_), mulmod(x.b, x.b)));
    }
    long trace(UE x) const { return smod(2 * x.a - mulmod(smod(fA_), x.b)); }
    int val(UE x) const { return std::min(vp(x.a), vp(x.b)); }
    bool is_unit(UE x) const { return val(x) == 0; }
    UE inv(UE x) const {
        long n = norm(x);
        if (n % p_ == 0) throw DivisionByZero("element is not a unit");
        long ni = sinv(n);
        UE c = conj(x);
        return {mulmod(c.a, ni), mulmod(c.b, ni)};
    }
    /// Multiply by p^k (k >= 0).
    UE scale_up(UE x, int k) const {
        long f = ppow(k);
        return {mulmod(x.a, f), mulmod(x.b, f)};
    }
    /// Exact division of the representative by p^k; requires divisibility.
    UE scale_down(UE x, int k) const {
        long f = 1;
        for (int i = 0; i < k; ++i) f *= p_;
        if (x.a % f != 0 || x.b % f != 0)
            throw PrecisionExhausted("representative is not divisible by the requested power");
        return {x.a / f, x.b / f};
    }

    std::string str(UE x) const {
        std::string s = std::to_string(x.a);
        if (x.b != 0) s += " + " + std::to_string(x.b) + "*x";
        return s;
    }

    /// Residue field F_{p^2} presented with the reduced modulus of f.
    FieldPtr residue_field() const {
        if (!res_) {
            auto base = SmallField::prime(p_);
            int ra = static_cast<int>(((fA_ % p_) + p_) % p_);
            int rb = static_cast<int>(((fB_ % p_) + p_) % p_);
            res_ = SmallField::quadratic_ext(base, ra, rb);
        }
        return res_;
    }
    /// Code of the reduction of x in residue_field().
    int residue_code(UE x) const {
        return static_cast<int>(x.a % p_ + p_ * (x.b % p_));
    }

    bool same(const PadicCtx& o) const { return p_ == o.p_ && N_ == o.N_; }

private:
    int legendre(long u) const {
        long e = (p_ - 1) / 2, r = 1, base = u % p_;
        for (long i = 0; i < e; ++i) r = r * base % p_;
        return r == 1 ? 1 : -1;
    }
    long p_;
    int N_;
    long pN_;
    long fA_, fB_;
    mutable FieldPtr res_;
};

// ---- exact integer layer ----

namespace pad_detail {

/// Exact element a + b x of Z[x]/(x^2 + fa x + fb).
struct ZE {
    mpz_class a, b;
};

inline ZE zof(const UE& u) { return {mpz_class(u.a), mpz_class(u.b)}; }
inline ZE zadd(const ZE& x, const ZE& y) { return {x.a + y.a, x.b + y.b}; }
inline ZE zsub(const ZE& x, const ZE& y) { return {x.a - y.a, x.b - y.b}; }
inline ZE zneg(const ZE& x) { return {-x.a, -x.b}; }
inline ZE zmul(const PadicCtx& C, const ZE& x, const ZE& y) {
    mpz_class bb = x.b * y.b;
    return {x.a * y.a - C.fb() * bb, x.a * y.b + x.b * y.a - C.fa() * bb};
}
inline ZE zconj(const PadicCtx& C, const ZE& x) { return {x.a - C.fa() * x.b, -x.b}; }
inline bool zis_zero(const ZE& x) { return x.a == 0 && x.b == 0; }

constexpr int kInfVal = 1 << 28;

inline int zvp(const PadicCtx& C, const mpz_class& v) {
    if (v == 0) return kInfVal;
    mpz_class t = v;
    int k = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(C.p()))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(C.p()));
        ++k;
    }
    return k;
}
inline int zval(const PadicCtx& C, const ZE& x) { return std::min(zvp(C, x.a), zvp(C, x.b)); }

inline mpz_class ppow_z(const PadicCtx& C, long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(C.p()), static_cast<unsigned long>(k));
    return r;
}
inline mpz_class mmod(const mpz_class& v, const mpz_class& m) {
    mpz_class r = v % m;
    if (r < 0) r += m;
    return r;
}
inline ZE zmod(const ZE& x, const mpz_class& m) { return {mmod(x.a, m), mmod(x.b, m)}; }
inline ZE zdivexact_p(const PadicCtx& C, const ZE& x, int k) {
    mpz_class f = ppow_z(C, k);
    ZE r;
    mpz_divexact(r.a.get_mpz_t(), x.a.get_mpz_t(), f.get_mpz_t());
    mpz_divexact(r.b.get_mpz_t(), x.b.get_mpz_t(), f.get_mpz_t());
    return r;
}

/// Determinant of an n x n ZE matrix (row-major) by minor expansion.
inline ZE zdet(const PadicCtx& C, int n, const std::vector<ZE>& m) {
    std::vector<ZE> dp(std::size_t(1) << n, ZE{0, 0});
    dp[0] = {1, 0};
    for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        int k = __builtin_popcountll(mask);
        int row = k - 1, pos = 0;
        ZE acc{0, 0};
        for (int j = 0; j < n; ++j) {
            if (!(mask >> j & 1)) continue;
            ZE term = zmul(C, m[std::size_t(row) * n + j], dp[mask ^ (std::size_t(1) << j)]);
            if (((row + pos) & 1) == 0)
                acc = zadd(acc, term);
            else
                acc = zsub(acc, term);
            ++pos;
        }
        dp[mask] = acc;
    }
    return dp.back();
}

/// Adjugate: adj * m = det(m) * I.
inline std::vector<ZE> zadjugate(const PadicCtx& C, int n, const std::vector<ZE>& m) {
    std::vector<ZE> adj(std::size_t(n) * n);
    if (n == 1) {
        adj[0] = {1, 0};
        return adj;
    }
    std::vector<ZE> sub(std::size_t(n - 1) * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int r = 0;
            for (int ii = 0; ii < n; ++ii) {
                if (ii == i) continue;
                int c = 0;
                for (int jj = 0; jj < n; ++jj) {
                    if (jj == j) continue;
                    sub[std::size_t(r) * (n - 1) + c] = m[std::size_t(ii) * n + jj];
                    ++c;
                }
                ++r;
            }
            ZE d = zdet(C, n - 1, sub);
            adj[std::size_t(j) * n + i] = ((i + j) & 1) ? zneg(d) : d;
        }
    return adj;
}

/// Exact linear solver for T c = v over the extension ring: decides
/// integrality of the coordinates and produces them modulo p^m.
class ZSolver {
public:
    ZSolver(const PadicCtx& C, int n, std::vector<ZE> t) : C_(&C), n_(n), t_(std::move(t)) {
        det_ = zdet(C, n, t_);
        if (zis_zero(det_)) throw PrecisionExhausted("matrix is singular");
        adj_ = zadjugate(C, n, t_);
        ZE nrm = zmul(C, det_, zconj(C, det_));
        if (nrm.b != 0) throw InternalError("norm of a determinant must be rational");
        nval_ = zvp(C, nrm.a);
        mpz_divexact(n0_.get_mpz_t(), nrm.a.get_mpz_t(), ppow_z(C, nval_).get_mpz_t());
    }

    int n() const { return n_; }
    const ZE& det() const { return det_; }

    /// Numerators x_i = (adj * v)_i * conj(det); coordinate i is integral
    /// iff val(x_i) >= nval.
    std::vector<ZE> numerators(const std::vector<ZE>& v) const {
        std::vector<ZE> w(n_, ZE{0, 0});
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                w[i] = zadd(w[i], zmul(*C_, adj_[std::size_t(i) * n_ + j], v[j]));
        ZE cd = zconj(*C_, det_);
        for (int i = 0; i < n_; ++i) w[i] = zmul(*C_, w[i], cd);
        return w;
    }

    bool integral(const std::vector<ZE>& v) const {
        for (const ZE& x : numerators(v))
            if (zval(*C_, x) < nval_) return false;
        return true;
    }

    /// Coordinates mod p^m as canonical pairs; requires integrality.
    std::vector<UE> coords_mod(const std::vector<ZE>& v, int m) const {
        mpz_class pm = ppow_z(*C_, m);
        mpz_class n0inv;
        if (mpz_invert(n0inv.get_mpz_t(), n0_.get_mpz_t(), pm.get_mpz_t()) == 0)
            throw InternalError("unit denominator has no inverse");
        std::vector<UE> out(n_);
        std::vector<ZE> w = numerators(v);
        for (int i = 0; i < n_; ++i) {
            if (zval(*C_, w[i]) < nval_)
                throw PreconditionFailed("vector is not in the span at integral coordinates");
            ZE y = zdivexact_p(*C_, w[i], nval_);
            y.a = mmod(y.a * n0inv, pm);
            y.b = mmod(y.b * n0inv, pm);
            out[i] = {mpz_get_si(y.a.get_mpz_t()), mpz_get_si(y.b.get_mpz_t())};
        }
        return out;
    }

private:
    const PadicCtx* C_;
    int n_;
    std::vector<ZE> t_;
    std::vector<ZE> adj_;
    ZE det_;
    int nval_ = 0;
    mpz_class n0_;
};

}  // namespace pad_detail

// ---- matrices over the extension with a global uniformizer shift ----

/// Rectangular matrix whose value is p^shift times the stored residues.
class EMat {
public:
    EMat(const PadicCtx& C, int rows, int cols, long shift = 0)
        : C_(&C), r_(rows), c_(cols), shift_(shift), e_(std::size_t(rows) * cols) {}

    static EMat identity(const PadicCtx& C, int n, long shift = 0) {
        EMat m(C, n, n, shift);
        for (int i = 0; i < n; ++i) m.at(i, i) = C.of_int(1);
        return m;
    }

    const PadicCtx& ctx() const { return *C_; }
    int rows() const { return r_; }
    int cols() const { return c_; }
    long shift() const { return shift_; }
    UE& at(int i, int j) { return e_[std::size_t(i) * c_ + j]; }
    const UE& at(int i, int j) const { return e_[std::size_t(i) * c_ + j]; }

    EMat mul(const EMat& o) const {
        if (c_ != o.r_) throw Error("matrix dimension mismatch");
        EMat out(*C_, r_, o.c_, shift_ + o.shift_);
        for (int i = 0; i < r_; ++i)
            for (int k = 0; k < c_; ++k) {
                UE x = at(i, k);
                if (C_->is_zero(x)) continue;
                for (int j = 0; j < o.c_; ++j)
                    out.at(i, j) = C_->add(out.at(i, j), C_->mul(x, o.at(k, j)));
            }
        return out;
    }

    EMat conj_transpose() const {
        EMat out(*C_, c_, r_, shift_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out.at(j, i) = C_->conj(at(i, j));
        return out;
    }

    EMat transpose() const {
        EMat out(*C_, c_, r_, shift_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out.at(j, i) = at(i, j);
        return out;
    }

    EMat conj_map() const {
        EMat out = *this;
        for (UE& x : out.e_) x = C_->conj(x);
        return out;
    }

    /// Value multiplied by p^k, same stored entries.
    EMat scaled(long k) const {
        EMat out = *this;
        out.shift_ += k;
        return out;
    }

    /// Re-express the same value at a lower shift.
    EMat rebased(long new_shift) const {
        if (new_shift > shift_) throw Error("can only rebase to a lower shift");
        int k = static_cast<int>(shift_ - new_shift);
        EMat out(*C_, r_, c_, new_shift);
        for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = C_->scale_up(e_[i], k);
        return out;
    }

    /// Same value with the common power of p moved from the entries into the
    /// shift (exact on representatives).
    EMat normalized() const {
        int g = C_->precision();
        for (const UE& x : e_) g = std::min(g, C_->val(x));
        if (g == 0 || g == C_->precision()) return *this;
        EMat out(*C_, r_, c_, shift_ + g);
        for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = C_->scale_down(e_[i], g);
        return out;
    }

    /// Value equality at the precision the representation supports.
    bool equals(const EMat& o) const {
        if (r_ != o.r_ || c_ != o.c_) return false;
        EMat x = normalized(), y = o.normalized();
        long s = std::min(x.shift_, y.shift_);
        EMat a = x.rebased(s), b = y.rebased(s);
        return a.e_ == b.e_;
    }

    EMat col(int j) const {
        EMat out(*C_, r_, 1, shift_);
        for (int i = 0; i < r_; ++i) out.at(i, 0) = at(i, j);
        return out;
    }

    std::vector<pad_detail::ZE> lift() const {
        std::vector<pad_detail::ZE> out(e_.size());
        for (std::size_t i = 0; i < e_.size(); ++i) out[i] = pad_detail::zof(e_[i]);
        return out;
    }

    /// Exact determinant as a scaled unit (unit part reduced mod p^N).
    ScaledUE det() const {
        if (r_ != c_) throw Error("determinant of a non-square matrix");
        pad_detail::ZE d = pad_detail::zdet(*C_, r_, lift());
        if (pad_detail::zis_zero(d)) throw PrecisionExhausted("determinant vanishes at working precision");
        int v = pad_detail::zval(*C_, d);
        pad_detail::ZE u = pad_detail::zdivexact_p(*C_, d, v);
        mpz_class pm = pad_detail::ppow_z(*C_, C_->precision());
        u = pad_detail::zmod(u, pm);
        return {UE{mpz_get_si(u.a.get_mpz_t()), mpz_get_si(u.b.get_mpz_t())},
                shift_ * r_ + v};
    }

private:
    const PadicCtx* C_;
    int r_, c_;
    long shift_;
    std::vector<UE> e_;
};

/// conj(g)^T * H * g, the form transform of g against the Gram matrix H.
inline EMat form_transform(const EMat& g, const EMat& H) {
    return g.conj_transpose().mul(H).mul(g);
}

// ---- hermitian spaces ----

/// Nondegenerate hermitian space with Gram matrix in a paired basis
/// (e_1, f_1, ..., e_m, f_m), <e_i, f_i> = 1, all other products zero.
struct HermSpace {
    const PadicCtx* C;
    int n;      // dimension, = 2 * pairs
    EMat gram;  // block diagonal of 2x2 antidiagonal ones

    static HermSpace hyperbolic(const PadicCtx& ctx, int pairs) {
        EMat g(ctx, 2 * pairs, 2 * pairs, 0);
        for (int i = 0; i < pairs; ++i) {
            g.at(2 * i, 2 * i + 1) = ctx.of_int(1);
            g.at(2 * i + 1, 2 * i) = ctx.of_int(1);
        }
        return {&ctx, 2 * pairs, g};
    }

    /// <v, w> = conj(v)^T H w for column vectors.
    ScaledUE pairing(const EMat& v, const EMat& w) const {
        UE acc{};
        for (int i = 0; i < n; ++i) {
            UE vi = C->conj(v.at(i, 0));
            if (C->is_zero(vi)) continue;
            for (int j = 0; j < n; ++j) {
                const UE& h = gram.at(i, j);
                if (C->is_zero(h)) continue;
                acc = C->add(acc, C->mul(C->mul(vi, h), w.at(j, 0)));
            }
        }
        return {acc, v.shift() + w.shift()};
    }
};

// ---- lattices ----

/// Full-rank R_E-lattice, stored as a canonical column Hermite normal form
/// over the valuation ring: lower triangular, pivots exactly p^v with the
/// entries left of each pivot reduced mod p^v, minimal entry valuation zero
/// (extracted into the shift).
class Lattice {
public:
    static Lattice from_basis(const EMat& b) {
        if (b.rows() != b.cols()) throw Error("lattice basis must be square");
        return hnf(b);
    }
    /// Span of the columns of a rectangular matrix (at least n columns
    /// spanning full rank).
    static Lattice from_generators(const EMat& gens) {
        if (gens.cols() < gens.rows()) throw Error("not enough generating columns");
        return hnf(gens);
    }

    const PadicCtx& ctx() const { return *C_; }
    int n() const { return n_; }
    long shift() const { return shift_; }
    const UE& at(int i, int j) const { return h_[std::size_t(i) * n_ + j]; }

    EMat basis() const {
        EMat b(*C_, n_, n_, shift_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) b.at(i, j) = at(i, j);
        return b;
    }

    bool operator==(const Lattice& o) const {
        return C_->same(*o.C_) && n_ == o.n_ && shift_ == o.shift_ && h_ == o.h_;
    }
    bool operator!=(const Lattice& o) const { return !(*this == o); }

    /// p^k L.
    Lattice scaled(long k) const {
        Lattice out = *this;
        out.shift_ += k;
        return out;
    }

    /// Column-vector membership, decided exactly.
    bool contains(const EMat& v) const {
        pad_detail::ZSolver s(*C_, n_, basis().lift());
        return contains_with(s, v);
    }

    bool contains_lattice(const Lattice& o) const {
        pad_detail::ZSolver s(*C_, n_, basis().lift());
        EMat ob = o.basis();
        for (int j = 0; j < o.n(); ++j)
            if (!contains_with(s, ob.col(j))) return false;
        return true;
    }

private:
    Lattice() = default;

    bool contains_with(const pad_detail::ZSolver& s, const EMat& v) const {
        if (v.rows() != n_ || v.cols() != 1) throw Error("vector dimension mismatch");
        std::vector<pad_detail::ZE> rhs(n_);
        // align the vector to the lattice shift exactly
        long dv = v.shift() - shift_;
        for (int i = 0; i < n_; ++i) {
            pad_detail::ZE x = pad_detail::zof(v.at(i, 0));
            if (dv >= 0) {
                mpz_class f = pad_detail::ppow_z(*C_, dv);
                x.a *= f;
                x.b *= f;
            } else if (!pad_detail::zis_zero(x)) {
                int k = static_cast<int>(-dv);
                // an entry with a pole cannot sit in the integral span
                if (pad_detail::zval(*C_, x) < k) return false;
                x = pad_detail::zdivexact_p(*C_, x, k);
            }
            rhs[i] = x;
        }
        return s.integral(rhs);
    }

    static Lattice hnf(const EMat& raw) {
        // extract the common power of p first so pivots of negatively shifted
        // products stay visible below the working precision
        EMat in = raw.normalized();
        const PadicCtx& C = in.ctx();
        const int n = in.rows(), m = in.cols(), N = C.precision();
        std::vector<UE> M(std::size_t(n) * m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) M[std::size_t(i) * m + j] = in.at(i, j);
        auto at = [&](int i, int j) -> UE& { return M[std::size_t(i) * m + j]; };

        for (int row = 0; row < n; ++row) {
            int best = -1, bestv = N;
            for (int j = row; j < m; ++j) {
                int v = C.val(at(row, j));
                if (v < bestv) {
                    bestv = v;
                    best = j;
                }
            }
            if (best < 0)
                throw PrecisionExhausted("no pivot below working precision; basis is not full rank");
            if (best != row)
                for (int i = 0; i < n; ++i) std::swap(at(i, row), at(i, best));
            // normalize the pivot column so the pivot is exactly p^v
            UE unit = C.scale_down(at(row, row), bestv);
            UE ui = C.inv(unit);
            for (int i = 0; i < n; ++i) at(i, row) = C.mul(at(i, row), ui);
            at(row, row) = {C.ppow(bestv), 0};
            long pv = 1;
            for (int t = 0; t < bestv; ++t) pv *= C.p();
            for (int j = 0; j < m; ++j) {
                if (j == row) continue;
                const UE& x = at(row, j);
                UE q;
                if (j > row) {
                    if (C.val(x) < bestv)
                        throw InternalError("pivot was not minimal in its row");
                    q = C.scale_down(x, bestv);
                } else {
                    q = {x.a / pv, x.b / pv};  // reduce left of the pivot mod p^v
                }
                if (C.is_zero(q)) continue;
                for (int i = 0; i < n; ++i) at(i, j) = C.sub(at(i, j), C.mul(q, at(i, row)));
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = n; j < m; ++j)
                if (!C.is_zero(at(i, j)))
                    throw InternalError("extra generating columns did not reduce to zero");

        Lattice L;
        L.C_ = &C;
        L.n_ = n;
        L.shift_ = in.shift();
        L.h_.resize(std::size_t(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) L.h_[std::size_t(i) * n + j] = at(i, j);
        // extract the common power of p into the shift
        int g = N;
        for (const UE& x : L.h_) g = std::min(g, C.val(x));
        if (g == N) throw PrecisionExhausted("lattice basis vanishes at working precision");
        if (g > 0) {
            for (UE& x : L.h_) x = C.scale_down(x, g);
            L.shift_ += g;
        }
        return L;
    }

    const PadicCtx* C_ = nullptr;
    int n_ = 0;
    long shift_ = 0;
    std::vector<UE> h_;
};

/// Dual lattice: vectors pairing integrally with L under the form of V.
inline Lattice dual_lattice(const Lattice& L, const HermSpace& V) {
    using namespace pad_detail;
    const PadicCtx& C = L.ctx();
    const int n = L.n();
    if (V.n != n) throw Error("space and lattice dimensions differ");
    // dual basis = conj((B^T H)^-1); inversion on exact integer lifts
    EMat bt = L.basis().transpose();
    EMat M = bt.mul(V.gram);  // shift = L.shift()
    std::vector<ZE> Ml = M.lift();
    ZE d = zdet(C, n, Ml);
    if (zis_zero(d)) throw PrecisionExhausted("lattice basis is singular against the form");
    std::vector<ZE> adj = zadjugate(C, n, Ml);
    ZE nrm = zmul(C, d, zconj(C, d));
    if (nrm.b != 0) throw InternalError("norm of a determinant must be rational");
    int v2 = zvp(C, nrm.a);
    mpz_class n0;
    mpz_divexact(n0.get_mpz_t(), nrm.a.get_mpz_t(), ppow_z(C, v2).get_mpz_t());

    const int N = C.precision();
    int K = N + v2 + 2 * n + 8;
    mpz_class pK = ppow_z(C, K);
    mpz_class n0inv;
    if (mpz_invert(n0inv.get_mpz_t(), n0.get_mpz_t(), pK.get_mpz_t()) == 0)
        throw InternalError("unit denominator has no inverse");

    // inverse entries: adj * conj(det) * n0inv, carrying the exponent -v2
    ZE cd = zconj(C, d);
    std::vector<ZE> W(std::size_t(n) * n);
    int gmin = kInfVal;
    for (std::size_t i = 0; i < W.size(); ++i) {
        ZE w = zmul(C, adj[i], cd);
        w.a = mmod(w.a * n0inv, pK);
        w.b = mmod(w.b * n0inv, pK);
        W[i] = w;
        gmin = std::min(gmin, zval(C, w));
    }
    if (gmin >= K) throw PrecisionExhausted("dual basis vanishes at working precision");
    if (K - gmin < N) throw PrecisionExhausted("insufficient headroom for the dual computation");

    EMat inv(C, n, n, -L.shift() - v2 + gmin);
    mpz_class pNm = ppow_z(C, N);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ZE w = zdivexact_p(C, W[std::size_t(i) * n + j], gmin);
            w = zmod(w, pNm);
            inv.at(i, j) = C.conj(UE{mpz_get_si(w.a.get_mpz_t()), mpz_get_si(w.b.get_mpz_t())});
        }
    return Lattice::from_basis(inv);
}

// ---- the almost-self-dual model lattice and its similitude ----

/// 4d-dimensional lattice spanned by e_1, f_1, ..., e_d, f_d and
/// p e_{d+1}, f_{d+1}, ..., p e_{2d}, f_{2d} in the paired hyperbolic basis.
inline Lattice model_lattice(const PadicCtx& C, int d) {
    if (d < 1) throw Error("block size must be positive");
    if (C.precision() < 2) throw PrecisionExhausted("lattice constructions need precision >= 2");
    EMat b = EMat::identity(C, 4 * d);
    for (int P = d; P < 2 * d; ++P) b.at(2 * P, 2 * P) = C.of_int(C.p());
    return Lattice::from_basis(b);
}

/// The similitude with factor p^-1 exchanging the two blocks:
/// e_i -> e_{d+i}, f_i -> p^-1 f_{d+i}, e_{d+i} -> p^-1 e_i, f_{d+i} -> f_i.
inline EMat duality_similitude(const PadicCtx& C, int d) {
    EMat g(C, 4 * d, 4 * d, -1);
    long p = C.p();
    for (int i = 0; i < d; ++i) {
        int e1 = 2 * i, f1 = 2 * i + 1, e2 = 2 * (d + i), f2 = 2 * (d + i) + 1;
        g.at(e2, e1) = C.of_int(p);  // e_i -> e_{d+i}
        g.at(f2, f1) = C.of_int(1);  // f_i -> p^-1 f_{d+i}
        g.at(e1, e2) = C.of_int(1);  // e_{d+i} -> p^-1 e_i
        g.at(f1, f2) = C.of_int(p);  // f_{d+i} -> f_i
    }
    return g;
}

struct DualityReport {
    bool similitude_ok = false;       // conj(g)^T H g = p^-1 H
    bool lattice_to_dual = false;     // g L = L^dual
    bool square_is_scalar = false;    // g^2 = p^-1 * identity
    bool inverse_relation = false;    // g * (p g) = identity
    bool square_scales_lattice = false;  // g^2 L = p^-1 L
    bool pass() const {
        return similitude_ok && lattice_to_dual && square_is_scalar && inverse_relation &&
               square_scales_lattice;
    }
};

inline DualityReport verify_duality_similitude(const PadicCtx& C, int d) {
    DualityReport rep;
    HermSpace V = HermSpace::hyperbolic(C, 2 * d);
    Lattice L = model_lattice(C, d);
    Lattice Lv = dual_lattice(L, V);
    EMat g = duality_similitude(C, d);
    rep.similitude_ok = form_transform(g, V.gram).equals(V.gram.scaled(-1));
    rep.lattice_to_dual = Lattice::from_basis(g.mul(L.basis())) == Lv;
    EMat g2 = g.mul(g);
    rep.square_is_scalar = g2.equals(EMat::identity(C, 4 * d, -1));
    rep.inverse_relation = g.mul(g.scaled(1)).equals(EMat::identity(C, 4 * d));
    rep.square_scales_lattice = Lattice::from_basis(g2.mul(L.basis())) == L.scaled(-1);
    return rep;
}

// ---- residue quotients of a lattice chain ----

struct QuotientHermitian {
    FieldPtr res;                // residue field F_{p^2}
    int dim = 0;                 // dimension over the residue field
    long form_scale = 0;         // reduced form is the image of p^scale <.,.>
    bool degenerate = false;     // zero-dimensional quotient
    std::vector<int> smith;      // elementary divisor exponents (ascending)
    long element_count = 1;      // number of elements of the quotient module
    std::vector<EMat> basis;     // lifts of the residue basis vectors
    Payload gram;                // dim x dim residue Gram, row-major codes
    std::function<Payload(const EMat&)> reduce;  // coordinates of a vector of the outer lattice
};

/// The residue module outer/inner for a chain p*outer <= inner <= outer,
/// with the hermitian form scaled to be integral and nondegenerate.
inline QuotientHermitian quotient_hermitian(const Lattice& outer, const Lattice& inner,
                                            const HermSpace& V) {
    using namespace pad_detail;
    const PadicCtx& C = outer.ctx();
    const int n = outer.n();
    if (inner.n() != n || V.n != n) throw Error("dimension mismatch");
    if (!outer.contains_lattice(inner) || !inner.contains_lattice(outer.scaled(1)))
        throw ChainViolation("quotient needs the chain p*outer <= inner <= outer");

    // coordinates of the inner basis in the outer basis
    const int N = C.precision();
    const int Ks = N + 8;
    mpz_class pKs = ppow_z(C, Ks);
    ZSolver outer_solver(C, n, outer.basis().lift());
    std::vector<ZE> X(std::size_t(n) * n);
    {
        EMat ib = inner.basis();
        long dv = ib.shift() - outer.shift();
        for (int j = 0; j < n; ++j) {
            std::vector<ZE> rhs(n);
            for (int i = 0; i < n; ++i) {
                ZE x = zof(ib.at(i, j));
                if (dv >= 0) {
                    mpz_class f = ppow_z(C, dv);
                    x.a *= f;
                    x.b *= f;
                } else if (!zis_zero(x)) {
                    x = zdivexact_p(C, x, static_cast<int>(-dv));
                }
                rhs[i] = x;
            }
            std::vector<UE> c = outer_solver.coords_mod(rhs, Ks);
            for (int i = 0; i < n; ++i) X[std::size_t(i) * n + j] = zof(c[i]);
        }
    }

    // Smith form over the valuation ring, tracking the left transform inverse
    std::vector<ZE> A = X;
    std::vector<ZE> U(std::size_t(n) * n, ZE{0, 0});
    for (int i = 0; i < n; ++i) U[std::size_t(i) * n + i] = {1, 0};
    auto aat = [&](int i, int j) -> ZE& { return A[std::size_t(i) * n + j]; };
    auto uat = [&](int i, int j) -> ZE& { return U[std::size_t(i) * n + j]; };
    std::vector<int> exps;
    for (int t = 0; t < n; ++t) {
        int bi = -1, bj = -1, bv = Ks;
        for (int i = t; i < n; ++i)
            for (int j = t; j < n; ++j) {
                int v = zval(C, aat(i, j));
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) throw PrecisionExhausted("chain quotient is singular at working precision");
        if (bi != t)
            for (int j = 0; j < n; ++j) {
                std::swap(aat(t, j), aat(bi, j));
                std::swap(uat(j, t), uat(j, bi));  // column swap on the inverse transform
            }
        if (bj != t)
            for (int i = 0; i < n; ++i) std::swap(aat(i, t), aat(i, bj));
        // normalize the pivot row so the pivot is exactly p^bv
        ZE unit = zdivexact_p(C, aat(t, t), bv);
        // invert the unit mod p^Ks: unit^-1 = conj(unit) / norm(unit)
        ZE cu = zconj(C, unit);
        ZE nu = zmul(C, unit, cu);
        mpz_class n0inv;
        if (mpz_invert(n0inv.get_mpz_t(), mmod(nu.a, pKs).get_mpz_t(), pKs.get_mpz_t()) == 0)
            throw InternalError("pivot unit has no inverse");
        ZE uinv = {mmod(cu.a * n0inv, pKs), mmod(cu.b * n0inv, pKs)};
        for (int j = 0; j < n; ++j) aat(t, j) = zmod(zmul(C, uinv, aat(t, j)), pKs);
        for (int i = 0; i < n; ++i) uat(i, t) = zmod(zmul(C, uat(i, t), unit), pKs);
        aat(t, t) = {ppow_z(C, bv), 0};
        // clear the pivot column below, updating the inverse transform
        for (int i = t + 1; i < n; ++i) {
            if (zval(C, aat(i, t)) >= Ks) {
                aat(i, t) = {0, 0};
                continue;
            }
            ZE q = zdivexact_p(C, aat(i, t), bv);
            for (int j = 0; j < n; ++j)
                aat(i, j) = zmod(zsub(aat(i, j), zmul(C, q, aat(t, j))), pKs);
            for (int r = 0; r < n; ++r)
                uat(r, t) = zmod(zadd(uat(r, t), zmul(C, q, uat(r, i))), pKs);
        }
        // clear the pivot row to the right (right transform is not needed)
        for (int j = t + 1; j < n; ++j) {
            if (zval(C, aat(t, j)) >= Ks) {
                aat(t, j) = {0, 0};
                continue;
            }
            ZE q = zdivexact_p(C, aat(t, j), bv);
            for (int i = 0; i < n; ++i)
                aat(i, j) = zmod(zsub(aat(i, j), zmul(C, q, aat(i, t))), pKs);
        }
        exps.push_back(bv);
    }

    QuotientHermitian out;
    out.res = C.residue_field();
    out.smith = exps;
    for (int e : exps) {
        if (e > 1) throw InternalError("chain quotient has an elementary divisor beyond p");
        if (e == 1) ++out.dim;
        for (int t = 0; t < e; ++t) out.element_count *= C.p() * C.p();
    }
    out.degenerate = out.dim == 0;

    // transformed outer basis T = B_outer * U; the residue basis vectors are
    // the columns with elementary divisor p
    EMat T(C, n, n, outer.shift());
    {
        EMat ob = outer.basis();
        std::vector<ZE> obl = ob.lift();
        mpz_class pNm = ppow_z(C, N);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                ZE acc{0, 0};
                for (int k = 0; k < n; ++k)
                    acc = zadd(acc, zmul(C, obl[std::size_t(i) * n + k], uat(k, j)));
                acc = zmod(acc, pNm);
                T.at(i, j) = {mpz_get_si(acc.a.get_mpz_t()), mpz_get_si(acc.b.get_mpz_t())};
            }
    }
    std::vector<int> pos;
    for (int j = 0; j < n; ++j)
        if (exps[j] == 1) pos.push_back(j);
    for (int j : pos) out.basis.push_back(T.col(j));

    if (!out.degenerate) {
        // scale the form so it is integral with unit values on the quotient
        const int m = out.dim;
        std::vector<ScaledUE> P(std::size_t(m) * m);
        long minval = 1 << 28;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                ScaledUE v = V.pairing(out.basis[i], out.basis[j]);
                P[std::size_t(i) * m + j] = v;
                if (!C.is_zero(v.u)) minval = std::min(minval, v.shift + C.val(v.u));
            }
        out.form_scale = minval < (1 << 28) && minval < 0 ? -minval : 0;
        out.gram.assign(std::size_t(m) * m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const ScaledUE& v = P[std::size_t(i) * m + j];
                long k = v.shift + out.form_scale;
                UE w = v.u;
                if (k < 0)
                    w = C.scale_down(w, static_cast<int>(-k));
                else
                    w = C.scale_up(w, static_cast<int>(k));
                out.gram[std::size_t(i) * m + j] = static_cast<std::uint16_t>(C.residue_code(w));
            }
        // conjugate symmetry and nondegeneracy of the reduced form
        const SmallField& F = *out.res;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (out.gram[std::size_t(i) * m + j] !=
                    F.conj(out.gram[std::size_t(j) * m + i]))
                    throw InternalError("reduced form is not conjugate-symmetric");
        // Leibniz determinant over the residue field
        std::vector<int> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        int det = 0;
        do {
            int sgn = 0;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (perm[i] > perm[j]) sgn ^= 1;
            int term = 1;
            for (int i = 0; i < m; ++i)
                term = F.mul(term, out.gram[std::size_t(i) * m + perm[i]]);
            det = sgn ? F.sub(det, term) : F.add(det, term);
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (det == 0) throw InternalError("reduced form is degenerate");
    }

    // reduction map: solve against T, take the mod-p coordinates at the
    // elementary-divisor positions
    auto solver = std::make_shared<ZSolver>(C, n, T.lift());
    long tshift = T.shift();
    const PadicCtx* Cp = &C;
    std::vector<int> pos_copy = pos;
    out.reduce = [solver, tshift, Cp, pos_copy, n](const EMat& v) -> Payload {
        if (v.rows() != n || v.cols() != 1) throw Error("vector dimension mismatch");
        std::vector<pad_detail::ZE> rhs(n);
        long dv = v.shift() - tshift;
        for (int i = 0; i < n; ++i) {
            pad_detail::ZE x = pad_detail::zof(v.at(i, 0));
            if (dv >= 0) {
                mpz_class f = pad_detail::ppow_z(*Cp, dv);
                x.a *= f;
                x.b *= f;
            } else if (!pad_detail::zis_zero(x)) {
                if (pad_detail::zval(*Cp, x) < -dv)
                    throw PreconditionFailed("vector lies outside the outer lattice");
                x = pad_detail::zdivexact_p(*Cp, x, static_cast<int>(-dv));
            }
            rhs[i] = x;
        }
        if (!solver->integral(rhs))
            throw PreconditionFailed("vector lies outside the outer lattice");
        std::vector<UE> c = solver->coords_mod(rhs, 1);
        Payload out_codes;
        for (int j : pos_copy)
            out_codes.push_back(static_cast<std::uint16_t>(Cp->residue_code(c[j])));
        return out_codes;
    };
    return out;
}

// ---- the reduction pair of the model chain ----

/// The chain p L^dual <= L <= L^dual for the model lattice, with the two
/// residue quotients presented in bases exchanged by the duality similitude:
/// the inner quotient L / p L^dual in the basis (e_1, f_1, ..., e_d, f_d)
/// and the outer quotient L^dual / L in its image under the similitude,
/// (e_{d+1}, p^-1 f_{d+1}, ..., e_{2d}, p^-1 f_{2d}). With this choice both
/// reduced Gram matrices coincide, and conjugation by the similitude
/// exchanges the two components of the reduction pair exactly.
struct LatticeChain {
    const PadicCtx* C = nullptr;
    int d = 0;
    HermSpace V;
    Lattice L, Lv;
    EMat shift_sim;  // the duality similitude

    static LatticeChain make(const PadicCtx& ctx, int d) {
        LatticeChain ch{&ctx, d, HermSpace::hyperbolic(ctx, 2 * d), model_lattice(ctx, d),
                        model_lattice(ctx, d), duality_similitude(ctx, d)};
        ch.Lv = dual_lattice(ch.L, ch.V);
        if (!ch.Lv.contains_lattice(ch.L) || !ch.L.contains_lattice(ch.Lv.scaled(1)))
            throw InternalError("model chain inclusion failed");
        return ch;
    }

    FieldPtr residue_field() const { return C->residue_field(); }

    /// Reduced Gram matrix shared by both quotients: paired hyperbolic blocks.
    Payload residue_gram() const {
        int m = 2 * d;
        Payload g(std::size_t(m) * m, 0);
        for (int i = 0; i < d; ++i) {
            g[std::size_t(2 * i) * m + 2 * i + 1] = 1;
            g[std::size_t(2 * i + 1) * m + 2 * i] = 1;
        }
        return g;
    }

    bool preserves_form(const EMat& g) const {
        return form_transform(g, V.gram).equals(V.gram);
    }
    bool stabilizes(const EMat& g) const {
        if (!preserves_form(g)) return false;
        return Lattice::from_basis(g.mul(L.basis())) == L;
    }

    /// Actions on L^dual / L and on L / p L^dual, as residue-field matrix
    /// payloads (row-major codes) in the exchanged bases described above.
    std::pair<Payload, Payload> reduction_pair(const EMat& g) const {
        if (!stabilizes(g)) throw NotInStabilizer("element does not stabilize the model lattice");
        const int m = 2 * d;
        Payload x(std::size_t(m) * m, 0), y(std::size_t(m) * m, 0);
        for (int j = 0; j < m; ++j) {
            // image of the inner-basis vector w_j = standard column j
            EMat gw = g.col(j);
            for (int r = 0; r < m; ++r)
                y[std::size_t(r) * m + j] = code_at(gw, r, 0);
            // image of the outer-basis vector u_j
            EMat u(*C, 4 * d, 1, -1);
            if (j % 2 == 0)
                u.at(2 * d + j, 0) = C->of_int(C->p());  // e_{d+1+j/2}
            else
                u.at(2 * d + j, 0) = C->of_int(1);  // p^-1 f_{d+1+(j-1)/2}
            EMat gu = g.mul(u);
            for (int r = 0; r < m; ++r) {
                int flat = 2 * d + r;
                int extra = (r % 2 == 0) ? 0 : 1;  // f-coordinates count against p^-1 f
                x[std::size_t(r) * m + j] = code_at(gu, flat, extra);
            }
        }
        return {x, y};
    }

private:
    /// Residue code of p^(shift+extra) * stored coordinate `row`.
    std::uint16_t code_at(const EMat& v, int row, int extra) const {
        long k = v.shift() + extra;
        UE w = v.at(row, 0);
        if (k >= 1) return 0;
        if (k < 0) {
            long f = 1;
            for (long t = 0; t < -k; ++t) f *= C->p();
            if (w.a % f != 0 || w.b % f != 0)
                throw NotInStabilizer("image has a pole against the lattice chain");
            w = {w.a / f, w.b / f};
        }
        return static_cast<std::uint16_t>(C->residue_code(w));
    }
};

// ---- structured stabilizer elements ----

/// diag(u, conj(u)^-1) on hyperbolic pair `pos`, identity elsewhere.
inline EMat torus_element(const LatticeChain& ch, int pos, UE u) {
    const PadicCtx& C = *ch.C;
    if (!C.is_unit(u)) throw PreconditionFailed("torus entries must be units");
    EMat g = EMat::identity(C, 4 * ch.d);
    g.at(2 * pos, 2 * pos) = u;
    g.at(2 * pos + 1, 2 * pos + 1) = C.inv(C.conj(u));
    return g;
}

/// Unipotent on pair `pos`: orientation 0 sends f to f + z e (z must make the
/// image stay in the lattice), orientation 1 sends e to e + z f.
/// Requires trace(z) = 0.
inline EMat unipotent_element(const LatticeChain& ch, int pos, int orientation, UE z) {
    const PadicCtx& C = *ch.C;
    if (C.trace(z) != 0) throw PreconditionFailed("unipotent entry must have trace zero");
    EMat g = EMat::identity(C, 4 * ch.d);
    if (orientation == 0)
        g.at(2 * pos, 2 * pos + 1) = z;
    else
        g.at(2 * pos + 1, 2 * pos) = z;
    return g;
}

/// The isometry exchanging e and f on pair `pos`; on pairs of the scaled
/// block the exchange is weighted by p so the model lattice is preserved.
inline EMat weyl_element(const LatticeChain& ch, int pos) {
    const PadicCtx& C = *ch.C;
    if (pos < ch.d) {
        EMat g = EMat::identity(C, 4 * ch.d);
        g.at(2 * pos, 2 * pos) = UE{};
        g.at(2 * pos + 1, 2 * pos + 1) = UE{};
        g.at(2 * pos, 2 * pos + 1) = C.of_int(1);
        g.at(2 * pos + 1, 2 * pos) = C.of_int(1);
        return g;
    }
    // e -> p^-1 f, f -> p e
    EMat g(C, 4 * ch.d, 4 * ch.d, -1);
    for (int i = 0; i < 4 * ch.d; ++i) g.at(i, i) = C.of_int(C.p());
    g.at(2 * pos, 2 * pos) = UE{};
    g.at(2 * pos + 1, 2 * pos + 1) = UE{};
    g.at(2 * pos + 1, 2 * pos) = C.of_int(1);
    g.at(2 * pos, 2 * pos + 1) = C.of_int(C.mulmod(C.p(), C.p()));
    return g;
}

/// Swap of two hyperbolic pairs within the same scaling block.
inline EMat pair_swap_element(const LatticeChain& ch, int pos1, int pos2) {
    const PadicCtx& C = *ch.C;
    bool b1 = pos1 < ch.d, b2 = pos2 < ch.d;
    if (b1 != b2) throw PreconditionFailed("pair swap must stay within one scaling block");
    EMat g = EMat::identity(C, 4 * ch.d);
    for (int t = 0; t < 2; ++t) {
        int i = 2 * pos1 + t, j = 2 * pos2 + t;
        g.at(i, i) = UE{};
        g.at(j, j) = UE{};
        g.at(i, j) = C.of_int(1);
        g.at(j, i) = C.of_int(1);
    }
    return g;
}

// ---- norm-one units ----

/// All residues of norm exactly 1, in lexicographic (a, b) order.
inline std::vector<UE> e1_elements(const PadicCtx& C) {
    std::vector<UE> out;
    for (long a = 0; a < C.pn(); ++a)
        for (long b = 0; b < C.pn(); ++b)
            if (C.norm({a, b}) == 1) out.push_back({a, b});
    return out;
}

/// The norm-one unit group as an abstract finite group (element i is
/// e1_elements(C)[i]).
inline GroupPtr e1_group(const PadicCtx& C) {
    std::vector<UE> el = e1_elements(C);
    if (el.size() > 4096) throw ClosureCapExceeded("norm-one group exceeds the table cap");
    auto find = [&](UE x) -> int {
        auto it = std::lower_bound(el.begin(), el.end(), x, [](const UE& l, const UE& r) {
            return l.a != r.a ? l.a < r.a : l.b < r.b;
        });
        if (it == el.end() || !(*it == x)) throw InternalError("norm-one set is not closed");
        return static_cast<int>(it - el.begin());
    };
    int n = static_cast<int>(el.size());
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) {
        labels[i] = C.str(el[i]);
        for (int j = 0; j < n; ++j) table[i][j] = find(C.mul(el[i], el[j]));
    }
    return FiniteGroup::from_table(std::move(table), std::move(labels));
}

struct E1Quotient {
    long order = 0;
    bool cyclic = false;
    std::vector<long> factors;  // invariant factors, each dividing the previous
};

/// The quotient of the norm-one group by r-th powers, with its invariant
/// factor decomposition (largest first).
inline E1Quotient e1_mod_rth_powers(const PadicCtx& C, long r) {
    if (r < 1) throw Error("power exponent must be positive");
    GroupPtr G = e1_group(C);
    std::vector<int> powers;
    {
        std::vector<char> seen(G->order(), 0);
        for (int i = 0; i < G->order(); ++i) seen[G->power(i, r)] = 1;
        for (int i = 0; i < G->order(); ++i)
            if (seen[i]) powers.push_back(i);
    }
    GroupPtr Q = quotient_by(G, powers).group;
    E1Quotient out;
    out.order = Q->order();
    while (Q->order() > 1) {
        int best = 0;
        long besto = 1;
        for (int i = 0; i < Q->order(); ++i) {
            long o = Q->element_order(i);
            if (o > besto) {
                besto = o;
                best = i;
            }
        }
        if (!out.factors.empty() && out.factors.back() % besto != 0)
            throw InternalError("invariant factors must form a divisibility chain");
        out.factors.push_back(besto);
        Q = quotient_by(Q, Q->closure_indices({best})).group;
    }
    out.cyclic = out.factors.size() <= 1;
    return out;
}

/// Whether a^r is a norm from the quadratic extension, for a = unit * p^val:
/// in the unramified case exactly when r * val is even.
inline bool is_similitude_scalar(const PadicCtx& C, long unit, long valuation, long r) {
    if (C.smod(unit) % C.p() == 0) throw PreconditionFailed("scalar unit part must be a unit");
    return (r * valuation) % 2 == 0;
}

/// A unit u with u * conj(u)^-1 = t, found by a residue scan and lifted one
/// precision level at a time.
inline UE hilbert90_lift(const PadicCtx& C, UE t) {
    if (C.norm(t) != 1) throw NotNormOne("element does not have norm one");
    const long p = C.p();
    UE u{};
    bool found = false;
    for (long a = 0; a < p && !found; ++a)
        for (long b = 0; b < p && !found; ++b) {
            if (a == 0 && b == 0) continue;
            UE cand{a, b};
            UE defect = C.sub(cand, C.mul(t, C.conj(cand)));
            if (defect.a % p == 0 && defect.b % p == 0) {
                u = cand;
                found = true;
            }
        }
    if (!found) throw InternalError("no residue-level solution for the norm-one lift");
    long pk = p;
    for (int k = 1; k < C.precision(); ++k, pk *= p) {
        long mod_next = pk * p;
        bool ok = false;
        for (long da = 0; da < p && !ok; ++da)
            for (long db = 0; db < p && !ok; ++db) {
                UE cand = C.add(u, UE{C.mulmod(da, pk), C.mulmod(db, pk)});
                UE defect = C.sub(cand, C.mul(t, C.conj(cand)));
                if (defect.a % mod_next == 0 && defect.b % mod_next == 0) {
                    u = cand;
                    ok = true;
                }
            }
        if (!ok) throw InternalError("norm-one lift failed to refine");
    }
    UE check = C.mul(u, C.inv(C.conj(u)));
    if (!(check == t)) throw InternalError("norm-one lift does not satisfy its defining relation");
    return u;
}

// ---- the swap diagram ----

struct SwapReport {
    int tested = 0;
    int failures = 0;
    std::string first_failure;
    bool pass() const { return tested > 0 && failures == 0; }
};

/// Structured elements of the stabilizer of the model lattice: torus
/// elements from Hilbert-90 lifts, weighted pair exchanges, block
/// permutations, unipotents, and a few mixed products.
inline std::vector<EMat> stabilizer_test_set(const LatticeChain& ch, int torus_stride = 1,
                                             int unipotent_stride = 1) {
    const PadicCtx& C = *ch.C;
    std::vector<EMat> out;
    out.push_back(EMat::identity(C, 4 * ch.d));
    std::vector<UE> e1 = e1_elements(C);
    for (int pos = 0; pos < 2 * ch.d; ++pos)
        for (std::size_t i = 0; i < e1.size(); i += torus_stride)
            out.push_back(torus_element(ch, pos, hilbert90_lift(C, e1[i])));
    for (int pos = 0; pos < 2 * ch.d; ++pos) out.push_back(weyl_element(ch, pos));
    for (int pos = 0; pos + 1 < ch.d; ++pos) out.push_back(pair_swap_element(ch, pos, pos + 1));
    for (int pos = ch.d; pos + 1 < 2 * ch.d; ++pos)
        out.push_back(pair_swap_element(ch, pos, pos + 1));
    // trace-zero entries; in the scaled block the f -> f + z e direction
    // needs z divisible by p to stay inside the lattice
    for (int pos = 0; pos < 2 * ch.d; ++pos)
        for (long b = 0; b < C.pn(); b += unipotent_stride) {
            UE z{0, C.smod(b)};
            if (C.trace(z) != 0) continue;
            out.push_back(unipotent_element(ch, pos, 1, z));
            UE z0 = pos < ch.d ? z : C.scale_up(z, 1);
            out.push_back(unipotent_element(ch, pos, 0, z0));
        }
    // deterministic mixed products
    std::size_t torus_at = 1;
    EMat w0 = weyl_element(ch, 0), wd = weyl_element(ch, ch.d);
    if (out.size() > torus_at) {
        out.push_back(out[torus_at].mul(w0));
        out.push_back(wd.mul(out[torus_at]));
        out.push_back(w0.mul(wd));
    }
    return out;
}

/// Checks that conjugation by the duality similitude swaps the two
/// components of the reduction pair, and that both components are isometries
/// of the shared residue form, over the structured test set.
inline SwapReport verify_swap_diagram(const PadicCtx& C, int d, int torus_stride = 1,
                                      int unipotent_stride = 1) {
    LatticeChain ch = LatticeChain::make(C, d);
    EMat g0 = ch.shift_sim;
    EMat g0inv = g0.scaled(1);  // the similitude squares to p^-1
    Payload G = ch.residue_gram();
    const SmallField& F = *ch.residue_field();
    const int m = 2 * d;
    auto res_isometry = [&](const Payload& x) {
        // conj(x)^T G x = G over the residue field
        Payload lhs(std::size_t(m) * m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                int acc = 0;
                for (int k = 0; k < m; ++k)
                    for (int l = 0; l < m; ++l)
                        acc = F.add(acc, F.mul(F.mul(F.conj(x[std::size_t(k) * m + i]),
                                                     G[std::size_t(k) * m + l]),
                                               x[std::size_t(l) * m + j]));
                lhs[std::size_t(i) * m + j] = static_cast<std::uint16_t>(acc);
            }
        return lhs == G;
    };

    SwapReport rep;
    for (const EMat& g : stabilizer_test_set(ch, torus_stride, unipotent_stride)) {
        ++rep.tested;
        auto fail = [&](const std::string& why) {
            ++rep.failures;
            if (rep.first_failure.empty()) rep.first_failure = why;
        };
        if (!ch.stabilizes(g)) {
            fail("test element does not stabilize the lattice");
            continue;
        }
        auto [x, y] = ch.reduction_pair(g);
        if (!res_isometry(x) || !res_isometry(y)) {
            fail("reduction is not an isometry of the residue form");
            continue;
        }
        EMat gc = g0.mul(g).mul(g0inv);
        auto [xc, yc] = ch.reduction_pair(gc);
        if (!(xc == y && yc == x)) fail("conjugation did not swap the reduction pair");
    }
    return rep;
}

}  // namespace charmult
