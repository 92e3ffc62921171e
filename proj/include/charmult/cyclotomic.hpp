#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_n).
//
// A value is stored against the power basis 1, x, ..., x^(phi(n)-1) of
// Q[x]/Phi_n(x), where Phi_n is the n-th cyclotomic polynomial, and n is the
// smallest conductor containing the value. Reduction mod Phi_n plus greedy
// conductor descent gives a unique normal form, so equality is a plain
// coefficient comparison. Coefficients are exact rationals; nothing here
// rounds, ever.
//
// Conductor conventions: binary operations lift both operands to the lcm of
// the conductors, compute there, then descend again. The per-conductor
// contexts (Phi_n and the x^e tables) are cached process-wide; the cache is
// not guarded, callers are expected to be single-threaded.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charmult/errors.hpp"
#include "charmult/rational.hpp"

namespace charmult {

namespace cyclo_detail {

using QPoly = std::vector<Rat>; // coefficient vector, index = degree

inline void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

// division with remainder; b must be nonzero
inline std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
    trim(a);
    if (b.empty()) throw DivisionByZero("polynomial division by zero");
    QPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rat(0));
    const Rat lead = b.back();
    while (a.size() >= b.size()) {
        Rat f = a.back() / lead;
        std::size_t shift = a.size() - b.size();
        q[shift] += f;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        trim(a);
    }
    trim(q);
    return {q, a};
}

inline QPoly divexact(const QPoly& a, const QPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.empty()) throw InternalError("inexact polynomial division");
    return q;
}

inline long euler_phi(long n) {
    long r = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        r -= r / p;
        while (m % p == 0) m /= p;
    }
    if (m > 1) r -= r / m;
    return r;
}

inline std::vector<long> prime_divisors(long n) {
    std::vector<long> ps;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        ps.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

inline const QPoly& cyclo_poly(long n) {
    static std::map<long, QPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    QPoly p(n + 1, Rat(0));
    p[0] = -1;
    p[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d) continue;
        p = divexact(p, cyclo_poly(d));
    }
    return cache.emplace(n, std::move(p)).first->second;
}

} // namespace cyclo_detail

/// Per-conductor context: Phi_n plus a lazily grown table of x^e mod Phi_n.
class CycloCtx {
public:
    explicit CycloCtx(long n) : n_(n), phi_(cyclo_detail::cyclo_poly(n)) {
        deg_ = static_cast<long>(phi_.size()) - 1;
        if (deg_ != cyclo_detail::euler_phi(n))
            throw InternalError("cyclotomic degree mismatch");
    }

    long n() const { return n_; }
    long deg() const { return deg_; }
    const cyclo_detail::QPoly& phi() const { return phi_; }

    /// x^e mod Phi_n as a dense vector of length deg(). Requires e >= 0.
    const std::vector<Rat>& xpow(long e) const {
        if (e < 0) throw InternalError("negative exponent in xpow");
        while (static_cast<long>(pows_.size()) <= e) {
            if (pows_.empty()) {
                std::vector<Rat> one(deg_, Rat(0));
                if (deg_ > 0) one[0] = 1;
                pows_.push_back(std::move(one));
                continue;
            }
            const auto& prev = pows_.back();
            std::vector<Rat> v(deg_ + 1, Rat(0));
            for (long i = 0; i < deg_; ++i) v[i + 1] = prev[i];
            Rat lead = v[deg_];
            if (lead != 0)
                for (long i = 0; i < deg_; ++i) v[i] -= lead * phi_[i];
            v.resize(deg_);
            pows_.push_back(std::move(v));
        }
        return pows_[e];
    }

private:
    long n_;
    cyclo_detail::QPoly phi_;
    long deg_;
    mutable std::vector<std::vector<Rat>> pows_;
};

inline const CycloCtx& cyclo_ctx(long n) {
    static std::map<long, std::unique_ptr<CycloCtx>> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<CycloCtx>(n)).first;
    return *it->second;
}

class CycNum {
public:
    CycNum() : order_(1), c_{Rat(0)} {}
    CycNum(long v) : order_(1), c_{Rat(v)} {}       // NOLINT: implicit on purpose
    CycNum(const Rat& v) : order_(1), c_{v} { c_[0].canonicalize(); } // NOLINT: implicit on purpose

    /// Primitive n-th root of unity.
    static CycNum zeta(long n) {
        if (n < 1) throw Error("zeta requires n >= 1");
        return from_root_sum(n, {{1 % n, Rat(1)}});
    }

    /// Sum of coeff * zeta_n^exp terms; exponents are taken mod n.
    static CycNum from_root_sum(long n, const std::vector<std::pair<long, Rat>>& terms) {
        if (n < 1) throw Error("conductor must be >= 1");
        if (n > 1000000) throw Error("conductor out of supported range");
        const CycloCtx& ctx = cyclo_ctx(n);
        std::vector<Rat> acc(ctx.deg(), Rat(0));
        for (const auto& [e, rr] : terms) {
            Rat r = rr;
            r.canonicalize();
            if (r == 0) continue;
            long em = ((e % n) + n) % n;
            const auto& xp = ctx.xpow(em);
            for (long i = 0; i < ctx.deg(); ++i) acc[i] += r * xp[i];
        }
        return CycNum(n, std::move(acc));
    }

    long order() const { return order_; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const { return order_ == 1 && c_[0] == 0; }
    bool is_rational() const { return order_ == 1; }
    bool is_integer() const { return is_rational() && rat_is_integer(c_[0]); }

    const Rat& rational_value() const {
        if (!is_rational()) throw NotRational("value of conductor " + std::to_string(order_) + " is not rational");
        return c_[0];
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        long L = std::lcm(a.order_, b.order_);
        std::vector<Rat> ca = a.coords_at(L), cb = b.coords_at(L);
        for (std::size_t i = 0; i < ca.size(); ++i) ca[i] += cb[i];
        return CycNum(L, std::move(ca));
    }

    friend CycNum operator-(const CycNum& a, const CycNum& b) {
        long L = std::lcm(a.order_, b.order_);
        std::vector<Rat> ca = a.coords_at(L), cb = b.coords_at(L);
        for (std::size_t i = 0; i < ca.size(); ++i) ca[i] -= cb[i];
        return CycNum(L, std::move(ca));
    }

    CycNum operator-() const {
        std::vector<Rat> c = c_;
        for (auto& v : c) v = -v;
        return CycNum(order_, std::move(c), /*already_minimal=*/true);
    }

    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        long L = std::lcm(a.order_, b.order_);
        const CycloCtx& ctx = cyclo_ctx(L);
        long d = ctx.deg();
        std::vector<Rat> ca = a.coords_at(L), cb = b.coords_at(L);
        std::vector<Rat> raw(2 * d - 1 > 0 ? 2 * d - 1 : 1, Rat(0));
        for (long i = 0; i < d; ++i) {
            if (ca[i] == 0) continue;
            for (long j = 0; j < d; ++j)
                if (cb[j] != 0) raw[i + j] += ca[i] * cb[j];
        }
        const auto& phi = ctx.phi();
        for (long k = 2 * d - 2; k >= d; --k) {
            if (raw[k] == 0) continue;
            for (long i = 0; i < d; ++i) raw[k - d + i] -= raw[k] * phi[i];
            raw[k] = 0;
        }
        raw.resize(d);
        return CycNum(L, std::move(raw));
    }

    friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

    CycNum& operator+=(const CycNum& o) { *this = *this + o; return *this; }
    CycNum& operator-=(const CycNum& o) { *this = *this - o; return *this; }
    CycNum& operator*=(const CycNum& o) { *this = *this * o; return *this; }

    friend bool operator==(const CycNum& a, const CycNum& b) {
        return a.order_ == b.order_ && a.c_ == b.c_;
    }
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    /// Multiplicative inverse via the extended Euclidean algorithm against Phi_n.
    CycNum inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero");
        if (order_ == 1) return CycNum(Rat(1) / c_[0]);
        using cyclo_detail::QPoly;
        const CycloCtx& ctx = cyclo_ctx(order_);
        QPoly a = c_;
        cyclo_detail::trim(a);
        QPoly r0 = ctx.phi(), r1 = a;
        QPoly u0, u1{Rat(1)};
        while (!r1.empty()) {
            auto [q, r] = cyclo_detail::divmod(r0, r1);
            QPoly u2 = u0;
            QPoly qu = cyclo_detail::mul(q, u1);
            if (u2.size() < qu.size()) u2.resize(qu.size(), Rat(0));
            for (std::size_t i = 0; i < qu.size(); ++i) u2[i] -= qu[i];
            cyclo_detail::trim(u2);
            r0 = std::move(r1);
            r1 = std::move(r);
            u0 = std::move(u1);
            u1 = std::move(u2);
        }
        if (r0.size() != 1) throw InternalError("gcd with cyclotomic polynomial not constant");
        std::vector<Rat> inv(ctx.deg(), Rat(0));
        for (std::size_t i = 0; i < u0.size() && i < inv.size(); ++i) inv[i] = u0[i] / r0[0];
        return CycNum(order_, std::move(inv), /*already_minimal=*/true);
    }

    /// Galois substitution zeta_n -> zeta_n^k, gcd(k, n) = 1.
    CycNum galois(long k) const {
        long n = order_;
        long km = ((k % n) + n) % n;
        if (std::gcd(km, n) != 1)
            throw Error("galois exponent " + std::to_string(k) + " not coprime to conductor " + std::to_string(n));
        if (n <= 2 || km == 1) return *this;
        const CycloCtx& ctx = cyclo_ctx(n);
        std::vector<Rat> acc(ctx.deg(), Rat(0));
        for (long j = 0; j < ctx.deg(); ++j) {
            if (c_[j] == 0) continue;
            const auto& xp = ctx.xpow((j * km) % n);
            for (long i = 0; i < ctx.deg(); ++i) acc[i] += c_[j] * xp[i];
        }
        // automorphisms preserve the minimal conductor
        return CycNum(n, std::move(acc), /*already_minimal=*/true);
    }

    /// Complex conjugation, zeta -> zeta^(-1).
    CycNum conj() const { return order_ <= 2 ? *this : galois(order_ - 1); }

    CycNum pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CycNum base = *this, acc = CycNum(1);
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    /// Dense coordinates lifted to conductor m (order() must divide m).
    std::vector<Rat> coords_at(long m) const {
        if (m % order_) throw Error("cannot lift conductor " + std::to_string(order_) + " to " + std::to_string(m));
        if (m == order_) return c_;
        const CycloCtx& ctx = cyclo_ctx(m);
        long f = m / order_;
        std::vector<Rat> acc(ctx.deg(), Rat(0));
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            const auto& xp = ctx.xpow(static_cast<long>(j) * f);
            for (long i = 0; i < ctx.deg(); ++i) acc[i] += c_[j] * xp[i];
        }
        return acc;
    }

    /// Deterministic total order (conductor, then coefficients). Used for
    /// canonical sorting only; it has no numeric meaning.
    static int cmp(const CycNum& a, const CycNum& b) {
        if (a.order_ != b.order_) return a.order_ < b.order_ ? -1 : 1;
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            int s = ::cmp(a.c_[i], b.c_[i]);
            if (s != 0) return s < 0 ? -1 : 1;
        }
        return 0;
    }

    std::string str() const {
        if (order_ == 1) return rat_to_string(c_[0]);
        std::string out;
        for (long j = static_cast<long>(c_.size()) - 1; j >= 0; --j) {
            const Rat& r = c_[j];
            if (r == 0) continue;
            bool neg = r < 0;
            Rat mag = neg ? Rat(-r) : r;
            if (out.empty())
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            std::string term;
            if (j == 0) {
                term = rat_to_string(mag);
            } else {
                std::string zpart = "z" + std::to_string(order_) + (j > 1 ? "^" + std::to_string(j) : "");
                term = (mag == 1) ? zpart : rat_to_string(mag) + "*" + zpart;
            }
            out += term;
        }
        return out.empty() ? "0" : out;
    }

private:
    CycNum(long n, std::vector<Rat>&& coords, bool already_minimal = false)
        : order_(n), c_(std::move(coords)) {
        if (!already_minimal) normalize();
    }

    void normalize() {
        for (;;) {
            if (order_ == 1) { c_.resize(1, Rat(0)); return; }
            bool flat = true;
            for (std::size_t i = 1; i < c_.size(); ++i)
                if (c_[i] != 0) { flat = false; break; }
            if (flat) {
                Rat v = c_.empty() ? Rat(0) : c_[0];
                order_ = 1;
                c_.assign(1, v);
                return;
            }
            bool descended = false;
            for (long p : cyclo_detail::prime_divisors(order_)) {
                if (try_descend(order_ / p)) { descended = true; break; }
            }
            if (!descended) return;
        }
    }

    // attempt to rewrite the value at conductor d = n/p; true on success
    bool try_descend(long d) {
        long n = order_;
        const CycloCtx& ctx = cyclo_ctx(n);
        // fixed under every automorphism zeta -> zeta^k with k = 1 mod d?
        for (long k = 1 + d; k < n; k += d) {
            if (std::gcd(k, n) != 1) continue;
            std::vector<Rat> img(ctx.deg(), Rat(0));
            for (long j = 0; j < ctx.deg(); ++j) {
                if (c_[j] == 0) continue;
                const auto& xp = ctx.xpow((j * k) % n);
                for (long i = 0; i < ctx.deg(); ++i) img[i] += c_[j] * xp[i];
            }
            if (img != c_) return false;
        }
        // re-coordinatize: solve sum_t y_t x^(t*n/d) = value
        const CycloCtx& dctx = cyclo_ctx(d);
        long rows = ctx.deg(), cols = dctx.deg();
        long f = n / d;
        std::vector<std::vector<Rat>> M(cols);
        for (long t = 0; t < cols; ++t) M[t] = ctx.xpow((t * f) % n);
        std::vector<Rat> rhs = c_;
        std::vector<long> pivot_row(cols, -1);
        long prow = 0;
        for (long col = 0; col < cols && prow < rows; ++col) {
            long r = -1;
            for (long i = prow; i < rows; ++i)
                if (M[col][i] != 0) { r = i; break; }
            if (r < 0) continue;
            for (long t = 0; t < cols; ++t) std::swap(M[t][r], M[t][prow]);
            std::swap(rhs[r], rhs[prow]);
            Rat inv = Rat(1) / M[col][prow];
            for (long t = 0; t < cols; ++t) M[t][prow] *= inv;
            rhs[prow] *= inv;
            for (long i = 0; i < rows; ++i) {
                if (i == prow || M[col][i] == 0) continue;
                Rat fct = M[col][i];
                for (long t = 0; t < cols; ++t) M[t][i] -= fct * M[t][prow];
                rhs[i] -= fct * rhs[prow];
            }
            pivot_row[col] = prow;
            ++prow;
        }
        std::vector<Rat> y(cols, Rat(0));
        for (long col = 0; col < cols; ++col)
            if (pivot_row[col] >= 0) y[col] = rhs[pivot_row[col]];
        for (long i = prow; i < rows; ++i)
            if (rhs[i] != 0) throw InternalError("conductor descent produced an inconsistent system");
        // verify (cheap, and protects against rank deficiencies)
        std::vector<Rat> back(rows, Rat(0));
        for (long t = 0; t < cols; ++t) {
            if (y[t] == 0) continue;
            const auto& xp = ctx.xpow((t * f) % n);
            for (long i = 0; i < rows; ++i) back[i] += y[t] * xp[i];
        }
        if (back != c_) throw InternalError("conductor descent verification failed");
        order_ = d;
        c_ = std::move(y);
        return true;
    }

    long order_;
    std::vector<Rat> c_;
};

inline CycNum operator*(long s, const CycNum& a) { return CycNum(s) * a; }
inline CycNum operator*(const Rat& s, const CycNum& a) { return CycNum(s) * a; }

} // namespace charmult
