#pragma once

// Small finite fields with fully materialized operation tables.
//
// Fields are built as towers: a prime field F_p, optionally extended by a
// quadratic x^2 + A x + B (and that again, for F_16 over F_4 over F_2).
// Elements are integer codes; for an extension of a base of size q the code
// is lo + q * hi, meaning lo + hi * x. The base field therefore embeds as the
// codes with hi = 0, and conj() (the relative Frobenius t -> t^q) fixes
// exactly those codes.
//
// Construction goes through a process-wide registry so that structurally
// identical requests return the same object; payload comparisons elsewhere
// rely on pointer identity of fields.

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "charmult/errors.hpp"

namespace charmult {

class SmallField;
using FieldPtr = std::shared_ptr<const SmallField>;

class SmallField {
public:
    long p() const { return p_; }
    long deg() const { return deg_; }    // degree over the prime field
    long q() const { return q_; }        // field size
    bool is_ext() const { return static_cast<bool>(base_); }
    const FieldPtr& base() const { return base_; }
    int modulus_a() const { return A_; } // x^2 + A x + B over base()
    int modulus_b() const { return B_; }

    int add(int a, int b) const { return addt_[a * q_ + b]; }
    int sub(int a, int b) const { return addt_[a * q_ + negt_[b]]; }
    int mul(int a, int b) const { return mult_[a * q_ + b]; }
    int neg(int a) const { return negt_[a]; }
    int inv(int a) const {
        if (a == 0) throw DivisionByZero("inverse of zero field element");
        return invt_[a];
    }

    int pow(int a, long e) const {
        if (a == 0) {
            if (e < 0) throw DivisionByZero("inverse of zero field element");
            return e == 0 ? 1 : 0;
        }
        long m = q_ - 1;
        e %= m;
        if (e < 0) e += m;
        int acc = 1, base = a;
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    /// Absolute Frobenius t -> t^p.
    int frob(int a) const { return frobt_[a]; }

    /// Relative Frobenius t -> t^(size of base); the "bar" involution of a
    /// quadratic extension. Only extensions carry one.
    int conj(int a) const {
        if (!is_ext()) throw Error("conj requires a quadratic extension field");
        return conjt_[a];
    }
    bool in_base(int a) const { return is_ext() && a < base_->q(); }
    int trace_conj(int a) const { return add(a, conj(a)); }
    int norm_conj(int a) const { return mul(a, conj(a)); }

    /// Smallest code generating the multiplicative group.
    int mult_generator() const { return gen_; }

    std::string elem_str(int a) const {
        if (!is_ext()) return std::to_string(a);
        int lo = a % static_cast<int>(base_->q());
        int hi = a / static_cast<int>(base_->q());
        if (hi == 0) return base_->elem_str(lo);
        std::string xs = (hi == 1) ? "x" : base_->elem_str(hi) + "x";
        if (lo == 0) return xs;
        return xs + "+" + base_->elem_str(lo);
    }

    static FieldPtr prime(long p) {
        static std::map<long, FieldPtr> reg;
        auto it = reg.find(p);
        if (it != reg.end()) return it->second;
        if (p < 2 || p > 31) throw Error("prime field characteristic out of supported range");
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) throw Error("field characteristic must be prime");
        auto f = FieldPtr(new SmallField(p));
        reg.emplace(p, f);
        return f;
    }

    /// Extension by an explicit irreducible x^2 + A x + B (base codes).
    static FieldPtr quadratic_ext(const FieldPtr& base, int A, int B) {
        static std::map<std::tuple<const SmallField*, int, int>, FieldPtr> reg;
        auto key = std::make_tuple(base.get(), A, B);
        auto it = reg.find(key);
        if (it != reg.end()) return it->second;
        for (int t = 0; t < base->q(); ++t)
            if (base->add(base->add(base->mul(t, t), base->mul(A, t)), B) == 0)
                throw Error("quadratic modulus is reducible");
        auto f = FieldPtr(new SmallField(base, A, B));
        reg.emplace(key, f);
        return f;
    }

    /// Extension by the lexicographically smallest irreducible quadratic
    /// (coefficients (A, B) scanned in code order).
    static FieldPtr quadratic_ext(const FieldPtr& base) {
        for (int A = 0; A < base->q(); ++A)
            for (int B = 0; B < base->q(); ++B) {
                bool irred = true;
                for (int t = 0; t < base->q() && irred; ++t)
                    if (base->add(base->add(base->mul(t, t), base->mul(A, t)), B) == 0) irred = false;
                if (irred) return quadratic_ext(base, A, B);
            }
        throw InternalError("no irreducible quadratic found"); // impossible
    }

private:
    explicit SmallField(long p) : p_(p), deg_(1), q_(p) {
        build_tables([&](int a, int b) { return static_cast<int>((static_cast<long>(a) + b) % p_); },
                     [&](int a, int b) { return static_cast<int>((static_cast<long>(a) * b) % p_); });
        conjt_.clear();
    }

    SmallField(const FieldPtr& base, int A, int B)
        : p_(base->p()), deg_(base->deg() * 2), q_(base->q() * base->q()), base_(base), A_(A), B_(B) {
        if (q_ > 4096) throw Error("extension field too large for table representation");
        const SmallField& F = *base_;
        const int qb = static_cast<int>(F.q());
        const int negA = F.neg(A), negB = F.neg(B);
        auto enc = [&](int lo, int hi) { return lo + qb * hi; };
        build_tables(
            [&](int a, int b) {
                return enc(F.add(a % qb, b % qb), F.add(a / qb, b / qb));
            },
            [&](int a, int b) {
                int al = a % qb, ah = a / qb, bl = b % qb, bh = b / qb;
                int hh = F.mul(ah, bh);
                int lo = F.add(F.mul(al, bl), F.mul(hh, negB));
                int hi = F.add(F.add(F.mul(al, bh), F.mul(ah, bl)), F.mul(hh, negA));
                return enc(lo, hi);
            });
        // conj(a + b x) = (a - A b) - b x
        conjt_.resize(q_);
        for (int a = 0; a < q_; ++a) {
            int lo = a % qb, hi = a / qb;
            conjt_[a] = enc(F.sub(lo, F.mul(A, hi)), F.neg(hi));
        }
        long fixed = 0;
        for (int a = 0; a < q_; ++a)
            if (conjt_[a] == a) ++fixed;
        if (fixed != qb) throw InternalError("conj fixed set is not the base field");
    }

    template <typename Add, typename Mul>
    void build_tables(Add radd, Mul rmul) {
        addt_.resize(q_ * q_);
        mult_.resize(q_ * q_);
        negt_.resize(q_);
        invt_.assign(q_, 0);
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b) {
                addt_[a * q_ + b] = radd(a, b);
                mult_[a * q_ + b] = rmul(a, b);
            }
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b)
                if (addt_[a * q_ + b] == 0) { negt_[a] = b; break; }
        for (int a = 1; a < q_; ++a)
            for (int b = 1; b < q_; ++b)
                if (mult_[a * q_ + b] == 1) { invt_[a] = b; break; }
        frobt_.resize(q_);
        for (int a = 0; a < q_; ++a) frobt_[a] = pow(a, p_);
        gen_ = 0;
        for (int a = 1; a < q_ && gen_ == 0; ++a) {
            int x = a;
            long ord = 1;
            while (x != 1) { x = mul(x, a); ++ord; }
            if (ord == q_ - 1) gen_ = a;
        }
        if (q_ > 2 && gen_ == 0) throw InternalError("no multiplicative generator found");
        if (q_ == 2) gen_ = 1;
    }

    long p_, deg_, q_;
    FieldPtr base_;
    int A_ = 0, B_ = 0;
    std::vector<int> addt_, mult_, negt_, invt_, frobt_, conjt_;
    int gen_ = 0;
};

} // namespace charmult
