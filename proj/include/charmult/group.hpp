#pragma once

// Finite groups with explicit element indexing.
//
// Elements live in one of three representations: permutations (image
// vectors), matrices over a SmallField (row-major code vectors), or rows of
// an explicit multiplication table. Permutation and matrix payloads share a
// uniform encoding as vectors of uint16 codes, and groups keep a payload ->
// index map so products computed symbolically can be turned back into
// indices.
//
// Index discipline: groups built from generators number elements in
// breadth-first discovery order (identity first, right-multiplication by the
// generators in the order given); groups built from element lists keep the
// caller's (sorted) order. Everything downstream (conjugacy classes, coset
// representatives, character rows) derives deterministic orderings from
// these indices, which is what makes cached artifacts byte-stable.
//
// Products are memoized in a flat index-pair table once the group is small
// enough (order <= kTableLimit); larger groups recompute payload products on
// demand.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "charmult/errors.hpp"
#include "charmult/fnv.hpp"
#include "charmult/smallfield.hpp"

namespace charmult {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline constexpr long kDefaultClosureCap = 200000;
inline constexpr long kTableLimit = 4096;

using Payload = std::vector<std::uint16_t>;

namespace group_detail {

struct PayloadHash {
    std::size_t operator()(const Payload& p) const {
        return static_cast<std::size_t>(fnv1a64(p.data(), p.size() * sizeof(std::uint16_t)));
    }
};

} // namespace group_detail

class FiniteGroup {
public:
    enum class Kind { Perm, Mat, Table };

    long order() const { return n_; }
    int id() const { return id_; }
    Kind kind() const { return kind_; }
    const FieldPtr& field() const { return F_; }
    int dim() const { return dim_; }       // matrix dimension (Mat) or perm degree (Perm)
    const Payload& payload(int i) const { return pay_[i]; }

    int mult(int i, int j) const {
        if (kind_ == Kind::Table) return table_[i][j];
        if (n_ <= kTableLimit) {
            if (memo_.empty()) memo_.assign(n_ * n_, kUnset);
            std::uint16_t& slot = memo_[static_cast<std::size_t>(i) * n_ + j];
            if (slot != kUnset) return slot;
            int k = find_required(compose(pay_[i], pay_[j]));
            slot = static_cast<std::uint16_t>(k);
            return k;
        }
        return find_required(compose(pay_[i], pay_[j]));
    }

    int inv(int i) const {
        if (inv_.empty()) inv_.assign(n_, -1);
        if (inv_[i] >= 0) return inv_[i];
        int r;
        if (kind_ == Kind::Table) {
            r = -1;
            for (int j = 0; j < n_; ++j)
                if (table_[i][j] == id_) { r = j; break; }
            if (r < 0) throw InternalError("element without inverse");
        } else {
            r = find_required(invert_payload(pay_[i]));
        }
        inv_[i] = r;
        return r;
    }

    int power(int i, long e) const {
        long o = element_order(i);
        e %= o;
        if (e < 0) e += o;
        int acc = id_, base = i;
        while (e > 0) {
            if (e & 1) acc = mult(acc, base);
            base = mult(base, base);
            e >>= 1;
        }
        return acc;
    }

    long element_order(int i) const {
        if (eorder_.empty()) eorder_.assign(n_, 0);
        if (eorder_[i]) return eorder_[i];
        long o = 1;
        int x = i;
        while (x != id_) { x = mult(x, i); ++o; }
        eorder_[i] = o;
        return o;
    }

    long exponent() const {
        long e = 1;
        for (int i = 0; i < n_; ++i) e = std::lcm(e, element_order(i));
        return e;
    }

    /// Generating set; the construction generators when available, otherwise
    /// a greedy least-index set computed on first use.
    const std::vector<int>& generators() const {
        if (!gens_.empty() || n_ == 1) return gens_;
        std::vector<int> g;
        std::vector<char> in(n_, 0);
        long cnt = 0;
        auto grow = [&]() {
            std::fill(in.begin(), in.end(), 0);
            auto cl = closure_indices(g);
            for (int x : cl) in[x] = 1;
            cnt = static_cast<long>(cl.size());
        };
        grow();
        while (cnt < n_) {
            int pick = 0;
            while (in[pick]) ++pick;
            g.push_back(pick);
            grow();
        }
        gens_ = std::move(g);
        return gens_;
    }

    /// Subgroup generated by the given elements, as a sorted index list.
    std::vector<int> closure_indices(const std::vector<int>& seed) const {
        std::vector<char> in(n_, 0);
        std::vector<int> out{id_};
        in[id_] = 1;
        for (std::size_t t = 0; t < out.size(); ++t)
            for (int g : seed) {
                int w = mult(out[t], g);
                if (!in[w]) { in[w] = 1; out.push_back(w); }
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    const std::vector<std::vector<int>>& classes() const {
        if (!classes_.empty()) return classes_;
        const auto& gs = generators();
        std::vector<int> gi;
        gi.reserve(gs.size());
        for (int g : gs) gi.push_back(inv(g));
        std::vector<int> cls(n_, -1);
        std::vector<std::vector<int>> out;
        for (int i = 0; i < n_; ++i) {
            if (cls[i] >= 0) continue;
            int cid = static_cast<int>(out.size());
            std::vector<int> members{i};
            cls[i] = cid;
            for (std::size_t t = 0; t < members.size(); ++t)
                for (std::size_t k = 0; k < gs.size(); ++k) {
                    int y = mult(mult(gs[k], members[t]), gi[k]);
                    if (cls[y] < 0) { cls[y] = cid; members.push_back(y); }
                }
            std::sort(members.begin(), members.end());
            out.push_back(std::move(members));
        }
        classes_ = std::move(out);
        class_of_ = std::move(cls);
        return classes_;
    }

    int class_of(int i) const {
        classes();
        return class_of_[i];
    }
    int class_rep(int c) const { return classes()[c][0]; }
    long class_size(int c) const { return static_cast<long>(classes()[c].size()); }
    long num_classes() const { return static_cast<long>(classes().size()); }

    bool abelian() const {
        const auto& gs = generators();
        for (int a : gs)
            for (int b : gs)
                if (mult(a, b) != mult(b, a)) return false;
        return true;
    }

    std::vector<int> center_indices() const {
        const auto& gs = generators();
        std::vector<int> out;
        for (int i = 0; i < n_; ++i) {
            bool c = true;
            for (int g : gs)
                if (mult(i, g) != mult(g, i)) { c = false; break; }
            if (c) out.push_back(i);
        }
        return out;
    }

    std::vector<int> normal_closure(std::vector<int> seed) const {
        const auto& gs = generators();
        std::sort(seed.begin(), seed.end());
        seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
        std::vector<int> T = seed;
        std::vector<int> H = closure_indices(T);
        for (;;) {
            bool changed = false;
            std::vector<char> in(n_, 0);
            for (int x : H) in[x] = 1;
            std::vector<int> add;
            for (int t : T)
                for (int g : gs) {
                    int c = mult(mult(g, t), inv(g));
                    if (!in[c]) { add.push_back(c); in[c] = 1; changed = true; }
                }
            if (!changed) break;
            T.insert(T.end(), add.begin(), add.end());
            H = closure_indices(T);
        }
        return H;
    }

    std::vector<int> derived_indices() const {
        const auto& gs = generators();
        std::vector<int> comms;
        for (int a : gs)
            for (int b : gs)
                comms.push_back(mult(mult(inv(a), inv(b)), mult(a, b)));
        return normal_closure(comms);
    }

    /// Is the (sorted) index set a normal subgroup? Assumes it is a subgroup.
    bool is_normal_subset(const std::vector<int>& sub) const {
        std::vector<char> in(n_, 0);
        for (int s : sub) in[s] = 1;
        for (int g : generators()) {
            int gi = inv(g);
            for (int s : sub)
                if (!in[mult(mult(g, s), gi)]) return false;
        }
        return true;
    }

    std::optional<int> index_of_payload(const Payload& p) const {
        auto it = index_.find(p);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::string label(int i) const {
        if (!labels_.empty()) return labels_[i];
        if (kind_ == Kind::Perm) return perm_str(pay_[i]);
        if (kind_ == Kind::Mat) return mat_str(pay_[i]);
        return "g" + std::to_string(i);
    }

    std::vector<std::vector<int>> to_table() const {
        if (n_ > kTableLimit) throw Error("group too large to materialize a table");
        std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) t[i][j] = mult(i, j);
        return t;
    }

    /// Content hash of the full multiplication table; cache key material.
    std::uint64_t table_hash() const {
        if (n_ > kTableLimit) throw Error("group too large to hash its table");
        std::uint64_t h = fnv1a64_u64(static_cast<std::uint64_t>(n_), 14695981039346656037ULL);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) h = fnv1a64_u64(static_cast<std::uint64_t>(mult(i, j)), h);
        return h;
    }

    // ---- factories ----

    static GroupPtr from_perm_generators(const std::vector<std::vector<int>>& gens,
                                         long cap = kDefaultClosureCap) {
        if (gens.empty()) throw Error("need at least one permutation generator");
        std::size_t d = gens[0].size();
        std::vector<Payload> gp;
        for (const auto& g : gens) {
            if (g.size() != d) throw Error("permutation generators act on different sets");
            std::vector<char> seen(d, 0);
            Payload p(d);
            for (std::size_t t = 0; t < d; ++t) {
                if (g[t] < 0 || static_cast<std::size_t>(g[t]) >= d || seen[g[t]])
                    throw Error("generator is not a permutation");
                seen[g[t]] = 1;
                p[t] = static_cast<std::uint16_t>(g[t]);
            }
            gp.push_back(std::move(p));
        }
        auto G = std::shared_ptr<FiniteGroup>(new FiniteGroup());
        G->kind_ = Kind::Perm;
        G->dim_ = static_cast<int>(d);
        Payload idp(d);
        for (std::size_t t = 0; t < d; ++t) idp[t] = static_cast<std::uint16_t>(t);
        G->close_from(idp, gp, cap);
        return G;
    }

    static GroupPtr from_mat_generators(const FieldPtr& F, int dim,
                                        const std::vector<std::vector<int>>& gens,
                                        long cap = kDefaultClosureCap) {
        if (gens.empty()) throw Error("need at least one matrix generator");
        std::vector<Payload> gp;
        for (const auto& g : gens) {
            if (static_cast<int>(g.size()) != dim * dim) throw Error("matrix generator has wrong shape");
            Payload p(g.size());
            for (std::size_t t = 0; t < g.size(); ++t) {
                if (g[t] < 0 || g[t] >= F->q()) throw Error("matrix entry out of field range");
                p[t] = static_cast<std::uint16_t>(g[t]);
            }
            gp.push_back(std::move(p));
        }
        auto G = std::shared_ptr<FiniteGroup>(new FiniteGroup());
        G->kind_ = Kind::Mat;
        G->F_ = F;
        G->dim_ = dim;
        for (const auto& p : gp)
            if (!G->mat_invertible(p)) throw Error("matrix generator is singular");
        Payload idp(dim * dim, 0);
        for (int t = 0; t < dim; ++t) idp[t * dim + t] = 1;
        G->close_from(idp, gp, cap);
        return G;
    }

    /// Group from an explicit closed element list (sorted deterministically).
    static GroupPtr from_mat_list(const FieldPtr& F, int dim, std::vector<Payload> elems) {
        auto G = std::shared_ptr<FiniteGroup>(new FiniteGroup());
        G->kind_ = Kind::Mat;
        G->F_ = F;
        G->dim_ = dim;
        std::sort(elems.begin(), elems.end());
        elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
        G->pay_ = std::move(elems);
        G->n_ = static_cast<long>(G->pay_.size());
        for (int i = 0; i < G->n_; ++i) G->index_.emplace(G->pay_[i], i);
        Payload idp(dim * dim, 0);
        for (int t = 0; t < dim; ++t) idp[t * dim + t] = 1;
        auto idx = G->index_of_payload(idp);
        if (!idx) throw Error("element list lacks the identity matrix");
        G->id_ = *idx;
        // closure check: every product must land back in the list
        for (int i = 0; i < G->n_; ++i)
            for (int j = 0; j < G->n_; ++j) G->mult(i, j);
        return G;
    }

    static GroupPtr from_table(std::vector<std::vector<int>> table,
                               std::vector<std::string> labels = {}) {
        auto G = std::shared_ptr<FiniteGroup>(new FiniteGroup());
        G->kind_ = Kind::Table;
        long n = static_cast<long>(table.size());
        if (n == 0) throw ParseError("empty multiplication table");
        for (const auto& row : table) {
            if (static_cast<long>(row.size()) != n) throw ParseError("multiplication table is not square");
            for (int v : row)
                if (v < 0 || v >= n) throw ParseError("multiplication table entry out of range");
        }
        if (!labels.empty() && static_cast<long>(labels.size()) != n)
            throw ParseError("label count does not match table size");
        G->table_ = std::move(table);
        G->labels_ = std::move(labels);
        G->n_ = n;
        G->validate_table();
        return G;
    }

    friend GroupPtr direct_product(const GroupPtr& A, const GroupPtr& B);
    friend GroupPtr semidirect_with_swap(const GroupPtr& G, long cap);

private:
    FiniteGroup() = default;

    static constexpr std::uint16_t kUnset = 0xffff;

    Payload compose(const Payload& a, const Payload& b) const {
        if (kind_ == Kind::Perm) {
            Payload r(a.size());
            for (std::size_t t = 0; t < a.size(); ++t) r[t] = a[b[t]];
            return r;
        }
        const SmallField& F = *F_;
        int d = dim_;
        Payload r(d * d, 0);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                int aik = a[i * d + k];
                if (!aik) continue;
                for (int j = 0; j < d; ++j) {
                    int bkj = b[k * d + j];
                    if (!bkj) continue;
                    r[i * d + j] = static_cast<std::uint16_t>(F.add(r[i * d + j], F.mul(aik, bkj)));
                }
            }
        return r;
    }

    Payload invert_payload(const Payload& a) const {
        if (kind_ == Kind::Perm) {
            Payload r(a.size());
            for (std::size_t t = 0; t < a.size(); ++t) r[a[t]] = static_cast<std::uint16_t>(t);
            return r;
        }
        // Gauss-Jordan over the field
        const SmallField& F = *F_;
        int d = dim_;
        std::vector<int> M(d * 2 * d, 0);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) M[i * 2 * d + j] = a[i * d + j];
            M[i * 2 * d + d + i] = 1;
        }
        for (int col = 0; col < d; ++col) {
            int piv = -1;
            for (int r = col; r < d; ++r)
                if (M[r * 2 * d + col]) { piv = r; break; }
            if (piv < 0) throw InternalError("singular matrix in group inverse");
            if (piv != col)
                for (int j = 0; j < 2 * d; ++j) std::swap(M[piv * 2 * d + j], M[col * 2 * d + j]);
            int s = F.inv(M[col * 2 * d + col]);
            for (int j = 0; j < 2 * d; ++j) M[col * 2 * d + j] = F.mul(M[col * 2 * d + j], s);
            for (int r = 0; r < d; ++r) {
                if (r == col) continue;
                int f = M[r * 2 * d + col];
                if (!f) continue;
                for (int j = 0; j < 2 * d; ++j)
                    M[r * 2 * d + j] = F.sub(M[r * 2 * d + j], F.mul(f, M[col * 2 * d + j]));
            }
        }
        Payload r(d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) r[i * d + j] = static_cast<std::uint16_t>(M[i * 2 * d + d + j]);
        return r;
    }

    bool mat_invertible(const Payload& a) const {
        try {
            invert_payload(a);
            return true;
        } catch (const InternalError&) {
            return false;
        }
    }

    int find_required(const Payload& p) const {
        auto it = index_.find(p);
        if (it == index_.end()) throw InternalError("product left the element set; group not closed");
        return it->second;
    }

    void close_from(const Payload& idp, const std::vector<Payload>& gens, long cap) {
        pay_.clear();
        index_.clear();
        pay_.push_back(idp);
        index_.emplace(idp, 0);
        id_ = 0;
        for (std::size_t t = 0; t < pay_.size(); ++t)
            for (const auto& g : gens) {
                Payload w = compose(pay_[t], g);
                if (index_.emplace(w, static_cast<int>(pay_.size())).second) {
                    pay_.push_back(std::move(w));
                    if (static_cast<long>(pay_.size()) > cap)
                        throw ClosureCapExceeded("closure exceeded cap of " + std::to_string(cap) + " elements");
                }
            }
        n_ = static_cast<long>(pay_.size());
        gens_.clear();
        for (const auto& g : gens) gens_.push_back(find_required(g));
    }

    void validate_table() {
        long n = n_;
        // identity
        id_ = -1;
        for (int i = 0; i < n && id_ < 0; ++i) {
            bool ok = true;
            for (int j = 0; j < n && ok; ++j)
                if (table_[i][j] != j || table_[j][i] != j) ok = false;
            if (ok) id_ = i;
        }
        if (id_ < 0) throw ParseError("multiplication table has no identity");
        // Latin square
        for (int i = 0; i < n; ++i) {
            std::vector<char> row(n, 0), col(n, 0);
            for (int j = 0; j < n; ++j) {
                if (row[table_[i][j]]++) throw ParseError("row " + std::to_string(i) + " repeats an entry");
                if (col[table_[j][i]]++) throw ParseError("column " + std::to_string(i) + " repeats an entry");
            }
        }
        // associativity: exhaustive up to 512, deterministic sampling above
        if (n <= 512) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    int ab = table_[a][b];
                    for (int c = 0; c < n; ++c)
                        if (table_[ab][c] != table_[a][table_[b][c]])
                            throw ParseError("multiplication table is not associative");
                }
        } else {
            std::uint64_t s = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(n);
            auto next = [&]() {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                return s;
            };
            for (long t = 0; t < 2000000; ++t) {
                int a = static_cast<int>(next() % n), b = static_cast<int>(next() % n), c = static_cast<int>(next() % n);
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw ParseError("multiplication table is not associative");
            }
        }
    }

    static std::string perm_str(const Payload& p) {
        std::string out;
        std::vector<char> seen(p.size(), 0);
        for (std::size_t s = 0; s < p.size(); ++s) {
            if (seen[s] || p[s] == s) continue;
            out += "(";
            std::size_t t = s;
            bool first = true;
            while (!seen[t]) {
                seen[t] = 1;
                out += (first ? "" : " ") + std::to_string(t);
                first = false;
                t = p[t];
            }
            out += ")";
        }
        return out.empty() ? "()" : out;
    }

    std::string mat_str(const Payload& m) const {
        std::string out = "[";
        for (int i = 0; i < dim_; ++i) {
            out += (i ? ";" : "");
            for (int j = 0; j < dim_; ++j) out += (j ? "," : "") + F_->elem_str(m[i * dim_ + j]);
        }
        return out + "]";
    }

    Kind kind_ = Kind::Table;
    long n_ = 0;
    int id_ = 0;
    int dim_ = 0;
    FieldPtr F_;
    std::vector<Payload> pay_;
    std::unordered_map<Payload, int, group_detail::PayloadHash> index_;
    std::vector<std::vector<int>> table_;
    std::vector<std::string> labels_;
    mutable std::vector<std::uint16_t> memo_;
    mutable std::vector<int> inv_;
    mutable std::vector<int> gens_;
    mutable std::vector<std::vector<int>> classes_;
    mutable std::vector<int> class_of_;
    mutable std::vector<long> eorder_;
};

/// Direct product as an explicit table group; index = a * |B| + b.
inline GroupPtr direct_product(const GroupPtr& A, const GroupPtr& B) {
    long n = A->order() * B->order();
    if (n > kTableLimit)
        throw UnsupportedCase("direct product too large for a table group");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    long nb = B->order();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            long a1 = i / nb, b1 = i % nb, a2 = j / nb, b2 = j % nb;
            t[i][j] = static_cast<int>(A->mult(static_cast<int>(a1), static_cast<int>(a2)) * nb +
                                       B->mult(static_cast<int>(b1), static_cast<int>(b2)));
        }
    std::vector<std::string> labels(n);
    for (long i = 0; i < n; ++i)
        labels[i] = "(" + A->label(static_cast<int>(i / nb)) + "," + B->label(static_cast<int>(i % nb)) + ")";
    return FiniteGroup::from_table(std::move(t), std::move(labels));
}

/// (G x G) semidirect the coordinate swap. Small groups get an explicit
/// table; matrix groups get the block realization diag(a, b) * P^s inside
/// GL(2 dim), which is what keeps the order-18432 case workable.
inline GroupPtr semidirect_with_swap(const GroupPtr& G, long cap = kDefaultClosureCap) {
    long n = G->order();
    long total = 2 * n * n;
    if (total <= kTableLimit) {
        // index = ((s * n) + a) * n + b for element (a, b) swap^s
        auto idx = [&](long a, long b, long s) { return (s * n + a) * n + b; };
        std::vector<std::vector<int>> t(total, std::vector<int>(total));
        for (long s = 0; s < 2; ++s)
            for (long a = 0; a < n; ++a)
                for (long b = 0; b < n; ++b)
                    for (long u = 0; u < 2; ++u)
                        for (long c = 0; c < n; ++c)
                            for (long d = 0; d < n; ++d) {
                                long cc = s ? d : c, dd = s ? c : d;
                                t[idx(a, b, s)][idx(c, d, u)] =
                                    static_cast<int>(idx(G->mult(static_cast<int>(a), static_cast<int>(cc)),
                                                         G->mult(static_cast<int>(b), static_cast<int>(dd)),
                                                         (s + u) % 2));
                            }
        std::vector<std::string> labels(total);
        for (long s = 0; s < 2; ++s)
            for (long a = 0; a < n; ++a)
                for (long b = 0; b < n; ++b)
                    labels[idx(a, b, s)] = "(" + G->label(static_cast<int>(a)) + "," +
                                           G->label(static_cast<int>(b)) + (s ? ";s)" : ")");
        return FiniteGroup::from_table(std::move(t), std::move(labels));
    }
    if (G->kind() != FiniteGroup::Kind::Mat)
        throw UnsupportedCase("swap extension of this size needs a matrix group");
    int d = G->dim();
    int D = 2 * d;
    auto embed = [&](const Payload& m, bool second) {
        std::vector<int> M(D * D, 0);
        for (int i = 0; i < d; ++i) M[i * D + i] = 1;
        for (int i = 0; i < d; ++i) M[(d + i) * D + d + i] = 1;
        int off = second ? d : 0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) M[(off + i) * D + off + j] = m[i * d + j];
        return M;
    };
    std::vector<std::vector<int>> gens;
    for (int g : G->generators()) {
        gens.push_back(embed(G->payload(g), false));
        gens.push_back(embed(G->payload(g), true));
    }
    std::vector<int> P(D * D, 0);
    for (int i = 0; i < d; ++i) { P[i * D + d + i] = 1; P[(d + i) * D + i] = 1; }
    gens.push_back(P);
    auto W = FiniteGroup::from_mat_generators(G->field(), D, gens, cap);
    if (W->order() != total) throw InternalError("swap extension has unexpected order");
    return W;
}

// ---- subgroups ----

struct SubgroupRef {
    GroupPtr parent;
    GroupPtr sub;
    std::vector<int> embed; // sub index -> parent index
};

/// Build the subgroup on the given (closed) parent indices. The subgroup
/// keeps the parent's payload kind when it has one.
inline SubgroupRef make_subgroup(const GroupPtr& parent, std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (indices.empty()) throw NotASubgroup("empty index set");
    long k = static_cast<long>(indices.size());
    std::vector<int> pos(parent->order(), -1);
    for (long t = 0; t < k; ++t) pos[indices[t]] = static_cast<int>(t);
    if (pos[parent->id()] < 0) throw NotASubgroup("index set lacks the identity");
    std::vector<std::vector<int>> t(k, std::vector<int>(k));
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j) {
            int w = parent->mult(indices[i], indices[j]);
            if (pos[w] < 0) throw NotASubgroup("index set is not closed under multiplication");
            t[i][j] = pos[w];
        }
    std::vector<std::string> labels(k);
    for (long i = 0; i < k; ++i) labels[i] = parent->label(indices[i]);
    GroupPtr sub = FiniteGroup::from_table(std::move(t), std::move(labels));
    return SubgroupRef{parent, sub, std::move(indices)};
}

// ---- homomorphisms ----

class GroupHom {
public:
    GroupHom(GroupPtr src, GroupPtr dst, std::vector<int> img)
        : src_(std::move(src)), dst_(std::move(dst)), img_(std::move(img)) {
        if (static_cast<long>(img_.size()) != src_->order())
            throw NotAHomomorphism("image vector has wrong length");
        for (int v : img_)
            if (v < 0 || v >= dst_->order()) throw NotAHomomorphism("image index out of range");
        if (img_[src_->id()] != dst_->id()) throw NotAHomomorphism("identity does not map to identity");
        long n = src_->order();
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                if (img_[src_->mult(static_cast<int>(i), static_cast<int>(j))] !=
                    dst_->mult(img_[i], img_[j]))
                    throw NotAHomomorphism("multiplicativity fails at a pair");
    }

    const GroupPtr& source() const { return src_; }
    const GroupPtr& target() const { return dst_; }
    int map(int i) const { return img_[i]; }
    const std::vector<int>& images() const { return img_; }

    std::vector<int> image_indices() const {
        std::vector<int> v = img_;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    std::vector<int> kernel_indices() const {
        std::vector<int> v;
        for (long i = 0; i < src_->order(); ++i)
            if (img_[i] == dst_->id()) v.push_back(static_cast<int>(i));
        return v;
    }

private:
    GroupPtr src_, dst_;
    std::vector<int> img_;
};

inline GroupHom compose(const GroupHom& outer, const GroupHom& inner) {
    if (outer.source() != inner.target()) throw GroupMismatch("composition endpoints do not match");
    std::vector<int> img(inner.source()->order());
    for (long i = 0; i < inner.source()->order(); ++i)
        img[i] = outer.map(inner.map(static_cast<int>(i)));
    return GroupHom(inner.source(), outer.target(), std::move(img));
}

/// (image is normal in the target, cokernel is abelian). The second flag is
/// only meaningful when the first holds; it is false otherwise.
inline std::pair<bool, bool> hom_image_normal_abelian_cokernel(const GroupHom& f);

// ---- quotients ----

struct QuotientResult {
    GroupPtr group;
    std::vector<int> coset_of;  // parent index -> quotient index
    std::vector<int> reps;      // quotient index -> least parent index
};

/// Quotient by a normal subgroup given as a sorted index set. Coset
/// representatives are the least indices, and cosets are numbered in
/// representative order.
inline QuotientResult quotient_by(const GroupPtr& G, const std::vector<int>& normal) {
    {
        // subgroup + normality checks
        std::vector<char> in(G->order(), 0);
        for (int s : normal) in[s] = 1;
        if (!in[G->id()]) throw NotASubgroup("normal set lacks identity");
        for (int a : normal)
            for (int b : normal)
                if (!in[G->mult(a, b)]) throw NotASubgroup("normal set is not closed");
        if (!G->is_normal_subset(normal)) throw NotNormal("subgroup is not normal");
    }
    long n = G->order();
    std::vector<int> coset(n, -1);
    std::vector<int> reps;
    for (int i = 0; i < n; ++i) {
        if (coset[i] >= 0) continue;
        int cid = static_cast<int>(reps.size());
        reps.push_back(i);
        for (int s : normal) coset[G->mult(i, s)] = cid;
    }
    long q = static_cast<long>(reps.size());
    std::vector<std::vector<int>> t(q, std::vector<int>(q));
    for (long a = 0; a < q; ++a)
        for (long b = 0; b < q; ++b)
            t[a][b] = coset[G->mult(reps[a], reps[b])];
    std::vector<std::string> labels(q);
    for (long a = 0; a < q; ++a) labels[a] = G->label(reps[a]) + "N";
    GroupPtr Q = FiniteGroup::from_table(std::move(t), std::move(labels));
    return QuotientResult{Q, std::move(coset), std::move(reps)};
}

/// Same, but also hands back the verified projection homomorphism.
inline std::pair<QuotientResult, GroupHom> quotient_with_projection(const GroupPtr& G,
                                                                    const std::vector<int>& normal) {
    QuotientResult qr = quotient_by(G, normal);
    GroupHom proj(G, qr.group, qr.coset_of);
    return {std::move(qr), std::move(proj)};
}

inline std::pair<bool, bool> hom_image_normal_abelian_cokernel(const GroupHom& f) {
    auto img = f.image_indices();
    if (!f.target()->is_normal_subset(img)) return {false, false};
    QuotientResult qr = quotient_by(f.target(), img);
    return {true, qr.group->abelian()};
}

/// All normal subgroups, as sorted index sets, ordered by (size, contents).
/// Computed as the join closure of the normal closures of single elements.
inline std::vector<std::vector<int>> normal_subgroups(const GroupPtr& G) {
    std::vector<std::vector<int>> found;
    auto push_unique = [&](std::vector<int> s) {
        for (const auto& f : found)
            if (f == s) return false;
        found.push_back(std::move(s));
        return true;
    };
    push_unique({G->id()});
    for (int i = 0; i < G->order(); ++i)
        push_unique(G->normal_closure({i}));
    for (;;) {
        bool grew = false;
        std::size_t m = found.size();
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) {
                std::vector<int> seed = found[a];
                seed.insert(seed.end(), found[b].begin(), found[b].end());
                std::vector<int> j = G->closure_indices(seed);
                if (push_unique(std::move(j))) grew = true;
            }
        if (!grew) break;
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    });
    return found;
}

} // namespace charmult
