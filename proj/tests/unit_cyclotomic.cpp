#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <vector>

#include "charmult/cyclotomic.hpp"

using charmult::CycNum;
using charmult::Rat;

namespace {

// Moebius function, straight from the definition. Test-side oracle.
int moebius(long n) {
    int m = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
    }
    if (n > 1) m = -m;
    return m;
}

long gcd_l(long a, long b) { return std::gcd(a, b); }

CycNum random_value(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> ord(1, 24);
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 4);
    std::uniform_int_distribution<int> nterms(1, 5);
    long n = ord(rng);
    std::vector<std::pair<long, Rat>> terms;
    int k = nterms(rng);
    for (int i = 0; i < k; ++i) {
        Rat c(num(rng), den(rng));
        c.canonicalize();
        terms.emplace_back(std::uniform_int_distribution<long>(0, n - 1)(rng), c);
    }
    return CycNum::from_root_sum(n, terms);
}

} // namespace

TEST_CASE("rationals embed at conductor one") {
    CycNum a(7);
    REQUIRE(a.is_rational());
    REQUIRE(a.order() == 1);
    REQUIRE(a.rational_value() == 7);
    CycNum b(Rat(-3, 2));
    REQUIRE((a + b).rational_value() == Rat(11, 2));
    REQUIRE((a * b).rational_value() == Rat(-21, 2));
    REQUIRE(CycNum().is_zero());
    REQUIRE_FALSE(a.is_zero());
}

TEST_CASE("fourth root of unity squares to minus one") {
    CycNum i = CycNum::zeta(4);
    REQUIRE(i * i == CycNum(-1));
    REQUIRE(i.conj() == -i);
    REQUIRE(i.pow(4) == CycNum(1));
}

TEST_CASE("products collapse to the smallest conductor") {
    CycNum z8 = CycNum::zeta(8);
    CycNum m = z8 * z8.pow(3);
    REQUIRE(m == CycNum(-1));
    REQUIRE(m.order() == 1);
    REQUIRE((z8 * z8).order() == 4); // zeta_8^2 = i
}

TEST_CASE("inverse of a root of unity is its complement power") {
    CycNum z5 = CycNum::zeta(5);
    REQUIRE(z5.inverse() == z5.pow(4));
    REQUIRE(z5.inverse() * z5 == CycNum(1));
}

TEST_CASE("geometric sums vanish") {
    for (long n = 1; n <= 24; ++n) {
        CycNum s;
        CycNum z = CycNum::zeta(n);
        for (long e = 0; e < n; ++e) s += z.pow(e);
        CAPTURE(n);
        REQUIRE(s == CycNum(n == 1 ? 1 : 0));
    }
}

TEST_CASE("sum over primitive roots gives the Moebius value") {
    for (long n = 1; n <= 30; ++n) {
        CycNum s;
        CycNum z = CycNum::zeta(n);
        for (long e = 0; e < n; ++e)
            if (gcd_l(e == 0 ? n : e, n) == 1) s += z.pow(e);
        if (n == 1) s = CycNum(1);
        CAPTURE(n);
        REQUIRE(s == CycNum(moebius(n)));
    }
}

TEST_CASE("known quadratic irrationalities keep their classical conductor") {
    auto z = [](long n) { return CycNum::zeta(n); };
    CycNum sqrt2 = z(8) + z(8).pow(7);
    REQUIRE(sqrt2 * sqrt2 == CycNum(2));
    REQUIRE(sqrt2.order() == 8);
    CycNum sqrt3 = z(12) + z(12).pow(11);
    REQUIRE(sqrt3 * sqrt3 == CycNum(3));
    REQUIRE(sqrt3.order() == 12);
    CycNum sqrt5 = z(5) - z(5).pow(2) - z(5).pow(3) + z(5).pow(4);
    REQUIRE(sqrt5 * sqrt5 == CycNum(5));
    REQUIRE(sqrt5.order() == 5);
    CycNum sqrtm3 = 2 * z(3) + 1;
    REQUIRE(sqrtm3 * sqrtm3 == CycNum(-3));
    REQUIRE(sqrtm3.order() == 3);
    // zeta_12^2 is a primitive 6th root, which lives in Q(zeta_3)
    REQUIRE(z(12).pow(2).order() == 3);
    REQUIRE(z(6).order() == 3);
    REQUIRE(z(6).pow(6) == CycNum(1));
    REQUIRE(z(6).pow(3) == CycNum(-1));
    REQUIRE(z(6).pow(2) != CycNum(1));
}

TEST_CASE("conjugation is an involutive automorphism") {
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 300; ++t) {
        CycNum a = random_value(rng), b = random_value(rng);
        REQUIRE(a.conj().conj() == a);
        REQUIRE((a + b).conj() == a.conj() + b.conj());
        REQUIRE((a * b).conj() == a.conj() * b.conj());
    }
    for (long n = 1; n <= 16; ++n)
        for (long e = 0; e < n; ++e)
            REQUIRE(CycNum::zeta(n).pow(e).conj() == CycNum::zeta(n).pow(n - e));
}

TEST_CASE("norms are fixed by conjugation") {
    std::mt19937_64 rng(777);
    for (int t = 0; t < 1000; ++t) {
        CycNum a = random_value(rng);
        CycNum nrm = a * a.conj();
        REQUIRE(nrm.conj() == nrm);
    }
}

TEST_CASE("lift and reduce round-trips") {
    std::mt19937_64 rng(999);
    for (int t = 0; t < 200; ++t) {
        CycNum a = random_value(rng);
        for (long k : {2L, 3L, 5L}) {
            long big = a.order() * k;
            auto lifted = a.coords_at(big);
            std::vector<std::pair<long, Rat>> terms;
            for (std::size_t j = 0; j < lifted.size(); ++j)
                if (lifted[j] != 0) terms.emplace_back(static_cast<long>(j), lifted[j]);
            REQUIRE(CycNum::from_root_sum(big, terms) == a);
        }
    }
}

TEST_CASE("inverses multiply back to one") {
    std::mt19937_64 rng(4242);
    int done = 0;
    while (done < 200) {
        CycNum a = random_value(rng);
        if (a.is_zero()) continue;
        REQUIRE(a * a.inverse() == CycNum(1));
        ++done;
    }
    REQUIRE_THROWS_AS(CycNum().inverse(), charmult::DivisionByZero);
}

TEST_CASE("galois substitutions are multiplicative") {
    std::mt19937_64 rng(31337);
    for (int t = 0; t < 200; ++t) {
        CycNum a = random_value(rng), b = random_value(rng);
        long L = std::lcm(a.order(), b.order());
        long k = 0;
        std::uniform_int_distribution<long> pick(1, L);
        do { k = pick(rng); } while (gcd_l(k, L) != 1);
        // lift both to conductor L by moving through root sums
        auto at = [&](const CycNum& v) {
            auto c = v.coords_at(L);
            std::vector<std::pair<long, Rat>> ts;
            for (std::size_t j = 0; j < c.size(); ++j)
                if (c[j] != 0) ts.emplace_back(static_cast<long>(j) * k, c[j]);
            return CycNum::from_root_sum(L, ts);
        };
        REQUIRE(at(a * b) == at(a) * at(b));
    }
    REQUIRE(CycNum::zeta(7).galois(2) == CycNum::zeta(7).pow(2));
    REQUIRE_THROWS_AS(CycNum::zeta(9).galois(3), charmult::Error);
}

TEST_CASE("rational extraction round-trips") {
    std::mt19937_64 rng(808);
    for (int t = 0; t < 100; ++t) {
        std::uniform_int_distribution<long> num(-20, 20), den(1, 9);
        Rat r(num(rng), den(rng));
        r.canonicalize();
        CycNum v(r);
        REQUIRE(v.is_rational());
        REQUIRE(v.rational_value() == r);
        REQUIRE(CycNum::from_root_sum(12, {{0, r}}) == v);
    }
    REQUIRE_THROWS_AS(CycNum::zeta(5).rational_value(), charmult::NotRational);
}

TEST_CASE("deterministic ordering is a strict total order on distinct values") {
    std::mt19937_64 rng(5150);
    std::vector<CycNum> vals;
    for (int t = 0; t < 60; ++t) vals.push_back(random_value(rng));
    for (const auto& a : vals)
        for (const auto& b : vals) {
            int ab = CycNum::cmp(a, b), ba = CycNum::cmp(b, a);
            REQUIRE(ab == -ba);
            REQUIRE((ab == 0) == (a == b));
        }
}

TEST_CASE("printing stays exact for simple values") {
    REQUIRE(CycNum(Rat(-3, 2)).str() == "-3/2");
    REQUIRE(CycNum::zeta(8).str() == "z8");
    REQUIRE((CycNum::zeta(8).pow(3) - CycNum(Rat(1, 2))).str() == "z8^3 - 1/2");
    REQUIRE(CycNum().str() == "0");
}
