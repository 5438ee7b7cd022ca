#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "pgl2bb/gf2e.hpp"

using namespace pgl2bb;

namespace {

// Independent irreducibility oracle: trial division by every lower-degree
// polynomial.
bool divides(u128 d, u128 f) { return f2poly::mod(f, d) == 0; }

bool irreducible_by_trial_division(u128 f, int e) {
    for (int dd = 1; dd <= e / 2; ++dd)
        for (u128 d = u128(1) << dd; d < (u128(2) << dd); ++d)
            if (divides(d, f)) return false;
    return true;
}

u64 eval_poly(const Gf2e& f, u128 coeffs, u64 t) {
    u64 acc = 0, p = 1;
    for (int i = 0; coeffs >> i; ++i) {
        if ((coeffs >> i) & 1) acc = f.add(acc, p);
        p = f.mul(p, t);
    }
    return acc;
}

}  // namespace

TEST_CASE("GF(4) basic arithmetic") {
    Gf2e f = Gf2e::with_default_modulus(2);  // s^2 = s + 1
    const u64 s = f.gen();
    CHECK(f.add(s, s) == 0);
    CHECK(f.mul(s, f.add(s, 1)) == 1);  // s(s+1) = 1
    CHECK(f.inv(s) == f.add(s, 1));
    CHECK_THROWS_AS(f.inv(0), DivisionByZero);
}

TEST_CASE("square roots") {
    SUBCASE("GF(4)") {
        Gf2e f = Gf2e::with_default_modulus(2);
        CHECK(f.sqrt(f.gen()) == f.add(f.gen(), 1));  // sqrt = squaring when e = 2
        CHECK(f.sqrt(0) == 0);
        CHECK(f.sqrt(1) == 1);
    }
    SUBCASE("GF(8): value frozen from the exhaustive oracle") {
        Gf2e f = Gf2e::with_default_modulus(3);  // s^3 = s + 1
        const u64 s = f.gen();
        u64 expected = 0;
        int hits = 0;
        for (u64 t = 0; t < 8; ++t)
            if (f.mul(t, t) == s) { expected = t; ++hits; }
        CHECK(hits == 1);
        CHECK(expected == f.add(f.mul(s, s), s));  // s^2 + s
        CHECK(f.sqrt(s) == expected);
    }
    SUBCASE("sqrt(a)^2 = a, exhaustive for e <= 4") {
        for (int e = 1; e <= 4; ++e) {
            Gf2e f = Gf2e::with_default_modulus(e);
            for (u64 a = 0; a < (u64(1) << e); ++a) {
                const u64 r = f.sqrt(a);
                CHECK(f.mul(r, r) == a);
            }
        }
    }
    SUBCASE("sqrt(a)^2 = a, randomized up to e = 32") {
        std::mt19937_64 rng(7);
        for (int e : {5, 11, 17, 24, 32}) {
            Gf2e f = Gf2e::with_default_modulus(e);
            const u64 mask = (u64(1) << e) - 1;
            for (int i = 0; i < 200; ++i) {
                const u64 a = rng() & mask;
                const u64 r = f.sqrt(a);
                CHECK(f.mul(r, r) == a);
            }
        }
    }
}

TEST_CASE("Frobenius is a field automorphism") {
    std::mt19937_64 rng(11);
    for (int e : {2, 3, 8, 31, 64}) {
        Gf2e f = Gf2e::with_default_modulus(e);
        const u64 mask = e == 64 ? ~u64(0) : (u64(1) << e) - 1;
        for (int i = 0; i < 100; ++i) {
            const u64 a = rng() & mask, b = rng() & mask;
            CHECK(f.square(f.add(a, b)) == f.add(f.square(a), f.square(b)));
            CHECK(f.square(f.mul(a, b)) == f.mul(f.square(a), f.square(b)));
        }
    }
}

TEST_CASE("subfield degrees") {
    Gf2e f = Gf2e::with_default_modulus(4);  // GF(16)
    CHECK(subfield_degree(f, u64(1)) == 1);
    // Orders divide 15; elements of order 5 generate GF(16), order 3 gives GF(4).
    int seen5 = 0, seen3 = 0;
    for (u64 t = 2; t < 16; ++t) {
        u64 p = t;
        int order = 1;
        while (p != 1) { p = f.mul(p, t); ++order; }
        if (order == 5) { CHECK(subfield_degree(f, t) == 4); ++seen5; }
        if (order == 3) { CHECK(subfield_degree(f, t) == 2); ++seen3; }
    }
    CHECK(seen5 == 4);
    CHECK(seen3 == 2);
}

TEST_CASE("minimal polynomials") {
    SUBCASE("t = 1 gives x + 1") {
        Gf2e f = Gf2e::with_default_modulus(3);
        CHECK(min_poly(f, u64(1), 1) == 0b11);
    }
    SUBCASE("GF(4): minimal polynomial of s is x^2 + x + 1") {
        Gf2e f = Gf2e::with_default_modulus(2);
        // oracle: expand (x - s)(x - s^2) by hand with s^2 = s + 1
        const u64 s = f.gen();
        const u64 c0 = f.mul(s, f.square(s));
        const u64 c1 = f.add(s, f.square(s));
        CHECK(c0 == 1);
        CHECK(c1 == 1);
        CHECK(min_poly(f, s, subfield_degree(f, s)) == 0b111);
    }
    SUBCASE("GF(8): minimal polynomial of s is x^3 + x + 1") {
        Gf2e f = Gf2e::with_default_modulus(3);
        CHECK(min_poly(f, f.gen(), 3) == 0b1011);
    }
    SUBCASE("min_poly(t) kills t and has degree subfield_degree(t)") {
        for (int e : {4, 6}) {
            Gf2e f = Gf2e::with_default_modulus(e);
            for (u64 t = 0; t < (u64(1) << e); ++t) {
                if (t == 0) continue;
                const int m = subfield_degree(f, t);
                const u128 mp = min_poly(f, t, m);
                CHECK(f2poly::degree(mp) == m);
                CHECK(eval_poly(f, mp, t) == 0);
            }
        }
    }
}

TEST_CASE("traces") {
    Gf2e f4 = Gf2e::with_default_modulus(2);
    CHECK(f4.trace(0) == 0);
    CHECK(f4.trace(1) == 0);  // e even
    CHECK(f4.trace(f4.gen()) == 1);
    Gf2e f8 = Gf2e::with_default_modulus(3);
    CHECK(f8.trace(1) == 1);  // e odd
}

TEST_CASE("coordinates against a generator") {
    SUBCASE("examples") {
        Gf2e f4 = Gf2e::with_default_modulus(2);
        CHECK(coordinates(f4, f4.add(f4.gen(), 1), f4.gen()) == 0b11);
        CHECK(coordinates(f4, u64(0), f4.gen()) == 0);
        Gf2e f8 = Gf2e::with_default_modulus(3);
        const u64 t = f8.add(f8.square(f8.gen()), f8.gen());
        CHECK(coordinates(f8, t, f8.gen()) == 0b110);
    }
    SUBCASE("bijection: reassembling the coordinates returns t, exhaustive e <= 4") {
        for (int e = 1; e <= 4; ++e) {
            Gf2e f = Gf2e::with_default_modulus(e);
            const u64 s = f.gen();
            for (u64 t = 0; t < (u64(1) << e); ++t) {
                u64 bits = coordinates(f, t, s);
                u64 acc = 0, p = 1;
                for (int i = 0; i < e; ++i) {
                    if ((bits >> i) & 1) acc = f.add(acc, p);
                    p = f.mul(p, s);
                }
                CHECK(acc == t);
            }
        }
    }
    SUBCASE("coordinates against a non-generator fails on the Gram matrix") {
        Gf2e f = Gf2e::with_default_modulus(4);
        // any t of order 3 lies in GF(4), so its powers cannot span
        u64 t = 0;
        for (u64 c = 2; c < 16; ++c)
            if (subfield_degree(f, c) == 2) { t = c; break; }
        REQUIRE(t != 0);
        CHECK_THROWS_AS(coordinates(f, f.gen(), t), SingularGram);
    }
    SUBCASE("Gram matrix invertible whenever s generates") {
        for (int e : {2, 3, 5, 8}) {
            Gf2e f = Gf2e::with_default_modulus(e);
            std::mt19937_64 rng(3);
            int tested = 0;
            while (tested < 10) {
                const u64 s = rng() & ((u64(1) << e) - 1);
                if (s == 0 || subfield_degree(f, s) != e) continue;
                ++tested;
                std::vector<u64> rows(e, 0);
                u64 p = 1;
                std::vector<int> tr;
                for (int m = 0; m < 2 * e - 1; ++m) {
                    tr.push_back(f.trace(p));
                    p = f.mul(p, s);
                }
                for (int j = 0; j < e; ++j)
                    for (int i = 0; i < e; ++i)
                        if (tr[i + j]) rows[j] |= u64(1) << i;
                CHECK(Gf2Solver::invertible(rows, e));
            }
        }
    }
}

TEST_CASE("irreducible modulus search") {
    CHECK(irreducible_poly(1) == 0b10);        // x
    CHECK(irreducible_poly(2) == 0b111);       // x^2 + x + 1
    SUBCASE("e = 4 matches the trial-division oracle scan") {
        u128 expected = 0;
        for (u128 c = 0; c < 16 && !expected; ++c)
            if (irreducible_by_trial_division((u128(1) << 4) | c, 4)) expected = (u128(1) << 4) | c;
        CHECK(expected == ((u128(1) << 4) | 0b0011));  // x^4 + x + 1
        CHECK(irreducible_poly(4) == expected);
    }
    SUBCASE("agreement of the gcd test with trial division, all degree-6 polynomials") {
        for (u128 c = 0; c < 64; ++c) {
            const u128 f = (u128(1) << 6) | c;
            CHECK(f2poly::is_irreducible(f, 6) == irreducible_by_trial_division(f, 6));
        }
    }
    SUBCASE("constructing a field with a reducible modulus fails") {
        CHECK_THROWS_AS(Gf2e(4, (u128(1) << 4) | 0b0001), Error);  // x^4+1 = (x+1)^4
    }
    SUBCASE("degree bounds") {
        CHECK_THROWS_AS(Gf2e::with_default_modulus(0), UnsupportedDegree);
        CHECK_THROWS_AS(Gf2e::with_default_modulus(65), UnsupportedDegree);
        Gf2e f = Gf2e::with_default_modulus(64);
        const u64 a = 0xdeadbeefcafef00dull;
        CHECK(f.mul(a, f.inv(a)) == 1);
    }
}

TEST_CASE("field element hex serialization") {
    Gf2e f = Gf2e::with_default_modulus(2);
    CHECK(f.to_hex(3) == "03");  // 1 + x
    CHECK(f.from_hex("03") == 3);
    Gf2e f16 = Gf2e::with_default_modulus(16);
    CHECK(f16.to_hex(0x0102) == "0201");  // little-endian bytes
    CHECK(f16.from_hex("0201") == 0x0102);
    CHECK_THROWS_AS(f16.from_hex("02"), Error);
}

TEST_CASE("prime power factorization") {
    CHECK(prime_power_factors(1).empty());
    CHECK(prime_power_factors(4) == std::vector<int>{4});
    CHECK(prime_power_factors(6) == std::vector<int>{2, 3});
    CHECK(prime_power_factors(12) == std::vector<int>{4, 3});
    CHECK(prime_power_factors(60) == std::vector<int>{4, 3, 5});
}

TEST_CASE("field generator search over the explicit field") {
    SUBCASE("e prime: an element of full degree is returned as-is") {
        Gf2e f = Gf2e::with_default_modulus(5);
        std::vector<u64> alphas{1, f.gen()};
        CHECK(find_field_generator(f, alphas) == f.gen());
    }
    SUBCASE("composite e = 6 from elements of degrees 2 and 3") {
        Gf2e f = Gf2e::with_default_modulus(6);
        u64 a2 = 0, a3 = 0;
        for (u64 t = 2; t < 64; ++t) {
            const int d = subfield_degree(f, t);
            if (d == 2 && !a2) a2 = t;
            if (d == 3 && !a3) a3 = t;
        }
        REQUIRE(a2 != 0);
        REQUIRE(a3 != 0);
        const u64 s = find_field_generator(f, {a2, a3});
        CHECK(subfield_degree(f, s) == 6);
    }
    SUBCASE("insufficient generators are detected") {
        Gf2e f = Gf2e::with_default_modulus(4);
        u64 a2 = 0;
        for (u64 t = 2; t < 16; ++t)
            if (subfield_degree(f, t) == 2) { a2 = t; break; }
        REQUIRE(a2 != 0);
        CHECK_THROWS_AS(find_field_generator(f, {u64(1), a2}), GeneratorsInsufficient);
    }
}
