#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>

#include "doctest.h"
#include "pgl2bb/iso.hpp"

using namespace pgl2bb;

namespace {

// Certificate over a transparent oracle in standard coordinates, with the
// reflector r of a chosen lambda.  The change of basis is the identity, so
// recovered matrices can be compared entry-for-entry.
struct StandardSetup {
    Gf2e f;
    TransparentOracle G;
    Certificate cert;
    Iso iso;

    static Certificate make_cert(const Gf2e& f, const TransparentOracle& G, u64 lambda) {
        Certificate c;
        c.e = f.ext_degree();
        c.minpoly = f.modulus();
        c.u = G.encode(x_of(1));
        c.r = G.encode({0, lambda, f.inv(lambda), 0});
        c.r_prime = G.encode(r_prime_mat());
        c.h_s = G.encode(h_of(f, f.gen()));
        const u64 rs = f.sqrt(f.gen());
        c.s = BFieldElem::coset(G.encode({rs, 0, 0, f.inv(rs)}));
        c.s_hat = {x_of(1), r_prime_mat(), h_of(f, f.gen())};
        c.s_star = {c.u, c.r_prime, c.h_s};
        c.chains = std::make_shared<const ChainTable>(f, f.gen());
        return c;
    }

    explicit StandardSetup(int e, u64 lambda = 1)
        : f(Gf2e::with_default_modulus(e)),
          G(f, {x_of(1), r_prime_mat(), h_of(f, f.gen())}),
          cert(make_cert(f, G, lambda)),
          iso(cert, G) {}

    BFieldElem embed(u64 t) const {
        if (t == 0) return iso.bfield().zero();
        const u64 rt = f.sqrt(t);
        return BFieldElem::coset(G.encode({rt, 0, 0, f.inv(rt)}));
    }
};

BBElem random_word(const BBGroup& G, std::mt19937_64& rng, int len) {
    BBElem x = G.identity();
    const auto& gens = G.generators();
    for (int i = 0; i < len; ++i) {
        BBElem g = gens[rng() % gens.size()];
        if (rng() & 1) g = G.inv(g);
        x = G.mul(x, g);
    }
    return x;
}

}  // namespace

TEST_CASE("conjugator of involutions") {
    Gf2e f = Gf2e::with_default_modulus(2);
    TransparentOracle G(f, {x_of(1), r_prime_mat(), h_of(f, f.gen())});
    const GroupParams gp = GroupParams::for_degree(2);
    SUBCASE("z = z2 gives the identity power") {
        const BBElem u = G.encode(x_of(1));
        CHECK(G.is_identity(conjugator_of_involutions(G, gp, u, u)));
    }
    SUBCASE("exhaustive over involution pairs of SL(2,4)") {
        std::vector<Mat2> involutions;
        for (const auto& m : enumerate_sl2(f))
            if (!mat_is_identity(m) && mat_is_identity(mat_mul(f, m, m))) involutions.push_back(m);
        CHECK(involutions.size() == 15);
        int odd_pairs = 0, even_pairs = 0;
        for (const auto& z : involutions)
            for (const auto& z2 : involutions) {
                const Mat2 p = mat_mul(f, z, z2);
                if (!mat_is_identity(p) && mat_is_identity(mat_mul(f, p, p))) {
                    CHECK_THROWS_AS(conjugator_of_involutions(G, gp, G.encode(z), G.encode(z2)),
                                    EvenOrderProduct);
                    ++even_pairs;
                } else {
                    const BBElem c = conjugator_of_involutions(G, gp, G.encode(z), G.encode(z2));
                    CHECK(G.decode(bb_conj(G, G.encode(z), c)) == z2);
                    ++odd_pairs;
                }
            }
        CHECK(odd_pairs > 0);
        CHECK(even_pairs > 0);
    }
    SUBCASE("non-involutions are rejected") {
        CHECK_THROWS_AS(
            conjugator_of_involutions(G, gp, G.encode(h_of(f, f.gen())), G.encode(x_of(1))),
            PreconditionFailed);
    }
}

TEST_CASE("abcd values") {
    StandardSetup st(3);
    const Gf2e& f = st.f;
    SUBCASE("g = u lies in B, so A is undefined") {
        const AbcdValues v = st.iso.abcd_values(st.cert.u);
        CHECK(!v.a.has_value());
    }
    SUBCASE("generic GF(8) element: A = (a+d)/b and friends, lambda = 1") {
        std::mt19937_64 rng(19);
        int checked = 0;
        while (checked < 25) {
            const Mat2 g = random_sl2(f, rng);
            if (g.a == 0 || g.b == 0 || g.c == 0 || g.d == 0 || g.a == g.d) continue;
            ++checked;
            const AbcdValues v = st.iso.abcd_values(st.G.encode(g));
            const u64 tr = mat_trace(g);
            const u64 bc = f.add(g.b, g.c);
            REQUIRE(v.a.has_value());
            REQUIRE(v.b.has_value());
            REQUIRE(v.c.has_value());
            REQUIRE(v.d.has_value());
            CHECK(st.iso.to_explicit(*v.a) == f.mul(tr, f.inv(g.b)));
            CHECK(st.iso.to_explicit(*v.b) == f.mul(bc, f.inv(g.a)));
            CHECK(st.iso.to_explicit(*v.c) == f.mul(bc, f.inv(g.d)));
            CHECK(st.iso.to_explicit(*v.d) == f.mul(tr, f.inv(g.c)));
        }
    }
    SUBCASE("zero denominators give undefined entries") {
        const Mat2 g = h_of(f, f.gen());  // b = c = 0
        const AbcdValues v = st.iso.abcd_values(st.G.encode(g));
        CHECK(!v.a.has_value());
        CHECK(!v.d.has_value());
        CHECK(v.b.has_value());
        CHECK(v.c.has_value());
    }
}

TEST_CASE("lambda recovery") {
    SUBCASE("r' reflector always yields 1") {
        StandardSetup st(3);
        std::mt19937_64 rng(29);
        int checked = 0;
        while (checked < 20) {
            const Mat2 g = random_sl2(st.f, rng);
            const AbcdValues v = st.iso.abcd_values(st.G.encode(g));
            try {
                const BFieldElem l = st.iso.recover_lambda(v);
                CHECK(st.iso.bfield().eq(l, st.iso.bfield().one()));
                ++checked;
            } catch (const Indeterminate&) {
            }
        }
    }
    SUBCASE("original reflector recovers the secret lambda") {
        for (int e : {2, 3, 4}) {
            Gf2e f = Gf2e::with_default_modulus(e);
            std::mt19937_64 rng(31);
            const u64 mask = (u64(1) << e) - 1;
            u64 lambda = 0;
            while (lambda == 0) lambda = rng() & mask;
            StandardSetup st(e, lambda);
            int checked = 0;
            while (checked < 15) {
                const Mat2 g = random_sl2(st.f, rng);
                const AbcdValues v = st.iso.abcd_values(st.G.encode(g), Iso::Reflector::Original);
                try {
                    const BFieldElem l = st.iso.recover_lambda(v, Iso::Reflector::Original);
                    CHECK(st.iso.bfield().eq(l, st.embed(lambda)));
                    ++checked;
                } catch (const Indeterminate&) {
                }
            }
        }
    }
    SUBCASE("three-term variant (A undefined) also recovers lambda") {
        const u64 lambda = 3;  // s + 1 in GF(8)
        StandardSetup st(3, lambda);
        std::mt19937_64 rng(37);
        int checked = 0;
        while (checked < 10) {
            Mat2 g = random_sl2(st.f, rng);
            if (g.b != 0 || g.a == g.d || g.c == 0) continue;
            const AbcdValues v = st.iso.abcd_values(st.G.encode(g), Iso::Reflector::Original);
            REQUIRE(!v.a.has_value());
            const BFieldElem l = st.iso.recover_lambda(v, Iso::Reflector::Original);
            CHECK(st.iso.bfield().eq(l, st.embed(lambda)));
            ++checked;
        }
    }
    SUBCASE("zero values are indeterminate") {
        StandardSetup st(2);
        const auto& bf = st.iso.bfield();
        AbcdValues v{bf.zero(), bf.one(), bf.one(), bf.one()};
        CHECK_THROWS_AS(st.iso.recover_lambda(v), Indeterminate);
        AbcdValues w{std::nullopt, bf.one(), bf.one(), std::nullopt};
        CHECK_THROWS_AS(st.iso.recover_lambda(w), Indeterminate);
    }
}

TEST_CASE("matrix recovery in standard coordinates") {
    SUBCASE("exhaustive over PGL(2,q) for q = 4, 8, 16: identity change of basis") {
        for (int e : {2, 3, 4}) {
            StandardSetup st(e);
            for (const auto& m : enumerate_sl2(st.f)) {
                CHECK(st.iso.recover_matrix(st.G.encode(m)) == m);
            }
        }
    }
    SUBCASE("known images") {
        StandardSetup st(3);
        CHECK(st.iso.recover_matrix(st.cert.u) == x_of(1));
        CHECK(st.iso.recover_matrix(st.cert.r_prime) == r_prime_mat());
        CHECK(st.iso.recover_matrix(st.cert.h_s) == h_of(st.f, st.f.gen()));
        CHECK(st.iso.recover_matrix(st.G.identity()) == mat_identity());
    }
    SUBCASE("translation consistency: recovering g r' and r' g agrees with g") {
        StandardSetup st(4);
        std::mt19937_64 rng(41);
        const Mat2 rp = r_prime_mat();
        for (int i = 0; i < 40; ++i) {
            const Mat2 g = random_sl2(st.f, rng);
            const Mat2 direct = st.iso.recover_matrix(st.G.encode(g));
            const Mat2 via_gr =
                mat_mul(st.f, st.iso.recover_matrix(st.G.encode(mat_mul(st.f, g, rp))), rp);
            const Mat2 via_rg =
                mat_mul(st.f, rp, st.iso.recover_matrix(st.G.encode(mat_mul(st.f, rp, g))));
            CHECK(direct == g);
            CHECK(via_gr == g);
            CHECK(via_rg == g);
        }
    }
}

TEST_CASE("psi on a recognized masked instance") {
    auto G = make_instance({2, Flavor::Masked, 0, 0});
    Certificate cert = recognize(*G, 2);
    const Iso iso(cert, *G);
    const Gf2e f = cert.explicit_field();

    SUBCASE("generator correspondence") {
        CHECK(iso.psi_forward(x_of(1)).first == cert.u);
        CHECK(iso.psi_forward(r_prime_mat()).first == cert.r_prime);
        CHECK(iso.psi_forward(h_of(f, f.gen())).first == cert.h_s);
    }
    SUBCASE("exhaustive bijectivity on all 60 elements") {
        std::set<BBElem> images;
        for (const auto& m : enumerate_sl2(f)) {
            const auto [h, slp] = iso.psi_forward(m);
            images.insert(h);
            const auto [back, slp2] = iso.psi_inverse(h);
            CHECK(back == m);
            CHECK(slp.length() <= 64 * 2);
            CHECK(slp2.length() <= 64 * 2);
        }
        CHECK(images.size() == 60);
    }
    SUBCASE("homomorphism on random pairs") {
        std::mt19937_64 rng(43);
        for (int i = 0; i < 200; ++i) {
            const Mat2 m1 = random_sl2(f, rng), m2 = random_sl2(f, rng);
            const BBElem lhs = iso.psi_forward(mat_mul(f, m1, m2)).first;
            const BBElem rhs = G->mul(iso.psi_forward(m1).first, iso.psi_forward(m2).first);
            CHECK(bb_eq(*G, lhs, rhs));
        }
    }
    SUBCASE("identity maps to the empty program") {
        const auto [m, slp] = iso.psi_inverse(G->identity());
        CHECK(m == mat_identity());
        CHECK(slp.length() == 0);
    }
}

TEST_CASE("psi round trips on random handles across degrees") {
    std::mt19937_64 rng(47);
    for (int e : {3, 5, 8}) {
        auto G = make_instance({e, Flavor::Masked, 1, 0});
        const Iso iso(recognize(*G, e), *G);
        for (int i = 0; i < 30; ++i) {
            const BBElem g = random_word(*G, rng, 16);
            const auto [m, slp] = iso.psi_inverse(g);
            CHECK(iso.psi_forward(m).first == g);
            CHECK(slp.length() <= 64 * static_cast<std::uint64_t>(e));
        }
    }
}

TEST_CASE("projective line action") {
    SUBCASE("exhaustive agreement with the recovered matrix action on PGL(2,4)") {
        StandardSetup st(2);
        const Gf2e& f = st.f;
        int qualifying = 0;
        for (const auto& m : enumerate_sl2(f)) {
            const BBElem h = st.G.encode(m);
            const bool qualifies =
                m.a != 0 && m.b != 0 && m.c != 0 && m.d != 0 && m.a != m.d && m.b != m.c;
            if (!qualifies) {
                CHECK_THROWS_AS(st.iso.point_image_zero(h), Undefined);
                continue;
            }
            ++qualifying;
            // left action: 0 = <(1,0)> goes to <(a,c)>, infinity = <(0,1)> to <(b,d)>
            const u64 img0 = f.mul(m.c, f.inv(m.a));
            const u64 img8 = f.mul(m.d, f.inv(m.b));
            CHECK(st.iso.to_explicit(st.iso.point_image_zero(h)) == img0);
            CHECK(st.iso.to_explicit(st.iso.point_image_infinity(h)) == img8);
        }
        CHECK(qualifying > 0);
    }
    SUBCASE("general finite points via the reduction x^g = 0^(g X(x))") {
        StandardSetup st(3);
        const Gf2e& f = st.f;
        std::mt19937_64 rng(53);
        int checked = 0;
        while (checked < 30) {
            const Mat2 m = random_sl2(f, rng);
            const u64 x = rng() & 7;
            // image of <(1, x)> under m
            const u64 w0 = f.add(m.a, f.mul(m.b, x));
            const u64 w1 = f.add(m.c, f.mul(m.d, x));
            if (w0 == 0) continue;  // lands at infinity
            const u64 expected = f.mul(w1, f.inv(w0));
            try {
                const BFieldElem img = st.iso.point_image(st.G.encode(m), st.embed(x));
                CHECK(st.iso.to_explicit(img) == expected);
                ++checked;
            } catch (const Undefined&) {
            }
        }
    }
}

TEST_CASE("degree 1: isomorphism with the six-element group") {
    Gf2e f1 = Gf2e::with_default_modulus(1);
    TransparentOracle G(f1, {x_of(1), r_prime_mat()});
    const Certificate cert = recognize(G, 1);
    const Iso iso(cert, G);
    const Gf2e f = cert.explicit_field();
    std::set<BBElem> images;
    for (const auto& m : enumerate_sl2(f)) {
        const auto [h, slp] = iso.psi_forward(m);
        images.insert(h);
        CHECK(iso.psi_inverse(h).first == m);
        CHECK(slp.length() <= 64);
    }
    CHECK(images.size() == 6);
}

TEST_CASE("explicit conversion round trip") {
    StandardSetup st(4);
    std::mt19937_64 rng(59);
    for (int i = 0; i < 30; ++i) {
        const u64 t = rng() & 15;
        CHECK(st.iso.to_explicit(st.iso.from_explicit(t)) == t);
        CHECK(st.iso.bfield().eq(st.iso.from_explicit(t), st.embed(t)));
    }
}
