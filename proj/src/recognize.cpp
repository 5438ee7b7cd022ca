#include "pgl2bb/recognize.hpp"

#include <numeric>

#include "json.hpp"

namespace pgl2bb {

BBElem bb_pow_k(const BBGroup& G, const GroupParams& gp, const BBElem& x) {
    return G.mul(bb_pow(G, x, gp.k_plus_1()), G.inv(x));
}

BValue b_op(const BBGroup& G, const GroupParams& gp, const BBElem& u, const BBElem& g) {
    const BBElem ug = bb_conj(G, u, g);
    const BBElem p = G.mul(u, ug);
    if (G.is_identity(G.mul(p, p))) return {};
    return {true, G.mul(bb_pow(G, p, gp.k_plus_1()), G.inv(g))};
}

BBElem involution_from_odd(const BBGroup& G, const GroupParams& gp, const BBElem& h, const BBElem& g) {
    if (G.is_identity(h) || G.is_identity(G.mul(h, h)))
        throw PreconditionFailed("involution_from_odd: h must have odd order > 1");
    const BBElem hg = bb_conj(G, h, g);
    const BBElem c = bb_comm(G, h, hg);
    if (G.is_identity(c)) throw PreconditionFailed("involution_from_odd: [h, h^g] = 1");
    BBElem z;
    if (G.is_identity(G.mul(c, c))) {
        z = c;
    } else {
        z = G.mul(bb_pow_k(G, gp, G.mul(h, hg)), h);
    }
    if (G.is_identity(z) || !G.is_identity(G.mul(z, z)))
        throw NotRecognized("involution dichotomy produced no involution");
    return z;
}

std::pair<BBElem, BBElem> initial_involutions(const BBGroup& G, const GroupParams& gp,
                                              const std::vector<BBElem>& S) {
    if (S.empty()) throw NotRecognized("empty generating set");
    bool all_involutions = true;
    for (const auto& s : S)
        if (!bb_is_involution(G, s)) { all_involutions = false; break; }

    if (all_involutions) {
        for (size_t i = 0; i < S.size(); ++i)
            for (size_t j = i + 1; j < S.size(); ++j)
                if (!bb_involutions_commute(G, S[i], S[j])) return {S[i], S[j]};
        throw NotRecognized("initial involutions: all generators commute");
    }

    for (const auto& h : S) {
        if (G.is_identity(h) || G.is_identity(G.mul(h, h))) continue;  // want odd order > 1
        for (const auto& g : S) {
            if (G.is_identity(bb_comm(G, h, bb_conj(G, h, g)))) continue;
            const BBElem u = involution_from_odd(G, gp, h, g);
            for (const auto& s : S) {
                const BBElem us = bb_conj(G, u, s);
                if (!bb_involutions_commute(G, u, us)) return {u, us};
            }
            throw NotRecognized("initial involutions: every generator normalizes C(u)");
        }
    }
    throw NotRecognized("initial involutions: no usable odd-order generator");
}

std::vector<BBElem> translate_words(const BBGroup& G, const BBElem& u, const BBElem& r) {
    // Reduced values of words over (1, u, r) of length <= 3, first occurrence
    // in lexicographic order: 1, u, r, ur, ru, uru, rur.
    const BBElem ur = G.mul(u, r);
    const BBElem ru = G.mul(r, u);
    return {G.identity(), u, r, ur, ru, G.mul(ur, u), G.mul(ru, r)};
}

std::vector<BBElem> square_products(const BBGroup& G, const std::vector<BBElem>& S) {
    std::vector<BBElem> out;
    out.reserve(S.size() * S.size());
    for (const auto& x : S)
        for (const auto& y : S) out.push_back(G.mul(x, y));
    return out;
}

std::vector<BFieldElem> field_generators(const BField& bf, const std::vector<BBElem>& gs) {
    const BBGroup& G = bf.group();
    const auto words = translate_words(G, bf.u(), bf.r());
    std::vector<BFieldElem> alphas;
    for (const auto& g : gs) {
        for (size_t i = 0; i < words.size(); ++i) {
            const BBElem left = i == 0 ? g : G.mul(words[i], g);
            for (size_t j = 0; j < words.size(); ++j) {
                const BBElem w = j == 0 ? left : G.mul(left, words[j]);
                const BValue b = b_op(G, bf.params(), bf.u(), w);
                if (!b.defined || G.is_identity(b.value)) continue;
                alphas.push_back(bf.lift(b.value));
            }
        }
    }
    return alphas;
}

namespace {

struct Quadruple {
    BValue vals[4];  // B(g), B(gr), B(rg), B(rgr)
    int defined_not_u = 0;
    int undefined_pos = -1;  // meaningful when exactly one is undefined
    bool any_defined_equals_u = false;
};

Quadruple b_quadruple(const BField& bf, const BBElem& g) {
    const BBGroup& G = bf.group();
    const BBElem gr = G.mul(g, bf.r());
    const BBElem rg = G.mul(bf.r(), g);
    const BBElem rgr = G.mul(rg, bf.r());
    Quadruple q;
    const BBElem* items[4] = {&g, &gr, &rg, &rgr};
    for (int i = 0; i < 4; ++i) {
        q.vals[i] = b_op(G, bf.params(), bf.u(), *items[i]);
        if (!q.vals[i].defined) {
            q.undefined_pos = i;
        } else if (bb_eq(G, q.vals[i].value, bf.u())) {
            q.any_defined_equals_u = true;
        } else {
            ++q.defined_not_u;
        }
    }
    return q;
}

}  // namespace

std::optional<RPrimeResult> try_build_r_prime(const BField& bf, const std::vector<BBElem>& gs) {
    const BBGroup& G = bf.group();
    const auto words = translate_words(G, bf.u(), bf.r());
    for (const auto& g0 : gs) {
        for (size_t i = 0; i < words.size(); ++i) {
            const BBElem left = i == 0 ? g0 : G.mul(words[i], g0);
            for (size_t j = 0; j < words.size(); ++j) {
                const BBElem g = j == 0 ? left : G.mul(left, words[j]);
                const Quadruple q = b_quadruple(bf, g);
                if (q.any_defined_equals_u) continue;
                if (q.defined_not_u < 3) continue;

                // The product tau r u conjugates u to the involution paired
                // with [[0,1],[1,0]] on the matrix side; tau is the square
                // root of ABCD/((A+D)(B+C)) (resp. BCD/(B+C)), assembled from
                // lifted label products.
                BFieldElem tau;
                int terms;
                if (q.defined_not_u == 4) {
                    BFieldElem num = bf.lift(G.mul(q.vals[0].value, bf.u()));
                    num = bf.mul(num, bf.lift(G.mul(q.vals[2].value, bf.u())));
                    num = bf.mul(num, bf.lift(G.mul(q.vals[1].value, bf.u())));
                    num = bf.mul(num, bf.lift(G.mul(q.vals[3].value, bf.u())));
                    BFieldElem den = bf.lift(G.mul(q.vals[0].value, q.vals[3].value));
                    den = bf.mul(den, bf.lift(G.mul(q.vals[2].value, q.vals[1].value)));
                    tau = bf.mul(num, bf.inv(den));
                    terms = 4;
                } else {
                    // Relabel so the undefined value sits at B(g).
                    static const int sel[4][3] = {{1, 2, 3}, {0, 3, 2}, {3, 0, 1}, {2, 1, 0}};
                    const int pos = q.undefined_pos;
                    const BBElem& hb = q.vals[sel[pos][0]].value;
                    const BBElem& hc = q.vals[sel[pos][1]].value;
                    const BBElem& hd = q.vals[sel[pos][2]].value;
                    BFieldElem num = bf.lift(G.mul(hc, bf.u()));
                    num = bf.mul(num, bf.lift(G.mul(hb, bf.u())));
                    num = bf.mul(num, bf.lift(G.mul(hd, bf.u())));
                    const BFieldElem den = bf.lift(G.mul(hc, hb));
                    tau = bf.mul(num, bf.inv(den));
                    terms = 3;
                }
                const BBElem conj_by = G.mul(G.mul(tau.rep, bf.r()), bf.u());
                const BBElem r_prime = bb_conj(G, bf.u(), conj_by);
                if (!bb_is_involution(G, r_prime))
                    throw NotRecognized("build_r_prime: r' is not an involution");
                const BBElem p = G.mul(bf.u(), r_prime);
                if (!G.is_identity(G.mul(G.mul(p, p), p)))
                    throw NotRecognized("build_r_prime: u r' does not have order 3");
                return RPrimeResult{r_prime, g, terms};
            }
        }
    }
    return std::nullopt;
}

RPrimeResult build_r_prime(const BField& bf, const std::vector<BBElem>& gs) {
    if (auto rp = try_build_r_prime(bf, gs)) return *rp;
    throw NotRecognized("build_r_prime: no qualifying element found");
}

namespace {

Certificate recognize_degree_one(const BBGroup& G) {
    const std::uint64_t ops0 = G.op_count();
    // PGL(2, 2) has six elements; enumerate the closure of S directly.
    std::vector<BBElem> elems{G.identity()};
    auto known = [&](const BBElem& x) {
        for (const auto& y : elems)
            if (bb_eq(G, x, y)) return true;
        return false;
    };
    for (size_t i = 0; i < elems.size(); ++i) {
        for (const auto& s : G.generators()) {
            const BBElem next = G.mul(elems[i], s);
            if (!known(next)) elems.push_back(next);
            if (elems.size() > 6) throw NotRecognized("degree-1 group has more than 6 elements");
        }
    }
    if (elems.size() != 6) throw NotRecognized("degree-1 group does not have 6 elements");
    Certificate cert;
    cert.e = 1;
    cert.minpoly = 0b11;  // x + 1, the minimal polynomial of s = 1
    bool found = false;
    for (const auto& x : elems) {
        if (!bb_is_involution(G, x)) continue;
        for (const auto& y : elems) {
            if (!bb_is_involution(G, y) || bb_involutions_commute(G, x, y)) continue;
            cert.u = x;
            cert.r_prime = y;
            found = true;
            break;
        }
        if (found) break;
    }
    if (!found) throw NotRecognized("degree-1 group has no noncommuting involutions");
    cert.r = cert.r_prime;
    cert.h_s = G.identity();  // h(1) = n(1)^2 = 1
    cert.s = BFieldElem::coset(G.identity());
    const Gf2e f = cert.explicit_field();
    cert.s_hat = {x_of(1), r_prime_mat(), h_of(f, f.gen())};
    cert.s_star = {cert.u, cert.r_prime, cert.h_s};
    cert.chains = std::make_shared<const ChainTable>(f, f.gen());
    cert.b_terms_used = 0;
    cert.op_count = G.op_count() - ops0;
    return cert;
}

int lcm_of_degrees(const BField& bf, const std::vector<BFieldElem>& alphas) {
    long long l = 1;
    for (const auto& a : alphas) l = std::lcm(l, static_cast<long long>(subfield_degree(bf, a)));
    return static_cast<int>(l);
}

}  // namespace

namespace {

Certificate recognize_main(const BBGroup& G, int e) {
    const std::uint64_t ops0 = G.op_count();
    const GroupParams gp = GroupParams::for_degree(e);
    const std::vector<BBElem>& S = G.generators();

    auto [u, r] = initial_involutions(G, gp, S);
    const BField bf(G, gp, u, r);

    // Field generators from S, extending to S^2 only if S alone leaves the
    // collected elements in a proper subfield.
    std::vector<BFieldElem> alphas = field_generators(bf, S);
    std::vector<BBElem> s2;
    if (alphas.empty() || lcm_of_degrees(bf, alphas) != e) {
        s2 = square_products(G, S);
        auto more = field_generators(bf, s2);
        alphas.insert(alphas.end(), more.begin(), more.end());
    }

    BFieldElem s;
    try {
        s = bf.find_generator(alphas);
    } catch (const GeneratorsInsufficient&) {
        throw NotRecognized("find_generator: collected elements do not generate the field");
    } catch (const OracleInconsistent& ex) {
        throw NotRecognized(std::string("find_generator: ") + ex.what());
    }
    int deg;
    try {
        deg = subfield_degree(bf, s);
    } catch (const OracleInconsistent& ex) {
        throw NotRecognized(std::string("field degree: ") + ex.what());
    }
    if (deg != e) throw NotRecognized("field degree mismatch: got " + std::to_string(deg));

    u128 mp;
    try {
        mp = min_poly(bf, s, e);
    } catch (const CoefficientNotInF2&) {
        throw NotRecognized("minimal polynomial has a coefficient outside F_2");
    }
    if (!f2poly::is_irreducible(mp, e)) throw NotRecognized("minimal polynomial is reducible");

    std::optional<RPrimeResult> rp0 = try_build_r_prime(bf, S);
    if (!rp0) {
        if (s2.empty()) s2 = square_products(G, S);
        rp0 = try_build_r_prime(bf, s2);
    }
    if (!rp0) throw NotRecognized("build_r_prime: no qualifying element found");
    const RPrimeResult& rp = *rp0;

    // Standard elements as words in labels: n(t) = X(t) X(t^-1)^r' X(t),
    // h(s) = n(1) n(s), with X(1) = u.
    const BBElem xs = bf.label(s);
    const BBElem xsi = bf.label(bf.inv(s));
    const BBElem n1 = G.mul(G.mul(u, bb_conj(G, u, rp.r_prime)), u);
    const BBElem ns = G.mul(G.mul(xs, bb_conj(G, xsi, rp.r_prime)), xs);
    const BBElem h_s = G.mul(n1, ns);

    Certificate cert;
    cert.e = e;
    cert.minpoly = mp;
    cert.u = u;
    cert.r = r;
    cert.r_prime = rp.r_prime;
    cert.h_s = h_s;
    cert.s = s;
    cert.b_terms_used = rp.terms;
    const Gf2e f = cert.explicit_field();
    cert.s_hat = {x_of(1), r_prime_mat(), h_of(f, f.gen())};
    cert.s_star = {cert.u, cert.r_prime, cert.h_s};
    cert.chains = std::make_shared<const ChainTable>(f, f.gen());
    cert.op_count = G.op_count() - ops0;
    return cert;
}

}  // namespace

Certificate recognize(const BBGroup& G, int e) {
    if (e < 1 || e > 64) throw UnsupportedDegree("recognition degree must be in [1, 64]");
    try {
        return e == 1 ? recognize_degree_one(G) : recognize_main(G, e);
    } catch (const NotRecognized&) {
        throw;
    } catch (const Error& ex) {
        // Any internal inconsistency (bad lift, trace outside F_2, ...) means
        // the oracle is not a PGL(2, 2^e) of the claimed degree.
        throw NotRecognized(ex.what());
    }
}

std::string Certificate::to_json() const {
    nlohmann::json j;
    j["e"] = e;
    j["minpoly"] = bits_to_hex(minpoly, e + 1);
    j["u"] = bytes_to_hex(u);
    j["r"] = bytes_to_hex(r);
    j["r_prime"] = bytes_to_hex(r_prime);
    j["h_s"] = bytes_to_hex(h_s);
    j["s_rep"] = bytes_to_hex(s.rep);
    j["op_count"] = op_count;
    if (instance) {
        nlohmann::json ji;
        ji["e"] = instance->e;
        ji["flavor"] = flavor_name(instance->flavor);
        ji["seed"] = instance->seed;
        ji["extra_gens"] = instance->extra_gens;
        j["instance"] = ji;
    }
    return j.dump(2);
}

Certificate Certificate::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed certificate JSON: ") + ex.what());
    }
    try {
        Certificate cert;
        cert.e = j.at("e").get<int>();
        cert.minpoly = bits_from_hex(j.at("minpoly").get<std::string>(), cert.e + 1);
        cert.u = bytes_from_hex(j.at("u").get<std::string>());
        cert.r = bytes_from_hex(j.at("r").get<std::string>());
        cert.r_prime = bytes_from_hex(j.at("r_prime").get<std::string>());
        cert.h_s = bytes_from_hex(j.at("h_s").get<std::string>());
        cert.s = BFieldElem::coset(bytes_from_hex(j.at("s_rep").get<std::string>()));
        cert.op_count = j.value("op_count", std::uint64_t(0));
        if (j.contains("instance")) {
            InstanceSpec spec;
            const auto& ji = j.at("instance");
            spec.e = ji.at("e").get<int>();
            spec.flavor = flavor_from_name(ji.at("flavor").get<std::string>());
            spec.seed = ji.at("seed").get<std::uint64_t>();
            spec.extra_gens = ji.value("extra_gens", 0);
            cert.instance = spec;
        }
        const Gf2e f = cert.explicit_field();
        cert.s_hat = {x_of(1), r_prime_mat(), h_of(f, f.gen())};
        cert.s_star = {cert.u, cert.r_prime, cert.h_s};
        cert.chains = std::make_shared<const ChainTable>(f, f.gen());
        return cert;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed certificate JSON: ") + ex.what());
    }
}

}  // namespace pgl2bb
