#include "pgl2bb/bbox.hpp"

#include <random>

#include "json.hpp"

namespace pgl2bb {

std::string bytes_to_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * bytes.size());
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

std::string bytes_from_hex(const std::string& hex) {
    if (hex.size() % 2) throw Error("odd-length hex string");
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw Error("invalid hex digit");
    };
    std::string out(hex.size() / 2, '\0');
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<char>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    return out;
}

std::string flavor_name(Flavor f) {
    switch (f) {
        case Flavor::Transparent: return "transparent";
        case Flavor::Masked: return "masked";
        case Flavor::Permutation: return "permutation";
    }
    throw Error("unknown flavor");
}

Flavor flavor_from_name(const std::string& name) {
    if (name == "transparent") return Flavor::Transparent;
    if (name == "masked") return Flavor::Masked;
    if (name == "permutation") return Flavor::Permutation;
    throw Error("unknown flavor: " + name);
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (0x517cc1b727220a95ull * (salt + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

void BBGroup::init_handles() {
    identity_ = encode(mat_identity());
    gens_.clear();
    gens_.reserve(gen_mats_.size());
    for (const auto& m : gen_mats_) gens_.push_back(encode(m));
}

// --- transparent ------------------------------------------------------------

TransparentOracle::TransparentOracle(Gf2e field, std::vector<Mat2> gen_mats)
    : BBGroup(std::move(field), std::move(gen_mats)) {
    init_handles();
}

BBElem TransparentOracle::do_mul(const BBElem& x, const BBElem& y) const {
    return encode(mat_mul(field_, decode(x), decode(y)));
}

BBElem TransparentOracle::do_inv(const BBElem& x) const { return encode(mat_inv(decode(x))); }

bool TransparentOracle::do_is_identity(const BBElem& x) const { return mat_is_identity(decode(x)); }

// --- masked -----------------------------------------------------------------

namespace {

std::string mat_to_bytes(const Gf2e& f, const Mat2& m) {
    const int nb = (f.ext_degree() + 7) / 8;
    std::string out(4 * nb, '\0');
    const u64 entries[4] = {m.a, m.b, m.c, m.d};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < nb; ++i) out[k * nb + i] = static_cast<char>((entries[k] >> (8 * i)) & 0xff);
    return out;
}

Mat2 mat_from_bytes(const Gf2e& f, const std::string& bytes) {
    const int nb = (f.ext_degree() + 7) / 8;
    if (bytes.size() != static_cast<size_t>(4 * nb)) throw Error("handle has wrong length");
    u64 entries[4] = {0, 0, 0, 0};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < nb; ++i)
            entries[k] |= u64(static_cast<unsigned char>(bytes[k * nb + i])) << (8 * i);
    return mat_checked(f, entries[0], entries[1], entries[2], entries[3]);
}

}  // namespace

MaskedOracle::MaskedOracle(Gf2e field, std::vector<Mat2> gen_mats, MaskedSecret secret)
    : BBGroup(std::move(field), std::move(gen_mats)), secret_(std::move(secret)) {
    conj_inv_ = mat_inv(secret_.conjugator);
    if (secret_.pad.size() != secret_.perm.size() ||
        secret_.pad.size() != static_cast<size_t>(4 * ((field_.ext_degree() + 7) / 8)))
        throw Error("mask material has wrong length");
    init_handles();
}

BBElem MaskedOracle::emit_masked(const Mat2& m) const {
    std::string raw = mat_to_bytes(field_, m);
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<char>(raw[i] ^ secret_.pad[i]);
    std::string out(raw.size(), '\0');
    for (size_t i = 0; i < raw.size(); ++i) out[i] = raw[secret_.perm[i]];
    return out;
}

Mat2 MaskedOracle::parse_masked(const BBElem& h) const {
    if (h.size() != secret_.pad.size()) throw Error("handle has wrong length");
    std::string raw(h.size(), '\0');
    for (size_t i = 0; i < h.size(); ++i) raw[secret_.perm[i]] = h[i];
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<char>(raw[i] ^ secret_.pad[i]);
    return mat_from_bytes(field_, raw);
}

BBElem MaskedOracle::encode(const Mat2& m) const {
    return emit_masked(mat_mul(field_, mat_mul(field_, conj_inv_, m), secret_.conjugator));
}

Mat2 MaskedOracle::decode(const BBElem& h) const {
    return mat_mul(field_, mat_mul(field_, secret_.conjugator, parse_masked(h)), conj_inv_);
}

BBElem MaskedOracle::do_mul(const BBElem& x, const BBElem& y) const {
    return emit_masked(mat_mul(field_, parse_masked(x), parse_masked(y)));
}

BBElem MaskedOracle::do_inv(const BBElem& x) const { return emit_masked(mat_inv(parse_masked(x))); }

bool MaskedOracle::do_is_identity(const BBElem& x) const { return mat_is_identity(parse_masked(x)); }

// --- permutation ------------------------------------------------------------

PermutationOracle::PermutationOracle(Gf2e field, std::vector<Mat2> gen_mats)
    : BBGroup(std::move(field), std::move(gen_mats)) {
    if (field_.ext_degree() > 24) throw UnsupportedDegree("permutation handles get too large beyond e = 24");
    n_points_ = static_cast<std::size_t>((u64(1) << field_.ext_degree()) + 1);
    idx_width_ = 1;
    while ((n_points_ - 1) >> (8 * idx_width_)) ++idx_width_;
    init_handles();
}

std::vector<std::uint32_t> PermutationOracle::to_perm(const BBElem& h) const {
    if (h.size() != n_points_ * idx_width_) throw Error("handle has wrong length");
    std::vector<std::uint32_t> p(n_points_);
    const unsigned char* raw = reinterpret_cast<const unsigned char*>(h.data());
    for (size_t i = 0; i < n_points_; ++i) {
        std::uint32_t v = 0;
        for (int k = 0; k < idx_width_; ++k) v |= std::uint32_t(raw[i * idx_width_ + k]) << (8 * k);
        p[i] = v;
    }
    return p;
}

BBElem PermutationOracle::from_perm(const std::vector<std::uint32_t>& p) const {
    std::string out(n_points_ * idx_width_, '\0');
    for (size_t i = 0; i < n_points_; ++i)
        for (int k = 0; k < idx_width_; ++k)
            out[i * idx_width_ + k] = static_cast<char>((p[i] >> (8 * k)) & 0xff);
    return out;
}

BBElem PermutationOracle::encode(const Mat2& m) const {
    // Point 0 is infinity = <(0,1)>, point 1+t is <(1,t)>; left action.
    std::vector<std::uint32_t> p(n_points_);
    auto apply = [&](u64 v0, u64 v1) -> std::uint32_t {
        const u64 w0 = field_.add(field_.mul(m.a, v0), field_.mul(m.b, v1));
        const u64 w1 = field_.add(field_.mul(m.c, v0), field_.mul(m.d, v1));
        if (w0 == 0) return 0;
        return 1 + static_cast<std::uint32_t>(field_.mul(w1, field_.inv(w0)));
    };
    p[0] = apply(0, 1);
    for (u64 t = 0; t + 1 < n_points_; ++t) p[1 + t] = apply(1, t);
    return from_perm(p);
}

Mat2 PermutationOracle::decode(const BBElem& h) const {
    const auto p = to_perm(h);
    auto rep = [&](std::uint32_t idx) -> std::pair<u64, u64> {
        if (idx == 0) return {0, 1};
        return {1, idx - 1};
    };
    // Columns of the matrix are representatives of the images of 0 and
    // infinity; the image of the point 1 fixes the scalars.
    const auto [x0, y0] = rep(p[1]);      // image of 0 ~ (a, c)
    const auto [x8, y8] = rep(p[0]);      // image of infinity ~ (b, d)
    const auto [x1, y1] = rep(p[2]);      // image of 1 ~ (a+b, c+d)
    // Solve alpha*(x0,y0) + beta*(x8,y8) = (x1,y1) over GF(2^e).
    const u64 det = field_.add(field_.mul(x0, y8), field_.mul(x8, y0));
    if (det == 0) throw Error("handle is not a projective image");
    const u64 alpha = field_.mul(field_.add(field_.mul(x1, y8), field_.mul(x8, y1)), field_.inv(det));
    const u64 beta = field_.mul(field_.add(field_.mul(x0, y1), field_.mul(x1, y0)), field_.inv(det));
    Mat2 m{field_.mul(alpha, x0), field_.mul(beta, x8), field_.mul(alpha, y0), field_.mul(beta, y8)};
    const u64 d = field_.add(field_.mul(m.a, m.d), field_.mul(m.b, m.c));
    if (d == 0) throw Error("handle is not a projective image");
    const u64 scale = field_.inv(field_.sqrt(d));
    return mat_checked(field_, field_.mul(m.a, scale), field_.mul(m.b, scale), field_.mul(m.c, scale),
                       field_.mul(m.d, scale));
}

BBElem PermutationOracle::do_mul(const BBElem& x, const BBElem& y) const {
    if (x.size() != n_points_ * idx_width_ || y.size() != n_points_ * idx_width_)
        throw Error("handle has wrong length");
    const unsigned char* xr = reinterpret_cast<const unsigned char*>(x.data());
    const unsigned char* yr = reinterpret_cast<const unsigned char*>(y.data());
    std::string out(n_points_ * idx_width_, '\0');
    for (size_t i = 0; i < n_points_; ++i) {
        std::uint32_t yi = 0;
        for (int k = 0; k < idx_width_; ++k) yi |= std::uint32_t(yr[i * idx_width_ + k]) << (8 * k);
        for (int k = 0; k < idx_width_; ++k) out[i * idx_width_ + k] = static_cast<char>(xr[yi * idx_width_ + k]);
    }
    return out;
}

BBElem PermutationOracle::do_inv(const BBElem& x) const {
    const auto p = to_perm(x);
    std::vector<std::uint32_t> q(n_points_);
    for (size_t i = 0; i < n_points_; ++i) q[p[i]] = static_cast<std::uint32_t>(i);
    return from_perm(q);
}

bool PermutationOracle::do_is_identity(const BBElem& x) const {
    const auto p = to_perm(x);
    for (size_t i = 0; i < n_points_; ++i)
        if (p[i] != i) return false;
    return true;
}

// --- instance construction ---------------------------------------------------

std::vector<Mat2> instance_generator_matrices(const Gf2e& field, std::uint64_t seed, int extra_gens) {
    std::mt19937_64 rng(mix_seed(seed, 0x67656e73ull + static_cast<std::uint64_t>(field.ext_degree())));
    Mat2 c = random_sl2(field, rng);
    const Mat2 cinv = mat_inv(c);
    std::vector<Mat2> gens;
    for (const Mat2& g : {x_of(1), r_prime_mat(), h_of(field, field.gen())})
        gens.push_back(mat_mul(field, mat_mul(field, cinv, g), c));
    for (int i = 0; i < extra_gens; ++i) gens.push_back(random_sl2(field, rng));
    return gens;
}

std::unique_ptr<BBGroup> make_instance(const InstanceSpec& spec) {
    if (spec.e < 2 || spec.e > 64) throw UnsupportedDegree("instance degree must be in [2, 64]");
    if (spec.extra_gens < 0 || spec.extra_gens > 3) throw Error("extra_gens must be in [0, 3]");
    Gf2e field = Gf2e::with_default_modulus(spec.e);
    auto gens = instance_generator_matrices(field, spec.seed, spec.extra_gens);
    switch (spec.flavor) {
        case Flavor::Transparent:
            return std::make_unique<TransparentOracle>(std::move(field), std::move(gens));
        case Flavor::Masked: {
            std::mt19937_64 rng(mix_seed(spec.seed, 0x6d61736bull + static_cast<std::uint64_t>(spec.e)));
            MaskedSecret secret;
            secret.conjugator = random_sl2(field, rng);
            const size_t len = 4 * ((spec.e + 7) / 8);
            secret.pad.resize(len);
            for (auto& b : secret.pad) b = static_cast<char>(rng() & 0xff);
            secret.perm.resize(len);
            for (size_t i = 0; i < len; ++i) secret.perm[i] = static_cast<std::uint32_t>(i);
            for (size_t i = len; i > 1; --i) {
                const size_t j = uniform_below(rng, i);
                std::swap(secret.perm[i - 1], secret.perm[j]);
            }
            return std::make_unique<MaskedOracle>(std::move(field), std::move(gens), std::move(secret));
        }
        case Flavor::Permutation:
            return std::make_unique<PermutationOracle>(std::move(field), std::move(gens));
    }
    throw Error("unknown flavor");
}

BBElem bb_pow(const BBGroup& G, BBElem x, u128 n) {
    BBElem r = G.identity();
    while (n) {
        if (n & 1) r = G.mul(r, x);
        n >>= 1;
        if (n) x = G.mul(x, x);
    }
    return r;
}

// --- instance files -----------------------------------------------------------

std::string instance_to_json(const InstanceSpec& spec, const BBGroup& G, bool reveal) {
    nlohmann::json j;
    j["e"] = spec.e;
    j["flavor"] = flavor_name(spec.flavor);
    j["seed"] = spec.seed;
    j["extra_gens"] = spec.extra_gens;
    auto gens = nlohmann::json::array();
    for (const auto& g : G.generators()) gens.push_back(bytes_to_hex(g));
    j["generators"] = gens;
    if (reveal) {
        if (const auto* masked = dynamic_cast<const MaskedOracle*>(&G)) {
            nlohmann::json s;
            s["conjugator"] = mat_to_hex(G.field(), masked->secret().conjugator);
            s["pad"] = bytes_to_hex(masked->secret().pad);
            s["perm"] = masked->secret().perm;
            j["secret"] = s;
        }
    }
    return j.dump(2);
}

InstanceSpec instance_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed instance JSON: ") + ex.what());
    }
    try {
        InstanceSpec spec;
        spec.e = j.at("e").get<int>();
        spec.flavor = flavor_from_name(j.at("flavor").get<std::string>());
        spec.seed = j.at("seed").get<std::uint64_t>();
        spec.extra_gens = j.value("extra_gens", 0);
        return spec;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed instance JSON: ") + ex.what());
    }
}

std::unique_ptr<BBGroup> load_instance(const std::string& text) {
    const InstanceSpec spec = instance_spec_from_json(text);
    auto G = make_instance(spec);
    const auto j = nlohmann::json::parse(text);
    if (j.contains("generators")) {
        const auto& gens = j.at("generators");
        if (gens.size() != G->generators().size()) throw Error("instance file generator count mismatch");
        for (size_t i = 0; i < gens.size(); ++i)
            if (bytes_from_hex(gens[i].get<std::string>()) != G->generators()[i])
                throw Error("instance file generators do not match the seeded construction");
    }
    return G;
}

}  // namespace pgl2bb
