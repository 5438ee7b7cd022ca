#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pgl2bb/gf2e.hpp"
#include "pgl2bb/mat2.hpp"

namespace pgl2bb {

/// Opaque handle to a black box group element.  Equal elements have equal
/// handles (every oracle encodes canonically).
using BBElem = std::string;

std::string bytes_to_hex(const std::string& bytes);
std::string bytes_from_hex(const std::string& hex);

enum class Flavor { Transparent, Masked, Permutation };
std::string flavor_name(Flavor f);
Flavor flavor_from_name(const std::string& name);

struct InstanceSpec {
    int e = 2;
    Flavor flavor = Flavor::Transparent;
    std::uint64_t seed = 0;
    int extra_gens = 0;
};

/// The group oracle: multiplication, inversion and identity testing on
/// handles, nothing else.  Every call bumps the operation counter (the
/// realization of the timing parameter).
class BBGroup {
public:
    virtual ~BBGroup() = default;

    BBElem mul(const BBElem& x, const BBElem& y) const {
        ops_.fetch_add(1, std::memory_order_relaxed);
        return do_mul(x, y);
    }
    BBElem inv(const BBElem& x) const {
        ops_.fetch_add(1, std::memory_order_relaxed);
        return do_inv(x);
    }
    bool is_identity(const BBElem& x) const {
        ops_.fetch_add(1, std::memory_order_relaxed);
        return do_is_identity(x);
    }

    const std::vector<BBElem>& generators() const { return gens_; }
    const BBElem& identity() const { return identity_; }
    std::uint64_t op_count() const { return ops_.load(std::memory_order_relaxed); }

    // Harness-side interface; not part of the oracle contract and uncounted.
    const Gf2e& field() const { return field_; }
    virtual BBElem encode(const Mat2& m) const = 0;
    virtual Mat2 decode(const BBElem& h) const = 0;

protected:
    BBGroup(Gf2e field, std::vector<Mat2> gen_mats) : field_(std::move(field)), gen_mats_(std::move(gen_mats)) {}
    void init_handles();  // fills gens_/identity_ via encode()

    Gf2e field_;
    std::vector<Mat2> gen_mats_;
    std::vector<BBElem> gens_;
    BBElem identity_;

    virtual BBElem do_mul(const BBElem& x, const BBElem& y) const = 0;
    virtual BBElem do_inv(const BBElem& x) const = 0;
    virtual bool do_is_identity(const BBElem& x) const = 0;

private:
    mutable std::atomic<std::uint64_t> ops_{0};
};

class TransparentOracle final : public BBGroup {
public:
    TransparentOracle(Gf2e field, std::vector<Mat2> gen_mats);
    BBElem encode(const Mat2& m) const override { return mat_to_hex(field_, m); }
    Mat2 decode(const BBElem& h) const override { return mat_from_hex(field_, h); }

protected:
    BBElem do_mul(const BBElem& x, const BBElem& y) const override;
    BBElem do_inv(const BBElem& x) const override;
    bool do_is_identity(const BBElem& x) const override;
};

struct MaskedSecret {
    Mat2 conjugator;
    std::string pad;                  // XOR pad over the serialized bytes
    std::vector<std::uint32_t> perm;  // byte-position permutation
};

class MaskedOracle final : public BBGroup {
public:
    MaskedOracle(Gf2e field, std::vector<Mat2> gen_mats, MaskedSecret secret);
    BBElem encode(const Mat2& m) const override;
    Mat2 decode(const BBElem& h) const override;
    const MaskedSecret& secret() const { return secret_; }

protected:
    BBElem do_mul(const BBElem& x, const BBElem& y) const override;
    BBElem do_inv(const BBElem& x) const override;
    bool do_is_identity(const BBElem& x) const override;

private:
    Mat2 parse_masked(const BBElem& h) const;  // in conjugated coordinates
    BBElem emit_masked(const Mat2& m) const;
    MaskedSecret secret_;
    Mat2 conj_inv_;
};

/// Handles are the permutations of the q+1 projective points induced by the
/// group's action on the projective line, serialized as fixed-width
/// little-endian indices (0 is the point at infinity, 1+t the point t).
class PermutationOracle final : public BBGroup {
public:
    PermutationOracle(Gf2e field, std::vector<Mat2> gen_mats);
    BBElem encode(const Mat2& m) const override;
    Mat2 decode(const BBElem& h) const override;
    std::size_t num_points() const { return n_points_; }
    std::vector<std::uint32_t> to_perm(const BBElem& h) const;

protected:
    BBElem do_mul(const BBElem& x, const BBElem& y) const override;
    BBElem do_inv(const BBElem& x) const override;
    bool do_is_identity(const BBElem& x) const override;

private:
    BBElem from_perm(const std::vector<std::uint32_t>& p) const;
    std::size_t n_points_;
    int idx_width_;
};

/// Deterministic oracle construction for a group isomorphic to PGL(2, 2^e):
/// conjugated standard generators plus extra random elements, all derived
/// from (e, seed).  The generator matrices are flavor-independent.
std::unique_ptr<BBGroup> make_instance(const InstanceSpec& spec);
std::vector<Mat2> instance_generator_matrices(const Gf2e& field, std::uint64_t seed, int extra_gens);

/// x^n by square-and-multiply, n >= 0.
BBElem bb_pow(const BBGroup& G, BBElem x, u128 n);

// Pipeline helpers; equality goes through is_identity only.
inline BBElem bb_conj(const BBGroup& G, const BBElem& x, const BBElem& g) {
    return G.mul(G.mul(G.inv(g), x), g);
}
inline bool bb_eq(const BBGroup& G, const BBElem& x, const BBElem& y) {
    return G.is_identity(G.mul(x, G.inv(y)));
}
inline bool bb_is_involution(const BBGroup& G, const BBElem& x) {
    return !G.is_identity(x) && G.is_identity(G.mul(x, x));
}
/// For involutions x, y: [x, y] = (xy)^2, so noncommuting iff (xy)^2 != 1.
inline bool bb_involutions_commute(const BBGroup& G, const BBElem& x, const BBElem& y) {
    const BBElem p = G.mul(x, y);
    return G.is_identity(G.mul(p, p));
}
inline BBElem bb_comm(const BBGroup& G, const BBElem& x, const BBElem& y) {
    return G.mul(G.mul(G.inv(x), G.inv(y)), G.mul(x, y));
}

/// Group-operation adapter for SLP evaluation over the oracle.
struct BBOps {
    const BBGroup& G;
    using Elem = BBElem;
    BBElem identity() const { return G.identity(); }
    BBElem mul(const BBElem& x, const BBElem& y) const { return G.mul(x, y); }
    BBElem inv(const BBElem& x) const { return G.inv(x); }
};

// Instance file I/O ({e, flavor, seed, extra_gens, generators}; the masking
// secret is emitted only when reveal is set).
std::string instance_to_json(const InstanceSpec& spec, const BBGroup& G, bool reveal);
InstanceSpec instance_spec_from_json(const std::string& text);
std::unique_ptr<BBGroup> load_instance(const std::string& json_text);

// Deterministic RNG plumbing (mt19937_64 output is pinned by the standard;
// distributions are not, so sampling is done by hand).
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0) throw Error("uniform_below(0)");
    if ((n & (n - 1)) == 0) return rng() & (n - 1);
    std::uint64_t mask = ~std::uint64_t(0);
    while (mask / 2 >= n - 1) mask /= 2;
    for (;;) {
        const std::uint64_t v = rng() & mask;
        if (v < n) return v;
    }
}

}  // namespace pgl2bb
