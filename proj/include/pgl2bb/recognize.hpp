#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgl2bb/bbfield.hpp"
#include "pgl2bb/bbox.hpp"
#include "pgl2bb/mat2.hpp"

namespace pgl2bb {

/// Recognition output: the generator correspondence S_hat -> S_star that
/// determines the isomorphism, plus the data needed to apply it.
struct Certificate {
    int e = 0;
    u128 minpoly = 0;  // irreducible of degree e; the explicit field is F_2[x]/(minpoly)
    BBElem u, r, r_prime, h_s;
    BFieldElem s;  // black box field generator, F_2[s] = F
    std::uint64_t op_count = 0;
    std::array<Mat2, 3> s_hat;    // X(1), r', h(s) as explicit matrices
    std::array<BBElem, 3> s_star; // u, r', h(s) as handles
    std::shared_ptr<const ChainTable> chains;
    std::optional<InstanceSpec> instance;  // present when built from a seeded oracle
    int b_terms_used = 0;  // 4 or 3: which branch produced r'

    Gf2e explicit_field() const { return Gf2e(e, minpoly); }
    std::string to_json() const;
    static Certificate from_json(const std::string& text);
};

/// B(g) = (u u^g)^(k+1) g^(-1), defined when [u, u^g] != 1.
struct BValue {
    bool defined = false;
    BBElem value;
};
BValue b_op(const BBGroup& G, const GroupParams& gp, const BBElem& u, const BBElem& g);

/// x^k for the group constant k; x must have odd order for the conjugation
/// lemmas, but the power itself is total.
BBElem bb_pow_k(const BBGroup& G, const GroupParams& gp, const BBElem& x);

/// Involution from an odd-order element: [h, h^g] if that is an involution,
/// else (h h^g)^k h.  Requires h != 1 of odd order and [h, h^g] != 1.
BBElem involution_from_odd(const BBGroup& G, const GroupParams& gp, const BBElem& h, const BBElem& g);

/// Noncommuting involutions u, r from a generating set.
std::pair<BBElem, BBElem> initial_involutions(const BBGroup& G, const GroupParams& gp,
                                              const std::vector<BBElem>& S);

/// The seven distinct values of words of length <= 3 over {u, r}, in the
/// lexicographic order of the generating words over the alphabet (1, u, r).
std::vector<BBElem> translate_words(const BBGroup& G, const BBElem& u, const BBElem& r);

/// Lifts of all defined, nonidentity B(g1 g g2) over the given g list.
std::vector<BFieldElem> field_generators(const BField& bf, const std::vector<BBElem>& gs);

struct RPrimeResult {
    BBElem r_prime;
    BBElem good_g;
    int terms;  // 4 or 3
};
/// Searches g1 g g2 for an element whose B-quadruple has at least three
/// defined values, none equal to u, and produces the involution r' with
/// <u, r'> = PGL(2, 2); the correspondence sends it to [[0,1],[1,0]].
RPrimeResult build_r_prime(const BField& bf, const std::vector<BBElem>& gs);
std::optional<RPrimeResult> try_build_r_prime(const BField& bf, const std::vector<BBElem>& gs);

/// Full recognition.  e >= 2 runs the pipeline; e = 1 enumerates the
/// six-element group directly.
Certificate recognize(const BBGroup& G, int e);

/// Products S * S in enumeration order, for the lazy second search stage.
std::vector<BBElem> square_products(const BBGroup& G, const std::vector<BBElem>& S);

}  // namespace pgl2bb
