#pragma once

#include <optional>
#include <utility>

#include "pgl2bb/bbfield.hpp"
#include "pgl2bb/recognize.hpp"
#include "pgl2bb/slp.hpp"

namespace pgl2bb {

/// Shifted B-values of g, gr, rg, rgr: A = (a+d)/b and friends, absent where
/// the denominator vanishes ([u, u^(.)] = 1).
struct AbcdValues {
    std::optional<BFieldElem> a, b, c, d;
    int defined_count() const {
        return int(a.has_value()) + int(b.has_value()) + int(c.has_value()) + int(d.has_value());
    }
};

/// (z z')^(k+1) conjugates the involution z to z' when |z z'| is odd.
BBElem conjugator_of_involutions(const BBGroup& G, const GroupParams& gp, const BBElem& z,
                                 const BBElem& z2);

/// The effective isomorphism attached to a certificate: matrix -> handle and
/// handle -> matrix, each with an O(e)-length SLP over the generator triple,
/// plus the projective-line action.  Entry recovery always uses the r'
/// reflector, for which lambda = 1.
class Iso {
public:
    Iso(Certificate cert, const BBGroup& G);

    const Certificate& cert() const { return cert_; }
    const Gf2e& field() const { return field_; }
    const BField& bfield() const { return bf_; }
    const BBGroup& group() const { return *G_; }

    enum class Reflector { RPrime, Original };
    AbcdValues abcd_values(const BBElem& g, Reflector use = Reflector::RPrime) const;

    /// Lambda of the chosen reflector: the square root of
    /// (A+D)(B+C) / ABCD, or of (B+C) / BCD when exactly A is undefined.
    /// With r' the result is checked to be 1.
    BFieldElem recover_lambda(const AbcdValues& v, Reflector use = Reflector::RPrime) const;

    Mat2 recover_matrix(const BBElem& g) const;

    std::pair<BBElem, Slp> psi_forward(const Mat2& m) const;
    std::pair<Mat2, Slp> psi_inverse(const BBElem& g) const;

    /// 0^g and infinity^g when all four B-values are defined and != u
    /// (g outside the torus normalizer); results are finite and nonzero.
    BFieldElem point_image_zero(const BBElem& g) const;
    BFieldElem point_image_infinity(const BBElem& g) const;
    /// General finite point: x^g = 0^(g X(x)).
    BFieldElem point_image(const BBElem& g, const BFieldElem& x) const;

    /// Coordinates of t against s as explicit field bits, and back.
    u64 to_explicit(const BFieldElem& t) const;
    BFieldElem from_explicit(u64 bits) const;

private:
    const BField& reflector_field(Reflector use) const { return use == Reflector::RPrime ? bf_ : bf_orig_; }
    AbcdValues quadruple(const BField& bf, const BBElem& g) const;
    Mat2 recover_rec(const BBElem& g, int depth) const;
    Mat2 entries_to_matrix(const BFieldElem& a, const BFieldElem& b, const BFieldElem& c,
                           const BFieldElem& d) const;

    Certificate cert_;
    const BBGroup* G_;
    GroupParams gp_;
    Gf2e field_;
    BField bf_;       // reflector r'
    BField bf_orig_;  // original r, kept for the lambda-recovery checks
    std::vector<BFieldElem> s_pows_;  // s^0 .. s^(2e-2)
    Gf2Solver gram_;
    std::vector<BBElem> prefix_slots_;  // chain prefix evaluated over S*
};

}  // namespace pgl2bb
