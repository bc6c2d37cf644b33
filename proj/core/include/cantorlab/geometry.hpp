#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cantorlab/algebraic.hpp"
#include "cantorlab/models.hpp"

namespace cantorlab {

// Exact generating-interval geometry on top of a Model.  Endpoints are
// elements of Q(2^{1/q}); all membership and ordering questions reduce to
// exact sign computations there.
class CantorGeometry {
public:
    explicit CantorGeometry(Model model, long max_depth = 64);

    const Model& model() const { return model_; }
    unsigned long q() const { return q_; }
    long max_depth() const { return max_depth_; }

    LogLength length(const Word& w) const { return model_.length(w); }
    ThetaPoly length_poly(const Word& w) const;
    // Left endpoint of I_w as an exact field element.
    ThetaPoly left(const Word& w) const;
    ThetaPoly right(const Word& w) const;

    struct IntervalNode {
        Word word;
        ThetaPoly left;
        ThetaPoly right;
        LogLength length;
        // gap removed inside this interval: (gap_left, gap_right)
        ThetaPoly gap_left;
        ThetaPoly gap_right;
    };
    // Exact node data; throws ModelInvalid when a probed node on the path has
    // |I_{w0}| + |I_{w1}| >= |I_w|.
    IntervalNode build_interval(const Word& w) const;

    // Enclosure of pi(bits|depth) = I_{bits|depth} at the given precision.
    Enclosure pi_point(const Word& bits, long depth, mpfr_prec_t prec = 192) const;

    struct GapHit {
        Word node;  // x lies strictly inside G_node
    };
    struct PointOfE {
        Word coding;     // known coding prefix
        bool exact;      // true when x is an interval endpoint, so the coding
                         // (extended by the constant tail) is complete
        std::uint8_t tail;  // the constant tail bit when exact
    };
    using LocateResult = std::variant<GapHit, PointOfE>;
    // Decides the position of a rational x in [0,1] by descending the tree.
    // Non-exact PointOfE means the depth cap was reached with x still inside
    // a generating interval.
    LocateResult locate(const Rational& x, long depth_cap) const;

    struct PhiResult {
        Enclosure value;
        std::optional<ThetaPoly> exact;  // present when x fell in a gap or on an endpoint
    };
    // phi_i at a rational point, to absolute tolerance tol; extends past
    // [0,1] with slope 1/2.  Throws DepthExceeded when tol is unreachable
    // within the geometry's depth cap.
    PhiResult phi_eval(int i, const Rational& x, double tol) const;
    // phi_i image of an enclosure (used by property tests).
    Enclosure phi_eval(int i, const Enclosure& x) const;

    struct RatioWitness {
        std::string word;
        int symbol = 0;
        bool gap_type = false;
        double value = 0;
    };
    struct BiLipReport {
        bool pass = false;            // finite-depth check AND family certificate
        bool finite_ok = false;       // all probed ratios strictly inside (0,1)
        double theta_star = 0;        // lower bound for the probed infimum
        double theta_upper = 0;       // upper bound for the probed supremum
        long depth = 0;
        long pairs_checked = 0;
        long bound_violations = 0;    // probed ratios outside the family's closed-form bounds
        RatioWitness min_witness, max_witness;
        enum class Certificate { ClosedForm, SequenceCertified, SequenceFails, DepthBounded };
        Certificate certificate = Certificate::DepthBounded;
        std::string certificate_note;
    };
    // Exact min/max of |I_{iw}|/|I_w| and |G_{iw}|/|G_w| over |w| <= depth-1,
    // i in {0,1}; closed-form family bounds checked alongside.
    BiLipReport bilip_check(long depth) const;

private:
    Model model_;
    unsigned long q_;
    long max_depth_;
    // gap length of node w as a poly, with the ModelInvalid check
    ThetaPoly gap_len_checked(const Word& w) const;
};

// The sequence c_n(1-c_{n+1})/(1-c_n) of difference quotients of phi_i along
// the flip points y_n; independent of the base point.
std::vector<Rational> diff_quotients(const SymmetricModel& m, long n_max);

// Exact difference quotient (phi_i(x)-phi_i(y_n))/(x-y_n) where x has the
// given eventually-zero coding and y_n flips symbol n; rational because all
// the points involved are finite sums.
Rational diff_quotient_at(const SymmetricModel& m, const Word& coding_prefix, long n, int i);

}  // namespace cantorlab
