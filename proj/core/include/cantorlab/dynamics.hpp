#pragma once

#include <memory>

#include "cantorlab/geometry.hpp"

namespace cantorlab {

// The expanding Lipschitz map built from the IFS: inverse branches over
// I_0 and I_1, slope-2 ramps around them, and a connecting affine piece in
// the middle.  E = f(E) = f^{-1}(E) cap U with U a delta-neighbourhood of
// I_0 cup I_1.
class ExpandingMap {
public:
    ExpandingMap(std::shared_ptr<const CantorGeometry> geom, const Rational& delta);

    const Rational& delta() const { return delta_; }
    const std::shared_ptr<const CantorGeometry>& geometry() const { return geom_; }

    // ordered exact breakpoints: 0, phi0(1), phi0(1)+2d, phi1(0)-2d, phi1(0), 1
    const std::vector<ThetaPoly>& breakpoints() const { return breaks_; }

    // f at a rational point (enclosure at roughly the given tolerance).
    Enclosure eval(const Rational& x, double tol = 1e-12) const;
    // f image of a thin enclosure.
    Enclosure eval(const Enclosure& x) const;

    // Worst deviation |left limit - right limit| over the five interior
    // breakpoints, evaluated at the given precision.
    double continuity_defect(mpfr_prec_t prec = 256) const;

    // A certified expansion constant c > 1 valid on U at distances < delta:
    // min(2, 1/theta_upper) with theta_upper from a depth-probed bilip check.
    double expansion_constant(long probe_depth = 10) const;

    // U = (-delta, phi0(1)+delta) cup (phi1(0)-delta, 1+delta)
    struct OpenCover {
        Enclosure a0, b0, a1, b1;
    };
    OpenCover cover(mpfr_prec_t prec = 192) const;

    // Largest power of two <= (phi1(0) - phi0(1))/8; the documented default.
    static Rational default_delta(const CantorGeometry& geom);

private:
    std::shared_ptr<const CantorGeometry> geom_;
    Rational delta_;
    ThetaPoly phi0_1_;   // right endpoint of I_0
    ThetaPoly phi1_0_;   // left endpoint of I_1
    std::vector<ThetaPoly> breaks_;
    ThetaPoly mid_slope_;     // negative slope of the connecting piece
    ThetaPoly mid_left_val_;  // f at phi0(1)+2d, i.e. 1+4d

    // piecewise evaluation for a point known to lie in [0, phi0(1)] / [phi1(0), 1]
    Enclosure inverse_branch(int i, const Enclosure& y) const;
    Enclosure eval_piece(int k, const Enclosure& x, mpfr_prec_t prec) const;
};

ExpandingMap build_dynamics(std::shared_ptr<const CantorGeometry> geom,
                            const Rational* delta = nullptr);

}  // namespace cantorlab
