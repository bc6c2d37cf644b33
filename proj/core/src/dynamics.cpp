#include "cantorlab/dynamics.hpp"

#include <cmath>

#include "cantorlab/errors.hpp"

namespace cantorlab {

namespace {
Enclosure hull(const Enclosure& lo, const Enclosure& hi, mpfr_prec_t prec) {
    Enclosure out(prec);
    Real a(prec), b(prec);
    mpfr_set(a.get(), lo.lo(), MPFR_RNDD);
    mpfr_set(b.get(), hi.hi(), MPFR_RNDU);
    out.set_bounds(a, b);
    return out;
}
}  // namespace

Rational ExpandingMap::default_delta(const CantorGeometry& geom) {
    ThetaPoly p01 = geom.right(Word::from_string("0"));
    ThetaPoly p10 = geom.left(Word::from_string("1"));
    ThetaPoly gap8 = p10 - p01;
    gap8.mul_rational(Rational(1, 8));
    double approx = gap8.enclose(96).lo_double();
    if (approx <= 0) throw ModelInvalid("root gap is empty");
    long k = static_cast<long>(std::ceil(-std::log2(approx))) - 1;
    if (k < 0) k = 0;
    for (; k < 1200; ++k) {
        Rational cand = Rational(1);
        cand /= Rational(Integer(1) << static_cast<unsigned>(k));
        if (ThetaPoly::cmp(ThetaPoly::from_rational(geom.q(), cand), gap8) <= 0) return cand;
    }
    throw InternalError("default_delta: no dyadic below the gap bound");
}

ExpandingMap::ExpandingMap(std::shared_ptr<const CantorGeometry> geom, const Rational& delta)
    : geom_(std::move(geom)), delta_(delta) {
    if (delta_ <= 0) throw DomainError("delta must be positive");
    unsigned long q = geom_->q();
    phi0_1_ = geom_->right(Word::from_string("0"));
    phi1_0_ = geom_->left(Word::from_string("1"));
    ThetaPoly lhs = phi0_1_ + ThetaPoly::from_rational(q, 2 * delta_);
    ThetaPoly rhs = phi1_0_ - ThetaPoly::from_rational(q, 2 * delta_);
    if (ThetaPoly::cmp(lhs, rhs) >= 0)
        throw DeltaTooLarge("phi0(1) + 2*delta must stay below phi1(0) - 2*delta");
    breaks_ = {ThetaPoly::zero(q),
               phi0_1_,
               lhs,
               rhs,
               phi1_0_,
               ThetaPoly::from_rational(q, Rational(1))};
    // slope-2 ramp after phi0(1) tops out at 1+4d; the connecting piece drops
    // to -4d at phi1(0)-2d
    mid_left_val_ = ThetaPoly::from_rational(q, 1 + 4 * delta_);
    ThetaPoly drop = ThetaPoly::from_rational(q, -(1 + 8 * delta_));
    mid_slope_ = drop / (rhs - lhs);
}

Enclosure ExpandingMap::inverse_branch(int i, const Enclosure& y) const {
    // phi_i^{-1} on I_i: descend I_i's subtree; a gap G_{iw} maps affinely
    // onto G_w, and an unresolved thin enclosure inside I_{iw} maps into I_w.
    const mpfr_prec_t prec = 256;
    Word v = Word::repeated(static_cast<std::uint8_t>(i), 1);
    ThetaPoly L = geom_->left(v);
    ThetaPoly R = geom_->right(v);
    for (long d = 0; d < geom_->max_depth(); ++d) {
        Word v0 = v, v1 = v;
        v0.push_back(0);
        v1.push_back(1);
        ThetaPoly gl = L + geom_->length_poly(v0);
        ThetaPoly gr = R - geom_->length_poly(v1);
        Enclosure egl = gl.enclose(prec), egr = gr.enclose(prec);
        if (mpfr_cmp(y.hi(), egl.lo()) < 0) { v = v0; R = gl; continue; }
        if (mpfr_cmp(y.lo(), egr.hi()) > 0) { v = v1; L = gr; continue; }
        if (mpfr_cmp(y.lo(), egl.hi()) > 0 && mpfr_cmp(y.hi(), egr.lo()) < 0) {
            // y inside the gap of node v: its preimage gap is the parent word
            // of v with the leading branch symbol dropped
            Word w;
            for (long j = 1; j < v.size(); ++j) w.push_back(v[j]);
            auto src = geom_->build_interval(v);
            auto dst = geom_->build_interval(w);
            Enclosure c = dst.gap_left.enclose(prec);
            Enclosure dd = dst.gap_right.enclose(prec);
            Enclosure num = dd - c;
            Enclosure den = src.gap_right.enclose(prec) - src.gap_left.enclose(prec);
            Enclosure ratio(prec);
            Real rl(prec), rh(prec);
            mpfr_div(rl.get(), num.lo(), den.hi(), MPFR_RNDD);
            mpfr_div(rh.get(), num.hi(), den.lo(), MPFR_RNDU);
            ratio.set_bounds(rl, rh);
            return c + (y - src.gap_left.enclose(prec)) * ratio;
        }
        break;
    }
    Word w;
    for (long j = 1; j < v.size(); ++j) w.push_back(v[j]);
    return hull(geom_->left(w).enclose(prec), geom_->right(w).enclose(prec), prec);
}

Enclosure ExpandingMap::eval_piece(int k, const Enclosure& x, mpfr_prec_t prec) const {
    unsigned long q = geom_->q();
    auto affine2 = [&](const ThetaPoly& x0, const ThetaPoly& f0) {
        Enclosure dx = x - x0.enclose(prec);
        dx.mul_rational(Rational(2));
        return f0.enclose(prec) + dx;
    };
    switch (k) {
        case 0:  // (-inf, 0], slope 2 through the origin
            return affine2(ThetaPoly::zero(q), ThetaPoly::zero(q));
        case 1:  // [0, phi0(1)]
            return inverse_branch(0, x);
        case 2:  // [phi0(1), phi0(1)+2d]
            return affine2(breaks_[1], ThetaPoly::from_rational(q, Rational(1)));
        case 3: {  // connecting piece
            Enclosure dx = x - breaks_[2].enclose(prec);
            return mid_left_val_.enclose(prec) + dx * mid_slope_.enclose(prec);
        }
        case 4:  // [phi1(0)-2d, phi1(0)]
            return affine2(breaks_[4], ThetaPoly::zero(q));
        case 5:  // [phi1(0), 1]
            return inverse_branch(1, x);
        case 6:  // [1, inf), slope 2 through (1,1)
            return affine2(ThetaPoly::from_rational(q, Rational(1)),
                           ThetaPoly::from_rational(q, Rational(1)));
    }
    throw InternalError("eval_piece: bad index");
}

Enclosure ExpandingMap::eval(const Enclosure& x) const {
    const mpfr_prec_t prec = 256;
    // pieces are closed and adjacent; pick one that provably contains x
    if (mpfr_sgn(x.hi()) <= 0) return eval_piece(0, x, prec);
    std::vector<Enclosure> bks;
    bks.reserve(breaks_.size());
    for (const auto& b : breaks_) bks.push_back(b.enclose(prec));
    for (int k = 1; k <= 5; ++k) {
        const Enclosure& lo = bks[static_cast<std::size_t>(k - 1)];
        const Enclosure& hi = bks[static_cast<std::size_t>(k)];
        if (mpfr_cmp(x.lo(), lo.hi()) >= 0 && mpfr_cmp(x.hi(), hi.lo()) <= 0)
            return eval_piece(k, x, prec);
    }
    if (mpfr_cmp(x.lo(), bks[5].hi()) >= 0) return eval_piece(6, x, prec);
    throw DomainError("eval: enclosure straddles a breakpoint");
}

Enclosure ExpandingMap::eval(const Rational& x, double tol) const {
    (void)tol;
    return eval(Enclosure::from_rational(x, 256));
}

double ExpandingMap::continuity_defect(mpfr_prec_t prec) const {
    double worst = 0;
    for (int k = 0; k <= 5; ++k) {
        Enclosure b = breaks_[static_cast<std::size_t>(k)].enclose(prec);
        Enclosure lv = eval_piece(k, b, prec);
        Enclosure rv = eval_piece(k + 1, b, prec);
        Enclosure d = lv - rv;
        worst = std::max(worst, std::max(std::abs(d.lo_double()), std::abs(d.hi_double())));
    }
    return worst;
}

double ExpandingMap::expansion_constant(long probe_depth) const {
    auto rep = geom_->bilip_check(probe_depth);
    double inv = 1.0 / rep.theta_upper;
    return std::min(2.0, inv);
}

ExpandingMap::OpenCover ExpandingMap::cover(mpfr_prec_t prec) const {
    unsigned long q = geom_->q();
    OpenCover u{Enclosure(prec), Enclosure(prec), Enclosure(prec), Enclosure(prec)};
    u.a0 = ThetaPoly::from_rational(q, -delta_).enclose(prec);
    u.b0 = (phi0_1_ + ThetaPoly::from_rational(q, delta_)).enclose(prec);
    u.a1 = (phi1_0_ - ThetaPoly::from_rational(q, delta_)).enclose(prec);
    u.b1 = ThetaPoly::from_rational(q, 1 + delta_).enclose(prec);
    return u;
}

ExpandingMap build_dynamics(std::shared_ptr<const CantorGeometry> geom, const Rational* delta) {
    Rational d = delta ? *delta : ExpandingMap::default_delta(*geom);
    return ExpandingMap(std::move(geom), d);
}

}  // namespace cantorlab
