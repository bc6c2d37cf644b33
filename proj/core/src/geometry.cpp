#include "cantorlab/geometry.hpp"

#include <algorithm>

#include "cantorlab/errors.hpp"

namespace cantorlab {

CantorGeometry::CantorGeometry(Model model, long max_depth)
    : model_(std::move(model)), q_(model_.theta_q()), max_depth_(max_depth) {}

ThetaPoly CantorGeometry::length_poly(const Word& w) const {
    if (model_.family() == Family::Symmetric)
        return ThetaPoly::from_rational(q_, sym_length_rational(model_.sym(), w.size()));
    return ThetaPoly::from_loglength(q_, model_.length(w));
}

ThetaPoly CantorGeometry::left(const Word& w) const {
    ThetaPoly L(q_);
    Word p;
    ThetaPoly prev = ThetaPoly::from_rational(q_, Rational(1));  // l(empty) = 1
    for (long j = 0; j < w.size(); ++j) {
        p.push_back(w[j]);
        ThetaPoly cur = length_poly(p);
        if (w[j] == 1) L += prev - cur;  // left(I_{p1}) = right(I_p) - l(p1)
        prev = cur;
    }
    return L;
}

ThetaPoly CantorGeometry::right(const Word& w) const {
    return left(w) + length_poly(w);
}

ThetaPoly CantorGeometry::gap_len_checked(const Word& w) const {
    Word w0 = w, w1 = w;
    w0.push_back(0);
    w1.push_back(1);
    ThetaPoly g = length_poly(w) - length_poly(w0) - length_poly(w1);
    if (g.sign() <= 0)
        throw ModelInvalid("child lengths do not sum below the parent at node '" + w.to_string() + "'");
    return g;
}

CantorGeometry::IntervalNode CantorGeometry::build_interval(const Word& w) const {
    // check gap positivity along the whole path
    Word p;
    gap_len_checked(p);
    for (long j = 0; j < w.size(); ++j) {
        p.push_back(w[j]);
        gap_len_checked(p);
    }
    IntervalNode node;
    node.word = w;
    node.left = left(w);
    node.length = length(w);
    node.right = node.left + length_poly(w);
    Word w0 = w, w1 = w;
    w0.push_back(0);
    w1.push_back(1);
    node.gap_left = node.left + length_poly(w0);
    node.gap_right = node.right - length_poly(w1);
    return node;
}

Enclosure CantorGeometry::pi_point(const Word& bits, long depth, mpfr_prec_t prec) const {
    if (depth > bits.size()) throw DomainError("pi_point: depth exceeds coding length");
    Word p = bits.prefix(depth);
    Enclosure lo = left(p).enclose(prec);
    Enclosure hi = right(p).enclose(prec);
    Enclosure out(prec);
    Real a(prec), b(prec);
    mpfr_set(a.get(), lo.lo(), MPFR_RNDD);
    mpfr_set(b.get(), hi.hi(), MPFR_RNDU);
    out.set_bounds(a, b);
    return out;
}

CantorGeometry::LocateResult CantorGeometry::locate(const Rational& x, long depth_cap) const {
    if (x < 0 || x > 1) throw DomainError("locate: x outside [0,1]");
    if (x == 0) return PointOfE{Word{}, true, 0};
    if (x == 1) return PointOfE{Word{}, true, 1};
    Word w;
    ThetaPoly L = ThetaPoly::zero(q_);
    ThetaPoly R = ThetaPoly::from_rational(q_, Rational(1));
    ThetaPoly xp = ThetaPoly::from_rational(q_, x);
    for (long d = 0; d < depth_cap; ++d) {
        Word w0 = w, w1 = w;
        w0.push_back(0);
        w1.push_back(1);
        ThetaPoly gl = L + length_poly(w0);
        ThetaPoly gr = R - length_poly(w1);
        if (ThetaPoly::cmp(gr, gl) <= 0)
            throw ModelInvalid("child lengths do not sum below the parent at node '" + w.to_string() + "'");
        int cl = ThetaPoly::cmp(xp, gl);
        if (cl < 0) {
            w = w0;
            R = gl;
            continue;
        }
        if (cl == 0) return PointOfE{w0, true, 1};
        int cr = ThetaPoly::cmp(xp, gr);
        if (cr > 0) {
            w = w1;
            L = gr;
            continue;
        }
        if (cr == 0) return PointOfE{w1, true, 0};
        return GapHit{w};
    }
    return PointOfE{w, false, 0};
}

CantorGeometry::PhiResult CantorGeometry::phi_eval(int i, const Rational& x, double tol) const {
    if (i != 0 && i != 1) throw DomainError("phi index must be 0 or 1");
    auto exact_result = [&](const ThetaPoly& v) {
        mpfr_prec_t prec = 96;
        Enclosure e = v.enclose(prec);
        while (e.width() > tol && prec < (mpfr_prec_t(1) << 16)) {
            prec *= 2;
            e = v.enclose(prec);
        }
        return PhiResult{e, v};
    };
    // slope-1/2 extension outside [0,1]
    if (x < 0) {
        ThetaPoly v = i == 0 ? ThetaPoly::zero(q_) : left(Word::from_string("1"));
        v += ThetaPoly::from_rational(q_, x / 2);
        return exact_result(v);
    }
    if (x > 1) {
        ThetaPoly v = i == 0 ? length_poly(Word::from_string("0"))
                             : ThetaPoly::from_rational(q_, Rational(1));
        v += ThetaPoly::from_rational(q_, (x - 1) / 2);
        return exact_result(v);
    }
    LocateResult loc = locate(x, max_depth_);
    if (std::holds_alternative<GapHit>(loc)) {
        const Word& w = std::get<GapHit>(loc).node;
        Word iw;
        iw.push_back(static_cast<std::uint8_t>(i));
        for (long j = 0; j < w.size(); ++j) iw.push_back(w[j]);
        IntervalNode src = build_interval(w);
        IntervalNode dst = build_interval(iw);
        ThetaPoly slope = (dst.gap_right - dst.gap_left) / (src.gap_right - src.gap_left);
        ThetaPoly v = dst.gap_left +
                      slope * (ThetaPoly::from_rational(q_, x) - src.gap_left);
        return exact_result(v);
    }
    const PointOfE& pt = std::get<PointOfE>(loc);
    Word iw;
    iw.push_back(static_cast<std::uint8_t>(i));
    for (long j = 0; j < pt.coding.size(); ++j) iw.push_back(pt.coding[j]);
    if (pt.exact) {
        ThetaPoly v = pt.tail == 0 ? left(iw) : right(iw);
        return exact_result(v);
    }
    // coding known to the depth cap only
    Enclosure e = pi_point(iw, iw.size(), 192);
    if (e.width() > tol)
        throw DepthExceeded("phi_eval: tolerance unreachable within depth cap");
    return PhiResult{e, std::nullopt};
}

Enclosure CantorGeometry::phi_eval(int i, const Enclosure& x) const {
    // Descend while the enclosure provably stays inside one child interval.
    Word w;
    const mpfr_prec_t prec = 256;
    ThetaPoly L = ThetaPoly::zero(q_);
    ThetaPoly R = ThetaPoly::from_rational(q_, Rational(1));
    for (long d = 0; d < max_depth_; ++d) {
        Word w0 = w, w1 = w;
        w0.push_back(0);
        w1.push_back(1);
        ThetaPoly gl = L + length_poly(w0);
        ThetaPoly gr = R - length_poly(w1);
        Enclosure egl = gl.enclose(prec), egr = gr.enclose(prec);
        // inside left child: hi(x) < lo(gl)
        if (mpfr_cmp(x.hi(), egl.lo()) < 0) {
            w = w0;
            R = gl;
            continue;
        }
        if (mpfr_cmp(x.lo(), egr.hi()) > 0) {
            w = w1;
            L = gr;
            continue;
        }
        // strictly inside the gap?
        if (mpfr_cmp(x.lo(), egl.hi()) > 0 && mpfr_cmp(x.hi(), egr.lo()) < 0) {
            Word iw;
            iw.push_back(static_cast<std::uint8_t>(i));
            for (long j = 0; j < w.size(); ++j) iw.push_back(w[j]);
            IntervalNode dst = build_interval(iw);
            Enclosure c = dst.gap_left.enclose(prec);
            Enclosure d2 = dst.gap_right.enclose(prec);
            // affine image: c + (x - gl) * (d2 - c) / (egr - egl)
            Enclosure num = d2 - c;
            Enclosure den = egr - egl;
            // divide: num/den with den > 0
            Enclosure ratio(prec);
            Real rl(prec), rh(prec);
            mpfr_div(rl.get(), num.lo(), den.hi(), MPFR_RNDD);
            mpfr_div(rh.get(), num.hi(), den.lo(), MPFR_RNDU);
            ratio.set_bounds(rl, rh);
            Enclosure shifted = x - egl;
            return c + shifted * ratio;
        }
        break;  // cannot separate: fall through to the hull answer
    }
    Word iw;
    iw.push_back(static_cast<std::uint8_t>(i));
    for (long j = 0; j < w.size(); ++j) iw.push_back(w[j]);
    Enclosure lo = left(iw).enclose(prec);
    Enclosure hi = right(iw).enclose(prec);
    Enclosure out(prec);
    Real a(prec), b(prec);
    mpfr_set(a.get(), lo.lo(), MPFR_RNDD);
    mpfr_set(b.get(), hi.hi(), MPFR_RNDU);
    out.set_bounds(a, b);
    return out;
}

namespace {

struct RatioVal {
    ThetaPoly num, den;  // both positive
};

// sign of a - b for positive fractions
int ratio_cmp(const RatioVal& a, const RatioVal& b) {
    return ThetaPoly::cmp(a.num * b.den, b.num * a.den);
}

int ratio_cmp_rational(const RatioVal& a, const Rational& r) {
    ThetaPoly rb = a.den;
    rb.mul_rational(r);
    return ThetaPoly::cmp(a.num, rb);
}

}  // namespace

CantorGeometry::BiLipReport CantorGeometry::bilip_check(long depth) const {
    if (depth < 1) throw DomainError("bilip_check: depth >= 1");
    BiLipReport rep;
    rep.depth = depth;

    // family closed-form bounds on the probed ratios
    Rational ibound_lo, ibound_hi, gbound_lo, gbound_hi;
    switch (model_.family()) {
        case Family::McMullen: {
            long M = model_.mc().M;
            ibound_lo = Rational(1, 2 * M);
            ibound_hi = Rational(2, M);
            gbound_lo = Rational(1, 2 * M) * Rational(M - 4, M - 1);
            gbound_hi = Rational(2, M) * Rational(M - 1, M - 4);
            rep.certificate = BiLipReport::Certificate::ClosedForm;
            rep.certificate_note = "ratio bounds hold at every depth for this family";
            break;
        }
        case Family::Star: {
            long M = model_.star_model().M();
            ibound_lo = Rational(1, 2 * M + 2);
            ibound_hi = Rational(2, M);
            gbound_lo = Rational(1, 2 * M + 2) * Rational(M - 4, M);
            gbound_hi = Rational(2, M - 4);
            rep.certificate = BiLipReport::Certificate::ClosedForm;
            rep.certificate_note = "ratio bounds hold at every depth for this family";
            break;
        }
        case Family::Symmetric: {
            auto cert = model_.sym().c.certificate();
            auto rb = model_.ratio_bounds();
            ibound_lo = rb.first;
            ibound_hi = rb.second;
            switch (cert.status) {
                case CSequence::Certificate::Status::Pass:
                    gbound_lo = cert.inf_bound;
                    gbound_hi = cert.sup_bound;
                    rep.certificate = BiLipReport::Certificate::SequenceCertified;
                    break;
                case CSequence::Certificate::Status::Fail:
                    gbound_lo = Rational(0);
                    gbound_hi = Rational(1);
                    rep.certificate = BiLipReport::Certificate::SequenceFails;
                    break;
                case CSequence::Certificate::Status::DepthBounded:
                    gbound_lo = Rational(0);
                    gbound_hi = Rational(1);
                    rep.certificate = BiLipReport::Certificate::DepthBounded;
                    break;
            }
            rep.certificate_note = cert.note;
            break;
        }
    }

    std::optional<RatioVal> best_min, best_max;
    auto consider = [&](const RatioVal& v, const Word& w, int i, bool gap_type) {
        if (!best_min || ratio_cmp(v, *best_min) < 0) {
            best_min = v;
            rep.min_witness = {w.to_string(), i, gap_type, 0.0};
        }
        if (!best_max || ratio_cmp(v, *best_max) > 0) {
            best_max = v;
            rep.max_witness = {w.to_string(), i, gap_type, 0.0};
        }
        const Rational& blo = gap_type ? gbound_lo : ibound_lo;
        const Rational& bhi = gap_type ? gbound_hi : ibound_hi;
        if (ratio_cmp_rational(v, blo) < 0 || ratio_cmp_rational(v, bhi) > 0)
            ++rep.bound_violations;
    };

    // gap length cache by word string would be overkill at depth <= 14;
    // recompute on demand
    auto gap_len = [&](const Word& w) { return gap_len_checked(w); };

    // enumerate all w with |w| <= depth-1
    std::vector<Word> frontier{Word{}};
    for (long d = 0; d <= depth - 1; ++d) {
        std::vector<Word> next;
        for (const Word& w : frontier) {
            ThetaPoly lw = length_poly(w);
            ThetaPoly gw = gap_len(w);
            for (int i = 0; i < 2; ++i) {
                Word iw;
                iw.push_back(static_cast<std::uint8_t>(i));
                for (long j = 0; j < w.size(); ++j) iw.push_back(w[j]);
                consider(RatioVal{length_poly(iw), lw}, w, i, false);
                consider(RatioVal{gap_len(iw), gw}, w, i, true);
                rep.pairs_checked += 1;
            }
            if (d + 1 <= depth - 1) {
                Word w0 = w, w1 = w;
                w0.push_back(0);
                w1.push_back(1);
                next.push_back(std::move(w0));
                next.push_back(std::move(w1));
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }

    ThetaPoly zero = ThetaPoly::zero(q_);
    rep.theta_star = (best_min->num / best_min->den).enclose(96).lo_double();
    rep.theta_upper = (best_max->num / best_max->den).enclose(96).hi_double();
    rep.min_witness.value = rep.theta_star;
    rep.max_witness.value = rep.theta_upper;
    bool min_pos = ThetaPoly::cmp(best_min->num, zero) > 0;
    bool max_lt1 = ThetaPoly::cmp(best_max->num, best_max->den) < 0;
    rep.finite_ok = min_pos && max_lt1;
    rep.pass = rep.finite_ok && rep.certificate != BiLipReport::Certificate::SequenceFails &&
               rep.bound_violations == 0;
    return rep;
}

std::vector<Rational> diff_quotients(const SymmetricModel& m, long n_max) {
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(n_max));
    Rational cn = m.c.value(1);
    for (long n = 1; n <= n_max; ++n) {
        Rational cn1 = m.c.value(n + 1);
        out.push_back(cn * (1 - cn1) / (1 - cn));
        cn = cn1;
    }
    return out;
}

Rational diff_quotient_at(const SymmetricModel& m, const Word& coding_prefix, long n, int i) {
    if (i != 0 && i != 1) throw DomainError("phi index must be 0 or 1");
    long L = std::max<long>(coding_prefix.size(), n + 1);
    Word cx;
    for (long j = 0; j < L; ++j)
        cx.push_back(j < coding_prefix.size() ? coding_prefix[j] : std::uint8_t(0));
    Word cy;
    for (long j = 0; j < L; ++j)
        cy.push_back(j + 1 == n ? std::uint8_t(1 - cx[j]) : cx[j]);
    SymPoint x = sym_point(m, cx, L);
    SymPoint y = sym_point(m, cy, L);
    Word icx, icy;
    icx.push_back(static_cast<std::uint8_t>(i));
    icy.push_back(static_cast<std::uint8_t>(i));
    for (long j = 0; j < L; ++j) {
        icx.push_back(cx[j]);
        icy.push_back(cy[j]);
    }
    SymPoint fx = sym_point(m, icx, L + 1);
    SymPoint fy = sym_point(m, icy, L + 1);
    return (fx.value - fy.value) / (x.value - y.value);
}

}  // namespace cantorlab
