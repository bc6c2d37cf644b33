#include "cantorlab/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cantorlab/errors.hpp"

namespace cantorlab {

double entropy(double p) {
    if (p < 0 || p > 1) throw DomainError("entropy: p outside [0,1]");
    if (p == 0 || p == 1) return 0;
    return -p * std::log(p) - (1 - p) * std::log(1 - p);
}

Enclosure entropy_enclosure(const Rational& p, mpfr_prec_t prec) {
    if (p < 0 || p > 1) throw DomainError("entropy: p outside [0,1]");
    if (p == 0 || p == 1) return Enclosure::exact_zero(prec);
    // -p log p: log p < 0, so the enclosure arithmetic handles the signs
    auto log_of_rational = [&](const Rational& r) {
        Enclosure e(prec);
        Real lo(prec), hi(prec);
        mpfr_set_q(lo.get(), r.get_mpq_t(), MPFR_RNDD);
        mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
        mpfr_set_q(hi.get(), r.get_mpq_t(), MPFR_RNDU);
        mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
        e.set_bounds(lo, hi);
        return e;
    };
    Enclosure t1 = log_of_rational(p);
    t1.mul_rational(-p);
    Enclosure t2 = log_of_rational(1 - p);
    t2.mul_rational(-(1 - p));
    return t1 + t2;
}

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// golden-section maximization of f on [a,b]
template <typename F>
double golden_max(F&& f, double a, double b, double* argmax) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    double xm = 0.5 * (a + b);
    if (argmax) *argmax = xm;
    return f(xm);
}

}  // namespace

DResult compute_D(double lambda, const Rational& beta, double tol, long grid) {
    if (!(lambda > kLn2 + tol)) throw DomainError("compute_D requires lambda > log 2");
    double b = beta.get_d();
    auto f = [&](double p, double q) {
        return (b * entropy(p) + (1 - b) * entropy(q)) /
               (lambda + b * (1 - b) * (q - p) * kLn2);
    };
    struct Cell {
        double v, p, q;
    };
    std::vector<Cell> top;
    for (long i = 0; i <= grid; ++i) {
        double p = static_cast<double>(i) / static_cast<double>(grid);
        for (long j = 0; j <= grid; ++j) {
            double q = static_cast<double>(j) / static_cast<double>(grid);
            double v = f(p, q);
            if (top.size() < 8) {
                top.push_back({v, p, q});
                std::sort(top.begin(), top.end(), [](auto& a, auto& c) { return a.v > c.v; });
            } else if (v > top.back().v) {
                top.back() = {v, p, q};
                std::sort(top.begin(), top.end(), [](auto& a, auto& c) { return a.v > c.v; });
            }
        }
    }
    double h = 2.0 / static_cast<double>(grid);
    Cell best{-1, 0, 0};
    for (const auto& cell : top) {
        double p = cell.p, q = cell.q;
        double cur = cell.v;
        for (int round = 0; round < 64; ++round) {
            double np, nq;
            double v1 = golden_max([&](double x) { return f(x, q); }, std::max(0.0, p - h),
                                   std::min(1.0, p + h), &np);
            p = np;
            double v2 = golden_max([&](double y) { return f(p, y); }, std::max(0.0, q - h),
                                   std::min(1.0, q + h), &nq);
            q = nq;
            if (v2 - cur < tol * 1e-4 && round > 2) {
                cur = v2;
                break;
            }
            cur = std::max(v2, v1);
        }
        if (cur > best.v) best = {cur, p, q};
    }
    return {best.v, best.p, best.q, grid};
}

DResult maximize_entropy_ratio(double den0, double den1, double tol, long grid) {
    auto f = [&](double p) { return entropy(p) / (den0 + den1 * p); };
    // unimodality check on the scan grid: a single run of ascents then descents
    double prev = f(0.0);
    long maxima = 0;
    bool rising = true;
    double bestp = 0, bestv = prev;
    for (long i = 1; i <= grid; ++i) {
        double p = static_cast<double>(i) / static_cast<double>(grid);
        double v = f(p);
        if (v > bestv) {
            bestv = v;
            bestp = p;
        }
        if (rising && v < prev - 1e-15) {
            rising = false;
            ++maxima;
        } else if (!rising && v > prev + 1e-15) {
            rising = true;
        }
        prev = v;
    }
    if (maxima > 1) throw InternalError("entropy ratio scan is not unimodal");
    double h = 2.0 / static_cast<double>(grid);
    double arg;
    double v = golden_max(f, std::max(0.0, bestp - h), std::min(1.0, bestp + h), &arg);
    (void)tol;
    return {v, arg, 0, grid};
}

bool DimensionReport::chain_ok() const {
    std::vector<const std::optional<DimValue>*> order = {&ldim, &hdim, &lbdim, &ubdim, &adim};
    double prev = 0, prev_err = 0;
    bool have_prev = false;
    for (auto* d : order) {
        if (!d->has_value()) continue;
        double v = (*d)->value, e = (*d)->error;
        if (have_prev && v + e < prev - prev_err) return false;
        if (v - e > 1.0 + 1e-12) return false;
        prev = v;
        prev_err = e;
        have_prev = true;
    }
    return true;
}

std::string DimensionReport::text() const {
    auto one = [](const char* name, const std::optional<DimValue>& d) {
        std::ostringstream os;
        if (!d) return std::string();
        os.precision(9);
        os << name << "=" << std::fixed << d->value << " ";
        return os.str();
    };
    return one("ldim", ldim) + one("hdim", hdim) + one("lbdim", lbdim) + one("ubdim", ubdim) +
           one("adim", adim);
}

namespace {
// log2(M)/1 closed form; exact 1/k when M = 2^k so "hdim = 1/7" style
// statements hold bit-for-bit
double log_ratio_ln2(long M) {
    if ((M & (M - 1)) == 0) {
        int k = 0;
        while ((1L << k) < M) ++k;
        return 1.0 / static_cast<double>(k);
    }
    return kLn2 / std::log(static_cast<double>(M));
}
}  // namespace

DimensionReport mcmullen_dimensions(const McMullenModel& m, double tol) {
    DimensionReport rep;
    double logM = std::log(static_cast<double>(m.M));
    rep.hdim = DimValue{log_ratio_ln2(m.M), DimValue::Method::Formula, 0};
    DResult d = compute_D(logM, m.beta, tol);
    rep.lbdim = DimValue{d.value, DimValue::Method::Optimizer, tol};
    rep.ubdim = rep.lbdim;
    if (!(d.value > rep.hdim->value))
        throw InternalError("box dimension failed to exceed the Hausdorff dimension");
    return rep;
}

DimensionReport star_dimensions(const StarModel& m, double tol) {
    DimensionReport rep;
    double M = static_cast<double>(m.M());
    double b = m.beta.get_d();
    rep.hdim = DimValue{log_ratio_ln2(m.M() + 1), DimValue::Method::Formula, 0};
    rep.lbdim = DimValue{compute_D(std::log(M + 1), m.beta, tol).value,
                         DimValue::Method::Optimizer, tol};
    rep.ubdim = DimValue{compute_D(std::log(M), m.beta, tol).value,
                         DimValue::Method::Optimizer, tol};
    // adim: max H(p) / (log M - b(1-p) log 2) = max H(p) / ((log M - b log 2) + b log 2 p)
    rep.adim = DimValue{maximize_entropy_ratio(std::log(M) - b * kLn2, b * kLn2, tol).value,
                        DimValue::Method::Optimizer, tol};
    // ldim: max H(p) / (log(M+1) + b p log 2)
    rep.ldim = DimValue{maximize_entropy_ratio(std::log(M + 1), b * kLn2, tol).value,
                        DimValue::Method::Optimizer, tol};
    return rep;
}

QuotientSeries symmetric_quotients(const SymmetricModel& m, std::int64_t n_max) {
    if (m.c.kind() == CSequence::Kind::Reciprocal)
        throw PrecondFailed("quotient formula needs inf c_n > 0, but c_n -> 0");
    QuotientSeries out;
    std::vector<std::int64_t> samples;
    if (m.c.has_blocks()) {
        samples = m.c.block_ends(n_max);
    } else {
        for (std::int64_t n = std::max<std::int64_t>(1, (2 * n_max) / 3); n <= n_max;
             n += std::max<std::int64_t>(1, n_max / 64))
            samples.push_back(n);
        if (samples.empty() || samples.back() != n_max) samples.push_back(n_max);
    }
    // cumulative -log(c_1...c_n) in doubles; exact enough for slope estimates
    double acc = 0;
    std::int64_t pos = 0;
    for (std::int64_t s : samples) {
        for (std::int64_t n = pos + 1; n <= s; ++n) acc += -std::log(m.c.value(n).get_d());
        pos = s;
        out.sample_n.push_back(s);
        out.sample_q.push_back(static_cast<double>(s) * kLn2 / acc);
    }
    out.tail_begin = out.sample_n.size() / 4;
    double lo = out.sample_q[out.tail_begin], hi = lo;
    for (std::size_t i = out.tail_begin; i < out.sample_q.size(); ++i) {
        lo = std::min(lo, out.sample_q[i]);
        hi = std::max(hi, out.sample_q[i]);
    }
    out.lb_est = lo;
    out.ub_est = hi;
    out.error = (hi - lo) / 2 + 1.0 / static_cast<double>(n_max);
    return out;
}

SymmetricDimReport symmetric_dimensions(const SymmetricModel& m, std::int64_t n_max) {
    SymmetricDimReport rep;
    rep.series = symmetric_quotients(m, n_max);
    rep.dims.hdim = DimValue{rep.series.lb_est, DimValue::Method::Empirical, rep.series.error};
    rep.dims.lbdim = rep.dims.hdim;
    rep.dims.ubdim = DimValue{rep.series.ub_est, DimValue::Method::Empirical, rep.series.error};
    return rep;
}

LocalDimSample local_dimension(const SymmetricModel& m, const Word& coding, std::int64_t n_max) {
    // mu(I_n(x)) = 2^{-n} for the (1/2,1/2) stationary measure, and
    // B(x, delta_n) with delta_n = c_1...c_n meets exactly I_n(x) when the
    // adjacent gaps dominate (c_n <= 1/3 for the families probed here), so
    // the ratio at scale delta_n is the quotient q_n.
    LocalDimSample out;
    out.coding = coding.to_string();
    out.series = symmetric_quotients(m, n_max);
    out.ratios = out.series.sample_q;
    out.log2_deltas.reserve(out.series.sample_n.size());
    for (std::size_t i = 0; i < out.series.sample_n.size(); ++i)
        out.log2_deltas.push_back(-static_cast<double>(out.series.sample_n[i]) /
                                  out.series.sample_q[i]);
    out.liminf_est = out.series.lb_est;
    out.limsup_est = out.series.ub_est;
    return out;
}

EmpiricalBox empirical_box(const Model& model, const std::vector<long>& schedule) {
    EmpiricalBox out;
    for (long K : schedule) {
        if (K < 1) throw DomainError("empirical_box: K >= 1");
        LogLength rho = LogLength::base_pow(2, Rational(-K));
        CoverReport rep = lambda_classes({model, rho, std::nullopt});
        // log2(count) via mpfr
        Real t(96);
        mpfr_set_z(t.get(), rep.count.get_mpz_t(), MPFR_RNDN);
        mpfr_log2(t.get(), t.get(), MPFR_RNDN);
        out.ks.push_back(K);
        out.slopes.push_back(t.to_double() / static_cast<double>(K));
    }
    std::size_t start = out.slopes.size() - out.slopes.size() / 3;
    if (start >= out.slopes.size()) start = out.slopes.size() - 1;
    double lo = out.slopes[start], hi = lo;
    for (std::size_t i = start; i < out.slopes.size(); ++i) {
        lo = std::min(lo, out.slopes[i]);
        hi = std::max(hi, out.slopes[i]);
    }
    out.lb_est = lo;
    out.ub_est = hi;
    return out;
}

std::vector<long> block_interior_scales(const StarModel& m, int want, long k_cap) {
    // depth window for rho = 2^-K: [K ln2 / ln(2M+2), 2 K ln2 / ln(M/2)];
    // pick K so the window sits inside one block [N_j, N_{j+1})
    double c1 = kLn2 / std::log(2.0 * static_cast<double>(m.M()) + 2.0);
    double c2 = 2.0 * kLn2 / std::log(static_cast<double>(m.M()) / 2.0);
    std::vector<long> out;
    for (std::size_t j = 1; j <= 64 && out.size() < static_cast<std::size_t>(want); ++j) {
        std::int64_t lo_n, hi_n;
        try {
            lo_n = m.seq->N(j);
            hi_n = m.seq->N(j + 1);
        } catch (const Error&) {
            break;
        }
        // need c1 K >= lo_n + 1 and c2 K <= hi_n - 1
        long kmin = static_cast<long>(std::ceil((static_cast<double>(lo_n) + 1) / c1));
        long kmax = static_cast<long>(std::floor((static_cast<double>(hi_n) - 1) / c2));
        if (kmin > k_cap) break;
        if (kmin > kmax) continue;
        kmax = std::min(kmax, k_cap);
        // up to three samples per feasible block: ends and middle
        std::vector<long> cand = {kmin, (kmin + kmax) / 2, kmax};
        for (long K : cand) {
            if (out.size() >= static_cast<std::size_t>(want)) break;
            if (out.empty() || out.back() != K) out.push_back(K);
        }
    }
    return out;
}

double MeasureEnclosure::width() const { return Rational(upper - lower).get_d(); }

MeasureEnclosure lebesgue_measure(const SymmetricModel& m, long n_max) {
    Rational upper(1);
    for (long j = 1; j <= n_max; ++j) upper *= 2 * m.c.value(j);
    Rational lower(0);
    if (m.c.kind() == CSequence::Kind::HalfMinusGeometric) {
        // 1 - 2 c_j = 2 a r^j with an exact geometric tail
        const Rational& a = m.c.param_a();
        const Rational& r = m.c.param_r();
        Rational rpow(1);
        for (long j = 0; j < n_max + 1; ++j) rpow *= r;  // r^{n_max+1}
        Rational tail = 2 * a * rpow / (1 - r);
        if (tail < 1) lower = upper * (1 - tail);
    }
    return {lower, upper};
}

}  // namespace cantorlab
