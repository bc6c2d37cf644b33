#include "cantorlab/covering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <thread>

#include "cantorlab/errors.hpp"

namespace cantorlab {

namespace {

std::atomic<unsigned> g_threads{0};

// value = rational_part + sum c_p log2(p) over odd primes p
struct Log2Combo {
    Rational rational_part;
    std::vector<std::pair<std::uint64_t, Rational>> irr;

    void add_log2_of(std::uint64_t base, const Rational& coeff) {
        if (coeff == 0) return;
        for (auto [p, k] : factor_u64(base)) {
            Rational c = coeff * k;
            if (p == 2) {
                rational_part += c;
            } else {
                bool found = false;
                for (auto& [pp, cc] : irr)
                    if (pp == p) { cc += c; found = true; break; }
                if (!found) irr.emplace_back(p, c);
            }
        }
    }

    void add_rational(const Rational& r) { rational_part += r; }

    void scale(long s) {
        rational_part *= s;
        for (auto& [p, c] : irr) c *= s;
    }

    bool is_rational() const {
        for (const auto& [p, c] : irr)
            if (c != 0) return false;
        return true;
    }

    // exact floor; terminates because a combo with a nonzero odd-prime part
    // is irrational
    Integer floor() const {
        if (is_rational()) return floor_rational(rational_part);
        for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t(1) << 18); prec *= 2) {
            Enclosure acc = Enclosure::from_rational(rational_part, prec);
            for (const auto& [p, c] : irr) {
                if (c == 0) continue;
                Enclosure lg = Enclosure::log_of_uint(p, prec);
                // log2 p = log p / log 2
                Enclosure l2 = Enclosure::log_of_uint(2, prec);
                Enclosure ratio(prec);
                Real rl(prec), rh(prec);
                mpfr_div(rl.get(), lg.lo(), l2.hi(), MPFR_RNDD);
                mpfr_div(rh.get(), lg.hi(), l2.lo(), MPFR_RNDU);
                ratio.set_bounds(rl, rh);
                ratio.mul_rational(c);
                acc += ratio;
            }
            Real flo(prec), fhi(prec);
            mpfr_floor(flo.get(), acc.lo());
            mpfr_floor(fhi.get(), acc.hi());
            if (mpfr_cmp(flo.get(), fhi.get()) == 0) {
                Integer out;
                mpfr_get_z(out.get_mpz_t(), flo.get(), MPFR_RNDN);
                return out;
            }
        }
        throw InternalError("Log2Combo::floor: refinement failed below precision cap");
    }
};

Log2Combo log2_of(const LogLength& v) {
    Log2Combo c;
    for (const auto& [p, e] : v.exponents()) {
        if (p == 2)
            c.rational_part += e;
        else
            c.irr.emplace_back(p, e);
    }
    return c;
}

// binomial row C(m, 0..m)
struct BinRow {
    std::vector<Integer> c;
    explicit BinRow(long m) {
        c.resize(static_cast<std::size_t>(m) + 1);
        c[0] = 1;
        for (long k = 1; k <= m; ++k) {
            c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] * (m - k + 1);
            c[static_cast<std::size_t>(k)] /= k;
        }
    }
};

long floor_div(long a, long b) {  // b > 0
    long q =  a / b, r = a % b;
    return (r != 0 && r < 0) ? q - 1 : q;
}
long ceil_div(long a, long b) { return -floor_div(-a, b); }

// n-window for members of Lambda(rho) derived from the per-step ratio bounds
// lo <= l(wi)/l(w) <= hi:  lo^n <= rel(w) <= rho  and  rel(w) > rho*lo with
// rel(w) <= hi^n
std::pair<long, long> depth_window(const Rational& lo, const Rational& hi, double log1_rho) {
    double llo = -std::log(lo.get_d());
    double lhi = -std::log(hi.get_d());
    long nmin = static_cast<long>(std::floor(log1_rho / llo)) - 2;
    long nmax = static_cast<long>(std::ceil((log1_rho + llo) / lhi)) + 2;
    return {std::max<long>(1, nmin), std::max<long>(1, nmax)};
}

double log1_over(const LogLength& rho) {
    return -rho.log_enclosure(96).mid_double();
}

}  // namespace

void set_covering_threads(unsigned n) { g_threads.store(n); }
unsigned covering_threads() {
    unsigned n = g_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

Rational CoverReport::dyadic_mass() const {
    Rational mass(0);
    for (const auto& [n, cnt] : per_n()) {
        Rational term(cnt);
        Integer den = Integer(1) << static_cast<unsigned>(n);
        term /= Rational(den);
        mass += term;
    }
    return mass;
}

std::map<long, Integer> CoverReport::per_n() const {
    std::map<long, Integer> out;
    for (const auto& e : classes) out[e.n] += e.count;
    return out;
}

// ---------------------------------------------------------------------------
// oracle

namespace {

struct OracleCtx {
    const LambdaSpec& spec;
    const OracleOptions& opts;
    bool symmetric;
    Rational rho_rational;               // symmetric path
    std::vector<Rational> sym_prefix_c;  // cumulative products for symmetric
    std::int64_t nodes = 0;

    // relative length of w (or plain length when no prefix)
    LogLength rel_length(const Word& w) const {
        const Model& m = spec.model;
        if (!spec.prefix || spec.prefix->empty()) return m.length(w);
        const Word& u = *spec.prefix;
        if (m.family() == Family::Star)
            return star_relative_length(m.star_model(), u, w);
        Word uw = u.concat(w);
        return m.length(uw) * m.length(u).inverse();
    }
};

void oracle_dfs(OracleCtx& ctx, Word& w, Rational sym_rel, const Rational& beta_or_zero,
                std::map<std::tuple<long, long, long>, Integer>& hist, Integer& count,
                std::vector<std::string>* words) {
    for (int bit = 0; bit < 2; ++bit) {
        if (++ctx.nodes > ctx.opts.max_nodes)
            throw TooLarge("lambda_oracle: node guard exceeded (see CANTORLAB_MAX_LEAVES)");
        w.push_back(static_cast<std::uint8_t>(bit));
        bool member;
        Rational child_rel;
        if (ctx.symmetric) {
            long k = ctx.spec.prefix ? ctx.spec.prefix->size() : 0;
            child_rel = sym_rel * ctx.spec.model.sym().c.value(k + w.size());
            member = child_rel <= ctx.rho_rational;
        } else {
            member = ll_le(ctx.rel_length(w), ctx.spec.rho);
        }
        if (member) {
            count += 1;
            long n1 = -1, n2 = -1;
            if (ctx.spec.model.family() != Family::Symmetric) {
                OnesSplit s = ones_split(w, beta_or_zero);
                n1 = s.n1;
                n2 = s.n2;
            }
            hist[{w.size(), n1, n2}] += 1;
            if (words) words->push_back(w.to_string());
        } else {
            oracle_dfs(ctx, w, child_rel, beta_or_zero, hist, count, words);
        }
        w.pop_back();
    }
}

}  // namespace

CoverReport lambda_oracle(const LambdaSpec& spec, const OracleOptions& opts) {
    if (!ll_at_most_one(spec.rho) || spec.rho.is_one())
        throw DomainError("rho must lie in (0,1)");
    OracleCtx ctx{spec, opts, spec.model.family() == Family::Symmetric, Rational(0), {}, 0};
    if (ctx.symmetric) {
        if (!spec.rho.is_rational())
            throw UnsupportedModel("symmetric models need a rational rho");
        ctx.rho_rational = spec.rho.to_rational();
    }
    CoverReport rep;
    rep.method = CoverReport::Method::Oracle;
    std::map<std::tuple<long, long, long>, Integer> hist;
    Word w;
    Rational beta_or_zero =
        spec.model.family() == Family::Symmetric ? Rational(1, 2) : spec.model.beta();
    // for symmetric models relative lengths cancel the prefix; only the level
    // offset matters, so the running product starts at 1 either way
    Rational sym_rel(1);
    std::vector<std::string>* words_ptr = opts.collect_words ? &rep.words : nullptr;
    oracle_dfs(ctx, w, sym_rel, beta_or_zero, hist, rep.count, words_ptr);
    rep.n_min = 0;
    rep.n_max = 0;
    for (const auto& [key, cnt] : hist) {
        auto [n, n1, n2] = key;
        rep.classes.push_back({n, n1, n2, cnt});
        if (rep.n_min == 0 || n < rep.n_min) rep.n_min = n;
        rep.n_max = std::max(rep.n_max, n);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// class counter

namespace {

// per-n counting for the global (no-prefix) McMullen/Star case
void count_global_n(const LambdaSpec& spec, long n, std::vector<ClassEntry>& classes,
                    Integer& total) {
    const Model& model = spec.model;
    const Rational& beta = model.beta();
    long p = static_cast<long>(beta.get_num().get_si());
    long q = static_cast<long>(beta.get_den().get_si());
    long b = floor_boundary(n, beta);
    long bp = floor_boundary(n - 1, beta);
    int shift = static_cast<int>(b - bp);

    // thresholds: child  S <= Fc,  parent  S' >= Gp  with S = (q-p)N1 - p N2
    auto base_combo = [&](long depth) {
        Log2Combo c = log2_of(spec.rho);
        if (model.family() == Family::McMullen) {
            c.add_log2_of(static_cast<std::uint64_t>(model.mc().M), Rational(depth));
        } else {
            auto [cm, cm1] = model.star_model().seq->count_split(depth);
            c.add_log2_of(static_cast<std::uint64_t>(model.star_model().M()), Rational(cm));
            c.add_log2_of(static_cast<std::uint64_t>(model.star_model().M() + 1), Rational(cm1));
        }
        c.scale(q);
        return c;
    };
    Integer Fc_z = base_combo(n).floor();
    if (!Fc_z.fits_slong_p()) throw TooLarge("class threshold exceeds machine range");
    long Fc = Fc_z.get_si();
    long Gp = 0;
    bool has_parent = n > 1;
    if (has_parent) {
        Integer Gp_z = base_combo(n - 1).floor() + 1;
        if (!Gp_z.fits_slong_p()) throw TooLarge("class threshold exceeds machine range");
        Gp = Gp_z.get_si();
    }

    long w1free = b - (shift == 1 ? 1 : 0);
    long w2free = n - b - 1;
    if (w2free < 0 || w1free < 0) return;
    BinRow row1(w1free);
    BinRow row2(w2free);

    std::map<std::pair<long, long>, Integer> per_class;
    for (int tau = 0; tau < 2; ++tau) {
        for (int sigma = 0; sigma <= (shift == 1 ? 1 : 0); ++sigma) {
            for (long N1 = (shift == 1 ? sigma : 0); N1 <= b; ++N1) {
                long free1 = N1 - (shift == 1 ? sigma : 0);
                if (free1 < 0 || free1 > w1free) continue;
                // child: (q-p)N1 - p N2 <= Fc  ->  N2 >= ceil(((q-p)N1 - Fc)/p)
                long n2_lo = ceil_div((q - p) * N1 - Fc, p);
                long n2_hi;
                if (has_parent) {
                    // parent: S + p tau - q sigma shift >= Gp
                    long loS = Gp - p * tau + (shift == 1 ? q * sigma : 0);
                    n2_hi = floor_div((q - p) * N1 - loS, p);
                } else {
                    n2_hi = n;  // parent is the empty word, always > rho
                }
                n2_lo = std::max<long>(n2_lo, tau);
                n2_hi = std::min<long>(n2_hi, w2free + tau);
                if (n2_lo > n2_hi) continue;
                const Integer& c1 = row1.c[static_cast<std::size_t>(free1)];
                if (c1 == 0) continue;
                // aggregate the N2 interval in one prefix-sum pull for the
                // total, but keep per-(N1,N2) granularity for the histogram
                for (long N2 = n2_lo; N2 <= n2_hi; ++N2) {
                    Integer cnt = c1 * row2.c[static_cast<std::size_t>(N2 - tau)];
                    if (cnt == 0) continue;
                    per_class[{N1, N2}] += cnt;
                    total += cnt;
                }
            }
        }
    }
    for (auto& [key, cnt] : per_class)
        classes.push_back({n, key.first, key.second, std::move(cnt)});
}

// localized counting for u = 0^k / 1^k under the window constraint
void count_localized_n(const LambdaSpec& spec, long n, std::vector<ClassEntry>& classes,
                       Integer& total) {
    const Model& model = spec.model;
    const Word& u = *spec.prefix;
    long k = u.size();
    bool ones_prefix = u.size() > 0 && u[0] == 1;
    const Rational& beta = model.beta();
    long p = static_cast<long>(beta.get_num().get_si());
    long q = static_cast<long>(beta.get_den().get_si());

    auto window_exp = [&](long depth) {  // floor(beta(depth+k)) - floor(beta k)
        return floor_boundary(depth + k, beta) - floor_boundary(k, beta);
    };
    auto base_combo = [&](long depth) {
        Log2Combo c = log2_of(spec.rho);
        if (model.family() == Family::McMullen) {
            c.add_log2_of(static_cast<std::uint64_t>(model.mc().M), Rational(depth));
        } else {
            auto [cm, cm1] = model.star_model().seq->count_split_window(k, depth);
            c.add_log2_of(static_cast<std::uint64_t>(model.star_model().M()), Rational(cm));
            c.add_log2_of(static_cast<std::uint64_t>(model.star_model().M() + 1), Rational(cm1));
        }
        if (ones_prefix) c.add_rational(Rational(-window_exp(depth)));
        c.scale(q);
        return c;
    };
    Integer Fc_z = base_combo(n).floor();
    if (!Fc_z.fits_slong_p()) throw TooLarge("class threshold exceeds machine range");
    long Fc = Fc_z.get_si();
    long Gp = 0;
    bool has_parent = n > 1;
    if (has_parent) {
        Integer Gp_z = base_combo(n - 1).floor() + 1;
        if (!Gp_z.fits_slong_p()) throw TooLarge("class threshold exceeds machine range");
        Gp = Gp_z.get_si();
    }

    BinRow row(n - 1);
    for (int tau = 0; tau < 2; ++tau) {
        // child: -p j <= Fc  ->  j >= ceil(-Fc/p)
        long j_lo = ceil_div(-Fc, p);
        long j_hi;
        if (has_parent) {
            // parent: -p (j - tau) >= Gp  ->  j <= tau + floor(-Gp/p)
            j_hi = tau + floor_div(-Gp, p);
        } else {
            j_hi = n;
        }
        j_lo = std::max<long>(j_lo, tau);
        j_hi = std::min<long>(j_hi, n - 1 + tau);
        for (long j = j_lo; j <= j_hi; ++j) {
            Integer cnt = row.c[static_cast<std::size_t>(j - tau)];
            if (cnt == 0) continue;
            total += cnt;
            classes.push_back({n, j, -1, std::move(cnt)});
        }
    }
}

CoverReport classes_symmetric(const LambdaSpec& spec) {
    if (!spec.rho.is_rational())
        throw UnsupportedModel("symmetric models need a rational rho");
    Rational rho = spec.rho.to_rational();
    const SymmetricModel& m = spec.model.sym();
    long offset = spec.prefix ? spec.prefix->size() : 0;
    Rational rel(1);
    long n = 0;
    while (rel > rho) {
        ++n;
        rel *= m.c.value(offset + n);
        if (n > 4'000'000) throw TooLarge("symmetric depth guard exceeded");
    }
    CoverReport rep;
    rep.method = CoverReport::Method::Classes;
    rep.count = Integer(1) << static_cast<unsigned>(n);
    rep.classes.push_back({n, -1, -1, rep.count});
    rep.n_min = rep.n_max = n;
    return rep;
}

}  // namespace

CoverReport lambda_classes(const LambdaSpec& spec) {
    if (!ll_at_most_one(spec.rho) || spec.rho.is_one())
        throw DomainError("rho must lie in (0,1)");
    const Model& model = spec.model;
    if (model.family() == Family::Symmetric) return classes_symmetric(spec);

    bool localized = spec.prefix.has_value() && !spec.prefix->empty();
    if (localized) {
        const Word& u = *spec.prefix;
        for (long j = 1; j < u.size(); ++j)
            if (u[j] != u[0])
                throw UnsupportedPrefix("class counting needs a homogeneous prefix 0^k or 1^k");
    }

    auto [lo, hi] = model.ratio_bounds();
    double l1r = log1_over(spec.rho);
    auto [n_min, n_max] = depth_window(lo, hi, l1r);

    if (localized) {
        // the closed form requires the window to stay inside the prefix
        // regime: beta (n + k) <= k for every probed n
        long k = spec.prefix->size();
        if (model.beta() * (n_max + k) > k)
            throw UnsupportedPrefix("prefix too short for the localized closed form at this rho");
    }

    std::vector<long> ns;
    for (long n = n_min; n <= n_max; ++n) ns.push_back(n);

    struct Partial {
        Integer total;
        std::vector<ClassEntry> classes;
    };
    unsigned nthreads = std::min<unsigned>(covering_threads(),
                                           static_cast<unsigned>(std::max<std::size_t>(1, ns.size())));
    std::vector<Partial> partials(ns.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= ns.size()) break;
            Partial& part = partials[i];
            if (localized)
                count_localized_n(spec, ns[i], part.classes, part.total);
            else
                count_global_n(spec, ns[i], part.classes, part.total);
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    CoverReport rep;
    rep.method = CoverReport::Method::Classes;
    rep.n_min = n_min;
    rep.n_max = n_max;
    for (auto& part : partials) {
        rep.count += part.total;
        for (auto& e : part.classes) rep.classes.push_back(std::move(e));
    }
    return rep;
}

CoverReport lambda_count_auto(const LambdaSpec& spec, const OracleOptions& opts) {
    try {
        return lambda_classes(spec);
    } catch (const UnsupportedPrefix&) {
        return lambda_oracle(spec, opts);
    } catch (const UnsupportedModel&) {
        return lambda_oracle(spec, opts);
    }
}

SandwichCounts lambda_sandwich(const Model& star_model, const LogLength& rho) {
    if (star_model.family() != Family::Star)
        throw UnsupportedModel("lambda_sandwich needs a star model");
    long M = star_model.star_model().M();
    const Rational& beta = star_model.beta();
    SandwichCounts out;
    out.star = lambda_classes({star_model, rho, std::nullopt}).count;
    out.m = lambda_classes({Model::mcmullen(beta, M), rho, std::nullopt}).count;
    out.m_plus_one = lambda_classes({Model::mcmullen(beta, M + 1), rho, std::nullopt}).count;
    if (!(out.m_plus_one <= out.star && out.star <= out.m))
        throw InternalError("sandwich inequality violated; counting bug");
    return out;
}

}  // namespace cantorlab
