#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cantorlab/covering.hpp"
#include "cantorlab/models.hpp"

namespace cantorlab {

// H(p) = -p log p - (1-p) log(1-p), natural log, 0 log 0 = 0.
double entropy(double p);
// Directed-rounding enclosure of H(p) for rational p.
Enclosure entropy_enclosure(const Rational& p, mpfr_prec_t prec);

struct DResult {
    double value = 0;
    double p = 0, q = 0;  // argmax
    long grid = 0;
};
// D(lambda) = max_{(p,q) in [0,1]^2} (b H(p) + (1-b) H(q)) /
//             (lambda + b(1-b)(q-p) log 2), for lambda > log 2.
// Dense grid followed by golden-section coordinate ascent from the best
// cells; deterministic.
DResult compute_D(double lambda, const Rational& beta, double tol, long grid = 512);

// max_{p in [0,1]} num_entropy(p) / (den0 + den1 * p) with a unimodality
// check on the scan grid.
DResult maximize_entropy_ratio(double den0, double den1, double tol, long grid = 4096);

struct DimValue {
    double value = 0;
    enum class Method { Formula, Optimizer, Empirical } method = Method::Formula;
    double error = 0;
};

struct DimensionReport {
    std::optional<DimValue> ldim, hdim, lbdim, ubdim, adim;
    // ldim <= hdim <= lbdim <= ubdim <= adim <= 1 within the reported errors
    bool chain_ok() const;
    std::string text() const;
};

DimensionReport mcmullen_dimensions(const McMullenModel& m, double tol);
DimensionReport star_dimensions(const StarModel& m, double tol);

// the quotient series q_n = n log 2 / -log(c_1...c_n) with tail-window
// estimates; shared by symmetric_dimensions and local_dimension so the
// internal-consistency identity is exact
struct QuotientSeries {
    std::vector<std::int64_t> sample_n;  // block ends when present, else the final third
    std::vector<double> sample_q;
    double lb_est = 0, ub_est = 0;       // min/max over the tail window
    double error = 0;                    // finite-scale spread (ub-lb)/2
    std::size_t tail_begin = 0;          // first sample index inside the tail window
};
QuotientSeries symmetric_quotients(const SymmetricModel& m, std::int64_t n_max);

struct SymmetricDimReport {
    QuotientSeries series;
    DimensionReport dims;  // hdim = lbdim = liminf est, ubdim (= pdim) = limsup est
};
SymmetricDimReport symmetric_dimensions(const SymmetricModel& m, std::int64_t n_max);

struct LocalDimSample {
    std::string coding;
    std::vector<double> log2_deltas;  // log2 of delta_n = c_1...c_n at the samples
    std::vector<double> ratios;       // log mu(B(x,delta_n)) / log delta_n
    double liminf_est = 0, limsup_est = 0;
    QuotientSeries series;
};
// Local dimension data of the (1/2,1/2) stationary measure at the point with
// the given coding; mu(I_n(x)) = 2^{-n}, so the ratios coincide with the
// quotient series.
LocalDimSample local_dimension(const SymmetricModel& m, const Word& coding, std::int64_t n_max);

struct EmpiricalBox {
    std::vector<long> ks;
    std::vector<double> slopes;  // log2 #Lambda(2^-K) / K
    double lb_est = 0, ub_est = 0;
};
// Covering-count slopes over a schedule of rho = 2^-K.
EmpiricalBox empirical_box(const Model& model, const std::vector<long>& schedule);

// K values whose whole depth window sits inside a single (M_i) block; at
// most `want`, scanning blocks from low indices up.
std::vector<long> block_interior_scales(const StarModel& m, int want, long k_cap);

struct MeasureEnclosure {
    Rational lower, upper;  // exact bounds on the Lebesgue measure
    double width() const;
};
// Level-n_max total length as the upper bound; tail-product lower bound when
// the generator admits an exact tail sum (half_minus_geometric), else 0.
MeasureEnclosure lebesgue_measure(const SymmetricModel& m, long n_max);

}  // namespace cantorlab
