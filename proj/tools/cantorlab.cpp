// cantorlab: exact Cantor-set attractors, covering counts, and dimensions.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "cantorlab/dimensions.hpp"
#include "cantorlab/dynamics.hpp"
#include "cantorlab/report.hpp"

using namespace cantorlab;
using nlohmann::ordered_json;

namespace {

// rho strings are restricted to the exact form "2^-K"; decimal inputs cannot
// be represented in the length domain and are refused with a hint.
LogLength parse_rho(const std::string& s) {
    if (s.rfind("2^-", 0) == 0 || s.rfind("2^", 0) == 0) {
        std::string exp = s.substr(s[2] == '-' ? 3 : 2);
        try {
            long k = std::stol(exp);
            if (s[2] == '-') k = -k;
            if (k >= 0) throw ConfigError("rho must be < 1, use 2^-K with K >= 1");
            return LogLength::base_pow(2, Rational(k));
        } catch (const std::invalid_argument&) {
            throw ConfigError("cannot parse rho exponent in '" + s + "'");
        }
    }
    if (s.find('.') != std::string::npos)
        throw ConfigError("decimal rho cannot be represented exactly; use the dyadic form 2^-K");
    if (s.find('/') != std::string::npos) {
        Rational r = parse_rational(s);
        if (r <= 0 || r >= 1) throw ConfigError("rho must lie in (0,1)");
        return LogLength::from_rational(r);
    }
    throw ConfigError("rho format: 2^-K (or p/q)");
}

Word parse_prefix(const std::string& s) {
    auto caret = s.find('^');
    if (caret != std::string::npos) {
        std::string sym = s.substr(0, caret);
        long k = std::stol(s.substr(caret + 1));
        if ((sym != "0" && sym != "1") || k < 1)
            throw ConfigError("prefix format: 0^k, 1^k, or a literal word");
        return Word::repeated(sym == "1" ? 1 : 0, k);
    }
    return Word::from_string(s);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw ConfigError("cannot open output file: " + out_path);
        out << text << "\n";
    }
}

std::uint64_t hash_of(const Model& model, const std::string& cmdline) {
    return config_hash(model.to_json_text() + "|" + cmdline);
}

struct CommonOpts {
    std::string model_path;
    std::string out_path;
    std::string format = "json";
};

ordered_json dim_report_obj(const DimensionReport& rep) {
    ordered_json j = ordered_json::parse(dimension_report_json(rep, "", 0));
    j.erase("version");
    j.erase("config_hash");
    j.erase("model");
    return j;
}

int run_count(const CommonOpts& c, const std::string& rho_s, const std::string& prefix_s,
              const std::string& method, bool full_classes, bool want_words,
              const std::string& cmdline) {
    Model model = Model::from_json_file(c.model_path);
    LambdaSpec spec{model, parse_rho(rho_s), std::nullopt};
    if (!prefix_s.empty()) spec.prefix = parse_prefix(prefix_s);
    OracleOptions opts;
    if (const char* guard = std::getenv("CANTORLAB_MAX_LEAVES"))
        opts.max_nodes = std::strtoll(guard, nullptr, 10);
    opts.collect_words = want_words;
    CoverReport rep;
    if (method == "oracle")
        rep = lambda_oracle(spec, opts);
    else if (method == "classes")
        rep = lambda_classes(spec);
    else
        rep = lambda_count_auto(spec, opts);
    emit(cover_report_json(rep, spec, hash_of(model, cmdline), full_classes), c.out_path);
    return 0;
}

int run_bilip(const CommonOpts& c, long depth, const std::string& cmdline) {
    Model model = Model::from_json_file(c.model_path);
    CantorGeometry geom(model);
    auto rep = geom.bilip_check(depth);
    emit(bilip_report_json(rep, model.describe(), hash_of(model, cmdline)), c.out_path);
    return rep.pass ? 0 : 1;
}

int run_dims(const CommonOpts& c, const std::string& mode, std::vector<long> schedule,
             std::int64_t n_max, double tol, const std::string& cmdline) {
    Model model = Model::from_json_file(c.model_path);
    std::uint64_t h = hash_of(model, cmdline);
    ordered_json j;
    j["version"] = kVersion;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    j["config_hash"] = hex;
    j["model"] = model.describe();
    if (mode == "theory" || mode == "both") {
        DimensionReport rep;
        switch (model.family()) {
            case Family::McMullen: rep = mcmullen_dimensions(model.mc(), tol); break;
            case Family::Star: rep = star_dimensions(model.star_model(), tol); break;
            case Family::Symmetric: rep = symmetric_dimensions(model.sym(), n_max).dims; break;
        }
        j["theory"] = dim_report_obj(rep);
    }
    if (mode == "empirical" || mode == "both") {
        if (schedule.empty()) schedule = {250, 500, 1000, 2000};
        EmpiricalBox eb = empirical_box(model, schedule);
        ordered_json e;
        e["lb_est"] = eb.lb_est;
        e["ub_est"] = eb.ub_est;
        ordered_json series = ordered_json::array();
        for (std::size_t i = 0; i < eb.ks.size(); ++i) {
            ordered_json pt;
            pt["K"] = eb.ks[i];
            pt["slope"] = eb.slopes[i];
            series.push_back(pt);
        }
        e["series"] = series;
        j["empirical"] = e;
        if (c.format == "csv") {
            std::ostringstream os;
            os << "K,slope\n";
            os.precision(12);
            for (std::size_t i = 0; i < eb.ks.size(); ++i)
                os << eb.ks[i] << "," << eb.slopes[i] << "\n";
            emit(os.str(), c.out_path);
            return 0;
        }
    }
    emit(j.dump(2), c.out_path);
    return 0;
}

int run_map_eval(const CommonOpts& c, int i, const std::string& x_s, double tol,
                 const std::string& cmdline) {
    Model model = Model::from_json_file(c.model_path);
    CantorGeometry geom(model);
    Rational x = parse_rational(x_s);
    auto res = geom.phi_eval(i, x, tol);
    ordered_json j;
    j["version"] = kVersion;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(hash_of(model, cmdline)));
    j["config_hash"] = hex;
    j["i"] = i;
    j["x"] = rational_to_string(x);
    j["phi"] = ordered_json::parse(enclosure_json(res.value));
    j["exact"] = res.exact.has_value();
    emit(j.dump(2), c.out_path);
    return 0;
}

int run_map_sample(const CommonOpts& c, long n) {
    Model model = Model::from_json_file(c.model_path);
    CantorGeometry geom(model);
    std::ostringstream os;
    os << "x,phi0,phi1\n";
    os.precision(15);
    for (long k = 0; k <= n; ++k) {
        Rational x(k, n);
        x.canonicalize();
        auto r0 = geom.phi_eval(0, x, 1e-12);
        auto r1 = geom.phi_eval(1, x, 1e-12);
        os << x.get_d() << "," << r0.value.mid_double() << "," << r1.value.mid_double() << "\n";
    }
    emit(os.str(), c.out_path);
    return 0;
}

int run_dynamics_check(const CommonOpts& c, long samples, long depth, unsigned long seed,
                       const std::string& cmdline) {
    Model model = Model::from_json_file(c.model_path);
    auto geom = std::make_shared<const CantorGeometry>(model);
    ExpandingMap f = build_dynamics(geom);
    double defect = f.continuity_defect();
    double expansion = f.expansion_constant();
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (long s = 0; s < samples; ++s) {
        Word iw;
        for (long d = 0; d < depth + 1; ++d)
            iw.push_back(static_cast<std::uint8_t>(rng() & 1));
        Word w;
        for (long d = 1; d < iw.size(); ++d) w.push_back(iw[d]);
        Enclosure x = geom->pi_point(iw, iw.size());
        Enclosure fx = f.eval(x);
        Enclosure target = geom->pi_point(w, w.size());
        Enclosure diff = fx - target;
        worst = std::max(worst, std::max(std::abs(diff.lo_double()), std::abs(diff.hi_double())));
    }
    ordered_json j;
    j["version"] = kVersion;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(hash_of(model, cmdline)));
    j["config_hash"] = hex;
    j["delta"] = rational_to_string(f.delta());
    j["continuity_defect"] = defect;
    j["expansion_constant"] = expansion;
    j["samples"] = samples;
    j["coding_depth"] = depth;
    j["max_conjugacy_error"] = worst;
    j["pass"] = defect < 1e-12 && expansion > 1.0 && worst < 1e-9;
    emit(j.dump(2), c.out_path);
    return j["pass"].get<bool>() ? 0 : 1;
}

int run_sweep(const CommonOpts& c, long from, long to, long step, const std::string&) {
    Model model = Model::from_json_file(c.model_path);
    std::vector<long> ks;
    for (long K = from; K <= to; K += step) ks.push_back(K);
    EmpiricalBox eb = empirical_box(model, ks);
    std::ostringstream os;
    os << "K,slope\n";
    os.precision(12);
    for (std::size_t i = 0; i < eb.ks.size(); ++i) os << eb.ks[i] << "," << eb.slopes[i] << "\n";
    emit(os.str(), c.out_path);
    return 0;
}

Model default_star() { return Model::star(Rational(1, 2), 128); }
Model default_mcmullen() { return Model::mcmullen(Rational(1, 2), 128); }
Model thm15_model() {
    return Model::symmetric(CSequence::half_minus_geometric(Rational(1, 2), Rational(1, 2)));
}

int run_repro(const std::string& which, const std::string& out_path) {
    ordered_json j;
    j["version"] = kVersion;
    j["recipe"] = which;
    if (which == "thm-4.2") {
        Model m = default_mcmullen();
        j["model"] = m.describe();
        DimensionReport rep = mcmullen_dimensions(m.mc(), 1e-8);
        j["dimensions"] = dim_report_obj(rep);
        j["separation"] = rep.ubdim->value - rep.hdim->value;
    } else if (which == "thm-5.1") {
        Model m = default_star();
        j["model"] = m.describe();
        DimensionReport rep = star_dimensions(m.star_model(), 1e-8);
        j["dimensions"] = dim_report_obj(rep);
        ordered_json gaps;
        gaps["hdim-ldim"] = rep.hdim->value - rep.ldim->value;
        gaps["lbdim-hdim"] = rep.lbdim->value - rep.hdim->value;
        gaps["ubdim-lbdim"] = rep.ubdim->value - rep.lbdim->value;
        gaps["adim-ubdim"] = rep.adim->value - rep.ubdim->value;
        j["gaps"] = gaps;
    } else if (which == "prop-6.3") {
        SymmetricModel m = box_nonexist_sequence();
        auto rep = symmetric_dimensions(m, 100000);
        ordered_json series = ordered_json::array();
        for (std::size_t i = 0; i < rep.series.sample_n.size(); ++i) {
            ordered_json pt;
            pt["n"] = rep.series.sample_n[i];
            pt["q"] = rep.series.sample_q[i];
            series.push_back(pt);
        }
        j["block_end_quotients"] = series;
        j["lb_est"] = rep.series.lb_est;
        j["ub_est"] = rep.series.ub_est;
        CantorGeometry geom(Model::symmetric(m.c));
        j["bilip_pass"] = geom.bilip_check(12).pass;
    } else if (which == "thm-1.4") {
        SymmetricModel m = box_nonexist_sequence();
        LocalDimSample s = local_dimension(m, Word::repeated(0, 1), 100000);
        j["coding"] = s.coding;
        j["liminf_est"] = s.liminf_est;
        j["limsup_est"] = s.limsup_est;
        j["separation"] = s.limsup_est - s.liminf_est;
        auto sd = symmetric_dimensions(m, 100000);
        j["matches_box_dims"] = (s.liminf_est == sd.series.lb_est && s.limsup_est == sd.series.ub_est);
    } else if (which == "thm-1.5") {
        Model m = thm15_model();
        auto enc = lebesgue_measure(m.sym(), 64);
        j["measure_lower"] = enc.lower.get_d();
        j["measure_upper"] = enc.upper.get_d();
        j["width"] = enc.width();
        CantorGeometry geom(m);
        j["bilip_pass"] = geom.bilip_check(12).pass;
        ordered_json gaps = ordered_json::array();
        for (long d = 0; d < 20; ++d) {
            Word w = Word::repeated(0, d);
            auto node = geom.build_interval(w);
            gaps.push_back((node.gap_right - node.gap_left).enclose(96).lo_double());
        }
        j["gap_lengths_along_0_path"] = gaps;
    } else if (which == "cor-1.7") {
        Model m = default_mcmullen();
        auto geom = std::make_shared<const CantorGeometry>(m);
        ExpandingMap f = build_dynamics(geom);
        j["model"] = m.describe();
        j["delta"] = rational_to_string(f.delta());
        j["continuity_defect"] = f.continuity_defect();
        j["expansion_constant"] = f.expansion_constant();
    } else {
        throw ConfigError("unknown recipe '" + which +
                          "' (thm-4.2, thm-5.1, prop-6.3, thm-1.4, thm-1.5, cor-1.7)");
    }
    emit(j.dump(2), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cantorlab: bi-Lipschitz IFS attractors, exact covering counts, dimensions"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    std::string cmdline;
    for (int i = 1; i < argc; ++i) {
        cmdline += argv[i];
        cmdline += ' ';
    }

    CommonOpts c;

    // count
    auto* count = app.add_subcommand("count", "exact #Lambda(rho) / #Lambda^{*,u}(rho)");
    std::string rho_s, prefix_s, method = "auto";
    bool full_classes = false, want_words = false;
    count->add_option("--model", c.model_path, "model JSON path")->required();
    count->add_option("--rho", rho_s, "scale, exact form 2^-K")->required();
    count->add_option("--prefix", prefix_s, "localized prefix: 0^k, 1^k, or a word");
    count->add_option("--method", method, "auto|oracle|classes")
        ->check(CLI::IsMember({"auto", "oracle", "classes"}));
    count->add_flag("--classes-full", full_classes, "emit the full (n,N1,N2) histogram");
    count->add_flag("--words", want_words, "collect member words (oracle only)");
    count->add_option("--out", c.out_path, "output path (stdout when absent)");

    // bilip
    auto* bilip = app.add_subcommand("bilip", "Cantor-construction bi-Lipschitz verifier");
    long depth = 12;
    bilip->add_option("--model", c.model_path)->required();
    bilip->add_option("--depth", depth, "probe depth");
    bilip->add_option("--out", c.out_path);

    // dims
    auto* dims = app.add_subcommand("dims", "theoretical and empirical dimensions");
    std::string mode = "theory";
    std::vector<long> schedule;
    std::int64_t n_max = 100000;
    double tol = 1e-8;
    dims->add_option("--model", c.model_path)->required();
    dims->add_option("--mode", mode)->check(CLI::IsMember({"theory", "empirical", "both"}));
    dims->add_option("--schedule", schedule, "K values for the empirical slopes");
    dims->add_option("--nmax", n_max, "depth horizon for symmetric models");
    dims->add_option("--tol", tol, "optimizer tolerance");
    dims->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
    dims->add_option("--out", c.out_path);

    // map
    auto* map = app.add_subcommand("map", "evaluate the IFS maps");
    auto* map_eval = map->add_subcommand("eval", "phi_i at a rational point");
    int phi_i = 0;
    std::string x_s = "0";
    double map_tol = 1e-9;
    map_eval->add_option("--model", c.model_path)->required();
    map_eval->add_option("--i", phi_i)->check(CLI::Range(0, 1));
    map_eval->add_option("--x", x_s, "rational point p/q")->required();
    map_eval->add_option("--tol", map_tol);
    map_eval->add_option("--out", c.out_path);
    auto* map_sample = map->add_subcommand("sample", "CSV of sampled (x, phi_i(x))");
    long sample_n = 256;
    map_sample->add_option("--model", c.model_path)->required();
    map_sample->add_option("--n", sample_n, "grid resolution");
    map_sample->add_option("--out", c.out_path);

    // dynamics
    auto* dyn = app.add_subcommand("dynamics", "the expanding map f");
    auto* dyn_check = dyn->add_subcommand("check", "conjugacy/continuity/expansion checks");
    long dyn_samples = 1000, dyn_depth = 20;
    unsigned long seed = 0;
    dyn_check->add_option("--model", c.model_path)->required();
    dyn_check->add_option("--samples", dyn_samples);
    dyn_check->add_option("--depth", dyn_depth);
    dyn_check->add_option("--seed", seed);
    dyn_check->add_option("--out", c.out_path);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "CSV of (K, slope) over a K range");
    long from = 100, to = 1000, step = 100;
    sweep->add_option("--model", c.model_path)->required();
    sweep->add_option("--from", from)->required();
    sweep->add_option("--to", to)->required();
    sweep->add_option("--step", step);
    sweep->add_option("--out", c.out_path);

    // repro
    auto* repro = app.add_subcommand("repro", "canned reproduction recipes");
    std::string recipe;
    repro->add_option("recipe", recipe, "thm-4.2|thm-5.1|prop-6.3|thm-1.4|thm-1.5|cor-1.7")
        ->required();
    repro->add_option("--out", c.out_path);

    try {
        app.parse(argc, argv);
        if (threads) set_covering_threads(threads);
        if (count->parsed())
            return run_count(c, rho_s, prefix_s, method, full_classes, want_words, cmdline);
        if (bilip->parsed()) return run_bilip(c, depth, cmdline);
        if (dims->parsed()) return run_dims(c, mode, schedule, n_max, tol, cmdline);
        if (map->parsed()) {
            if (map_eval->parsed()) return run_map_eval(c, phi_i, x_s, map_tol, cmdline);
            if (map_sample->parsed()) return run_map_sample(c, sample_n);
            throw ConfigError("map: expected a subcommand (eval|sample)");
        }
        if (dyn->parsed()) {
            if (dyn_check->parsed())
                return run_dynamics_check(c, dyn_samples, dyn_depth, seed, cmdline);
            throw ConfigError("dynamics: expected subcommand 'check'");
        }
        if (sweep->parsed()) return run_sweep(c, from, to, step, cmdline);
        if (repro->parsed()) return run_repro(recipe, c.out_path);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return static_cast<int>(ErrorCode::Config);
    } catch (const ModelInvalid& e) {
        std::cerr << "model invalid: " << e.what() << "\n";
        return static_cast<int>(ErrorCode::Model);
    } catch (const TooLarge& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return static_cast<int>(ErrorCode::Resource);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return static_cast<int>(ErrorCode::Internal);
    }
}
