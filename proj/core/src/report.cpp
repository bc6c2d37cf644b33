#include "cantorlab/report.hpp"

#include <json.hpp>

namespace cantorlab {

using nlohmann::ordered_json;

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {
std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ordered_json loglength_json(const LogLength& v) {
    ordered_json j = ordered_json::object();
    for (const auto& [p, e] : v.serialized_exponents()) j[p] = e;
    return j;
}
}  // namespace

std::string enclosure_json(const Enclosure& e) {
    auto [lo, hi] = e.to_decimal_strings();
    ordered_json j;
    j["lo"] = lo;
    j["hi"] = hi;
    j["precision_bits"] = static_cast<long>(e.precision());
    return j.dump();
}

std::string cover_report_json(const CoverReport& rep, const LambdaSpec& spec,
                              std::uint64_t cfg_hash, bool include_classes) {
    ordered_json j;
    j["version"] = kVersion;
    j["config_hash"] = hash_hex(cfg_hash);
    j["rho"] = loglength_json(spec.rho);
    {
        // log2(rho) when rho is a plain power of two
        Rational e2 = spec.rho.exponent_of(2);
        bool pure = spec.rho.exponents().size() == 1 && is_integer(e2);
        if (pure) j["rho_log2"] = static_cast<long>(e2.get_num().get_si());
    }
    if (spec.prefix) j["prefix"] = spec.prefix->to_string();
    j["method"] = rep.method == CoverReport::Method::Oracle ? "oracle" : "classes";
    j["count_decimal"] = rep.count.get_str();
    j["count_bits"] = static_cast<long>(mpz_sizeinbase(rep.count.get_mpz_t(), 2));
    j["n_min"] = rep.n_min;
    j["n_max"] = rep.n_max;
    {
        Rational e2 = spec.rho.exponent_of(2);
        if (spec.rho.exponents().size() == 1 && is_integer(e2) && e2 < 0) {
            double K = -e2.get_d();
            Real t(96);
            mpfr_set_z(t.get(), rep.count.get_mpz_t(), MPFR_RNDN);
            mpfr_log2(t.get(), t.get(), MPFR_RNDN);
            j["slope"] = t.to_double() / K;
        }
    }
    if (include_classes) {
        ordered_json arr = ordered_json::array();
        for (const auto& e : rep.classes) {
            ordered_json c;
            c["n"] = e.n;
            if (e.n1 >= 0) c["N1"] = e.n1;
            if (e.n2 >= 0) c["N2"] = e.n2;
            c["count"] = e.count.get_str();
            arr.push_back(c);
        }
        j["classes"] = arr;
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& [n, cnt] : rep.per_n()) {
            ordered_json c;
            c["n"] = n;
            c["count"] = cnt.get_str();
            arr.push_back(c);
        }
        j["classes"] = arr;
    }
    if (!rep.words.empty()) j["words"] = rep.words;
    return j.dump(2);
}

namespace {
ordered_json dim_value_json(const DimValue& d) {
    ordered_json j;
    j["value"] = d.value;
    j["method"] = d.method == DimValue::Method::Formula
                      ? "formula"
                      : d.method == DimValue::Method::Optimizer ? "optimizer" : "empirical";
    j["error"] = d.error;
    return j;
}
}  // namespace

std::string dimension_report_json(const DimensionReport& rep, const std::string& model_desc,
                                  std::uint64_t cfg_hash) {
    ordered_json j;
    j["version"] = kVersion;
    j["config_hash"] = hash_hex(cfg_hash);
    j["model"] = model_desc;
    if (rep.ldim) j["ldim"] = dim_value_json(*rep.ldim);
    if (rep.hdim) j["hdim"] = dim_value_json(*rep.hdim);
    if (rep.lbdim) j["lbdim"] = dim_value_json(*rep.lbdim);
    if (rep.ubdim) j["ubdim"] = dim_value_json(*rep.ubdim);
    if (rep.adim) j["adim"] = dim_value_json(*rep.adim);
    j["chain_ok"] = rep.chain_ok();
    return j.dump(2);
}

std::string bilip_report_json(const CantorGeometry::BiLipReport& rep,
                              const std::string& model_desc, std::uint64_t cfg_hash) {
    using Rep = CantorGeometry::BiLipReport;
    ordered_json j;
    j["version"] = kVersion;
    j["config_hash"] = hash_hex(cfg_hash);
    j["model"] = model_desc;
    j["pass"] = rep.pass;
    j["finite_ok"] = rep.finite_ok;
    j["depth"] = rep.depth;
    j["pairs_checked"] = rep.pairs_checked;
    j["bound_violations"] = rep.bound_violations;
    j["theta_star"] = rep.theta_star;
    j["theta_upper"] = rep.theta_upper;
    auto wit = [](const CantorGeometry::RatioWitness& w) {
        ordered_json o;
        o["word"] = w.word;
        o["symbol"] = w.symbol;
        o["family"] = w.gap_type ? "gap" : "interval";
        o["value"] = w.value;
        return o;
    };
    j["min_witness"] = wit(rep.min_witness);
    j["max_witness"] = wit(rep.max_witness);
    switch (rep.certificate) {
        case Rep::Certificate::ClosedForm: j["certificate"] = "closed-form"; break;
        case Rep::Certificate::SequenceCertified: j["certificate"] = "sequence-certified"; break;
        case Rep::Certificate::SequenceFails: j["certificate"] = "sequence-fails"; break;
        case Rep::Certificate::DepthBounded: j["certificate"] = "depth-bounded"; break;
    }
    j["certificate_note"] = rep.certificate_note;
    return j.dump(2);
}

}  // namespace cantorlab
