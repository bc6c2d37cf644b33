#pragma once

#include <cstdint>
#include <string>

#include "cantorlab/covering.hpp"
#include "cantorlab/dimensions.hpp"
#include "cantorlab/geometry.hpp"

namespace cantorlab {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a of the canonical config text; embedded in every report so identical
// configs produce byte-identical output.
std::uint64_t config_hash(const std::string& canonical_text);

// JSON texts (ordered keys, exact integers as decimal strings)
std::string cover_report_json(const CoverReport& rep, const LambdaSpec& spec,
                              std::uint64_t cfg_hash, bool include_classes);
std::string dimension_report_json(const DimensionReport& rep, const std::string& model_desc,
                                  std::uint64_t cfg_hash);
std::string bilip_report_json(const CantorGeometry::BiLipReport& rep,
                              const std::string& model_desc, std::uint64_t cfg_hash);
std::string enclosure_json(const Enclosure& e);

}  // namespace cantorlab
