#pragma once

#include <string>

#include <json.hpp>

#include "muspec/spectrum.hpp"
#include "muspec/verifier.hpp"

namespace muspec {

// ordered_json keeps key order stable, so serialized artifacts are
// byte-reproducible for identical inputs.
using Json = nlohmann::ordered_json;

/// Parse {"dim":d, "R":[[..]], "B":[[..]], "p":[..]} (p optional -> uniform;
/// for d=1, B entries may be plain numbers). Returns the validated spec.
IfsSpec ifs_from_json(const Json& j);
IfsSpec load_ifs(const std::string& path);
Json ifs_to_json(const IfsSpec& spec);

Json digit_system_to_json(const DigitSystem& ds);
DigitSystem digit_system_from_json(const Json& j);

Json spectrum_to_json(const Spectrum& sp);
Spectrum spectrum_from_json(const Json& j);

Json gram_report_to_json(const GramReport& rep, bool include_matrix = false);
Json beurling_to_json(const BeurlingEstimate& est);
Json dim_report_to_json(const DimLowerReport& rep);

Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

}  // namespace muspec
