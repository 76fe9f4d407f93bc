#pragma once

#include <string>

#include <json.hpp>

#include "gapcert/cert_core.hpp"
#include "gapcert/geometry.hpp"
#include "gapcert/pde.hpp"
#include "gapcert/validate.hpp"

namespace gapcert {

using Json = nlohmann::ordered_json;

/// "%.17g"; non-finite values become strings so the output stays valid JSON.
Json number(double x);

Json to_json(const CertificateInputs& in);
/// Flat list of {name, sign, log10, rendered} records.
Json to_json(const ConstantChain& c);
Json to_json(const Section5Constants& s);
Json to_json(const AssumptionReport& a);
Json to_json(const Measurements& m);
Json to_json(const ValidationRecord& r);

/// Human table of log10 values, one constant per line.
std::string chain_table(const ConstantChain& c);

/// Deterministic text: two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace gapcert
