#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vweb/complexify.hpp"
#include "vweb/web.hpp"

namespace vweb {

// Order-preserving JSON document; every serializer below emits keys in a
// fixed order so identical inputs dump to identical bytes.
using Json = nlohmann::ordered_json;

// A polynomial is an array of terms {"num", "den", "exps"} with decimal
// string coefficients and one exponent per chart variable, emitted in
// the canonical graded-lex term order.
Json poly_to_json(const Poly& p);
Poly poly_from_json(const Json& j, const ChartPtr& chart);

// {"degree": p, "terms": [{"covectors": [...], "poly": [...]}]} with
// strictly increasing covector indices.
Json form_to_json(const DForm& f);
DForm form_from_json(const Json& j, const ChartPtr& chart);

Json manifest_to_json(const GroundTruth& g);
GroundTruth manifest_from_json(const Json& j, const ChartPtr& chart);

// {"k", "n", "variables", "pencils", "basepoint", "manifest"}.  Reading
// rebuilds the chart from "variables" under the fixed name "curve" and
// runs full curve validation.
Json curve_to_json(const VeroneseCurve& c);
VeroneseCurve curve_from_json(const Json& j);

// Timing lives in a separate "volatile" object appended only on request,
// keeping the canonical part byte-stable for a given run configuration.
Json report_to_json(const IntegrabilityReport& r, bool with_volatile = false);
Json complexify_report_to_json(const ComplexifyReport& r);

// 64-bit FNV-1a over the compact serialization, as 16 hex digits.
std::string json_hash(const Json& j);

// Both wrap stream and syntax failures in ParseError; writes end with a
// trailing newline.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

} // namespace vweb
