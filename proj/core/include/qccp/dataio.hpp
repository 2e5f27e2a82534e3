#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qccp/optimize.hpp"
#include "qccp/strategies.hpp"

namespace qccp {

// What canonicalization did to a parsed strategy: kets normalized, ket pairs
// orthonormalized, density matrices symmetrized, and (only when requested)
// POVMs repaired by the symmetric normalization M_g <- T^{-1/2} M_g T^{-1/2}
// with T = sum_g M_g. Repair perturbs the input, so it is opt-in and logged.
struct CanonicalizationReport {
    std::array<double, 2> completeness_defect_before{0.0, 0.0};  // per y
    bool repaired = false;
    std::vector<std::string> notes;
};

struct ParsedStrategy {
    std::variant<PmStrategy, BellStrategy> strategy;
    CanonicalizationReport canon;
};

// Strategy document format (JSON): top-level keys dimension, model
// ("prepare-measure" | "bell"), states, measurements. Each state entry is
// {"x0": int, "x": int, "ket": [[re, im], ...]} or {..., "density": [[[re,
// im], ...] row, ...]}. Each measurement entry is {"y": int, "operators":
// [...]} with operators tagged {"kind": "zero"} | {"kind": "kets", "kets":
// [vector, ...]} | {"kind": "matrix", "matrix": dense rows}. For the "bell"
// model, states holds exactly one ket of d^2 amplitudes and measurements
// holds four entries ordered Alice y=0, Alice y=1, Bob y=0, Bob y=1.
//
// Parsing validates under the lenient profile, then canonicalizes.
// ParseError (with location) for schema violations; ValidationError when
// even the lenient profile fails.
ParsedStrategy parse_strategy(std::string_view text, bool repair = false);

std::string serialize_strategy(const PmStrategy& s);
std::string serialize_strategy(const BellStrategy& s);

// Bundled reference strategies for d in 6..10 (2-decimal data shipped with
// the library), canonicalized with repair. DomainError for other d.
PmStrategy load_appendix(int d);
ParsedStrategy load_appendix_verbose(int d);

// Reference constants for d = 2..10; absent entries are disengaged optionals.
struct ReferenceRow {
    int d = 0;
    std::optional<double> qs_lower;        // best prepare-and-measure value
    std::optional<double> qs_lower_prior;  // previously published value
    std::optional<double> bell_max;        // entanglement-assisted value
    std::optional<double> ml_max;          // macroscopic-locality baseline
    std::optional<double> qs_trace_one;    // unit-trace-measurement value
};
struct ReferenceTable {
    std::vector<ReferenceRow> rows;
    const ReferenceRow& row(int d) const;  // DomainError when absent
};
const ReferenceTable& reference_table();

// Flat result rows shared by the JSON and CSV report writers.
struct ReportRow {
    int d = 0;
    std::string method;
    double value = 0.0;
    std::optional<double> reference;
    std::optional<double> delta;
    int restarts = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};
std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string rows_to_json(const std::vector<ReportRow>& rows);

// Full optimization report (traces included) as a JSON document. All fields
// are deterministic for a fixed config except wall_ms.
std::string report_to_json(const OptimizationReport& report, bool include_traces);

}  // namespace qccp
