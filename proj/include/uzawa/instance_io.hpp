#pragma once

// File formats.
//
// Instance JSON:
//   { "d": int, "m": int,
//     "K": [d*d reals, row-major], "p": [d reals],
//     "N": [m*d reals, row-major], "h": [m reals],
//     "meta": { ... optional ... } }
//
// History CSV:
//   k,dual_obj,primal_obj,residual_total,step_norm,restarted
// one row per iteration, reals in shortest round-trip decimal form,
// restarted in {0, 1}.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "uzawa/contact_qp.hpp"
#include "uzawa/diagnostics.hpp"
#include "uzawa/fem_bench.hpp"

namespace uzawa::io {

nlohmann::json instance_to_json(const ContactQP& qp, const nlohmann::json& meta = nlohmann::json::object());

/// Throws ParseError naming the offending field.
ContactQP instance_from_json(const nlohmann::json& doc);

void write_instance(const std::filesystem::path& path, const ContactQP& qp,
                    const nlohmann::json& meta = nlohmann::json::object());

/// Throws IoError when the file cannot be opened and ParseError (with line
/// and column for syntax errors) when it cannot be decoded.
ContactQP read_instance(const std::filesystem::path& path);

nlohmann::json spec_to_json(const BenchmarkSpec& spec);

/// Shortest decimal representation that parses back to the same double.
std::string format_real(double value);

inline constexpr const char* kHistoryHeader =
    "k,dual_obj,primal_obj,residual_total,step_norm,restarted";

void write_history_csv(std::ostream& out, std::span<const IterationRecord> history);
void write_history_csv(const std::filesystem::path& path,
                       std::span<const IterationRecord> history);

/// Parses a CSV produced by write_history_csv; throws ParseError on any
/// deviation from the schema.
std::vector<IterationRecord> read_history_csv(std::istream& in);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace uzawa::io
