#pragma once

#include "arp/driver.hpp"

#include <iosfwd>
#include <string>

namespace arp {

/// Thrown when a trace file cannot be parsed.
class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON-lines trace: one header object (config, set, problem identifiers and
/// the final outcome), then one object per iteration. Reals are written with
/// 17 significant digits so a trace reloads bit-identically; non-finite reals
/// are written as null.
void write_trace(std::ostream& out, const SolveReport& report);
void write_trace_file(const std::string& path, const SolveReport& report);

SolveReport read_trace(std::istream& in);
SolveReport read_trace_file(const std::string& path);

/// Column names of the one-row solve summary, newline terminated.
std::string summary_csv_header();

/// One summary row, 6 significant digits for reals, newline terminated.
std::string summary_csv_row(const SolveReport& report);

/// Number of derivative captures of order >= 2 (one per model set-up).
std::int64_t high_order_evaluations(const SolveReport& report);

}  // namespace arp
