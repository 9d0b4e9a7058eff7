// cli.hpp: command dispatch for the metricqm tool

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "metricqm/linalg.hpp"

namespace metricqm::cli {

enum ExitCode : int {
    kOk = 0,
    kFailed = 1,          // invalid metric, failed check
    kUsage = 2,           // argument or parse error
    kSignallingFound = 3  // certify found a witness
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "diag:a,b,..." or a path to a matrix JSON file. Throws ParseError.
ComplexMatrix parse_metric_source(const std::string& source);

// Comma-separated doubles. Throws ParseError.
std::vector<double> parse_double_list(const std::string& text);

}  // namespace metricqm::cli
