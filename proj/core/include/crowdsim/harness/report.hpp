#pragma once

#include "crowdsim/harness/experiment.hpp"

#include <string>
#include <vector>

namespace crowdsim::harness {

// The CSV text for a set of rows: fixed documented header per mode,
// floating-point fields at 4 decimal places, LF newlines. Identical rows
// render to identical bytes.
std::string render_report(const std::vector<RunReport>& rows);

// Writes render_report(rows) to path. Empty rows or an unwritable path
// raise an Error; no file is created for empty input.
void write_report(const std::vector<RunReport>& rows, const std::string& path);

} // namespace crowdsim::harness
