#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace tfi::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

// Shortest decimal that round-trips to the same binary64.
std::string format_double(double v);

int cmd_stft(const ConfigSource& source, std::ostream& out);
int cmd_ridges(const ConfigSource& source, std::ostream& out);
int cmd_zeros(const ConfigSource& source, std::ostream& out);
int cmd_reassign(const ConfigSource& source, std::ostream& out);
int cmd_squeeze(const ConfigSource& source, std::ostream& out);
// method is "stft" or "sst"; a and sigma override model.a and window.sigma.
int cmd_critical(const ConfigSource& source, double a, double sigma, const std::string& method, std::ostream& out);
// level is "fast" or "full".
int cmd_validate(const std::string& level, std::ostream& out);

// Runs body and maps exceptions to exit codes, reporting them on err.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace tfi::cli
