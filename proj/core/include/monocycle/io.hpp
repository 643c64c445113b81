#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "monocycle/signal.hpp"

namespace monocycle {

/// 12 significant digits, '.' decimal separator, locale independent.
std::string format_number(double v);

/// Header `t,value`, one row per sample, LF line endings.
void write_signal_csv(std::ostream& os, const PeriodicSignal& x);
void write_signal_csv(const std::filesystem::path& path, const PeriodicSignal& x);

/// Reads a `t,value` table. The period is N times the spacing of the first two rows.
/// Throws ConfigError on malformed input.
PeriodicSignal read_signal_csv(std::istream& is);
PeriodicSignal read_signal_csv(const std::filesystem::path& path);

}  // namespace monocycle
