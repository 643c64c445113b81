#pragma once

#include <filesystem>
#include <iosfwd>

#include "monocycle/systems.hpp"

namespace monocycle {

/// Parses a system definition:
///
///   label = my oscillator
///   [lti]
///   numerator = [1, 0, 1]      # b(s), ascending powers, H^{-1} = b/a
///   denominator = [0, 1]       # a(s)
///   [e1]
///   coeffs = [0, 0, 0, 0.5]    # ascending powers
///   domain = [-inf, inf]       # optional
///   [e2]
///   gain = 1.5                 # or: coeffs = [...]
///   [input]                    # optional section
///   kind = zero                # zero | sine | file
///   amplitude = 1.0            # sine
///   frequency = 1.0            # sine, rad/s
///   path = u.csv               # file, relative to the definition file
///   [operating]                # optional
///   interval = [-5, 5]
///
/// Errors are ConfigError carrying the line number and key. The result is validated
/// with validate_system.
MixedFeedbackSystem parse_system_definition(std::istream& is,
                                            const std::filesystem::path& base_dir = {});
MixedFeedbackSystem load_system_definition(const std::filesystem::path& path);

}  // namespace monocycle
