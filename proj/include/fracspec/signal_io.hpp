#pragma once

#include <iosfwd>
#include <string>

#include "fracspec/signal.hpp"

namespace fracspec {

/// CSV with header `t,re_0,im_0,...` and 17 significant digits.
void write_signal_csv(std::ostream& out, const SampledSignal& f);
void write_signal_csv(const std::string& path, const SampledSignal& f);

/// Reads the format written above. The time column must be uniform (GridError
/// otherwise); `degree` is attached to the result.
SampledSignal read_signal_csv(std::istream& in, int degree = 0);
SampledSignal read_signal_csv(const std::string& path, int degree = 0);

}  // namespace fracspec
