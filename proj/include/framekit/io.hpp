#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "framekit/frames.hpp"

namespace framekit::io {

// Frame files: {"dim": d, "vectors": [[[re, im], ...], ...]}, one inner list of
// d [re, im] pairs per frame element.

/// Throws Error(ParseError) on malformed input.
Frame frame_from_json(std::string_view text);
std::string frame_to_json(const Frame& frame);

Frame read_frame(const std::string& path);
void write_frame(const std::string& path, const Frame& frame);

/// {"method": name, "weights": [[re, im], ...]}
std::string weights_to_json(const WeightSeq& weights, std::string_view method);
WeightSeq weights_from_json(std::string_view text);

/// 15 significant digits, the precision every CSV cell is printed with.
std::string format_number(double value);

}  // namespace framekit::io
