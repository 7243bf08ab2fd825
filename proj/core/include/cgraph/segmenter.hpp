#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cgraph/types.hpp"

namespace cgraph {

enum class StreamKind { Scalar, Token };

// A raw experience. Scalar streams carry quantized intensity levels, token
// streams carry alphabet indices.
struct RawStream {
  StreamKind kind = StreamKind::Token;
  std::vector<std::int64_t> samples;

  static RawStream scalar(std::vector<std::int64_t> levels);
  static RawStream tokens(const TokenSeq& tokens);
};

// Half-open [begin, end) slice of the stream it was cut from.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::span<const std::int64_t> payload;

  bool operator==(const Segment& o) const { return begin == o.begin && end == o.end; }
};

// Boundary between i and i+1 iff |x[i+1] - x[i]| > threshold. Throws
// WrongKind for token streams.
std::vector<Segment> segment_scalar(const RawStream& stream, double threshold);

// Boundary wherever the class label changes. Throws WrongKind for scalar
// streams.
using TokenClass = std::function<int(Token)>;
std::vector<Segment> segment_tokens(const RawStream& stream, const TokenClass& class_of);

enum class Smoothness { Smooth, Rough };

// Smooth iff every second difference |x[i+2] - 2x[i+1] + x[i]| <= threshold.
// Streams shorter than 3 are smooth.
Smoothness smoothness(const RawStream& stream, double threshold);

}  // namespace cgraph
