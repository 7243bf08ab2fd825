#include "cgraph/segmenter.hpp"

#include <cmath>
#include <cstdlib>

#include "cgraph/error.hpp"

namespace cgraph {

RawStream RawStream::scalar(std::vector<std::int64_t> levels) {
  return RawStream{StreamKind::Scalar, std::move(levels)};
}

RawStream RawStream::tokens(const TokenSeq& tokens) {
  return RawStream{StreamKind::Token, std::vector<std::int64_t>(tokens.begin(), tokens.end())};
}

namespace {

template <class Boundary>
std::vector<Segment> cut(const std::vector<std::int64_t>& xs, Boundary boundary_after) {
  std::vector<Segment> out;
  if (xs.empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (boundary_after(i)) {
      out.push_back({start, i + 1, std::span(xs).subspan(start, i + 1 - start)});
      start = i + 1;
    }
  }
  out.push_back({start, xs.size(), std::span(xs).subspan(start)});
  return out;
}

}  // namespace

std::vector<Segment> segment_scalar(const RawStream& stream, double threshold) {
  if (stream.kind != StreamKind::Scalar) {
    throw Error(ErrorCode::WrongKind, "segment_scalar needs a scalar stream");
  }
  const auto& xs = stream.samples;
  return cut(xs, [&](std::size_t i) {
    return std::fabs(static_cast<double>(xs[i + 1] - xs[i])) > threshold;
  });
}

std::vector<Segment> segment_tokens(const RawStream& stream, const TokenClass& class_of) {
  if (stream.kind != StreamKind::Token) {
    throw Error(ErrorCode::WrongKind, "segment_tokens needs a token stream");
  }
  const auto& xs = stream.samples;
  return cut(xs, [&](std::size_t i) {
    return class_of(static_cast<Token>(xs[i])) != class_of(static_cast<Token>(xs[i + 1]));
  });
}

Smoothness smoothness(const RawStream& stream, double threshold) {
  if (stream.kind != StreamKind::Scalar) {
    throw Error(ErrorCode::WrongKind, "smoothness needs a scalar stream");
  }
  const auto& xs = stream.samples;
  for (std::size_t i = 0; i + 2 < xs.size(); ++i) {
    auto d2 = std::llabs(xs[i + 2] - 2 * xs[i + 1] + xs[i]);
    if (static_cast<double>(d2) > threshold) return Smoothness::Rough;
  }
  return Smoothness::Smooth;
}

}  // namespace cgraph
