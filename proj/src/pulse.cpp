#include "dfsphoton/pulse.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dfsphoton {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void PulseSegment::validate() const {
  if (!finite(omega_r) || !finite(omega_anc) || !finite(omega_c) || !std::isfinite(delta_e)) {
    throw std::invalid_argument("pulse segment has non-finite drive parameters");
  }
  if (!std::isfinite(duration) || duration < 0.0) {
    throw std::invalid_argument("pulse segment duration must be finite and >= 0");
  }
}

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::kAncillaFlip: return "ancilla-flip";
    case SegmentKind::kRaman: return "raman";
    case SegmentKind::kMapping: return "mapping";
  }
  return "unknown";
}

SegmentKind segment_kind_from_string(std::string_view name) {
  if (name == "ancilla-flip") return SegmentKind::kAncillaFlip;
  if (name == "raman") return SegmentKind::kRaman;
  if (name == "mapping") return SegmentKind::kMapping;
  throw std::invalid_argument("unknown segment kind '" + std::string(name) + "'");
}

void PulseSequence::append(SegmentKind kind, int rung, const PulseSegment& segment) {
  segment.validate();
  if (rung < 0) throw std::invalid_argument("segment rung must be >= 0");
  if (!steps_.empty() && steps_.back().kind == SegmentKind::kMapping) {
    throw std::invalid_argument("nothing may follow the mapping segment");
  }
  if (kind == SegmentKind::kRaman) {
    if (steps_.empty() || steps_.back().kind != SegmentKind::kAncillaFlip) {
      throw std::invalid_argument("a raman segment must follow an ancilla flip");
    }
  } else if (kind == SegmentKind::kAncillaFlip) {
    // Two flips in a row are only allowed as the final parking flip, which
    // must then be followed by nothing but a mapping pulse.
    if (!steps_.empty() && steps_.back().kind == SegmentKind::kAncillaFlip) {
      throw std::invalid_argument("ancilla flips and raman segments must alternate");
    }
  }
  steps_.push_back({kind, rung, segment});
}

double PulseSequence::total_duration() const {
  double total = 0.0;
  for (const auto& step : steps_) total += step.segment.duration;
  return total;
}

std::size_t PulseSequence::count(SegmentKind kind) const {
  std::size_t n = 0;
  for (const auto& step : steps_) n += step.kind == kind ? 1 : 0;
  return n;
}

}  // namespace dfsphoton
