#pragma once

// Piecewise-constant drive history. Rates and Rabi amplitudes are in units of
// Gamma_1D, durations in units of 1/Gamma_1D.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dfsphoton/state_space.hpp"

namespace dfsphoton {

struct PulseSegment {
  Complex omega_r{};    ///< Rabi amplitude on every register atom, s <-> e
  Complex omega_anc{};  ///< ancilla s <-> e
  Complex omega_c{};    ///< ancilla g <-> s (microwave)
  double delta_e = 0.0;
  double duration = 0.0;

  /// Throws std::invalid_argument on negative duration or non-finite values.
  void validate() const;
};

enum class SegmentKind { kAncillaFlip, kRaman, kMapping };

std::string_view to_string(SegmentKind kind);
SegmentKind segment_kind_from_string(std::string_view name);

struct AnnotatedSegment {
  SegmentKind kind = SegmentKind::kAncillaFlip;
  int rung = 0;  ///< excitation number m the segment works on (0 for mapping/parking)
  PulseSegment segment;
};

/// Ordered drive segments. Preparation segments alternate flip, raman, flip,
/// ... starting with a flip; an extra parking flip may follow the last Raman
/// segment and a mapping segment may only come last.
class PulseSequence {
 public:
  PulseSequence() = default;

  /// Appends after checking the segment and the ordering rules.
  void append(SegmentKind kind, int rung, const PulseSegment& segment);

  const std::vector<AnnotatedSegment>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  const AnnotatedSegment& operator[](std::size_t i) const { return steps_.at(i); }

  double total_duration() const;
  std::size_t count(SegmentKind kind) const;

 private:
  std::vector<AnnotatedSegment> steps_;
};

}  // namespace dfsphoton
