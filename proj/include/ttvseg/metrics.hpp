#pragma once

#include <cstddef>
#include <vector>

#include "ttvseg/image.hpp"

namespace ttvseg {

struct RegionScore {
  std::size_t phase = 0;
  double dice = 0.0;
  double jaccard = 0.0;
};

struct ScoreSummary {
  std::vector<RegionScore> regions;  // one per phase, background included
  double mean_dice = 0.0;            // over the phases selected for averaging
  double mean_jaccard = 0.0;
  bool includes_background = false;
};

/// 2|A n B| / (|A| + |B|) for A = {pred == phase}, B = {truth == phase};
/// 1 when both sets are empty.
double dice(const LabelMask& pred, const LabelMask& truth, std::size_t phase);

/// |A n B| / |A u B|; 1 when both sets are empty.
double jaccard(const LabelMask& pred, const LabelMask& truth, std::size_t phase);

/// Per-phase scores. Averages run over phases 1..N-1 unless
/// `include_background`, in which case phase 0 is included too.
ScoreSummary score_all(const LabelMask& pred, const LabelMask& truth, std::size_t phases,
                       bool include_background);

/// Plain mean of a list of DICE (or Jaccard) values.
double average(const std::vector<double>& values);

}  // namespace ttvseg
