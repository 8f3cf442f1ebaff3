#include "ttvseg/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace ttvseg {

namespace {

struct Overlap {
  std::size_t pred = 0;
  std::size_t truth = 0;
  std::size_t both = 0;
};

Overlap count(const LabelMask& pred, const LabelMask& truth, std::size_t phase) {
  if (!pred.same_shape(truth)) throw std::invalid_argument("metrics: mask shapes differ");
  Overlap o;
  for (std::size_t x = 0; x < pred.size(); ++x) {
    const bool a = pred[x] == phase;
    const bool b = truth[x] == phase;
    o.pred += a;
    o.truth += b;
    o.both += a && b;
  }
  return o;
}

}  // namespace

double dice(const LabelMask& pred, const LabelMask& truth, std::size_t phase) {
  const Overlap o = count(pred, truth, phase);
  if (o.pred + o.truth == 0) return 1.0;
  return 2.0 * static_cast<double>(o.both) / static_cast<double>(o.pred + o.truth);
}

double jaccard(const LabelMask& pred, const LabelMask& truth, std::size_t phase) {
  const Overlap o = count(pred, truth, phase);
  const std::size_t uni = o.pred + o.truth - o.both;
  if (uni == 0) return 1.0;
  return static_cast<double>(o.both) / static_cast<double>(uni);
}

ScoreSummary score_all(const LabelMask& pred, const LabelMask& truth, std::size_t phases,
                       bool include_background) {
  if (pred.label_bound() > phases || truth.label_bound() > phases) {
    throw std::invalid_argument("score_all: label out of range");
  }
  ScoreSummary s;
  s.includes_background = include_background;
  std::vector<double> d, j;
  for (std::size_t ph = 0; ph < phases; ++ph) {
    RegionScore r{ph, dice(pred, truth, ph), jaccard(pred, truth, ph)};
    s.regions.push_back(r);
    if (ph > 0 || include_background) {
      d.push_back(r.dice);
      j.push_back(r.jaccard);
    }
  }
  s.mean_dice = average(d);
  s.mean_jaccard = average(j);
  return s;
}

double average(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace ttvseg
