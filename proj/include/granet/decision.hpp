#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "granet/interval.hpp"

namespace granet {

/// Index into an ordered action set.
using ActionId = std::size_t;

/// Objective-value granule per action; position = ActionId.
using Forecast = std::vector<Interval>;

struct Decision {
  ActionId action = 0;
  Uncertainty uncertainty{0.0};
};

/// Sparse reading tuple over a sensor domain shared by a whole hypothesis
/// family. Sensors absent from `nonzero` read the default value 0.
template <typename SensorId>
struct Signature {
  std::shared_ptr<const std::vector<SensorId>> domain;
  std::vector<std::pair<SensorId, int>> nonzero;  // sorted by sensor id

  int reading(const SensorId& id) const {
    auto it = std::lower_bound(
        nonzero.begin(), nonzero.end(), id,
        [](const auto& e, const SensorId& k) { return e.first < k; });
    return (it != nonzero.end() && it->first == id) ? it->second : 0;
  }
};

template <typename SensorId>
std::shared_ptr<const std::vector<SensorId>> make_domain(std::vector<SensorId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return std::make_shared<const std::vector<SensorId>>(std::move(ids));
}

/// Builds a signature from dense readings aligned with the domain order.
template <typename SensorId>
Signature<SensorId> make_signature(std::shared_ptr<const std::vector<SensorId>> domain,
                                   const std::vector<int>& readings) {
  if (!domain || domain->size() != readings.size())
    throw std::invalid_argument("make_signature: readings must align with the domain");
  Signature<SensorId> s;
  s.domain = std::move(domain);
  for (std::size_t i = 0; i < readings.size(); ++i)
    if (readings[i] != 0) s.nonzero.emplace_back((*s.domain)[i], readings[i]);
  return s;
}

/// One candidate full-data outcome: its reading signature, the forecast it
/// induces and the decision made on that forecast.
template <typename SensorId>
struct Hypothesis {
  Signature<SensorId> signature;
  Forecast forecast;
  Decision decision;
  double weight = 1.0;
};

/// Picks the action whose worst pairwise P(F(a) <= F(b)) is largest; any
/// action that beats every rival with probability >= 0.5 wins. Ties go to
/// the smallest action index. Decision uncertainty is the worst pairwise UNC
/// of the winner (0 for a singleton action set).
inline Decision select_action(const Forecast& forecast) {
  if (forecast.empty())
    throw std::invalid_argument("select_action: empty action set");
  for (const Interval& iv : forecast) Interval::check(iv);

  const std::size_t n = forecast.size();
  if (n == 1) return {0, {0.0}};

  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t a = 0; a < n; ++a) {
    double score = 1.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      score = std::min(score, prob_leq(forecast[a], forecast[b]).value);
    }
    if (score > best_score) {
      best_score = score;
      best = a;
    }
  }

  double unc = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    if (b == best) continue;
    unc = std::max(unc, unc_leq(forecast[best], forecast[b]).value);
  }
  return {best, {unc}};
}

namespace detail {

template <typename SensorId>
void check_family(const std::vector<Hypothesis<SensorId>>& hyps) {
  if (hyps.empty())
    throw std::invalid_argument("hypothesis family must be non-empty");
  const auto& d0 = hyps.front().signature.domain;
  if (!d0) throw std::logic_error("hypothesis signature lacks a sensor domain");
  for (const auto& h : hyps) {
    const auto& d = h.signature.domain;
    if (d == d0) continue;
    if (!d || *d != *d0)
      throw std::logic_error("inconsistent signature domains in hypothesis family");
  }
}

// Visits every sensor id whose readings differ between a and b (shared
// domain; sensors outside both nonzero lists read 0 on both sides).
template <typename SensorId, typename Fn>
void for_each_differing(const Signature<SensorId>& a, const Signature<SensorId>& b, Fn&& fn) {
  auto ia = a.nonzero.begin();
  auto ib = b.nonzero.begin();
  while (ia != a.nonzero.end() || ib != b.nonzero.end()) {
    if (ib == b.nonzero.end() || (ia != a.nonzero.end() && ia->first < ib->first)) {
      fn(ia->first);
      ++ia;
    } else if (ia == a.nonzero.end() || ib->first < ia->first) {
      fn(ib->first);
      ++ib;
    } else {
      if (ia->second != ib->second) fn(ia->first);
      ++ia;
      ++ib;
    }
  }
}

}  // namespace detail

/// Weight-normalized mean of the hypotheses' decision uncertainties.
template <typename SensorId>
Uncertainty mean_hypothesis_uncertainty(const std::vector<Hypothesis<SensorId>>& hyps) {
  if (hyps.empty())
    throw std::invalid_argument("mean_hypothesis_uncertainty: empty family");
  double wsum = 0.0;
  double acc = 0.0;
  for (const auto& h : hyps) {
    if (!(h.weight > 0.0))
      throw std::invalid_argument("hypothesis weights must be positive");
    wsum += h.weight;
    acc += h.weight * h.decision.uncertainty.value;
  }
  return {acc / wsum};
}

/// Expected drop in decision uncertainty if full data were collected. May
/// be negative.
template <typename SensorId>
double expected_unc_decrease(const Decision& baseline,
                             const std::vector<Hypothesis<SensorId>>& hyps) {
  return baseline.uncertainty.value - mean_hypothesis_uncertainty(hyps).value;
}

/// Exhaustive strategy: every sensor with a non-default reading in at least
/// one hypothesis. Distinct hypotheses always differ in some support sensor,
/// so this set distinguishes all of them.
template <typename SensorId>
std::set<SensorId> select_sensors_exhaustive(const std::vector<Hypothesis<SensorId>>& hyps) {
  detail::check_family(hyps);
  std::set<SensorId> out;
  for (const auto& h : hyps)
    for (const auto& [id, v] : h.signature.nonzero) out.insert(id);
  return out;
}

/// Minimum strategy: greedy set cover over the pairs of hypotheses whose
/// decisions differ; each chosen sensor must split at least one remaining
/// pair. Ties break toward the smallest sensor id, so runs are reproducible.
template <typename SensorId>
std::set<SensorId> select_sensors_minimum(const std::vector<Hypothesis<SensorId>>& hyps) {
  detail::check_family(hyps);

  std::vector<std::vector<SensorId>> pair_diffs;
  for (std::size_t j = 0; j < hyps.size(); ++j) {
    for (std::size_t k = j + 1; k < hyps.size(); ++k) {
      if (hyps[j].decision.action == hyps[k].decision.action) continue;
      std::vector<SensorId> diff;
      detail::for_each_differing(hyps[j].signature, hyps[k].signature,
                                 [&](const SensorId& id) { diff.push_back(id); });
      if (diff.empty())
        throw std::logic_error(
            "select_sensors_minimum: hypotheses with different decisions share a signature");
      pair_diffs.push_back(std::move(diff));
    }
  }

  std::set<SensorId> chosen;
  std::vector<bool> covered(pair_diffs.size(), false);
  std::size_t remaining = pair_diffs.size();
  while (remaining > 0) {
    std::map<SensorId, std::size_t> gain;
    for (std::size_t p = 0; p < pair_diffs.size(); ++p) {
      if (covered[p]) continue;
      for (const SensorId& id : pair_diffs[p]) ++gain[id];
    }
    // map iteration is id-ordered, so strict > keeps the smallest id on ties
    SensorId best = gain.begin()->first;
    std::size_t best_gain = 0;
    for (const auto& [id, g] : gain) {
      if (g > best_gain) {
        best_gain = g;
        best = id;
      }
    }
    chosen.insert(best);
    for (std::size_t p = 0; p < pair_diffs.size(); ++p) {
      if (covered[p]) continue;
      if (std::binary_search(pair_diffs[p].begin(), pair_diffs[p].end(), best)) {
        covered[p] = true;
        --remaining;
      }
    }
  }
  return chosen;
}

}  // namespace granet
