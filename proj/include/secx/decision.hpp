#pragma once

#include <cstdint>
#include <deque>
#include <initializer_list>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "secx/errors.hpp"

namespace secx {

/// 64-bit Mersenne Twister with hand-rolled, platform-independent
/// distributions so that a seed reproduces the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with stream coordinates (splitmix64 finalizer), giving
/// independent, order-free seeds for e.g. (generation, pair index).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

struct Decision {
  std::string site;
  std::int64_t value = 0;

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Ordered record of random decisions. Text form: one `decision <site> <value>`
/// per line; blank lines and '#' comments are ignored when parsing.
struct DecisionTrace {
  std::vector<Decision> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  void add(std::string site, std::int64_t value) { entries.push_back({std::move(site), value}); }

  friend bool operator==(const DecisionTrace&, const DecisionTrace&) = default;
};

DecisionTrace parse_trace(std::istream& in);
void write_trace(std::ostream& out, const DecisionTrace& trace);

/// Builds a site label such as "hsub.node@12".
std::string site(std::string_view kind, std::uint64_t subject);
std::string site(std::string_view kind, std::uint64_t subject, std::uint64_t type,
                 std::string_view dir);

enum class TraceMode { Record, Replay, Forced, Explore };

/// Source of every random choice made by the crossover operators.
///
/// Record: draws from the rng. Replay: consumes a trace strictly in order and
/// fails on any divergence. Forced: a decision whose site has pending forced
/// values takes the next one; all other decisions (and exhausted sites) fall
/// back to the rng. Every mode records the decisions actually taken, so the
/// resulting trace always replays the run.
///
/// Explore: the i-th decision takes option `path[i]` (0 once the path is
/// used up) and its number of options is logged in arities(), which allows a
/// caller to enumerate every possible run of a small instance.
///
/// Choices with a single possible outcome are not decisions and are neither
/// drawn nor recorded.
class Decider {
 public:
  explicit Decider(std::uint64_t seed) : rng_(seed) {}

  static Decider replaying(DecisionTrace trace);
  static Decider forcing(const DecisionTrace& forced, std::uint64_t seed);
  static Decider exploring(std::vector<std::size_t> path);

  bool bernoulli(const std::string& site, double p);
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(const std::string& site, std::int64_t lo, std::int64_t hi);
  /// Picks one of `values` (distinct); the recorded value is the chosen
  /// element itself, not its index.
  std::int64_t pick(const std::string& site, std::span<const std::int64_t> values);
  /// Picks a value with probability proportional to its weight.
  std::int64_t weighted(const std::string& site,
                        std::span<const std::pair<std::int64_t, double>> options);

  template <typename Id>
  Id pick_id(const std::string& site, std::span<const Id> candidates) {
    std::vector<std::int64_t> values;
    values.reserve(candidates.size());
    for (Id c : candidates) values.push_back(static_cast<std::int64_t>(c.value));
    return Id{static_cast<decltype(Id::value)>(pick(site, values))};
  }

  const DecisionTrace& trace() const { return taken_; }
  TraceMode mode() const { return mode_; }
  /// Replay: entries not yet consumed. Forced: forced values never used.
  std::size_t remaining() const;
  Rng& rng() { return rng_; }
  /// Explore: number of options of every decision taken so far.
  const std::vector<std::size_t>& arities() const { return arities_; }

 private:
  std::optional<std::int64_t> scripted(const std::string& site);
  std::optional<std::size_t> explored(std::size_t options);

  Rng rng_;
  TraceMode mode_ = TraceMode::Record;
  DecisionTrace taken_;
  DecisionTrace replay_;
  std::size_t cursor_ = 0;
  std::map<std::string, std::deque<std::int64_t>, std::less<>> forced_;
  std::vector<std::size_t> path_;
  std::vector<std::size_t> arities_;
};

}  // namespace secx
