#include "secx/decision.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace secx {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below requires n > 0");
  // Reject the incomplete top bucket to stay unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t bits;
  do {
    bits = next();
  } while (bits >= limit);
  return bits % n;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(below(span));
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (std::uint64_t s : stream) h = mix(h ^ mix(s));
  return h;
}

DecisionTrace parse_trace(std::istream& in) {
  DecisionTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind) || kind.front() == '#') continue;
    std::string label;
    std::string value_text;
    std::string extra;
    if (kind != "decision" || !(ss >> label >> value_text) || (ss >> extra)) {
      throw MalformedInput("expected 'decision <site> <value>'", lineno);
    }
    std::int64_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoll(value_text, &used);
      if (used != value_text.size()) throw std::invalid_argument(value_text);
    } catch (const std::exception&) {
      throw MalformedInput("invalid decision value '" + value_text + "'", lineno);
    }
    trace.add(std::move(label), value);
  }
  return trace;
}

void write_trace(std::ostream& out, const DecisionTrace& trace) {
  for (const Decision& d : trace.entries) out << "decision " << d.site << ' ' << d.value << '\n';
}

std::string site(std::string_view kind, std::uint64_t subject) {
  std::string s(kind);
  s += '@';
  s += std::to_string(subject);
  return s;
}

std::string site(std::string_view kind, std::uint64_t subject, std::uint64_t type,
                 std::string_view dir) {
  std::string s = site(kind, subject);
  s += '.';
  s += std::to_string(type);
  s += '.';
  s += dir;
  return s;
}

Decider Decider::replaying(DecisionTrace trace) {
  Decider d(0);
  d.mode_ = TraceMode::Replay;
  d.replay_ = std::move(trace);
  return d;
}

Decider Decider::forcing(const DecisionTrace& forced, std::uint64_t seed) {
  Decider d(seed);
  d.mode_ = TraceMode::Forced;
  for (const Decision& dec : forced.entries) d.forced_[dec.site].push_back(dec.value);
  return d;
}

Decider Decider::exploring(std::vector<std::size_t> path) {
  Decider d(0);
  d.mode_ = TraceMode::Explore;
  d.path_ = std::move(path);
  return d;
}

std::optional<std::size_t> Decider::explored(std::size_t options) {
  if (mode_ != TraceMode::Explore) return std::nullopt;
  const std::size_t i = arities_.size();
  const std::size_t choice = i < path_.size() ? path_[i] : 0;
  if (choice >= options) {
    throw TraceError("exploration path leaves the decision tree at step " + std::to_string(i));
  }
  arities_.push_back(options);
  return choice;
}

std::size_t Decider::remaining() const {
  if (mode_ == TraceMode::Replay) return replay_.size() - cursor_;
  std::size_t n = 0;
  for (const auto& [label, values] : forced_) n += values.size();
  return n;
}

std::optional<std::int64_t> Decider::scripted(const std::string& label) {
  if (mode_ == TraceMode::Replay) {
    if (cursor_ >= replay_.size()) {
      throw TraceError("replay trace exhausted at decision " + label);
    }
    const Decision& d = replay_.entries[cursor_];
    if (d.site != label) {
      throw TraceError("replay diverged at entry " + std::to_string(cursor_ + 1) + ": expected " +
                       d.site + ", reached " + label);
    }
    ++cursor_;
    return d.value;
  }
  if (mode_ == TraceMode::Forced) {
    const auto it = forced_.find(label);
    if (it != forced_.end() && !it->second.empty()) {
      const std::int64_t v = it->second.front();
      it->second.pop_front();
      return v;
    }
  }
  return std::nullopt;
}

bool Decider::bernoulli(const std::string& label, double p) {
  std::int64_t v;
  if (const auto i = explored(2)) {
    v = static_cast<std::int64_t>(*i);
  } else if (const auto s = scripted(label)) {
    if (*s != 0 && *s != 1) {
      throw TraceError("decision " + label + " expects 0 or 1, got " + std::to_string(*s));
    }
    v = *s;
  } else {
    v = rng_.bernoulli(p) ? 1 : 0;
  }
  taken_.add(label, v);
  return v == 1;
}

std::int64_t Decider::uniform_int(const std::string& label, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int with empty range at " + label);
  if (hi == lo) return lo;
  std::int64_t v;
  if (const auto i = explored(static_cast<std::size_t>(hi - lo + 1))) {
    v = lo + static_cast<std::int64_t>(*i);
  } else if (const auto s = scripted(label)) {
    if (*s < lo || *s > hi) {
      throw TraceError("decision " + label + " = " + std::to_string(*s) + " outside [" +
                       std::to_string(lo) + "," + std::to_string(hi) + "]");
    }
    v = *s;
  } else {
    v = rng_.between(lo, hi);
  }
  taken_.add(label, v);
  return v;
}

std::int64_t Decider::pick(const std::string& label, std::span<const std::int64_t> values) {
  if (values.empty()) throw std::invalid_argument("pick from no candidates at " + label);
  if (values.size() == 1) return values.front();
  std::int64_t v;
  if (const auto i = explored(values.size())) {
    v = values[*i];
  } else if (const auto s = scripted(label)) {
    if (std::find(values.begin(), values.end(), *s) == values.end()) {
      throw TraceError("decision " + label + " = " + std::to_string(*s) +
                       " is not an eligible candidate");
    }
    v = *s;
  } else {
    v = values[rng_.below(values.size())];
  }
  taken_.add(label, v);
  return v;
}

std::int64_t Decider::weighted(const std::string& label,
                               std::span<const std::pair<std::int64_t, double>> options) {
  double total = 0.0;
  for (const auto& [value, w] : options) total += std::max(w, 0.0);
  if (options.empty() || total <= 0.0) {
    throw std::invalid_argument("weighted choice without positive weight at " + label);
  }
  const auto positive = std::count_if(options.begin(), options.end(),
                                      [](const auto& o) { return o.second > 0.0; });
  if (positive == 1) {
    return std::find_if(options.begin(), options.end(), [](const auto& o) {
             return o.second > 0.0;
           })->first;
  }
  std::int64_t v;
  if (const auto i = explored(static_cast<std::size_t>(positive))) {
    std::size_t k = *i;
    v = options.back().first;
    for (const auto& [value, w] : options) {
      if (w <= 0.0) continue;
      if (k-- == 0) {
        v = value;
        break;
      }
    }
  } else if (const auto s = scripted(label)) {
    const auto it = std::find_if(options.begin(), options.end(),
                                 [&](const auto& o) { return o.first == *s && o.second > 0.0; });
    if (it == options.end()) {
      throw TraceError("decision " + label + " = " + std::to_string(*s) + " is not an option");
    }
    v = *s;
  } else {
    double r = rng_.uniform01() * total;
    v = options.back().first;
    for (const auto& [value, w] : options) {
      if (w <= 0.0) continue;
      if (r < w) {
        v = value;
        break;
      }
      r -= w;
    }
  }
  taken_.add(label, v);
  return v;
}

}  // namespace secx
