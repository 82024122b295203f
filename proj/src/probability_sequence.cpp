#include "amfc/probability_sequence.hpp"

#include "amfc/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace amfc {

namespace {

bool valid_probability(double p)
{
  return p > 0.0 && p <= 1.0;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

} // namespace

ProbabilitySequence::ProbabilitySequence(unsigned base, std::vector<double> prefix,
                                         TailRule tail, std::uint64_t offset)
    : base_(base), prefix_(std::move(prefix)), tail_(tail), offset_(offset)
{
  if (base_ < 2)
    throw std::invalid_argument("base d must be >= 2");
  for (double p : prefix_)
    if (!valid_probability(p))
      throw std::invalid_argument("prefix probabilities must lie in (0, 1]");

  std::visit(overloaded{
                 [](const ConstantTail& t) {
                   if (!valid_probability(t.value))
                     throw std::invalid_argument("constant tail must lie in (0, 1]");
                 },
                 [this](const CycleTail&) {
                   if (prefix_.empty())
                     throw std::invalid_argument("cycle tail needs a non-empty prefix");
                 },
                 [](const IidUniformTail& t) {
                   if (!(t.lo > 0.0 && t.lo <= t.hi && t.hi <= 1.0))
                     throw std::invalid_argument("iid_uniform tail needs 0 < lo <= hi <= 1");
                 },
                 [this](const ConvergentDeficitTail& t) {
                   if (!(t.alpha >= 0.0 && t.beta > 0.0 && t.beta < 1.0))
                     throw std::invalid_argument(
                         "convergent_deficit tail needs alpha >= 0 and 0 < beta < 1");
                   // p_j increases with j, so the first tail index is the smallest.
                   const double first = 1.0 - t.alpha * std::pow(t.beta, double(prefix_.size() + 1));
                   if (!valid_probability(first))
                     throw std::invalid_argument("convergent_deficit tail leaves (0, 1]");
                 },
             },
             tail_);
}

ProbabilitySequence ProbabilitySequence::constant(unsigned base, double p)
{
  return ProbabilitySequence(base, {}, ConstantTail{p});
}

double ProbabilitySequence::tail_value(std::uint64_t g) const
{
  return std::visit(overloaded{
                        [](const ConstantTail& t) { return t.value; },
                        [this, g](const CycleTail&) { return prefix_[(g - 1) % prefix_.size()]; },
                        [g](const IidUniformTail& t) {
                          const double u = unit_interval(splitmix64(t.seed ^ splitmix64(g)));
                          return t.lo + (t.hi - t.lo) * u;
                        },
                        [g](const ConvergentDeficitTail& t) {
                          return 1.0 - t.alpha * std::pow(t.beta, double(g));
                        },
                    },
                    tail_);
}

double ProbabilitySequence::operator()(std::uint64_t j) const
{
  if (j == 0)
    throw std::out_of_range("probability index is 1-based");
  const std::uint64_t g = j + offset_;
  if (g <= prefix_.size())
    return prefix_[g - 1];
  return tail_value(g);
}

ProbabilitySequence ProbabilitySequence::dropped(std::uint64_t k) const
{
  return ProbabilitySequence(base_, prefix_, tail_, offset_ + k);
}

ProbabilitySequence ProbabilitySequence::shifted(std::uint64_t n) const
{
  if (n == 0)
    throw std::out_of_range("shifted(n) needs n >= 1");
  return dropped(n - 1);
}

bool ProbabilitySequence::irreducible() const
{
  return std::visit(overloaded{
                        [](const ConstantTail& t) { return t.value < 1.0; },
                        [this](const CycleTail&) {
                          return std::any_of(prefix_.begin(), prefix_.end(),
                                             [](double p) { return p < 1.0; });
                        },
                        [](const IidUniformTail& t) { return t.lo < 1.0; },
                        [](const ConvergentDeficitTail& t) { return t.alpha > 0.0; },
                    },
                    tail_);
}

double ProbabilitySequence::lower_bound(std::uint64_t from) const
{
  from = std::max<std::uint64_t>(from, 1);
  const std::uint64_t g0 = from + offset_;
  const bool cycle = std::holds_alternative<CycleTail>(tail_);

  double m = 1.0;
  if (cycle) {
    for (double p : prefix_)
      m = std::min(m, p);
    return m;
  }
  for (std::uint64_t g = g0; g <= prefix_.size(); ++g)
    m = std::min(m, prefix_[g - 1]);

  const std::uint64_t first_tail = std::max<std::uint64_t>(g0, prefix_.size() + 1);
  const double tail_min = std::visit(overloaded{
                                         [](const ConstantTail& t) { return t.value; },
                                         [](const CycleTail&) { return 1.0; },
                                         [](const IidUniformTail& t) { return t.lo; },
                                         [this, first_tail](const ConvergentDeficitTail&) {
                                           return tail_value(first_tail);
                                         },
                                     },
                                     tail_);
  return std::min(m, tail_min);
}

std::optional<std::uint64_t> ProbabilitySequence::last_index_below(double threshold) const
{
  if (std::holds_alternative<CycleTail>(tail_)) {
    if (std::any_of(prefix_.begin(), prefix_.end(), [&](double p) { return p < threshold; }))
      return std::nullopt;
    return 0;
  }

  std::uint64_t last_global = 0;
  for (std::uint64_t g = offset_ + 1; g <= prefix_.size(); ++g)
    if (prefix_[g - 1] < threshold)
      last_global = g;

  const std::uint64_t first_tail = std::max<std::uint64_t>(offset_ + 1, prefix_.size() + 1);
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    if (c->value < threshold)
      return std::nullopt;
  } else if (const auto* u = std::get_if<IidUniformTail>(&tail_)) {
    if (u->lo < threshold)
      return std::nullopt;
  } else if (std::holds_alternative<ConvergentDeficitTail>(tail_)) {
    // increasing in g, so scan until the first index at or above threshold
    for (std::uint64_t g = first_tail; tail_value(g) < threshold; ++g)
      last_global = g;
  }
  return last_global > offset_ ? last_global - offset_ : 0;
}

std::optional<double> ProbabilitySequence::eventual_constant() const
{
  return std::visit(overloaded{
                        [](const ConstantTail& t) -> std::optional<double> { return t.value; },
                        [this](const CycleTail&) -> std::optional<double> {
                          const double first = prefix_.front();
                          if (std::all_of(prefix_.begin(), prefix_.end(),
                                          [&](double p) { return p == first; }))
                            return first;
                          return std::nullopt;
                        },
                        [](const IidUniformTail& t) -> std::optional<double> {
                          if (t.lo == t.hi)
                            return t.lo;
                          return std::nullopt;
                        },
                        [](const ConvergentDeficitTail& t) -> std::optional<double> {
                          if (t.alpha == 0.0)
                            return 1.0;
                          return std::nullopt;
                        },
                    },
                    tail_);
}

std::string ProbabilitySequence::describe() const
{
  std::ostringstream out;
  out.precision(17);
  out << "d=" << base_ << " prefix=[";
  for (std::size_t i = 0; i < prefix_.size(); ++i)
    out << (i ? "," : "") << prefix_[i];
  out << "] tail=";
  std::visit(overloaded{
                 [&](const ConstantTail& t) { out << "constant(" << t.value << ")"; },
                 [&](const CycleTail&) { out << "cycle"; },
                 [&](const IidUniformTail& t) {
                   out << "iid_uniform(" << t.lo << "," << t.hi << ",seed=" << t.seed << ")";
                 },
                 [&](const ConvergentDeficitTail& t) {
                   out << "convergent_deficit(" << t.alpha << "," << t.beta << ")";
                 },
             },
             tail_);
  if (offset_ != 0)
    out << " offset=" << offset_;
  return out.str();
}

ProbabilitySequence parse_probability_sequence(std::string_view json_text,
                                               std::uint64_t default_seed)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("probability config: ") + e.what());
  }

  try {
    const unsigned d = doc.at("d").get<unsigned>();
    std::vector<double> prefix;
    if (doc.contains("prefix"))
      prefix = doc.at("prefix").get<std::vector<double>>();
    const std::uint64_t offset = doc.value("offset", std::uint64_t{0});

    const auto& tail = doc.at("tail");
    const std::string kind = tail.at("kind").get<std::string>();
    TailRule rule;
    if (kind == "constant") {
      rule = ConstantTail{tail.at("value").get<double>()};
    } else if (kind == "cycle") {
      rule = CycleTail{};
    } else if (kind == "iid_uniform") {
      rule = IidUniformTail{tail.at("lo").get<double>(), tail.at("hi").get<double>(),
                            tail.value("seed", default_seed)};
    } else if (kind == "convergent_deficit") {
      rule = ConvergentDeficitTail{tail.at("alpha").get<double>(), tail.at("beta").get<double>()};
    } else {
      throw std::invalid_argument("probability config: unknown tail kind '" + kind + "'");
    }
    return ProbabilitySequence(d, std::move(prefix), rule, offset);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("probability config: ") + e.what());
  }
}

ProbabilitySequence load_probability_sequence(const std::filesystem::path& path,
                                              std::uint64_t default_seed)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open probability config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_probability_sequence(buffer.str(), default_seed);
}

std::string to_json(const ProbabilitySequence& probs)
{
  nlohmann::json doc;
  doc["d"] = probs.base();
  doc["prefix"] = std::vector<double>(probs.prefix().begin(), probs.prefix().end());
  if (probs.offset() != 0)
    doc["offset"] = probs.offset();
  std::visit(overloaded{
                 [&](const ConstantTail& t) { doc["tail"] = {{"kind", "constant"}, {"value", t.value}}; },
                 [&](const CycleTail&) { doc["tail"] = {{"kind", "cycle"}}; },
                 [&](const IidUniformTail& t) {
                   doc["tail"] = {{"kind", "iid_uniform"}, {"lo", t.lo}, {"hi", t.hi}, {"seed", t.seed}};
                 },
                 [&](const ConvergentDeficitTail& t) {
                   doc["tail"] = {{"kind", "convergent_deficit"}, {"alpha", t.alpha}, {"beta", t.beta}};
                 },
             },
             probs.tail());
  return doc.dump();
}

} // namespace amfc
