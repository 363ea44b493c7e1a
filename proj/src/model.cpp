#include "bdstat/model.hpp"

#include <cmath>

namespace bdstat {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

double CountModel::log_pmf(std::uint64_t n) const {
  return std::visit([n](const auto& d) { return d.log_pmf(n); }, v_);
}

double CountModel::pmf(std::uint64_t n) const { return std::exp(log_pmf(n)); }

const SeriesPolicy& CountModel::policy() const {
  return std::visit([](const auto& d) -> const SeriesPolicy& { return d.policy(); }, v_);
}

RatioSequence CountModel::ratio_sequence() const {
  return std::visit(
      overloaded{
          [](const BaseDistribution& d) { return d.ratio_sequence(); },
          [](const InfDefDistribution& d) { return d.ratio_sequence(); },
          [](const MixtureModel& d) {
            RatioSequence seq = d.base().ratio_sequence();
            seq.eval = [d](std::uint64_t n) { return std::exp(d.log_pmf(n + 1) - d.log_pmf(n)); };
            seq.regular_from = d.points().back() + 1;
            seq.label = d.describe();
            return seq;
          },
          [](const StationaryPmf& d) { return d.ratios(); },
      },
      v_);
}

std::uint64_t CountModel::min_support() const {
  return std::visit(overloaded{
                        [](const BaseDistribution&) -> std::uint64_t { return 0; },
                        [](const InfDefDistribution& d) -> std::uint64_t {
                          return d.spec().max_point() + 1;
                        },
                        [](const MixtureModel& d) -> std::uint64_t {
                          return d.points().back() + 1;
                        },
                        [](const StationaryPmf& d) -> std::uint64_t {
                          return d.ratios().regular_from;
                        },
                    },
                    v_);
}

std::vector<double> CountModel::probabilities() const {
  return enumerate_support([this](std::uint64_t n) { return log_pmf(n); }, policy(),
                           min_support());
}

std::string CountModel::describe() const {
  return std::visit(overloaded{
                        [](const StationaryPmf& d) { return "custom(" + d.ratios().label + ")"; },
                        [](const auto& d) { return d.describe(); },
                    },
                    v_);
}

}  // namespace bdstat
