#include "ppflow/uq.hpp"

#include <stdexcept>

namespace ppflow {

QoiSeries aggregate(const RunResult& result, const SparseGridRule& rule) {
  QoiSeries s;
  for (const auto& r : result.records) {
    if (static_cast<int>(r.energy.size()) != rule.size())
      throw std::invalid_argument("realization count differs from the collocation rule");
    s.times.push_back(r.time);
    s.raw_energy.push_back(r.energy);
    s.expected_energy.push_back(expectation(rule, r.energy));
    s.max_mean_divergence.push_back(r.max_mean_divergence);
  }
  s.blew_up = result.blew_up;
  s.blowup_time = result.blowup_time;
  return s;
}

QoiSeries scm_run(SchemeKind kind, const SchemeConfig& cfg, const RandomViscosityField& field,
                  const SparseGridRule& rule, const ProblemBuilder& build, const RunOptions& options) {
  if (rule.dimension != field.sample_dimension())
    throw std::invalid_argument("sparse grid dimension does not match the viscosity field");
  auto scheme = make_scheme(kind, build(field, rule), cfg);
  return aggregate(run(*scheme, options), rule);
}

}  // namespace ppflow
