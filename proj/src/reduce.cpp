#include "dqprep/reduce.hpp"

#include <algorithm>
#include <random>

namespace dqprep {

const char* to_string(AutarkySystem s) {
  switch (s) {
    case AutarkySystem::E1: return "E1";
    case AutarkySystem::A0: return "A0";
    case AutarkySystem::A1: return "A1";
    case AutarkySystem::A2: return "A2";
    case AutarkySystem::E2: return "E2";
  }
  return "?";
}

std::vector<AutarkySystem> enabled_systems(const AutarkySystemConfig& cfg) {
  std::vector<AutarkySystem> out;
  if (cfg.enable_e1) out.push_back(AutarkySystem::E1);
  if (cfg.a_k) {
    out.push_back(AutarkySystem::A0);
    if (*cfg.a_k >= 1) out.push_back(AutarkySystem::A1);
    if (*cfg.a_k >= 2) out.push_back(AutarkySystem::A2);
  }
  if (cfg.e_k >= 2) out.push_back(AutarkySystem::E2);
  return out;
}

namespace {

Detection run_detector(AutarkySystem s, const Formula& f, const AutarkySystemConfig& cfg, std::mt19937_64* rng) {
  switch (s) {
    case AutarkySystem::E1: {
      Detection d;
      auto order = occurring_existentials(f);
      if (rng) std::shuffle(order.begin(), order.end(), *rng);
      d.autarky = find_e1_autarky(f, order);
      return d;
    }
    case AutarkySystem::A0: return find_ak_autarky(f, 0, cfg);
    case AutarkySystem::A1: return find_ak_autarky(f, 1, cfg);
    case AutarkySystem::A2: return find_ak_autarky(f, 2, cfg);
    case AutarkySystem::E2: return find_ek_autarky(f, 2, cfg);
  }
  return {};
}

} // namespace

ReductionResult reduce_to_lean_kernel(const Formula& f, const AutarkySystemConfig& cfg) {
  cfg.check();
  ReductionResult r;
  r.certificate.original_hash = content_digest(f);
  auto systems = enabled_systems(cfg);
  std::optional<std::mt19937_64> rng;
  if (cfg.shuffle_seed) {
    rng.emplace(*cfg.shuffle_seed);
    std::shuffle(systems.begin(), systems.end(), *rng);
  }

  Formula cur = f;
  auto warn = [&r](const std::string& w) {
    if (std::find(r.stats.warnings.begin(), r.stats.warnings.end(), w) == r.stats.warnings.end())
      r.stats.warnings.push_back(w);
  };
  while (true) {
    bool progress = false;
    for (AutarkySystem s : systems) {
      if (s == AutarkySystem::E1 && !rng) {
        // Same steps as restarting after each one, without rescanning.
        auto run = exhaust_e1(cur);
        if (run.steps.empty()) continue;
        for (auto& step : run.steps) {
          ++r.stats.autarkies[s];
          r.stats.removed_clauses += step.removed.size();
          r.certificate.steps.push_back({std::move(step.autarky), std::move(step.removed)});
        }
        cur = std::move(run.rest);
        progress = true;
        break;
      }
      Detection d = run_detector(s, cur, cfg, rng ? &*rng : nullptr);
      if (d.incomplete) r.stats.incomplete = true;
      for (const auto& w : d.warnings) warn(w);
      if (!d.autarky) continue;
      auto touched = touched_clauses(cur, *d.autarky);
      if (touched.empty() || !is_autarky(cur, *d.autarky))
        throw std::logic_error(std::string(to_string(s)) + " detector returned an unusable autarky");
      ++r.stats.autarkies[s];
      r.stats.removed_clauses += touched.size();
      Formula next = apply_autarky(cur, *d.autarky);
      r.certificate.steps.push_back({std::move(*d.autarky), std::move(touched)});
      cur = std::move(next);
      progress = true;
      break;
    }
    if (!progress) break;
  }
  r.kernel = std::move(cur);
  r.kernel.comments.clear();
  r.certificate.kernel_hash = content_digest(r.kernel);
  r.certificate.incomplete = r.stats.incomplete;
  r.certificate.steps_hash = steps_digest(r.certificate);
  return r;
}

} // namespace dqprep
