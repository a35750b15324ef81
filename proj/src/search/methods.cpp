#include <cmath>
#include <deque>

#include "hforge/core/errors.hpp"
#include "hforge/search/coordinator.hpp"
#include "hforge/search/moo.hpp"

namespace hforge::search {

namespace {

using Batch = std::vector<std::optional<Candidate>>;

double scalar(const Candidate& c) { return (*c.fitness())[0]; }

bool strictly_better(const Candidate& a, const Candidate& b) { return compare_scalar(a.fitness(), b.fitness()) < 0; }

nlohmann::json id_or_null(const std::optional<Candidate>& c) {
  return c ? nlohmann::json(c->id) : nlohmann::json(nullptr);
}

nlohmann::json member_ids(const Population& p) {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& m : p.members()) ids.push_back(m.id);
  return ids;
}

std::vector<Candidate> valid_of(const Batch& batch) {
  std::vector<Candidate> out;
  for (const auto& c : batch) {
    if (c && c->valid()) out.push_back(*c);
  }
  return out;
}

std::optional<Candidate> seed_if_valid(const Candidate& seed) {
  return seed.valid() ? std::optional<Candidate>(seed) : std::nullopt;
}

nlohmann::json run_random(Coordinator& co, const Candidate&) {
  while (!co.done()) {
    std::vector<llm::Prompt> prompts(static_cast<std::size_t>(co.config().num_samplers), co.prompts().init());
    co.sample(std::move(prompts));
    co.end_generation(co.best() ? 1 : 0);
  }
  return nlohmann::json::object();
}

nlohmann::json run_one_plus_one(Coordinator& co, const Candidate& seed) {
  auto incumbent = seed_if_valid(seed);
  while (!co.done()) {
    auto prompt = incumbent ? co.prompts().modify(*incumbent) : co.prompts().init();
    for (auto& c : co.sample({prompt})) {
      if (c && c->valid() && (!incumbent || strictly_better(*c, *incumbent))) incumbent = c;
    }
    co.end_generation(incumbent ? 1 : 0);
  }
  return {{"incumbent_id", id_or_null(incumbent)}};
}

nlohmann::json run_sa(Coordinator& co, const Candidate& seed) {
  const auto& cfg = co.config();
  auto current = seed_if_valid(seed);
  double temperature = cfg.sa_t0;
  std::int64_t cooled_at = 0;
  while (!co.done()) {
    auto prompt = current ? co.prompts().modify(*current) : co.prompts().init();
    for (auto& c : co.sample({prompt})) {
      if (!c || !c->valid()) continue;
      if (!current) {
        current = c;
        continue;
      }
      // Relative change keeps the temperature scale independent of task units.
      const double cur = scalar(*current);
      const double delta = (scalar(*c) - cur) / std::max(std::fabs(cur), 1e-9);
      if (sa_accept(delta, temperature, co.rng().uniform())) current = c;
    }
    while (co.samples_used() - cooled_at >= cfg.sa_cool_every) {
      temperature *= cfg.sa_alpha;
      cooled_at += cfg.sa_cool_every;
    }
    co.end_generation(current ? 1 : 0);
  }
  return {{"current_id", id_or_null(current)}, {"temperature", temperature}};
}

nlohmann::json run_tabu(Coordinator& co, const Candidate& seed) {
  const auto& cfg = co.config();
  auto current = seed_if_valid(seed);
  std::deque<std::string> tabu;
  auto push = [&](const std::string& h) {
    tabu.push_back(h);
    while (tabu.size() > static_cast<std::size_t>(cfg.tabu_len)) tabu.pop_front();
  };
  if (current) push(current->normalized_hash);
  while (!co.done()) {
    std::optional<double> global_best;
    if (co.best()) global_best = scalar(*co.best());
    auto prompt = current ? co.prompts().modify(*current) : co.prompts().init();
    std::vector<llm::Prompt> prompts(static_cast<std::size_t>(cfg.samples_per_prompt), prompt);
    std::optional<Candidate> move;
    for (auto& c : co.sample(std::move(prompts))) {
      if (!c || !c->valid()) continue;
      if (!tabu_admissible(c->normalized_hash, tabu, scalar(*c), global_best)) continue;
      if (!move || better_scalar(*c, *move)) move = c;
    }
    if (move) {
      current = move;
      push(move->normalized_hash);
    }
    co.end_generation(current ? 1 : 0);
  }
  return {{"current_id", id_or_null(current)}, {"tabu_size", tabu.size()}};
}

nlohmann::json run_ils(Coordinator& co, const Candidate& seed) {
  const auto& cfg = co.config();
  auto current = seed_if_valid(seed);
  int stall = 0;
  while (!co.done()) {
    const bool perturbing = current && stall >= cfg.ils_stall;
    auto prompt = !current ? co.prompts().init() : perturbing ? co.prompts().perturb(*current) : co.prompts().modify(*current);
    for (auto& c : co.sample({prompt})) {
      if (!c) continue;
      if (!c->valid()) {
        if (!perturbing) ++stall;
      } else if (!current || perturbing || strictly_better(*c, *current)) {
        current = c;
        stall = 0;
      } else {
        ++stall;
      }
    }
    co.end_generation(current ? 1 : 0);
  }
  return {{"current_id", id_or_null(current)}, {"stall", stall}};
}

nlohmann::json run_vns(Coordinator& co, const Candidate& seed) {
  const int levels = co.config().vns_levels;
  auto current = seed_if_valid(seed);
  int level = 1;
  while (!co.done()) {
    auto prompt = current ? co.prompts().vns(*current, level, levels) : co.prompts().init();
    for (auto& c : co.sample({prompt})) {
      if (!c) continue;
      if (c->valid() && (!current || strictly_better(*c, *current))) {
        current = c;
        level = 1;
      } else if (current) {
        level = level % levels + 1;
      }
    }
    co.end_generation(current ? 1 : 0);
  }
  return {{"current_id", id_or_null(current)}, {"level", level}};
}

// EoH and its NSGA-II variant share offspring generation; only survival differs.
nlohmann::json run_eoh(Coordinator& co, const Candidate& seed, bool nsga2) {
  const auto cap = static_cast<std::size_t>(co.config().pop_size);
  Population pop(cap);
  auto survive = [&](const std::vector<Candidate>& offspring) {
    pop.assign(nsga2 ? nsga2_survivor_selection(pop.members(), offspring, cap)
                     : eoh_survivor_selection(pop.members(), offspring, cap));
  };
  survive(seed.valid() ? std::vector<Candidate>{seed} : std::vector<Candidate>{});
  if (!co.done()) {
    survive(valid_of(co.sample(std::vector<llm::Prompt>(cap, co.prompts().init()))));
    co.end_generation(pop.size());
  }
  struct Op {
    const char* name;
    std::size_t parents;
  };
  static constexpr Op kOps[] = {{"e1", 2}, {"e2", 2}, {"m1", 1}, {"m2", 1}};
  while (!co.done()) {
    std::vector<llm::Prompt> prompts;
    for (const auto& op : kOps) {
      if (pop.empty()) {
        prompts.push_back(co.prompts().init());
        continue;
      }
      std::vector<const Candidate*> parents;
      for (auto r : rank_proportional_pick(pop.size(), op.parents, co.rng())) parents.push_back(&pop.members()[r]);
      prompts.push_back(co.prompts().eoh(op.name, parents));
    }
    survive(valid_of(co.sample(std::move(prompts))));
    co.end_generation(pop.size());
  }
  return {{"population", member_ids(pop)}};
}

nlohmann::json run_funsearch(Coordinator& co, const Candidate& seed) {
  const auto& cfg = co.config();
  std::vector<Island> islands;
  for (int i = 0; i < cfg.num_islands; ++i) {
    islands.push_back(Island{i, Population(static_cast<std::size_t>(cfg.funsearch_archive)), 0});
    if (seed.valid()) islands.back().population.add(seed);
  }
  const std::int64_t period = std::max<std::int64_t>(1, co.budget().max_samples / 4);
  std::int64_t next_reset = period;
  int resets = 0;
  while (!co.done()) {
    const auto i = static_cast<std::size_t>(co.rng().uniform_int(0, cfg.num_islands - 1));
    auto& island = islands[i];
    llm::Prompt prompt;
    if (island.population.empty()) {
      prompt = co.prompts().init();
      prompt.metadata["island"] = static_cast<int>(i);
    } else {
      const auto& m = island.population.members();
      std::vector<const Candidate*> shown;
      for (std::size_t k = std::min<std::size_t>(2, m.size()); k-- > 0;) shown.push_back(&m[k]);
      prompt = co.prompts().funsearch(shown, static_cast<int>(i));
    }
    const auto before = island.population.best() ? std::optional<Candidate>(*island.population.best()) : std::nullopt;
    auto batch = co.sample(std::vector<llm::Prompt>(static_cast<std::size_t>(cfg.samples_per_prompt), prompt));
    for (const auto& c : valid_of(batch)) island.population.add(c);
    const auto* after = island.population.best();
    island.staleness = (after && (!before || after->id != before->id)) ? 0 : island.staleness + 1;
    while (co.samples_used() >= next_reset) {
      if (islands.size() >= 2) {
        island_reset(islands, co.rng());
        ++resets;
      }
      next_reset += period;
    }
    std::size_t members = 0;
    for (const auto& isl : islands) members += isl.population.size();
    co.end_generation(members);
  }
  nlohmann::json state{{"resets", resets}, {"islands", nlohmann::json::array()}};
  for (const auto& isl : islands) state["islands"].push_back(member_ids(isl.population));
  return state;
}

nlohmann::json run_moead(Coordinator& co, const Candidate& seed) {
  const auto& cfg = co.config();
  const int n = std::max(2, cfg.pop_size);
  const auto weights = moead_weights(2, n - 1);
  const auto neighbors = weight_neighbors(weights, static_cast<std::size_t>(cfg.moead_neighbors));
  std::vector<Subproblem> subs(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < subs.size(); ++i) {
    subs[i].weight = weights[i];
    subs[i].neighbors = neighbors[i];
  }
  std::vector<Candidate> store;
  std::vector<double> z_star;
  auto assign = [&](std::size_t i, const Candidate& c) {
    store.push_back(c);
    subs[i].incumbent = static_cast<std::ptrdiff_t>(store.size() - 1);
    subs[i].incumbent_fitness = *c.fitness();
  };
  if (seed.valid()) update_ideal(z_star, *seed.fitness());

  if (!co.done()) {
    auto batch = co.sample(std::vector<llm::Prompt>(subs.size(), co.prompts().init()));
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (batch[i] && batch[i]->valid()) {
        update_ideal(z_star, *batch[i]->fitness());
        assign(i, *batch[i]);
      } else if (seed.valid()) {
        assign(i, seed);
      }
    }
    co.end_generation(subs.size());
  }
  while (!co.done()) {
    std::vector<llm::Prompt> prompts;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      std::vector<std::size_t> pool;
      for (auto j : subs[i].neighbors) {
        if (subs[j].incumbent >= 0) pool.push_back(j);
      }
      std::vector<const Candidate*> parents;
      while (parents.size() < 2 && !pool.empty()) {
        const auto k = static_cast<std::size_t>(co.rng().uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
        const auto* c = &store[static_cast<std::size_t>(subs[pool[k]].incumbent)];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        if (!parents.empty() && parents.front()->id == c->id) continue;
        parents.push_back(c);
      }
      auto p = parents.empty() ? co.prompts().init() : co.prompts().eoh(parents.size() == 2 ? "e2" : "m1", parents);
      p.metadata["subproblem"] = static_cast<int>(i);
      prompts.push_back(std::move(p));
    }
    auto batch = co.sample(std::move(prompts));
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!batch[i] || !batch[i]->valid()) continue;
      const auto& f = *batch[i]->fitness();
      update_ideal(z_star, f);
      store.push_back(*batch[i]);
      moead_update(subs, i, f, static_cast<std::ptrdiff_t>(store.size() - 1), z_star);
    }
    co.end_generation(subs.size());
  }
  nlohmann::json incumbents = nlohmann::json::array();
  for (const auto& sp : subs) {
    incumbents.push_back(sp.incumbent >= 0 ? nlohmann::json(store[static_cast<std::size_t>(sp.incumbent)].id)
                                           : nlohmann::json(nullptr));
  }
  return {{"incumbents", incumbents}, {"z_star", z_star}};
}

}  // namespace

RunSummary run(RunContext ctx) {
  Coordinator co(std::move(ctx));
  const auto seed = co.evaluate_seed();
  nlohmann::json state;
  switch (co.config().method) {
    case Method::RandomSampling: state = run_random(co, seed); break;
    case Method::OnePlusOneEPS: state = run_one_plus_one(co, seed); break;
    case Method::SA: state = run_sa(co, seed); break;
    case Method::Tabu: state = run_tabu(co, seed); break;
    case Method::ILS: state = run_ils(co, seed); break;
    case Method::VNS: state = run_vns(co, seed); break;
    case Method::EoH: state = run_eoh(co, seed, false); break;
    case Method::FunSearch: state = run_funsearch(co, seed); break;
    case Method::MoEoH_NSGA2: state = run_eoh(co, seed, true); break;
    case Method::MOEAD: state = run_moead(co, seed); break;
  }
  return co.finish(std::move(state));
}

}  // namespace hforge::search
