#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hforge/core/errors.hpp"
#include "hforge/profiler/profiler.hpp"
#include "hforge/profiler/report.hpp"
#include "hforge/search/coordinator.hpp"
#include "hforge/tasks/registry.hpp"
#include "test_support.hpp"

using namespace hforge;
using namespace hforge::profiler;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("hforge_profiler_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

// Synthetic scalar log: one SampleDrawn + EvalFinished pair per entry.
std::vector<RunEvent> scalar_log(const std::vector<std::optional<double>>& fitness, bool with_end = true) {
  std::vector<RunEvent> ev;
  auto push = [&](EventKind k, nlohmann::json p) { ev.push_back({ev.size(), 0.0, k, std::move(p)}); };
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    const auto id = static_cast<std::int64_t>(i + 1);
    push(EventKind::SampleDrawn, {{"candidate_id", id}, {"sample_index", i}});
    nlohmann::json f = fitness[i] ? nlohmann::json::array({*fitness[i]}) : nlohmann::json(nullptr);
    push(EventKind::EvalFinished, {{"candidate_id", id},
                                   {"sample_index", i},
                                   {"status", fitness[i] ? "valid" : "runtime_error"},
                                   {"fitness", f},
                                   {"code", "def f(): return " + std::to_string(i)},
                                   {"idea", "i"}});
  }
  if (with_end) {
    push(EventKind::RunEnd, {{"reason", "budget"},
                             {"samples_used", fitness.size()},
                             {"generations", 1},
                             {"wall_time_s", 0.5},
                             {"best_id", nullptr},
                             {"archive_ids", nlohmann::json::array()}});
  }
  return ev;
}

std::vector<double> best_series(const std::vector<ConvergencePoint>& s) {
  std::vector<double> out;
  for (const auto& p : s) out.push_back(p.best.at(0).value());
  return out;
}

struct LoggedRun {
  search::RunSummary summary;
  fs::path dir;
};

LoggedRun logged_run(search::Method m, std::int64_t budget, const std::string& name, std::uint64_t seed = 0,
                     const std::atomic<bool>* stop = nullptr, llm::Sampler* sampler_override = nullptr) {
  tasks::TaskOptions o;
  o.instance_count = 2;
  auto task = tasks::make_task("obp", o);
  llm::MockSampler mock(hforge::testing::obp_script());
  search::MethodConfig cfg;
  cfg.method = m;
  cfg.pop_size = 4;
  cfg.rng_seed = seed;
  Budget b;
  b.max_samples = budget;
  const auto dir = scratch(name);
  Profiler prof(dir, search::to_json(cfg));
  auto summary = search::run({*task, sampler_override ? *sampler_override : mock, b, cfg, &prof, stop});
  return {summary, dir};
}

}  // namespace

TEST_CASE("running minimum") {
  const auto s = convergence(scalar_log({5.0, 7.0, 3.0}));
  REQUIRE(s.size() == 3);
  CHECK(s[0].sample_index == 0);
  CHECK(s[1].sample_index == 1);
  CHECK(s[2].sample_index == 2);
  CHECK(best_series(s) == std::vector<double>{5, 5, 3});
  CHECK(convergence_csv(s) == "sample_index,best_fitness\n0,5\n1,5\n2,3\n");
}

TEST_CASE("all-invalid run gives absent markers") {
  const auto s = convergence(scalar_log({std::nullopt, std::nullopt}));
  REQUIRE(s.size() == 2);
  for (const auto& p : s) CHECK_FALSE(p.best.at(0).has_value());
  CHECK(convergence_csv(s) == "sample_index,best_fitness\n0,\n1,\n");
}

TEST_CASE("leading invalid samples stay absent until the first valid one") {
  const auto s = convergence(scalar_log({std::nullopt, 4.0, std::nullopt, 6.0}));
  CHECK_FALSE(s[0].best[0].has_value());
  CHECK(*s[1].best[0] == 4.0);
  CHECK(*s[2].best[0] == 4.0);
  CHECK(*s[3].best[0] == 4.0);
}

TEST_CASE("seed counts as starting best") {
  auto ev = scalar_log({9.0, 2.0}, false);
  ev.insert(ev.begin(), RunEvent{0, 0.0, EventKind::EvalFinished,
                                 {{"candidate_id", 0}, {"sample_index", -1}, {"status", "valid"}, {"fitness", {4.0}}}});
  const auto s = convergence(ev);
  REQUIRE(s.size() == 2);
  CHECK(best_series(s) == std::vector<double>{4, 2});
}

TEST_CASE("multi-objective convergence") {
  std::vector<RunEvent> ev;
  auto eval = [&](std::int64_t idx, std::vector<double> f) {
    ev.push_back({ev.size(), 0.0, EventKind::EvalFinished,
                  {{"candidate_id", idx + 1}, {"sample_index", idx}, {"status", "valid"}, {"fitness", f}}});
  };
  eval(0, {1, 5});
  eval(1, {5, 1});
  eval(2, {0.5, 0.5});  // dominates both
  const auto s = convergence(ev);
  REQUIRE(s.size() == 3);
  CHECK(s[0].archive_size == 1);
  CHECK(s[1].archive_size == 2);
  CHECK(s[2].archive_size == 1);
  CHECK(*s[1].best[0] == 1.0);
  CHECK(*s[1].best[1] == 1.0);
  CHECK(convergence_csv(s) ==
        "sample_index,objective_1,objective_2,archive_size\n0,1,5,1\n1,1,1,2\n2,0.5,0.5,1\n");
}

TEST_CASE("three-run aggregation") {
  const std::vector<std::vector<ConvergencePoint>> runs = {convergence(scalar_log({3.0, 1.0})),
                                                           convergence(scalar_log({5.0, 5.0})),
                                                           convergence(scalar_log({4.0, 3.0}))};
  const auto csv = aggregate_csv(runs);
  // index 0: {3,5,4} mean 4 std 1; index 1: {1,5,3} mean 3 std 2
  CHECK(csv == "sample_index,mean,std,n\n0,4,1,3\n1,3,2,3\n");
}

TEST_CASE("aggregation with uneven runs") {
  const std::vector<std::vector<ConvergencePoint>> runs = {convergence(scalar_log({2.0})),
                                                           convergence(scalar_log({std::nullopt, 6.0}))};
  CHECK(aggregate_csv(runs) == "sample_index,mean,std,n\n0,2,0,1\n1,6,0,1\n");
}

TEST_CASE("profiler enforces seq order and the terminal event") {
  Profiler p({}, nlohmann::json::object());
  p.record({0, 0.0, EventKind::SampleDrawn, {}});
  CHECK_THROWS_AS(p.record({2, 0.0, EventKind::SampleDrawn, {}}), ContractViolation);
  CHECK_THROWS_AS(p.record({0, 0.0, EventKind::SampleDrawn, {}}), ContractViolation);
  p.record({1, 0.0, EventKind::RunEnd, {{"reason", "budget"}, {"samples_used", 1}}});
  CHECK(p.finished());
  CHECK_THROWS_AS(p.record({2, 0.0, EventKind::SampleDrawn, {}}), ContractViolation);
  CHECK(p.size() == 2);
}

TEST_CASE("events_since") {
  Profiler p({}, nlohmann::json::object());
  for (std::uint64_t i = 0; i < 5; ++i) p.record({i, 0.0, EventKind::SampleDrawn, {}});
  CHECK(p.events_since(-1).size() == 5);
  CHECK(p.events_since(1).size() == 3);
  CHECK(p.events_since(1).front().seq == 2);
  CHECK(p.events_since(4).empty());
  CHECK(p.events_since(100).empty());
}

TEST_CASE("summary requires RunEnd") {
  CHECK_THROWS_WITH_AS(summarize(scalar_log({1.0}, false)), doctest::Contains("run incomplete"), ContractViolation);
}

TEST_CASE("corrupt line is reported by number") {
  const auto dir = scratch("corrupt");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "events.jsonl");
    f << to_line(RunEvent{0, 1.0, EventKind::SampleDrawn, {{"sample_index", 0}}}) << "\n";
    f << to_line(RunEvent{1, 1.0, EventKind::SampleDrawn, {{"sample_index", 1}}}) << "\n";
    f << "{\"seq\": 2, \"kind\": \n";
  }
  CHECK_THROWS_WITH_AS(read_events(dir / "events.jsonl"), doctest::Contains("events.jsonl:3"), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("twenty-sample run writes twenty SampleDrawn records") {
  const auto r = logged_run(search::Method::EoH, 20, "twenty");
  CHECK(fs::exists(r.dir / "config.json"));
  CHECK(fs::exists(r.dir / "summary.json"));
  const auto events = read_events(r.dir / "events.jsonl");
  CHECK(std::count_if(events.begin(), events.end(), [](const RunEvent& e) { return e.kind == EventKind::SampleDrawn; }) ==
        20);
  for (std::size_t i = 0; i < events.size(); ++i) CHECK(events[i].seq == i);
  const auto config = nlohmann::json::parse(std::ifstream(r.dir / "config.json"));
  CHECK(config["name"] == "eoh");
  fs::remove_all(r.dir);
}

TEST_CASE("replay equivalence") {
  for (auto m : search::all_methods()) {
    CAPTURE(search::to_string(m));
    const auto r = logged_run(m, 14, "replay", 3);
    const auto events = read_events(r.dir / "events.jsonl");
    const auto summary = summarize(events);
    const auto on_disk = nlohmann::json::parse(std::ifstream(r.dir / "summary.json"));
    CHECK(on_disk == summary);
    CHECK(summary["reason"] == r.summary.reason);
    CHECK(summary["samples_used"] == r.summary.samples_used);
    CHECK(summary["generations"] == r.summary.generations);

    REQUIRE(r.summary.best.has_value());
    CHECK(summary["best"]["candidate_id"] == r.summary.best->id);
    CHECK(summary["best"]["code"] == r.summary.best->code);
    CHECK(summary["archive"].size() == r.summary.archive.size());

    int total = 0;
    for (const auto& [k, v] : summary["status_histogram"].items()) total += v.get<int>();
    CHECK(total == r.summary.samples_used);

    const auto series = convergence(events);
    CHECK(series.size() == static_cast<std::size_t>(r.summary.samples_used));
    if (!search::is_multi_objective(m)) {
      REQUIRE(series.back().best[0].has_value());
      CHECK(*series.back().best[0] == (*r.summary.best->fitness())[0]);
      for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i - 1].best[0]) CHECK(*series[i].best[0] <= *series[i - 1].best[0]);
      }
      // Summary best matches the last NewBest event.
      const auto last_new_best = std::find_if(events.rbegin(), events.rend(),
                                              [](const RunEvent& e) { return e.kind == EventKind::NewBest; });
      REQUIRE(last_new_best != events.rend());
      CHECK(last_new_best->payload["candidate_id"] == summary["best"]["candidate_id"]);
    } else {
      CHECK(series.back().archive_size == r.summary.archive.size());
    }
    fs::remove_all(r.dir);
  }
}

TEST_CASE("stopped run is flagged in the summary") {
  std::atomic<bool> flag{false};
  hforge::testing::StoppingSampler sampler(hforge::testing::obp_script(), flag, 3);
  const auto r = logged_run(search::Method::RandomSampling, 20, "stopped", 0, &flag, &sampler);
  const auto summary = nlohmann::json::parse(std::ifstream(r.dir / "summary.json"));
  CHECK(summary["reason"] == "stopped");
  CHECK(summary["samples_used"] == r.summary.samples_used);
  fs::remove_all(r.dir);
}

TEST_CASE("sink failure aborts the run") {
  struct FailingSink final : EventSink {
    std::vector<RunEvent> seen;
    void record(const RunEvent& e) override {
      seen.push_back(e);
      if (e.kind == EventKind::SampleDrawn) throw std::runtime_error("disk full");
    }
  } sink;
  tasks::TaskOptions o;
  o.instance_count = 1;
  auto task = tasks::make_task("obp", o);
  llm::MockSampler mock(hforge::testing::obp_script());
  search::MethodConfig cfg;
  cfg.method = search::Method::RandomSampling;
  Budget b;
  b.max_samples = 5;
  CHECK_THROWS_WITH(search::run({*task, mock, b, cfg, &sink, nullptr}), doctest::Contains("disk full"));
  REQUIRE_FALSE(sink.seen.empty());
  CHECK(sink.seen.back().kind == EventKind::Error);
}
