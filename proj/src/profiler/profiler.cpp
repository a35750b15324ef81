#include "hforge/profiler/profiler.hpp"

#include <stdexcept>

#include "hforge/core/errors.hpp"
#include "hforge/profiler/report.hpp"

namespace hforge::profiler {

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::trunc);
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

Profiler::Profiler(std::filesystem::path log_dir, const nlohmann::json& config_snapshot) : dir_(std::move(log_dir)) {
  if (dir_.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create log directory " + dir_.string() + ": " + ec.message());
  write_json(dir_ / "config.json", config_snapshot);
  out_.open(dir_ / "events.jsonl", std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot open " + (dir_ / "events.jsonl").string());
}

void Profiler::record(const RunEvent& event) {
  std::lock_guard lock(mu_);
  if (finished_) throw ContractViolation("event recorded after RunEnd");
  if (event.seq != events_.size()) {
    throw ContractViolation("event seq " + std::to_string(event.seq) + " out of order, expected " +
                            std::to_string(events_.size()));
  }
  events_.push_back(event);
  if (event.kind == EventKind::RunEnd) finished_ = true;
  if (dir_.empty()) return;
  out_ << to_line(event) << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("cannot append to " + (dir_ / "events.jsonl").string());
  if (finished_) write_json(dir_ / "summary.json", summarize(events_));
}

std::vector<RunEvent> Profiler::events_since(std::int64_t since_seq) const {
  std::lock_guard lock(mu_);
  const auto from = since_seq < 0 ? 0 : static_cast<std::size_t>(since_seq) + 1;
  if (from >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end()};
}

std::size_t Profiler::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

bool Profiler::finished() const {
  std::lock_guard lock(mu_);
  return finished_;
}

}  // namespace hforge::profiler
