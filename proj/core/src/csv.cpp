#include "adrl/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "adrl/harness.hpp"

namespace adrl {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string b(bool v) { return v ? "1" : "0"; }

}  // namespace

std::string validation_csv(std::span<const ValidationRow> rows) {
  std::string out = "block_id,step,hypothesis_index,posterior\n";
  for (const auto& r : rows) {
    out += std::to_string(r.block_id) + "," + std::to_string(r.step) + "," + std::to_string(r.hypothesis) + "," +
           format_real(r.posterior) + "\n";
  }
  return out;
}

std::string training_csv(std::span<const TrainingEpisodeRow> rows) {
  std::string out = "episode,true_hypothesis,length,truncated,correct\n";
  for (const auto& r : rows) {
    out += std::to_string(r.episode) + "," + std::to_string(r.true_hypothesis) + "," + std::to_string(r.length) +
           "," + b(r.truncated) + "," + b(r.correct) + "\n";
  }
  return out;
}

std::string metrics_csv(std::span<const EpisodeMetrics> rows) {
  std::string out = "policy,pi_up,pi_low,episode,claim_delay,correct,false_alarms,truncated\n";
  for (const auto& r : rows) {
    out += policy_name(r.policy) + "," + format_real(r.pi_up) + "," + format_real(r.pi_low) + "," +
           std::to_string(r.episode) + "," + std::to_string(r.result.claim_delay) + "," + b(r.result.correct()) +
           "," + (r.result.false_alarm ? "1" : "0") + "," + b(r.result.truncated) + "\n";
  }
  return out;
}

std::string grid_csv(std::span<const CellSummary> cells) {
  std::string out = "pi_up,pi_low,mean_delay,mean_loss,n,delay_stderr,no_claim_rate,false_alarm_rate\n";
  for (const auto& c : cells) {
    out += format_real(c.pi_up) + "," + format_real(c.pi_low) + "," + format_real(c.mean_delay) + "," +
           format_real(c.mean_loss) + "," + std::to_string(c.episodes) + "," + format_real(c.delay_stderr) + "," +
           format_real(c.no_claim_rate()) + "," + format_real(c.false_alarm_rate()) + "\n";
  }
  return out;
}

std::string compare_csv(std::span<const CompareRow> rows) {
  std::string out =
      "pi_up,pi_low,agent_mean_delay,chernoff_mean_delay,agent_mean_loss,chernoff_mean_loss,n,"
      "agent_no_claim_rate,chernoff_no_claim_rate\n";
  for (const auto& r : rows) {
    out += format_real(r.agent.pi_up) + "," + format_real(r.agent.pi_low) + "," + format_real(r.agent.mean_delay) +
           "," + format_real(r.chernoff.mean_delay) + "," + format_real(r.agent.mean_loss) + "," +
           format_real(r.chernoff.mean_loss) + "," + std::to_string(r.agent.episodes) + "," +
           format_real(r.agent.no_claim_rate()) + "," + format_real(r.chernoff.no_claim_rate()) + "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace adrl
