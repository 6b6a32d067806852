#include "legimpact/run_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace legimpact {
namespace {

std::FILE* open_or_throw(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

constexpr const char* kRunHeader =
    "step,theta_h,theta_k,omega_h,omega_k,ttrue_h,ttrue_k,tm_h,tm_k,tp_h,tp_k,"
    "tf_h,tf_k,innov_h,innov_k,cp00,cp01,cp11,tdiff_h,tdiff_k,f_h,f_k,contact,latched";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

void emit_run_csv(const RunRecord& record, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  std::fprintf(f, "# threshold %.17g %.17g\n", record.threshold_used(0),
               record.threshold_used(1));
  std::fprintf(f, "%s\n", kRunHeader);
  for (const TickRow& r : record.rows) {
    std::fprintf(f,
                 "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n",
                 r.step, r.state.theta_h, r.state.theta_k, r.state.omega_h, r.state.omega_k,
                 r.t_true(0), r.t_true(1), r.t_m(0), r.t_m(1), r.t_p(0), r.t_p(1), r.t_f(0),
                 r.t_f(1), r.innovation(0), r.innovation(1), r.cp00, r.cp01, r.cp11, r.t_diff(0),
                 r.t_diff(1), r.force(0), r.force(1), r.contact_active ? 1 : 0,
                 r.latched ? 1 : 0);
  }
  std::fclose(f);
}

void emit_trace_csv(const RunRecord& record, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  std::fputs(
      "step,theta_h,theta_k,omega_h,omega_k,tm_h,tm_k,tp_h,tp_k,tf_h,tf_k,"
      "innov_h,innov_k,cp00,cp01,cp11\n",
      f);
  for (const TickRow& r : record.rows) {
    std::fprintf(f,
                 "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                 "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                 r.step, r.state.theta_h, r.state.theta_k, r.state.omega_h, r.state.omega_k,
                 r.t_m(0), r.t_m(1), r.t_p(0), r.t_p(1), r.t_f(0), r.t_f(1), r.innovation(0),
                 r.innovation(1), r.cp00, r.cp01, r.cp11);
  }
  std::fclose(f);
}

void emit_events_csv(const RunRecord& record, const std::string& run_id, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  std::fputs("run_id,step,f_h,f_k,latched\n", f);
  for (const ImpactEvent& e : record.events) {
    std::fprintf(f, "%s,%d,%.17g,%.17g,1\n", run_id.c_str(), e.step, e.peak_force(0),
                 e.peak_force(1));
  }
  std::fclose(f);
}

std::string format_summary(const SummaryStats& stats) {
  char buf[256];
  std::string out;
  out += "runs: " + std::to_string(stats.runs) + "\n";
  out += "pre-collision |T_f - T_p| (N.cm), " + std::to_string(stats.pre_ticks) + " ticks\n";
  std::snprintf(buf, sizeof(buf), "  hip : min %.6g  max %.6g\n", stats.pre_min(0),
                stats.pre_max(0));
  out += buf;
  std::snprintf(buf, sizeof(buf), "  knee: min %.6g  max %.6g\n", stats.pre_min(1),
                stats.pre_max(1));
  out += buf;
  if (stats.has_post) {
    out += "post-collision |T_f - T_p| (N.cm), " + std::to_string(stats.post_ticks) + " ticks\n";
    std::snprintf(buf, sizeof(buf), "  hip : min %.6g  max %.6g\n", stats.post_min(0),
                  stats.post_max(0));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  knee: min %.6g  max %.6g\n", stats.post_min(1),
                  stats.post_max(1));
    out += buf;
    out += "detected runs: " + std::to_string(stats.detected_runs) + "/" +
           std::to_string(stats.runs) + "\n";
    if (auto latency = stats.max_latency()) {
      out += "max detection latency (ticks): " + std::to_string(*latency) + "\n";
    }
  }
  out += "false positives: " + std::to_string(stats.false_positives) + "\n";
  return out;
}

void emit_summary_text(const SummaryStats& stats, const std::string& path) {
  std::FILE* f = open_or_throw(path);
  const std::string text = format_summary(stats);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

void emit_run_record(const RunRecord& record, const std::string& run_id, const std::string& dir) {
  std::filesystem::create_directories(dir);
  emit_run_csv(record, dir + "/run.csv");
  emit_trace_csv(record, dir + "/trace.csv");
  emit_events_csv(record, run_id, dir + "/events.csv");
}

RunRecord parse_run_record(const std::string& dir) {
  RunRecord record;

  std::ifstream run(dir + "/run.csv");
  if (!run) throw std::runtime_error("cannot open " + dir + "/run.csv");
  std::string line;
  if (!std::getline(run, line) || line.rfind("# threshold ", 0) != 0)
    throw std::runtime_error("missing threshold line in " + dir + "/run.csv");
  {
    std::stringstream ss(line.substr(12));
    ss >> record.threshold_used(0) >> record.threshold_used(1);
  }
  if (!std::getline(run, line) || line != kRunHeader)
    throw std::runtime_error("bad run.csv header in " + dir);
  while (std::getline(run, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 24) throw std::runtime_error("short run.csv row in " + dir);
    TickRow r;
    int c = 0;
    r.step = std::stoi(cells[c++]);
    r.state.theta_h = std::stod(cells[c++]);
    r.state.theta_k = std::stod(cells[c++]);
    r.state.omega_h = std::stod(cells[c++]);
    r.state.omega_k = std::stod(cells[c++]);
    r.t_true(0) = std::stod(cells[c++]);
    r.t_true(1) = std::stod(cells[c++]);
    r.t_m(0) = std::stod(cells[c++]);
    r.t_m(1) = std::stod(cells[c++]);
    r.t_p(0) = std::stod(cells[c++]);
    r.t_p(1) = std::stod(cells[c++]);
    r.t_f(0) = std::stod(cells[c++]);
    r.t_f(1) = std::stod(cells[c++]);
    r.innovation(0) = std::stod(cells[c++]);
    r.innovation(1) = std::stod(cells[c++]);
    r.cp00 = std::stod(cells[c++]);
    r.cp01 = std::stod(cells[c++]);
    r.cp11 = std::stod(cells[c++]);
    r.t_diff(0) = std::stod(cells[c++]);
    r.t_diff(1) = std::stod(cells[c++]);
    r.force(0) = std::stod(cells[c++]);
    r.force(1) = std::stod(cells[c++]);
    r.contact_active = cells[c++] == "1";
    r.latched = cells[c++] == "1";
    record.rows.push_back(r);
  }

  std::ifstream events(dir + "/events.csv");
  if (!events) throw std::runtime_error("cannot open " + dir + "/events.csv");
  if (!std::getline(events, line) || line != "run_id,step,f_h,f_k,latched")
    throw std::runtime_error("bad events.csv header in " + dir);
  while (std::getline(events, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw std::runtime_error("short events.csv row in " + dir);
    ImpactEvent e;
    e.step = std::stoi(cells[1]);
    e.peak_force(0) = std::stod(cells[2]);
    e.peak_force(1) = std::stod(cells[3]);
    record.events.push_back(e);
  }
  return record;
}

}  // namespace legimpact
