#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>

#include "cliquelab/errors.hpp"
#include "cliquelab/harness.hpp"

namespace cliquelab {
namespace {

using nlohmann::json;

std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format \"" + name + "\" (expected csv or json)");
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "dist,sched,n,delta,epsilon,omega_bar,interval_lo,interval_hi,trial,seed,omega,hit\n";
  for (const auto& rec : report.records) {
    for (const auto& t : rec.trials) {
      out << report.dist_label << ',' << report.sched_label << ',' << rec.n << ',' << g12(report.delta) << ','
          << g12(report.epsilon) << ',' << g12(rec.omega_bar) << ',' << rec.interval_lo << ','
          << rec.interval_hi << ',' << t.trial << ',' << t.seed << ',';
      // Censored trials keep their row; omega is unknown.
      if (t.censored) {
        out << ",censored\n";
      } else {
        out << t.omega << ',' << (t.hit ? 1 : 0) << '\n';
      }
    }
  }
}

json report_to_json(const ExperimentReport& report) {
  json records = json::array();
  for (const auto& rec : report.records) {
    json trials = json::array();
    for (const auto& t : rec.trials) {
      trials.push_back({{"trial", t.trial},
                        {"seed", t.seed},
                        {"omega", t.omega},
                        {"hit", t.hit},
                        {"censored", t.censored},
                        {"nodes", t.nodes},
                        {"elapsed_seconds", t.elapsed_seconds}});
    }
    json eta = json::object();
    for (const auto& [k, v] : rec.assumption.eta_sweep) eta[g12(k)] = v;
    records.push_back({{"n", rec.n},
                       {"omega_bar", rec.omega_bar},
                       {"interval_lo", rec.interval_lo},
                       {"interval_hi", rec.interval_hi},
                       {"hits", rec.hits},
                       {"censored", rec.censored},
                       {"hit_rate", rec.hit_rate},
                       {"assumption",
                        {{"delta", rec.assumption.delta},
                         {"s", rec.assumption.s},
                         {"cutoff", rec.assumption.cutoff},
                         {"threshold", rec.assumption.threshold},
                         {"prob_max_below", rec.assumption.prob_max_below},
                         {"satisfied_estimate", rec.assumption.satisfied_estimate},
                         {"eta_sweep", eta}}},
                       {"trials", trials}});
  }
  return json{{"dist", report.dist_label},
              {"sched", report.sched_label},
              {"delta", report.delta},
              {"epsilon", report.epsilon},
              {"master_seed", report.master_seed},
              {"budget_censored", report.budget_censored},
              {"note",
               "finite-n hit-rate thresholds are engineering choices; the asymptotic result gives no rate"},
              {"records", records}};
}

ExperimentReport report_from_json(const json& j) {
  try {
    ExperimentReport report;
    report.dist_label = j.at("dist").get<std::string>();
    report.sched_label = j.at("sched").get<std::string>();
    report.delta = j.at("delta").get<double>();
    report.epsilon = j.at("epsilon").get<double>();
    report.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& r : j.at("records")) {
      SizeRecord rec;
      rec.n = r.at("n").get<std::size_t>();
      rec.omega_bar = r.at("omega_bar").get<double>();
      rec.interval_lo = r.at("interval_lo").get<long>();
      rec.interval_hi = r.at("interval_hi").get<long>();
      const auto& a = r.at("assumption");
      rec.assumption.delta = a.at("delta").get<double>();
      rec.assumption.s = a.at("s").get<double>();
      rec.assumption.cutoff = a.at("cutoff").get<double>();
      rec.assumption.threshold = a.at("threshold").get<double>();
      rec.assumption.prob_max_below = a.at("prob_max_below").get<double>();
      rec.assumption.satisfied_estimate = a.at("satisfied_estimate").get<bool>();
      for (const auto& [k, v] : a.at("eta_sweep").items()) rec.assumption.eta_sweep[std::stod(k)] = v.get<double>();
      for (const auto& t : r.at("trials")) {
        TrialOutcome out;
        out.trial = t.at("trial").get<std::size_t>();
        out.seed = t.at("seed").get<std::uint64_t>();
        out.omega = t.at("omega").get<std::size_t>();
        out.hit = t.at("hit").get<bool>();
        out.censored = t.at("censored").get<bool>();
        out.nodes = t.at("nodes").get<std::uint64_t>();
        out.elapsed_seconds = t.at("elapsed_seconds").get<double>();
        rec.trials.push_back(out);
      }
      // Aggregates are recomputed, never trusted from the file.
      finalize_record(rec);
      report.budget_censored = report.budget_censored || rec.censored > 0;
      report.records.push_back(std::move(rec));
    }
    return report;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

void export_report(const ExperimentReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + ": " + std::strerror(errno));
  if (format == ReportFormat::Csv) {
    write_report_csv(report, out);
  } else {
    out << report_to_json(report).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw Error("write failed for " + path + ": " + std::strerror(errno));
}

}  // namespace cliquelab
