#include "scnsim/exporters.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scnsim/errors.hpp"

namespace scnsim {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string fmt_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + p.string());
  out << text;
  if (!out) throw IoError("write failure: " + p.string());
}

}  // namespace

std::string summary_json_text(const ExperimentResult& r) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"config_text\": \"" << json_escape(r.config.to_string()) << "\",\n";
  o << "  \"approaches\": [\n";
  for (std::size_t a = 0; a < r.reports.size(); ++a) {
    const MetricsReport& rep = r.reports[a];
    o << "    {\n";
    o << "      \"approach\": \"" << rep.approach << "\",\n";
    o << "      \"runs\": " << rep.runs << ",\n";
    o << "      \"avg_sum_rate_bps\": " << fmt(rep.avg_sum_rate) << ",\n";
    o << "      \"p5_bps\": " << fmt(rep.p5) << ",\n";
    o << "      \"p50_bps\": " << fmt(rep.p50) << ",\n";
    o << "      \"p95_bps\": " << fmt(rep.p95) << ",\n";
    o << "      \"avg_iterations\": " << fmt(rep.avg_iterations) << ",\n";
    o << "      \"avg_clusters\": " << fmt(rep.avg_clusters) << ",\n";
    o << "      \"avg_cluster_size\": " << fmt(rep.avg_cluster_size) << ",\n";
    o << "      \"avg_same_content\": " << fmt(rep.avg_same_content) << ",\n";
    o << "      \"total_proposals\": " << rep.total_proposals << ",\n";
    o << "      \"xi_max\": " << fmt(rep.xi_max) << ",\n";
    o << "      \"approved_swaps\": " << rep.approved_swaps << ",\n";
    o << "      \"approved_swap_violations\": " << rep.approved_swap_violations << ",\n";
    o << "      \"per_run\": [\n";
    for (std::size_t i = 0; i < rep.per_run.size(); ++i) {
      const RunRecord& rec = rep.per_run[i];
      o << "        {\"run\": " << rec.run << ", \"seed\": \"" << fmt_u64(rec.seed)
        << "\", \"sum_rate_bps\": " << fmt(rec.sum_rate_bps)
        << ", \"welfare\": " << fmt(rec.welfare)
        << ", \"iterations\": " << rec.iterations
        << ", \"proposals\": " << rec.proposals
        << ", \"polish_evals\": " << rec.polish_evals
        << ", \"accepted\": " << rec.accepted
        << ", \"cluster_count\": " << rec.cluster_count
        << ", \"mean_cluster_size\": " << fmt(rec.mean_cluster_size)
        << ", \"mean_same_content\": " << fmt(rec.mean_same_content)
        << ", \"xi_max\": " << fmt(rec.xi_max)
        << ", \"approved_swaps\": " << rec.approved_swaps
        << ", \"approved_swap_violations\": " << rec.approved_swap_violations
        << ", \"fallback_assignments\": " << rec.fallback_assignments << "}"
        << (i + 1 < rep.per_run.size() ? "," : "") << "\n";
    }
    o << "      ],\n";
    o << "      \"ue_rate_samples\": [";
    for (std::size_t i = 0; i < rep.ue_rate_samples.size(); ++i)
      o << (i == 0 ? "" : ", ") << fmt(rep.ue_rate_samples[i]);
    o << "]\n";
    o << "    }" << (a + 1 < r.reports.size() ? "," : "") << "\n";
  }
  o << "  ]\n";
  o << "}\n";
  return o.str();
}

std::string cdf_csv_text(const ExperimentResult& r) {
  std::ostringstream o;
  o << "approach,ue_rate_bps\n";
  for (const MetricsReport& rep : r.reports)
    for (const double v : rep.ue_rate_samples)
      o << rep.approach << "," << fmt(v) << "\n";
  return o.str();
}

std::string runs_csv_text(const ExperimentResult& r) {
  std::ostringstream o;
  o << "run,approach,seed,sum_rate_bps,welfare,iterations,clusters,"
       "mean_cluster_size,mean_same_content,proposals,polish_evals,accepted,"
       "xi_max,approved_swaps,approved_swap_violations,fallback_assignments\n";
  for (const MetricsReport& rep : r.reports) {
    for (const RunRecord& rec : rep.per_run) {
      o << rec.run << "," << rep.approach << "," << fmt_u64(rec.seed) << ","
        << fmt(rec.sum_rate_bps) << "," << fmt(rec.welfare) << ","
        << rec.iterations << "," << rec.cluster_count << ","
        << fmt(rec.mean_cluster_size) << "," << fmt(rec.mean_same_content)
        << "," << rec.proposals << "," << rec.polish_evals << ","
        << rec.accepted << "," << fmt(rec.xi_max) << "," << rec.approved_swaps
        << "," << rec.approved_swap_violations << "," << rec.fallback_assignments
        << "\n";
    }
  }
  return o.str();
}

std::string clusters_json_text(const ExperimentResult& r) {
  std::ostringstream o;
  o << "{\n  \"runs\": [\n";
  for (std::size_t k = 0; k < r.partitions.size(); ++k) {
    const PartitionRecord& pr = r.partitions[k];
    o << "    {\"run\": " << pr.run << ", \"clusters\": {";
    for (std::size_t c = 0; c < pr.clusters.size(); ++c) {
      o << (c == 0 ? "" : ", ") << "\"" << c << "\": [";
      for (std::size_t i = 0; i < pr.clusters[c].size(); ++i)
        o << (i == 0 ? "" : ", ") << pr.clusters[c][i];
      o << "]";
    }
    o << "}, \"ue_assignment\": {";
    for (std::size_t m = 0; m < pr.cluster_of_ue.size(); ++m)
      o << (m == 0 ? "" : ", ") << "\"" << m << "\": " << pr.cluster_of_ue[m];
    o << "}}" << (k + 1 < r.partitions.size() ? "," : "") << "\n";
  }
  o << "  ]\n}\n";
  return o.str();
}

std::string trace_csv_text(const ExperimentResult& r) {
  std::ostringstream o;
  o << "run,t,cluster,count,gamma_current,gamma_best,accepted,proposal_count\n";
  for (const TraceRow& row : r.trace) {
    o << row.run << "," << row.t << "," << row.cluster << "," << row.count
      << "," << fmt(row.gamma_current) << "," << fmt(row.gamma_best) << ","
      << row.accepted << "," << row.proposal_count << "\n";
  }
  return o.str();
}

void export_results(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string());
  write_file(dir / "summary.json", summary_json_text(r));
  write_file(dir / "cdf.csv", cdf_csv_text(r));
  write_file(dir / "runs.csv", runs_csv_text(r));
  write_file(dir / "clusters.json", clusters_json_text(r));
  write_file(dir / "trace.csv", trace_csv_text(r));
}

ExperimentResult read_summary_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open summary file: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError("summary parse failure: " + std::string(e.what()));
  }
  ExperimentResult r;
  r.config = ScenarioConfig::from_string(j.at("config_text").get<std::string>());
  for (const auto& ja : j.at("approaches")) {
    MetricsReport rep;
    rep.approach = ja.at("approach").get<std::string>();
    rep.runs = ja.at("runs").get<int>();
    rep.avg_sum_rate = ja.at("avg_sum_rate_bps").get<double>();
    rep.p5 = ja.at("p5_bps").get<double>();
    rep.p50 = ja.at("p50_bps").get<double>();
    rep.p95 = ja.at("p95_bps").get<double>();
    rep.avg_iterations = ja.at("avg_iterations").get<double>();
    rep.avg_clusters = ja.at("avg_clusters").get<double>();
    rep.avg_cluster_size = ja.at("avg_cluster_size").get<double>();
    rep.avg_same_content = ja.at("avg_same_content").get<double>();
    rep.total_proposals = ja.at("total_proposals").get<long>();
    rep.xi_max = ja.at("xi_max").get<double>();
    rep.approved_swaps = ja.at("approved_swaps").get<long>();
    rep.approved_swap_violations = ja.at("approved_swap_violations").get<long>();
    for (const auto& jr : ja.at("per_run")) {
      RunRecord rec;
      rec.run = jr.at("run").get<int>();
      rec.seed = std::stoull(jr.at("seed").get<std::string>());
      rec.sum_rate_bps = jr.at("sum_rate_bps").get<double>();
      rec.welfare = jr.at("welfare").get<double>();
      rec.iterations = jr.at("iterations").get<int>();
      rec.proposals = jr.at("proposals").get<long>();
      rec.polish_evals = jr.at("polish_evals").get<long>();
      rec.accepted = jr.at("accepted").get<long>();
      rec.cluster_count = jr.at("cluster_count").get<int>();
      rec.mean_cluster_size = jr.at("mean_cluster_size").get<double>();
      rec.mean_same_content = jr.at("mean_same_content").get<double>();
      rec.xi_max = jr.at("xi_max").get<double>();
      rec.approved_swaps = jr.at("approved_swaps").get<long>();
      rec.approved_swap_violations = jr.at("approved_swap_violations").get<long>();
      rec.fallback_assignments = jr.at("fallback_assignments").get<long>();
      rep.per_run.push_back(std::move(rec));
    }
    for (const auto& v : ja.at("ue_rate_samples"))
      rep.ue_rate_samples.push_back(v.get<double>());
    rep.per_run.shrink_to_fit();
    r.reports.push_back(std::move(rep));
  }
  return r;
}

}  // namespace scnsim
