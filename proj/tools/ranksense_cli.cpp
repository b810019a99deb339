// ranksense command-line tool: batch front end for ranking, robustness,
// segmentation metrics and challenge-description validation.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ranksense/audit.hpp"
#include "ranksense/challenge_description.hpp"
#include "ranksense/mask_io.hpp"
#include "ranksense/observers.hpp"
#include "ranksense/ranking.hpp"
#include "ranksense/report.hpp"
#include "ranksense/seg_metrics.hpp"
#include "ranksense/stability.hpp"
#include "ranksense/table_csv.hpp"

namespace fs = std::filesystem;
using namespace ranksense;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kInput = 3,
  kParse = 4,
  kValidation = 5,
  kPrecondition = 6,
  kUndefined = 7,
  kGateFailed = 8,
};

int exit_code_for(const Error& e) {
  const auto& k = e.kind();
  if (k == "InputError") return kInput;
  if (k == "ParseError") return kParse;
  if (k == "ValidationError") return kValidation;
  if (k == "PreconditionError") return kPrecondition;
  return kUndefined;
}

void print_error(const std::string& kind, const std::string& message) {
  Json err{{"error", {{"class", kind}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);) out.push_back(part);
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("invalid number '" + s + "' in " + what);
  }
}

// -- shared options -----------------------------------------------------------

struct SchemeArgs {
  std::string metric = "DSC";
  std::string composite;
  std::string family = "metric-based";
  std::string op = "mean";
  std::string ties = "min-competition";
  std::string case_ties = "fractional";
  std::string missing = "ignore";
  std::vector<std::string> metric_specs;

  void add_to(CLI::App* cmd, bool with_family = true) {
    cmd->add_option("--metric", metric, "Metric to rank on")->capture_default_str();
    cmd->add_option("--metrics", composite, "Comma-separated metrics for a composite ranking");
    if (with_family) {
      cmd->add_option("--family", family, "metric-based | case-based")->capture_default_str();
      cmd->add_option("--op", op, "mean | median")->capture_default_str();
    }
    cmd->add_option("--ties", ties, "Final tie method: min-competition | fractional")
        ->capture_default_str();
    cmd->add_option("--case-ties", case_ties, "Per-case tie method")->capture_default_str();
    cmd->add_option("--missing", missing, "ignore | worst-value | last-rank | reject")
        ->capture_default_str();
    cmd->add_option("--metric-spec", metric_specs,
                    "Declare a metric: ID:higher-better|lower-better[:MIN:MAX[:WORST]]");
  }

  [[nodiscard]] RankingScheme scheme() const {
    RankingScheme s;
    s.family = parse_enum<Family>(family);
    s.op = parse_enum<Aggregator>(op);
    s.metric_id = metric;
    if (!composite.empty()) s.composite_metrics = split(composite, ',');
    s.ties = parse_enum<TieMethod>(ties);
    s.case_ties = parse_enum<TieMethod>(case_ties);
    s.missing = parse_enum<MissingPolicy>(missing);
    return s;
  }

  [[nodiscard]] std::vector<MetricSpec> specs() const {
    std::vector<MetricSpec> out;
    for (const auto& text : metric_specs) {
      const auto f = split(text, ':');
      if (f.size() != 2 && f.size() != 4 && f.size() != 5) {
        throw InputError("metric spec '" + text + "' must be ID:ORIENTATION[:MIN:MAX[:WORST]]");
      }
      MetricSpec m{f[0], parse_enum<Orientation>(f[1]), std::nullopt, std::nullopt};
      if (f.size() >= 4) m.domain = {{parse_number(f[2], text), parse_number(f[3], text)}};
      if (f.size() == 5) m.worst_value = parse_number(f[4], text);
      out.push_back(std::move(m));
    }
    return out;
  }
};

struct OutputArgs {
  std::string out;
  std::string plot_data;

  void add_to(CLI::App* cmd, bool plot = true) {
    cmd->add_option("--out", out, "Report path (default: stdout)");
    if (plot) cmd->add_option("--plot-data", plot_data, "Write flat plot-data CSV here");
  }

  void emit(const Json& report, const PlotData* plot = nullptr) const {
    const std::string text = report.dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f) throw InputError("cannot write '" + out + "'");
      f << text;
    }
    if (plot && !plot_data.empty()) {
      std::ofstream f(plot_data, std::ios::binary);
      if (!f) throw InputError("cannot write '" + plot_data + "'");
      plot->write(f);
    }
  }
};

WhiskerRule parse_whiskers(const std::string& s) {
  if (s == "median") return WhiskerRule::median;
  if (s == "quartile") return WhiskerRule::quartile;
  throw InputError("unknown whisker rule '" + s + "'");
}

// -- metrics --------------------------------------------------------------------

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories) {
  if (!fs::is_directory(dir)) throw InputError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : (e.is_regular_file() && e.path().extension() == ".mask")) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// ref/<case>.mask against pred/<algorithm>/<case>.mask.
int run_metrics(const std::string& ref_dir, const std::string& pred_dir, const std::string& csv_out,
                const std::string& points, unsigned threads, const OutputArgs& out) {
  const auto mode = points == "boundary"     ? SurfaceMode::boundary
                    : points == "foreground" ? SurfaceMode::foreground
                                             : throw InputError("unknown point set '" + points + "'");
  const auto ref_files = sorted_entries(ref_dir, false);
  const auto alg_dirs = sorted_entries(pred_dir, true);
  if (ref_files.empty()) throw InputError("no reference masks (*.mask) in '" + ref_dir + "'");

  std::vector<LabelMask> refs;
  for (const auto& f : ref_files) refs.push_back(read_mask(f));

  struct Cell {
    std::optional<MetricValue> dsc, hd, hd95;
  };
  std::vector<Cell> cells(alg_dirs.size() * ref_files.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    const auto a = i / ref_files.size();
    const auto c = i % ref_files.size();
    const auto pred_path = alg_dirs[a] / ref_files[c].filename();
    if (!fs::exists(pred_path)) return;
    const auto pred = read_mask(pred_path);
    cells[i] = {dsc(refs[c], pred), hausdorff(refs[c], pred, mode), hd95(refs[c], pred, mode)};
  });

  ResultTable::Builder builder;
  for (const char* id : {kDsc, kHd, kHd95}) builder.add_metric(*builtin_metric(id));
  Json degenerate = Json::array(), undefined = Json::array(), missing = Json::array();
  for (std::size_t a = 0; a < alg_dirs.size(); ++a) {
    const auto alg = alg_dirs[a].filename().string();
    builder.add_algorithm(alg);
    for (std::size_t c = 0; c < ref_files.size(); ++c) {
      const auto kase = ref_files[c].stem().string();
      builder.add_case(kase);
      const auto& cell = cells[a * ref_files.size() + c];
      if (!cell.dsc) missing.push_back({{"algorithm", alg}, {"case", kase}});
      for (const auto* v : {&cell.dsc, &cell.hd, &cell.hd95}) {
        if (!*v) continue;
        const auto& mv = **v;
        if (mv.degenerate) {
          degenerate.push_back({{"algorithm", alg}, {"case", kase}, {"metric", mv.metric_id},
                                {"note", "degenerate agreement: both masks empty"}});
        }
        if (!mv.defined) undefined.push_back({{"algorithm", alg}, {"case", kase}, {"metric", mv.metric_id}});
      }
      const auto value = [](const std::optional<MetricValue>& v) -> std::optional<double> {
        if (v && v->defined) return v->value;
        return std::nullopt;
      };
      builder.add(alg, kase, kDsc, value(cell.dsc));
      builder.add(alg, kase, kHd, value(cell.hd));
      builder.add(alg, kase, kHd95, value(cell.hd95));
    }
  }
  const auto table = builder.build();
  {
    std::ofstream f(csv_out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + csv_out + "'");
    write_results_csv(f, table);
  }

  Json inputs = Json::array();
  for (const auto& f : ref_files) inputs.push_back(input_entry(f));
  for (const auto& d : alg_dirs)
    for (const auto& f : sorted_entries(d, false)) inputs.push_back(input_entry(f));
  Json config{{"ref", ref_dir},
              {"pred", pred_dir},
              {"points", points},
              {"connectivity", "6 (face)"},
              {"hd95_percentile", "sorted ascending, h=(n-1)*0.95, linear interpolation"},
              {"empty_pair_dsc", "1.0 (degenerate agreement)"}};
  Json result{{"table", csv_out},
              {"algorithms", table.algorithms()},
              {"cases", table.cases()},
              {"missing_predictions", missing},
              {"undefined", undefined},
              {"degenerate_agreement", degenerate}};
  out.emit(make_report("metrics", inputs, config, result));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Challenge ranking analysis: rankings, robustness, segmentation metrics, reporting"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Rank algorithms from a results table");
  std::string rank_results;
  SchemeArgs rank_scheme;
  OutputArgs rank_out;
  rank_cmd->add_option("--results", rank_results, "Results CSV")->required();
  rank_scheme.add_to(rank_cmd);
  rank_out.add_to(rank_cmd);

  // robustness
  auto* boot_cmd = app.add_subcommand("robustness", "Bootstrap winner stability");
  std::string boot_results, boot_whiskers = "median";
  SchemeArgs boot_scheme;
  OutputArgs boot_out;
  BootstrapConfig boot_cfg;
  boot_cmd->add_option("--results", boot_results, "Results CSV")->required();
  boot_cmd->add_option("--samples", boot_cfg.samples, "Bootstrap samples")->capture_default_str();
  boot_cmd->add_option("--seed", boot_cfg.seed, "Random seed")->capture_default_str();
  boot_cmd->add_option("--threads", boot_cfg.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  boot_cmd->add_option("--usurper-threshold", boot_cfg.usurper_threshold,
                       "Minimum rank-1 fraction for a non-winner to count")
      ->capture_default_str();
  boot_cmd->add_option("--whiskers", boot_whiskers, "median | quartile")->capture_default_str();
  boot_scheme.add_to(boot_cmd);
  boot_out.add_to(boot_cmd);

  // loo
  auto* loo_cmd = app.add_subcommand("loo", "Leave-one-case-out winner stability");
  std::string loo_results, loo_whiskers = "median";
  double loo_threshold = 0.0;
  unsigned loo_threads = 1;
  SchemeArgs loo_scheme;
  OutputArgs loo_out;
  loo_cmd->add_option("--results", loo_results, "Results CSV")->required();
  loo_cmd->add_option("--usurper-threshold", loo_threshold,
                      "Minimum rank-1 fraction for a non-winner to count (0 = any occurrence)")
      ->capture_default_str();
  loo_cmd->add_option("--threads", loo_threads, "Worker threads")->capture_default_str();
  loo_cmd->add_option("--whiskers", loo_whiskers, "median | quartile")->capture_default_str();
  loo_scheme.add_to(loo_cmd);
  loo_out.add_to(loo_cmd);

  // audit-missing
  auto* audit_cmd = app.add_subcommand("audit-missing", "Missing-data manipulation audit");
  std::string audit_results;
  double audit_threshold = 0.5;
  SchemeArgs audit_scheme;
  OutputArgs audit_out;
  audit_cmd->add_option("--results", audit_results, "Results CSV")->required();
  audit_cmd->add_option("--threshold", audit_threshold, "Withhold values below this")
      ->capture_default_str();
  audit_scheme.add_to(audit_cmd);
  audit_out.add_to(audit_cmd, false);

  // compare-observers
  auto* obs_cmd = app.add_subcommand("compare-observers", "Rankings per reference annotator");
  std::vector<std::string> observers;
  SchemeArgs obs_scheme;
  OutputArgs obs_out;
  obs_cmd->add_option("--observer", observers, "NAME=results.csv (repeat)")->required();
  obs_scheme.add_to(obs_cmd);
  obs_out.add_to(obs_cmd, false);

  // compare-schemes
  auto* cmp_cmd = app.add_subcommand("compare-schemes", "Paired bootstrap stability of two schemes");
  std::vector<std::string> cmp_results;
  std::string a_family = "metric-based", a_op = "mean", b_family = "metric-based", b_op = "median";
  SchemeArgs cmp_scheme;
  OutputArgs cmp_out;
  BootstrapConfig cmp_cfg;
  cmp_cmd->add_option("--results", cmp_results, "One results CSV per task")->required();
  cmp_cmd->add_option("--a-family", a_family, "Scheme A family")->capture_default_str();
  cmp_cmd->add_option("--a-op", a_op, "Scheme A operator")->capture_default_str();
  cmp_cmd->add_option("--b-family", b_family, "Scheme B family")->capture_default_str();
  cmp_cmd->add_option("--b-op", b_op, "Scheme B operator")->capture_default_str();
  cmp_cmd->add_option("--samples", cmp_cfg.samples, "Bootstrap samples")->capture_default_str();
  cmp_cmd->add_option("--seed", cmp_cfg.seed, "Random seed")->capture_default_str();
  cmp_cmd->add_option("--threads", cmp_cfg.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmp_scheme.add_to(cmp_cmd, false);
  cmp_out.add_to(cmp_cmd);

  // metrics
  auto* met_cmd = app.add_subcommand("metrics", "DSC/HD/HD95 from mask containers");
  std::string met_ref, met_pred, met_csv, met_points = "boundary";
  unsigned met_threads = 0;
  OutputArgs met_out;
  met_cmd->add_option("--ref", met_ref, "Directory of reference masks <case>.mask")->required();
  met_cmd->add_option("--pred", met_pred, "Directory of <algorithm>/<case>.mask")->required();
  met_cmd->add_option("--out", met_csv, "Results CSV to write")->required();
  met_cmd->add_option("--report", met_out.out, "Report path (default: stdout)");
  met_cmd->add_option("--points", met_points, "boundary | foreground")->capture_default_str();
  met_cmd->add_option("--threads", met_threads, "Worker threads (0 = all cores)");

  // validate-spec
  auto* val_cmd = app.add_subcommand("validate-spec", "Validate a challenge-description document");
  std::string val_doc;
  bool print_registry = false, require_gate = false;
  OutputArgs val_out;
  val_cmd->add_option("--doc", val_doc, "Challenge-description JSON");
  val_cmd->add_flag("--print-registry", print_registry, "Emit the parameter registry and exit");
  val_cmd->add_flag("--require-gate", require_gate, "Exit nonzero if the essential-set gate fails");
  val_out.add_to(val_cmd, false);

  // coverage
  auto* cov_cmd = app.add_subcommand("coverage", "Per-parameter reporting coverage over documents");
  std::vector<std::string> cov_docs;
  OutputArgs cov_out;
  cov_cmd->add_option("--docs", cov_docs, "Challenge-description JSON files")->required();
  cov_out.add_to(cov_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*rank_cmd) {
      const auto table = read_results_csv(rank_results, rank_scheme.specs());
      const auto scheme = rank_scheme.scheme();
      const auto ranking = rank(table, scheme);
      PlotData plot;
      add_plot_data(plot, ranking);
      rank_out.emit(make_report("rank", Json::array({input_entry(rank_results)}),
                                {{"scheme", to_json(scheme)}},
                                {{"ranking", to_json(ranking)},
                                 {"inclusion", to_json(inclusion_check(table))}}),
                    &plot);
    } else if (*boot_cmd) {
      const auto table = read_results_csv(boot_results, boot_scheme.specs());
      const auto scheme = boot_scheme.scheme();
      const auto whiskers = parse_whiskers(boot_whiskers);
      const auto report = bootstrap_stability(table, scheme, boot_cfg);
      PlotData plot;
      add_plot_data(plot, report, whiskers);
      boot_out.emit(
          make_report("robustness", Json::array({input_entry(boot_results)}),
                      {{"scheme", to_json(scheme)},
                       {"samples", boot_cfg.samples},
                       {"seed", boot_cfg.seed},
                       {"rng", "mt19937_64 per resample, seed_seq(seed, resample index)"},
                       {"usurper_threshold", num(boot_cfg.usurper_threshold)},
                       {"tau_variant", "tau-b"},
                       {"whiskers", boot_whiskers}},
                      to_json(report, whiskers)),
          &plot);
    } else if (*loo_cmd) {
      const auto table = read_results_csv(loo_results, loo_scheme.specs());
      const auto scheme = loo_scheme.scheme();
      const auto whiskers = parse_whiskers(loo_whiskers);
      const auto report = leave_one_out_stability(table, scheme, loo_threshold, loo_threads);
      PlotData plot;
      add_plot_data(plot, report, whiskers);
      loo_out.emit(make_report("loo", Json::array({input_entry(loo_results)}),
                               {{"scheme", to_json(scheme)},
                                {"usurper_threshold", num(loo_threshold)},
                                {"tau_variant", "tau-b"},
                                {"whiskers", loo_whiskers}},
                               to_json(report, whiskers)),
                   &plot);
    } else if (*audit_cmd) {
      const auto table = read_results_csv(audit_results, audit_scheme.specs());
      const auto scheme = audit_scheme.scheme();
      const auto findings = missing_data_audit(table, scheme, audit_threshold);
      std::size_t promoted = 0;
      for (const auto& f : findings) promoted += f.reached_rank_1 && f.original_rank != 1.0;
      audit_out.emit(make_report("audit-missing", Json::array({input_entry(audit_results)}),
                                 {{"scheme", to_json(scheme)}, {"threshold", num(audit_threshold)}},
                                 {{"findings", to_json(findings)},
                                  {"non_winners_reaching_rank_1", promoted}}));
    } else if (*obs_cmd) {
      const auto scheme = obs_scheme.scheme();
      std::vector<ObserverTable> tables;
      Json inputs = Json::array();
      for (const auto& spec : observers) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("--observer expects NAME=PATH, got '" + spec + "'");
        const auto path = spec.substr(eq + 1);
        tables.push_back({spec.substr(0, eq), read_results_csv(path, obs_scheme.specs())});
        inputs.push_back(input_entry(path));
      }
      obs_out.emit(make_report("compare-observers", inputs, {{"scheme", to_json(scheme)}},
                               to_json(observer_ranking_comparison(tables, scheme))));
    } else if (*cmp_cmd) {
      auto scheme_a = cmp_scheme.scheme();
      auto scheme_b = scheme_a;
      scheme_a.family = parse_enum<Family>(a_family);
      scheme_a.op = parse_enum<Aggregator>(a_op);
      scheme_b.family = parse_enum<Family>(b_family);
      scheme_b.op = parse_enum<Aggregator>(b_op);
      std::vector<ResultTable> tasks;
      Json inputs = Json::array();
      for (const auto& path : cmp_results) {
        tasks.push_back(read_results_csv(path, cmp_scheme.specs()));
        inputs.push_back(input_entry(path));
      }
      const auto comparison = compare_scheme_stability(tasks, scheme_a, scheme_b, cmp_cfg);
      PlotData plot;
      for (const auto& t : comparison.tasks)
        if (t.eligible) {
          plot.add("winner_stability_a", std::to_string(t.task), t.stability_a);
          plot.add("winner_stability_b", std::to_string(t.task), t.stability_b);
        }
      cmp_out.emit(make_report("compare-schemes", inputs,
                               {{"samples", cmp_cfg.samples},
                                {"seed", cmp_cfg.seed},
                                {"rng", "mt19937_64 per resample, seed_seq(seed, resample index)"},
                                {"usurper_threshold", num(cmp_cfg.usurper_threshold)}},
                               to_json(comparison)),
                   &plot);
    } else if (*met_cmd) {
      return run_metrics(met_ref, met_pred, met_csv, met_points, met_threads, met_out);
    } else if (*val_cmd) {
      if (print_registry) {
        val_out.emit(registry_json());
        return kOk;
      }
      if (val_doc.empty()) throw InputError("validate-spec needs --doc (or --print-registry)");
      const auto desc = schema::load_description_file(val_doc);
      const auto report = schema::completeness(desc);
      val_out.emit(make_report("validate-spec", Json::array({input_entry(val_doc)}),
                               {{"registry_version", schema::kRegistryVersion},
                                {"instantiation", "non-empty value"}},
                               {{"valid", true},
                                {"document_id", desc.document_id},
                                {"document_version", desc.version},
                                {"completeness", to_json(report)}}));
      if (require_gate && !report.essential_gate_passed) return kGateFailed;
    } else if (*cov_cmd) {
      std::vector<schema::ChallengeDescription> descs;
      Json inputs = Json::array();
      for (const auto& path : cov_docs) {
        descs.push_back(schema::load_description_file(path));
        inputs.push_back(input_entry(path));
      }
      cov_out.emit(make_report("coverage", inputs,
                               {{"registry_version", schema::kRegistryVersion},
                                {"bands", "red < 50 <= orange <= 90 < green"}},
                               {{"documents", descs.size()},
                                {"parameters", to_json(schema::coverage_stats(descs))}}));
    }
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
    return kFailure;
  }
  return kOk;
}
