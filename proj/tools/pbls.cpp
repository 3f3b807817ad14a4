#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbls/formula.hpp"
#include "pbls/generator.hpp"
#include "pbls/opb.hpp"
#include "pbls/oracle.hpp"
#include "pbls/portfolio.hpp"
#include "pbls/score.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

bool comments_suppressed() {
  const char* v = std::getenv("PBLS_LOG");
  return v != nullptr && std::string(v) == "quiet";
}

void comment(const std::string& msg) {
  if (!comments_suppressed()) std::cout << "c " << msg << '\n';
}

std::string value_line(const pbls::PboInstance& inst, const pbls::Assignment& a) {
  std::ostringstream out;
  out << 'v';
  for (pbls::Var v = 1; v <= inst.num_vars; ++v)
    out << ' ' << (a.get(v) ? "" : "-") << inst.var_name(v);
  return out.str();
}

int report_scores(const std::vector<std::string>& files) {
  std::vector<pbls::ResultRow> rows;
  for (const std::string& path : files) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "error: cannot open '" << path << "'\n";
      return 1;
    }
    std::vector<pbls::ResultRow> part = pbls::parse_result_csv(in);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  pbls::print_score_report(pbls::build_score_report(rows), std::cout);
  return 0;
}

int solve_exact(const pbls::PboInstance& inst) {
  const pbls::BruteForceResult result = pbls::brute_force_solve(inst);
  if (!result.best) {
    comment("enumeration exhausted: no feasible assignment exists");
    std::cout << "s UNKNOWN\n";
    return 0;
  }
  std::cout << "o " << result.objective << '\n';
  std::cout << "s SATISFIABLE\n";
  std::cout << value_line(inst, *result.best) << '\n';
  return 10;
}

int solve(const std::string& path, const pbls::PboInstance& inst, pbls::PortfolioConfig cfg) {
  cfg.on_improvement = [](const pbls::Solution& s) {
    std::cout << "o " << s.objective << std::endl;  // flushed: these lines are watched live
  };
  cfg.on_comment = [](const std::string& msg) { comment(msg); };

  const pbls::RunResult result = pbls::run_portfolio(inst, cfg);

  {
    std::ostringstream stats;
    long long steps = 0, restarts = 0;
    for (const pbls::WorkerStats& w : result.worker_stats) {
      steps += w.steps;
      restarts += w.restarts;
    }
    stats << result.worker_stats.size() << " workers, " << steps << " steps, " << restarts
          << " restarts, " << result.elapsed_seconds << " s";
    comment(stats.str());
  }

  if (result.status != pbls::RunStatus::FeasibleFound) {
    std::cout << "s UNKNOWN\n";
    return 0;
  }

  // Independent end-to-end check: the reported model must satisfy the
  // instance as re-parsed from disk and reproduce the reported objective.
  const pbls::PboInstance check = pbls::parse_opb_file(path);
  if (!check.feasible(result.best->assignment) ||
      check.objective.value(result.best->assignment) != result.best->objective) {
    std::cerr << "error: reported solution failed re-validation against " << path << '\n';
    return 1;
  }
  std::cout << "s SATISFIABLE\n";
  std::cout << value_line(inst, result.best->assignment) << '\n';
  return 10;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pbls: parallel portfolio local search for pseudo-Boolean optimization"};
  app.set_version_flag("--version", kVersion);

  std::string instance_path;
  pbls::PortfolioConfig cfg;
  bool oracle_mode = false;
  std::vector<std::string> score_files;
  std::string pool_trace_path;
  long long target_value = 0;

  app.add_option("instance", instance_path, "OPB instance file");
  app.add_option("-t,--threads", cfg.num_workers, "number of worker threads")
      ->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff_seconds, "wall-clock cutoff in seconds")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "base random seed")->capture_default_str();
  app.add_option("--pool-size", cfg.pool_size, "solution pool capacity")->capture_default_str();
  app.add_option("--p-star", cfg.p_star, "pool rating weight on objective rank")
      ->capture_default_str();
  app.add_option("--beta", cfg.beta, "polarity weight step")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "polarity weight bound")->capture_default_str();
  app.add_option("--K", cfg.search.K, "steps per ratio window")->capture_default_str();
  app.add_option("--R", cfg.search.R, "stagnant steps before a pool restart")
      ->capture_default_str();
  app.add_option("--inc", cfg.search.inc, "ratio multiplier")->capture_default_str();
  app.add_option("--bms", cfg.search.bms_samples, "variables sampled per greedy step")
      ->capture_default_str();
  app.add_option("--max-steps", cfg.search.max_steps,
                 "per-worker step budget, 0 for none (cutoff still applies)")
      ->capture_default_str();
  CLI::Option* target_opt = app.add_option("--target-objective", target_value,
                                           "stop once a solution at or below this is found");
  app.add_flag("--oracle", oracle_mode, "solve exactly by enumeration (up to 24 variables)");
  app.add_option("--score-report", score_files,
                 "aggregate result CSV files and print the sc*/#win table")
      ->expected(1, -1);
  app.add_option("--pool-trace", pool_trace_path, "append pool events to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    std::cout << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (!score_files.empty()) return report_scores(score_files);
    if (instance_path.empty()) {
      std::cerr << app.help() << "error: an instance file is required\n";
      return 1;
    }

    const pbls::PboInstance inst = pbls::parse_opb_file(instance_path);
    comment(std::string("pbls ") + kVersion);
    {
      std::ostringstream about;
      about << instance_path << ": " << inst.num_vars << " vars, " << inst.constraints.size()
            << " constraints, " << inst.objective.terms.size() << " objective terms";
      comment(about.str());
    }

    if (oracle_mode) return solve_exact(inst);

    if (target_opt->count() > 0) cfg.target_objective = target_value;
    std::ofstream trace;
    if (!pool_trace_path.empty()) {
      trace.open(pool_trace_path, std::ios::app);
      if (!trace) {
        std::cerr << "error: cannot open '" << pool_trace_path << "'\n";
        return 1;
      }
      cfg.pool_trace = &trace;
    }
    {
      std::ostringstream params;
      params << "threads=" << cfg.num_workers << " cutoff=" << cfg.cutoff_seconds
             << " seed=" << cfg.seed << " K=" << cfg.search.K << " R=" << cfg.search.R
             << " inc=" << cfg.search.inc << " pool=" << cfg.pool_size << " p*=" << cfg.p_star
             << " beta=" << cfg.beta << " eps=" << cfg.epsilon;
      comment(params.str());
    }
    return solve(instance_path, inst, std::move(cfg));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
