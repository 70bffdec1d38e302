#include "rdinst/engine.hpp"
#include "rdinst/errors.hpp"
#include "rdinst/frontend.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace rdinst;

namespace {

struct Options {
  std::string input;
  std::string backend_cmd;
  long long backend_timeout_ms = 60'000;
  unsigned max_iterations = 1000;
  long long wall_clock_ms = 600'000;
  unsigned preferred_fraction = 3;
  bool trace = false;
  bool stats = false;
  bool dump_domains = false;
  bool dump_instantiations = false;
  bool print_model = false;
  std::string batch;
  unsigned jobs = 1;
};

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path.empty() || path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    ss << in.rdbuf();
  }
  return ss.str();
}

EngineConfig make_config(const Options& o) {
  EngineConfig c;
  std::string cmd = o.backend_cmd;
  if (cmd.empty()) {
    const char* env = std::getenv("RDINST_BACKEND");
    cmd = env && *env ? env : "z3 -in";
  }
  c.backend.command = split_command(cmd);
  if (c.backend.command.empty()) throw Error("empty backend command");
  c.backend.timeout = std::chrono::milliseconds(o.backend_timeout_ms);
  c.max_iterations = o.max_iterations;
  c.wall_clock = std::chrono::milliseconds(o.wall_clock_ms);
  c.preferred_fraction = o.preferred_fraction;
  return c;
}

int run_single(const Options& o) {
  TermManager tm;
  Script script = parse_script(tm, read_input(o.input));
  Problem problem = normalize(tm, script);
  for (const std::string& w : problem.warnings) std::cerr << "warning: " << w << '\n';

  EngineConfig config = make_config(o);
  config.trace = o.trace;
  if (o.trace) config.trace_sink = &std::cerr;
  Engine engine(tm, std::move(problem), config);

  if (o.dump_domains) {
    std::cout << engine.current_domains(engine.current_stats()).dump() << std::flush;
    return 0;
  }

  SolveResult r = engine.solve();
  std::cout << verdict_name(r.verdict) << '\n';
  if (o.print_model && r.model) std::cout << r.model->to_string();
  std::cout << std::flush;
  if (r.verdict == Verdict::Unknown && !r.reason.empty()) std::cerr << "reason: " << r.reason << '\n';
  if (o.dump_instantiations) {
    for (Term t : r.instances) std::cerr << print_smtlib(t) << '\n';
  }
  if (o.stats) std::cerr << r.stats.to_json() << '\n';
  return r.verdict == Verdict::Unknown ? 2 : 0;
}

struct BatchRow {
  std::string verdict = "error";
  unsigned iterations = 0;
  double wall_ms = 0;
};

BatchRow run_file(const Options& o, const fs::path& path) {
  BatchRow row;
  const auto start = std::chrono::steady_clock::now();
  try {
    TermManager tm;
    Script script = parse_script(tm, read_input(path.string()));
    Engine engine(tm, normalize(tm, script), make_config(o));
    SolveResult r = engine.solve();
    row.verdict = std::string(verdict_name(r.verdict));
    row.iterations = r.stats.iterations;
  } catch (const std::exception& e) {
    std::cerr << path.string() << ": error: " << e.what() << '\n';
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

int run_batch(const Options& o) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.batch)) {
    if (entry.is_regular_file() && entry.path().extension() == ".smt2") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<BatchRow> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) rows[i] = run_file(o, files[i]);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  for (std::size_t i = 0; i < files.size(); ++i) {
    std::cout << files[i].string() << ',' << rows[i].verdict << ',' << rows[i].iterations << ','
              << std::llround(rows[i].wall_ms) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Model-based quantifier instantiation guided by relevant domains"};
  app.add_option("input", o.input, "SMT-LIB 2.6 script (stdin when omitted or '-')");
  app.add_option("--backend-cmd", o.backend_cmd, "Backend command line (default: $RDINST_BACKEND or 'z3 -in')");
  app.add_option("--backend-timeout-ms", o.backend_timeout_ms, "Per-check backend timeout")->check(CLI::PositiveNumber);
  app.add_option("--max-iterations", o.max_iterations, "Iteration budget")->check(CLI::PositiveNumber);
  app.add_option("--wall-clock-ms", o.wall_clock_ms, "Wall-clock budget")->check(CLI::PositiveNumber);
  app.add_option("--preferred-fraction", o.preferred_fraction, "Preferred set is the first ceil(n/k) terms")
      ->check(CLI::PositiveNumber);
  app.add_flag("--trace", o.trace, "Per-iteration trace on stderr");
  app.add_flag("--stats", o.stats, "Statistics as JSON on stderr");
  app.add_flag("--dump-domains", o.dump_domains, "Print the initial relevant domains and exit");
  app.add_flag("--dump-instantiations", o.dump_instantiations, "Print added instances on stderr");
  app.add_flag("--model", o.print_model, "Print the model after sat");
  auto* batch = app.add_option("--batch", o.batch, "Solve every .smt2 file in a directory, one CSV row each")
                    ->check(CLI::ExistingDirectory);
  app.add_option("--jobs", o.jobs, "Concurrent problems in batch mode")->check(CLI::PositiveNumber);
  batch->excludes("input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    return o.batch.empty() ? run_single(o) : run_batch(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
