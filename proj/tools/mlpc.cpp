// Command-line front end: analyze programs, run the checkification loop,
// sweep a corpus across domains, list the seeded-fault registry.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mlp/checkify.hpp"
#include "mlp/faults.hpp"
#include "mlp/modes_expand.hpp"
#include "mlp/parser.hpp"
#include "mlp/printer.hpp"
#include "mlp/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace mlp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int inject_faults(const std::vector<std::string>& names) {
  for (auto& n : names) {
    const faults::FaultInfo* fi = faults::find(n);
    if (!fi) {
      std::cerr << "unknown fault: " << n << "\n";
      return 2;
    }
    faults::enable(fi->id);
  }
  return 0;
}

int cmd_analyze(const std::string& file, const std::string& domain, bool collapse,
                const std::string& out_path) {
  Program prog;
  try {
    prog = expand_modes(parse_program(slurp(file)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    AnalysisGraph g = analyze(prog, domain);
    for (auto& w : g.warnings) std::cerr << "warning: " << w << "\n";
    AnnotateOptions opts;
    opts.materialize = !collapse;
    std::string text = print_program(annotate(prog, g, opts));
    if (out_path.empty() || out_path == "-") {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      out << text;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "analysis failed: " << e.what() << "\n";
    return 2;
  }
}

int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Error: return 1;
    case Verdict::AnalysisFailed: return 2;
    case Verdict::Timeout: return 3;
  }
  return 2;
}

void print_verdict(const std::string& file, const TestVerdict& v) {
  switch (v.verdict) {
    case Verdict::Pass:
      std::cout << file << ": pass (" << v.cases_run << " cases, " << v.wall_ms << " ms)\n";
      break;
    case Verdict::Timeout:
      std::cout << file << ": timeout after " << v.cases_run << " cases\n";
      break;
    case Verdict::AnalysisFailed:
      std::cout << file << ": n/a (" << v.message << ")\n";
      break;
    case Verdict::Error:
      std::cout << file << ": ERROR at line " << v.loc.line << " (" << v.base_pred;
      if (v.point >= 0)
        std::cout << ", program point " << v.point;
      else
        std::cout << ", predicate assertion";
      std::cout << ")\n  failing: " << term_to_string(v.failing) << "\n  input:   "
                << term_to_string(v.input) << "\n  shrunk:  " << term_to_string(v.shrunk)
                << "\n  witness:";
      for (auto& [name, val] : v.witness)
        std::cout << " " << name << "=" << term_to_string(val);
      std::cout << "\n  found after " << v.cases_run << " cases ("
                << v.wall_ms << " ms, analysis " << v.analysis_ms << " ms, node "
                << v.node_id << ")\n";
      break;
  }
}

int cmd_checkify(const std::string& file, CheckifyConfig cfg, const std::string& json_path,
                 const std::vector<std::string>& injected) {
  Program prog;
  try {
    prog = parse_program(slurp(file));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  TestVerdict v = anatest(prog, cfg);
  print_verdict(file, v);
  if (!json_path.empty()) {
    std::string j = verdict_to_json(file, cfg.domain, cfg.seed, v, injected);
    if (json_path == "-") {
      std::cout << j << "\n";
    } else {
      std::ofstream out(json_path);
      out << j << "\n";
    }
  }
  return verdict_exit_code(v.verdict);
}

int cmd_matrix(const std::string& dir, std::vector<std::string> domains, CheckifyConfig base,
               const std::string& json_path) {
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".mlp") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (domains.empty()) domains = {"modes", "sharing", "shfr", "share_clique", "depthk"};

  nlohmann::json cells = nlohmann::json::array();
  size_t name_w = 8;
  for (auto& f : files) name_w = std::max(name_w, f.filename().string().size());
  std::cout << std::left << std::setw((int)name_w + 2) << "program";
  for (auto& d : domains) std::cout << std::setw(22) << d;
  std::cout << "\n";

  bool all_pass = true;
  for (auto& f : files) {
    std::cout << std::setw((int)name_w + 2) << f.filename().string();
    Program prog;
    bool parsed = true;
    try {
      prog = parse_program(slurp(f.string()));
    } catch (const std::exception&) {
      parsed = false;
    }
    for (auto& d : domains) {
      std::string cell;
      nlohmann::json jc;
      jc["program"] = f.filename().string();
      jc["domain"] = d;
      if (!parsed) {
        cell = "n/a (parse)";
        jc["verdict"] = "n/a";
        all_pass = false;
      } else {
        CheckifyConfig cfg = base;
        cfg.domain = d;
        TestVerdict v = anatest(prog, cfg);
        jc["verdict"] = verdict_name(v.verdict);
        jc["cases_run"] = v.cases_run;
        jc["analysis_ms"] = v.analysis_ms;
        jc["testing_ms"] = v.wall_ms - v.analysis_ms;
        std::ostringstream c;
        switch (v.verdict) {
          case Verdict::Pass:
            c << "pass " << (v.wall_ms - v.analysis_ms) << "ms(" << v.analysis_ms << "ms)";
            break;
          case Verdict::Error:
            // an error exits early; its testing time is not a complete run
            c << "ERROR@" << v.loc.line << " early-exit";
            jc["early_exit"] = true;
            all_pass = false;
            break;
          case Verdict::Timeout:
            c << "timeout";
            all_pass = false;
            break;
          case Verdict::AnalysisFailed:
            c << "n/a";
            all_pass = false;
            break;
        }
        cell = c.str();
      }
      std::cout << std::setw(22) << cell;
      cells.push_back(jc);
    }
    std::cout << "\n";
  }
  if (!json_path.empty()) {
    nlohmann::json out;
    out["schema_version"] = 1;
    out["cells"] = cells;
    std::ofstream o(json_path);
    o << out.dump(2) << "\n";
  }
  return all_pass ? 0 : 1;
}

int cmd_faults_list() {
  std::cout << std::left << std::setw(26) << "fault" << std::setw(7) << "class"
            << std::setw(6) << "ref" << std::setw(11) << "detector" << "description\n";
  for (auto& fi : faults::registry()) {
    const char* det = fi.detector == faults::Detector::Anatest      ? "anatest"
                      : fi.detector == faults::Detector::Containment ? "containment"
                                                                     : "both";
    std::string cls(1, fi.bug_class);
    static const char* roman[] = {"", "I", "II", "III", "IV", "V"};
    std::cout << std::setw(26) << fi.name << std::setw(7) << roman[fi.bug_class - '0']
              << std::setw(6) << (fi.ref ? ("#" + std::to_string(fi.ref)) : "-")
              << std::setw(11) << det << fi.description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mini logic-language analysis workbench"};
  app.require_subcommand(1);

  Universe env_universe = universe_from_env();

  // analyze
  std::string a_file, a_domain = "modes", a_out;
  bool a_collapse = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "analyze a program and write the annotated source");
  analyze_cmd->add_option("file", a_file)->required();
  analyze_cmd->add_option("-d,--domain", a_domain, "abstract domain");
  analyze_cmd->add_flag("--collapse", a_collapse, "merge predicate versions per program point");
  analyze_cmd->add_option("-o,--output", a_out, "output file (default stdout)");

  // checkify
  std::string c_file, c_domain = "modes", c_json;
  uint64_t c_seed = 0;
  int c_cases = 1000;
  long long c_timeout = 60000;
  bool c_collapse = false, c_trust_user = false;
  std::vector<std::string> c_inject;
  auto* checkify_cmd = app.add_subcommand("checkify", "flip analysis results to run-time checks and fuzz them");
  checkify_cmd->add_option("file", c_file)->required();
  checkify_cmd->add_option("-d,--domain", c_domain);
  checkify_cmd->add_option("--seed", c_seed);
  checkify_cmd->add_option("--max-cases", c_cases);
  checkify_cmd->add_option("--timeout", c_timeout, "wall clock limit in ms");
  checkify_cmd->add_option("--json", c_json, "write a JSON report (- for stdout)");
  checkify_cmd->add_flag("--collapse", c_collapse);
  checkify_cmd->add_flag("--trust-user-checks", c_trust_user,
                         "turn pre-existing user check assertions into trusts");
  checkify_cmd->add_option("--inject", c_inject, "enable a seeded fault")->group("");

  // matrix
  std::string m_dir, m_json;
  std::vector<std::string> m_domains;
  uint64_t m_seed = 0;
  int m_cases = 1000;
  long long m_timeout = 60000;
  auto* matrix_cmd = app.add_subcommand("matrix", "run a corpus directory across domains");
  matrix_cmd->add_option("dir", m_dir)->required();
  matrix_cmd->add_option("-d,--domains", m_domains, "domains (default: all but concrete)");
  matrix_cmd->add_option("--seed", m_seed);
  matrix_cmd->add_option("--max-cases", m_cases);
  matrix_cmd->add_option("--timeout", m_timeout, "per-cell wall clock limit in ms");
  matrix_cmd->add_option("--json", m_json);

  // faults
  auto* faults_cmd = app.add_subcommand("faults", "seeded fault registry");
  auto* faults_list = faults_cmd->add_subcommand("list", "print the registry");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return cmd_analyze(a_file, a_domain, a_collapse, a_out);
    if (*checkify_cmd) {
      if (int rc = inject_faults(c_inject)) return rc;
      CheckifyConfig cfg;
      cfg.domain = c_domain;
      cfg.seed = c_seed;
      cfg.max_cases = c_cases;
      cfg.wall_clock_ms = c_timeout;
      cfg.materialize = !c_collapse;
      cfg.user_checks = c_trust_user ? CheckifyConfig::UserChecks::Trust
                                     : CheckifyConfig::UserChecks::Ignore;
      cfg.universe = env_universe;
      return cmd_checkify(c_file, cfg, c_json, c_inject);
    }
    if (*matrix_cmd) {
      CheckifyConfig cfg;
      cfg.seed = m_seed;
      cfg.max_cases = m_cases;
      cfg.wall_clock_ms = m_timeout;
      cfg.universe = env_universe;
      return cmd_matrix(m_dir, m_domains, cfg, m_json);
    }
    if (*faults_cmd) {
      if (*faults_list || faults_cmd->get_subcommands().empty()) return cmd_faults_list();
      return cmd_faults_list();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
