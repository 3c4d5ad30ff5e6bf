#include <iostream>

#include "CLI11.hpp"

#include "binarity/pipeline.hpp"

namespace {

using namespace binarity;

enum Exit { kOk = 0, kInternal = 1, kInvalid = 2, kBudget = 3, kRejected = 4 };

struct Common {
  std::uint64_t budget_nodes = Limits{}.search_nodes;
  std::uint64_t degree_cap = Limits{}.degree_cap;
  std::uint64_t enumeration_cap = Limits{}.enumeration_cap;
  std::uint64_t tuple_budget = Limits{}.tuple_budget;
  bool one_based = false;
  std::string format = "text";
  bool timings = false;

  Limits limits() const {
    Limits l;
    l.search_nodes = budget_nodes;
    l.degree_cap = degree_cap;
    l.enumeration_cap = enumeration_cap;
    l.tuple_budget = tuple_budget;
    return l;
  }
  bool json() const { return format == "json"; }
};

std::vector<int> parse_tests(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int t = 0;
    try {
      t = std::stoi(item);
    } catch (const std::exception&) {
      throw InvalidInput("bad test number \"" + item + "\"");
    }
    if (t < 1 || t > 4) throw InvalidInput("tests must be among 1,2,3,4 (use --test5-d for test 5)");
    out.push_back(t);
  }
  return out;
}

int cmd_analyze(const Common& c, const std::string& file, const std::string& tests, std::size_t max_ell,
                const std::string& emit, std::uint64_t d5, bool oracle) {
  auto f = io::read_group_file(file, c.one_based);
  auto A = io::load_action(f, c.limits());
  AnalyzeOptions opt;
  opt.tests = parse_tests(tests);
  opt.ell_max = max_ell;
  opt.limits = c.limits();
  if (d5) opt.test5_d = d5;
  opt.oracle = oracle;
  auto rep = analyze(A, f.name, opt);
  if (c.json()) {
    std::cout << report_to_json(rep, c.timings).dump(2) << '\n';
  } else {
    std::cout << render_text(rep, c.timings);
  }
  if (!emit.empty()) {
    for (const auto& t : rep.outcomes) {
      if (t.certificate && verify_witness(*t.certificate).ok) {
        io::write_json_file(emit, io::witness_to_json(*t.certificate));
        if (!c.json()) std::cout << "witness written to " << emit << '\n';
        break;
      }
    }
  }
  return rep.budget_hit && rep.verdict != "NonBinary" ? kBudget : kOk;
}

int cmd_closure(const Common& c, const std::string& file) {
  auto f = io::read_group_file(file, c.one_based);
  auto A = io::load_action(f, c.limits());
  auto r = two_closure(A.group(), c.limits());
  if (c.json()) {
    auto j = io::closure_to_json(r);
    j["action"] = f.name;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "action: " << f.name << " (degree " << A.degree() << ", order " << A.group().order() << ")\n";
    std::cout << "closure order: " << r.order << (r.symbolic_full ? " (full symmetric group)" : "") << '\n';
    std::cout << "2-closed: " << (r.is_two_closed ? "yes" : "no") << '\n';
    if (r.witness) std::cout << "outside element: " << to_cycle_string(*r.witness) << '\n';
  }
  return kOk;
}

int cmd_arity(const Common& c, const std::string& file) {
  auto f = io::read_group_file(file, c.one_based);
  auto A = io::load_action(f, c.limits());
  auto r = exact_arity(A.group(), c.tuple_budget);
  if (c.json()) {
    std::cout << io::json{{"action", f.name}, {"arity", r.value}, {"exact", r.exact},
                          {"lengths_checked", r.lengths_checked}, {"note", r.note}}.dump(2)
              << '\n';
  } else {
    std::cout << "arity: " << (r.exact ? "" : ">= ") << r.value;
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << '\n';
  }
  return kOk;
}

int cmd_rell(const Common& c, const std::string& file, std::size_t ell, const std::string& method) {
  auto f = io::read_group_file(file, c.one_based);
  auto A = io::load_action(f, c.limits());
  CountMethod m = preferred_method(A.group(), c.limits());
  if (method == "character") {
    m = CountMethod::CharacterSum;
  } else if (method == "direct") {
    m = CountMethod::DirectOrbit;
  } else if (method != "auto") {
    throw InvalidInput("method must be auto, character or direct");
  }
  auto r = r_ell(A.group(), ell, m, c.limits());
  if (c.json()) {
    std::cout << io::json{{"ell", r.ell}, {"value", to_string(r.value)}, {"method", to_string(r.method)}}.dump(2) << '\n';
  } else {
    std::cout << "r_" << r.ell << " = " << r.value << " (" << to_string(r.method) << ")\n";
  }
  return kOk;
}

int cmd_test5(const Common& c, const std::string& file, const std::string& omega, std::uint64_t d, bool exact2,
              bool exact3, std::size_t max_ell) {
  auto f = io::read_group_file(file, c.one_based);
  if (f.subgroup) throw InvalidInput("test5 takes the point stabilizer M as an explicit group");
  BatteryOptions bo;
  bo.ell_max = max_ell;
  bo.limits = c.limits();
  Test5Config cfg{io::to_group(f), parse_bigint(omega), d, !exact2, !exact3, bo};
  auto r = test5_alot(cfg);
  if (c.json()) {
    auto j = test5_to_json(r);
    j["M"] = f.name;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "test 5: " << to_string(r.status) << " - " << r.detail << '\n';
    for (const auto& a : r.actions) {
      std::cout << "  degree " << a.degree << " (stabilizer order " << a.stabilizer_order << "): " << a.detail << '\n';
    }
  }
  return r.budget_hit && r.status != Status::NonBinary ? kBudget : kOk;
}

int cmd_verify(const Common& c, const std::string& file) {
  auto w = io::witness_from_json(io::read_json_file(file), c.one_based);
  auto v = verify_witness(w);
  if (c.json()) {
    std::cout << io::json{{"ok", v.ok}, {"reason", v.reason}}.dump(2) << '\n';
  } else {
    std::cout << (v.ok ? "certificate verified" : "certificate rejected: " + v.reason) << '\n';
  }
  return v.ok ? kOk : kRejected;
}

int cmd_corpus(const Common& c, const std::string& dir, const std::string& tests, std::size_t max_ell, unsigned jobs,
               bool oracle) {
  AnalyzeOptions opt;
  opt.tests = parse_tests(tests);
  opt.ell_max = max_ell;
  opt.limits = c.limits();
  opt.oracle = oracle;
  auto rows = corpus_run(dir, opt, jobs, c.one_based);
  if (c.json()) {
    io::json j = io::json::array();
    for (const auto& r : rows) {
      if (r.report) {
        auto x = report_to_json(*r.report, c.timings);
        x["file"] = r.file;
        j.push_back(std::move(x));
      } else {
        j.push_back({{"file", r.file}, {"error", r.error}});
      }
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << render_corpus_table(rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide or gather evidence on whether a permutation group action is binary"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--budget-nodes", c.budget_nodes, "Node budget for backtrack searches")->envname("BINARITY_BUDGET_NODES");
  app.add_option("--degree-cap", c.degree_cap, "Largest coset action degree")->envname("BINARITY_DEGREE_CAP");
  app.add_option("--enumeration-cap", c.enumeration_cap, "Largest group enumerated element by element")
      ->envname("BINARITY_ENUMERATION_CAP");
  app.add_option("--tuple-budget", c.tuple_budget, "Tuple budget for the arity oracle")->envname("BINARITY_TUPLE_BUDGET");
  app.add_flag("--one-based", c.one_based, "Read points as 1-based")->envname("BINARITY_ONE_BASED");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}))->envname("BINARITY_FORMAT");
  app.add_flag("--timings", c.timings, "Report timings");

  std::string file, tests = "1,2,3,4", emit, method = "auto", omega, dir;
  std::size_t max_ell = 6, ell = 3;
  std::uint64_t d5 = 0, d = 2;
  bool oracle = false, exact2 = false, exact3 = false;
  unsigned jobs = 1;

  auto* an = app.add_subcommand("analyze", "Run the test pipeline on a group file");
  an->add_option("file", file, "Group file")->required();
  an->add_option("--tests", tests, "Comma-separated tests to run")->envname("BINARITY_TESTS");
  an->add_option("--max-ell", max_ell, "Largest tuple length for test 1")->envname("BINARITY_MAX_ELL");
  an->add_option("--emit-witness", emit, "Write the first verified witness to this path");
  an->add_option("--test5-d", d5, "Also run test 5 with this divisor");
  an->add_flag("--oracle", oracle, "Also compute the exact arity");

  auto* cl = app.add_subcommand("closure", "Compute the 2-closure");
  cl->add_option("file", file, "Group file")->required();

  auto* ar = app.add_subcommand("arity", "Compute the arity by exhaustive tuple orbits");
  ar->add_option("file", file, "Group file")->required();

  auto* rl = app.add_subcommand("rell", "Count orbits on ordered tuples of distinct points");
  rl->add_option("file", file, "Group file")->required();
  rl->add_option("--ell", ell, "Tuple length")->required();
  rl->add_option("--method", method, "auto, character or direct");

  auto* t5 = app.add_subcommand("test5", "Divisibility test from the point stabilizer and |Omega|");
  t5->add_option("file", file, "Group file for the point stabilizer M")->required();
  t5->add_option("--omega", omega, "|Omega| as a decimal integer")->required();
  t5->add_option("--d", d, "Divisor (a prime or prime power)");
  t5->add_option("--max-ell", max_ell, "Largest tuple length for test 1")->envname("BINARITY_MAX_ELL");
  t5->add_flag("--exact-condition2", exact2, "Filter actions by the composition factor condition");
  t5->add_flag("--exact-condition3", exact3, "Filter actions by the kernel condition");

  auto* vf = app.add_subcommand("verify", "Check a witness file");
  vf->add_option("file", file, "Witness file")->required();

  auto* co = app.add_subcommand("corpus", "Analyze every group file under a directory");
  co->add_option("dir", dir, "Corpus directory")->required();
  co->add_option("--tests", tests, "Comma-separated tests to run")->envname("BINARITY_TESTS");
  co->add_option("--max-ell", max_ell, "Largest tuple length for test 1")->envname("BINARITY_MAX_ELL");
  co->add_option("--jobs", jobs, "Worker threads")->envname("BINARITY_JOBS");
  co->add_flag("--oracle", oracle, "Also compute the exact arity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (an->parsed()) return cmd_analyze(c, file, tests, max_ell, emit, d5, oracle);
    if (cl->parsed()) return cmd_closure(c, file);
    if (ar->parsed()) return cmd_arity(c, file);
    if (rl->parsed()) return cmd_rell(c, file, ell, method);
    if (t5->parsed()) return cmd_test5(c, file, omega, d, exact2, exact3, max_ell);
    if (vf->parsed()) return cmd_verify(c, file);
    if (co->parsed()) return cmd_corpus(c, dir, tests, max_ell, jobs, oracle);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
