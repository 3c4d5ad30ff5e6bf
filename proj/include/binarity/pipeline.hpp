#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "binarity/io.hpp"
#include "binarity/reductions.hpp"

namespace binarity {

struct AnalyzeOptions {
  std::vector<int> tests{1, 2, 3, 4};
  std::size_t ell_max = 6;
  Limits limits;
  /// Test 5 runs when d is set; the point stabilizer and |Ω| come from the action.
  std::optional<std::uint64_t> test5_d;
  bool oracle = false;
};

struct TestReport {
  std::string action_id;
  std::size_t degree = 0;
  BigInt order = 0;
  std::vector<TestOutcome> outcomes;
  std::optional<Test5Result> test5;
  std::string verdict = "Inconclusive";
  std::optional<ArityResult> oracle;
  std::vector<std::pair<std::string, double>> timings;
  bool budget_hit = false;
};

namespace detail {

inline bool outcome_supports_nonbinary(const TestOutcome& t) {
  if (t.status != Status::NonBinary) return false;
  if (t.certificate) return verify_witness(*t.certificate).ok;
  return t.evidence.has_value();
}

}  // namespace detail

/// Runs the requested tests in order (Tests 1, 2, 3 act on the realized
/// group, Test 4 on the suborbits of point 0, Test 5 on the point stabilizer
/// and |Ω|) and derives the overall verdict.
inline TestReport analyze(const ActionSpace& A, std::string action_id, const AnalyzeOptions& opt) {
  using clock = std::chrono::steady_clock;
  TestReport rep;
  rep.action_id = std::move(action_id);
  const PermGroup& G = A.group();
  rep.degree = G.degree();
  rep.order = G.order();
  BatteryOptions bo;
  bo.ell_max = opt.ell_max;
  bo.limits = opt.limits;

  auto timed = [&](const std::string& label, auto&& fn) {
    const auto t0 = clock::now();
    fn();
    rep.timings.emplace_back(label, std::chrono::duration<double>(clock::now() - t0).count());
  };

  for (int t : opt.tests) {
    timed("test " + std::to_string(t), [&] {
      TestOutcome out;
      try {
        if (t == 4) {
          out = suborbit_reduction(G, 0, bo);
        } else if (t >= 1 && t <= 3) {
          out = run_direct_test(t, G, bo);
        } else {
          throw InvalidInput("unknown test " + std::to_string(t));
        }
      } catch (const BudgetExceeded& e) {
        out.test = t;
        out.status = Status::Skipped;
        out.budget_hit = true;
        out.detail = e.what();
      }
      rep.outcomes.push_back(std::move(out));
    });
  }

  if (opt.test5_d) {
    timed("test 5", [&] {
      Test5Result r;
      if (!G.is_transitive() || !is_primitive(G)) {
        r.status = Status::Skipped;
        r.detail = "action is not primitive";
      } else {
        PermGroup M = A.kind() == ActionSpace::Kind::Cosets ? *A.subgroup() : G.point_stabilizer(0);
        Test5Config cfg{M, A.index(), *opt.test5_d, true, true, bo};
        r = test5_alot(cfg);
      }
      rep.test5 = std::move(r);
    });
  }

  bool nonbinary = false, likely_binary = false;
  for (const auto& t : rep.outcomes) {
    nonbinary = nonbinary || detail::outcome_supports_nonbinary(t);
    likely_binary = likely_binary || (t.test == 3 && t.pairs_determine_triples);
    rep.budget_hit = rep.budget_hit || t.budget_hit;
  }
  if (rep.test5) {
    nonbinary = nonbinary || rep.test5->status == Status::NonBinary;
    rep.budget_hit = rep.budget_hit || rep.test5->budget_hit;
  }
  rep.verdict = nonbinary ? "NonBinary" : likely_binary ? "Inconclusive-likely-binary" : "Inconclusive";

  if (opt.oracle) {
    timed("oracle", [&] {
      try {
        rep.oracle = exact_arity(G, opt.limits.tuple_budget);
      } catch (const std::exception& e) {
        rep.oracle = ArityResult{false, 2, 0, e.what()};
      }
    });
  }
  return rep;
}

inline TestReport analyze(const PermGroup& G, const AnalyzeOptions& opt) {
  return analyze(ActionSpace::explicit_action(G), G.name(), opt);
}

inline std::string render_text(const TestReport& r, bool timings = false) {
  std::ostringstream os;
  os << "action: " << r.action_id << " (degree " << r.degree << ", order " << r.order << ")\n";
  for (const auto& t : r.outcomes) {
    os << "test " << t.test << ": " << to_string(t.status);
    if (!t.detail.empty()) os << " - " << t.detail;
    os << '\n';
    if (t.certificate) {
      os << "  witness I = (";
      for (std::size_t k = 0; k < t.certificate->I.size(); ++k) os << (k ? "," : "") << t.certificate->I[k];
      os << ") J = (";
      for (std::size_t k = 0; k < t.certificate->J.size(); ++k) os << (k ? "," : "") << t.certificate->J[k];
      os << ")\n";
    }
  }
  if (r.test5) {
    os << "test 5: " << to_string(r.test5->status) << " - " << r.test5->detail << '\n';
    for (const auto& a : r.test5->actions) os << "  degree " << a.degree << ": " << a.detail << '\n';
  }
  os << "verdict: " << r.verdict << '\n';
  if (r.oracle) {
    os << "oracle: arity " << (r.oracle->exact ? "" : ">= ") << r.oracle->value;
    if (!r.oracle->note.empty()) os << " (" << r.oracle->note << ")";
    os << '\n';
  }
  if (timings) {
    for (const auto& [label, secs] : r.timings) os << "time " << label << ": " << secs << "s\n";
  }
  return os.str();
}

inline io::json test5_to_json(const Test5Result& r) {
  io::json j{{"status", to_string(r.status)}, {"detail", r.detail}};
  j["actions"] = io::json::array();
  for (const auto& a : r.actions) {
    io::json x{{"degree", to_string(a.degree)},
               {"stabilizer_order", to_string(a.stabilizer_order)},
               {"kernel_order", to_string(a.kernel_order)},
               {"condition2", a.condition2},
               {"condition3", a.condition3},
               {"survives", a.survives},
               {"verdict", to_string(a.verdict)},
               {"detail", a.detail}};
    j["actions"].push_back(std::move(x));
  }
  return j;
}

inline io::json report_to_json(const TestReport& r, bool timings = false) {
  io::json j{{"action", r.action_id}, {"degree", r.degree}, {"order", to_string(r.order)}, {"verdict", r.verdict}};
  j["tests"] = io::json::array();
  for (const auto& t : r.outcomes) j["tests"].push_back(io::outcome_to_json(t));
  if (r.test5) j["test5"] = test5_to_json(*r.test5);
  if (r.oracle) j["oracle"] = {{"arity", r.oracle->value}, {"exact", r.oracle->exact}, {"note", r.oracle->note}};
  if (r.budget_hit) j["budget_hit"] = true;
  if (timings) {
    io::json t = io::json::object();
    for (const auto& [label, secs] : r.timings) t[label] = secs;
    j["timings"] = std::move(t);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Corpus

struct CorpusRow {
  std::string file;
  std::optional<TestReport> report;
  std::string error;
};

/// Every *.json under `dir`, sorted by path.
inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InvalidInput(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Analyzes every group file under `dir` with up to `jobs` workers. Rows come
/// back in file order; a file that fails to load or analyze becomes an error row.
inline std::vector<CorpusRow> corpus_run(const std::filesystem::path& dir, const AnalyzeOptions& opt,
                                         unsigned jobs = 1, bool one_based = false) {
  const auto files = corpus_files(dir);
  std::vector<CorpusRow> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < files.size();) {
      rows[i].file = std::filesystem::relative(files[i], dir).generic_string();
      try {
        auto f = io::read_group_file(files[i], one_based);
        auto A = io::load_action(f, opt.limits);
        rows[i].report = analyze(A, f.name, opt);
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

inline std::string render_corpus_table(const std::vector<CorpusRow>& rows) {
  std::ostringstream os;
  os << "file\tdegree\torder\tverdict\toracle\n";
  for (const auto& r : rows) {
    if (!r.report) {
      os << r.file << "\t-\t-\terror: " << r.error << "\t-\n";
      continue;
    }
    const auto& t = *r.report;
    os << r.file << '\t' << t.degree << '\t' << t.order << '\t' << t.verdict << '\t';
    if (t.oracle) {
      os << (t.oracle->exact ? "" : ">=") << t.oracle->value;
    } else {
      os << '-';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace binarity
