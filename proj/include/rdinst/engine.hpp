#pragma once

#include "rdinst/backend.hpp"
#include "rdinst/frontend.hpp"
#include "rdinst/model.hpp"
#include "rdinst/ordering.hpp"
#include "rdinst/reldom.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace rdinst {

struct EngineConfig {
  BackendConfig backend;
  unsigned max_iterations = 1000;
  std::chrono::milliseconds wall_clock{600'000};
  unsigned preferred_fraction = 3;
  bool trace = false;
  /// Trace lines are also written here as they are produced.
  std::ostream* trace_sink = nullptr;
};

enum class Verdict { Sat, Unsat, Unknown };
std::string_view verdict_name(Verdict v);

/// How far a variable's restriction has been loosened during one
/// counterexample search: preferred terms, the whole relevant domain, or no
/// restriction at all.
enum class Tier : std::uint8_t { Preferred, Full, Dropped };
enum class Source : std::uint8_t { RelevantDomain, TheoryConstant };
std::string_view tier_name(Tier t);

struct AssignedVar {
  const Symbol* var = nullptr;
  Term term;
  Rational value;
  Source source = Source::RelevantDomain;
  Tier tier = Tier::Preferred;
};
using Assignment = std::vector<AssignedVar>;

struct CexOutcome {
  enum class Kind { None, Found, Unknown };
  Kind kind = Kind::None;
  Assignment assignment;
  std::string reason;
  unsigned checks = 0;
  unsigned widen_to_full = 0;
  unsigned widen_to_dropped = 0;
};

struct EngineStats {
  unsigned iterations = 0;
  unsigned instances_added = 0;
  unsigned duplicate_instances = 0;
  unsigned main_checks = 0;
  unsigned scratch_checks = 0;
  unsigned widen_to_full = 0;
  unsigned widen_to_dropped = 0;
  unsigned theory_constant_picks = 0;
  unsigned relevant_domain_picks = 0;
  unsigned max_scratch_checks_per_unit = 0;
  unsigned scratch_bound_violations = 0;
  unsigned invalid_counterexamples = 0;
  double wall_ms = 0;

  /// JSON object; `include_wall` controls the wall-clock field.
  std::string to_json(bool include_wall = true) const;
};

struct SolveResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::optional<Model> model;
  EngineStats stats;
  std::vector<std::string> trace;
  /// Every instance added to the ground part, in order.
  std::vector<Term> instances;
};

/// First term of `domain` (already in preference order) whose value under
/// `m` is `value`; null when none matches.
Term select_term(const Rational& value, std::span<const Term> domain, const Model& m);

/// Model-based instantiation loop over a normalized problem. Each iteration
/// rebuilds term statistics and relevant domains, finds a model of the
/// ground part, and for every unit looks for a counterexample drawn from the
/// relevant domains before falling back to backend-chosen numerals.
class Engine {
 public:
  Engine(TermManager& tm, Problem problem, EngineConfig config);
  ~Engine();

  SolveResult solve();

  /// Adds a ground conjunct; subterms seen for the first time are stamped
  /// with `birth`. Returns false for a conjunct already present.
  bool add_ground(Term t, unsigned birth);

  const Problem& problem() const { return problem_; }
  const std::vector<Term>& ground() const { return ground_; }
  const BirthMap& births() const { return birth_; }
  StatsTable current_stats() const;
  RelevantDomains current_domains(const StatsTable& stats) const;

  /// Counterexample search for one unit whose negated model instance is
  /// `negated`. At most 2*|vars|+1 checks are issued on `scratch`, and its
  /// assertion stack is restored on every path.
  CexOutcome find_counterexample(SolverSession& scratch, const QuantifiedUnit& unit, const Model& m, Term negated,
                                 const RelevantDomains& rd);

 private:
  void emit(const std::string& line);
  SolverSession& scratch();

  TermManager& tm_;
  Problem problem_;
  EngineConfig config_;
  std::vector<Term> ground_;
  std::unordered_set<Term> ground_set_;
  BirthMap birth_;
  std::vector<const Symbol*> symbols_;
  std::unique_ptr<SolverSession> scratch_;
  std::vector<std::string> trace_;
  unsigned iteration_ = 0;
  unsigned clause_seq_ = 0;
};

}  // namespace rdinst
