#include "rdinst/ordering.hpp"

#include <algorithm>
#include <limits>

namespace rdinst {

namespace {
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}
}  // namespace

const TermStats* StatsTable::find(Term t) const {
  auto it = stats_.find(t);
  return it == stats_.end() ? nullptr : &it->second;
}

TermStats StatsTable::get(Term t) const {
  if (const TermStats* s = find(t)) return *s;
  return TermStats{0, t.depth(), std::numeric_limits<unsigned>::max()};
}

const std::string& StatsTable::text(Term t) const {
  auto it = text_.find(t);
  if (it == text_.end()) it = text_.emplace(t, print_smtlib(t)).first;
  return it->second;
}

StatsTable compute_stats(std::span<const Term> ground, std::span<const QuantifiedUnit> units, const BirthMap& birth) {
  std::vector<Term> roots(ground.begin(), ground.end());
  for (const QuantifiedUnit& u : units) roots.push_back(u.body);

  // Children come before parents in `order`; walking it backwards pushes each
  // node's tree multiplicity down to its children.
  std::vector<Term> order;
  for_each_subterm(roots, [&](Term t) { order.push_back(t); });
  std::unordered_map<Term, std::uint64_t> mult;
  for (const Term& r : roots) mult[r] = sat_add(mult[r], 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::uint64_t m = mult[*it];
    for (const Term& c : it->children()) mult[c] = sat_add(mult[c], m);
  }

  StatsTable table;
  for (const Term& t : order) {
    if (!t.is_ground()) continue;
    TermStats s;
    s.occurrences = mult[t];
    s.depth = t.depth();
    auto b = birth.find(t);
    s.birth = b == birth.end() ? 0 : b->second;
    table.set(t, s);
  }
  return table;
}

int compare_terms(Term a, Term b, const StatsTable& stats) {
  if (a == b) return 0;
  const TermStats sa = stats.get(a), sb = stats.get(b);
  if (sa.occurrences != sb.occurrences) return sa.occurrences > sb.occurrences ? -1 : 1;
  if (sa.depth != sb.depth) return sa.depth < sb.depth ? -1 : 1;
  if (sa.birth != sb.birth) return sa.birth < sb.birth ? -1 : 1;
  const int c = stats.text(a).compare(stats.text(b));
  if (c != 0) return c < 0 ? -1 : 1;
  // Distinct terms with identical text differ only in sort (e.g. an Int and a
  // Real variable of the same name); fall back to creation order.
  return a.id() < b.id() ? -1 : 1;
}

void sort_by_preference(std::vector<Term>& terms, const StatsTable& stats) {
  std::sort(terms.begin(), terms.end(), [&](Term a, Term b) { return compare_terms(a, b, stats) < 0; });
}

std::size_t preferred_count(std::size_t n, unsigned fraction) {
  if (n == 0) return 0;
  if (fraction == 0) fraction = 1;
  return std::max<std::size_t>(1, (n + fraction - 1) / fraction);
}

std::vector<Term> preferred(std::span<const Term> ordered, unsigned fraction) {
  return {ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(preferred_count(ordered.size(), fraction))};
}

}  // namespace rdinst
