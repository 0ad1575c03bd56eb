#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chor/harness.hpp"
#include "chor/semantics.hpp"
#include "oracle.hpp"

#include <random>

using namespace chor;
using oracle::make;

namespace {

EventStructure sem(const char* text) { return interpret_raw(parse(text)).es(); }

std::vector<std::vector<EventId>> as_lists(const std::vector<Configuration>& cs) {
  std::vector<std::vector<EventId>> out;
  for (const auto& c : cs) out.push_back(c.events());
  return out;
}

// Random valid structure: a random DAG over random labels with a few
// conflicts, closed by the oracle.
EventStructure random_es(std::mt19937_64& rng, std::size_t n) {
  const char* labels[] = {"AB!m", "AB?m", "BA!n", "BC?m", "CA!m", "CA?n"};
  std::vector<std::string> ls;
  std::vector<EventPair> causes, conflicts;
  for (std::size_t i = 0; i < n; ++i) ls.push_back(labels[rng() % 6]);
  for (EventId i = 0; i < n; ++i)
    for (EventId j = i + 1; j < n; ++j) {
      if (rng() % 4 == 0) causes.push_back({i, j});
      else if (rng() % 7 == 0) conflicts.push_back({i, j});
    }
  // Conflict between causally related events would make an event conflict
  // with itself after closure; drop those.
  auto raw = make(ls, causes, {});
  std::vector<EventPair> safe;
  for (auto [a, b] : conflicts)
    if (!raw.precedes(a, b)) safe.push_back({a, b});
  EventStructure es = make(ls, causes, safe);
  for (EventId e = 0; e < es.size(); ++e)
    if (es.in_conflict(e, e)) return make(ls, causes, {});
  return es;
}

std::vector<EventStructure> small_semantics() {
  GenParams p;
  p.max_leaves = 2;
  p.participants = {{"A"}, {"B"}, {"C"}};
  p.messages = {{"m"}};
  std::vector<EventStructure> out;
  enumerate(p, [&](const GChor& g) {
    SemResult r = interpret_raw(g);
    if (r) out.push_back(r.es());
  });
  return out;
}

}  // namespace

TEST_CASE("validate") {
  CHECK(validate(EventStructure{}).empty());
  CHECK(validate(make({"AB!m", "AB?m"}, {{0, 1}}, {})).empty());

  std::vector<Label> ls = {oracle::lab("AB!m"), oracle::lab("AB?m"), oracle::lab("BC!n")};
  std::vector<EventPair> causes = {{1, 2}};
  std::vector<EventPair> conflicts = {{0, 1}};
  EventStructure gap(ls, causes, conflicts);
  auto v = validate(gap);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == Violation{ViolationKind::HereditaryGap, 0, 2});

  std::vector<EventPair> cycle = {{0, 1}, {1, 0}};
  auto vc = validate(EventStructure(ls, cycle, {}));
  CHECK(std::count_if(vc.begin(), vc.end(), [](auto& x) { return x.kind == ViolationKind::CausalCycle; }) == 2);

  std::vector<EventPair> self = {{2, 2}};
  auto vs = validate(EventStructure(ls, {}, self));
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].kind == ViolationKind::ReflexiveConflict);

  std::vector<Label> bad = {Label{{"A"}, {"A"}, Polarity::Output, {"m"}}};
  CHECK(validate(EventStructure(bad, {}, {})).front().kind == ViolationKind::InvalidLabel);

  std::vector<EventPair> out_of_range = {{0, 7}};
  CHECK_THROWS_AS(EventStructure(ls, out_of_range, {}), std::out_of_range);
}

TEST_CASE("projection of the running example") {
  EventStructure es = oracle::running_example();
  CHECK(validate(es).empty());
  EventStructure on_c = make({"CS!md", "CS!req", "SC?stats", "SC?done"}, {{1, 2}, {2, 3}}, {{0, 1}});
  EventStructure on_s = make({"CS?md", "CS?req", "SC!stats", "SC!done"}, {{1, 2}, {2, 3}}, {{0, 1}});
  CHECK(oracle::isomorphic(project(es, {"C"}), on_c));
  CHECK(oracle::isomorphic(project(es, {"S"}), on_s));
  CHECK(project(EventStructure{}, {"A"}).empty());
  CHECK(project(es, {"B"}).empty());
}

TEST_CASE("projection keeps exactly the events of the subject") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    EventStructure es = random_es(rng, 1 + rng() % 8);
    for (const char* p : {"A", "B", "C"}) {
      EventStructure pr = project(es, {p});
      CHECK(validate(pr).empty());
      std::size_t expected = 0;
      for (const auto& l : es.labels()) expected += subject(l) == Participant{p};
      CHECK(pr.size() == expected);
      for (const auto& l : pr.labels()) CHECK(subject(l) == Participant{p});
    }
  }
}

TEST_CASE("tensor") {
  EventStructure ab = sem("A -> B : m");
  EventStructure cd = sem("C -> D : n");
  CHECK(oracle::isomorphic(tensor(EventStructure{}, ab), ab));
  EventStructure t = tensor(ab, cd);
  CHECK(t.size() == 4);
  CHECK(t.conflict_pairs().empty());
  CHECK(oracle::isomorphic(t, make({"AB!m", "AB?m", "CD!n", "CD?n"}, {{0, 1}, {2, 3}}, {})));
  CHECK(es_isomorphic(tensor(ab, cd), tensor(cd, ab)));
  CHECK(as_lists(max_configurations(t)) == std::vector<std::vector<EventId>>{{0, 1, 2, 3}});
}

TEST_CASE("sum") {
  EventStructure ab = sem("A -> B : m");
  EventStructure s = sum(ab, ab);
  CHECK(s.size() == 4);
  for (EventId e : {0u, 1u})
    for (EventId f : {2u, 3u}) CHECK(s.in_conflict(e, f));
  CHECK_FALSE(s.in_conflict(0, 1));
  CHECK(oracle::isomorphic(s, oracle::sum(ab, ab)));

  const EventStructure one[] = {ab};
  CHECK(oracle::isomorphic(sum(std::span<const EventStructure>(one)), ab));
  CHECK_THROWS_AS(sum(std::span<const EventStructure>()), std::invalid_argument);

  EventStructure running = sum(sem("C -> S : md"), sem("C -> S : req ; (S -> C : stats ; S -> C : done)"));
  CHECK(oracle::isomorphic(running, oracle::running_example()));
}

TEST_CASE("sum matches the definition on random operands") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    EventStructure a = random_es(rng, rng() % 5), b = random_es(rng, rng() % 5);
    EventStructure s = sum(a, b);
    CHECK(validate(s).empty());
    CHECK(s.size() == a.size() + b.size());
    CHECK(es_isomorphic(s, oracle::sum(a, b)));
    for (EventId e = 0; e < a.size(); ++e)
      for (EventId f = 0; f < b.size(); ++f) CHECK(s.in_conflict(e, static_cast<EventId>(a.size() + f)));
  }
}

TEST_CASE("minimal and maximal events") {
  CHECK(minimals(EventStructure{}).none());
  EventStructure es = oracle::running_example();
  CHECK(labels_of(es, minimals(es)) == LabelSet{oracle::lab("CS!md"), oracle::lab("CS!req")});
  CHECK(labels_of(es, maximals(es)) == LabelSet{oracle::lab("CS?md"), oracle::lab("SC?done")});
  EventStructure chain = sem("A -> B : m");
  CHECK(labels_of(chain, maximals(chain)) == LabelSet{oracle::lab("AB?m")});
}

TEST_CASE("maximal configurations") {
  auto eps = max_configurations(EventStructure{});
  REQUIRE(eps.size() == 1);
  CHECK(eps[0].size() == 0);

  EventStructure es = oracle::running_example();
  auto cs = max_configurations(es);
  CHECK(as_lists(cs) == oracle::max_configs(es));
  REQUIRE(cs.size() == 2);
  std::vector<std::size_t> sizes = {cs[0].size(), cs[1].size()};
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{2, 6});

  EventStructure wide = sem("(A->B:m + A->B:n) | (C->D:m + C->D:n) | (E->F:m + E->F:n)");
  CHECK(max_configurations(wide).size() == 8);
  CHECK_THROWS_AS(max_configurations(wide, 7), ConfigExplosion);
}

TEST_CASE("maximal configurations agree with subset enumeration") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    EventStructure es = random_es(rng, rng() % 11);
    auto cs = max_configurations(es);
    CHECK(as_lists(cs) == oracle::max_configs(es));
    for (const auto& c : cs) CHECK(is_configuration(es, c.items));
  }
}

TEST_CASE("sequential composition") {
  EventStructure e;
  EventStructure b = sem("A -> B : m ; B -> C : n");
  CHECK(es_isomorphic(seq_compose(e, b), b));
  CHECK(es_isomorphic(seq_compose(b, e), b));

  EventStructure right = seq_compose(sem("C -> S : req"), sem("S -> C : stats ; S -> C : done"));
  EventStructure drawn = make({"CS!req", "CS?req", "SC!stats", "SC?stats", "SC!done", "SC?done"},
                              {{0, 1}, {1, 2}, {2, 3}, {2, 4}, {4, 5}, {3, 5}}, {});
  CHECK(oracle::isomorphic(right, drawn));

  EventStructure two = seq_compose(sem("A -> B : m + A -> B : n"), sem("A -> B : k"));
  CHECK(two.size() == 8);
  CHECK(es_isomorphic(two, oracle::seq(sem("A -> B : m + A -> B : n"), sem("A -> B : k"), true)));
  auto cs = max_configurations(two);
  REQUIRE(cs.size() == 2);
  for (const auto& c : cs) {
    CHECK(c.size() == 4);
    LabelSet ls = labels_of(two, c.items);
    CHECK(ls.contains(oracle::lab("AB!k")));
    CHECK(ls.contains(oracle::lab("AB?k")));
  }
}

TEST_CASE("sequential composition matches the definition") {
  auto pool = small_semantics();
  std::size_t compared = 0;
  for (std::size_t i = 0; i < pool.size(); i += 3)
    for (std::size_t j = 0; j < pool.size(); j += 5) {
      EventStructure s = seq_compose(pool[i], pool[j]);
      CHECK(validate(s).empty());
      CHECK(s.size() == pool[i].size() + max_configurations(pool[i]).size() * pool[j].size());
      CHECK(es_isomorphic(s, oracle::seq(pool[i], pool[j], true)));
      CHECK(es_isomorphic(seq_compose(pool[i], pool[j], kDefaultConfigCap, SeqConflicts::HereditaryOnly),
                          oracle::seq(pool[i], pool[j], false)));
      ++compared;
    }
  CHECK(compared > 100);
}

TEST_CASE("hereditary-only conflicts leave a branch ending with an output") {
  EventStructure a = sem("A -> B : m + A -> B : n");
  EventStructure b = sem("C -> A : k");
  EventStructure loose = seq_compose(a, b, kDefaultConfigCap, SeqConflicts::HereditaryOnly);
  bool output_ends_branch = false;
  for (const auto& c : max_configurations(loose))
    for (const auto& l : labels_of(loose, maximals_of(loose, c.items))) output_ends_branch |= l.is_output();
  CHECK(output_ends_branch);

  EventStructure confined = seq_compose(a, b);
  for (const auto& c : max_configurations(confined))
    for (const auto& l : labels_of(confined, maximals_of(confined, c.items))) CHECK(l.is_input());
}

TEST_CASE("closure of the algebra") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 150; ++i) {
    EventStructure a = random_es(rng, rng() % 6), b = random_es(rng, rng() % 5);
    CHECK(validate(tensor(a, b)).empty());
    CHECK(validate(sum(a, b)).empty());
    EventStructure s = seq_compose(a, b);
    CHECK(validate(s).empty());
    CHECK(s.size() == a.size() + max_configurations(a).size() * b.size());
    CHECK(validate(project(s, {"A"})).empty());
  }
}

TEST_CASE("well-forkedness") {
  CHECK_FALSE(well_forked(sem("A -> B : m ; B -> C : m"), sem("A -> B : m ; B -> D : n")));
  CHECK(well_forked(sem("A -> B : m"), sem("C -> D : n")));
  CHECK(well_forked(EventStructure{}, sem("A -> B : m")));
}

TEST_CASE("well-branchedness") {
  BranchVerdict ok = well_branched(sem("C -> S : md"), sem("C -> S : req ; (S -> C : stats ; S -> C : done)"));
  CHECK(ok.ok);
  CHECK(*ok.selector == Participant{"C"});

  BranchVerdict err = well_branched(sem("C -> B : md ; B -> S : md"), sem("C -> S : req ; S -> C : done"));
  CHECK_FALSE(err.ok);
  CHECK(err.failure == BranchFailure::DeterminedChoiceEmptiness);
  CHECK(*err.witness == Participant{"B"});
  CHECK(err.reason.find("determined choice fails for participant B") == 0);

  BranchVerdict two = well_branched(sem("A -> C : m ; B -> C : m"), sem("A -> C : n ; B -> C : n"));
  CHECK_FALSE(two.ok);
  CHECK(two.failure == BranchFailure::UniqueSelector);
  CHECK(*two.witness == Participant{"B"});

  BranchVerdict same = well_branched(sem("A -> B : m"), sem("A -> B : m"));
  CHECK_FALSE(same.ok);
  CHECK(same.failure == BranchFailure::DeterminedChoiceLabels);

  BranchVerdict mixed = well_branched(sem("A -> B : m"), sem("B -> A : n"));
  CHECK_FALSE(mixed.ok);
  CHECK(mixed.failure == BranchFailure::UniqueSelector);
}

TEST_CASE("selector is unique") {
  auto pool = small_semantics();
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) {
      BranchVerdict v = well_branched(pool[i], pool[j]);
      BranchVerdict w = well_branched(pool[j], pool[i]);
      CHECK(v.ok == w.ok);
      if (!v.ok) continue;
      CHECK(v.selector == w.selector);
      EventStructure s = sum(pool[i], pool[j]);
      for (const auto& p : subjects(s)) {
        EventSet own(s.size());
        for (EventId e = 0; e < s.size(); ++e)
          if (subject(s.label(e)) == p) own.set(e);
        for (const auto& l : labels_of(s, minimals_of(s, own)))
          CHECK(l.is_output() == (p == *v.selector));
      }
    }
}

TEST_CASE("isomorphism") {
  EventStructure a = oracle::running_example();
  CHECK(es_isomorphic(a, a));
  CHECK_FALSE(es_isomorphic(sem("A -> B : m"), sem("A -> B : n")));
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    EventStructure x = random_es(rng, rng() % 7), y = random_es(rng, rng() % 7);
    CHECK(es_isomorphic(x, y) == oracle::isomorphic(x, y));
    CHECK(es_isomorphic(x, canonicalize(x)));
  }
}

TEST_CASE("canonical form") {
  CHECK(canonicalize(EventStructure{}).empty());
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    EventStructure x = random_es(rng, rng() % 9);
    EventStructure c = canonicalize(x);
    CHECK(canonicalize(c) == c);
    CHECK(oracle::isomorphic(x, c));
  }
  // Different numberings of the same structure.
  EventStructure p = make({"AB?m", "AB!m", "CD!n", "CD?n"}, {{1, 0}, {2, 3}}, {});
  EventStructure q = make({"CD!n", "CD?n", "AB!m", "AB?m"}, {{0, 1}, {2, 3}}, {});
  CHECK(canonicalize(p) == canonicalize(q));
}
