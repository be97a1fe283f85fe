#pragma once

// Shared fixtures for the unit tests and the acceptance binary.

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "convex.hpp"

namespace convex::testing {

inline std::string data_path(const std::string& name) {
  return std::string(CONVEX_TEST_DATA) + "/" + name;
}

inline std::ifstream open_data(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw Error("missing test data " + name);
  return in;
}

struct Fixture {
  KnowledgeGraph g;
  WordVectorTable emb;
  std::vector<BenchmarkConversation> benchmark;
};

// The Last Unicorn mini-KG with its vectors and benchmark, loaded once.
inline const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    auto kg = open_data("last_unicorn.tsv");
    auto labels = open_data("labels.tsv");
    out.g = load_graph(kg, labels);
    auto vec = open_data("vectors.txt");
    out.emb = load_vectors(vec);
    auto bench = open_data("benchmark.json");
    out.benchmark = load_benchmark(bench);
    return out;
  }();
  return f;
}

inline NodeId ext(const KnowledgeGraph& g, const std::string& id) {
  auto n = g.find_external(id);
  if (!n) throw Error("fixture has no node " + id);
  return *n;
}

inline KnowledgeGraph graph_from(const std::string& triples, const std::string& labels = "") {
  std::istringstream t(triples), l(labels);
  return load_graph(t, l);
}

inline const std::string kRunningQ0 = "Which actor voiced the Unicorn in The Last Unicorn?";
inline const std::vector<std::string> kRunningFollowUps = {
    "And Alan Arkin was behind ...?",    "Who did the score?", "So who performed the songs?",
    "Genre of this band's music?", "By the way, who was the director?"};
// Expected top answers per follow-up, as external ids.
inline const std::vector<std::vector<std::string>> kRunningAnswers = {
    {"Q5"}, {"Q14"}, {"Q16"}, {"Q17", "Q18"}, {"Q12"}};

inline OracleInputs running_oracle(const KnowledgeGraph& g) {
  return {{ext(g, "Q1"), ext(g, "Q2")}, {ext(g, "Q3")}};
}

// Random graph over `entities` entities with labels drawn from `words`.
// Objects are entities, or now and then a literal; some facts carry a
// qualifier.
inline KnowledgeGraph random_graph(std::mt19937_64& rng, std::size_t entities, std::size_t facts,
                                   std::size_t predicate_names, const std::vector<std::string>& words,
                                   double qualifier_prob = 0.2) {
  std::uniform_int_distribution<std::size_t> ent(1, entities);
  std::uniform_int_distribution<std::size_t> pred(1, predicate_names);
  std::uniform_int_distribution<std::size_t> word(0, words.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::unordered_map<std::string, std::string> labels;
  for (std::size_t i = 1; i <= entities; ++i) {
    labels["Q" + std::to_string(i)] = words[word(rng)] + " " + words[word(rng)];
  }
  for (std::size_t p = 1; p <= predicate_names; ++p) labels["P" + std::to_string(p)] = words[word(rng)];
  GraphBuilder b;
  b.set_labels(std::move(labels));
  for (std::size_t i = 0; i < facts; ++i) {
    const std::string s = "Q" + std::to_string(ent(rng));
    const std::string o = u(rng) < 0.1 ? "\"" + words[word(rng)] + "\"" : "Q" + std::to_string(ent(rng));
    const FactId f = b.add_fact(s, "P" + std::to_string(pred(rng)), o);
    if (u(rng) < qualifier_prob) b.add_qualifier(f, "P" + std::to_string(pred(rng)), "Q" + std::to_string(ent(rng)));
  }
  return std::move(b).build();
}

inline std::vector<std::string> word_list(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

inline WordVectorTable random_vectors(std::mt19937_64& rng, const std::vector<std::string>& words,
                                      std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  WordVectorTable t(dim);
  for (const auto& w : words) {
    Vector v(dim);
    for (double& x : v) x = n(rng);
    t.add(w, std::move(v));
  }
  return t;
}

// Fewest facts linking `a` to any of `targets` (two nodes are one hop apart
// when some fact mentions both), or nullopt beyond `limit`.
inline std::optional<unsigned> fact_hops(const KnowledgeGraph& g, NodeId a, const GoldNodes& targets,
                                         unsigned limit = 6) {
  std::set<NodeId> seen{a};
  std::vector<NodeId> level{a};
  for (unsigned d = 0; d <= limit && !level.empty(); ++d) {
    std::vector<NodeId> next;
    for (NodeId u : level) {
      if (targets.count(u)) return d;
      for (FactId f : g.facts_of(u)) {
        const Fact& fact = g.fact(f);
        std::vector<NodeId> members{fact.subject, fact.object};
        for (const Qualifier& q : fact.qualifiers) members.push_back(q.value);
        for (NodeId m : members) {
          if (seen.insert(m).second) next.push_back(m);
        }
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

struct SyntheticKg {
  KnowledgeGraph g;
  WordVectorTable emb;
  std::vector<std::string> words;
};

// 10^5-fact scale benchmark graph: entity degrees follow a Zipf-like law,
// labels and predicate names come from a shared vocabulary.
inline SyntheticKg synthetic_kg(std::size_t facts, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  SyntheticKg out;
  out.words = word_list(2000);
  const std::size_t entities = facts / 5;
  const std::size_t predicates = 60;
  std::vector<double> weights(entities);
  for (std::size_t i = 0; i < entities; ++i) weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), 0.6);
  std::discrete_distribution<std::size_t> ent(weights.begin(), weights.end());
  std::uniform_int_distribution<std::size_t> pred(1, predicates);
  std::uniform_int_distribution<std::size_t> word(0, out.words.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::unordered_map<std::string, std::string> labels;
  for (std::size_t i = 1; i <= entities; ++i) {
    labels["Q" + std::to_string(i)] = out.words[word(rng)] + " " + out.words[word(rng)];
  }
  for (std::size_t p = 1; p <= predicates; ++p) labels["P" + std::to_string(p)] = out.words[word(rng)];
  GraphBuilder b;
  b.set_labels(std::move(labels));
  for (std::size_t i = 0; i < facts; ++i) {
    const std::string s = "Q" + std::to_string(ent(rng) + 1);
    const std::string o = u(rng) < 0.1 ? "\"" + std::to_string(1900 + i % 120) + "\""
                                       : "Q" + std::to_string(ent(rng) + 1);
    const FactId f = b.add_fact(s, "P" + std::to_string(pred(rng)), o);
    if (u(rng) < 0.15) b.add_qualifier(f, "P" + std::to_string(pred(rng)), "Q" + std::to_string(ent(rng) + 1));
  }
  out.g = std::move(b).build();
  out.emb = random_vectors(rng, out.words, 50);
  return out;
}

}  // namespace convex::testing
