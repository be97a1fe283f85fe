// convex: load / chat / eval / serve front end for the conversational QA engine.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "convex.hpp"
#include "convex/service_http.hpp"

namespace {

using namespace convex;

struct Inputs {
  std::string kg;
  std::string labels;
  std::string vectors;
  std::string stopwords;
};

struct Flags {
  unsigned r = FrontierHyperparams{}.r;
  unsigned k = FrontierHyperparams{}.k;
  double hf1 = FrontierHyperparams{}.h1;
  double hf2 = FrontierHyperparams{}.h2;
  double hf3 = FrontierHyperparams{}.h3;
  double ha1 = AnswerHyperparams{}.h1a;
  unsigned cutoff = kDefaultDistanceCutoff;
  std::string mode = "oracle";
  std::string turn_weights = "normalized";
};

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

struct Loaded {
  KnowledgeGraph g;
  WordVectorTable emb;
};

Loaded load_inputs(const Inputs& in, bool need_vectors) {
  Loaded out;
  std::unordered_map<std::string, std::string> labels;
  if (!in.labels.empty()) {
    auto f = open_file(in.labels);
    labels = load_labels(f);
  }
  if (in.kg.empty()) throw Error("--kg is required");
  {
    auto f = open_file(in.kg);
    out.g = load_graph(f, std::move(labels));
  }
  if (!in.vectors.empty()) {
    auto f = open_file(in.vectors);
    out.emb = load_vectors(f);
  } else if (need_vectors) {
    throw Error("--vectors is required");
  }
  if (!in.stopwords.empty()) {
    auto f = open_file(in.stopwords);
    out.emb.set_stopwords(load_stopwords(f));
  }
  return out;
}

SessionConfig make_config(const Flags& f) {
  SessionConfig cfg;
  cfg.frontier_hp.r = f.r;
  cfg.frontier_hp.k = f.k;
  cfg.frontier_hp.h1 = f.hf1;
  cfg.frontier_hp.h2 = f.hf2;
  cfg.frontier_hp.h3 = f.hf3;
  cfg.answer_hp.h1a = f.ha1;
  cfg.answer_hp.h2a = 1.0 - f.ha1;
  cfg.distance_cutoff = f.cutoff;
  if (f.mode == "oracle") cfg.first_turn_mode = FirstTurnMode::Oracle;
  else if (f.mode == "naive") cfg.first_turn_mode = FirstTurnMode::Naive;
  else throw Error("--mode must be oracle or naive");
  if (f.turn_weights == "normalized") cfg.turn_weight_mode = TurnWeightMode::Normalized;
  else if (f.turn_weights == "literal") cfg.turn_weight_mode = TurnWeightMode::Literal;
  else throw Error("--turn-weights must be normalized or literal");
  cfg.validate();
  return cfg;
}

std::vector<NodeId> parse_refs(const KnowledgeGraph& g, const std::string& list) {
  std::vector<NodeId> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto ids = resolve_term(g, item);
    if (ids.empty()) throw Error("unknown node '" + item + "'");
    out.insert(out.end(), ids.begin(), ids.end());
  }
  return out;
}

std::string describe(const KnowledgeGraph& g, NodeId n) {
  const KgNode& nd = g.node(n);
  std::string s = nd.label;
  if (nd.external_id) s += " (" + *nd.external_id + ")";
  else if (nd.predicate_name) s += " [" + *nd.predicate_name + " #" + std::to_string(n) + "]";
  return s;
}

void print_turn(const KnowledgeGraph& g, const TurnRecord& r, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "turn %u: %zu candidates, context %zu nodes / %zu facts, %.2f ms\n",
                r.turn, r.candidates, r.context_nodes, r.context_facts, r.elapsed_ms);
  out << buf;
  for (const FrontierScore& f : r.frontiers) {
    std::snprintf(buf, sizeof buf, "  frontier %-40s match %.3f prox %.3f prior %.3f = %.4f\n",
                  describe(g, f.node).c_str(), f.match, f.prox, f.prior, f.combined);
    out << buf;
  }
  for (std::size_t i = 0; i < r.answers.entries.size() && i < 5; ++i) {
    const RankedAnswer& a = r.answers.entries[i];
    std::snprintf(buf, sizeof buf, "  %zu. %-40s %.4f (frontier %.4f, context %.4f)%s\n", a.rank,
                  describe(g, a.node).c_str(), a.score, a.frontier_term, a.context_term,
                  std::find(r.answers.top_group.begin(), r.answers.top_group.end(), a.node) !=
                          r.answers.top_group.end()
                      ? " *"
                      : "");
    out << buf;
  }
  for (const std::string& n : r.answers.notes) out << "  note: " << n << "\n";
}

int cmd_load(const Inputs& in) {
  Loaded l = load_inputs(in, false);
  auto issues = check_invariants(l.g);
  std::cout << "nodes: " << l.g.num_nodes() << ", facts: " << l.g.num_facts()
            << ", edges: " << l.g.num_edges();
  if (!in.vectors.empty()) std::cout << ", vocabulary: " << l.emb.size() << " (dim " << l.emb.dim() << ")";
  std::cout << ", invariants: " << (issues.empty() ? "OK" : "VIOLATED") << "\n";
  for (const auto& i : issues) std::cout << "  " << i << "\n";
  return issues.empty() ? 0 : 1;
}

void print_candidates(const KnowledgeGraph& g, const Session& s, std::size_t n, std::ostream& out) {
  if (!s.last_selection() || n == 0) return;
  std::vector<FrontierScore> c = s.last_selection()->candidates;
  std::sort(c.begin(), c.end(), [](const FrontierScore& a, const FrontierScore& b) {
    return ranks_before(a.combined, a.node, b.combined, b.node);
  });
  char buf[256];
  for (std::size_t i = 0; i < c.size() && i < n; ++i) {
    std::snprintf(buf, sizeof buf, "    cand %-40s match %.3f prox %.3f prior %.3f = %.4f\n",
                  describe(g, c[i].node).c_str(), c[i].match, c[i].prox, c[i].prior, c[i].combined);
    out << buf;
  }
}

int cmd_chat(const Inputs& in, const Flags& flags, const std::string& q0_flag,
             const std::string& oracle_entities, const std::string& oracle_answers,
             std::size_t show_candidates) {
  Loaded l = load_inputs(in, true);
  const SessionConfig cfg = make_config(flags);
  auto linker = std::make_shared<const EntityLinker>(l.g);
  std::optional<OracleInputs> oracle;
  if (!oracle_entities.empty() || !oracle_answers.empty()) {
    oracle = OracleInputs{parse_refs(l.g, oracle_entities), parse_refs(l.g, oracle_answers)};
  }
  std::optional<Session> session;
  std::string pending_q0 = q0_flag;

  auto begin = [&](const std::string& q0) {
    session.emplace(l.g, l.emb, cfg, linker);
    print_turn(l.g, session->start(q0, oracle), std::cout);
  };
  if (!pending_q0.empty()) begin(pending_q0);

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    try {
      if (line == ":reset") {
        session.reset();
        std::cout << "session reset; next line is the first question\n";
        continue;
      }
      if (line.rfind(":oracle", 0) == 0) {
        std::istringstream ss(line.substr(7));
        std::string ents, ans;
        ss >> ents >> ans;
        oracle = OracleInputs{parse_refs(l.g, ents), parse_refs(l.g, ans)};
        session.reset();
        std::cout << "oracle inputs set; next line is the first question\n";
        continue;
      }
      if (line == ":dump") {
        if (!session) throw Error("no active session");
        std::cout << context_snapshot_json(*session).dump(2) << "\n";
        continue;
      }
      if (!session) {
        begin(line);
      } else {
        print_turn(l.g, session->ask(line), std::cout);
        print_candidates(l.g, *session, show_candidates, std::cout);
      }
    } catch (const std::exception& e) {
      std::cout << "error: " << e.what() << "\n";
    }
  }
  return 0;
}

struct EvalFlags {
  std::string benchmark;
  std::vector<std::string> strategies{"convex"};
  std::string json_out;
  bool paraphrases = false;
  std::optional<double> min_p1, min_mrr, min_hit5;
};

int cmd_eval(const Inputs& in, const Flags& flags, const EvalFlags& ef) {
  Loaded l = load_inputs(in, true);
  EvalConfig cfg;
  cfg.session = make_config(flags);
  cfg.expand_paraphrases = ef.paraphrases;
  auto f = open_file(ef.benchmark);
  const auto bench = load_benchmark(f);
  auto linker = std::make_shared<const EntityLinker>(l.g);

  std::vector<std::string> names = ef.strategies;
  if (names.size() == 1 && names[0] == "all") names = strategy_names();
  json docs = json::array();
  bool ok = true;
  for (const std::string& name : names) {
    EvalReport rep = evaluate(l.g, l.emb, name, bench, cfg, linker);
    std::cout << report_text(rep) << "\n";
    docs.push_back(report_json(rep));
    if (ef.min_p1 && rep.overall.mean_p1() < *ef.min_p1) ok = false;
    if (ef.min_mrr && rep.overall.mean_mrr() < *ef.min_mrr) ok = false;
    if (ef.min_hit5 && rep.overall.mean_hit5() < *ef.min_hit5) ok = false;
  }
  if (!ef.json_out.empty()) {
    std::ofstream out(ef.json_out);
    out << (docs.size() == 1 ? docs[0] : docs).dump(2) << "\n";
  }
  if (!ok) std::cerr << "acceptance threshold violated\n";
  return ok ? 0 : 2;
}

int cmd_serve(const Inputs& in, const Flags& flags, int port, const std::string& host, int ttl_minutes) {
  Loaded l = load_inputs(in, true);
  SessionService service(l.g, l.emb, make_config(flags), std::chrono::minutes(ttl_minutes));
  httplib::Server server;
  bind_routes(server, service);
  std::cout << "listening on " << host << ":" << port << " (" << l.g.num_nodes() << " nodes, "
            << l.g.num_facts() << " facts)" << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conversational question answering over a knowledge graph"};
  app.require_subcommand(1);
  app.fallthrough();

  Inputs in;
  Flags flags;
  app.add_option("--kg", in.kg, "Triples file")->envname("CONVEX_KG");
  app.add_option("--labels", in.labels, "Labels file")->envname("CONVEX_LABELS");
  app.add_option("--vectors", in.vectors, "Word vectors (text format)")->envname("CONVEX_VECTORS");
  app.add_option("--stopwords", in.stopwords, "Stopword list, one per line")->envname("CONVEX_STOPWORDS");
  app.add_option("--r", flags.r, "Frontiers per turn")->envname("CONVEX_R");
  app.add_option("--k", flags.k, "Candidate radius in edges")->envname("CONVEX_K");
  app.add_option("--hf1", flags.hf1, "Frontier weight: question match")->envname("CONVEX_HF1");
  app.add_option("--hf2", flags.hf2, "Frontier weight: context proximity")->envname("CONVEX_HF2");
  app.add_option("--hf3", flags.hf3, "Frontier weight: KG prior")->envname("CONVEX_HF3");
  app.add_option("--ha1", flags.ha1, "Answer weight on frontier proximity (context gets 1 - ha1)")
      ->envname("CONVEX_HA1");
  app.add_option("--cutoff", flags.cutoff, "Distance cutoff in edges")->envname("CONVEX_CUTOFF");
  app.add_option("--mode", flags.mode, "First turn: oracle or naive")
      ->check(CLI::IsMember({"oracle", "naive"}))
      ->envname("CONVEX_MODE");
  app.add_option("--turn-weights", flags.turn_weights, "normalized or literal")
      ->check(CLI::IsMember({"normalized", "literal"}))
      ->envname("CONVEX_TURN_WEIGHTS");

  auto* load = app.add_subcommand("load", "Validate inputs and print counts");

  auto* chat = app.add_subcommand("chat", "Interactive conversation on stdin");
  std::string q0, oracle_entities, oracle_answers;
  chat->add_option("--q0", q0, "First question (otherwise the first input line)");
  chat->add_option("--oracle-entities", oracle_entities, "Comma-separated first-turn entities");
  chat->add_option("--oracle-answers", oracle_answers, "Comma-separated first-turn answers");
  std::size_t show_candidates = 0;
  chat->add_option("--show-candidates", show_candidates, "List the N best frontier candidates per turn");

  auto* eval = app.add_subcommand("eval", "Run a benchmark and report metrics");
  EvalFlags ef;
  eval->add_option("benchmark", ef.benchmark, "Benchmark JSON file")->required();
  eval->add_option("--strategy", ef.strategies, "convex, star, chain, no_frontier or all")->delimiter(',');
  eval->add_option("--json", ef.json_out, "Write the machine-readable report here");
  eval->add_flag("--paraphrases", ef.paraphrases, "Expand every paraphrase combination");
  eval->add_option("--min-p1", ef.min_p1, "Fail unless overall P@1 reaches this");
  eval->add_option("--min-mrr", ef.min_mrr, "Fail unless overall MRR reaches this");
  eval->add_option("--min-hit5", ef.min_hit5, "Fail unless overall Hit@5 reaches this");

  auto* serve = app.add_subcommand("serve", "HTTP session service");
  int port = 8080;
  std::string host = "127.0.0.1";
  int ttl = 30;
  serve->add_option("--port", port, "Listen port")->envname("CONVEX_PORT");
  serve->add_option("--host", host, "Listen address")->envname("CONVEX_HOST");
  serve->add_option("--ttl-minutes", ttl, "Idle session lifetime")->envname("CONVEX_TTL_MINUTES");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*load) return cmd_load(in);
    if (*chat) return cmd_chat(in, flags, q0, oracle_entities, oracle_answers, show_candidates);
    if (*eval) return cmd_eval(in, flags, ef);
    if (*serve) return cmd_serve(in, flags, port, host, ttl);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
