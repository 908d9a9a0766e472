#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tlg/backward.hpp"
#include "tlg/contraction.hpp"
#include "tlg/formula.hpp"
#include "tlg/frame.hpp"
#include "tlg/generate.hpp"
#include "tlg/kernels.hpp"
#include "tlg/label.hpp"
#include "tlg/net.hpp"
#include "tlg/term.hpp"

namespace {

constexpr int kExitProof = 0;
constexpr int kExitNoProof = 1;
constexpr int kExitInputError = 2;
constexpr int kExitScorerError = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

tlg::Lexicon load_lexicon(const std::string& path, const std::string& goal) {
  tlg::Lexicon lex = tlg::lexicon_from_json(slurp(path));
  if (!goal.empty())
    lex = tlg::Lexicon(lex.entries, tlg::parse_formula(goal));
  return lex;
}

tlg::Regime load_regime(const std::string& path) {
  if (path.empty()) return tlg::Regime();
  return tlg::Regime::from_json(slurp(path));
}

std::vector<std::string> word_labels(const tlg::Lexicon& lex) {
  std::vector<std::string> out;
  for (const auto& [w, f] : lex.entries) out.push_back(w);
  return out;
}

std::unique_ptr<tlg::Scorer> make_scorer(const std::string& name,
                                         const std::string& gold_path,
                                         unsigned seed,
                                         std::optional<tlg::ProofNet>* gold_out) {
  if (name == "oracle") {
    if (gold_path.empty())
      throw std::runtime_error("the oracle scorer needs --gold");
    tlg::ProofNet gold = tlg::net_from_json(slurp(gold_path));
    if (gold_out) *gold_out = gold;
    return std::make_unique<tlg::OracleScorer>(gold);
  }
  if (name == "uniform") return std::make_unique<tlg::UniformScorer>();
  if (name == "random") return std::make_unique<tlg::RandomScorer>(seed);
  return std::make_unique<tlg::ExternalScorer>(name);
}

nlohmann::json matching_json(const tlg::Matching& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [neg, pos] : m.pairs)
    arr.push_back({{"neg", neg}, {"pos", pos}});
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof net toolkit for type-logical grammars"};
  app.require_subcommand(1);

  std::string lexicon_path, regime_path, goal_override, format = "json";
  std::string net_path, labels_path, scorer_name = "oracle", gold_path;
  std::string predicted_path, gold_actions_path, output_path;
  int beam = 1, max_par = -1, words = 0;
  double threshold = 0.5;
  unsigned seed = 0;
  bool count_only = false, yield_check = false, parallel = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "json|dot|term|tsv");
    cmd->add_option("--seed", seed, "seed for randomized components");
  };

  auto* cmd_unfold = app.add_subcommand("unfold", "unfold a lexicon into a proof frame");
  cmd_unfold->add_option("--lexicon", lexicon_path)->required();
  cmd_unfold->add_option("--goal", goal_override, "override the lexicon goal");
  add_common(cmd_unfold);

  auto* cmd_match = app.add_subcommand("match", "enumerate atom matchings");
  cmd_match->add_option("--lexicon", lexicon_path)->required();
  cmd_match->add_option("--goal", goal_override);
  cmd_match->add_flag("--count-only", count_only, "print the count, skip enumeration");
  add_common(cmd_match);

  auto* cmd_prove = app.add_subcommand("prove", "search for proof nets");
  cmd_prove->add_option("--lexicon", lexicon_path)->required();
  cmd_prove->add_option("--regime", regime_path);
  cmd_prove->add_option("--goal", goal_override);
  cmd_prove->add_flag("--yield-check", yield_check,
                      "keep only nets whose tree rewrites to sentence order");
  cmd_prove->add_flag("--parallel", parallel, "use the parallel matching filter");
  add_common(cmd_prove);

  auto* cmd_generate = app.add_subcommand("generate", "forward-chaining generation");
  cmd_generate->add_option("--words", words, "number of words");
  cmd_generate->add_option("--scorer", scorer_name, "oracle|uniform|random|<command>");
  cmd_generate->add_option("--gold", gold_path, "gold net JSON for the oracle");
  cmd_generate->add_option("--beam", beam, "beam width");
  cmd_generate->add_option("--threshold", threshold, "stop threshold");
  add_common(cmd_generate);

  auto* cmd_backward = app.add_subcommand("backward", "backward-chaining enumeration");
  cmd_backward->add_option("--words", words)->required();
  cmd_backward->add_option("--max-par", max_par, "budget of implication-right steps");
  add_common(cmd_backward);

  bool emit_gold = false;
  auto* cmd_label = app.add_subcommand("label", "principal typing and labelling");
  cmd_label->add_option("--net", net_path)->required();
  cmd_label->add_option("--labels", labels_path, "labelling JSON to directionalize");
  cmd_label->add_flag("--emit-gold", emit_gold,
                      "also read the gold labelling off the directional net");
  add_common(cmd_label);

  auto* cmd_compare = app.add_subcommand("compare", "action-set F-score");
  cmd_compare->add_option("--predicted", predicted_path)->required();
  cmd_compare->add_option("--gold", gold_actions_path)->required();
  cmd_compare->add_option("--words", words)->required();
  add_common(cmd_compare);

  auto* cmd_export = app.add_subcommand("export", "convert a net file");
  cmd_export->add_option("--net", net_path)->required();
  cmd_export->add_option("--lexicon", lexicon_path, "word labels for dot output");
  add_common(cmd_export);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_unfold->parsed()) {
      tlg::Lexicon lex = load_lexicon(lexicon_path, goal_override);
      tlg::ProofNet frame = tlg::unfold(lex);
      if (format == "dot") {
        auto labels = word_labels(lex);
        std::cout << tlg::net_to_dot(frame, &labels);
      } else {
        std::cout << tlg::net_to_json(frame) << "\n";
      }
      return kExitProof;
    }

    if (cmd_match->parsed()) {
      tlg::Lexicon lex = load_lexicon(lexicon_path, goal_override);
      tlg::ProofNet frame = tlg::unfold(lex);
      tlg::MatchingEnumerator en(frame);
      nlohmann::json j;
      j["balanced"] = en.balanced();
      if (!en.balanced()) j["diagnostic"] = en.diagnostic();
      j["count"] = en.count();
      if (!count_only && en.balanced()) {
        j["matchings"] = nlohmann::json::array();
        tlg::Matching m;
        while (en.next(m)) j["matchings"].push_back(matching_json(m));
      }
      std::cout << j.dump() << "\n";
      return en.balanced() ? kExitProof : kExitNoProof;
    }

    if (cmd_prove->parsed()) {
      tlg::Lexicon lex = load_lexicon(lexicon_path, goal_override);
      tlg::ProofNet frame = tlg::unfold(lex);
      auto counts = tlg::count_check(lex);
      if (!tlg::counts_balanced(counts)) {
        nlohmann::json j;
        j["error"] = "count check failed";
        for (const auto& [name, c] : counts)
          j["counts"][name] = {c.negatives, c.positives};
        std::cerr << j.dump() << "\n";
        return kExitInputError;
      }
      tlg::ProveOptions opts;
      opts.regime = load_regime(regime_path);
      opts.check_yield = yield_check;
      opts.n_words = static_cast<int>(lex.size());
      auto proofs = parallel ? tlg::prove_filter_parallel(frame, opts)
                             : tlg::prove_filter_serial(frame, opts);
      nlohmann::json j;
      j["proofs"] = nlohmann::json::array();
      for (const auto& p : proofs) {
        nlohmann::json pj;
        pj["matching_index"] = p.matching_index;
        pj["matching"] = matching_json(p.matching);
        pj["net"] = nlohmann::json::parse(tlg::net_to_json(p.structure));
        tlg::ProofNet sem = tlg::to_semantic(p.structure);
        pj["term"] = tlg::extract_term(sem).str();
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& s : p.witness)
          steps.push_back({{"path", s.word},
                           {"class", tlg::path_class_str(s.cls)},
                           {"mode", s.par_mode}});
        pj["witness"] = steps;
        if (p.yield_tree)
          pj["yield"] = tlg::tree_yield(*p.yield_tree);
        j["proofs"].push_back(pj);
      }
      if (format == "term") {
        for (const auto& p : proofs)
          std::cout << tlg::extract_term(tlg::to_semantic(p.structure)).str()
                    << "\n";
      } else if (format == "dot") {
        auto labels = word_labels(lex);
        for (const auto& p : proofs)
          std::cout << tlg::net_to_dot(p.structure, &labels);
      } else if (format == "tsv") {
        for (const auto& p : proofs)
          std::cout << p.matching_index << "\t"
                    << tlg::extract_term(tlg::to_semantic(p.structure)).str()
                    << "\n";
      } else {
        std::cout << j.dump() << "\n";
      }
      return proofs.empty() ? kExitNoProof : kExitProof;
    }

    if (cmd_generate->parsed()) {
      std::optional<tlg::ProofNet> gold;
      std::unique_ptr<tlg::Scorer> scorer;
      try {
        scorer = make_scorer(scorer_name, gold_path, seed, &gold);
      } catch (const tlg::ScorerError& e) {
        std::cerr << "scorer error: " << e.what() << "\n" << e.transcript << "\n";
        return kExitScorerError;
      }
      int n = words;
      if (n == 0 && gold) {
        for (const auto& v : gold->vertices())
          if (v.origin.word) n = std::max(n, *v.origin.word + 1);
      }
      if (n <= 0) throw std::runtime_error("--words (or --gold) required");
      tlg::BeamOptions opts;
      opts.k = beam;
      opts.threshold = threshold;
      std::vector<tlg::BeamResult> results;
      try {
        results = tlg::beam_search(n, *scorer, opts);
      } catch (const tlg::ScorerError& e) {
        std::cerr << "scorer error: " << e.what() << "\n" << e.transcript << "\n";
        return kExitScorerError;
      }
      nlohmann::json j;
      j["results"] = nlohmann::json::array();
      for (const auto& r : results) {
        nlohmann::json rj;
        rj["score"] = r.score;
        rj["net"] = nlohmann::json::parse(tlg::net_to_json(r.state.net));
        rj["term"] = tlg::extract_term(r.state.net).str();
        rj["actions"] =
            nlohmann::json::parse(tlg::actions_to_json(r.actions))["actions"];
        rj["weights"] = r.weights;
        if (gold) {
          auto gold_actions = tlg::canonical_sequence(*gold);
          auto gold_final = tlg::replay(n, gold_actions);
          auto f = tlg::action_fscore(
              tlg::canonical_action_strings(r.state, r.actions),
              tlg::canonical_action_strings(gold_final, gold_actions));
          rj["f1"] = f.f1;
        }
        j["results"].push_back(rj);
      }
      std::cout << j.dump() << "\n";
      return results.empty() ? kExitNoProof : kExitProof;
    }

    if (cmd_backward->parsed()) {
      int budget = max_par >= 0 ? max_par : words;
      auto nets = tlg::bw_enumerate(words, budget);
      nlohmann::json j;
      j["results"] = nlohmann::json::array();
      for (const auto& [key, net] : nets) {
        nlohmann::json rj;
        rj["net"] = nlohmann::json::parse(tlg::net_to_json(net));
        rj["term"] = tlg::extract_term(net).str();
        j["results"].push_back(rj);
      }
      std::cout << j.dump() << "\n";
      return nets.empty() ? kExitNoProof : kExitProof;
    }

    if (cmd_label->parsed()) {
      tlg::ProofNet net = tlg::net_from_json(slurp(net_path));
      tlg::ProofNet sem = tlg::to_semantic(net);
      tlg::TypeVarTyping typing = tlg::principal_typing(sem);
      tlg::LabelSlots slots = tlg::label_slots(sem);
      nlohmann::json j;
      j["typing"] = nlohmann::json::parse(tlg::typing_to_json(typing));
      j["atom_slots"] = slots.atom_slots;
      j["connective_slots"] = slots.connective_slots;
      if (!labels_path.empty()) {
        tlg::Labelling labelling = tlg::labelling_from_json(slurp(labels_path));
        tlg::Lexicon lex = tlg::directionalize(typing, labelling);
        j["lexicon"] = nlohmann::json::parse(tlg::lexicon_to_json(lex));
      }
      std::cout << j.dump() << "\n";
      return kExitProof;
    }

    if (cmd_compare->parsed()) {
      auto predicted = tlg::actions_from_json(slurp(predicted_path));
      auto gold_actions = tlg::actions_from_json(slurp(gold_actions_path));
      auto pf = tlg::replay(words, predicted);
      auto gf = tlg::replay(words, gold_actions);
      auto f = tlg::action_fscore(tlg::canonical_action_strings(pf, predicted),
                                  tlg::canonical_action_strings(gf, gold_actions));
      nlohmann::json j;
      j["precision"] = f.precision;
      j["recall"] = f.recall;
      j["f1"] = f.f1;
      std::cout << j.dump() << "\n";
      return kExitProof;
    }

    if (cmd_export->parsed()) {
      tlg::ProofNet net = tlg::net_from_json(slurp(net_path));
      if (format == "dot") {
        std::optional<std::vector<std::string>> labels;
        if (!lexicon_path.empty())
          labels = word_labels(load_lexicon(lexicon_path, ""));
        std::cout << tlg::net_to_dot(net, labels ? &*labels : nullptr);
      } else {
        std::cout << tlg::net_to_json(net) << "\n";
      }
      return kExitProof;
    }
  } catch (const tlg::ScorerError& e) {
    std::cerr << "scorer error: " << e.what() << "\n" << e.transcript << "\n";
    return kExitScorerError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
