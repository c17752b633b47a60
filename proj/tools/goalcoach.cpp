// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

// goalcoach command line: corpus preparation, training, evaluation, replay,
// an interactive session and the HTTP service.

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "goalcoach/backends/artifact.hpp"
#include "goalcoach/backends/registry.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/corpus/augment.hpp"
#include "goalcoach/corpus/empathy.hpp"
#include "goalcoach/corpus/import.hpp"
#include "goalcoach/corpus/toy.hpp"
#include "goalcoach/eval/harness.hpp"
#include "goalcoach/service/server.hpp"
#include "goalcoach/train/train.hpp"

using namespace goalcoach;
namespace fs = std::filesystem;

namespace {

BackendSet backends_from(const std::string& manifest) {
  if (manifest.empty() || manifest == "rule") return rule_backends();
  return load_backends(manifest);
}

SessionConfig session_config_from(const std::string& path) {
  if (path.empty()) return SessionConfig{};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read session config " + path);
  return SessionConfig::from_json(Json::parse(in));
}

void write_json(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_transcripts(const std::vector<TranscriptSession>& ts, const std::string& path) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw ConfigError("cannot write " + path);
    out = &file;
  }
  for (const auto& t : ts) {
    for (const auto& e : t.events) *out << e.dump() << '\n';
  }
}

std::vector<TranscriptSession> read_transcript_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read transcript " + path);
  return read_transcript(in);
}

CoachService* g_service = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goalcoach: health-coaching dialogue engine"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error")->capture_default_str();

  // ---- corpus ------------------------------------------------------------
  auto* corpus = app.add_subcommand("corpus", "Corpus preparation");
  corpus->require_subcommand(1);

  std::string d1, d2, import_out;
  auto* imp = corpus->add_subcommand("import", "Import released datasets into the canonical format");
  imp->add_option("--dataset1", d1, "Dataset 1 directory")->required();
  imp->add_option("--dataset2", d2, "Dataset 2 directory")->required();
  imp->add_option("--out", import_out, "Output corpus directory")->required();

  std::string toy_out;
  ToyConfig toy;
  auto* toy_cmd = corpus->add_subcommand("toy", "Generate the synthetic toy corpus");
  toy_cmd->add_option("--out", toy_out, "Output corpus directory")->required();
  toy_cmd->add_option("--weeks", toy.weeks)->capture_default_str();
  toy_cmd->add_option("--seed", toy.seed)->capture_default_str();

  std::string aug_corpus, aug_recipe, aug_out, aug_paraphraser;
  std::uint64_t aug_seed = 13;
  bool aug_harvest = false;
  auto* aug = corpus->add_subcommand("augment", "Slot-value substitution and paraphrase augmentation");
  aug->add_option("--corpus", aug_corpus, "Corpus directory")->required();
  aug->add_option("--recipe", aug_recipe, "Augmentation recipe JSON");
  aug->add_flag("--harvest", aug_harvest, "Use the values observed in the training split as alternatives");
  aug->add_option("--paraphraser", aug_paraphraser, "Paraphraser artifact directory");
  aug->add_option("--seed", aug_seed)->capture_default_str();
  aug->add_option("--out", aug_out, "Output JSONL of variants")->required();

  std::string ed_dir, epi_dir, emp_out, labeler_src = "rule";
  auto* emp = corpus->add_subcommand("empathy", "Silver-label an empathetic dialogue corpus");
  emp->add_option("--ed", ed_dir, "EmpatheticDialogues directory")->required();
  emp->add_option("--epitome", epi_dir, "EPITOME directory");
  emp->add_option("--labeler", labeler_src, "'rule' or a mechanism labeler artifact")->capture_default_str();
  emp->add_option("--out", emp_out, "Output silver JSONL")->required();

  std::string stats_corpus;
  auto* stats = corpus->add_subcommand("stats", "Print corpus and split sizes");
  stats->add_option("--corpus", stats_corpus)->required();

  // ---- train ---------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train one backend kind into an artifact directory");
  std::string kind_name, train_corpus, train_recipe, train_out, train_silver, train_few, train_epi, train_text,
      train_pairs, train_augment;
  bool train_harvest = false;
  train->add_option("kind", kind_name, "Backend kind")->required();
  train->add_option("--corpus", train_corpus, "Corpus directory");
  train->add_option("--recipe", train_recipe, "Recipe JSON (default: published hyperparameters)");
  train->add_option("--out", train_out, "Artifact directory")->required();
  train->add_option("--silver", train_silver, "Silver empathy JSONL");
  train->add_option("--few-shot", train_few, "Few-shot empathy JSONL");
  train->add_option("--epitome", train_epi, "EPITOME directory");
  train->add_option("--sentences", train_text, "Plain-text sentences, one per line");
  train->add_option("--pairs", train_pairs, "Paraphrase pairs JSONL {source, target}");
  train->add_option("--augment", train_augment, "Augmentation recipe JSON (slot tagger)");
  train->add_flag("--harvest", train_harvest, "Augment with values harvested from the training split");

  // ---- eval ----------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Evaluation harness");
  eval->require_subcommand(1);
  std::string sys, gold, report, lm_art, scorer_art;
  auto* run = eval->add_subcommand("run", "Score system transcripts against a gold corpus");
  run->add_option("--system", sys, "System transcript JSONL")->required();
  run->add_option("--gold", gold, "Gold corpus")->required();
  run->add_option("--report", report, "Report JSON path ('-' for stdout)")->capture_default_str();
  run->add_option("--lm", lm_art, "LM scorer artifact for perplexity");
  run->add_option("--scorer", scorer_art, "Empathy regressor artifact");
  std::string comp_corpus, comp_backends, comp_report;
  std::string comp_split = "test";
  auto* comp = eval->add_subcommand("components", "Tagger, carryover, stage and goal-tracking metrics");
  comp->add_option("--corpus", comp_corpus)->required();
  comp->add_option("--backends", comp_backends, "Backend manifest (default: rule)");
  comp->add_option("--split", comp_split, "train|dev|test|all")->capture_default_str();
  comp->add_option("--report", comp_report)->capture_default_str();
  std::string sim_corpus, sim_backends, sim_out, sim_config;
  auto* sim = eval->add_subcommand("simulate", "Run sessions over gold weeks and export transcripts");
  sim->add_option("--corpus", sim_corpus)->required();
  sim->add_option("--backends", sim_backends);
  sim->add_option("--config", sim_config, "Session config JSON");
  sim->add_option("--out", sim_out)->required();
  std::string ab_in, ab_out;
  std::uint64_t ab_seed = 43;
  auto* ab = eval->add_subcommand("export-ab", "Blind A/B export from {input, system, baseline} JSONL");
  ab->add_option("--items", ab_in)->required();
  ab->add_option("--out", ab_out)->required();
  ab->add_option("--seed", ab_seed)->capture_default_str();

  // ---- replay / chat / serve ----------------------------------------------
  std::string replay_in, replay_backends, replay_out;
  auto* replay = app.add_subcommand("replay", "Regenerate a transcript and report differences");
  replay->add_option("--transcript", replay_in)->required();
  replay->add_option("--backends", replay_backends);
  replay->add_option("--out", replay_out, "Write the regenerated transcript here");

  std::string chat_backends, chat_config, chat_transcript;
  auto* chat = app.add_subcommand("chat", "Interactive session on stdin (one patient message per line)");
  chat->add_option("--backends", chat_backends);
  chat->add_option("--config", chat_config);
  chat->add_option("--transcript", chat_transcript, "Write the session transcript on exit");

  std::string serve_host = "127.0.0.1", serve_backends, serve_token, serve_config;
  int serve_port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", serve_host)->capture_default_str();
  serve->add_option("--port", serve_port)->capture_default_str();
  serve->add_option("--backends", serve_backends, "Backend manifest (default: rule)");
  serve->add_option("--config", serve_config, "Default session config JSON");
  serve->add_option("--token", serve_token, "Require this shared token");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*imp) {
      ImportStats st;
      const Corpus c = import_release(d1, d2, &st);
      write_corpus(c, import_out);
      std::cout << fmt::format("imported {} utterances, {} spans ({} values not located) into {}\n", st.utterances,
                               st.spans, st.unlocated, import_out);
    } else if (*toy_cmd) {
      const Corpus c = generate_toy_corpus(toy);
      write_corpus(c, toy_out);
      std::cout << fmt::format("wrote {} weeks, {} utterances to {}\n", c.weeks.size(), c.utterance_count(), toy_out);
    } else if (*aug) {
      const Corpus c = load_corpus(aug_corpus);
      const CorpusSplit split = split_corpus(c);
      AugmentationRecipe r;
      if (!aug_recipe.empty()) {
        std::ifstream in(aug_recipe);
        r = AugmentationRecipe::from_json(Json::parse(in));
      }
      if (aug_harvest) {
        for (auto& [slot, values] : harvest_alternatives(split.train)) r.value_alternatives.emplace(slot, values);
      }
      if (!aug_paraphraser.empty()) {
        r.paraphraser = std::dynamic_pointer_cast<const ParaphraserBackend>(load_artifact(aug_paraphraser));
        if (!r.paraphraser) throw ConfigError(aug_paraphraser + " is not a paraphraser artifact");
      }
      std::ofstream out(aug_out);
      std::size_t n = 0;
      for (const auto& v : augment_corpus(split.train, r, aug_seed)) {
        out << utterance_to_json(v).dump() << '\n';
        ++n;
      }
      std::cout << fmt::format("wrote {} variants to {}\n", n, aug_out);
    } else if (*emp) {
      std::shared_ptr<const MultiLabelBackend> labeler;
      if (labeler_src == "rule") {
        labeler = std::dynamic_pointer_cast<const MultiLabelBackend>(make_rule_backend(BackendKind::kMechanismLabeler));
      } else {
        labeler = std::dynamic_pointer_cast<const MultiLabelBackend>(load_artifact(labeler_src));
      }
      if (!labeler) throw ConfigError(labeler_src + " is not a mechanism labeler");
      const EmpathyCorpus ec = build_empathy_corpus(ed_dir, epi_dir, *labeler);
      write_silver(ec.samples, emp_out);
      std::cout << fmt::format("wrote {} silver samples ({} dropped with no mechanism) to {}\n", ec.samples.size(),
                               ec.dropped, emp_out);
    } else if (*stats) {
      const Corpus c = load_corpus(stats_corpus);
      const CorpusSplit s = split_corpus(c);
      auto line = [](const char* name, const Corpus& part) {
        std::cout << fmt::format("{:<6} weeks {:>5}  utterances {:>7}  slot-bearing {:>6}\n", name, part.weeks.size(),
                                 part.utterance_count(), tagger_examples(part).size());
      };
      line("train", s.train);
      line("dev", s.dev);
      line("test", s.test);
    } else if (*train) {
      const auto kind = parse_backend_kind(kind_name);
      if (!kind) throw ConfigError("unknown backend kind '" + kind_name + "'");
      const TrainRecipe recipe = train_recipe.empty() ? default_recipe(*kind) : load_recipe(train_recipe, *kind);
      TrainInputs in;
      std::optional<Corpus> c;
      std::string hash_source;
      if (!train_corpus.empty()) {
        c = load_corpus(train_corpus);
        in.corpus = &*c;
        hash_source = train_corpus;
      }
      if (!train_silver.empty()) {
        in.silver = read_silver(train_silver);
        hash_source = train_silver;
      }
      if (!train_few.empty()) in.few_shot = read_few_shot(train_few);
      if (!train_epi.empty()) {
        in.epitome = read_epitome(train_epi);
        hash_source = train_epi;
      }
      if (!train_text.empty()) {
        std::ifstream f(train_text);
        std::string line;
        while (std::getline(f, line)) {
          if (!trim(line).empty()) in.sentences.push_back(line);
        }
        hash_source = train_text;
      }
      if (!train_pairs.empty()) {
        std::ifstream f(train_pairs);
        std::string line;
        while (std::getline(f, line)) {
          if (trim(line).empty()) continue;
          const Json j = Json::parse(line);
          in.pairs.push_back({j.at("source").get<std::string>(), j.at("target").get<std::string>()});
        }
        hash_source = train_pairs;
      }
      if (!train_augment.empty() || train_harvest) {
        AugmentationRecipe r;
        if (!train_augment.empty()) {
          std::ifstream f(train_augment);
          r = AugmentationRecipe::from_json(Json::parse(f));
        }
        if (train_harvest && c) {
          for (auto& [slot, values] : harvest_alternatives(split_corpus(*c).train)) r.value_alternatives.emplace(slot, values);
        }
        in.augmentation = r;
      }
      const TrainResult res = train_backend(*kind, in, recipe);
      save_artifact(train_out, *res.backend, recipe, hash_source.empty() ? "" : hash_corpus(hash_source), res.metrics);
      std::cout << fmt::format("trained {} -> {}\n{}\n", kind_name, train_out, res.metrics.dump(2));
    } else if (*run) {
      const auto ts = read_transcript_file(sys);
      const Corpus g = load_corpus(gold);
      std::shared_ptr<Backend> lm, scorer;
      GenerationScorers sc;
      if (!lm_art.empty()) {
        lm = load_artifact(lm_art);
        sc.lm = dynamic_cast<const LMBackend*>(lm.get());
      }
      if (!scorer_art.empty()) {
        scorer = load_artifact(scorer_art);
        sc.empathy = dynamic_cast<const RegressorBackend*>(scorer.get());
      }
      write_json(evaluate_transcripts(ts, g, sc).to_json(), report.empty() ? "-" : report);
    } else if (*comp) {
      const Corpus c = load_corpus(comp_corpus);
      const CorpusSplit s = split_corpus(c);
      const Corpus& part = comp_split == "train" ? s.train
                           : comp_split == "dev" ? s.dev
                           : comp_split == "all" ? c
                                                 : s.test;
      EvalReport r = evaluate_components(part, backends_from(comp_backends));
      r.counts["split"] = comp_split;
      write_json(r.to_json(), comp_report.empty() ? "-" : comp_report);
    } else if (*sim) {
      const Corpus c = load_corpus(sim_corpus);
      write_transcripts(simulate_corpus(c, backends_from(sim_backends), session_config_from(sim_config)), sim_out);
    } else if (*ab) {
      std::vector<ABItem> items;
      std::ifstream f(ab_in);
      std::string line;
      while (std::getline(f, line)) {
        if (trim(line).empty()) continue;
        const Json j = Json::parse(line);
        items.push_back({j.at("input").get<std::string>(), j.at("system").get<std::string>(),
                         j.at("baseline").get<std::string>()});
      }
      std::cout << fmt::format("wrote {} items to {}\n", export_ab(items, ab_out, ab_seed), ab_out);
    } else if (*replay) {
      const auto ts = read_transcript_file(replay_in);
      const BackendSet b = backends_from(replay_backends);
      std::ofstream out;
      if (!replay_out.empty()) out.open(replay_out);
      std::size_t diffs = 0;
      for (const auto& t : ts) {
        const auto regenerated = replay_session(t, b);
        for (std::size_t i = 0; i < std::max(regenerated.size(), t.events.size()); ++i) {
          const bool same = i < regenerated.size() && i < t.events.size() && regenerated[i] == t.events[i];
          if (!same) {
            ++diffs;
            std::cerr << fmt::format("session {} event {} differs\n", t.config.week_id, i);
          }
          if (out && i < regenerated.size()) out << regenerated[i].dump() << '\n';
        }
      }
      std::cout << fmt::format("{} sessions replayed, {} differing events\n", ts.size(), diffs);
      return diffs == 0 ? 0 : 1;
    } else if (*chat) {
      Session s(backends_from(chat_backends), session_config_from(chat_config));
      std::cout << "Type patient messages; '/coach <text>' overrides the reply, '/goal' shows the belief, "
                   "'/close' ends the week.\n";
      std::string line;
      while (std::cout << "patient> " << std::flush, std::getline(std::cin, line)) {
        if (trim(line).empty()) continue;
        if (line == "/close") break;
        if (line == "/goal") {
          std::cout << serialize_belief(s.belief()) << "  [" << stage_token(s.stage()) << "]\n";
          continue;
        }
        if (starts_with_ci(line, "/coach ")) {
          s.coach_message(line.substr(7));
          continue;
        }
        const TurnResult r = s.step(line);
        std::cout << "  belief: " << serialize_belief(r.belief) << "\n  stage:  " << stage_token(r.stage) << '\n';
        const auto top = r.emotion.top_k(2);
        std::cout << fmt::format("  emotion: {} {:.3f}, {} {:.3f}  gate {}\n", top[0].first, top[0].second,
                                 top[1].first, top[1].second, r.gate_fired ? "open" : "closed");
        for (const auto& [m, text] : r.empathetic_variants) std::cout << "  " << mechanism_token(m) << ' ' << text << '\n';
        std::cout << "coach> " << r.coach_response << '\n';
      }
      s.close();
      std::cout << "backward goal: " << serialize_belief(s.snapshot_goal(SnapshotPoint::kBackward).belief) << '\n';
      if (!chat_transcript.empty()) {
        std::ofstream out(chat_transcript);
        s.export_transcript(out);
      }
    } else if (*serve) {
      ServiceOptions opts;
      opts.backends["default"] = backends_from(serve_backends);
      opts.backends["rule"] = rule_backends();
      opts.defaults = session_config_from(serve_config);
      if (!serve_token.empty()) opts.token = serve_token;
      CoachService service(std::move(opts));
      g_service = &service;
      std::signal(SIGINT, [](int) {
        if (g_service) g_service->stop();
      });
      std::signal(SIGTERM, [](int) {
        if (g_service) g_service->stop();
      });
      spdlog::info("listening on http://{}:{}", serve_host, serve_port);
      if (!service.listen(serve_host, serve_port)) {
        spdlog::error("could not bind {}:{}", serve_host, serve_port);
        return 1;
      }
    }
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const Json::exception& e) {
    spdlog::error("invalid JSON: {}", e.what());
    return 2;
  }
  return 0;
}
