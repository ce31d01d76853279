/* Copyright 2026 The pbrk Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "pbrk_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pbrk/alignment.hpp"
#include "pbrk/atomic_file.hpp"
#include "pbrk/checkpoint.hpp"
#include "pbrk/config.hpp"
#include "pbrk/corruption.hpp"
#include "pbrk/dataset_io.hpp"
#include "pbrk/error.hpp"
#include "pbrk/evaluate.hpp"
#include "pbrk/rng.hpp"
#include "pbrk/synth.hpp"
#include "pbrk_cli/log.hpp"
#include "pbrk_cli/report.hpp"

namespace pbrk::cli {
namespace {

namespace fs = std::filesystem;

// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;

  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (config_path.empty()) cfg.derive_stage_seeds();
    if (seed) {
      cfg.seed = *seed;
      cfg.derive_stage_seeds();
    }
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON run config")->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "Global seed; overrides the config");
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return in;
}

template <class F>
void write_to(const std::string& path, F&& fill) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  write_file_atomically(path, fill);
}

void write_text(const std::string& path, const std::string& text) {
  write_to(path, [&](std::ostream& o) { o << text; });
}

// The resolved config travels next to every output.
void echo_config(const std::string& output, const RunConfig& cfg) {
  write_text(output + ".config.json", dump_run_config(cfg));
}

Vocabulary load_vocab(const std::string& path) {
  auto in = open_in(path);
  return Vocabulary::read(in, path);
}

std::vector<AlignedUtterance> load_alignment(const std::string& path, const std::string& format) {
  auto in = open_in(path);
  std::string fmt = format;
  if (fmt == "auto") fmt = fs::path(path).extension() == ".tsv" ? "tsv" : "ctm";
  return fmt == "tsv" ? parse_tsv(in, path) : parse_ctm(in, path);
}

std::vector<TokenSequence> load_tokens(const std::string& path) {
  auto in = open_in(path);
  return read_token_sequences(in, path);
}

std::vector<RatedSample> load_rated(const std::string& path, const Vocabulary& vocab) {
  auto in = open_in(path);
  auto data = read_rated_dataset(in, path);
  for (const auto& s : data)
    if (s.seq.vocab_fingerprint != vocab.fingerprint())
      throw InvalidInput(path + ": encoded with vocabulary " + hex64(s.seq.vocab_fingerprint) +
                         ", expected " + hex64(vocab.fingerprint()));
  return data;
}

TaskKind fine_or_overall(const std::string& task) {
  if (task == "overall") return TaskKind::overall;
  if (task == "fine") return TaskKind::finegrained;
  throw InvalidInput("--task must be overall or fine");
}

BackboneSpec backbone_from(const RunConfig& cfg, BackboneKind kind) {
  BackboneSpec spec;
  spec.kind = kind;
  spec.encoder = cfg.encoder;
  spec.bilstm = cfg.bilstm;
  return spec;
}

// ---- subcommands -----------------------------------------------------------

struct IngestArgs {
  Common common;
  std::vector<std::string> inputs;
  std::string format = "auto";
  std::string output;
};

void cmd_ingest(const IngestArgs& a, const Logger& log) {
  const RunConfig cfg = a.common.resolve();
  std::vector<TokenSequence> seqs;
  for (const auto& path : a.inputs) {
    for (const auto& utt : load_alignment(path, a.format)) seqs.push_back(build_sequence(utt));
    log.debug("read " + path);
  }
  write_to(a.output, [&](std::ostream& o) { write_token_sequences(o, seqs); });
  echo_config(a.output, cfg);
  log.info("wrote " + std::to_string(seqs.size()) + " token sequences to " + a.output);
}

struct SynthArgs {
  Common common;
  std::string out_dir;
};

std::string stats_line(const char* name, const CorpusStats& s) {
  std::ostringstream o;
  o << name << ": clips " << s.clips << ", words " << s.words << ", breaks " << s.breaks
    << " (br0..br3 " << s.break_classes[0] << "/" << s.break_classes[1] << "/"
    << s.break_classes[2] << "/" << s.break_classes[3] << ")";
  if (s.overall[0] + s.overall[1] + s.overall[2] > 0)
    o << ", overall P/F/G " << s.overall[0] << "/" << s.overall[1] << "/" << s.overall[2]
      << ", fine P/F/G " << s.fine[0] << "/" << s.fine[1] << "/" << s.fine[2];
  return o.str();
}

void cmd_synth(const SynthArgs& a, std::ostream& out, const Logger& log) {
  const RunConfig cfg = a.common.resolve();
  const auto native = generate_native(cfg.synth);
  const auto esl = generate_esl(cfg.synth, native);
  const auto native_seqs = sequences_of(native);
  const Vocabulary vocab = build_vocab(native_seqs, cfg.vocab_min_count);
  std::vector<TokenSequence> esl_tokens, references;
  for (const auto& e : esl) {
    esl_tokens.push_back(e.tokens);
    references.push_back(e.reference);
  }
  const auto rated = rated_samples(esl, vocab, cfg.finetune.max_len);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  auto at = [&](const char* name) { return (dir / name).string(); };
  write_to(at("native.tokens.jsonl"), [&](std::ostream& o) { write_token_sequences(o, native_seqs); });
  write_to(at("esl.tokens.jsonl"), [&](std::ostream& o) { write_token_sequences(o, esl_tokens); });
  write_to(at("esl.references.jsonl"), [&](std::ostream& o) { write_token_sequences(o, references); });
  write_to(at("esl.truth.jsonl"), [&](std::ostream& o) { write_ground_truth(o, esl); });
  write_to(at("vocab.tsv"), [&](std::ostream& o) { vocab.write(o); });
  write_to(at("esl.rated.jsonl"),
           [&](std::ostream& o) { write_rated_dataset(o, rated, vocab.fingerprint()); });
  write_text(at("config.resolved.json"), dump_run_config(cfg));

  out << stats_line("native", corpus_stats(std::span<const TokenSequence>(native_seqs))) << '\n'
      << stats_line("esl", corpus_stats(std::span<const EslSample>(esl))) << '\n'
      << "vocabulary: " << vocab.size() << " entries, fingerprint " << hex64(vocab.fingerprint())
      << '\n';
  log.info("wrote corpora to " + a.out_dir);
}

struct CorruptArgs {
  Common common;
  std::string tokens, vocab, output;
};

void cmd_corrupt(const CorruptArgs& a, std::ostream& out, const Logger& log) {
  const RunConfig cfg = a.common.resolve();
  const Vocabulary vocab = load_vocab(a.vocab);
  std::vector<EncodedSequence> encoded;
  for (const auto& s : load_tokens(a.tokens))
    encoded.push_back(encode(s, vocab, cfg.pretrain.max_len));
  const auto data = build_pretrain_dataset(encoded, cfg.corruption);
  write_to(a.output,
           [&](std::ostream& o) { write_pretrain_dataset(o, data, vocab.fingerprint()); });
  echo_config(a.output, cfg);
  std::size_t corrupted = 0, edits = 0, breaks = 0;
  for (const auto& d : data) {
    corrupted += d.label == SequenceLabel::corrupted;
    edits += d.edits.size();
    breaks += d.seq.num_breaks();
  }
  out << "pretraining set: " << data.size() << " sequences (" << encoded.size()
      << " originals), " << corrupted << " corrupted, " << edits << " of " << breaks
      << " break tokens replaced\n";
  log.info("wrote " + a.output);
}

struct PretrainArgs {
  Common common;
  std::string data, vocab, output;
};

void cmd_pretrain(const PretrainArgs& a, std::ostream& out, const Logger& log) {
  const RunConfig cfg = a.common.resolve();
  const Vocabulary vocab = load_vocab(a.vocab);
  auto in = open_in(a.data);
  const auto data = read_pretrain_dataset(in, a.data);
  const PretrainResult r =
      pretrain_rbtd(data, vocab, cfg.pretrain, cfg.encoder, [&](std::size_t e, float loss) {
        log.info("epoch " + std::to_string(e) + " mean loss " + std::to_string(loss));
      });
  save_checkpoint(r.checkpoint, a.output);
  echo_config(a.output, cfg);
  out << "replaced break token detection, held-out " << r.heldout_size << " of "
      << r.heldout_size + r.train_size << " sequences\n"
      << format_binary(r.heldout);
  log.info("wrote " + a.output);
}

struct FinetuneArgs {
  Common common;
  std::string task, data, vocab, init, backbone = "transformer", output;
};

void cmd_finetune(const FinetuneArgs& a, std::ostream& out, const Logger& log) {
  const RunConfig cfg = a.common.resolve();
  const TaskKind task = fine_or_overall(a.task);
  std::optional<Checkpoint> source;
  if (!a.init.empty()) source = load_checkpoint(a.init);
  const Vocabulary vocab = source ? source->vocab : load_vocab(a.vocab);
  if (source && !a.vocab.empty() && load_vocab(a.vocab).fingerprint() != vocab.fingerprint())
    throw InvalidInput("--vocab differs from the vocabulary of --init");
  const auto data = load_rated(a.data, vocab);
  const ModelInit init =
      source ? ModelInit::from_checkpoint(*source)
             : ModelInit::fresh(backbone_from(cfg, parse_backbone_kind(a.backbone)), vocab);
  if (source && a.backbone != to_string(source->model.backbone_spec().kind))
    throw InvalidInput("--backbone does not match the --init checkpoint");
  TrainProgress progress;
  auto on_epoch = [&](std::size_t e, float loss) {
    log.info("epoch " + std::to_string(e) + " mean loss " + std::to_string(loss));
  };
  const Checkpoint ckpt = task == TaskKind::overall
                              ? finetune_overall(data, init, cfg.finetune, &progress, on_epoch)
                              : finetune_finegrained(data, init, cfg.finetune, &progress, on_epoch);
  save_checkpoint(ckpt, a.output);
  echo_config(a.output, cfg);
  out << "fine-tuned " << to_string(task) << " model from " << init.origin << ": "
      << progress.steps << " steps, loss " << progress.initial_loss << " -> "
      << (progress.epoch_losses.empty() ? progress.initial_loss : progress.epoch_losses.back())
      << '\n';
  log.info("wrote " + a.output);
}

struct EvalArgs {
  Common common;
  std::string task, data, vocab, model = "transformer", init, references, report_json;
  std::optional<std::size_t> k;
};

void cmd_eval(const EvalArgs& a, std::ostream& out, const Logger& log) {
  const RunConfig cfg = a.common.resolve();
  EvalSpec spec;
  spec.task = fine_or_overall(a.task);
  spec.assessor = parse_assessor(a.model);
  spec.k = a.k.value_or(cfg.eval_folds);
  spec.seed = cfg.eval_seed();
  spec.train = cfg.finetune;

  std::optional<Checkpoint> source;
  if (!a.init.empty()) {
    if (spec.assessor != Assessor::transformer)
      throw InvalidInput("--init only applies to --model transformer");
    source = load_checkpoint(a.init);
    spec.init = &*source;
  }
  const Vocabulary vocab = source ? source->vocab : load_vocab(a.vocab);
  const auto data = load_rated(a.data, vocab);
  spec.backbone = backbone_from(cfg, spec.assessor == Assessor::bilstm ? BackboneKind::bilstm
                                                                       : BackboneKind::transformer);
  ReferenceSet refs;
  if (spec.assessor == Assessor::against_reference) {
    if (a.references.empty()) throw InvalidInput("--model against-ref needs --references");
    for (const auto& r : load_tokens(a.references)) refs.add(r);
    spec.references = &refs;
  }

  const MetricsReport report = evaluate(data, vocab, spec, [&](std::size_t f, const ConfusionMatrix&) {
    log.info("fold " + std::to_string(f + 1) + "/" + std::to_string(spec.k) + " done");
  });
  ReportHeader h{a.task, a.model,
                 spec.assessor == Assessor::against_reference ? "-"
                 : source                                     ? ModelInit::from_checkpoint(*source).origin
                                                              : "scratch",
                 spec.k, cfg.seed, data.size()};
  out << format_report(h, report);
  if (!a.report_json.empty()) {
    write_text(a.report_json, report_json(h, report));
    echo_config(a.report_json, cfg);
    log.info("wrote " + a.report_json);
  }
}

struct ScoreArgs {
  Common common;
  std::string overall, fine, input, format = "auto";
};

void cmd_score(const ScoreArgs& a, std::ostream& out, const Logger& log) {
  if (a.overall.empty() && a.fine.empty())
    throw InvalidInput("score needs --overall and/or --fine checkpoints");
  std::optional<Checkpoint> overall, fine;
  if (!a.overall.empty()) overall = load_checkpoint(a.overall, TaskKind::overall);
  if (!a.fine.empty()) fine = load_checkpoint(a.fine, TaskKind::finegrained);
  if (overall && fine && overall->vocab.fingerprint() != fine->vocab.fingerprint())
    throw InvalidInput("--overall and --fine use different vocabularies");
  const Vocabulary& vocab = overall ? overall->vocab : fine->vocab;
  const std::size_t max_len = overall ? overall->train.max_len : fine->train.max_len;

  for (const auto& utt : load_alignment(a.input, a.format)) {
    const TokenSequence seq = build_sequence(utt);
    const EncodedSequence enc = encode(seq, vocab, max_len);
    out << seq.id();
    if (overall) {
      const OverallPrediction p = predict_overall(*overall, enc);
      char buf[96];
      std::snprintf(buf, sizeof buf, "\toverall=%s (P %.3f F %.3f G %.3f)",
                    std::string(to_string(p.rank)).c_str(), p.probs[0], p.probs[1], p.probs[2]);
      out << buf;
    }
    out << '\n';
    if (fine) {
      const auto ranks = predict_finegrained(*fine, enc);
      const auto& words = seq.words();
      const auto& breaks = seq.breaks();
      for (std::size_t i = 0; i < ranks.size(); ++i)
        out << "  " << words[i] << " " << break_token(breaks[i]) << " " << words[i + 1] << "\t"
            << to_string(ranks[i]) << '\n';
    }
  }
  log.debug("scored " + a.input);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phrase-break assessment: ingest, synthesize, pretrain, fine-tune, evaluate, score"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pbrk 0.1.0");

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Alignment files (CTM/TSV) to token sequences");
  add_common(c_ingest, ingest.common);
  c_ingest->add_option("inputs", ingest.inputs, "Alignment files")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("--format", ingest.format, "ctm, tsv or auto (by extension)")
      ->check(CLI::IsMember({"auto", "ctm", "tsv"}));
  c_ingest->add_option("-o,--output", ingest.output, "Token-sequence JSON Lines")->required();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate the native and learner corpora");
  add_common(c_synth, synth.common);
  c_synth->add_option("-o,--out-dir", synth.out_dir, "Output directory")->required();

  CorruptArgs corrupt;
  auto* c_corrupt = app.add_subcommand("corrupt", "Build the replaced-break pretraining set");
  add_common(c_corrupt, corrupt.common);
  c_corrupt->add_option("--tokens", corrupt.tokens, "Token-sequence JSON Lines")->required()->check(CLI::ExistingFile);
  c_corrupt->add_option("--vocab", corrupt.vocab, "Vocabulary file")->required()->check(CLI::ExistingFile);
  c_corrupt->add_option("-o,--output", corrupt.output, "Pretraining JSON Lines")->required();

  PretrainArgs pretrain;
  auto* c_pretrain = app.add_subcommand("pretrain", "Train the replaced-break discriminator");
  add_common(c_pretrain, pretrain.common);
  c_pretrain->add_option("--data", pretrain.data, "Pretraining JSON Lines")->required()->check(CLI::ExistingFile);
  c_pretrain->add_option("--vocab", pretrain.vocab, "Vocabulary file")->required()->check(CLI::ExistingFile);
  c_pretrain->add_option("-o,--output", pretrain.output, "Checkpoint path")->required();

  FinetuneArgs finetune;
  auto* c_finetune = app.add_subcommand("finetune", "Fine-tune an overall or fine-grained model");
  add_common(c_finetune, finetune.common);
  c_finetune->add_option("--task", finetune.task, "overall or fine")->required()
      ->check(CLI::IsMember({"overall", "fine"}));
  c_finetune->add_option("--data", finetune.data, "Rated JSON Lines")->required()->check(CLI::ExistingFile);
  c_finetune->add_option("--vocab", finetune.vocab, "Vocabulary file (unless --init)")->check(CLI::ExistingFile);
  c_finetune->add_option("--init", finetune.init, "Start from this checkpoint's backbone")->check(CLI::ExistingFile);
  c_finetune->add_option("--backbone", finetune.backbone, "transformer or bilstm")
      ->check(CLI::IsMember({"transformer", "bilstm"}));
  c_finetune->add_option("-o,--output", finetune.output, "Checkpoint path")->required();

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Cross-validated evaluation");
  add_common(c_eval, eval.common);
  c_eval->add_option("--task", eval.task, "overall or fine")->required()
      ->check(CLI::IsMember({"overall", "fine"}));
  c_eval->add_option("--data", eval.data, "Rated JSON Lines")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--vocab", eval.vocab, "Vocabulary file (unless --init)")->check(CLI::ExistingFile);
  c_eval->add_option("--model", eval.model, "transformer, bilstm or against-ref")
      ->check(CLI::IsMember({"transformer", "bilstm", "against-ref"}));
  c_eval->add_option("--init", eval.init, "Transformer: start every fold from this checkpoint")
      ->check(CLI::ExistingFile);
  c_eval->add_option("--references", eval.references, "Reference token sequences (against-ref)")
      ->check(CLI::ExistingFile);
  c_eval->add_option("--k", eval.k, "Number of folds; overrides the config")->check(CLI::Range(2, 1000));
  c_eval->add_option("--report-json", eval.report_json, "Also write the report as JSON");

  ScoreArgs score;
  auto* c_score = app.add_subcommand("score", "Rank the utterances of an alignment file");
  add_common(c_score, score.common);
  c_score->add_option("--overall", score.overall, "Overall checkpoint")->check(CLI::ExistingFile);
  c_score->add_option("--fine", score.fine, "Fine-grained checkpoint")->check(CLI::ExistingFile);
  c_score->add_option("input", score.input, "Alignment file")->required()->check(CLI::ExistingFile);
  c_score->add_option("--format", score.format, "ctm, tsv or auto")
      ->check(CLI::IsMember({"auto", "ctm", "tsv"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "pbrk 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (!app.get_subcommands().empty())
      err << "run '" << app.get_subcommands().front()->get_name() << " --help' for usage\n";
    else
      err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    const Logger log(err, level_from_env());
    if (c_ingest->parsed()) cmd_ingest(ingest, log);
    else if (c_synth->parsed()) cmd_synth(synth, out, log);
    else if (c_corrupt->parsed()) cmd_corrupt(corrupt, out, log);
    else if (c_pretrain->parsed()) cmd_pretrain(pretrain, out, log);
    else if (c_finetune->parsed()) {
      if (finetune.init.empty() && finetune.vocab.empty())
        throw InvalidInput("finetune needs --vocab or --init");
      cmd_finetune(finetune, out, log);
    } else if (c_eval->parsed()) {
      if (eval.init.empty() && eval.vocab.empty())
        throw InvalidInput("eval needs --vocab or --init");
      cmd_eval(eval, out, log);
    } else if (c_score->parsed()) {
      cmd_score(score, out, log);
    }
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace pbrk::cli
