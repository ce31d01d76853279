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

// Acceptance suite. Runs every primary criterion and prints one line each:
//   PASS|FAIL  <criterion>  <measured values>  (<seconds>s, limit <seconds>s)
// Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pbrk/alignment.hpp"
#include "pbrk/corruption.hpp"
#include "pbrk/evaluate.hpp"
#include "pbrk/gradcheck.hpp"
#include "pbrk/metrics.hpp"
#include "pbrk/model.hpp"
#include "pbrk/reference.hpp"
#include "pbrk/rng.hpp"
#include "pbrk/synth.hpp"
#include "pbrk/tasks.hpp"
#include "pbrk/tokens.hpp"
#include "pbrk/vocab.hpp"
#include "pbrk_cli/cli.hpp"

using namespace pbrk;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

// `extra` is time spent on shared work counted toward this criterion.
void report(const char* name, double limit, const std::function<Outcome()>& body,
            double extra = 0.0) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double dt = seconds_since(t0) + extra;
  const bool ok = o.pass && dt < limit;
  failures += !ok;
  std::printf("%s  %-28s %s  (%.1fs, limit %.0fs)\n", ok ? "PASS" : "FAIL", name,
              o.detail.c_str(), dt, limit);
  std::fflush(stdout);
}

// ---- 1. quantizer -----------------------------------------------------------

BreakClass table_class(std::int64_t micros) {
  if (micros <= 10'000) return BreakClass::br0;
  if (micros <= 50'000) return BreakClass::br1;
  if (micros <= 200'000) return BreakClass::br2;
  return BreakClass::br3;
}

Outcome quantizer() {
  std::size_t checked = 0, wrong = 0;
  // Every microsecond up to half a second.
  for (std::int64_t us = 0; us <= 500'000; ++us, ++checked)
    wrong += quantize(static_cast<double>(us) / 1e6) != table_class(us);
  // Boundaries reached as differences of alignment times.
  for (double base : {0.0, 0.37, 1.0, 12.345678, 3599.999}) {
    for (std::int64_t edge : {10'000, 50'000, 200'000}) {
      for (std::int64_t d : {-1, 0, 1}) {
        const double start = base, end = base + static_cast<double>(edge + d) / 1e6;
        wrong += quantize(end - start) != table_class(edge + d);
        ++checked;
      }
    }
  }
  const bool fixed = quantize(0.0) == BreakClass::br0 && quantize(0.010) == BreakClass::br0 &&
                     quantize(0.050) == BreakClass::br1 && quantize(0.200) == BreakClass::br2 &&
                     quantize(0.200001) == BreakClass::br3;
  return {wrong == 0 && fixed, fmt("%zu gaps checked, %zu misclassified", checked, wrong)};
}

// ---- 2. corruption ----------------------------------------------------------

Outcome corruption_statistics(std::span<const EncodedSequence> native) {
  CorruptionConfig cfg;
  cfg.seed = 2;
  const auto data = build_pretrain_dataset(native, cfg);
  std::map<std::string, const EncodedSequence*> originals;
  for (const auto& s : native) originals[s.id] = &s;

  std::size_t attempted_breaks = 0, replaced = 0, same_class = 0, mislabeled = 0,
              zero_edit = 0;
  for (const auto& d : data) {
    const auto hash = d.seq.id.find("#c");
    if (hash == std::string::npos) continue;
    const EncodedSequence& orig = *originals.at(d.seq.id.substr(0, hash));
    std::size_t diff = 0;
    for (std::size_t i = 0; i < orig.ids.size(); ++i) {
      if (!orig.break_mask[i]) continue;
      ++attempted_breaks;
      if (orig.ids[i] != d.seq.ids[i]) ++diff;
    }
    for (const auto& e : d.edits) same_class += e.before == e.after;
    replaced += diff;
    if (diff == 0) ++zero_edit;
    const SequenceLabel expect = diff == 0 ? SequenceLabel::original : SequenceLabel::corrupted;
    mislabeled += d.label != expect || diff != d.edits.size();
  }
  const double ratio = static_cast<double>(data.size()) / native.size();
  const double rate = static_cast<double>(replaced) / attempted_breaks;
  const bool ok = data.size() == native.size() * (1 + cfg.copies_per_original) &&
                  attempted_breaks >= 100'000 && std::abs(rate - 0.15) <= 0.01 &&
                  same_class == 0 && mislabeled == 0;
  return {ok, fmt("size ratio %.4f, rate %.4f over %zu breaks, %zu zero-edit copies all "
                  "original: %s, same-class edits %zu",
                  ratio, rate, attempted_breaks, zero_edit, mislabeled == 0 ? "yes" : "no",
                  same_class)};
}

// ---- 3. gradients -----------------------------------------------------------

Outcome gradient_correctness() {
  double worst = 0.0;
  std::string where;
  std::size_t checks = 0, coords = 0;
  for (std::uint64_t trial = 0; trial < 6; ++trial) {
    Rng pick(1000 + trial);
    const std::size_t heads = std::array<std::size_t, 3>{1, 2, 4}[pick.below(3)];
    const std::size_t vocab = 12 + pick.below(10);
    BackboneSpec spec;
    spec.encoder.vocab_size = vocab;
    spec.encoder.n_heads = heads;
    spec.encoder.d_model = std::clamp<std::size_t>(heads * (4 + pick.below(5)), 8, 32);
    spec.encoder.n_layers = 1 + pick.below(2);
    spec.encoder.ffn_dim = 8 + pick.below(25);
    spec.encoder.max_len = 8;
    spec.encoder.dropout_prob = 0.0f;
    spec.bilstm = {vocab, 4 + pick.below(9), 4 + pick.below(9), 8};

    const std::size_t len = 3 + pick.below(6);
    std::vector<std::int32_t> ids{Vocabulary::kCls};
    std::vector<std::uint8_t> mask{0};
    std::vector<int> labels{0};
    for (std::size_t i = 1; i < len; ++i) {
      const bool is_break = i % 2 == 0;
      ids.push_back(is_break ? 4 + static_cast<std::int32_t>(pick.below(4))
                             : 8 + static_cast<std::int32_t>(pick.below(vocab - 8)));
      mask.push_back(is_break);
      labels.push_back(is_break ? static_cast<int>(pick.below(3)) : 0);
    }

    for (BackboneKind kind : {BackboneKind::transformer, BackboneKind::bilstm}) {
      spec.kind = kind;
      for (TaskKind task : {TaskKind::discriminator, TaskKind::overall, TaskKind::finegrained}) {
        AssessmentModel model(spec, task);
        Rng noise(5 + trial);
        for (std::size_t p = 0; p < model.params().count(); ++p)
          for (float& x : model.params()[p].data()) x = noise.normal(0.0f, 0.1f);
        Target target;
        target.label = static_cast<int>(pick.below(num_classes(task)));
        target.position_labels = labels;
        target.break_mask = mask;
        GradCheckOptions opts;
        opts.samples_per_tensor = 32;
        opts.seed = trial;
        const GradCheckResult r = grad_check(
            [&](const ParamSet& ps, Gradients* g) {
              return model.loss_at(ps, ids, target, g, nullptr);
            },
            model.params(), opts);
        ++checks;
        coords += r.checked;
        if (r.max_rel_error > worst) {
          worst = r.max_rel_error;
          const std::size_t width = kind == BackboneKind::transformer
                                        ? spec.encoder.d_model
                                        : spec.bilstm.hidden_size;
          where = fmt("%s/%s width=%zu L=%zu %s", std::string(to_string(kind)).c_str(),
                      std::string(to_string(task)).c_str(), width, len, r.worst_param.c_str());
        }
      }
    }
  }
  return {worst < 1e-3, fmt("max rel error %.2e over %zu model checks (%zu coords), worst at %s",
                            worst, checks, coords, where.c_str())};
}

// ---- 4. metrics -------------------------------------------------------------

Outcome metric_oracle() {
  Rng rng(4);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int classes = 3;
    const std::size_t n = 1 + rng.below(200);
    std::vector<int> truth(n), pred(n);
    ConfusionMatrix cm(classes);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(rng.below(classes));
      pred[i] = rng.bernoulli(0.6) ? truth[i] : static_cast<int>(rng.below(classes));
      cm.add(truth[i], pred[i]);
    }
    const FoldMetrics got = compute_metrics(cm);
    // Recount straight from the prediction lists.
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += truth[i] == pred[i];
    double macro = 0.0, weighted = 0.0;
    bool same = got.accuracy == static_cast<double>(correct) / n;
    for (int c = 0; c < classes; ++c) {
      std::size_t tp = 0, np = 0, nt = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += truth[i] == c && pred[i] == c;
        np += pred[i] == c;
        nt += truth[i] == c;
      }
      const double p = np ? static_cast<double>(tp) / np : 0.0;
      const double r = nt ? static_cast<double>(tp) / nt : 0.0;
      const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
      same = same && got.per_class[c].precision == p && got.per_class[c].recall == r &&
             got.per_class[c].f1 == f && got.per_class[c].support == nt;
      macro += f;
      weighted += f * static_cast<double>(nt);
    }
    macro /= classes;
    weighted /= static_cast<double>(n);
    same = same && got.macro_f1 == macro && got.weighted_f1 == weighted;
    mismatches += !same;
  }

  ConfusionMatrix fixed(3);
  const int rows[3][3] = {{2, 1, 0}, {0, 3, 0}, {1, 0, 3}};
  for (int t = 0; t < 3; ++t)
    for (int p = 0; p < 3; ++p) fixed.add(t, p, rows[t][p]);
  const FoldMetrics m = compute_metrics(fixed);
  const bool fixed_ok = std::abs(m.accuracy - 0.80) < 1e-12 &&
                        std::abs(m.weighted_f1 - 0.80) < 1e-12 &&
                        std::abs(m.macro_f1 - 0.7937) <= 1e-4;
  return {mismatches == 0 && fixed_ok,
          fmt("%zu/1000 random sets differ from the recount; fixed matrix acc %.4f wF1 %.4f "
              "mF1 %.4f",
              mismatches, m.accuracy, m.weighted_f1, m.macro_f1)};
}

// ---- 5-7. learning ----------------------------------------------------------

struct Corpora {
  std::vector<NativeUtterance> native;
  std::vector<EslSample> esl;
  Vocabulary vocab;
  std::vector<EncodedSequence> native_encoded;
  std::vector<RatedSample> rated;
};

Corpora make_corpora() {
  SynthConfig cfg;
  cfg.seed = 11;
  cfg.n_native = 2000;
  Corpora c;
  c.native = generate_native(cfg);
  c.esl = generate_esl(cfg, c.native);
  const auto seqs = sequences_of(c.native);
  c.vocab = build_vocab(seqs);
  for (const auto& s : seqs) c.native_encoded.push_back(encode(s, c.vocab));
  c.rated = rated_samples(c.esl, c.vocab);
  return c;
}

struct Pretrained {
  std::optional<Checkpoint> checkpoint;
  double seconds = 0.0;
};

Outcome rbtd_learnability(const Corpora& c, Pretrained& out) {
  const auto t0 = Clock::now();
  CorruptionConfig cc;
  cc.seed = 3;
  const auto data = build_pretrain_dataset(c.native_encoded, cc);
  TrainConfig tc;  // 3 epochs, batch 64, lr 1e-4
  tc.seed = 7;
  const PretrainResult r = pretrain_rbtd(data, c.vocab, tc, EncoderConfig{});
  out.checkpoint = r.checkpoint;
  out.seconds = seconds_since(t0);
  const bool setup = c.native.size() >= 2000 && tc.epochs == 3 && tc.batch_size == 64 &&
                     std::abs(tc.lr - 1e-4f) < 1e-12f && cc.copies_per_original == 3;
  return {setup && r.heldout.accuracy >= 0.75,
          fmt("held-out accuracy %.4f (F1 %.4f) on %zu of %zu sequences", r.heldout.accuracy,
              r.heldout.f1, r.heldout_size, data.size())};
}

// A short fine-tuning budget: with 10 or more epochs a scratch model catches
// up with the pretrained one on this corpus.
TrainConfig finetune_config() {
  TrainConfig t;
  t.epochs = 5;
  t.batch_size = 16;
  t.lr = 1e-4f;
  t.seed = 9;
  return t;
}

struct Runs {
  MetricsReport rbtd, scratch, bilstm, reference;
  double rbtd_seconds = 0.0;
};

EvalSpec eval_spec(Assessor a) {
  EvalSpec s;
  s.task = TaskKind::finegrained;
  s.assessor = a;
  s.k = 5;
  s.seed = 5;
  s.train = finetune_config();
  s.backbone.kind = a == Assessor::bilstm ? BackboneKind::bilstm : BackboneKind::transformer;
  return s;
}

Outcome pretraining_transfer(const Corpora& c, const Pretrained& pre, Runs& runs) {
  if (!pre.checkpoint) return {false, "no pretrained checkpoint"};
  EvalSpec spec = eval_spec(Assessor::transformer);
  spec.init = &*pre.checkpoint;
  const auto t0 = Clock::now();
  runs.rbtd = evaluate(c.rated, c.vocab, spec);
  runs.rbtd_seconds = seconds_since(t0);
  spec.init = nullptr;
  runs.scratch = evaluate(c.rated, c.vocab, spec);
  EvalSpec lstm = eval_spec(Assessor::bilstm);
  lstm.train.lr = 1e-3f;
  runs.bilstm = evaluate(c.rated, c.vocab, lstm);
  const double a = 100 * runs.rbtd.macro_f1.mean, b = 100 * runs.scratch.macro_f1.mean,
               l = 100 * runs.bilstm.macro_f1.mean;
  return {a - b >= 2.0 && a > l,
          fmt("fine-grained macro F1: pretrained init %.1f(%.1f), scratch %.1f(%.1f), "
              "Bi-LSTM %.1f(%.1f); margin over scratch %+.1f points",
              a, 100 * runs.rbtd.macro_f1.std, b, 100 * runs.scratch.macro_f1.std, l,
              100 * runs.bilstm.macro_f1.std, a - b)};
}

// Great is class index 2.
double great_recall(const ConfusionMatrix& cm) {
  return static_cast<double>(cm.at(2, 2)) / static_cast<double>(cm.row_sum(2));
}
double great_precision(const ConfusionMatrix& cm) {
  return static_cast<double>(cm.at(2, 2)) / static_cast<double>(cm.col_sum(2));
}

Outcome diverse_patterns(const Corpora& c, Runs& runs) {
  const ReferenceSet refs = reference_set(c.esl);
  EvalSpec spec = eval_spec(Assessor::against_reference);
  spec.references = &refs;
  runs.reference = evaluate(c.rated, c.vocab, spec);
  if (runs.rbtd.confusion.size() != 5 || runs.reference.confusion.size() != 5)
    return {false, "missing per-fold results"};

  // The test split is fold 0 of the shared stratified partition.
  std::vector<int> strata;
  for (const auto& s : c.rated) strata.push_back(rank_index(*s.overall));
  const auto folds = kfold_split(strata, 5, 5);
  std::size_t alt_items = 0, alt_valid_below = 0, alt_valid = 0;
  for (std::size_t i : folds[0]) {
    const EslSample& e = c.esl[i];
    bool uses_alternate = false, only_valid = true;
    for (BreakRule r : e.truth.rules) {
      uses_alternate |= r == BreakRule::alternate;
      only_valid &= r == BreakRule::alternate || r == BreakRule::clean;
    }
    alt_items += uses_alternate;
    // Alternate-valid: every deviation from the reference is a valid alternate.
    if (uses_alternate && only_valid) {
      ++alt_valid;
      alt_valid_below += break_similarity(e.tokens, e.reference) < 0.7;
    }
  }
  const double share = static_cast<double>(alt_items) / folds[0].size();
  const ConfusionMatrix& model = runs.rbtd.confusion[0];
  const ConfusionMatrix& ref = runs.reference.confusion[0];
  const double mr = 100 * great_recall(model), rr = 100 * great_recall(ref);
  const double mp = 100 * great_precision(model), rp = 100 * great_precision(ref);
  const bool ok = share >= 0.30 && mr - rr >= 10.0 && std::abs(mp - rp) <= 5.0;
  return {ok, fmt("test split of %zu items, %.0f%% with alternates (%zu alternate-valid, %zu of them "
                  "below similarity 0.7); Great recall model %.1f vs reference %.1f, Great "
                  "precision model %.1f vs reference %.1f",
                  folds[0].size(), 100 * share, alt_valid, alt_valid_below, mr, rr, mp, rp)};
}

// ---- 8. determinism ---------------------------------------------------------

std::map<std::string, std::string> run_pipeline(const fs::path& dir, const std::string& config) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  std::ostringstream out, err;
  std::map<std::string, std::string> files;
  auto step = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "pbrk");
    const int code = cli::run(args, out, err);
    if (code != 0) throw std::runtime_error("pipeline step failed: " + err.str());
  };
  step({"synth", "--config", config, "-o", d});
  step({"corrupt", "--config", config, "--tokens", d + "/native.tokens.jsonl", "--vocab",
        d + "/vocab.tsv", "-o", d + "/pretrain.jsonl"});
  step({"pretrain", "--config", config, "--data", d + "/pretrain.jsonl", "--vocab",
        d + "/vocab.tsv", "-o", d + "/rbtd.ckpt"});
  step({"finetune", "--config", config, "--task", "fine", "--data", d + "/esl.rated.jsonl",
        "--init", d + "/rbtd.ckpt", "-o", d + "/fine.ckpt"});
  step({"finetune", "--config", config, "--task", "overall", "--data", d + "/esl.rated.jsonl",
        "--init", d + "/rbtd.ckpt", "-o", d + "/overall.ckpt"});
  step({"eval", "--config", config, "--task", "fine", "--data", d + "/esl.rated.jsonl", "--init",
        d + "/rbtd.ckpt", "--report-json", d + "/fine.report.json"});
  step({"eval", "--config", config, "--task", "overall", "--model", "bilstm", "--data",
        d + "/esl.rated.jsonl", "--vocab", d + "/vocab.tsv", "--report-json",
        d + "/overall.report.json"});
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    files[entry.path().filename().string()] = bytes.str();
  }
  files["<stdout>"] = out.str();
  return files;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "pbrk_acceptance_determinism";
  fs::create_directories(root);
  const std::string config = (root / "run.json").string();
  std::ofstream(config) << R"({"seed": 23, "synth": {"n_native": 300, "n_esl": 120},
    "encoder": {"d_model": 32, "n_layers": 1, "n_heads": 2, "ffn_dim": 64},
    "bilstm": {"embed_dim": 16, "hidden_size": 16},
    "pretrain": {"epochs": 1}, "finetune": {"epochs": 2}, "eval": {"k": 3}})";
  const auto a = run_pipeline(root / "a", config);
  const auto b = run_pipeline(root / "b", config);
  std::size_t differing = 0;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    differing += it == b.end() || it->second != bytes;
  }
  const bool ok = differing == 0 && a.size() == b.size() && a.count("rbtd.ckpt") &&
                  a.count("fine.report.json");
  return {ok, fmt("%zu artifacts compared (datasets, checkpoints, reports, stdout), %zu differ",
                  a.size(), differing)};
}

}  // namespace

// With arguments, runs only the named criteria plus what they depend on.
int main(int argc, char** argv) {
  const std::vector<std::string> only(argv + 1, argv + argc);
  auto wanted = [&](std::initializer_list<const char*> names) {
    if (only.empty()) return true;
    for (const char* n : names)
      if (std::find(only.begin(), only.end(), n) != only.end()) return true;
    return false;
  };
  std::printf("pbrk acceptance suite\n");
  if (wanted({"quantizer-exactness"})) report("quantizer-exactness", 1, quantizer);

  if (wanted({"corruption-statistics"})) {
    // Twice the learnability corpus so that at least 1e5 breaks are attempted.
    SynthConfig cfg;
    cfg.seed = 21;
    cfg.n_native = 4000;
    const auto t0 = Clock::now();
    const auto native = generate_native(cfg);
    const Vocabulary vocab = build_vocab(sequences_of(native));
    std::vector<EncodedSequence> enc;
    for (const auto& s : sequences_of(native)) enc.push_back(encode(s, vocab));
    report("corruption-statistics", 30, [&] { return corruption_statistics(enc); },
           seconds_since(t0));
  }
  if (wanted({"gradient-correctness"})) report("gradient-correctness", 120, gradient_correctness);
  if (wanted({"metric-oracle"})) report("metric-oracle", 1, metric_oracle);

  if (wanted({"rbtd-learnability", "pretraining-transfer", "diverse-pattern-failure"})) {
    const auto t_corpus = Clock::now();
    const Corpora corpora = make_corpora();
    const double corpus_seconds = seconds_since(t_corpus);
    Pretrained pre;
    report("rbtd-learnability", 600, [&] { return rbtd_learnability(corpora, pre); },
           corpus_seconds);
    if (wanted({"pretraining-transfer", "diverse-pattern-failure"})) {
      Runs runs;
      report("pretraining-transfer", 1800,
             [&] { return pretraining_transfer(corpora, pre, runs); }, pre.seconds);
      // The fine-tuned model is fold 0 of the transfer run; that fold's share
      // of the pretrained-init training time is counted here.
      report("diverse-pattern-failure", 300, [&] { return diverse_patterns(corpora, runs); },
             runs.rbtd_seconds / 5);
    }
  }
  if (wanted({"determinism"})) report("determinism", 600, determinism);

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
