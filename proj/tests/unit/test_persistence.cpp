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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pbrk/atomic_file.hpp"
#include "pbrk/checkpoint.hpp"
#include "pbrk/config.hpp"
#include "pbrk/corruption.hpp"
#include "pbrk/dataset_io.hpp"
#include "pbrk/error.hpp"
#include "pbrk/evaluate.hpp"
#include "pbrk/synth.hpp"

using namespace pbrk;
namespace fs = std::filesystem;

namespace {

struct Data {
  std::vector<NativeUtterance> native;
  std::vector<EslSample> esl;
  Vocabulary vocab;
  std::vector<RatedSample> rated;
  std::vector<LabeledSequence> pretrain;

  Data() {
    SynthConfig cfg;
    cfg.n_native = 60;
    cfg.n_esl = 40;
    cfg.seed = 8;
    native = generate_native(cfg);
    esl = generate_esl(cfg, native);
    vocab = build_vocab(sequences_of(native));
    rated = rated_samples(esl, vocab);
    std::vector<EncodedSequence> enc;
    for (const auto& s : sequences_of(native)) enc.push_back(encode(s, vocab));
    pretrain = build_pretrain_dataset(enc, CorruptionConfig{});
  }
};

const Data& data() {
  static const Data d;
  return d;
}

Checkpoint small_checkpoint(TaskKind task) {
  BackboneSpec spec;
  spec.encoder = {data().vocab.size(), 8, 2, 1, 16, 32, 0.1f};
  Checkpoint ck{AssessmentModel(spec, task), data().vocab, 99, "scratch", TrainConfig{}};
  ck.model.init(5);
  return ck;
}

std::string bytes_of(const Checkpoint& ck) {
  std::ostringstream out(std::ios::binary);
  save_checkpoint(ck, out);
  return out.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "pbrk_unit_persistence";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("token sequence files round trip") {
  const auto seqs = sequences_of(data().native);
  std::stringstream ss;
  write_token_sequences(ss, seqs);
  CHECK(read_token_sequences(ss) == seqs);
}

TEST_CASE("pretraining files round trip and validate edits") {
  const auto& d = data();
  std::stringstream ss;
  write_pretrain_dataset(ss, d.pretrain, d.vocab.fingerprint());
  const std::string text = ss.str();
  CHECK(read_pretrain_dataset(ss) == d.pretrain);

  // Flip the label of the first corrupted record.
  std::istringstream lines(text);
  std::string line, tampered;
  bool done = false;
  while (std::getline(lines, line)) {
    const auto pos = line.find("\"label\":1");
    if (!done && pos != std::string::npos) {
      line.replace(pos, 9, "\"label\":0");
      done = true;
    }
    tampered += line + "\n";
  }
  REQUIRE(done);
  std::istringstream bad(tampered);
  CHECK_THROWS_AS(read_pretrain_dataset(bad, "p.jsonl"), ParseError);
}

TEST_CASE("rated files round trip including optional labels") {
  auto rated = data().rated;
  rated[0].overall.reset();
  rated[1].fine.reset();
  std::stringstream ss;
  write_rated_dataset(ss, rated, data().vocab.fingerprint());
  CHECK(read_rated_dataset(ss) == rated);
}

TEST_CASE("dataset readers reject bad headers and records with line numbers") {
  std::istringstream wrong_kind("{\"format\":\"pbrk-tokens\",\"version\":1}\n");
  CHECK_THROWS_AS(read_rated_dataset(wrong_kind), ParseError);
  std::istringstream wrong_version("{\"format\":\"pbrk-tokens\",\"version\":7}\n");
  CHECK_THROWS_AS(read_token_sequences(wrong_version), ParseError);
  std::istringstream bad_record(
      "{\"format\":\"pbrk-tokens\",\"version\":1}\n"
      "{\"id\":\"a\",\"tokens\":[\"x\"]}\n"
      "\n"
      "{\"id\":\"b\",\"tokens\":[\"x\",\"y\"]}\n");
  try {
    read_token_sequences(bad_record, "t.jsonl");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  std::istringstream not_json("{\"format\":\"pbrk-tokens\",\"version\":1}\n{oops\n");
  CHECK_THROWS_AS(read_token_sequences(not_json), ParseError);
}

TEST_CASE("checkpoint save, load, save is byte identical") {
  for (TaskKind task : {TaskKind::discriminator, TaskKind::overall, TaskKind::finegrained}) {
    const Checkpoint ck = small_checkpoint(task);
    const std::string first = bytes_of(ck);
    std::istringstream in(first);
    const Checkpoint back = load_checkpoint(in);
    CHECK(back.model.params() == ck.model.params());
    CHECK(back.vocab == ck.vocab);
    CHECK(back.seed == 99);
    CHECK(back.model.task() == task);
    CHECK(bytes_of(back) == first);
  }
}

TEST_CASE("checkpoint loading detects damage and task mismatches") {
  const std::string good = bytes_of(small_checkpoint(TaskKind::overall));
  {
    std::istringstream in(good);
    CHECK_THROWS_AS(load_checkpoint(in, "c", TaskKind::finegrained), InvalidInput);
  }
  {
    std::string bad = good;
    bad[0] = 'X';
    std::istringstream in(bad);
    CHECK_THROWS_AS(load_checkpoint(in), ParseError);
  }
  {
    std::istringstream in(good.substr(0, good.size() - 3));
    CHECK_THROWS_AS(load_checkpoint(in), ParseError);
  }
  {
    std::istringstream in(good + "x");
    CHECK_THROWS_AS(load_checkpoint(in), ParseError);
  }
  {
    std::string bad = good;
    const auto pos = bad.find("\"d_model\":8");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 11, "\"d_model\":4");
    std::istringstream in(bad);
    CHECK_THROWS_AS(load_checkpoint(in), ParseError);
  }
}

TEST_CASE("checkpoint files are written atomically") {
  const fs::path path = scratch_dir() / "model.ckpt";
  const Checkpoint ck = small_checkpoint(TaskKind::overall);
  save_checkpoint(ck, path.string());
  CHECK(load_checkpoint(path.string()).model.params() == ck.model.params());
  for (const auto& entry : fs::directory_iterator(path.parent_path()))
    CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("a failed atomic write leaves the previous file intact") {
  const fs::path path = scratch_dir() / "keep.txt";
  write_file_atomically(path.string(), [](std::ostream& o) { o << "old"; });
  CHECK_THROWS(write_file_atomically(path.string(), [](std::ostream& o) {
    o << "partial";
    throw InvalidInput("stop");
  }));
  std::ifstream in(path);
  std::string text;
  in >> text;
  CHECK(text == "old");
  CHECK_THROWS_AS(write_file_atomically("/nonexistent-dir/x", [](std::ostream&) {}), InvalidInput);
}

TEST_CASE("run config parses, dumps and round trips") {
  const RunConfig cfg = parse_run_config(R"({"seed": 3, "encoder": {"d_model": 64},
      "finetune": {"epochs": 4}, "eval": {"k": 3}})");
  CHECK(cfg.seed == 3);
  CHECK(cfg.encoder.d_model == 64);
  CHECK(cfg.finetune.epochs == 4);
  CHECK(cfg.eval_folds == 3);
  RunConfig expect;
  expect.seed = 3;
  expect.derive_stage_seeds();
  CHECK(cfg.synth.seed == expect.synth.seed);
  CHECK(cfg.pretrain.seed != cfg.finetune.seed);
  const std::string dumped = dump_run_config(cfg);
  CHECK(parse_run_config(dumped) == cfg);
  CHECK(dump_run_config(parse_run_config(dumped)) == dumped);
}

TEST_CASE("run config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_run_config(R"({"sed": 3})"), InvalidInput);
  CHECK_THROWS_AS(parse_run_config(R"({"encoder": {"layers": 2}})"), InvalidInput);
  CHECK_THROWS_AS(parse_run_config(R"({"encoder": {"vocab_size": 20}})"), InvalidInput);
  CHECK_THROWS_AS(parse_run_config(R"({"finetune": {"seed": 1}})"), InvalidInput);
  CHECK_THROWS_AS(parse_run_config(R"({"encoder": {"d_model": 30, "n_heads": 4}})"), InvalidInput);
  CHECK_THROWS_AS(parse_run_config(R"({"eval": {"k": 1}})"), InvalidInput);
  CHECK_THROWS_AS(parse_run_config("{not json"), ParseError);
}
