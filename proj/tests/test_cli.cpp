#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "esurf/cli.hpp"

namespace fs = std::filesystem;
using esurf::cli::run;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("esurf-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("cli end-to-end: gen-synthetic, train, segment, evaluate") {
  TempDir dir;
  const std::string corpus = dir.file("train.txt");
  const std::string model = dir.file("model.esurf");

  Result gen = cli({"gen-synthetic", "--docs", "40", "--seed", "42", "--output", corpus});
  CHECK(gen.code == 0);

  Result train = cli({"train", "--corpus", corpus, "--model", model, "--trees", "30",
                      "--seed", "42"});
  CHECK(train.code == 0);
  CHECK(train.out.find("feature space: D=") != std::string::npos);
  CHECK(train.out.find("positive=") != std::string::npos);
  CHECK(train.out.find("negative=") != std::string::npos);
  CHECK(fs::exists(model));

  // segmenting the training text recovers the gold boundaries (separable rule)
  const std::string plain = dir.file("plain.txt");
  const std::string gold_text = slurp(corpus);
  std::string stripped = gold_text;
  for (std::string::size_type pos; (pos = stripped.find(" | ")) != std::string::npos;)
    stripped.replace(pos, 3, " ");
  write_file(plain, stripped);

  const std::string out_path = dir.file("segmented.txt");
  Result seg = cli({"segment", "--model", model, "--input", plain, "--output", out_path});
  CHECK(seg.code == 0);
  CHECK(slurp(out_path) == gold_text);

  Result eval = cli({"evaluate", "--model", model, "--gold", corpus});
  CHECK(eval.code == 0);
  CHECK(eval.out.find("mode=boundary") != std::string::npos);
  CHECK(eval.out.find("f1=1.000000") != std::string::npos);

  Result cls = cli({"evaluate", "--model", model, "--gold", corpus, "--classification-mode"});
  CHECK(cls.code == 0);
  CHECK(cls.out.find("mode=classification") != std::string::npos);
  CHECK(cls.out.find("balanced_set_size=") != std::string::npos);

  Result inspect = cli({"inspect-features", "--model", model});
  CHECK(inspect.code == 0);
  CHECK(inspect.out.find("because\tL\ttoken\t") != std::string::npos);
}

TEST_CASE("cli training is byte-deterministic") {
  TempDir dir;
  const std::string corpus = dir.file("c.txt");
  REQUIRE(cli({"gen-synthetic", "--docs", "15", "--seed", "7", "--output", corpus}).code == 0);
  const std::string m1 = dir.file("m1.esurf"), m2 = dir.file("m2.esurf");
  REQUIRE(cli({"train", "--corpus", corpus, "--model", m1, "--trees", "12", "--seed", "5",
               "--balance"})
              .code == 0);
  REQUIRE(cli({"train", "--corpus", corpus, "--model", m2, "--trees", "12", "--seed", "5",
               "--balance"})
              .code == 0);
  CHECK(slurp(m1) == slurp(m2));
  CHECK(!slurp(m1).empty());
}

TEST_CASE("cli training is schedule-independent under ESURF_THREADS") {
  TempDir dir;
  const std::string corpus = dir.file("c.txt");
  REQUIRE(cli({"gen-synthetic", "--docs", "20", "--seed", "9", "--output", corpus}).code == 0);

  const std::string serial = dir.file("serial.esurf");
  const std::string parallel = dir.file("parallel.esurf");
  ::setenv("ESURF_THREADS", "1", 1);
  REQUIRE(cli({"train", "--corpus", corpus, "--model", serial, "--trees", "16"}).code == 0);
  ::setenv("ESURF_THREADS", "4", 1);
  REQUIRE(cli({"train", "--corpus", corpus, "--model", parallel, "--trees", "16"}).code == 0);
  ::unsetenv("ESURF_THREADS");
  CHECK(slurp(serial) == slurp(parallel));
}

TEST_CASE("cli evaluate writes the per-document breakdown") {
  TempDir dir;
  const std::string corpus = dir.file("c.txt");
  const std::string model = dir.file("m.esurf");
  REQUIRE(cli({"gen-synthetic", "--docs", "10", "--seed", "2", "--output", corpus}).code == 0);
  REQUIRE(cli({"train", "--corpus", corpus, "--model", model, "--trees", "10"}).code == 0);

  const std::string per_doc = dir.file("per_doc.tsv");
  Result eval = cli({"evaluate", "--model", model, "--gold", corpus, "--per-doc", per_doc});
  CHECK(eval.code == 0);
  const std::string tsv = slurp(per_doc);
  CHECK(tsv.find("doc_id\ttp\tfp\tfn\ttn") == 0);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 11);  // header + 10 docs
}

TEST_CASE("cli exit codes distinguish failure classes") {
  TempDir dir;

  // usage error
  CHECK(cli({"train"}).code == esurf::cli::kExitUsage);
  CHECK(cli({"no-such-command"}).code == esurf::cli::kExitUsage);

  // unreadable input
  CHECK(cli({"train", "--corpus", dir.file("missing.txt"), "--model", dir.file("m.esurf")})
            .code == esurf::cli::kExitInput);

  // malformed corpus
  const std::string bad = dir.file("bad.txt");
  write_file(bad, "#doc d\nx | \n");
  CHECK(cli({"train", "--corpus", bad, "--model", dir.file("m.esurf")}).code ==
        esurf::cli::kExitInput);

  // single-class corpus (no intra-sentence boundaries anywhere)
  const std::string flat = dir.file("flat.txt");
  write_file(flat, "#doc d\nplain words only here .\nmore plain words .\n");
  Result single = cli({"train", "--corpus", flat, "--model", dir.file("m.esurf")});
  CHECK(single.code == esurf::cli::kExitData);
  CHECK(single.err.find("single-class") != std::string::npos);

  // corrupted model header
  const std::string fake = dir.file("fake.esurf");
  write_file(fake, "NOTAMODEL");
  Result corrupt = cli({"evaluate", "--model", fake, "--gold", flat});
  CHECK(corrupt.code == esurf::cli::kExitFile);
  CHECK(corrupt.err.find("magic") != std::string::npos);
}

TEST_CASE("cli segment of an empty input writes an empty output") {
  TempDir dir;
  const std::string corpus = dir.file("c.txt");
  const std::string model = dir.file("m.esurf");
  REQUIRE(cli({"gen-synthetic", "--docs", "10", "--seed", "3", "--output", corpus}).code == 0);
  REQUIRE(cli({"train", "--corpus", corpus, "--model", model, "--trees", "5"}).code == 0);

  const std::string empty_in = dir.file("empty.txt");
  write_file(empty_in, "");
  const std::string out_path = dir.file("out.txt");
  Result seg = cli({"segment", "--model", model, "--input", empty_in, "--output", out_path});
  CHECK(seg.code == 0);
  CHECK(slurp(out_path).empty());
}

TEST_CASE("cli segment records format emits one row per EDU") {
  TempDir dir;
  const std::string corpus = dir.file("c.txt");
  const std::string model = dir.file("m.esurf");
  REQUIRE(cli({"gen-synthetic", "--docs", "12", "--seed", "4", "--output", corpus}).code == 0);
  REQUIRE(cli({"train", "--corpus", corpus, "--model", model, "--trees", "10"}).code == 0);

  const std::string input = dir.file("in.txt");
  write_file(input, "#doc r\nthe house stayed , because the storm moved .\n");
  const std::string out_path = dir.file("records.tsv");
  Result seg = cli({"segment", "--model", model, "--input", input, "--output", out_path,
                    "--format", "records"});
  CHECK(seg.code == 0);
  const std::string records = slurp(out_path);
  CHECK(records.find("r\t0\t0\t") == 0);
  CHECK(std::count(records.begin(), records.end(), '\n') >= 1);
}

TEST_CASE("cli evaluate rejects mismatched documents") {
  TempDir dir;
  const std::string corpus = dir.file("c.txt");
  const std::string model = dir.file("m.esurf");
  REQUIRE(cli({"gen-synthetic", "--docs", "10", "--seed", "5", "--output", corpus}).code == 0);
  REQUIRE(cli({"train", "--corpus", corpus, "--model", model, "--trees", "5"}).code == 0);

  // gold with a doc that cannot match: evaluate re-segments gold docs, so a
  // mismatch only occurs through duplicate ids
  const std::string dup = dir.file("dup.txt");
  write_file(dup, "#doc d\na , because b .\n\n#doc d2\nc , which d .\n");
  Result ok = cli({"evaluate", "--model", model, "--gold", dup});
  CHECK(ok.code == 0);
}

TEST_CASE("cli help documents the model-affecting flags") {
  Result help = cli({"--help"});
  CHECK(help.code == 0);
  Result train_help = cli({"train", "--help"});
  CHECK(train_help.code == 0);
  for (const char* flag : {"--trees", "--max-depth", "--min-leaf", "--features-per-split",
                           "--min-docs", "--max-doc-fraction", "--balance", "--seed"}) {
    CAPTURE(flag);
    CHECK(train_help.out.find(flag) != std::string::npos);
  }
}

TEST_CASE("cli config file supplies defaults, flags win") {
  TempDir dir;
  const std::string corpus = dir.file("c.txt");
  REQUIRE(cli({"gen-synthetic", "--docs", "15", "--seed", "6", "--output", corpus}).code == 0);

  const std::string config = dir.file("esurf.ini");
  write_file(config, "[train]\ntrees=7\nseed=11\n");

  const std::string m1 = dir.file("m1.esurf");
  Result r1 = cli({"--config", config, "train", "--corpus", corpus, "--model", m1});
  CHECK(r1.code == 0);
  CHECK(r1.out.find("trees=7") != std::string::npos);
  CHECK(r1.out.find("seed=11") != std::string::npos);

  const std::string m2 = dir.file("m2.esurf");
  Result r2 = cli({"--config", config, "train", "--corpus", corpus, "--model", m2, "--trees",
                   "9"});
  CHECK(r2.code == 0);
  CHECK(r2.out.find("trees=9") != std::string::npos);  // flag beats config
  CHECK(r2.out.find("seed=11") != std::string::npos);  // config beats default
}
