#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kBinary = AVOID_CLI_PATH;
const std::string kDir = AVOID_TEST_SCENARIO_DIR;

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    std::random_device rd;
    fs::path p = fs::temp_directory_path() / ("avoid-cli-test-" + std::to_string(rd()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path write(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

Run run(const std::string& args) {
  fs::path err = scratch() / "stderr.txt";
  std::string cmd = kBinary + " " + args + " 2>" + err.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
    r.out.append(buf, n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.err = slurp(err);
  return r;
}

std::string data(const std::string& name) { return kDir + "/" + name; }

} // namespace

TEST_CASE("generate prints the fixed point prefix") {
  Run r = run("generate --morphism " + data("dekking_h.morphism") + " --length 50");
  CHECK(r.status == 0);
  CHECK(r.out == "03102010230203010201031023010203102010230201031023\n");
  CHECK(r.err.rfind("# avoid generate", 0) == 0);
}

TEST_CASE("count reproduces the table and is repeatable") {
  Run a = run("count --spec dekking --n-max 17");
  CHECK(a.status == 0);
  CHECK(a.out.rfind("n,count\n0,1\n", 0) == 0);
  CHECK(a.out.size() >= 7);
  CHECK(a.out.substr(a.out.size() - 7) == "17,414\n");
  Run b = run("count --spec dekking --n-max 17 --workers 3");
  CHECK(b.out == a.out);
  Run c = run("count --spec " + data("fs_target.spec") + " --n-max 18 --format json");
  CHECK(c.status == 0);
  auto j = nlohmann::json::parse(c.out);
  CHECK(j.dump().find("351") != std::string::npos);
}

TEST_CASE("verify exit codes and deterministic output") {
  std::string args = "verify --morphism " + data("dekking_h.morphism") + " --source " +
                     data("dekking_source.spec") + " --target " + data("dekking_h_target.spec");
  Run a = run(args + " --format json");
  CHECK(a.status == 0);
  CHECK(nlohmann::json::parse(a.out)["complete"] == true);
  Run b = run(args + " --format json");
  CHECK(a.out == b.out);
  Run t = run(args);
  CHECK(t.status == 0);
  CHECK(t.out.find("a.ii") != std::string::npos);

  fs::path bad = write("bad_h.morphism",
                       "0 -> 0310201023\n1 -> 0310230102\n2 -> 0201031023\n3 -> 0203010202\n");
  Run m = run("verify --morphism " + bad.string() + " --source " + data("dekking_source.spec") +
              " --target " + data("dekking_h_target.spec"));
  CHECK(m.status == 1);
}

TEST_CASE("usage and parse errors exit with 2") {
  fs::path spec = write("corrupt.spec", "alphabet 2\nsquares sometimes\n");
  Run r = run("count --spec " + spec.string() + " --n-max 5");
  CHECK(r.status == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run("count --spec dekking").status == 2);
  CHECK(run("count --spec no-such-alias --n-max 3").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("scenario nope").status == 2);
  CHECK(run("generate --morphism " + data("missing.morphism") + " --length 3").status == 2);
  CHECK(run("--help").status == 0);
}

TEST_CASE("scan reports findings through the exit status") {
  fs::path sq = write("square.txt", "0120120\n");
  Run a = run("scan --word " + sq.string());
  CHECK(a.status == 1);
  CHECK(nlohmann::json::parse(a.out).dump().find("squares") != std::string::npos);
  fs::path free = write("free.txt", "0121020\n");
  CHECK(run("scan --word " + free.string()).status == 0);
  fs::path gap = write("gap.txt", "2103022\n");
  CHECK(run("scan --word " + gap.string() + " --min-root 9 --gap-pattern 1,3,2").status == 1);
}

TEST_CASE("growth, forbidden, family and shuffle") {
  fs::path runs = write("runs.txt", "000\n111\n");
  Run g = run("growth --forbidden " + runs.string() + " --tol 1e-12");
  CHECK(g.status == 0);
  double ev = nlohmann::json::parse(g.out)["eigenvalue"];
  CHECK(ev == doctest::Approx(1.6180339887).epsilon(1e-9));

  Run f = run("forbidden --spec fraenkel-simpson --max-len 20");
  CHECK(f.status == 0);
  CHECK(std::count(f.out.begin(), f.out.end(), '\n') == 65);

  Run fam = run("family --sub " + data("dekking_sub.substitution") + " --outer " +
                data("dekking_g.morphism") + " --seed-word 0310201023 --target dekking --divisor 300");
  CHECK(fam.status == 0);
  auto j = nlohmann::json::parse(fam.out);
  CHECK(j["word_length"] == 600);

  fs::path l = write("l.txt", "010\n"), r = write("r.txt", "001\n");
  Run s = run("shuffle --left " + l.string() + " --right " + r.string());
  CHECK(s.status == 0);
  CHECK(s.out == "001001\n");
}

TEST_CASE("scenarios: shipped data passes, a mutated copy fails") {
  Run all = run("scenario --all");
  CHECK(all.status == 0);
  CHECK(all.out == run("scenario --all").out);

  fs::path copy = scratch() / "scenarios";
  fs::create_directories(copy);
  for (const auto& e : fs::directory_iterator(kDir))
    fs::copy_file(e.path(), copy / e.path().filename(), fs::copy_options::overwrite_existing);
  std::ofstream(copy / "pu_f.morphism", std::ios::binary) << "0 -> 001\n1 -> 111\n";
  Run bad = run("scenario pu-shuffle --dir " + copy.string());
  CHECK(bad.status == 1);
  std::ofstream(copy / "pu_target.spec", std::ios::binary) << "alphabet 2\nsquares maybe\n";
  CHECK(run("scenario pu-shuffle --dir " + copy.string()).status == 2);
  fs::remove_all(scratch());
}
