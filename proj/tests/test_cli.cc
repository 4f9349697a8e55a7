#include <filesystem>

#include "doctest.h"
#include "eyesfree/bundle.h"
#include "oracles.h"

using namespace eyesfree;
using testing::shell_quote;
namespace fs = std::filesystem;

namespace {

testing::CommandResult cli(const std::string& args) {
  return testing::run_command(shell_quote(EYESFREE_CLI) + " " + args + " 2>/dev/null");
}

std::string layout(const std::string& name) {
  return shell_quote(testing::fixture_path("corpus/" + name + ".layout.json").string());
}

std::string write_layout(const fs::path& dir, const std::string& name, const std::string& json) {
  fs::path p = dir / (name + ".layout.json");
  write_file(p, json);
  return shell_quote(p.string());
}

int count_lines_containing(const std::string& text, const std::string& needle) {
  int n = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace

TEST_CASE("compile then play reproduces the golden traces") {
  fs::path out = testing::scratch_dir("cli-golden");
  for (const char* name : {"alpha", "beta", "gamma"}) {
    REQUIRE(cli("compile --layout " + layout(name) + " --out " + shell_quote((out / name).string()))
                .status == 0);
  }
  for (const char* trace : {"alpha_page", "alpha_text", "beta_wheel", "gamma_warning"}) {
    const std::string t = trace;
    const std::string doc = t.substr(0, t.find('_'));
    auto r = cli("play --bundle " + shell_quote((out / doc).string()) + " --commands " +
                 shell_quote(testing::fixture_path("traces/" + t + ".trace").string()));
    CHECK(r.status == 0);
    CHECK(r.out == testing::slurp(testing::fixture_path("golden/" + t + ".out")));
  }
  // A manifest path works as well as the directory.
  auto r = cli("play --bundle " + shell_quote((out / "beta" / "manifest.json").string()) +
               " --commands " + shell_quote(testing::fixture_path("traces/beta_wheel.trace").string()));
  CHECK(r.out == testing::slurp(testing::fixture_path("golden/beta_wheel.out")));
}

TEST_CASE("inspection subcommands match their goldens") {
  CHECK(cli("link --dump-mentions --layout " + layout("alpha")).out ==
        testing::slurp(testing::fixture_path("golden/alpha.link.out")));
  CHECK(cli("summarize --layout " + layout("beta")).out ==
        testing::slurp(testing::fixture_path("golden/beta.summarize.out")));
  CHECK(cli("script --layout " + layout("gamma")).out ==
        testing::slurp(testing::fixture_path("golden/gamma.script.out")));
}

TEST_CASE("compile is byte-identical across runs") {
  fs::path out = testing::scratch_dir("cli-determinism");
  REQUIRE(cli("compile --layout " + layout("alpha") + " --out " + shell_quote((out / "a").string())).status == 0);
  REQUIRE(cli("compile --layout " + layout("alpha") + " --out " + shell_quote((out / "b").string())).status == 0);
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(out / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    fs::path twin = out / "b" / fs::relative(entry.path(), out / "a");
    CHECK(testing::slurp(entry.path()) == testing::slurp(twin));
  }
  CHECK(files > 4);
}

TEST_CASE("one Figure 2 mention compiles to one link trigger") {
  fs::path dir = testing::scratch_dir("cli-one-link");
  auto path = write_layout(dir, "one", R"({"version": 1, "id": "one", "title": "One", "source_kind": "digital",
    "pages": [{"width": 600, "height": 800, "regions": [
      {"id": "p", "kind": "paragraph", "bbox": [10, 10, 250, 100], "text": "As Figure 2 shows, it works."},
      {"id": "f", "kind": "figure", "bbox": [300, 10, 250, 100]},
      {"id": "c", "kind": "caption", "bbox": [300, 120, 250, 20], "text": "Figure 2: It."}]}]})");
  REQUIRE(cli("compile --layout " + path + " --out " + shell_quote((dir / "b").string())).status == 0);
  Bundle b = read_bundle_dir(dir / "b");
  int triggers = 0;
  for (const ScriptEvent& e : b.script.events) triggers += std::holds_alternative<LinkTrigger>(e);
  CHECK(triggers == 1);
  CHECK(count_lines_containing(cli("script --layout " + path).out, "link_trigger") == 1);
}

TEST_CASE("scanned fixture has exactly one warning") {
  auto out = cli("script --layout " + layout("gamma")).out;
  CHECK(count_lines_containing(out, " warning ") == 1);
  CHECK(count_lines_containing(out, "Warning, upcoming TTS may be unintelligible") == 1);
}

TEST_CASE("empty page compiles to a bundle that ends at zero") {
  fs::path dir = testing::scratch_dir("cli-empty");
  auto path = write_layout(dir, "empty", R"({"version": 1, "id": "e", "title": "", "source_kind": "digital",
    "pages": [{"width": 600, "height": 800, "regions": []}]})");
  REQUIRE(cli("compile --layout " + path + " --out " + shell_quote((dir / "b").string())).status == 0);
  Bundle b = read_bundle_dir(dir / "b");
  REQUIRE(b.script.events.size() == 1);
  CHECK(b.script.events[0] == ScriptEvent{DocumentEnd{0}});
  CHECK(cli("script --layout " + path).out == "0 document_end\n");
}

TEST_CASE("validate and exit codes") {
  CHECK(cli("validate --layout " + layout("beta")).out == "ok\n");
  fs::path dir = testing::scratch_dir("cli-invalid");
  auto bad = write_layout(dir, "bad", R"({"version": 1, "id": "x", "title": "", "source_kind": "digital",
    "pages": [{"width": 100, "height": 100, "regions": [
      {"id": "p", "kind": "paragraph", "bbox": [80, 1, 50, 10], "text": "Hi."}]}]})");
  auto r = cli("validate --layout " + bad);
  CHECK(r.status == 1);
  CHECK(r.out == "region p: x+w <= page.width\n");
  CHECK(cli("compile --layout " + bad + " --out " + shell_quote((dir / "o").string())).status == 1);
  CHECK(!fs::exists(dir / "o"));

  auto broken = write_layout(dir, "broken", "{\"version\": ");
  CHECK(cli("link --layout " + broken).status == 1);
  CHECK(cli("frobnicate").status == 1);
  CHECK(cli("play --bundle " + shell_quote(dir.string()) + " --commands " + bad).status == 1);

  auto timing = dir / "timing.json";
  write_file(timing, R"({"model": "festival"})");
  CHECK(cli("script --layout " + layout("beta") + " --timing " + shell_quote(timing.string())).status == 1);
}

TEST_CASE("timing and threshold options change the script") {
  fs::path dir = testing::scratch_dir("cli-timing");
  auto timing = dir / "timing.json";
  write_file(timing, R"({"base_ms": 10, "per_char_ms": 1, "inter_word_gap_ms": 0})");
  auto out = cli("script --layout " + layout("beta") + " --timing " + shell_quote(timing.string())).out;
  CHECK(out.rfind("0 region_start region=b-h1\n0 speak end=11 ", 0) == 0);

  auto none = cli("script --warning-threshold 0.1 --layout " + layout("gamma")).out;
  CHECK(count_lines_containing(none, " warning ") == 0);
}
