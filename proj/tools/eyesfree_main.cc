// eyesfree: compile layouts into narrated bundles, inspect them, simulate
// the reader and serve bundles to clients.
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "eyesfree/bundle.h"
#include "eyesfree/delivery.h"
#include "eyesfree/ingest.h"
#include "eyesfree/linker.h"
#include "eyesfree/pipeline.h"
#include "eyesfree/playback.h"
#include "eyesfree/summarizer.h"

namespace fs = std::filesystem;
using namespace eyesfree;

namespace {

constexpr int kInputError = 1;
constexpr int kInternalError = 2;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Document load_layout(const std::string& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  try {
    return parse_layout(bytes);
  } catch (const LayoutSyntaxError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const LayoutInvalidError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Bundle load_bundle(const std::string& path) {
  try {
    fs::path p(path);
    return fs::is_directory(p) ? read_bundle_dir(p) : read_bundle(read_file(p));
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string span_text(const TextSpan& s) {
  return s.region_id + ":" + std::to_string(s.char_start) + "-" + std::to_string(s.char_end);
}

struct Options {
  std::string config;
  std::string layout;
  std::string bundle;
  std::string out;
  std::string timing;
  std::string commands;
  std::string root;
  std::string address;
  int port = -1;
  std::optional<double> warning_threshold;
  std::optional<double> aspect;
  std::optional<double> margin;
  bool dump_mentions = false;
  std::string doc;
  int page = 0;
  int sentence = 0;
  int in_flight = 2;
};

AppConfig app_config(const Options& o) {
  AppConfig config;
  if (!o.config.empty()) {
    try {
      config = load_config(o.config);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
  }
  if (!o.timing.empty()) {
    try {
      config.compile.timing = load_timing(o.timing);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
  }
  if (o.warning_threshold) config.compile.warning_threshold = *o.warning_threshold;
  if (o.aspect) config.playback.screen_aspect = *o.aspect;
  if (o.margin) config.playback.margin_frac = *o.margin;
  if (!o.address.empty()) config.server.address = o.address;
  if (o.port >= 0) config.server.port = o.port;
  return config;
}

int run_compile(const Options& o) {
  AppConfig config = app_config(o);
  Bundle bundle = compile_layout(o.layout, o.out, config.compile);
  std::cout << "compiled " << bundle.document.id << " -> " << o.out << " ("
            << bundle.links.size() << " links, " << bundle.keyphrases.size() << " keyphrases, "
            << bundle.script.events.size() << " script events)\n";
  return 0;
}

int run_validate(const Options& o) {
  if (!o.bundle.empty()) {
    load_bundle(o.bundle);
    std::cout << "ok\n";
    return 0;
  }
  try {
    parse_layout(read_file(o.layout));
  } catch (const LayoutInvalidError& e) {
    for (const Violation& v : e.violations()) std::cout << to_string(v) << "\n";
    return kInputError;
  } catch (const LayoutSyntaxError& e) {
    std::cout << e.what() << "\n";
    return kInputError;
  }
  std::cout << "ok\n";
  return 0;
}

int run_link(const Options& o) {
  Document doc = load_layout(o.layout);
  auto mentions = extract_mentions(doc);
  if (o.dump_mentions) {
    for (const ReferenceMention& m : mentions) {
      std::cout << "mention\t" << to_string(m.kind) << "\t" << m.ordinal << "\t"
                << span_text(m.span) << "\t" << m.text << "\n";
    }
  }
  for (const Link& l : resolve(mentions, build_target_index(doc))) {
    std::cout << l.label << "\t" << span_text(l.source) << "\t" << l.target_region << "\n";
  }
  return 0;
}

int run_summarize(const Options& o) {
  Document doc = load_layout(o.layout);
  for (const Keyphrase& k : summarize_document(doc)) {
    std::cout << k.region_id << "\t" << k.phrase << "\t" << format_number(k.score) << "\n";
  }
  return 0;
}

int run_script(const Options& o) {
  AppConfig config = app_config(o);
  Bundle bundle = compile_document(load_layout(o.layout), config.compile);
  for (const ScriptEvent& e : bundle.script.events) {
    std::cout << format_event(e);
    if (const auto* s = std::get_if<SpeakSpan>(&e)) {
      const Region* r = bundle.document.find_region(s->span.region_id);
      std::cout << " word=" << r->text.substr(s->span.char_start,
                                              s->span.char_end - s->span.char_start);
    }
    std::cout << "\n";
  }
  return 0;
}

int run_play(const Options& o) {
  AppConfig config = app_config(o);
  Engine engine(load_bundle(o.bundle), config.playback);
  std::vector<TraceStep> steps;
  try {
    steps = parse_trace(read_file(o.commands));
  } catch (const std::exception& e) {
    throw InputError(o.commands + ": " + e.what());
  }
  std::vector<Effect> effects;
  try {
    effects = run_trace(engine, steps);
  } catch (const PlaybackError& e) {
    throw InputError(o.commands + ": " + e.what());
  }
  for (const Effect& e : effects) std::cout << format_effect(e) << "\n";
  return 0;
}

BundleServer* g_server = nullptr;

int run_serve(const Options& o) {
  AppConfig config = app_config(o);
  BundleStore store;
  try {
    store = BundleStore::load(o.root);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  std::cout << "serving " << store.documents().size() << " document(s) on "
            << config.server.address << ":" << config.server.port << std::endl;
  BundleServer server(std::move(store));
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  server.listen(config.server.address, config.server.port);
  g_server = nullptr;
  return 0;
}

int run_fetch(const Options& o) {
  AppConfig config = app_config(o);
  ProgressiveClient client(config.server.address, config.server.port, o.in_flight);
  std::optional<std::string> opened;
  if (!o.doc.empty()) {
    client.sync(std::nullopt, {});
    opened = o.doc;
  }
  client.sync(opened, {o.page, o.sentence});
  for (const FetchItem& item : client.issued()) {
    std::cout << static_cast<int>(item.priority) << "\t" << resource_path(item) << "\t"
              << client.body(item)->size() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Narrated document bundles: compile, inspect, simulate, serve"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON defaults file (server address, timing, playback)")
      ->check(CLI::ExistingFile);

  auto* compile = app.add_subcommand("compile", "Compile a layout file into a bundle directory");
  compile->add_option("--layout", o.layout)->required()->check(CLI::ExistingFile);
  compile->add_option("--out", o.out, "Bundle directory")->required();
  compile->add_option("--timing", o.timing, "Timing config JSON")->check(CLI::ExistingFile);
  compile->add_option("--warning-threshold", o.warning_threshold, "OCR warning threshold");

  auto* validate_cmd = app.add_subcommand("validate", "Check a layout file or bundle");
  auto* vl = validate_cmd->add_option("--layout", o.layout)->check(CLI::ExistingFile);
  auto* vb = validate_cmd->add_option("--bundle", o.bundle)->check(CLI::ExistingPath);
  vl->excludes(vb);
  validate_cmd->require_option(1);

  auto* link = app.add_subcommand("link", "Print resolved reference links");
  link->add_option("--layout", o.layout)->required()->check(CLI::ExistingFile);
  link->add_flag("--dump-mentions", o.dump_mentions, "Also print every extracted mention");

  auto* summarize = app.add_subcommand("summarize", "Print the keyphrase of each region");
  summarize->add_option("--layout", o.layout)->required()->check(CLI::ExistingFile);

  auto* script = app.add_subcommand("script", "Print the compiled reading script");
  script->add_option("--layout", o.layout)->required()->check(CLI::ExistingFile);
  script->add_option("--timing", o.timing, "Timing config JSON")->check(CLI::ExistingFile);
  script->add_option("--warning-threshold", o.warning_threshold, "OCR warning threshold");

  auto* play = app.add_subcommand("play", "Run a command trace headlessly and print UI events");
  play->add_option("--bundle", o.bundle, "Bundle directory or manifest")
      ->required()
      ->check(CLI::ExistingPath);
  play->add_option("--commands", o.commands, "Trace file")->required()->check(CLI::ExistingFile);
  play->add_option("--aspect", o.aspect, "Screen aspect (width / height)");
  play->add_option("--margin", o.margin, "Pan margin fraction");

  auto* serve = app.add_subcommand("serve", "Serve a directory of bundles over HTTP");
  serve->add_option("--root", o.root)->required()->check(CLI::ExistingDirectory);
  serve->add_option("--address", o.address);
  serve->add_option("--port", o.port);

  auto* fetch = app.add_subcommand("fetch", "Fetch progressively from a server, print issue order");
  fetch->add_option("--address", o.address);
  fetch->add_option("--port", o.port);
  fetch->add_option("--doc", o.doc, "Document to open");
  fetch->add_option("--page", o.page);
  fetch->add_option("--sentence", o.sentence);
  fetch->add_option("--in-flight", o.in_flight);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*compile) return run_compile(o);
    if (*validate_cmd) return run_validate(o);
    if (*link) return run_link(o);
    if (*summarize) return run_summarize(o);
    if (*script) return run_script(o);
    if (*play) return run_play(o);
    if (*serve) return run_serve(o);
    if (*fetch) return run_fetch(o);
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.input_error() ? kInputError : kInternalError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}
