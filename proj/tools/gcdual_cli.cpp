// Batch driver for the geodesic-current duality toolkit. Talks to the core
// exclusively through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gcdual.h"

namespace {

struct GlobalOpts {
  std::string group;
  std::string config_file;
  std::string out;
  std::string format;
  double tol = -1;
  int nmax = -1;
  int lmax = -1;
  long long seed = -1;
  int pair_cap = -1;
};

std::string build_config(const GlobalOpts& o) {
  std::string base = "{}";
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) {
      std::cerr << "cannot open config file " << o.config_file << "\n";
      std::exit(2);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    base = ss.str();
  }
  // Flags override the file; splice overrides into the JSON object.
  std::string body = base;
  size_t close = body.rfind('}');
  if (close == std::string::npos) {
    std::cerr << "config file is not a JSON object\n";
    std::exit(2);
  }
  std::ostringstream extra;
  auto emit = [&](const std::string& kv) {
    std::string trimmed = body.substr(0, close);
    bool empty = trimmed.find(':') == std::string::npos;
    body = trimmed + (empty ? "" : ",") + kv + body.substr(close);
    close = body.rfind('}');
  };
  char buf[128];
  if (!o.group.empty()) emit("\"group\":\"" + o.group + "\"");
  if (o.tol >= 0) {
    snprintf(buf, sizeof buf, "\"tol\":%.17g", o.tol);
    emit(buf);
  }
  if (o.nmax >= 0) emit("\"nmax\":" + std::to_string(o.nmax));
  if (o.lmax >= 0) emit("\"lmax\":" + std::to_string(o.lmax));
  if (o.seed >= 0) emit("\"seed\":" + std::to_string(o.seed));
  if (o.pair_cap >= 0) emit("\"pair_cap\":" + std::to_string(o.pair_cap));
  if (!o.format.empty()) emit("\"format\":\"" + o.format + "\"");
  return body;
}

int deliver(const GlobalOpts& o, gcd_context* ctx, char* payload, int status) {
  if (!payload) {
    std::cerr << "error: " << gcd_last_error(ctx) << "\n";
    return 2;
  }
  std::string text = payload;
  gcd_string_free(payload);
  if (o.format == "csv") {
    char* csv = gcd_csv_from_report(text.c_str());
    if (csv) {
      text = csv;
      gcd_string_free(csv);
    }
  }
  if (o.out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "cannot write " << o.out << "\n";
      return 2;
    }
    f << text << "\n";
  }
  return status;
}

std::string read_arg_or_file(const std::string& s) {
  // JSON inline or a path; paths are passed through with '@' for the core.
  if (!s.empty() && (s[0] == '[' || s[0] == '{' || s[0] == '@')) return s;
  std::ifstream probe(s);
  if (probe) return "@" + s;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve functionals, smoothing axioms, and dual geodesic currents"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--group", g.group, "group mode: genus2 | free2");
  app.add_option("--config", g.config_file, "JSON config file (flags override)");
  app.add_option("--tol", g.tol, "equality tolerance");
  app.add_option("--nmax", g.nmax, "estimator sequence cap");
  app.add_option("--lmax", g.lmax, "pair-sampling ball radius");
  app.add_option("--seed", g.seed, "sampling seed");
  app.add_option("--pair-cap", g.pair_cap, "cap on sampled pairs");
  app.add_option("--out", g.out, "write the report to a file");
  app.add_option("--format", g.format, "json | csv");

  std::string w1, w2, fspec = "hyperbolic", suites, curve_a, curve_b, box_spec, word;

  auto* classify = app.add_subcommand("classify", "classify the axes of two words");
  classify->add_option("w1", w1)->required();
  classify->add_option("w2", w2)->required();

  auto* intersect = app.add_subcommand("intersect", "intersection numbers of multicurves");
  intersect->add_option("curveA", curve_a, "multicurve JSON or file")->required();
  intersect->add_option("curveB", curve_b, "multicurve JSON or file")->required();

  auto* axioms = app.add_subcommand("axioms", "run axiom suites on a functional");
  axioms->add_option("--functional", fspec,
                     "hyperbolic|zero|period|graph:...|curve:...|tree:...");
  axioms->add_option("--suite", suites,
                     "comma list: smoothing,stability,power,lamination,hyperbolic,parry,tree");

  auto* boxm = app.add_subcommand("box-measure", "dual-measure estimate of an RH box");
  boxm->add_option("--functional", fspec);
  boxm->add_option("--box", box_spec, "box JSON or file")->required();

  auto* recover = app.add_subcommand("recover", "recover f([w]) from the dual current");
  recover->add_option("--functional", fspec);
  recover->add_option("--word", word)->required();

  auto* periodc = app.add_subcommand("period", "hyperbolic cross-ratio period of a word");
  periodc->add_option("--word", word)->required();

  auto* report = app.add_subcommand("report", "run the full suite and emit one report");
  bool report_all = false;
  report->add_flag("--all", report_all);

  CLI11_PARSE(app, argc, argv);

  gcd_context* ctx = gcd_context_new(build_config(g).c_str());
  if (!ctx) {
    std::cerr << "error: " << gcd_last_error(nullptr) << "\n";
    return 2;
  }

  int status = 2;
  char* payload = nullptr;
  if (classify->parsed()) {
    payload = gcd_classify(ctx, w1.c_str(), w2.c_str(), &status);
  } else if (intersect->parsed()) {
    payload = gcd_intersect(ctx, read_arg_or_file(curve_a).c_str(),
                            read_arg_or_file(curve_b).c_str(), &status);
  } else if (axioms->parsed()) {
    payload = gcd_axioms(ctx, fspec.c_str(), suites.c_str(), &status);
  } else if (boxm->parsed()) {
    payload = gcd_box_measure(ctx, fspec.c_str(), read_arg_or_file(box_spec).c_str(),
                              &status);
  } else if (recover->parsed()) {
    payload = gcd_recover(ctx, fspec.c_str(), word.c_str(), &status);
  } else if (periodc->parsed()) {
    payload = gcd_period(ctx, word.c_str(), &status);
  } else if (report->parsed()) {
    payload = gcd_report_all(ctx, &status);
  }

  int rc = deliver(g, ctx, payload, status);
  gcd_context_free(ctx);
  return rc;
}
