#include "gcdual.h"

#include <cstring>
#include <string>

#include "gcdual/context.hpp"

struct gcd_context {
  gcdual::Context ctx;
  std::string last_error;
};

namespace {

thread_local std::string g_ctor_error;

char* dup_string(const std::string& s) {
  char* out = (char*)std::malloc(s.size() + 1);
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
char* run(gcd_context* ctx, int* status, Fn&& fn) {
  if (!ctx) {
    if (status) *status = 2;
    return nullptr;
  }
  try {
    int st = 2;
    std::string payload = fn(st);
    if (status) *status = st;
    ctx->last_error.clear();
    return dup_string(payload);
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    if (status) *status = 2;
    return nullptr;
  }
}

}  // namespace

extern "C" {

gcd_context* gcd_context_new(const char* config_json) {
  try {
    gcdual::RunConfig cfg =
        gcdual::RunConfig::from_json(config_json ? std::string(config_json) : std::string());
    return new gcd_context{gcdual::Context(cfg), {}};
  } catch (const std::exception& e) {
    g_ctor_error = e.what();
    return nullptr;
  }
}

void gcd_context_free(gcd_context* ctx) { delete ctx; }

const char* gcd_last_error(const gcd_context* ctx) {
  return ctx ? ctx->last_error.c_str() : g_ctor_error.c_str();
}

char* gcd_classify(gcd_context* ctx, const char* w1, const char* w2, int* status) {
  return run(ctx, status, [&](int& st) {
    return ctx->ctx.classify_cmd(w1 ? w1 : "", w2 ? w2 : "", st);
  });
}

char* gcd_intersect(gcd_context* ctx, const char* a, const char* b, int* status) {
  return run(ctx, status,
             [&](int& st) { return ctx->ctx.intersect_cmd(a ? a : "", b ? b : "", st); });
}

char* gcd_axioms(gcd_context* ctx, const char* fspec, const char* suites_csv, int* status) {
  return run(ctx, status, [&](int& st) {
    std::vector<std::string> suites;
    std::string s = suites_csv ? suites_csv : "";
    size_t pos = 0;
    while (pos < s.size()) {
      size_t comma = s.find(',', pos);
      if (comma == std::string::npos) comma = s.size();
      if (comma > pos) suites.push_back(s.substr(pos, comma - pos));
      pos = comma + 1;
    }
    return ctx->ctx.axioms_cmd(fspec ? fspec : "hyperbolic", suites, st);
  });
}

char* gcd_box_measure(gcd_context* ctx, const char* fspec, const char* box_json,
                      int* status) {
  return run(ctx, status, [&](int& st) {
    return ctx->ctx.box_measure_cmd(fspec ? fspec : "hyperbolic", box_json ? box_json : "",
                                    st);
  });
}

char* gcd_recover(gcd_context* ctx, const char* fspec, const char* word, int* status) {
  return run(ctx, status, [&](int& st) {
    return ctx->ctx.recover_cmd(fspec ? fspec : "hyperbolic", word ? word : "", st);
  });
}

char* gcd_period(gcd_context* ctx, const char* word, int* status) {
  return run(ctx, status, [&](int& st) { return ctx->ctx.period_cmd(word ? word : "", st); });
}

char* gcd_report_all(gcd_context* ctx, int* status) {
  return run(ctx, status, [&](int& st) { return ctx->ctx.report_all_cmd(st); });
}

char* gcd_csv_from_report(const char* report_json) {
  try {
    return dup_string(gcdual::Context::csv_from_report(report_json ? report_json : "{}"));
  } catch (const std::exception&) {
    return nullptr;
  }
}

void gcd_string_free(char* s) { std::free(s); }

}  // extern "C"
