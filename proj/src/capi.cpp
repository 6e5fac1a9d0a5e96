#include "grspace.h"

#include "runner.hpp"

#include <cstring>
#include <string>

using namespace grs;

struct grs_space {
    Space space;
    std::string source_text;
};
struct grs_pair {
    MappingPair pair;
    std::string source_text;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

grs_status fail(grs_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn> grs_status guarded(Fn&& fn) {
    try {
        fn();
        return GRS_OK;
    } catch (const ParseError& e) {
        return fail(GRS_ERR_PARSE, e.what());
    } catch (const DefError& e) {
        return fail(GRS_ERR_PARSE, e.what());
    } catch (const SpaceError& e) {
        return fail(GRS_ERR_PARSE, e.what());
    } catch (const EvalError& e) {
        return fail(GRS_ERR_EVAL, e.what());
    } catch (const TensorError& e) {
        return fail(GRS_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(GRS_ERR_INTERNAL, e.what());
    }
}

RunOptions to_run_options(const grs_options* opt) {
    RunOptions r;
    if (!opt) return r;
    r.points = opt->points;
    r.seed = opt->seed;
    r.tol = opt->tol;
    r.kind = opt->kind;
    r.geodesic_count = opt->geodesic_count;
    r.geodesic_steps = opt->geodesic_steps;
    r.geodesic_step = opt->geodesic_step;
    r.geodesic_tol = opt->geodesic_tol;
    return r;
}

grs_status validate(const grs_options* opt) {
    if (!opt) return GRS_OK;
    if (opt->points < 1) return fail(GRS_ERR_INVALID, "points must be >= 1");
    if (opt->tol <= 0) return fail(GRS_ERR_INVALID, "tol must be positive");
    if (opt->kind < 0 || opt->kind > 4)
        return fail(GRS_ERR_INVALID, "kind must be 0 (all) or 1..4");
    if (opt->geodesic_count < 1 || opt->geodesic_steps < 1 || opt->geodesic_step <= 0 ||
        opt->geodesic_tol <= 0)
        return fail(GRS_ERR_INVALID, "bad geodesic options");
    return GRS_OK;
}

using RunFn = CheckReport (*)(const std::string&, const std::string&, const RunOptions&);

grs_status run_report(const std::string& text, const char* path, const grs_options* opt,
                      char** json_out, int* pass_out, RunFn fn) {
    if (!json_out) return fail(GRS_ERR_INVALID, "json_out must not be null");
    grs_status st = validate(opt);
    if (st != GRS_OK) return st;
    return guarded([&] {
        CheckReport rep = fn(text, path ? path : "", to_run_options(opt));
        *json_out = dup_string(rep.to_json());
        if (pass_out) *pass_out = rep.overall_pass() ? 1 : 0;
    });
}

} // namespace

extern "C" {

void grs_options_init(grs_options* opt) {
    if (!opt) return;
    RunOptions d;
    opt->points = d.points;
    opt->seed = d.seed;
    opt->tol = d.tol;
    opt->kind = d.kind;
    opt->geodesic_count = d.geodesic_count;
    opt->geodesic_steps = d.geodesic_steps;
    opt->geodesic_step = d.geodesic_step;
    opt->geodesic_tol = d.geodesic_tol;
}

grs_status grs_space_load(const char* text, grs_space** out) {
    if (!text || !out) return fail(GRS_ERR_INVALID, "null argument");
    return guarded([&] { *out = new grs_space{Space::load(text), text}; });
}

grs_status grs_space_load_file(const char* path, grs_space** out) {
    if (!path || !out) return fail(GRS_ERR_INVALID, "null argument");
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const DefError& e) {
        return fail(GRS_ERR_IO, e.what());
    }
    return guarded([&] { *out = new grs_space{Space::load(text), text}; });
}

grs_status grs_pair_load(const char* text, grs_pair** out) {
    if (!text || !out) return fail(GRS_ERR_INVALID, "null argument");
    return guarded([&] { *out = new grs_pair{MappingPair::load(text), text}; });
}

grs_status grs_pair_load_file(const char* path, grs_pair** out) {
    if (!path || !out) return fail(GRS_ERR_INVALID, "null argument");
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const DefError& e) {
        return fail(GRS_ERR_IO, e.what());
    }
    return guarded([&] { *out = new grs_pair{MappingPair::load(text), text}; });
}

void grs_space_free(grs_space* s) { delete s; }
void grs_pair_free(grs_pair* p) { delete p; }

int grs_space_dimension(const grs_space* s) { return s ? s->space.dim() : 0; }

grs_status grs_check_space(const grs_space* s, const char* path, const grs_options* opt,
                           char** json_out, int* pass_out) {
    if (!s) return fail(GRS_ERR_INVALID, "null space");
    return run_report(s->source_text, path, opt, json_out, pass_out, run_check_space);
}

grs_status grs_check_kahler(const grs_space* s, const char* path, const grs_options* opt,
                            char** json_out, int* pass_out) {
    if (!s) return fail(GRS_ERR_INVALID, "null space");
    return run_report(s->source_text, path, opt, json_out, pass_out, run_check_kahler);
}

grs_status grs_check_mapping(const grs_pair* p, const char* path, const grs_options* opt,
                             char** json_out, int* pass_out) {
    if (!p) return fail(GRS_ERR_INVALID, "null pair");
    return run_report(p->source_text, path, opt, json_out, pass_out, run_check_mapping);
}

grs_status grs_geodesic_test(const grs_pair* p, const char* path, const grs_options* opt,
                             char** json_out, int* pass_out) {
    if (!p) return fail(GRS_ERR_INVALID, "null pair");
    return run_report(p->source_text, path, opt, json_out, pass_out, run_geodesic_test);
}

grs_status grs_render_report(const char* json, char** text_out) {
    if (!json || !text_out) return fail(GRS_ERR_INVALID, "null argument");
    return guarded([&] { *text_out = dup_string(render_json_report(json)); });
}

grs_status grs_build_pair(const char* text, char** pair_text_out) {
    if (!text || !pair_text_out) return fail(GRS_ERR_INVALID, "null argument");
    return guarded([&] { *pair_text_out = dup_string(build_pair_text(text)); });
}

const char* grs_last_error(void) { return g_last_error.c_str(); }

void grs_string_free(char* s) { delete[] s; }

} // extern "C"
