/* C interface to the generalized-Riemannian-space verification engine.
 *
 * All objects are opaque handles; every function returns a status code and
 * reports results through out-parameters.  Strings returned through
 * `char**` out-parameters are heap-allocated and must be released with
 * grs_string_free().  On any non-OK status, grs_last_error() returns a
 * human-readable message for the calling thread.
 */
#ifndef GRSPACE_H
#define GRSPACE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum grs_status {
    GRS_OK = 0,
    GRS_ERR_PARSE = 1,      /* definition or expression syntax error */
    GRS_ERR_EVAL = 2,       /* numerical domain error during evaluation */
    GRS_ERR_INVALID = 3,    /* bad arguments or object state */
    GRS_ERR_IO = 4,         /* file not readable */
    GRS_ERR_INTERNAL = 5
} grs_status;

typedef struct grs_space grs_space;
typedef struct grs_pair grs_pair;

typedef struct grs_options {
    int points;                      /* sample points per check (default 50) */
    unsigned long long seed;         /* RNG seed (default 0) */
    double tol;                      /* residual tolerance (default 1e-9) */
    int kind;                        /* 1..4 selects one derivative kind, 0 = all */
    int geodesic_count;              /* geodesic-test curves (default 10) */
    int geodesic_steps;              /* RK4 steps per curve (default 1000) */
    double geodesic_step;            /* RK4 step size (default 1e-3) */
    double geodesic_tol;             /* collinearity-defect tolerance (default 1e-8) */
} grs_options;

/* Fill `opt` with the defaults above. */
void grs_options_init(grs_options* opt);

/* Loading.  `text` is the full definition-file content. */
grs_status grs_space_load(const char* text, grs_space** out);
grs_status grs_space_load_file(const char* path, grs_space** out);
grs_status grs_pair_load(const char* text, grs_pair** out);
grs_status grs_pair_load_file(const char* path, grs_pair** out);
void grs_space_free(grs_space* s);
void grs_pair_free(grs_pair* p);

int grs_space_dimension(const grs_space* s);

/* Check suites.  `*json_out` receives the machine report (schema version 1);
 * `*pass_out` (may be NULL) receives 1 when every non-informational check
 * passed.  `path` is echoed into the report and may be "". */
grs_status grs_check_space(const grs_space* s, const char* path, const grs_options* opt,
                           char** json_out, int* pass_out);
grs_status grs_check_kahler(const grs_space* s, const char* path, const grs_options* opt,
                            char** json_out, int* pass_out);
grs_status grs_check_mapping(const grs_pair* p, const char* path, const grs_options* opt,
                             char** json_out, int* pass_out);
grs_status grs_geodesic_test(const grs_pair* p, const char* path, const grs_options* opt,
                             char** json_out, int* pass_out);

/* Human-readable rendering of a machine report produced above. */
grs_status grs_render_report(const char* json, char** text_out);

/* Expand a [source]+[mapping] definition into a full pair file whose target
 * carries the deformed connection. */
grs_status grs_build_pair(const char* text, char** pair_text_out);

const char* grs_last_error(void);
void grs_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GRSPACE_H */
