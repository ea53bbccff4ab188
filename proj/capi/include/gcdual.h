#ifndef GCDUAL_H
#define GCDUAL_H

/* C interface to the geodesic-current duality toolkit. All results are
 * JSON payloads; status codes follow the CLI convention:
 *   0 = all checks passed, 1 = violations / non-convergence, 2 = failure.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gcd_context gcd_context;

/* config_json: {"group": "genus2"|"free2", "tol": ..., "nmax": ...,
 * "lmax": ..., "pair_cap": ..., "seed": ..., "format": "json"|"csv"}.
 * NULL or "" selects defaults. Returns NULL on failure (see
 * gcd_last_error(NULL)). */
gcd_context* gcd_context_new(const char* config_json);
void gcd_context_free(gcd_context* ctx);

/* Message for the most recent failure on this context (or the most recent
 * constructor failure when ctx is NULL). */
const char* gcd_last_error(const gcd_context* ctx);

/* Returned strings are heap-allocated; release with gcd_string_free. */
char* gcd_classify(gcd_context* ctx, const char* word1, const char* word2, int* status);
char* gcd_intersect(gcd_context* ctx, const char* curve_a_json, const char* curve_b_json,
                    int* status);
char* gcd_axioms(gcd_context* ctx, const char* functional_spec, const char* suites_csv,
                 int* status);
char* gcd_box_measure(gcd_context* ctx, const char* functional_spec, const char* box_json,
                      int* status);
char* gcd_recover(gcd_context* ctx, const char* functional_spec, const char* word,
                  int* status);
char* gcd_period(gcd_context* ctx, const char* word, int* status);
char* gcd_report_all(gcd_context* ctx, int* status);

/* CSV summary (axiom, pass, worst_margin, witness) of a JSON report. */
char* gcd_csv_from_report(const char* report_json);

void gcd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GCDUAL_H */
