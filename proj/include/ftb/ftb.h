#ifndef FTB_H
#define FTB_H

/*
 * C interface to the feature-tree pipeline: build an artifact library from
 * repository group metadata, grow a multi-level feature tree over it, score
 * the tree, run the 24-solution comparison matrix, and evaluate
 * requirement-based recommendation.
 *
 * Conventions:
 *  - Every function that can fail returns ftb_status; FTB_OK is 0.
 *  - On failure, ftb_last_error() returns a thread-local message describing
 *    what went wrong. The message lives until the next failing call on the
 *    same thread.
 *  - Strings returned through char** out-parameters are heap-allocated and
 *    must be released with ftb_string_free().
 *  - Handles are opaque; release them with the matching _free function.
 *    Handle reads are thread-safe; each handle must be freed exactly once.
 *  - Configuration goes in as JSON text; the accepted shapes are documented
 *    in the project README.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FTB_API __declspec(dllexport)
#else
#define FTB_API __attribute__((visibility("default")))
#endif

typedef enum ftb_status {
    FTB_OK = 0,
    FTB_ERROR = 1,          /* unclassified failure; see ftb_last_error() */
    FTB_ERROR_PARTIAL = 2,  /* some sources succeeded, some failed */
    FTB_ERROR_INVALID = 3,  /* bad argument or configuration */
    FTB_ERROR_IO = 4,       /* file could not be read or written */
    FTB_ERROR_SCHEMA = 5,   /* input parsed but violated its schema */
    FTB_ERROR_PROVIDER = 6  /* embedding/chat provider failure */
} ftb_status;

typedef struct ftb_library ftb_library;
typedef struct ftb_tree ftb_tree;

FTB_API const char* ftb_version(void);
FTB_API const char* ftb_last_error(void);
FTB_API void ftb_string_free(char* s);

/*
 * Library. config_json: {"sources":[{"name","url","format","version"?}...],
 * "judge"?, "timeout_s"?, "retries"?, "jobs"?}. Returns FTB_ERROR_PARTIAL
 * (with a usable library and per-source report) when at least one source
 * failed but another succeeded. out_report_json may be NULL.
 */
FTB_API ftb_status ftb_library_build(const char* config_json, ftb_library** out_library,
                                     char** out_report_json);
FTB_API ftb_status ftb_library_load(const char* path, ftb_library** out_library);
FTB_API ftb_status ftb_library_save(const ftb_library* library, const char* path);
FTB_API ftb_status ftb_library_to_json(const ftb_library* library, char** out_json);
FTB_API size_t ftb_library_size(const ftb_library* library);
FTB_API void ftb_library_free(ftb_library* library);

/*
 * Tree. config_json mirrors the build configuration (embedder, algo, cn,
 * summarizer, stop criteria, seed, jobs); format is "json", "dot", or
 * "markdown".
 */
FTB_API ftb_status ftb_tree_build(const ftb_library* library, const char* config_json,
                                  ftb_tree** out_tree);
FTB_API ftb_status ftb_tree_load(const char* path, ftb_tree** out_tree);
FTB_API ftb_status ftb_tree_export(const ftb_tree* tree, const char* format,
                                   const char* path);
FTB_API ftb_status ftb_tree_to_json(const ftb_tree* tree, char** out_json);
FTB_API ftb_status ftb_tree_stats_json(const ftb_tree* tree, char** out_json);
/* embedder_json: the "embedder" object of the build configuration. */
FTB_API ftb_status ftb_tree_metrics_json(const ftb_tree* tree, const char* embedder_json,
                                         char** out_json);
FTB_API void ftb_tree_free(ftb_tree* tree);

/*
 * Evaluation. ftb_matrix_run builds and scores all 24 canonical solutions;
 * out_table (nullable) receives the aligned text table. options_json for the
 * recommenders: {"guide":"mock"|"remote","mode":"traverse"|"whole_tree",
 * "beam",N,"top_n",N,"provider":{...}}. ftb_eval_run's out_wall_time_s is
 * nullable.
 */
FTB_API ftb_status ftb_matrix_run(const ftb_library* library, const char* config_json,
                                  size_t jobs, char** out_json, char** out_table);
FTB_API ftb_status ftb_recommend(const ftb_tree* tree, const char* requirement,
                                 const char* options_json, char** out_json);
FTB_API ftb_status ftb_eval_run(const ftb_tree* tree, const char* dataset_path,
                                const char* options_json, char** out_json,
                                double* out_wall_time_s);

#ifdef __cplusplus
}
#endif

#endif
