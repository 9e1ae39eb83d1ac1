#ifndef TUBENET_H
#define TUBENET_H

/*
 * C interface to the tubenet solver library. Objects are opaque handles
 * created by the library and released with the matching *_free function.
 * Every fallible call returns a tubenet_status; on failure a message is
 * available from tubenet_last_error() on the calling thread.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(TUBENET_BUILDING_LIBRARY)
#define TUBENET_API __attribute__((visibility("default")))
#else
#define TUBENET_API
#endif

typedef enum tubenet_status {
  TUBENET_OK = 0,
  TUBENET_ERR_INVALID_ARGUMENT = 1,
  TUBENET_ERR_IO = 2,
  TUBENET_ERR_PARSE = 3,
  TUBENET_ERR_SINGULAR = 4,
  TUBENET_ERR_NOT_CONVERGED = 5,
  TUBENET_ERR_GEOMETRY = 6,
  TUBENET_ERR_INTERNAL = 7
} tubenet_status;

typedef struct tubenet_config tubenet_config;
typedef struct tubenet_result tubenet_result;
typedef struct tubenet_table tubenet_table;

TUBENET_API const char* tubenet_version(void);
TUBENET_API const char* tubenet_status_string(tubenet_status status);
/* Message of the last failed call on this thread; empty if none. */
TUBENET_API const char* tubenet_last_error(void);

/* Scenario configuration. */
TUBENET_API tubenet_status tubenet_config_load(const char* path, tubenet_config** out);
TUBENET_API tubenet_status tubenet_config_parse(const char* text, tubenet_config** out);
/* value uses config syntax: 3, 0.5, true, "css", ["css", "ps-a"] */
TUBENET_API tubenet_status tubenet_config_set(tubenet_config* config, const char* key, const char* value);
TUBENET_API void tubenet_config_free(tubenet_config* config);

/* Runs the configured scenario. Tables are written to output_dir unless it is NULL or empty.
   A run that finishes with unconverged solves still returns TUBENET_OK; query
   tubenet_result_converged. */
TUBENET_API tubenet_status tubenet_run(const tubenet_config* config, const char* output_dir, tubenet_result** out);
TUBENET_API int tubenet_result_converged(const tubenet_result* result);
TUBENET_API const char* tubenet_result_scenario(const tubenet_result* result);
TUBENET_API const char* tubenet_result_summary(const tubenet_result* result);
TUBENET_API size_t tubenet_result_table_count(const tubenet_result* result);
/* Borrowed; valid while the result lives. NULL if out of range. */
TUBENET_API const tubenet_table* tubenet_result_table(const tubenet_result* result, size_t index);
TUBENET_API void tubenet_result_free(tubenet_result* result);

/* CSV tables. */
TUBENET_API const char* tubenet_table_name(const tubenet_table* table);
TUBENET_API const char* tubenet_table_csv(const tubenet_table* table);
TUBENET_API size_t tubenet_table_rows(const tubenet_table* table);
TUBENET_API size_t tubenet_table_columns(const tubenet_table* table);
TUBENET_API const char* tubenet_table_header(const tubenet_table* table, size_t column);
TUBENET_API const char* tubenet_table_cell(const tubenet_table* table, size_t row, size_t column);
TUBENET_API tubenet_status tubenet_table_value(const tubenet_table* table, size_t row, size_t column, double* out);
/* Only for tables returned by value (not those borrowed from a result). */
TUBENET_API void tubenet_table_free(tubenet_table* table);

/* Perimeter-averaged superposition for the seven-vessel configuration.
   Columns: vessel,x,y,radius,p1d,p_avg,q_m2_s,q_mg_day_mm */
TUBENET_API tubenet_status tubenet_oracle_vessels(int osmotic_in_source, tubenet_table** out);

/* O-grid mesh of the straight-tube benchmark box for spacing h. Either path may be NULL. */
TUBENET_API tubenet_status tubenet_mesh_cylinder(double h, double radius, const char* mesh_path, const char* vtk_path,
                                                 size_t* vertices, size_t* tets);

/* Absolute water pressure for a water saturation theta/theta_s of the loam soil. */
TUBENET_API tubenet_status tubenet_vg_pressure_from_saturation(double saturation, double* pressure);

#ifdef __cplusplus
}
#endif

#endif
