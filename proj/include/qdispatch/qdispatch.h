#ifndef QDISPATCH_QDISPATCH_H
#define QDISPATCH_QDISPATCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QD_API __declspec(dllexport)
#else
#define QD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qd_status {
  QD_OK = 0,
  QD_ERR_INVALID_ARGUMENT = 1,
  QD_ERR_PARSE = 2,
  QD_ERR_IO = 3,
  QD_ERR_INVALID_LAYOUT = 4,
  QD_ERR_RUNTIME = 5
} qd_status;

typedef enum qd_mechanism {
  QD_FIRST_BEST = 0,
  QD_STRICT_FIFO = 1,
  QD_DIRECT_FIFO = 2,
  QD_RANDOM_DISPATCH = 3,
  QD_RANDOMIZED_FIFO = 4
} qd_mechanism;

typedef struct qd_economy qd_economy;
typedef struct qd_partition qd_partition;

typedef struct qd_outcome {
  qd_mechanism mechanism;
  double throughput;
  double net_revenue;
  double queue_length;
  double wait_min;
  double wait_max; /* may be +inf */
  double wait_avg_arrived;
  double wait_avg_joined;
  double payoff_mean;
  double payoff_variance;
} qd_outcome;

/* Message for the last failing call on this thread; never NULL. */
QD_API const char* qd_last_error(void);
QD_API const char* qd_version(void);

/* Strings returned by the library are owned by the caller. */
QD_API void qd_string_free(char* s);

/* "first_best", "strict", "direct", "random", "randomized" */
QD_API const char* qd_mechanism_name(qd_mechanism m);
QD_API qd_status qd_mechanism_parse(const char* name, qd_mechanism* out);

/* Economy. Destinations may come in any order; equal earnings are merged and
   negative earnings dropped. */
QD_API qd_status qd_economy_create(const double* mu, const double* w, size_t n, double lambda, double driver_cost,
                                   double platform_cost, long patience, qd_economy** out);
QD_API qd_status qd_economy_parse(const char* text, qd_economy** out);
QD_API qd_status qd_economy_load(const char* path, qd_economy** out);
QD_API qd_status qd_economy_save(const qd_economy* e, const char* path);
QD_API qd_status qd_economy_to_text(const qd_economy* e, char** out);
QD_API qd_status qd_economy_with_lambda(const qd_economy* e, double lambda, qd_economy** out);
QD_API qd_status qd_economy_with_patience(const qd_economy* e, long patience, qd_economy** out);
QD_API void qd_economy_free(qd_economy* e);

QD_API size_t qd_economy_size(const qd_economy* e);
QD_API double qd_economy_lambda(const qd_economy* e);
QD_API long qd_economy_patience(const qd_economy* e);
QD_API int qd_economy_over_supplied(const qd_economy* e);
QD_API int qd_economy_degenerate(const qd_economy* e);
/* 1-based index J of the lowest-earning destination served */
QD_API size_t qd_economy_max_completed(const qd_economy* e);
/* Copies up to `capacity` values; `count` receives the number available. */
QD_API qd_status qd_economy_thresholds(const qd_economy* e, double* out, size_t capacity, size_t* count);
QD_API double qd_economy_qbar(const qd_economy* e);

/* Ordered partitions of the top destinations, literal form "{1},{2,3}". */
QD_API qd_status qd_partition_parse(const char* literal, qd_partition** out);
QD_API qd_status qd_partition_default(const qd_economy* e, qd_partition** out);
QD_API qd_status qd_partition_to_text(const qd_partition* p, char** out);
QD_API size_t qd_partition_size(const qd_partition* p);
QD_API void qd_partition_free(qd_partition* p);

/* Bin bounds in queue-position mass. */
QD_API qd_status qd_layout_bins(const qd_economy* e, const qd_partition* p, double* lower, double* upper,
                                size_t capacity, size_t* count);
/* *ok is 1 when every layout check passes; *report (optional) lists failures. */
QD_API qd_status qd_layout_check(const qd_economy* e, const qd_partition* p, int* ok, char** report);

/* Closed-form steady state. `partition` is only used by randomized FIFO and may be
   NULL, in which case the default partition is used. */
QD_API qd_status qd_analyze(const qd_economy* e, qd_mechanism m, const qd_partition* partition, qd_outcome* out);

QD_API qd_status qd_outcome_csv_header(char** out);
QD_API qd_status qd_outcome_csv_row(const qd_outcome* o, const qd_economy* e, char** out);

typedef enum qd_arrivals { QD_ARRIVALS_POISSON = 0, QD_ARRIVALS_DETERMINISTIC = 1 } qd_arrivals;

typedef struct qd_sim_config {
  unsigned scale;
  double horizon;
  double warmup;
  double offer_latency;
  uint64_t seed;
  qd_arrivals arrivals;
  const char* trace_path; /* NULL: no trace file */
} qd_sim_config;

typedef struct qd_sim_report {
  int no_completions;
  uint64_t censored; /* cohort drivers still queued when the run stopped */
  uint64_t riders;
  uint64_t drivers;
  double end_time;
} qd_sim_report;

QD_API void qd_sim_config_default(qd_sim_config* cfg);

/* Runs the mechanism with its equilibrium strategy; `report` may be NULL. */
QD_API qd_status qd_simulate(const qd_economy* e, qd_mechanism m, const qd_partition* partition,
                             const qd_sim_config* cfg, qd_outcome* empirical, qd_sim_report* report);

typedef enum qd_sweep_parameter { QD_SWEEP_LAMBDA = 0, QD_SWEEP_PATIENCE = 1 } qd_sweep_parameter;

/* Writes the sweep as CSV (outcome schema, first best included) to a string. */
QD_API qd_status qd_sweep_csv(const qd_economy* base, qd_sweep_parameter parameter, const double* grid, size_t n,
                              const qd_mechanism* mechanisms, size_t n_mechanisms, const char* partition_literal,
                              char** out);

typedef struct qd_ingest_params {
  const char* origin; /* NULL or "": all pickups */
  const char* from;   /* optional timestamp, inclusive */
  const char* until;  /* optional timestamp, exclusive */
  double driver_cost;
  double platform_cost;
  double min_relocation;
  double lambda;
  long patience;
  double total_demand_rate;
  size_t min_trip_count;
  int ratio_of_means; /* 0: average per-trip fare per minute */
} qd_ingest_params;

typedef struct qd_ingest_report {
  size_t rows;
  size_t records;
  size_t filtered_out;
  size_t missing_dropoff;
  size_t malformed;
  size_t tracts;
} qd_ingest_report;

QD_API void qd_ingest_params_default(qd_ingest_params* params);
/* `problems` (optional) receives one "line N: reason" per malformed row; it may be
   set even when the call fails and must then still be freed. */
QD_API qd_status qd_ingest(const char* trips_csv, const qd_ingest_params* params, qd_economy** out,
                           qd_ingest_report* report, char** problems);

#ifdef __cplusplus
}
#endif

#endif
