#ifndef LITT_H
#define LITT_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define LITT_REPORT_CUMULANTS 1

#define LITT_REPORT_EM4 2

#define LITT_REPORT_MFPT 4

// Result of every call. Values match the command-line exit codes where
// both exist.
typedef enum LittStatus {
  LITT_STATUS_OK = 0,
  LITT_STATUS_EXCEPTIONAL_PAIR = 2,
  LITT_STATUS_NULL_POINTER = 3,
  LITT_STATUS_INVALID_UTF8 = 4,
  LITT_STATUS_PANIC = 5,
  LITT_STATUS_USAGE = 64,
  LITT_STATUS_DATA = 65,
  LITT_STATUS_RESOURCE = 69,
  LITT_STATUS_INTERNAL = 70,
} LittStatus;

typedef enum LittException {
  LITT_EXCEPTION_NONE = 0,
  LITT_EXCEPTION_GAP_DEGENERATE = 1,
  LITT_EXCEPTION_SINGLE_LETTER = 2,
  LITT_EXCEPTION_COMPLEMENT_PAIR = 3,
} LittException;

// A parsed chain with its score.
typedef struct LittChain LittChain;

// A word game.
typedef struct LittGame LittGame;

typedef struct LittCumulants {
  double mu;
  double sigma2;
  double kappa3;
} LittCumulants;

typedef struct LittGameConstants {
  double theta_aa;
  double theta_ab;
  double theta_ba;
  double theta_bb;
  double sigma2;
  double kappa3;
} LittGameConstants;

typedef struct LittPrediction {
  double p_alice;
  double p_bob;
  double p_tie;
  uint64_t effective_n;
  bool clamped;
} LittPrediction;

// Exact outcome probabilities rounded to double.
typedef struct LittOutcomes {
  double p_alice;
  double p_bob;
  double p_tie;
} LittOutcomes;

typedef struct LittSimulation {
  uint64_t wins;
  uint64_t losses;
  uint64_t ties;
  double p_alice;
  double p_bob;
  double p_tie;
} LittSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *litt_version(void);

// Static description of a status code.
const char *litt_status_message(enum LittStatus status);

// Copy of the last error message on this thread, or NULL. Free with
// `litt_string_free`.
char *litt_last_error_message(void);

// # Safety
// `s` must be NULL or a string returned by this library, freed once.
void litt_string_free(char *s);

// Parse a chain from its JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum LittStatus litt_chain_from_json(const char *json, struct LittChain **out);

// # Safety
// `chain` must be NULL or a handle from `litt_chain_from_json`, freed once.
void litt_chain_free(struct LittChain *chain);

// # Safety
// `chain` must be a live handle and `out` writable.
enum LittStatus litt_chain_state_count(const struct LittChain *chain, size_t *out);

// Asymptotic mean, variance and third cumulant per step.
//
// # Safety
// `chain` must be a live handle and `out` writable.
enum LittStatus litt_chain_cumulants(const struct LittChain *chain, struct LittCumulants *out);

// Expected visits to state `a` before the first visit to `b`, starting at `a`.
//
// # Safety
// `chain` must be a live handle, `a` and `b` NUL-terminated, `out` writable.
enum LittStatus litt_chain_expected_visits(const struct LittChain *chain,
                                           const char *a,
                                           const char *b,
                                           double *out);

// JSON report with the sections selected by `flags`
// (`LITT_REPORT_CUMULANTS | LITT_REPORT_EM4 | LITT_REPORT_MFPT`).
//
// # Safety
// `chain` must be a live handle and `out` writable.
enum LittStatus litt_chain_report_json(const struct LittChain *chain, uint32_t flags, char **out);

// Two-word game: Alice holds `a`, Bob holds `b`.
//
// # Safety
// `a` and `b` must be NUL-terminated and `out` writable.
enum LittStatus litt_game_new(uint32_t q, const char *a, const char *b, struct LittGame **out);

// Weighted game over `len` words.
//
// # Safety
// `words` and `weights` must point to `len` entries; `out` writable.
enum LittStatus litt_game_new_weighted(uint32_t q,
                                       const char *const *words,
                                       const int64_t *weights,
                                       size_t len,
                                       struct LittGame **out);

// # Safety
// `game` must be NULL or a handle from `litt_game_new*`, freed once.
void litt_game_free(struct LittGame *game);

// # Safety
// `game` must be a live two-word handle and `out` writable.
enum LittStatus litt_game_constants(const struct LittGame *game, struct LittGameConstants *out);

// # Safety
// `game` must be a live two-word handle and `out` writable.
enum LittStatus litt_game_exception(const struct LittGame *game, enum LittException *out);

// Edgeworth prediction after `n` letters. Exceptional pairs return
// `LITT_STATUS_EXCEPTIONAL_PAIR`.
//
// # Safety
// `game` must be a live two-word handle and `out` writable.
enum LittStatus litt_game_predict(const struct LittGame *game,
                                  uint64_t n,
                                  struct LittPrediction *out);

// Exact outcome probabilities after `n` letters.
//
// # Safety
// `game` must be a live handle and `out` writable.
enum LittStatus litt_game_exact(const struct LittGame *game, uint64_t n, struct LittOutcomes *out);

// Exact score distribution as `score,count` CSV.
//
// # Safety
// `game` must be a live handle and `out` writable.
enum LittStatus litt_game_distribution_csv(const struct LittGame *game, uint64_t n, char **out);

// Seeded Monte Carlo estimate.
//
// # Safety
// `game` must be a live handle and `out` writable.
enum LittStatus litt_game_simulate(const struct LittGame *game,
                                   uint64_t n,
                                   uint64_t reps,
                                   uint64_t seed,
                                   struct LittSimulation *out);

// Full analysis as JSON, the same document the command-line tool prints.
// The report is written for exceptional pairs too, and the call then
// returns `LITT_STATUS_EXCEPTIONAL_PAIR`.
//
// # Safety
// `game` must be a live two-word handle and `out` writable.
enum LittStatus litt_game_analyze_json(const struct LittGame *game,
                                       uint64_t n,
                                       bool exact,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LITT_H */
