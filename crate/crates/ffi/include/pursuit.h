#ifndef PURSUIT_H
#define PURSUIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PursuitStatus {
  PURSUIT_STATUS_OK = 0,
  PURSUIT_STATUS_NULL_POINTER = 1,
  PURSUIT_STATUS_INVALID_ARGUMENT = 2,
  PURSUIT_STATUS_SPEED_ORDER_VIOLATION = 3,
  PURSUIT_STATUS_CAPTURE_DEGENERATE = 4,
  PURSUIT_STATUS_GEOMETRY_FAILURE = 5,
  PURSUIT_STATUS_PARSE_ERROR = 6,
  PURSUIT_STATUS_VALIDATION_ERROR = 7,
  PURSUIT_STATUS_PANIC = 8,
} PursuitStatus;

/**
 * Opaque game state.
 */
typedef struct PursuitGame PursuitGame;

/**
 * One agent: position and speed.
 */
typedef struct PursuitAgent {
  double x;
  double y;
  double speed;
} PursuitAgent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *pursuit_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call into this library from the same thread.
 */
const char *pursuit_last_error(void);

/**
 * Creates a game at time 0. `pursuers` points to `n` agents.
 *
 * # Safety
 * `pursuers` must be valid for `n` reads and `out` valid for one write.
 */
enum PursuitStatus pursuit_game_new(struct PursuitAgent evader,
                                    const struct PursuitAgent *pursuers,
                                    size_t n,
                                    struct PursuitGame **out);

/**
 * Releases a game. NULL is ignored.
 *
 * # Safety
 * `game` must come from [`pursuit_game_new`] and not be used afterwards.
 */
void pursuit_game_free(struct PursuitGame *game);

/**
 * Advances every agent by one explicit Euler step of `dt` along the
 * equilibrium headings. On failure the game is left unchanged.
 *
 * # Safety
 * `game` must be a live handle.
 */
enum PursuitStatus pursuit_game_step(struct PursuitGame *game, double dt);

/**
 * Number of pursuers, or 0 for a NULL handle.
 *
 * # Safety
 * `game` must be a live handle or NULL.
 */
size_t pursuit_game_num_pursuers(const struct PursuitGame *game);

/**
 * Current simulation time.
 *
 * # Safety
 * `game` must be a live handle; `out` valid for one write.
 */
enum PursuitStatus pursuit_game_time(const struct PursuitGame *game, double *out);

/**
 * Area of the safe-reachable set.
 *
 * # Safety
 * `game` must be a live handle; `out` valid for one write.
 */
enum PursuitStatus pursuit_game_area(const struct PursuitGame *game, double *out);

/**
 * Area gradients with respect to every pursuer position (`2n` doubles)
 * and the evader position (2 doubles).
 *
 * # Safety
 * `game` must be a live handle; `pursuers_out` valid for `2n` writes and
 * `evader_out` for 2.
 */
enum PursuitStatus pursuit_game_gradients(const struct PursuitGame *game,
                                          double *pursuers_out,
                                          double *evader_out);

/**
 * Equilibrium headings: unit vectors, or zero for an agent holding still.
 *
 * # Safety
 * As for [`pursuit_game_gradients`].
 */
enum PursuitStatus pursuit_game_headings(const struct PursuitGame *game,
                                         double *pursuers_out,
                                         double *evader_out);

/**
 * Current positions.
 *
 * # Safety
 * As for [`pursuit_game_gradients`].
 */
enum PursuitStatus pursuit_game_positions(const struct PursuitGame *game,
                                          double *pursuers_out,
                                          double *evader_out);

/**
 * Safe-set area for a configuration, without creating a game.
 *
 * # Safety
 * `pursuers` valid for `n` reads; `out` valid for one write.
 */
enum PursuitStatus pursuit_safe_area(struct PursuitAgent evader,
                                     const struct PursuitAgent *pursuers,
                                     size_t n,
                                     double *out);

/**
 * Runs a scenario given as JSON text and returns the trajectory file
 * contents (JSON Lines) in `*out`.
 *
 * # Safety
 * `scenario_json` must be a NUL-terminated string; `out` valid for one
 * write. Release the result with [`pursuit_string_free`].
 */
enum PursuitStatus pursuit_run_scenario_json(const char *scenario_json, char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pursuit_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PURSUIT_H */
