#ifndef REANNEAL_H
#define REANNEAL_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call. `RQ_STATUS_OK` is zero.
typedef enum RqStatus {
  RQ_STATUS_OK = 0,
  RQ_STATUS_NULL_POINTER = 1,
  RQ_STATUS_INVALID_INPUT = 2,
  RQ_STATUS_INVALID_PARAMETER = 3,
  RQ_STATUS_INSUFFICIENT_DATA = 4,
  RQ_STATUS_NON_FINITE = 5,
  RQ_STATUS_CONTRACT_VIOLATION = 6,
  RQ_STATUS_ZERO_GAP = 7,
  RQ_STATUS_CHECKPOINT = 8,
  RQ_STATUS_CONFIG = 9,
  RQ_STATUS_ABORTED = 10,
  RQ_STATUS_IO = 11,
  RQ_STATUS_BUFFER_TOO_SMALL = 12,
  RQ_STATUS_UTF8 = 13,
  RQ_STATUS_PANIC = 14,
} RqStatus;

typedef enum RqEnvKind {
  RQ_ENV_KIND_LANDER = 0,
  RQ_ENV_KIND_HOVER_TRAP = 1,
} RqEnvKind;

typedef enum RqTermination {
  RQ_TERMINATION_NONE = 0,
  RQ_TERMINATION_LANDED = 1,
  RQ_TERMINATION_CRASHED = 2,
  RQ_TERMINATION_OUT_OF_BOUNDS = 3,
} RqTermination;

typedef enum RqBanditStrategy {
  RQ_BANDIT_STRATEGY_GREEDY = 0,
  // `param` is the constant ε.
  RQ_BANDIT_STRATEGY_CONSTANT_EPS = 1,
  // `param` is `c` in `ε_t = min(1, c / (δ² t))`.
  RQ_BANDIT_STRATEGY_DECAYING_EPS = 2,
} RqBanditStrategy;

// A DQN learner: online network, target network and optimizer state.
typedef struct RqAgent RqAgent;

// An environment instance with its own random stream.
typedef struct RqEnv RqEnv;

// Learner hyperparameters, mirroring the core `AgentConfig`.
typedef struct RqAgentConfig {
  double gamma;
  double learning_rate;
  size_t batch_size;
  size_t target_sync_period_episodes;
  bool double_dqn;
  double kappa;
  size_t min_replay_before_training;
} RqAgentConfig;

typedef struct RqEnvSpec {
  size_t observation_size;
  size_t action_count;
  size_t max_episode_steps;
} RqEnvSpec;

// Scalar part of a step; the observation goes to a caller buffer.
typedef struct RqStepResult {
  double reward;
  bool done;
  bool timed_out;
  enum RqTermination termination;
  // Terminal reward component; 0 unless `termination` is set.
  double terminal_bonus;
} RqStepResult;

// Summary of a finished training run.
typedef struct RqTrainSummary {
  size_t episodes;
  size_t reanneals;
  double final_epsilon;
  // Moving average of the episode returns at the last episode.
  double final_moving_average;
} RqTrainSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *rq_version(void);

// Pseudo-Huber loss `κ²(√(1 + (δ/κ)²) − 1)`.
//
// # Safety
// `out` must be valid for one write.
enum RqStatus rq_huber_loss(double td_error, double kappa, double *out);

// Optimal undiscounted and discounted returns of HoverTrap from its start
// state, by value iteration to tolerance `tol`.
//
// # Safety
// `undiscounted`, `discounted` and `steps` must each be valid for one write.
enum RqStatus rq_hovertrap_optimum(double gamma,
                                   double tol,
                                   double *undiscounted,
                                   double *discounted,
                                   size_t *steps);

// Copies the calling thread's last error message into `buf` as a
// NUL-terminated string, truncating to `len - 1` bytes.
//
// Returns the full message length in bytes, excluding the terminator, so a
// caller can retry with a larger buffer. Passing a null `buf` only queries
// the length.
//
// # Safety
// `buf` must be null or valid for `len` writable bytes.
size_t rq_last_error_message(char *buf, size_t len);

// Default learner hyperparameters.
struct RqAgentConfig rq_agent_config_default(void);

// Creates an agent with He-uniform weights drawn from `seed`.
//
// # Safety
// `layer_sizes` must be valid for `n_layers` reads; `out` for one write.
enum RqStatus rq_agent_new(struct RqAgentConfig config,
                           const size_t *layer_sizes,
                           size_t n_layers,
                           uint64_t seed,
                           struct RqAgent **out);

// Loads an agent checkpoint directory written by `rq_agent_save` or by a
// training run. `episodes` receives the episode count stored with it and may
// be null.
//
// # Safety
// `dir` must be a NUL-terminated string; `out` valid for one write;
// `episodes` null or valid for one write.
enum RqStatus rq_agent_load(const char *dir, struct RqAgent **out, size_t *episodes);

// Writes the agent to checkpoint directory `dir`, creating it if needed.
//
// # Safety
// `agent` must be a live handle; `dir` a NUL-terminated string.
enum RqStatus rq_agent_save(const struct RqAgent *agent, const char *dir, size_t episodes);

// Releases an agent. Null is accepted and ignored.
//
// # Safety
// `agent` must be null or a handle not yet freed.
void rq_agent_free(struct RqAgent *agent);

// Network input width and action count of the agent.
//
// # Safety
// `agent` must be a live handle; the outputs valid for one write each.
enum RqStatus rq_agent_shape(const struct RqAgent *agent, size_t *input_size, size_t *action_count);

// Online-network Q-values for one observation, written to `q_out`.
//
// # Safety
// `agent` must be a live handle; `obs` valid for `obs_len` reads; `q_out`
// valid for `q_len` writes.
enum RqStatus rq_agent_q_values(const struct RqAgent *agent,
                                const double *obs,
                                size_t obs_len,
                                double *q_out,
                                size_t q_len);

// Lowest-index argmax of the online Q-values.
//
// # Safety
// `agent` must be a live handle; `obs` valid for `obs_len` reads; `action`
// valid for one write.
enum RqStatus rq_agent_greedy_action(const struct RqAgent *agent,
                                     const double *obs,
                                     size_t obs_len,
                                     size_t *action);

// Copies the online network into the target network.
//
// # Safety
// `agent` must be a live handle not used concurrently.
enum RqStatus rq_agent_sync_target(struct RqAgent *agent);

// # Safety
// `out` must be valid for one write.
enum RqStatus rq_env_new(enum RqEnvKind kind, uint64_t seed, struct RqEnv **out);

// Releases an environment. Null is accepted and ignored.
//
// # Safety
// `env` must be null or a handle not yet freed.
void rq_env_free(struct RqEnv *env);

// # Safety
// `env` must be a live handle; `out` valid for one write.
enum RqStatus rq_env_spec(const struct RqEnv *env, struct RqEnvSpec *out);

// Starts a new episode and writes the initial observation to `obs_out`.
//
// # Safety
// `env` must be a live handle; `obs_out` valid for `obs_len` writes.
enum RqStatus rq_env_reset(struct RqEnv *env, double *obs_out, size_t obs_len);

// Applies `action`, writing the next observation to `obs_out` and the
// scalar outcome to `result`.
//
// # Safety
// `env` must be a live handle; `obs_out` valid for `obs_len` writes;
// `result` valid for one write.
enum RqStatus rq_env_step(struct RqEnv *env,
                          size_t action,
                          double *obs_out,
                          size_t obs_len,
                          struct RqStepResult *result);

// Mean cumulative regret over `n_seeds` runs (seeds `seed .. seed + n_seeds`)
// of a Gaussian bandit. `regret_out[t − 1]` receives `L(t)`.
//
// # Safety
// `means` valid for `n_arms` reads; `regret_out` for `regret_len` writes.
enum RqStatus rq_bandit_regret(const double *means,
                               size_t n_arms,
                               double noise_std,
                               size_t horizon,
                               enum RqBanditStrategy strategy,
                               double param,
                               uint64_t seed,
                               size_t n_seeds,
                               double *regret_out,
                               size_t regret_len);

// Runs a full training session from configuration text in the CLI's
// config-file format. `out_dir` may be null, in which case nothing is
// written to disk.
//
// # Safety
// `config_text` must be a NUL-terminated string; `out_dir` null or a
// NUL-terminated string; `summary` valid for one write.
enum RqStatus rq_train(const char *config_text,
                       const char *out_dir,
                       struct RqTrainSummary *summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REANNEAL_H */
