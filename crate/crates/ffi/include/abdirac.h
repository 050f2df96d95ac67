#ifndef ABDIRAC_H
#define ABDIRAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AbdiracStateKind {
  ABDIRAC_STATE_KIND_SHIELDED = 0,
  ABDIRAC_STATE_KIND_BARE = 1,
} AbdiracStateKind;

typedef enum AbdiracStatus {
  ABDIRAC_STATUS_OK = 0,
  ABDIRAC_STATUS_NULL_POINTER = 1,
  // A parameter is out of range or inconsistent.
  ABDIRAC_STATUS_INVALID_ARGUMENT = 2,
  // Parameters outside the regime where the requested form holds.
  ABDIRAC_STATUS_REGIME = 3,
  // Convergence, overflow or tolerance failure inside the computation.
  ABDIRAC_STATUS_NUMERICAL = 4,
  ABDIRAC_STATUS_PANIC = 5,
} AbdiracStatus;

// Coupling and kinematics of one electron state. Opaque to C.
typedef struct AbdiracSystem AbdiracSystem;

typedef struct AbdiracComplex {
  double re;
  double im;
} AbdiracComplex;

// Incident Gaussian packet: width, initial distance, initial angle and
// wavenumber.
typedef struct AbdiracPacket {
  double delta;
  double rho0;
  double theta0;
  double k;
} AbdiracPacket;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *abdirac_version(void);

// Message for the most recent failure on this thread, or "" if none.
// Valid until the next failing call on the same thread.
const char *abdirac_last_error(void);

// Creates a system with coupling alpha, total energy and mass. A NaN
// `barrier_height` means no barrier. Free with `abdirac_system_free`.
//
// # Safety
// `out` is null or valid for a pointer write.
enum AbdiracStatus abdirac_system_new(double alpha,
                                      double energy,
                                      double mass,
                                      double barrier_height,
                                      struct AbdiracSystem **out);

// Releases a system. Null is ignored.
//
// # Safety
// `sys` is null or came from `abdirac_system_new` and is not used again.
void abdirac_system_free(struct AbdiracSystem *sys);

// Exterior wavenumber k of the system.
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_system_wavenumber(const struct AbdiracSystem *sys, double *out);

// Bare-tube matching coefficient A for angular momentum l, channel 1 or 2
// and tube radius r0.
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_matching_coefficient(const struct AbdiracSystem *sys,
                                                int64_t l,
                                                uint8_t channel_index,
                                                double r0,
                                                struct AbdiracComplex *out);

// Limit r0 -> 0 of the bare-tube coefficient, with the extrapolation
// error estimate in `out_error` (may be null).
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_matching_limit(const struct AbdiracSystem *sys,
                                          int64_t l,
                                          uint8_t channel_index,
                                          struct AbdiracComplex *out,
                                          double *out_error);

// Closed-form limit of the anomalous coefficient; fails for integer alpha.
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_anomalous_limit(const struct AbdiracSystem *sys,
                                           struct AbdiracComplex *out);

// Matching coefficient outside a shielding barrier of radius `r_outer`.
// The system needs a barrier height.
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_shielded_matching(const struct AbdiracSystem *sys,
                                             int64_t l,
                                             uint8_t channel_index,
                                             double r_outer,
                                             struct AbdiracComplex *out);

// Scattering amplitude f(theta) of the spinless scattered wave.
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_scattering_amplitude(const struct AbdiracSystem *sys,
                                                double theta,
                                                struct AbdiracComplex *out);

// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_differential_cross_section(const struct AbdiracSystem *sys,
                                                      double theta,
                                                      double *out);

// Four-component scattering state at (r, theta) for incident weights
// (a1, a2). `out` receives four values.
//
// # Safety
// `sys` is null or valid; `out` is null or valid for four writes.
enum AbdiracStatus abdirac_scattering_state(const struct AbdiracSystem *sys,
                                            enum AbdiracStateKind kind,
                                            struct AbdiracComplex a1,
                                            struct AbdiracComplex a2,
                                            double r,
                                            double theta,
                                            struct AbdiracComplex *out);

// Difference of the bare and shielded Green's functions between (r', theta')
// at time 0 and (r, theta) at time t, for the system's coupling and mass.
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_greens_diff(const struct AbdiracSystem *sys,
                                       double r,
                                       double r_prime,
                                       double theta,
                                       double theta_prime,
                                       double t,
                                       struct AbdiracComplex *out);

// Closed-form packet difference Delta at (r, theta, t). Fails with
// `ABDIRAC_STATUS_REGIME` outside the regime where it holds.
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_delta_closed(const struct AbdiracSystem *sys,
                                        const struct AbdiracPacket *pkt,
                                        double r,
                                        double theta,
                                        double t,
                                        struct AbdiracComplex *out);

// Packet difference by quadrature over the initial packet with the exact
// kernel; `out_error` (may be null) receives the error estimate.
//
// # Safety
// Pointers are null or valid.
enum AbdiracStatus abdirac_delta_quadrature(const struct AbdiracSystem *sys,
                                            const struct AbdiracPacket *pkt,
                                            double r,
                                            double theta,
                                            double t,
                                            struct AbdiracComplex *out,
                                            double *out_error);

// J_nu(z) for real order and complex argument.
//
// # Safety
// `out` is null or valid.
enum AbdiracStatus abdirac_bessel_j(double nu, struct AbdiracComplex z, struct AbdiracComplex *out);

// H^(1)_nu(z) for real order and complex argument.
//
// # Safety
// `out` is null or valid.
enum AbdiracStatus abdirac_hankel1(double nu, struct AbdiracComplex z, struct AbdiracComplex *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABDIRAC_H */
