#ifndef XLRIS_MEASUREMENT_HPP
#define XLRIS_MEASUREMENT_HPP

#include <random>

#include "xlris/config.hpp"
#include "xlris/dictionary.hpp"
#include "xlris/types.hpp"

namespace xlris {

/// Training schedule: per snapshot a unit-modulus RIS reflection pattern s(t)
/// and a BS precoder f(t). The same schedule is reused on every subcarrier.
struct PilotSchedule {
  CMatrix s; // N x T, |entries| = 1
  CMatrix f; // N_t x T, i.i.d. standard complex Gaussian
  int length() const { return int(s.cols()); }
};

/// Random pilots: Gaussian precoders, uniform RIS phases.
PilotSchedule gen_pilots(const SystemConfig& cfg, int pilot_length,
                         std::mt19937_64& rng);

/// Physical sensing matrix C, column t = f(t) kron s(t); (N*N_t) x T.
CMatrix sensing_matrix(const PilotSchedule& pilots);

/// Equivalent sparse-domain sensing matrix Omega = (1/sqrt(N)) C^T E_mu.
CMatrix equivalent_sensing_matrix(const CMatrix& c_matrix,
                                  const UnifiedDictionary& dict);

struct ObservationSet {
  CMatrix c_matrix; // (N*N_t) x T
  CMatrix omega;    // T x (N*N_t)
  CMatrix y;        // T x P
  double noise_var = 0.0;
  double snr_db = 0.0;
};

/// Y = C^T H + N at the prescribed SNR. Noise is circularly symmetric
/// complex Gaussian; sigma_n^2 = mean |C^T H|^2 / 10^(SNR/10).
/// A non-finite snr_db (+inf) yields noise-free observations.
ObservationSet synthesize_observations(const CMatrix& h_stacked,
                                       const PilotSchedule& pilots,
                                       const UnifiedDictionary& dict,
                                       double snr_db, std::mt19937_64& rng);

}  // namespace xlris

#endif
