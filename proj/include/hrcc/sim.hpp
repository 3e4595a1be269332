#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hrcc/bits.hpp"
#include "hrcc/config.hpp"
#include "hrcc/crcdesign.hpp"

namespace hrcc {

struct ChannelConfig {
  double snr_db = 0.0;  // 10*log10(A^2), unit-variance noise
  std::uint64_t seed = 1;
  double amplitude() const;
};

// Counter-based keyed randomness: every draw is a pure function of
// (seed, trial, stream, index), so trials are replayable and independent of
// worker scheduling.
namespace keyed_rng {
std::uint64_t mix(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream,
                  std::uint64_t index);
double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream,
                 std::uint64_t index);  // in (0, 1]
double gaussian(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream,
                std::uint64_t index);
}  // namespace keyed_rng

Bits random_message(std::uint64_t seed, std::uint64_t trial, int K);

// BPSK maps bit b to A*(1-2b); adds standard-normal noise from the keyed
// stream of (seed, trial).
std::vector<double> channel_transmit(const Bits& codeword, const ChannelConfig& ch,
                                     std::uint64_t trial);

struct TrialRecord {
  std::uint64_t trial = 0;
  bool error = false;
  bool undetected = false;  // CRC passed but the data is wrong
  bool exhausted = false;   // list cap hit (counted as a frame error)
  bool wava_early = false;
  bool tb = false;
  std::uint64_t list_rank = 0;
  std::uint64_t insertions = 0;
};

struct ComplexityBreakdown {
  double c_ssv = 0.0;
  double c_trace = 0.0;
  double c_list = 0.0;
  double c_wava = 0.0;
  double c_slvd = 0.0;
};

// Closed-form average complexity of the list decoder assembled from the
// measured expectations (computer constants c1 = c2 = 1).
ComplexityBreakdown complexity_model(const CodeConfig& code, DecoderVariant variant, double mean_L,
                                     double mean_I, double p_wava);

double q_function(double x);
// Truncated union bound: sum over the spectrum of count(d) * Q(A*sqrt(d)).
double union_bound_fer(const DistanceSpectrum& spectrum, double snr_db);

struct SimSummary {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  std::uint64_t undetected = 0;
  std::uint64_t exhausted = 0;
  double fer = 0.0;
  double fer_ci95 = 0.0;  // normal-approximation half width
  double mean_L = 0.0;
  std::uint64_t max_L = 0;
  double mean_I = 0.0;
  double p_wava = 0.0;
  ComplexityBreakdown cx;
};

using TrialSink = std::function<void(const TrialRecord&)>;

// One SNR point. The stop rule (min frame errors / max trials) is evaluated
// in trial order, so the result is identical for any worker count. The sink,
// when set, receives every counted trial in order.
SimSummary simulate_point(const CodeConfig& code, DecoderVariant variant, const ChannelConfig& ch,
                          const StopRule& stop, std::uint64_t list_cap, int workers,
                          const TrialSink& sink = {});

std::vector<SimSummary> run_fer_simulation(const RunConfig& rc, const TrialSink& sink = {});

std::string csv_header();
std::string csv_row(const SimSummary& s);

}  // namespace hrcc
