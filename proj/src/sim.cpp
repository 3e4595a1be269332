#include "hrcc/sim.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <thread>

#include "hrcc/decoder.hpp"
#include "hrcc/encoder.hpp"
#include "hrcc/trellis.hpp"

namespace hrcc {

double ChannelConfig::amplitude() const { return std::pow(10.0, snr_db / 20.0); }

namespace keyed_rng {

namespace {
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}
}  // namespace

std::uint64_t mix(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream,
                  std::uint64_t index) {
  std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ (trial * 0xd1342543de82ef95ull));
  h = mix64(h ^ (stream * 0xaf251af3b0f025b5ull));
  h = mix64(h ^ (index * 0x2545f4914f6cdd1dull));
  return h;
}

double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream,
                 std::uint64_t index) {
  const std::uint64_t h = mix(seed, trial, stream, index);
  return 1.0 - static_cast<double>(h >> 11) * 0x1.0p-53;  // (0, 1]
}

double gaussian(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream,
                std::uint64_t index) {
  const double u1 = uniform01(seed, trial, stream, 2 * index);
  const double u2 = uniform01(seed, trial, stream, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace keyed_rng

namespace {
constexpr std::uint64_t kStreamMessage = 0;
constexpr std::uint64_t kStreamNoise = 1;
}  // namespace

Bits random_message(std::uint64_t seed, std::uint64_t trial, int K) {
  Bits msg(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i)
    msg[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(keyed_rng::mix(seed, trial, kStreamMessage, static_cast<std::uint64_t>(i)) & 1u);
  return msg;
}

std::vector<double> channel_transmit(const Bits& codeword, const ChannelConfig& ch,
                                     std::uint64_t trial) {
  const double a = ch.amplitude();
  std::vector<double> out(codeword.size());
  for (std::size_t i = 0; i < codeword.size(); ++i)
    out[i] = a * (1.0 - 2.0 * codeword[i]) + keyed_rng::gaussian(ch.seed, trial, kStreamNoise, i);
  return out;
}

ComplexityBreakdown complexity_model(const CodeConfig& code, DecoderVariant variant, double mean_L,
                                     double mean_I, double p_wava) {
  const double c1 = 1.0, c2 = 1.0;
  const double km = code.K + code.m;
  const double v = code.v();
  const double two_v = std::ldexp(1.0, code.v());
  const double two_v1 = std::ldexp(1.0, code.v() + 1);
  ComplexityBreakdown cx;
  switch (variant) {
    case DecoderVariant::zt:
      cx.c_ssv = (two_v1 - 2) + 1.5 * (two_v1 - 2) + 1.5 * (km - v) * two_v1 +
                 c1 * (2 * (km + v) + 1.5 * km);
      cx.c_trace = c1 * (mean_L - 1.0) * (2 * (km + v) + 1.5 * km);
      break;
    case DecoderVariant::tb_single:
    case DecoderVariant::tb_wava:
      cx.c_ssv = 1.5 * km * two_v1 + two_v + 3.5 * c1 * km;
      cx.c_trace = 3.5 * c1 * (mean_L - 1.0) * km;
      break;
    case DecoderVariant::tb_multi:
      cx.c_ssv = two_v * (1.5 * km * two_v1) + 3.5 * c1 * km;
      cx.c_trace = 3.5 * c1 * (mean_L - 1.0) * km;
      break;
  }
  cx.c_list = mean_I > 1.0 ? c2 * mean_I * std::log(mean_I) : 0.0;
  if (variant == DecoderVariant::tb_wava) {
    cx.c_wava = 1.5 * km * two_v1 + two_v;
    cx.c_slvd = cx.c_ssv + p_wava * (cx.c_wava + cx.c_trace + cx.c_list);
  } else {
    cx.c_slvd = cx.c_ssv + cx.c_trace + cx.c_list;
  }
  return cx;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double union_bound_fer(const DistanceSpectrum& spectrum, double snr_db) {
  const double a = std::pow(10.0, snr_db / 20.0);
  double sum = 0.0;
  for (const auto& [d, count] : spectrum.counts)
    sum += static_cast<double>(count) * q_function(a * std::sqrt(static_cast<double>(d)));
  return sum;
}

namespace {

struct Worker {
  ConvEncoder enc;
  TerminationTable term;  // zt only
  ListDecoder decoder;

  explicit Worker(const CodeConfig& code)
      : enc(code.H),
        term(code.mode == TermMode::zt ? build_termination_table(enc) : TerminationTable{}),
        decoder(code) {}
};

TrialRecord run_trial(const CodeConfig& code, DecoderVariant variant, const ChannelConfig& ch,
                      std::uint64_t list_cap, Worker& w, std::uint64_t trial) {
  const Bits msg = random_message(ch.seed, trial, code.K);
  Bits codeword;
  if (code.mode == TermMode::zt) {
    codeword = zt_encode(msg, code, w.enc, w.term);
  } else {
    codeword = tb_encode(msg, code, w.enc).codeword;
  }
  const std::vector<double> received = channel_transmit(codeword, ch, trial);
  DecoderOptions opts;
  opts.list_cap = list_cap;
  const DecodeResult res = w.decoder.decode(variant, received, ch.amplitude(), opts);

  TrialRecord rec;
  rec.trial = trial;
  rec.exhausted = res.status == DecodeResult::Status::list_exhausted;
  rec.undetected = res.status == DecodeResult::Status::found && res.data != msg;
  rec.error = rec.exhausted || rec.undetected;
  rec.wava_early = res.wava_terminated_early;
  rec.tb = res.tb_satisfied;
  rec.list_rank = res.list_rank;
  rec.insertions = res.insertions;
  return rec;
}

}  // namespace

SimSummary simulate_point(const CodeConfig& code, DecoderVariant variant, const ChannelConfig& ch,
                          const StopRule& stop, std::uint64_t list_cap, int workers,
                          const TrialSink& sink) {
  code.validate();
  if (!variant_matches_mode(variant, code.mode))
    throw ConfigError("simulate: decoder variant incompatible with the code mode");
  const int nw = std::max(1, workers);
  std::vector<std::unique_ptr<Worker>> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int i = 0; i < nw; ++i) pool.push_back(std::make_unique<Worker>(code));

  const std::uint64_t chunk = 1024;
  std::vector<TrialRecord> records(chunk);

  std::uint64_t errors = 0, undetected = 0, exhausted = 0, early = 0;
  std::uint64_t sum_L = 0, max_L = 0, sum_I = 0, counted = 0;
  bool done = false;

  for (std::uint64_t base = 0; base < stop.max_trials && !done; base += chunk) {
    const std::uint64_t cnt = std::min(chunk, stop.max_trials - base);
    if (nw == 1) {
      for (std::uint64_t i = 0; i < cnt; ++i)
        records[i] = run_trial(code, variant, ch, list_cap, *pool[0], base + i);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(static_cast<std::size_t>(nw));
      for (int t = 0; t < nw; ++t) {
        threads.emplace_back([&, t]() {
          for (std::uint64_t i = static_cast<std::uint64_t>(t); i < cnt; i += static_cast<std::uint64_t>(nw))
            records[i] = run_trial(code, variant, ch, list_cap, *pool[static_cast<std::size_t>(t)], base + i);
        });
      }
      for (auto& th : threads) th.join();
    }
    // Stop-rule scan in trial order; only trials up to the stopping index count.
    for (std::uint64_t i = 0; i < cnt; ++i) {
      const TrialRecord& r = records[i];
      ++counted;
      errors += r.error;
      undetected += r.undetected;
      exhausted += r.exhausted;
      early += r.wava_early;
      sum_L += r.list_rank;
      max_L = std::max(max_L, r.list_rank);
      sum_I += r.insertions;
      if (sink) sink(r);
      if (stop.min_errors && errors >= stop.min_errors) {
        done = true;
        break;
      }
    }
  }

  SimSummary s;
  s.snr_db = ch.snr_db;
  s.trials = counted;
  s.errors = errors;
  s.undetected = undetected;
  s.exhausted = exhausted;
  s.fer = counted ? static_cast<double>(errors) / static_cast<double>(counted) : 0.0;
  s.fer_ci95 = counted ? 1.959963984540054 * std::sqrt(s.fer * (1.0 - s.fer) / static_cast<double>(counted)) : 0.0;
  s.mean_L = counted ? static_cast<double>(sum_L) / static_cast<double>(counted) : 0.0;
  s.max_L = max_L;
  s.mean_I = counted ? static_cast<double>(sum_I) / static_cast<double>(counted) : 0.0;
  s.p_wava = (variant == DecoderVariant::tb_wava && counted)
                 ? 1.0 - static_cast<double>(early) / static_cast<double>(counted)
                 : 0.0;
  s.cx = complexity_model(code, variant, s.mean_L, s.mean_I, s.p_wava);
  return s;
}

std::vector<SimSummary> run_fer_simulation(const RunConfig& rc, const TrialSink& sink) {
  rc.validate();
  std::vector<SimSummary> out;
  out.reserve(rc.snr_db.size());
  for (double snr : rc.snr_db) {
    ChannelConfig ch{snr, rc.seed};
    out.push_back(simulate_point(rc.code, rc.variant, ch, rc.stop, rc.list_cap, rc.workers, sink));
  }
  return out;
}

std::string csv_header() {
  return "# hrcc-csv v1\n"
         "snr_db,trials,errors,fer,fer_ci95,mean_L,max_L,mean_I,p_wava,c_ssv,c_trace,c_list,"
         "c_slvd,undetected,exhausted\n";
}

std::string csv_row(const SimSummary& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.10g,%llu,%llu,%.10g,%.10g,%.10g,%llu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%llu,%llu\n",
                s.snr_db, static_cast<unsigned long long>(s.trials),
                static_cast<unsigned long long>(s.errors), s.fer, s.fer_ci95, s.mean_L,
                static_cast<unsigned long long>(s.max_L), s.mean_I, s.p_wava, s.cx.c_ssv,
                s.cx.c_trace, s.cx.c_list, s.cx.c_slvd,
                static_cast<unsigned long long>(s.undetected),
                static_cast<unsigned long long>(s.exhausted));
  return buf;
}

}  // namespace hrcc
