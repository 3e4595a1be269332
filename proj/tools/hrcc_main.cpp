#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hrcc/crcdesign.hpp"
#include "hrcc/decoder.hpp"
#include "hrcc/encoder.hpp"
#include "hrcc/sim.hpp"
#include "hrcc/trellis.hpp"

namespace {

using nlohmann::json;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << text;
}

json spectrum_to_json(const hrcc::DistanceSpectrum& sp) {
  json j = json::object();
  for (const auto& [d, c] : sp.counts) j[std::to_string(d)] = c;
  return j;
}

std::vector<double> read_received(const std::string& path, const std::string& format) {
  std::vector<double> vals;
  if (format == "f64le") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    double x;
    while (in.read(reinterpret_cast<char*>(&x), sizeof x)) vals.push_back(x);
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    double x;
    while (in >> x) vals.push_back(x);
  }
  return vals;
}

int run(int argc, char** argv) {
  CLI::App app{"CRC-aided dual-trellis list decoding of high-rate convolutional codes"};
  app.require_subcommand(1);

  // ---- design-crc ----
  auto* design = app.add_subcommand("design-crc", "search the distance-spectrum-optimal CRC");
  std::string d_H, d_mode = "tb", d_out;
  int d_v = 0, d_n = 0, d_K = 0, d_m = 0, d_dtilde = 0, d_maxlen = 0;
  design->add_option("--H", d_H, "parity polynomials, octal, stream n-1 first")->required();
  design->add_option("--v", d_v, "overall constraint length")->required();
  design->add_option("--n", d_n, "number of output streams")->required();
  design->add_option("--K", d_K, "information length")->required();
  design->add_option("--m", d_m, "CRC degree")->required();
  design->add_option("--mode", d_mode, "zt or tb");
  design->add_option("--d-tilde", d_dtilde, "weight threshold override");
  design->add_option("--max-len", d_maxlen, "event length cap override");
  design->add_option("--out", d_out, "output path (default stdout)");

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Monte Carlo FER/complexity evaluation");
  std::string s_config, s_out, s_trial_log;
  std::vector<double> s_snr;
  std::uint64_t s_max_trials = 0, s_min_errors = 0, s_list_cap = 0, s_seed = 0;
  int s_workers = 0;
  bool s_seed_set = false;
  sim->add_option("--config", s_config, "run configuration JSON")->required();
  sim->add_option("--snr", s_snr, "override the SNR points (dB)");
  sim->add_option("--max-trials", s_max_trials, "override stop.max_trials");
  sim->add_option("--min-errors", s_min_errors, "override stop.min_errors");
  sim->add_option("--list-cap", s_list_cap, "override the list cap");
  sim->add_option("--seed", s_seed, "override the channel seed")->each([&](const std::string&) {
    s_seed_set = true;
  });
  sim->add_option("--workers", s_workers, "override the worker count");
  sim->add_option("--out", s_out, "CSV output path (default stdout)");
  sim->add_option("--trial-log", s_trial_log, "per-trial JSON-lines log path");

  // ---- encode ----
  auto* enc_cmd = app.add_subcommand("encode", "encode one data block");
  std::string e_config, e_data, e_out, e_bpsk_out;
  enc_cmd->add_option("--config", e_config, "run configuration JSON")->required();
  enc_cmd->add_option("--data", e_data, "K data bits as hex")->required();
  enc_cmd->add_option("--out", e_out, "output path (default stdout)");
  enc_cmd->add_option("--bpsk-out", e_bpsk_out, "write noiseless unit-amplitude BPSK values");

  // ---- decode ----
  auto* dec_cmd = app.add_subcommand("decode", "decode one received vector");
  std::string c_config, c_received, c_format = "text", c_out;
  double c_snr = std::numeric_limits<double>::quiet_NaN();
  dec_cmd->add_option("--config", c_config, "run configuration JSON")->required();
  dec_cmd->add_option("--received", c_received, "received vector file")->required();
  dec_cmd->add_option("--format", c_format, "text (one real per line) or f64le");
  dec_cmd->add_option("--snr-db", c_snr, "channel SNR in dB (default: first config point)");
  dec_cmd->add_option("--out", c_out, "output path (default stdout)");

  // ---- dump-trellis ----
  auto* dump = app.add_subcommand("dump-trellis", "emit one dual-trellis period as DOT");
  std::string t_H, t_out;
  int t_v = 0, t_n = 0;
  bool t_root = false;
  dump->add_option("--H", t_H, "parity polynomials, octal")->required();
  dump->add_option("--v", t_v, "overall constraint length")->required();
  dump->add_option("--n", t_n, "number of output streams")->required();
  dump->add_flag("--root", t_root, "append the terminal root node");
  dump->add_option("--out", t_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (design->parsed()) {
    hrcc::ParityCheck H = hrcc::ParityCheck::from_octal_csv(d_H);
    if (H.n != d_n) throw hrcc::ConfigError("--n does not match the H entry count");
    if (H.v != d_v) throw hrcc::ConfigError("--v does not match the maximum degree in H");
    hrcc::DsoOptions opts;
    opts.d_tilde_override = d_dtilde;
    opts.max_len_override = d_maxlen;
    const hrcc::DsoDesign res =
        hrcc::design_dso_crc(H, d_K, d_m, hrcc::term_mode_from_string(d_mode), opts);
    json j;
    j["crc_hex"] = res.crc.to_hex();
    j["d_min"] = res.spectrum.min_distance();
    j["spectrum"] = spectrum_to_json(res.spectrum);
    j["d_tilde_used"] = res.d_tilde_used;
    j["elapsed"] = res.elapsed_seconds;
    if (res.co_winners.size() > 1) {
      json cw = json::array();
      for (const auto& p : res.co_winners) cw.push_back(p.to_hex());
      j["co_winners"] = cw;
    }
    write_output(j.dump(2) + "\n", d_out);
    return 0;
  }

  if (sim->parsed()) {
    hrcc::RunConfig rc = hrcc::load_run_config(s_config);
    if (!s_snr.empty()) rc.snr_db = s_snr;
    if (s_max_trials) rc.stop.max_trials = s_max_trials;
    if (s_min_errors) rc.stop.min_errors = s_min_errors;
    if (s_list_cap) rc.list_cap = s_list_cap;
    if (s_seed_set) rc.seed = s_seed;
    if (s_workers) rc.workers = s_workers;
    rc.validate();

    std::ofstream trial_log;
    hrcc::TrialSink sink;
    if (!s_trial_log.empty()) {
      trial_log.open(s_trial_log);
      if (!trial_log) throw std::runtime_error("cannot open " + s_trial_log);
      sink = [&trial_log](const hrcc::TrialRecord& r) {
        trial_log << "{\"trial\":" << r.trial << ",\"error\":" << (r.error ? "true" : "false")
                  << ",\"undetected\":" << (r.undetected ? "true" : "false")
                  << ",\"exhausted\":" << (r.exhausted ? "true" : "false")
                  << ",\"L\":" << r.list_rank << ",\"I\":" << r.insertions
                  << ",\"wava_early\":" << (r.wava_early ? "true" : "false")
                  << ",\"tb\":" << (r.tb ? "true" : "false") << "}\n";
      };
    }
    std::string csv = hrcc::csv_header();
    for (const auto& summary : hrcc::run_fer_simulation(rc, sink)) csv += hrcc::csv_row(summary);
    write_output(csv, s_out);
    return 0;
  }

  if (enc_cmd->parsed()) {
    const hrcc::RunConfig rc = hrcc::load_run_config(e_config);
    const hrcc::Bits data = hrcc::hex_to_bits(e_data, static_cast<std::size_t>(rc.code.K));
    hrcc::Bits codeword;
    json j;
    if (rc.code.mode == hrcc::TermMode::zt) {
      codeword = hrcc::zt_encode(data, rc.code);
    } else {
      const auto enc = hrcc::tb_encode(data, rc.code);
      codeword = enc.codeword;
      j["initial_state"] = enc.initial_state;
    }
    j["codeword_hex"] = hrcc::bits_to_hex(codeword);
    j["n_bits"] = codeword.size();
    if (!e_bpsk_out.empty()) {
      std::ofstream bp(e_bpsk_out);
      if (!bp) throw std::runtime_error("cannot open " + e_bpsk_out);
      for (auto b : codeword) bp << (b ? -1.0 : 1.0) << "\n";
    }
    write_output(j.dump(2) + "\n", e_out);
    return 0;
  }

  if (dec_cmd->parsed()) {
    const hrcc::RunConfig rc = hrcc::load_run_config(c_config);
    const std::vector<double> received = read_received(c_received, c_format);
    const double snr = std::isnan(c_snr) ? rc.snr_db.front() : c_snr;
    const double amplitude = std::pow(10.0, snr / 20.0);
    hrcc::ListDecoder dec(rc.code);
    hrcc::DecoderOptions opts;
    opts.list_cap = rc.list_cap;
    const hrcc::DecodeResult res = dec.decode(rc.variant, received, amplitude, opts);
    json j;
    j["status"] = res.status == hrcc::DecodeResult::Status::found ? "found" : "list_exhausted";
    j["data"] = res.status == hrcc::DecodeResult::Status::found ? hrcc::bits_to_hex(res.data) : "";
    j["L"] = res.list_rank;
    j["I"] = res.insertions;
    j["metric"] = res.final_metric;
    j["tb"] = res.tb_satisfied;
    j["wava_early"] = res.wava_terminated_early;
    write_output(j.dump(2) + "\n", c_out);
    return 0;
  }

  if (dump->parsed()) {
    hrcc::ParityCheck H = hrcc::ParityCheck::from_octal_csv(t_H);
    if (H.n != t_n) throw hrcc::ConfigError("--n does not match the H entry count");
    if (H.v != t_v) throw hrcc::ConfigError("--v does not match the maximum degree in H");
    hrcc::DualTrellis t(H, H.n);  // one period
    if (t_root) t = hrcc::augment_root_node(std::move(t));
    write_output(hrcc::trellis_to_dot(t), t_out);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hrcc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
