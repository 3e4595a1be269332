#include "hrcc/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hrcc {

std::string to_string(TermMode m) { return m == TermMode::zt ? "zt" : "tb"; }

std::string to_string(DecoderVariant v) {
  switch (v) {
    case DecoderVariant::zt: return "zt";
    case DecoderVariant::tb_single: return "tb_single";
    case DecoderVariant::tb_multi: return "tb_multi";
    case DecoderVariant::tb_wava: return "tb_wava";
  }
  return "?";
}

TermMode term_mode_from_string(const std::string& s) {
  if (s == "zt" || s == "ZT") return TermMode::zt;
  if (s == "tb" || s == "TB") return TermMode::tb;
  throw ConfigError("mode: expected \"zt\" or \"tb\", got \"" + s + "\"");
}

DecoderVariant variant_from_string(const std::string& s) {
  if (s == "zt") return DecoderVariant::zt;
  if (s == "tb_single") return DecoderVariant::tb_single;
  if (s == "tb_multi") return DecoderVariant::tb_multi;
  if (s == "tb_wava") return DecoderVariant::tb_wava;
  throw ConfigError("decoder: unknown variant \"" + s + "\"");
}

bool variant_matches_mode(DecoderVariant v, TermMode m) {
  return (v == DecoderVariant::zt) == (m == TermMode::zt);
}

ParityCheck ParityCheck::from_octal_csv(const std::string& csv) {
  ParityCheck H;
  std::stringstream ss(csv);
  std::string tok;
  std::vector<BinaryPolynomial> listed;  // stream n-1 first
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw ConfigError("H: empty octal entry");
    listed.push_back(parse_poly(tok, PolyBase::octal));
  }
  H.n = static_cast<int>(listed.size());
  H.polys.assign(listed.rbegin(), listed.rend());
  H.v = 0;
  for (const auto& p : H.polys) H.v = std::max(H.v, p.degree());
  H.validate();
  return H;
}

std::string ParityCheck::to_octal_csv() const {
  std::string s;
  for (int i = n - 1; i >= 0; --i) {
    if (!s.empty()) s += ",";
    s += polys[static_cast<std::size_t>(i)].to_octal();
  }
  return s;
}

std::uint32_t ParityCheck::taps(int stream) const {
  return static_cast<std::uint32_t>(polys[static_cast<std::size_t>(stream)].taps(v + 1));
}

void ParityCheck::validate() const {
  if (n < 2) throw ConfigError("H: need at least 2 streams");
  if (static_cast<int>(polys.size()) != n) throw ConfigError("H: stream count mismatch");
  if (polys[0].is_zero()) throw ConfigError("H: parity stream polynomial h^(0) is zero");
  if (v < 1 || v > 24) throw ConfigError("H: constraint length out of range");
  int maxdeg = -1;
  for (const auto& p : polys) maxdeg = std::max(maxdeg, p.degree());
  if (maxdeg != v) throw ConfigError("H: v does not equal the maximum polynomial degree");
}

int CodeConfig::term_steps() const {
  if (mode == TermMode::tb) return 0;
  return (v() + n() - 2) / (n() - 1);  // ceil(v / (n-1))
}

int CodeConfig::term_input_bits() const { return (n() - 1) * term_steps(); }

void CodeConfig::validate() const {
  H.validate();
  if (K < 1) throw ConfigError("K: must be positive");
  if (m < 1) throw ConfigError("m: must be positive");
  if (crc.degree() != m) throw ConfigError("crc: degree does not equal m");
  if (crc.coeff(0) != 1) throw ConfigError("crc: constant term must be 1");
  if ((K + m) % (n() - 1) != 0)
    throw ConfigError("K, m: (K+m) must be divisible by (n-1) for the blocklength identity");
}

void RunConfig::validate() const {
  code.validate();
  if (!variant_matches_mode(variant, code.mode))
    throw ConfigError("decoder: variant " + to_string(variant) + " incompatible with mode " +
                      to_string(code.mode));
  if (snr_db.empty()) throw ConfigError("snr_db: need at least one SNR point");
  if (workers < 1) throw ConfigError("workers: must be >= 1");
  if (stop.max_trials < 1) throw ConfigError("stop.max_trials: must be >= 1");
}

namespace {

using nlohmann::json;

CodeConfig code_from_json(const json& j) {
  for (const auto& [key, _] : j.items()) {
    if (key != "n" && key != "v" && key != "H" && key != "K" && key != "m" && key != "crc" &&
        key != "mode")
      throw ConfigError("code." + key + ": unknown field");
  }
  for (const char* req : {"n", "v", "H", "K", "m", "crc", "mode"})
    if (!j.contains(req)) throw ConfigError(std::string("code.") + req + ": missing field");
  CodeConfig c;
  c.H = ParityCheck::from_octal_csv(j.at("H").get<std::string>());
  if (j.at("n").get<int>() != c.H.n) throw ConfigError("code.n: does not match H entry count");
  if (j.at("v").get<int>() != c.H.v) throw ConfigError("code.v: does not match max degree in H");
  c.K = j.at("K").get<int>();
  c.m = j.at("m").get<int>();
  c.crc = parse_poly(j.at("crc").get<std::string>(), PolyBase::hex);
  c.mode = term_mode_from_string(j.at("mode").get<std::string>());
  c.validate();
  return c;
}

json code_to_json(const CodeConfig& c) {
  json j;
  j["n"] = c.n();
  j["v"] = c.v();
  j["H"] = c.H.to_octal_csv();
  j["K"] = c.K;
  j["m"] = c.m;
  j["crc"] = c.crc.to_hex();
  j["mode"] = to_string(c.mode);
  return j;
}

}  // namespace

RunConfig run_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "code" && key != "channel" && key != "decoder" && key != "snr_db" &&
        key != "stop" && key != "list_cap" && key != "workers")
      throw ConfigError(key + ": unknown field");
  }
  if (!j.contains("code")) throw ConfigError("code: missing field");
  if (!j.contains("decoder")) throw ConfigError("decoder: missing field");
  if (!j.contains("snr_db")) throw ConfigError("snr_db: missing field");

  RunConfig rc;
  rc.code = code_from_json(j.at("code"));
  rc.variant = variant_from_string(j.at("decoder").get<std::string>());
  rc.snr_db = j.at("snr_db").get<std::vector<double>>();
  if (j.contains("channel")) {
    const auto& ch = j.at("channel");
    for (const auto& [key, _] : ch.items())
      if (key != "seed") throw ConfigError("channel." + key + ": unknown field");
    if (ch.contains("seed")) rc.seed = ch.at("seed").get<std::uint64_t>();
  }
  if (j.contains("stop")) {
    const auto& st = j.at("stop");
    for (const auto& [key, _] : st.items())
      if (key != "min_errors" && key != "max_trials")
        throw ConfigError("stop." + key + ": unknown field");
    if (st.contains("min_errors")) rc.stop.min_errors = st.at("min_errors").get<std::uint64_t>();
    if (st.contains("max_trials")) rc.stop.max_trials = st.at("max_trials").get<std::uint64_t>();
  }
  if (j.contains("list_cap")) rc.list_cap = j.at("list_cap").get<std::uint64_t>();
  if (j.contains("workers")) rc.workers = j.at("workers").get<int>();
  rc.validate();
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from_json_text(ss.str());
}

std::string run_config_to_json_text(const RunConfig& rc) {
  json j;
  j["code"] = code_to_json(rc.code);
  j["channel"] = {{"seed", rc.seed}};
  j["decoder"] = to_string(rc.variant);
  j["snr_db"] = rc.snr_db;
  j["stop"] = {{"min_errors", rc.stop.min_errors}, {"max_trials", rc.stop.max_trials}};
  j["list_cap"] = rc.list_cap;
  j["workers"] = rc.workers;
  return j.dump(2) + "\n";
}

}  // namespace hrcc
