// Copyright 2026 The zakotfs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "zakotfs/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "zakotfs/equalizer.hpp"
#include "zakotfs/fd_link.hpp"
#include "zakotfs/waveform.hpp"
#include "zakotfs/zak.hpp"

namespace zakotfs {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

EqualizerChoice parse_equalizer(const std::string& s) {
  if (s == "fd_banded") return EqualizerChoice::fd_banded;
  if (s == "dd_dense") return EqualizerChoice::dd_dense;
  if (s == "both") return EqualizerChoice::both;
  throw std::invalid_argument("equalizer must be fd_banded, dd_dense or both (got '" + s + "')");
}

TapSource parse_taps(const std::string& s) {
  if (s == "analytic") return TapSource::analytic;
  if (s == "sounding") return TapSource::sounding;
  throw std::invalid_argument("taps must be analytic or sounding (got '" + s + "')");
}

struct FrameOutcome {
  long fd_errors = 0;
  long dd_errors = 0;
  double fd_time = 0.0;
  double dd_time = 0.0;
};

class SweepContext {
 public:
  explicit SweepContext(const SimConfig& cfg) : cfg_(cfg), qam_(Constellation::qam4()) {
    params_ = cfg.params;
    if (cfg.channel != "identity") {
      profile_ = cfg.channel == "veh_a" ? veh_a_profile() : load_profile(cfg.channel);
      if (profile_->nu_max) params_.nu_max = *profile_->nu_max;
      params_.validate();
      for (double d : profile_->delays)
        if (d > params_.tau_max * (1.0 + 1e-12))
          throw std::invalid_argument("channel profile delay exceeds tau_max");
      if (cfg.taps == TapSource::sounding) pulses_ = make_gaussian_pulses(params_);
    }
    half_band_ = cfg.band == 0 ? params_.l_max() : (cfg.band - 1) / 4;
  }

  int band_width() const { return 4 * half_band_ + 1; }

  FrameOutcome run_frame(double snr_db, std::uint64_t seed) const {
    const std::uint64_t chan_seed = splitmix64(seed ^ 0x1), bit_seed = splitmix64(seed ^ 0x2),
                        noise_seed = splitmix64(seed ^ 0x3);
    const EffectiveDDChannel eff = channel(chan_seed);

    std::mt19937_64 rng(bit_seed);
    std::vector<std::uint8_t> bits(std::size_t(params_.mn()) * qam_.bits_per_symbol());
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
    const QuasiPeriodicFrame x =
        embed_symbols(symbols_to_frame(qam_map(bits, qam_), params_.M, params_.N), params_);

    const double rho = std::pow(10.0, snr_db / 10.0);
    const double noise_var = cfg_.noiseless ? 0.0 : snr_to_noise_var(rho);
    const QuasiPeriodicFrame y = apply_dd_io(x, eff, noise_var, noise_seed);

    FrameOutcome out;
    using clock = std::chrono::steady_clock;
    if (cfg_.equalizer != EqualizerChoice::dd_dense) {
      const auto t0 = clock::now();
      const BandedFDMatrix H = build_banded_matrix(dd_to_fd_response(eff, half_band_));
      const FDSeq S_hat = lmmse_fd_banded(H, idfzt(y), rho);
      const SymbolEstimate est = recover_symbols(S_hat, qam_, params_);
      out.fd_time = std::chrono::duration<double>(clock::now() - t0).count();
      out.fd_errors = count_errors(bits, est.bits);
    }
    if (cfg_.equalizer != EqualizerChoice::fd_banded) {
      const auto t0 = clock::now();
      const SymbolEstimate est = decide_symbols(lmmse_dd_dense(eff, y, rho), qam_);
      out.dd_time = std::chrono::duration<double>(clock::now() - t0).count();
      out.dd_errors = count_errors(bits, est.bits);
    }
    return out;
  }

  long bits_per_frame() const { return params_.mn() * qam_.bits_per_symbol(); }

 private:
  EffectiveDDChannel channel(std::uint64_t seed) const {
    if (!profile_) return identity_dd_channel(params_);
    const PhysicalChannel chan = draw_channel(*profile_, params_, seed);
    if (cfg_.taps == TapSource::sounding) return sound_effective_channel(chan, *pulses_, params_);
    return effective_dd_taps(chan, params_);
  }

  static long count_errors(const std::vector<std::uint8_t>& a,
                           const std::vector<std::uint8_t>& b) {
    long n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] != b[i]);
    return n;
  }

  const SimConfig& cfg_;
  FrameParams params_;
  Constellation qam_;
  std::optional<PowerDelayProfile> profile_;
  std::optional<PulsePair> pulses_;
  int half_band_ = 0;
};

}  // namespace

std::string to_string(EqualizerChoice e) {
  switch (e) {
    case EqualizerChoice::fd_banded: return "fd_banded";
    case EqualizerChoice::dd_dense: return "dd_dense";
    case EqualizerChoice::both: return "both";
  }
  return "";
}

std::string to_string(TapSource t) { return t == TapSource::analytic ? "analytic" : "sounding"; }

int SimConfig::equalizer_half_band() const { return band == 0 ? params.l_max() : (band - 1) / 4; }

void SimConfig::validate() const {
  params.validate();
  if (snr_db.empty()) throw std::invalid_argument("snr_db: at least one SNR point required");
  if (frames <= 0) throw std::invalid_argument("frames must be positive");
  if (threads <= 0) throw std::invalid_argument("threads must be positive");
  if (channel.empty()) throw std::invalid_argument("channel must name a profile");
  if (band != 0) {
    if (band < 1 || (band - 1) % 4 != 0)
      throw std::invalid_argument("band must be 0 (full) or of the form 4L+1, got " +
                                  std::to_string(band));
    if (band > params.full_band())
      throw std::invalid_argument("band " + std::to_string(band) + " exceeds the full band " +
                                  std::to_string(params.full_band()));
  }
  if (params.mn() < 4L * equalizer_half_band() + 1)
    throw std::invalid_argument("frame too small for the FD band");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t frame_seed(std::uint64_t master, std::size_t snr_index, std::size_t frame_index) {
  return splitmix64(master ^ splitmix64((std::uint64_t(snr_index) << 32) | frame_index));
}

std::vector<BERRecord> run_ber_sweep(const SimConfig& config, std::vector<FrameErrors>* per_frame,
                                     const std::function<void(const BERRecord&)>& progress) {
  config.validate();
  const SweepContext ctx(config);
  std::vector<BERRecord> records;
  if (per_frame) per_frame->clear();

  for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
    std::vector<FrameOutcome> outcomes(config.frames);
    std::atomic<long> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    auto worker = [&] {
      for (long f; (f = next.fetch_add(1)) < config.frames;) {
        try {
          outcomes[f] = ctx.run_frame(config.snr_db[s], frame_seed(config.seed, s, f));
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!error) error = std::current_exception();
          next = config.frames;
        }
      }
    };
    const int nthreads = std::min<long>(config.threads, config.frames);
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    FrameErrors fe;
    auto make = [&](const char* name, int band, auto errors_of, auto time_of) {
      BERRecord r;
      r.snr_db = config.snr_db[s];
      r.equalizer = name;
      r.band_width = band;
      r.frames = config.frames;
      r.bits = config.frames * ctx.bits_per_frame();
      for (const auto& o : outcomes) {
        r.bit_errors += errors_of(o);
        r.wall_time_s += time_of(o);
      }
      r.ber = double(r.bit_errors) / double(r.bits);
      r.seed = config.seed;
      records.push_back(r);
      if (progress) progress(r);
    };
    if (config.equalizer != EqualizerChoice::dd_dense) {
      make("fd_banded", ctx.band_width(), [](const FrameOutcome& o) { return o.fd_errors; },
           [](const FrameOutcome& o) { return o.fd_time; });
      for (const auto& o : outcomes) fe.fd_banded.push_back(o.fd_errors);
    }
    if (config.equalizer != EqualizerChoice::fd_banded) {
      make("dd_dense", 0, [](const FrameOutcome& o) { return o.dd_errors; },
           [](const FrameOutcome& o) { return o.dd_time; });
      for (const auto& o : outcomes) fe.dd_dense.push_back(o.dd_errors);
    }
    if (per_frame) per_frame->push_back(std::move(fe));
  }
  return records;
}

SimConfig parse_config(std::istream& in) {
  std::map<std::string, std::pair<std::string, int>> kv;
  static const char* known[] = {"M",       "N",       "nu_p",     "B",         "T",
                                "tau_max", "nu_max",  "alpha_g",  "beta_g",    "Q",
                                "channel", "snr_db",  "frames",   "equalizer", "band",
                                "seed",    "taps",    "out",      "threads",   "noiseless"};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key +
                               "'");
    if (value.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + ": empty value for '" +
                               key + "'");
    kv[key] = {value, lineno};
  }

  auto num = [&](const std::string& key) -> std::optional<double> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second.first, &pos);
      if (pos != it->second.first.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error("config line " + std::to_string(it->second.second) + ": '" + key +
                               "' is not a number");
    }
  };
  auto integer = [&](const std::string& key) -> std::optional<long long> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(it->second.first, &pos);
      if (pos != it->second.first.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error("config line " + std::to_string(it->second.second) + ": '" + key +
                               "' is not an integer");
    }
  };
  auto text = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second.first;
  };

  SimConfig cfg;
  FrameParams& p = cfg.params;
  const auto M = integer("M"), N = integer("N");
  if (M.has_value() != N.has_value())
    throw std::invalid_argument(std::string("config: '") + (M ? "N" : "M") +
                                "' is missing; M and N must be given together");
  if (M) {
    p.M = int(*M);
    p.N = int(*N);
  }
  if (p.M <= 0 || p.N <= 0) throw std::invalid_argument("config: M and N must be positive");
  const double mn = double(p.M) * double(p.N);
  const auto nu_p = num("nu_p"), B = num("B"), T = num("T");
  auto check_close = [](const char* what, double given, double derived) {
    if (std::abs(given - derived) > 5e-3 * std::abs(derived))
      throw std::invalid_argument(std::string("config: ") + what + " = " + fmt_double(given) +
                                  " is inconsistent with the derived value " +
                                  fmt_double(derived));
  };
  if (B) {
    p.B = *B;
    p.T = mn / p.B;
  } else if (T) {
    p.T = *T;
    p.B = mn / p.T;
  } else {
    p.B = p.M * nu_p.value_or(30e3);
    p.T = mn / p.B;
  }
  if (T) check_close("T", *T, p.T);
  if (nu_p) check_close("nu_p", *nu_p, p.B / p.M);
  if (auto v = num("tau_max")) p.tau_max = *v;
  if (auto v = num("nu_max")) p.nu_max = *v;
  if (auto v = num("alpha_g")) p.alpha_g = *v;
  if (auto v = num("beta_g")) p.beta_g = *v;
  if (auto v = integer("Q")) p.Q = int(*v);

  if (auto v = text("channel")) cfg.channel = *v;
  if (auto v = text("snr_db")) {
    cfg.snr_db.clear();
    for (const auto& item : split(*v, ',')) {
      try {
        cfg.snr_db.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw std::runtime_error("config line " + std::to_string(kv["snr_db"].second) +
                                 ": bad SNR value '" + item + "'");
      }
    }
  }
  if (auto v = integer("frames")) cfg.frames = long(*v);
  if (auto v = text("equalizer")) cfg.equalizer = parse_equalizer(*v);
  if (auto v = integer("band")) cfg.band = int(*v);
  if (auto v = text("seed")) {
    try {
      cfg.seed = std::stoull(*v);
    } catch (const std::exception&) {
      throw std::runtime_error("config line " + std::to_string(kv["seed"].second) +
                               ": seed must be an unsigned integer");
    }
  }
  if (auto v = text("taps")) cfg.taps = parse_taps(*v);
  if (auto v = text("out")) cfg.out = *v;
  if (auto v = integer("threads")) cfg.threads = int(*v);
  if (auto v = text("noiseless")) {
    if (*v == "true" || *v == "1")
      cfg.noiseless = true;
    else if (*v == "false" || *v == "0")
      cfg.noiseless = false;
    else
      throw std::runtime_error("config line " + std::to_string(kv["noiseless"].second) +
                               ": noiseless must be true or false");
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return parse_config(in);
}

void write_config(const SimConfig& c, std::ostream& out) {
  const FrameParams& p = c.params;
  out << "# resolved configuration; nu_p = " << fmt_double(p.B / p.M) << " Hz\n";
  out << "M = " << p.M << "\n";
  out << "N = " << p.N << "\n";
  out << "B = " << fmt_double(p.B) << "\n";
  out << "T = " << fmt_double(p.T) << "\n";
  out << "tau_max = " << fmt_double(p.tau_max) << "\n";
  out << "nu_max = " << fmt_double(p.nu_max) << "\n";
  out << "alpha_g = " << fmt_double(p.alpha_g) << "\n";
  out << "beta_g = " << fmt_double(p.beta_g) << "\n";
  out << "Q = " << p.Q << "\n";
  out << "channel = " << c.channel << "\n";
  out << "snr_db = ";
  for (std::size_t i = 0; i < c.snr_db.size(); ++i) out << (i ? "," : "") << fmt_double(c.snr_db[i]);
  out << "\n";
  out << "frames = " << c.frames << "\n";
  out << "equalizer = " << to_string(c.equalizer) << "\n";
  out << "band = " << c.band << "\n";
  out << "seed = " << c.seed << "\n";
  out << "taps = " << to_string(c.taps) << "\n";
  out << "out = " << c.out << "\n";
  out << "threads = " << c.threads << "\n";
  out << "noiseless = " << (c.noiseless ? "true" : "false") << "\n";
}

void save_config(const SimConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config '" + path + "'");
  write_config(config, out);
  if (!out) throw std::runtime_error("failed writing config '" + path + "'");
}

void write_results(const std::vector<BERRecord>& records, std::ostream& out) {
  out << kResultsHeader << "\n";
  for (const auto& r : records) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", r.wall_time_s);
    out << fmt_double(r.snr_db) << "," << r.equalizer << "," << r.band_width << "," << r.frames
        << "," << r.bits << "," << r.bit_errors << "," << fmt_double(r.ber) << "," << buf << ","
        << r.seed << "\n";
  }
}

void write_results(const std::vector<BERRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write results '" + path + "'");
  write_results(records, out);
  if (!out) throw std::runtime_error("failed writing results '" + path + "'");
}

std::vector<BERRecord> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kResultsHeader)
    throw std::runtime_error("results: missing or unexpected header");
  std::vector<BERRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9)
      throw std::runtime_error("results line " + std::to_string(lineno) + ": expected 9 fields");
    BERRecord r;
    r.snr_db = std::stod(f[0]);
    r.equalizer = f[1];
    r.band_width = std::stoi(f[2]);
    r.frames = std::stol(f[3]);
    r.bits = std::stol(f[4]);
    r.bit_errors = std::stol(f[5]);
    r.ber = std::stod(f[6]);
    r.wall_time_s = std::stod(f[7]);
    r.seed = std::stoull(f[8]);
    out.push_back(r);
  }
  return out;
}

void write_plot_data(const std::vector<BERRecord>& records, std::ostream& out) {
  out << "snr_db,ber_fd_banded,ber_dd_dense\n";
  std::vector<double> snrs;
  for (const auto& r : records)
    if (std::find(snrs.begin(), snrs.end(), r.snr_db) == snrs.end()) snrs.push_back(r.snr_db);
  for (double s : snrs) {
    std::string fd, dd;
    for (const auto& r : records) {
      if (r.snr_db != s) continue;
      if (r.equalizer == "fd_banded") fd = fmt_double(r.ber);
      if (r.equalizer == "dd_dense") dd = fmt_double(r.ber);
    }
    out << fmt_double(s) << "," << fd << "," << dd << "\n";
  }
}

void write_plot_data(const std::vector<BERRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write plot data '" + path + "'");
  write_plot_data(records, out);
}

}  // namespace zakotfs
